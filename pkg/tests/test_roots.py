"""Root system tests.

The determinant oracle below is implemented here, independently of the
package (Bareiss integer elimination), so Cartan matrices are checked
against values that do not come from the code under test.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kq.roots import RootSystem, cartan_matrix, root_system

SYSTEMS = [
    ("A", 1), ("A", 2), ("A", 3), ("A", 4), ("A", 5),
    ("B", 2), ("B", 3), ("B", 4),
    ("C", 2), ("C", 3), ("C", 4),
    ("D", 3), ("D", 4), ("D", 5), ("D", 6),
    ("E", 6), ("E", 7), ("E", 8),
    ("F", 4), ("G", 2),
]


def bareiss_det(rows):
    """Integer determinant by Bareiss elimination; oracle only."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                assert num % prev == 0
                m[i][j] = num // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# det of the Cartan matrix equals the index of the root lattice in the
# weight lattice
CARTAN_DETS = {
    ("A", 1): 2, ("A", 2): 3, ("A", 3): 4, ("A", 4): 5, ("A", 5): 6,
    ("B", 2): 2, ("B", 3): 2, ("B", 4): 2,
    ("C", 2): 2, ("C", 3): 2, ("C", 4): 2,
    ("D", 3): 4, ("D", 4): 4, ("D", 5): 4, ("D", 6): 4,
    ("E", 6): 3, ("E", 7): 2, ("E", 8): 1,
    ("F", 4): 1, ("G", 2): 1,
}

POSITIVE_COUNTS = {
    ("A", 1): 1, ("A", 2): 3, ("A", 3): 6, ("A", 4): 10, ("A", 5): 15,
    ("B", 2): 4, ("B", 3): 9, ("B", 4): 16,
    ("C", 2): 4, ("C", 3): 9, ("C", 4): 16,
    ("D", 3): 6, ("D", 4): 12, ("D", 5): 20, ("D", 6): 30,
    ("E", 6): 36, ("E", 7): 63, ("E", 8): 120,
    ("F", 4): 24, ("G", 2): 6,
}


@pytest.mark.parametrize("letter,rank", SYSTEMS)
def test_cartan_determinant_against_bareiss_oracle(letter, rank):
    det = bareiss_det(cartan_matrix(letter, rank))
    assert det == CARTAN_DETS[(letter, rank)]


def test_hand_frozen_cartan_matrices():
    assert cartan_matrix("A", 2) == ((2, -1), (-1, 2))
    assert cartan_matrix("B", 2) == ((2, -2), (-1, 2))
    assert cartan_matrix("C", 2) == ((2, -1), (-2, 2))
    assert cartan_matrix("G", 2) == ((2, -1), (-3, 2))
    assert cartan_matrix("F", 4) == (
        (2, -1, 0, 0),
        (-1, 2, -2, 0),
        (0, -1, 2, -1),
        (0, 0, -1, 2),
    )
    # Bourbaki E6: chain 1-3-4-5-6 with node 2 hanging off node 4
    c6 = cartan_matrix("E", 6)
    bonds = {(i, j) for i in range(6) for j in range(6) if i < j and c6[i][j] != 0}
    assert bonds == {(0, 2), (1, 3), (2, 3), (3, 4), (4, 5)}


@pytest.mark.parametrize("letter,rank", SYSTEMS)
def test_positive_root_count(letter, rank):
    assert len(root_system(letter, rank).positive_roots) == POSITIVE_COUNTS[(letter, rank)]


def test_highest_roots():
    assert root_system("D", 4).highest_root == (1, 2, 1, 1)
    assert root_system("E", 6).highest_root == (1, 2, 2, 3, 2, 1)
    assert root_system("G", 2).highest_root == (3, 2)
    assert root_system("F", 4).highest_root == (2, 3, 4, 2)
    assert root_system("C", 3).highest_root == (2, 2, 1)
    assert root_system("B", 3).highest_root == (1, 2, 2)


def test_cominuscule_nodes():
    assert root_system("A", 4).cominuscule_nodes == frozenset({0, 1, 2, 3})
    assert root_system("B", 3).cominuscule_nodes == frozenset({0})
    assert root_system("C", 3).cominuscule_nodes == frozenset({2})
    assert root_system("D", 5).cominuscule_nodes == frozenset({0, 3, 4})
    assert root_system("E", 6).cominuscule_nodes == frozenset({0, 5})
    assert root_system("E", 7).cominuscule_nodes == frozenset({6})
    assert root_system("E", 8).cominuscule_nodes == frozenset()
    assert root_system("F", 4).cominuscule_nodes == frozenset()
    assert root_system("G", 2).cominuscule_nodes == frozenset()


@pytest.mark.parametrize("letter,rank", SYSTEMS)
def test_fundamental_weights_dual_to_coroots_via_eps(letter, rank):
    # route 1: by construction in weight coordinates, <w_i, a_j.> = delta_ij;
    # route 2: realise w_i in epsilon space and pair with the coroot there
    rs = root_system(letter, rank)
    for i in range(rank):
        unit = tuple(1 if j == i else 0 for j in range(rank))
        vec = rs.eps_of_weight(unit)
        back = rs.weight_coords_of_eps(vec)
        assert tuple(back) == tuple(Fraction(x) for x in unit)


@pytest.mark.parametrize("letter,rank", SYSTEMS)
def test_coroot_pairing_is_two(letter, rank):
    rs = root_system(letter, rank)
    for root in rs.positive_roots:
        coroot = rs.coroot_coords(root)
        assert rs.pairing(rs.root_to_weight(root), coroot) == 2
        # eps route must agree
        assert rs.pairing_eps(rs.eps_of_root(root), coroot) == 2


@pytest.mark.parametrize("letter,rank", SYSTEMS)
def test_weight_sign_matches_root_sign(letter, rank):
    rs = root_system(letter, rank)
    for root in rs.positive_roots:
        m = rs.root_to_weight(root)
        assert rs.weight_sign(m) == 1
        assert rs.weight_sign(tuple(-x for x in m)) == -1
        assert rs.is_root_weight(m)


def test_d_type_theta_coroot_plus_alpha1_kills_alpha2():
    # <alpha_2, theta^vee + alpha_1^vee> = 0 in every D_n
    for n in (4, 5, 6):
        rs = root_system("D", n)
        theta_vee = rs.coroot_coords(rs.highest_root)
        h = tuple(a + b for a, b in zip(theta_vee, (1,) + (0,) * (n - 1)))
        assert rs.pairing(rs.simple_root_weight(1), h) == 0
        assert rs.pairing(rs.simple_root_weight(0), h) == 2


def test_d6_cocharacter_coordinates():
    rs = root_system("D", 6)
    theta_vee = rs.coroot_coords(rs.highest_root)
    assert theta_vee == (1, 2, 2, 2, 1, 1)
    h = (2, 2, 2, 2, 1, 1)
    assert tuple(a + b for a, b in zip(theta_vee, (1, 0, 0, 0, 0, 0))) == h
    # in epsilon coordinates h acts as 2*eps_1
    two_eps1 = (Fraction(2),) + (Fraction(0),) * 5
    for i in range(6):
        unit = tuple(1 if j == i else 0 for j in range(6))
        assert rs.pairing(unit, h) == rs.pairing_eps(rs.eps_of_weight(unit), h)
    assert rs.pairing_eps(two_eps1, rs.coroot_coords((1, 0, 0, 0, 0, 0))) == 2


def test_identify_components_frozen_cases():
    e6 = root_system("E", 6)
    # dropping the last node of E6 leaves a D5 diagram
    [(letter, rank, order)] = e6.identify_components([0, 1, 2, 3, 4])
    assert (letter, rank) == ("D", 5)
    target = cartan_matrix("D", 5)
    for a in range(5):
        for b in range(5):
            assert e6.cartan[order[a]][order[b]] == target[a][b]
    # dropping node 2 leaves the A5 chain 1-3-4-5-6
    [(letter, rank, order)] = e6.identify_components([0, 2, 3, 4, 5])
    assert (letter, rank) == ("A", 5)
    assert order in ((0, 2, 3, 4, 5), (5, 4, 3, 2, 0))

    f4 = root_system("F", 4)
    assert f4.identify_components([0, 1, 2])[0][:2] == ("B", 3)
    assert f4.identify_components([1, 2, 3])[0][:2] == ("C", 3)

    d4 = root_system("D", 4)
    comps = d4.identify_components([0, 2, 3])
    assert [(c[0], c[1]) for c in comps] == [("A", 1)] * 3

    # a simply-laced 3-chain is reported as A3 even when it sits inside D4
    [(letter, rank, _)] = d4.identify_components([0, 1, 2])
    assert (letter, rank) == ("A", 3)

    b4 = root_system("B", 4)
    [(letter, rank, order)] = b4.identify_components([2, 3])
    assert (letter, rank) == ("B", 2)
    assert order == (2, 3)  # short root last


def test_levi_and_complement_partition_positive_roots():
    rs = root_system("D", 5)
    for marked, dim in (({4}, 10), ({0}, 8)):
        levi = set(range(5)) - marked
        inside = rs.levi_positive_roots(levi)
        outside = rs.positive_complement(marked)
        assert set(inside) | set(outside) == set(rs.positive_roots)
        assert not set(inside) & set(outside)
        # crossing out the last node gives the 10-dim spinor variety,
        # crossing out the first gives the 8-dim quadric
        assert len(outside) == dim


def test_invalid_types_rejected():
    for letter, rank in (("A", 0), ("B", 1), ("D", 2), ("E", 9), ("F", 5),
                         ("G", 3), ("H", 4)):
        with pytest.raises(ValueError):
            root_system(letter, rank)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SYSTEMS), st.data())
def test_cartan_shape_properties(system, data):
    letter, rank = system
    rs = root_system(letter, rank)
    i = data.draw(st.integers(0, rank - 1))
    j = data.draw(st.integers(0, rank - 1))
    c = rs.cartan
    if i == j:
        assert c[i][j] == 2
    else:
        assert c[i][j] <= 0
        assert (c[i][j] == 0) == (c[j][i] == 0)
        assert c[i][j] * c[j][i] in (0, 1, 2, 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SYSTEMS), st.data())
def test_reflection_preserves_root_set(system, data):
    letter, rank = system
    rs = root_system(letter, rank)
    root = data.draw(st.sampled_from(rs.positive_roots))
    j = data.draw(st.integers(0, rank - 1))
    image = rs._reflect_root(root, j)
    assert rs.is_root_weight(rs.root_to_weight(image))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SYSTEMS))
def test_height_vector_is_sum_of_coweights(system):
    letter, rank = system
    rs = root_system(letter, rank)
    total = [Fraction(0)] * rank
    for i in range(rank):
        for k, x in enumerate(rs.fundamental_coweight(i)):
            total[k] += x
    ratios = {Fraction(h) / t for h, t in zip(rs.height_vector, total)}
    assert len(ratios) == 1
    assert ratios.pop() > 0
