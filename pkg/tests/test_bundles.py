"""Open-cell fibration data tests.

Expected ranks, first Chern classes and base types below were fixed from
independent Lie-theory bookkeeping (dimension counts, lambda^2 Chern class
arithmetic, half-spin dimensions), not read back from the code.
"""

from fractions import Fraction

import pytest

from kq.bundles import (
    adjoint_tower_data,
    classify_subsystem,
    degree_pairing,
    doubled_degree_multiset,
    e6_p4_cell_data,
    fibration_data,
    h1_twist_vanishes,
    reflect,
    spinor_degree_multiset,
    spinor_fiber_weights,
    weyl_involution,
)
from kq.errors import ValidationError
from kq.roots import root_system


def test_weyl_involution_tables():
    assert weyl_involution("A", 4) == (3, 2, 1, 0)
    assert weyl_involution("D", 5) == (0, 1, 2, 4, 3)
    assert weyl_involution("D", 4) == (0, 1, 2, 3)
    assert weyl_involution("E", 6) == (5, 1, 4, 3, 2, 0)
    assert weyl_involution("E", 7) == tuple(range(7))
    assert weyl_involution("B", 3) == (0, 1, 2)
    assert weyl_involution("C", 4) == (0, 1, 2, 3)


def test_weyl_involution_is_diagram_automorphism():
    for letter, rank in [("A", 5), ("D", 6), ("E", 6), ("E", 7)]:
        rs = root_system(letter, rank)
        inv = weyl_involution(letter, rank)
        for i in range(rank):
            for j in range(rank):
                assert rs.cartan[i][j] == rs.cartan[inv[i]][inv[j]]


def test_fibration_refuses_non_cominuscule_q():
    with pytest.raises(ValidationError):
        fibration_data("E", 6, (0,), 1)
    with pytest.raises(ValidationError):
        fibration_data("D", 5, (4,), 1)
    with pytest.raises(ValidationError):
        fibration_data("B", 3, (0,), 2)


def test_cayley_plane_spinor_cell():
    fd = fibration_data("E", 6, (0,), 0)
    assert fd.codim_two
    assert fd.x_dim == 16
    assert fd.y_dim == 8
    assert fd.e_rank == 8
    assert fd.y_marked == (0,)
    assert fd.c1 == (4,)
    ((letter, rank, nodes),) = fd.y_components
    assert (letter, rank) == ("D", 5)
    assert sorted(nodes) == [0, 1, 2, 3, 4]
    # the base is marked at the vector node: an 8-dimensional quadric
    assert fd.y_dim == 8


def test_cayley_plane_degrees_are_all_one():
    # conic direction: theta_sub + alpha1 as a coroot; every fibre weight
    # pairs to -1, so every line summand has degree +1
    rs = root_system("E", 6)
    fd = fibration_data("E", 6, (0,), 0)
    sub = [r for r in rs.positive_roots if not r[5]]
    theta_sub = max(sub, key=sum)
    assert theta_sub == (1, 1, 2, 2, 1, 0)
    h = [a + b for a, b in zip(rs.coroot_coords(theta_sub), (1, 0, 0, 0, 0, 0))]
    weights = [rs.root_to_weight(w) for w in fd.e_weights]
    assert degree_pairing(rs, weights, h) == (-1,) * 8


def test_isotropic_grassmannian_second_exterior_family():
    # X = one family of maximal isotropics in dim 2n; base P^{n-1}; the
    # bundle is Lambda^2 of T(-1), so rank (n-1)(n-2)/2 and c1 = n-2
    for n, q in [(4, 2), (5, 4), (6, 4)]:
        fd = fibration_data("D", n, (n - 1,), q)
        assert fd.e_rank == (n - 1) * (n - 2) // 2
        assert fd.c1 == (n - 2,)
        ((letter, rank, _),) = fd.y_components
        assert (letter, rank) == ("A", n - 1)
        assert fd.y_marked == (n - 1,)
        assert fd.y_dim == n - 1


def test_orthogonal_tautological_quotient_cases():
    # OG(p, N): base OG(p-1, N-2), bundle of rank N - p - 1 with c1 = 1
    fd = fibration_data("D", 5, (2,), 0)
    assert fd.e_rank == 10 - 3 - 1
    assert fd.c1 == (1,)
    assert fd.y_marked == (2,)
    ((letter, rank, nodes),) = fd.y_components
    assert (letter, rank) == ("D", 4)
    assert sorted(nodes) == [1, 2, 3, 4]

    fd = fibration_data("B", 4, (1,), 0)
    assert fd.e_rank == 9 - 2 - 1
    assert fd.c1 == (1,)
    ((letter, rank, nodes),) = fd.y_components
    assert (letter, rank) == ("B", 3)
    assert sorted(nodes) == [1, 2, 3]


def test_codim_two_flag_and_degenerate_base():
    fd = fibration_data("E", 6, (5,), 0)
    assert not fd.codim_two
    assert fd.y_marked == ()
    assert fd.y_dim == 0
    assert fd.e_rank == fd.x_dim == 16
    assert fd.c1 == ()


def test_fibration_weight_bookkeeping():
    cases = [
        ("E", 6, (0,), 0),
        ("D", 5, (4,), 4),
        ("D", 6, (5,), 4),
        ("D", 5, (2,), 0),
        ("B", 4, (1,), 0),
        ("A", 4, (1,), 0),
        ("C", 3, (2,), 2),
    ]
    for letter, rank, p, q in cases:
        rs = root_system(letter, rank)
        fd = fibration_data(letter, rank, p, q)
        assert fd.e_rank == len(fd.e_weights) == fd.x_dim - fd.y_dim
        # fibre weights are negative roots of G
        for w in fd.e_weights:
            assert all(c <= 0 for c in w) and any(c < 0 for c in w)
        # determinant weight: central on unmarked base nodes, and the
        # pairing route to c1 agrees with the stored value
        for pos, j in enumerate(fd.y_marked):
            unit = tuple(1 if t == j else 0 for t in range(rank))
            weights = [rs.root_to_weight(w) for w in fd.e_weights]
            assert -sum(degree_pairing(rs, weights, unit)) == fd.c1[pos]
        for j in fd.y_nodes:
            if j not in fd.y_marked:
                unit = tuple(1 if t == j else 0 for t in range(rank))
                weights = [rs.root_to_weight(w) for w in fd.e_weights]
                assert sum(degree_pairing(rs, weights, unit)) == 0


def test_spinor_fiber_weights_shape():
    for delta in (2, 3, 4, 5):
        for parity in (0, 1):
            ws = spinor_fiber_weights(delta, parity)
            assert len(ws) == 2 ** (delta - 1)
            assert len(set(ws)) == len(ws)
            for w in ws:
                assert w[0] == Fraction(-1, 2)
                assert all(abs(c) == Fraction(1, 2) for c in w)
                minus = sum(1 for c in w if c < 0)
                assert minus % 2 == parity % 2
    # the two parity classes are disjoint halves
    even = set(spinor_fiber_weights(4, 0))
    odd = set(spinor_fiber_weights(4, 1))
    assert not even & odd


def test_spinor_degree_multisets():
    assert spinor_degree_multiset(5) == (1,) * 16
    assert spinor_degree_multiset(5, parity=1) == (1,) * 16
    assert spinor_degree_multiset(4) == (1,) * 8
    assert spinor_degree_multiset(3) == (1,) * 4
    assert doubled_degree_multiset(5) == (2,) * 16


def test_h1_vanishing_discharge():
    # degree-2 summands twisted by -3 sit at O(-1): no first cohomology
    assert h1_twist_vanishes(doubled_degree_multiset(5), -3)
    # degree-1 summands twisted by -3 do not
    assert not h1_twist_vanishes(spinor_degree_multiset(5), -3)
    assert h1_twist_vanishes(spinor_degree_multiset(5), -2)


def test_e6_p4_cell_values():
    cell = e6_p4_cell_data()
    # display words are 1-indexed like the root labels in the output
    assert cell.w_word == (1, 3, 4, 5, 6, 2)
    assert cell.conjugator_word == (1, 3, 4)
    assert cell.levi_types == (("A", 1), ("A", 2), ("A", 2))
    assert cell.quotient_factor_dims == (2, 0, 1)
    assert sum(cell.quotient_factor_dims) == 3
    assert cell.bundle_roots_display == (
        (0, 0, 1, 0, 0, 0),
        (0, 1, 1, 0, 0, 0),
        (1, 1, 1, 0, 0, 0),
    )
    assert cell.bundle_bidegrees == ((1, 1), (1, 1), (1, 1))


def test_adjoint_tower_e6():
    td = adjoint_tower_data("E6")
    assert td.adjoint_node == 1
    assert td.q_node == 0
    assert td.steps == 1
    assert (td.y_dim, td.x_dim) == (10, 21)
    ((name, rank, c1, weights),) = td.bundles
    assert (name, rank, c1) == ("E", 11, 3)
    assert len(weights) == 11
    assert rank == td.y_dim + 1
    ((letter, rk, _),) = td.y_components
    assert (letter, rk) == ("D", 5)
    assert td.y_marked == (1,)


def test_adjoint_tower_e7():
    td = adjoint_tower_data("E7")
    assert td.adjoint_node == 0
    assert td.q_node == 6
    assert td.steps == 1
    assert (td.y_dim, td.x_dim) == (16, 33)
    ((name, rank, c1, _),) = td.bundles
    assert (name, rank, c1) == ("E", 17, 5)
    assert rank == td.y_dim + 1
    ((letter, rk, _),) = td.y_components
    assert (letter, rk) == ("E", 6)
    assert td.y_marked == (0,)


def test_adjoint_tower_e8():
    td = adjoint_tower_data("E8")
    assert td.adjoint_node == 7
    assert td.q_node == 0
    assert td.steps == 2
    assert (td.y_dim, td.x_dim) == (12, 57)
    (e, f) = td.bundles
    assert (e[0], e[1], e[2]) == ("E", 32, 16)
    assert (f[0], f[1], f[2]) == ("F", 13, 1)
    assert e[1] + f[1] == td.x_dim - td.y_dim
    ((letter, rk, _),) = td.y_components
    assert (letter, rk) == ("D", 7)
    assert td.y_marked == (7,)


def test_adjoint_tower_f4():
    td = adjoint_tower_data("F4")
    assert td.adjoint_node == 0
    assert td.q_node == 3
    assert td.steps == 2
    assert (td.y_dim, td.x_dim) == (5, 15)
    (e, f) = td.bundles
    assert (e[0], e[1], e[2]) == ("E", 4, 2)
    assert (f[0], f[1], f[2]) == ("F", 6, 1)
    ((letter, rk, _),) = td.y_components
    assert (letter, rk) == ("B", 3)
    assert td.y_marked == (0,)


def test_adjoint_tower_input_validation():
    with pytest.raises(ValidationError):
        adjoint_tower_data("G2")
    with pytest.raises(ValidationError):
        adjoint_tower_data("A3")


def test_classify_subsystem_on_full_systems():
    for letter, rank in [("A", 2), ("A", 3), ("B", 2), ("D", 4), ("G", 2)]:
        rs = root_system(letter, rank)
        roots = list(rs.positive_roots) + [
            tuple(-c for c in r) for r in rs.positive_roots
        ]
        out = classify_subsystem(rs, roots)
        if (letter, rank) == ("A", 3):
            # A3 and D3 carry the same root count; either name is the
            # same system
            assert out in ([("A", 3)], [("D", 3)])
        else:
            assert out == [(letter, rank)]


def test_reflect_simple_root():
    rs = root_system("A", 2)
    alpha0 = (1, 0)
    w = rs.root_to_weight(alpha0)
    assert reflect(rs, w, alpha0) == tuple(-c for c in w)
