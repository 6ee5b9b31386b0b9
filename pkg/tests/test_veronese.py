"""Minor-coordinate model tests.

Oracles implemented here, independently of the package: a hand-expanded
4x4 Pfaffian, the Leibniz 2x2/3x3 determinants for Cauchy-Binet, and a
section-count rank computation for splitting types.
"""

import random
import time
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kq.errors import InternalConsistencyError, ValidationError
from kq.veronese import (
    EMPTY,
    NONEMPTY_RATIONAL,
    construct_point,
    dim_identity_check,
    emptiness,
    isotropic_block_rows,
    matrix_coordinates,
    matrix_from_piece,
    membership,
    nu,
    splitting_type,
    veronese_model,
)


def det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def det3(m):
    return sum(
        sign * m[0][a] * det2([[m[1][b], m[1][c]], [m[2][b], m[2][c]]])
        for sign, (a, (b, c)) in zip(
            [1, -1, 1], [(0, (1, 2)), (1, (0, 2)), (2, (0, 1))]
        )
    )


def pfaffian4(m):
    # the three perfect matchings of {0,1,2,3}
    return m[0][1] * m[2][3] - m[0][2] * m[1][3] + m[0][3] * m[1][2]


def random_matrix(model, rng, span=4):
    size = model.matrix_size
    x = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if model.a == 1 and i <= j:
                x[i][j] = x[j][i] = rng.randint(-span, span)
            elif model.a == 4 and i < j:
                v = rng.randint(-span, span)
                x[i][j] = v
                x[j][i] = -v
            elif model.a == 2:
                x[i][j] = rng.randint(-span, span)
    return x


# ---------------------------------------------------------------------------
# model shapes and validation


def test_model_validation():
    assert veronese_model(2, 3).matrix_size == 3
    assert veronese_model(4, 3).matrix_size == 6
    with pytest.raises(ValidationError):
        veronese_model(8, 3)
    with pytest.raises(ValidationError):
        veronese_model(3, 3)
    with pytest.raises(ValidationError):
        veronese_model(2, 1)


def test_piece_dimensions():
    m = veronese_model(2, 4)
    assert [m.piece_dim(i) for i in range(5)] == [1, 16, 36, 16, 1]
    m = veronese_model(1, 4)
    assert [m.piece_dim(i) for i in range(5)] == [1, 10, 21, 10, 1]
    m = veronese_model(4, 3)
    assert [m.piece_dim(i) for i in range(4)] == [1, 15, 15, 1]


def test_shape_mismatch_rejected():
    m = veronese_model(1, 3)
    with pytest.raises(ValidationError):
        nu(m, 2, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    m4 = veronese_model(4, 2)
    with pytest.raises(ValidationError):
        nu(m4, 2, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    with pytest.raises(ValidationError):
        nu(veronese_model(2, 3), 4, [[0] * 3] * 3)


# ---------------------------------------------------------------------------
# the minor maps against independent expansions


def test_nu2_identity_matrix():
    m = veronese_model(2, 3)
    vals = nu(m, 2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    subsets = list(combinations(range(3), 2))
    labels = [(r, c) for r in subsets for c in subsets]
    for (r, c), val in zip(labels, vals):
        assert val == (1 if r == c else 0)


def test_nu_top_is_determinant():
    rng = random.Random(11)
    m = veronese_model(2, 3)
    for _ in range(25):
        x = random_matrix(m, rng)
        assert nu(m, 3, x) == (det3(x),)


def test_nu_against_leibniz_minors():
    rng = random.Random(12)
    m = veronese_model(2, 3)
    subsets = list(combinations(range(3), 2))
    for _ in range(25):
        x = random_matrix(m, rng)
        vals = dict(zip([(r, c) for r in subsets for c in subsets], nu(m, 2, x)))
        for r in subsets:
            for c in subsets:
                sub = [[x[i][j] for j in c] for i in r]
                assert vals[(r, c)] == det2(sub)


def test_pfaffian_against_matching_expansion():
    rng = random.Random(13)
    m = veronese_model(4, 2)
    for _ in range(25):
        x = random_matrix(m, rng)
        assert nu(m, 2, x) == (pfaffian4(x),)


def test_pfaffian_square_is_determinant():
    # independent cross-check on 6x6: pf(A)^2 = det(A)
    rng = random.Random(14)
    m = veronese_model(4, 3)
    for _ in range(10):
        x = random_matrix(m, rng, span=3)
        pf = nu(m, 3, x)[0]
        from kq.veronese import _det

        assert pf * pf == _det(x)


def test_pfaffian_symplectic_form():
    m = veronese_model(4, 3)
    J = [[0] * 6 for _ in range(6)]
    for i in range(3):
        J[2 * i][2 * i + 1] = 1
        J[2 * i + 1][2 * i] = -1
    assert nu(m, 3, J) == (1,)


def test_cauchy_binet_equivariance():
    # nu_2(A x B) = action of the 2x2 minors of A and B on nu_2(x)
    rng = random.Random(15)
    m = veronese_model(2, 3)
    subsets = list(combinations(range(3), 2))
    for _ in range(8):
        x = random_matrix(m, rng, span=3)
        a = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        b = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        axb = [
            [
                sum(a[i][k] * x[k][l] * b[l][j] for k in range(3) for l in range(3))
                for j in range(3)
            ]
            for i in range(3)
        ]
        lhs = dict(
            zip([(r, c) for r in subsets for c in subsets], nu(m, 2, axb))
        )
        minors_x = dict(
            zip([(r, c) for r in subsets for c in subsets], nu(m, 2, x))
        )
        for r in subsets:
            for c in subsets:
                total = Fraction(0)
                for rp in subsets:
                    for cp in subsets:
                        da = det2([[a[i][j] for j in rp] for i in r])
                        db = det2([[b[i][j] for j in c] for i in cp])
                        total += da * minors_x[(rp, cp)] * db
                assert lhs[(r, c)] == total


@given(st.integers(-5, 5), st.integers(1, 4))
@settings(max_examples=30, deadline=None)
def test_nu_homogeneity(seed, lam):
    rng = random.Random(seed)
    model = veronese_model(rng.choice([1, 2, 4]), rng.choice([2, 3]))
    x = random_matrix(model, rng)
    xl = [[lam * v for v in row] for row in x]
    for i in range(2, model.n + 1):
        scale = Fraction(lam) ** i
        assert nu(model, i, xl) == tuple(scale * v for v in nu(model, i, x))


# ---------------------------------------------------------------------------
# membership


def test_membership_zero_point():
    for a, n in [(1, 3), (2, 3), (4, 2), (2, 4)]:
        m = veronese_model(a, n)
        v = [(1,)] + [tuple([0] * m.piece_dim(i)) for i in range(1, n + 1)]
        assert membership(m, v)


def test_membership_constructed_and_perturbed():
    rng = random.Random(16)
    for a, n in [(1, 3), (2, 3), (4, 2), (4, 3), (2, 4), (1, 4)]:
        m = veronese_model(a, n)
        for _ in range(10):
            x = random_matrix(m, rng)
            v = construct_point(m, x)
            assert membership(m, v)
            pieces = [list(p) for p in v]
            i = rng.randrange(2, n + 1)
            j = rng.randrange(len(pieces[i]))
            pieces[i][j] += rng.choice([1, -1, 2, Fraction(1, 3)])
            assert not membership(m, pieces)


def test_membership_chart_error():
    m = veronese_model(2, 3)
    v = [list(p) for p in construct_point(m, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])]
    v[0] = [2]
    with pytest.raises(ValidationError):
        membership(m, v)
    with pytest.raises(ValidationError):
        membership(m, v[:-1])


def test_membership_scaling_invariance():
    # rescaling the level-i piece by lam^i is the same as rescaling the
    # matrix by lam, so membership is preserved
    rng = random.Random(17)
    m = veronese_model(2, 3)
    for lam in (2, -1, Fraction(1, 2), 5):
        x = random_matrix(m, rng)
        v = construct_point(m, x)
        scaled = [(1,)] + [
            tuple(Fraction(lam) ** i * c for c in piece)
            for i, piece in enumerate(v[1:], start=1)
        ]
        assert membership(m, scaled)
        xl = [[lam * c for c in row] for row in x]
        assert scaled[1:] == list(construct_point(m, xl)[1:])


def test_matrix_coordinate_roundtrip():
    rng = random.Random(18)
    for a, n in [(1, 3), (2, 3), (4, 3)]:
        m = veronese_model(a, n)
        x = random_matrix(m, rng)
        coords = matrix_coordinates(m, x)
        assert m.piece_dim(1) == len(coords)
        rebuilt = matrix_from_piece(m, coords)
        assert [[Fraction(v) for v in row] for row in x] == rebuilt


# ---------------------------------------------------------------------------
# dimension identity and emptiness


def test_dim_identity_examples():
    assert dim_identity_check(2, 3, 3)
    assert dim_identity_check(1, 4, 7)
    assert dim_identity_check(4, 5, 5)


def test_dim_identity_full_grid_under_a_second():
    start = time.monotonic()
    cases = 0
    for a in range(1, 9):
        for n in range(2, 13):
            for d in range(n, 21):
                assert dim_identity_check(a, n, d), (a, n, d)
                cases += 1
    elapsed = time.monotonic() - start
    assert cases >= 1000
    assert elapsed < 1.0, f"grid took {elapsed:.2f}s"


def test_emptiness_threshold():
    assert emptiness(2, 4, 3) == EMPTY
    assert emptiness(2, 4, 4) == NONEMPTY_RATIONAL
    for a in (1, 2, 4):
        assert emptiness(a, 2, 2) == NONEMPTY_RATIONAL
        assert emptiness(a, 2, 1) == EMPTY


# ---------------------------------------------------------------------------
# splitting types


def oracle_rank(vectors):
    """Row rank over the rationals; oracle, fraction Gaussian elimination."""
    m = [[Fraction(c) for c in v] for v in vectors]
    rank = 0
    width = len(m[0]) if m else 0
    row = 0
    for col in range(width):
        piv = next((r for r in range(row, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        for r in range(row + 1, len(m)):
            if m[r][col]:
                f = m[r][col] / m[row][col]
                for c in range(col, width):
                    m[r][c] -= f * m[row][c]
        rank += 1
        row += 1
    return rank


def oracle_section_counts(rows, degrees, top):
    """h(m) for the span of monomial multiples, independent of the engine."""
    counts = {}
    for m in range(top + 1):
        vectors = []
        for row, e in zip(rows, degrees):
            for shift in range(m - e + 1):
                vec = []
                for form in row:
                    padded = [0] * (m + 1)
                    for k, c in enumerate(form):
                        padded[shift + k] = c
                    vec.extend(padded)
                vectors.append(vec)
        counts[m] = oracle_rank(vectors) if vectors else 0
    return counts


def test_splitting_line():
    assert splitting_type([[(1, 0), (0, 1)]]) == (-1,)


def test_splitting_twisted_cubic_with_section_oracle():
    row = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    assert splitting_type([row]) == (-3,)
    # oracle: h(m) must equal h^0(O(m-3)) = max(0, m - 2)
    counts = oracle_section_counts([row], [3], 5)
    assert counts == {0: 0, 1: 0, 2: 0, 3: 1, 4: 2, 5: 3}


def test_splitting_block_construction_gq48():
    rows = isotropic_block_rows(4, 1)
    assert len(rows) == 4 and len(rows[0]) == 8
    assert sorted(splitting_type(rows)) == [-2, -2, -1, -1]


def test_block_rows_isotropy_oracle():
    # per-quartet form x0*x3 - x1*x2; all polar pairings must vanish
    rows = isotropic_block_rows(4, 1)

    def mul(f, g):
        out = [Fraction(0)] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            for j, b in enumerate(g):
                out[i + j] += a * b
        return out

    for u in rows:
        for v in rows:
            total = [Fraction(0)] * 8
            for q in range(2):
                i = 4 * q
                for a, b, s in ((i, i + 3, 1), (i + 3, i, 1), (i + 1, i + 2, -1), (i + 2, i + 1, -1)):
                    term = mul(u[a], v[b])
                    for k, c in enumerate(term):
                        total[k] += s * c
            assert all(c == 0 for c in total)


def test_block_rows_shape_and_degrees():
    rows = isotropic_block_rows(4, 1)
    degs = sorted(len(next(f for f in row if any(f))) - 1 for row in rows)
    assert degs == [1, 1, 2, 2]
    rows6 = isotropic_block_rows(6, 2)
    assert len(rows6) == 6 and len(rows6[0]) == 12
    assert sorted(splitting_type(rows6)) == [-2, -2, -1, -1, -1, -1]
    with pytest.raises(ValidationError):
        isotropic_block_rows(5, 1)


def test_splitting_rejects_rank_drop():
    with pytest.raises(ValidationError):
        splitting_type([[(1, 0), (0, 0)], [(0, 0), (1, 0)]])
    with pytest.raises(ValidationError):
        splitting_type([[(1, 0), (0, 1)], [(2, 0), (0, 2)]])
    with pytest.raises(ValidationError):
        splitting_type([[(0, 0), (0, 0)]])


def test_splitting_determinant_degree_additivity():
    # block-diagonal rows (s^e, t^e) are saturated with known type
    rng = random.Random(19)
    for _ in range(15):
        k = rng.randint(1, 4)
        degrees = [rng.randint(0, 4) for _ in range(k)]
        rows = []
        for r, e in enumerate(degrees):
            s_pow = tuple([1] + [0] * e)
            t_pow = tuple([0] * e + [1])
            zero = (0,) * (e + 1)
            row = [zero] * (2 * k)
            row[2 * r] = s_pow
            row[2 * r + 1] = t_pow
            rows.append(row)
        out = splitting_type(rows)
        assert list(out) == sorted(-e for e in degrees)
        assert sum(out) == -sum(degrees)


def test_splitting_mixed_degree_rows():
    # degree-1 and degree-2 rows sharing columns but independent everywhere
    rows = [
        [(1, 0), (0, 1), (0, 0)],
        [(0, 0, 0), (1, 0, 0), (0, 0, 1)],
    ]
    assert splitting_type(rows) == (-2, -1)
