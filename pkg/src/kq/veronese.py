"""Determinantal models of the minor-coordinate embeddings and exact
splitting types of row-span subsheaves on the projective line.

The model X(a, n) lives in a graded vector space with pieces indexed by
i = 0..n: the piece at level i collects the degree-i minor coordinates of a
matrix x (symmetric n x n for a = 1, general n x n for a = 2, antisymmetric
2n x 2n with Pfaffian coordinates for a = 4).  A point on the affine chart
where the level-0 coordinate is 1 lies on the model exactly when every
higher piece equals the corresponding minor map applied to the level-1
piece.  Everything is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import InternalConsistencyError, ValidationError


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def _det(rows) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination, exact."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in row] for row in rows]
    sign = 1
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return sign * det


def _pfaffian(m, idx, cache) -> Fraction:
    """Pfaffian of the principal submatrix on idx, by first-row expansion."""
    if not idx:
        return Fraction(1)
    if idx in cache:
        return cache[idx]
    first = idx[0]
    rest = idx[1:]
    total = Fraction(0)
    for pos, j in enumerate(rest):
        a = m[first][j]
        if a:
            sub = rest[:pos] + rest[pos + 1:]
            total += (-1) ** pos * a * _pfaffian(m, sub, cache)
    cache[idx] = total
    return total


# ---------------------------------------------------------------------------
# the graded models


@dataclass(frozen=True)
class VeroneseModel:
    a: int
    n: int

    @property
    def matrix_size(self) -> int:
        return 2 * self.n if self.a == 4 else self.n

    def piece_dim(self, i: int) -> int:
        if not 0 <= i <= self.n:
            raise ValidationError("graded piece index out of range")
        if self.a == 2:
            return comb(self.n, i) ** 2
        if self.a == 1:
            t = comb(self.n, i)
            return t * (t + 1) // 2
        return comb(2 * self.n, 2 * i)


def veronese_model(a: int, n: int) -> VeroneseModel:
    if a == 8:
        raise ValidationError(
            "a = 8 (the octonion plane series) has no matrix minor model; "
            "only a in {1, 2, 4} is supported"
        )
    if a not in (1, 2, 4):
        raise ValidationError("a must be one of 1, 2, 4")
    if n < 2:
        raise ValidationError("n must be at least 2")
    return VeroneseModel(a=a, n=n)


def _piece_index(model: VeroneseModel, i: int):
    """Coordinate labels of the level-i piece, in lexicographic order."""
    n, a = model.n, model.a
    if a == 2:
        subsets = list(combinations(range(n), i))
        return [(r, c) for r in subsets for c in subsets]
    if a == 1:
        subsets = list(combinations(range(n), i))
        return [(r, c) for r in subsets for c in subsets if r <= c]
    return list(combinations(range(2 * n), 2 * i))


def _validate_matrix(model: VeroneseModel, x):
    size = model.matrix_size
    if len(x) != size or any(len(row) != size for row in x):
        raise ValidationError(f"matrix must be {size} x {size}")
    m = [[Fraction(v) for v in row] for row in x]
    if model.a == 1:
        if any(m[i][j] != m[j][i] for i in range(size) for j in range(i)):
            raise ValidationError("the a = 1 model needs a symmetric matrix")
    if model.a == 4:
        if any(m[i][j] != -m[j][i] for i in range(size) for j in range(i + 1)):
            raise ValidationError("the a = 4 model needs an antisymmetric matrix")
    return m


def _minor_map(model: VeroneseModel, i: int, m) -> tuple:
    out = []
    if model.a == 4:
        cache: dict = {}
        for s in _piece_index(model, i):
            out.append(_pfaffian(m, s, cache))
        return tuple(out)
    for r, c in _piece_index(model, i):
        out.append(_det([[m[ri][ci] for ci in c] for ri in r]))
    return tuple(out)


def nu(model: VeroneseModel, i: int, x) -> tuple:
    """The level-i minor map applied to a matrix.

    a = 2: all i x i minors; a = 1: minors with row set <= column set (the
    symmetric matrix makes the others duplicates); a = 4: Pfaffians of the
    principal 2i x 2i submatrices.  Coordinates follow _piece_index order.
    """
    if not 2 <= i <= model.n:
        raise ValidationError("minor level must be between 2 and n")
    return _minor_map(model, i, _validate_matrix(model, x))


def matrix_coordinates(model: VeroneseModel, x) -> tuple:
    """Canonical level-1 coordinates of a matrix of the model's shape."""
    return _minor_map(model, 1, _validate_matrix(model, x))


def construct_point(model: VeroneseModel, x) -> tuple:
    """Graded chart coordinates (1, x, nu_2(x), ..., nu_n(x)) of a matrix."""
    m = _validate_matrix(model, x)
    pieces = [(Fraction(1),)]
    for i in range(1, model.n + 1):
        pieces.append(_minor_map(model, i, m))
    return tuple(pieces)


def matrix_from_piece(model: VeroneseModel, coords):
    """Rebuild the matrix from its level-1 coordinates."""
    labels = _piece_index(model, 1)
    if len(coords) != len(labels):
        raise ValidationError("level-1 piece has the wrong dimension")
    size = model.matrix_size
    m = [[Fraction(0)] * size for _ in range(size)]
    for label, v in zip(labels, coords):
        v = Fraction(v)
        if model.a == 4:
            i, j = label
            m[i][j] = v
            m[j][i] = -v
        elif model.a == 1:
            (i,), (j,) = label
            m[i][j] = v
            m[j][i] = v
        else:
            (i,), (j,) = label
            m[i][j] = v
    return m


def membership(model: VeroneseModel, v) -> bool:
    """Whether a graded chart vector lies on the model.

    v must have n + 1 pieces with the chart normalisation: the level-0
    coordinate equal to 1 (other charts are not covered by the criterion and
    raise).  Membership holds exactly when every piece from level 2 on
    equals the minor map of the level-1 piece; comparisons are exact.
    """
    pieces = []
    for p in v:
        if isinstance(p, (int, Fraction)):
            p = (p,)
        pieces.append(tuple(Fraction(c) for c in p))
    if len(pieces) != model.n + 1:
        raise ValidationError(f"expected {model.n + 1} graded pieces")
    for i, p in enumerate(pieces):
        if len(p) != model.piece_dim(i):
            raise ValidationError(f"graded piece {i} has the wrong dimension")
    if pieces[0] != (Fraction(1),):
        raise ValidationError(
            "membership is only defined on the chart where the lowest "
            "coordinate equals 1"
        )
    x = matrix_from_piece(model, pieces[1])
    for i in range(2, model.n + 1):
        if pieces[i] != nu(model, i, x):
            return False
    return True


# ---------------------------------------------------------------------------
# dimension identity and emptiness threshold


def dim_x(a: int, n: int) -> Fraction:
    return Fraction(a * n * n + 2 * n - a * n, 2)


def first_chern(a: int, n: int) -> int:
    return a * n + 2 - a


def dim_identity_check(a: int, n: int, d: int) -> bool:
    """The two ways of counting the curve-space dimension agree.

    Left side: points of the model needed to cut the curve space down plus
    the reparametrisation correction; right side: the expected dimension of
    the space of pointed degree-d maps.  Exact rational arithmetic.
    """
    a, n, d = Fraction(a), Fraction(n), Fraction(d)
    dx = Fraction(a * n * n + 2 * n - a * n, 2)
    lhs = (d - n + 2) * (dx + 1) - 4 - (d - n) * (n - 1 + (n - 1) * (n - 2) * a / 2)
    rhs = d * (a * n + 2 - a) - 2
    return lhs == rhs


EMPTY = "empty"
NONEMPTY_RATIONAL = "nonempty_rational"


def emptiness(a: int, n: int, d: int) -> str:
    """Status of the degree-d three-point curve space of the model."""
    veronese_model(a, n)
    return EMPTY if d < n else NONEMPTY_RATIONAL


# ---------------------------------------------------------------------------
# binary forms and splitting types


def _form_mul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] += a * b
    return tuple(out)


def _form_add(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for j, b in enumerate(g):
        out[j] += b
    return tuple(out)


def _form_is_zero(f) -> bool:
    return all(c == 0 for c in f)


def _poly_det(rows):
    """Determinant of a square matrix of binary forms by Laplace expansion."""
    k = len(rows)
    if k == 1:
        return rows[0][0]
    total = None
    for j in range(k):
        entry = rows[0][j]
        if _form_is_zero(entry):
            continue
        minor = [
            [row[c] for c in range(k) if c != j] for row in rows[1:]
        ]
        term = _form_mul(entry, _poly_det(minor))
        if j % 2:
            term = tuple(-c for c in term)
        total = term if total is None else _form_add(total, term)
    if total is None:
        return (Fraction(0),)
    return total


def _univariate_gcd(f, g):
    """Monic gcd of two coefficient lists (low degree first), exact."""
    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    f, g = trim(list(f)), trim(list(g))
    while g:
        while len(f) >= len(g):
            q = f[-1] / g[-1]
            shift = len(f) - len(g)
            for j in range(len(g)):
                f[shift + j] -= q * g[j]
            trim(f)
        f, g = g, f
    if f:
        lead = f[-1]
        f = [c / lead for c in f]
    return f


def _binary_gcd_degree(forms) -> int:
    """Degree of the gcd of a list of nonzero binary forms.

    A binary form splits as s^p t^q times a form with nonzero first and last
    coefficient; the gcd combines the minimal such powers with the gcd of
    the reduced parts in the single variable t at s = 1.
    """
    min_p = min_q = None
    reduced = []
    for f in forms:
        coeffs = list(f)
        q = next(i for i, c in enumerate(coeffs) if c)
        p = len(coeffs) - 1 - max(i for i, c in enumerate(coeffs) if c)
        core = coeffs[q: len(coeffs) - p]
        min_q = q if min_q is None else min(min_q, q)
        min_p = p if min_p is None else min(min_p, p)
        reduced.append(core)
    g = reduced[0]
    for core in reduced[1:]:
        g = _univariate_gcd(g, core)
        if len(g) == 1:
            break
    return min_p + min_q + (len(g) - 1)


def splitting_type(rows) -> tuple[int, ...]:
    """Splitting type of the subsheaf of O^N spanned by rows of binary forms.

    Each row is a vector of homogeneous forms of one degree (coefficient
    tuples, s-power descending).  The rows must be everywhere independent:
    if some k x k minor survives but all share a common root, the spanned
    subsheaf is not saturated and the call refuses rather than reporting the
    abstract image.  The type is read off from the ranks of the degree-m
    multiplication maps: the second difference of m -> h^0(F(m)) counts the
    summands O(-m) exactly.
    """
    if not rows:
        raise ValidationError("need at least one row")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError("rows must share a common width")
    k = len(rows)
    if k > width:
        raise ValidationError("more rows than columns cannot be independent")

    parsed = []
    degrees = []
    for r, row in enumerate(rows):
        forms = [tuple(Fraction(c) for c in entry) for entry in row]
        lengths = {len(f) for f in forms if not _form_is_zero(f)}
        if not lengths:
            raise ValidationError(f"row {r} is identically zero")
        if len(lengths) != 1:
            raise ValidationError(f"row {r} mixes entries of different degrees")
        (length,) = lengths
        forms = [f if not _form_is_zero(f) else (Fraction(0),) * length for f in forms]
        parsed.append(forms)
        degrees.append(length - 1)

    minors = []
    for cols in combinations(range(width), k):
        d = _poly_det([[row[c] for c in cols] for row in parsed])
        if not _form_is_zero(d):
            minors.append(d)
    if not minors:
        raise ValidationError("rows are generically dependent; the span has lower rank")
    if _binary_gcd_degree(minors) > 0:
        raise ValidationError(
            "the rows become dependent at a point of the line; "
            "the spanned subsheaf is not saturated there"
        )

    # h(m) = rank of { monomial * row : deg = m } inside degree-m vectors
    def h(m: int) -> int:
        vectors = []
        for forms, e in zip(parsed, degrees):
            for j in range(m - e + 1):
                vec = []
                for f in forms:
                    padded = [Fraction(0)] * (m + 1)
                    for i, c in enumerate(f):
                        padded[j + i] = c
                    vec.extend(padded)
                vectors.append(vec)
        return _rank(vectors)

    top = max(degrees) + 1
    values = {m: (0 if m < 0 else h(m)) for m in range(-2, top + 1)}
    counts: dict[int, int] = {}
    for j in range(0, top + 1):
        nj = (values[j] - values[j - 1]) - (values[j - 1] - values[j - 2])
        if nj < 0:
            raise InternalConsistencyError("section counts must be concave upward")
        if nj:
            counts[j] = nj
    if sum(counts.values()) != k:
        raise InternalConsistencyError("section counts must account for every row")
    out = []
    for j in sorted(counts, reverse=True):
        out.extend([-j] * counts[j])
    if sum(out) != -sum(degrees):
        raise InternalConsistencyError("splitting type must match the determinant degree")
    return tuple(out)


def _rank(vectors) -> int:
    if not vectors:
        return 0
    m = [list(v) for v in vectors]
    rank = 0
    cols = len(m[0])
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        for r in range(row + 1, len(m)):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, cols):
                    m[r][c] -= f * m[row][c]
        rank += 1
        row += 1
        if row == len(m):
            break
    return rank


# ---------------------------------------------------------------------------
# the orthogonal block construction


def isotropic_block_rows(n: int, a: int):
    """Rows of the two-block isotropic curve of spinor degree n - a.

    The ambient space C^{2n} splits into quartets each carrying the
    determinant form x0*x3 - x1*x2.  The first a quartets receive two
    degree-1 rows each ((s, t, 0, 0) and (0, 0, s, t)); the remaining
    (n - 2a)/2 quartets receive two degree-2 rows each ((s^2, t^2, 0, 0) and
    (0, 0, s^2, t^2)).  Isotropy of every row and every polar pairing is
    verified symbolically before returning.
    """
    if a < 1:
        raise ValidationError("the construction needs a >= 1")
    m = n - 2 * a
    if m < 0 or m % 2:
        raise ValidationError(
            "the two-block construction needs n - 2a non-negative and even"
        )
    s = (Fraction(1), Fraction(0))
    t = (Fraction(0), Fraction(1))
    s2 = (Fraction(1), Fraction(0), Fraction(0))
    t2 = (Fraction(0), Fraction(0), Fraction(1))

    quartets = a + m // 2
    width = 4 * quartets
    if width != 2 * n:
        raise InternalConsistencyError("block widths must fill C^{2n}")
    rows = []
    for b in range(quartets):
        lo, hi = (s, t) if b < a else (s2, t2)
        zero = (Fraction(0),) * len(lo)
        for pattern in ((lo, hi, zero, zero), (zero, zero, lo, hi)):
            row = [zero] * width
            row[4 * b: 4 * b + 4] = pattern
            rows.append(tuple(row))

    _check_isotropy(rows, quartets)
    return tuple(rows)


def _check_isotropy(rows, quartets):
    """Every row pair must pair to zero under the per-quartet form."""
    def pair(u, v):
        total = None
        for b in range(quartets):
            i = 4 * b
            for left, right, sign in (
                (i, i + 3, 1), (i + 3, i, 1), (i + 1, i + 2, -1), (i + 2, i + 1, -1),
            ):
                term = _form_mul(u[left], v[right])
                if sign < 0:
                    term = tuple(-c for c in term)
                total = term if total is None else _form_add(total, term)
        return total

    for i, u in enumerate(rows):
        for v in rows[i:]:
            if not _form_is_zero(pair(u, v)):
                raise InternalConsistencyError("block rows must span isotropic subspaces")
