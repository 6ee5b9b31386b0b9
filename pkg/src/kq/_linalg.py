"""Exact linear algebra over Fraction.

Everything here works on lists of lists of int/Fraction and never
touches floating point.  Matrices are small (rank of a root system,
or a handful of constraint rows), so plain Gaussian elimination is
fine.
"""

from __future__ import annotations

from fractions import Fraction

Row = list[Fraction]
Matrix = list[Row]


def _as_fraction_rows(matrix) -> Matrix:
    return [[Fraction(x) for x in row] for row in matrix]


def solve(matrix, rhs) -> list[Fraction]:
    """Solve M x = rhs for square nonsingular M.  Raises ValueError if singular."""
    n = len(matrix)
    aug = _as_fraction_rows(matrix)
    b = [Fraction(x) for x in rhs]
    if any(len(row) != n for row in aug) or len(b) != n:
        raise ValueError("solve expects a square system")
    for row, extra in zip(aug, b):
        row.append(extra)
    _forward_eliminate(aug)
    xs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        if aug[i][i] == 0:
            raise ValueError("singular matrix")
        acc = aug[i][n] - sum((aug[i][j] * xs[j] for j in range(i + 1, n)), Fraction(0))
        xs[i] = acc / aug[i][i]
    return xs


def invert(matrix) -> Matrix:
    """Inverse of a square nonsingular matrix."""
    n = len(matrix)
    aug = _as_fraction_rows(matrix)
    for i, row in enumerate(aug):
        if len(row) != n:
            raise ValueError("invert expects a square matrix")
        row.extend(Fraction(1) if j == i else Fraction(0) for j in range(n))
    _forward_eliminate(aug)
    for i in range(n):
        if aug[i][i] == 0:
            raise ValueError("singular matrix")
    for i in range(n - 1, -1, -1):
        piv = aug[i][i]
        aug[i] = [x / piv for x in aug[i]]
        for k in range(i):
            factor = aug[k][i]
            if factor:
                aug[k] = [a - factor * b for a, b in zip(aug[k], aug[i])]
    return [row[n:] for row in aug]


def _forward_eliminate(aug: Matrix) -> None:
    """Row-reduce in place to upper triangular form (square leading block)."""
    n = len(aug)
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(col + 1, n):
            factor = aug[r][col] / aug[col][col]
            if factor:
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]


def rref(matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    rows = _as_fraction_rows(matrix)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        piv = rows[r][col]
        rows[r] = [x / piv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col] != 0:
                factor = rows[k][col]
                rows[k] = [a - factor * b for a, b in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def nullspace(matrix) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column."""
    if not matrix:
        return []
    reduced, pivots = rref(matrix)
    ncols = len(matrix[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        basis.append(vec)
    return basis


def rank(matrix) -> int:
    if not matrix:
        return 0
    return len(rref(matrix)[1])
