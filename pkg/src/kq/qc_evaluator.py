"""Three-point K-theoretic Gromov-Witten invariants, degree by degree.

The invariant of three Schubert structure-sheaf classes in degree d is
evaluated on the translate space Y_d instead of on a moduli space:

    I_d(u1, u2, u3) = chi_{Y_d}([O_{Y(u1'')}] * [O_{Y(u2'')}] * [O_{Y(u3'')}])

where ui'' labels the image of q(p^{-1}(X(ui))).  Three regimes:

  d = 0        Y_0 = X and q = p = id; multiply on X directly.
  0 < d < D_max  needs a catalog entry for (space, d).
  d >= D_max   Y_d is a point and the invariant collapses to the product
               chi(u1) chi(u2) chi(u3) of Euler characteristics on X.

Results are virtual characters (exact Laurent polynomials over the weight
lattice); the non-equivariant number is their value at 1.
"""

from __future__ import annotations

from .catalog import SpaceDescriptor
from .errors import ValidationError
from .ktheory import (
    HomSpace,
    euler_char,
    multiply,
    pushforward,
    pushforward_qp,
)
from .laurent import LaurentPoly
from .weyl import DEFAULT_CAP

_SPACE_CACHE: dict[tuple, HomSpace] = {}


def home_space(s: SpaceDescriptor, cap: int = DEFAULT_CAP) -> HomSpace:
    """The HomSpace of the descriptor, shared across queries."""
    key = (s.letter, s.rank, tuple(sorted(s.sigma_P)))
    out = _SPACE_CACHE.get(key)
    if out is None:
        out = HomSpace(s.letter, s.rank, s.sigma_P, cap=cap)
        _SPACE_CACHE[key] = out
    return out


def _aux_space(s: SpaceDescriptor, marked, cap: int) -> HomSpace:
    key = (s.letter, s.rank, tuple(sorted(marked)))
    out = _SPACE_CACHE.get(key)
    if out is None:
        out = HomSpace(s.letter, s.rank, marked, cap=cap)
        _SPACE_CACHE[key] = out
    return out


def y_space(s: SpaceDescriptor, deg, cap: int = DEFAULT_CAP) -> HomSpace:
    """Y_d = G/Q_d for a degree entry (decoding the point sentinel)."""
    sigma = frozenset(deg.sigma_Qd)
    if sigma == frozenset(range(s.rank)):
        sigma = frozenset()
    return _aux_space(s, sigma, cap)


def resolve_label(space: HomSpace, label) -> int:
    """Fixed-point index of a label: an index, or a reduced word (0-indexed)."""
    if isinstance(label, int):
        if not 0 <= label < space.npoints:
            raise ValidationError(
                f"label index {label} outside 0..{space.npoints - 1}")
        return label
    word = tuple(int(i) for i in label)
    if any(not 0 <= i < space.rank for i in word):
        raise ValidationError(f"label word {word} has letters outside the rank")
    g = space.weyl
    w = g.from_word(word)
    if g.length(w) != len(word):
        raise ValidationError(f"label word {word} is not reduced")
    if g.min_rep(w, space.levi) != w:
        raise ValidationError(
            f"label word {word} is not a minimal coset representative")
    return space.idx[w]


def chi_schubert(space: HomSpace, label) -> LaurentPoly:
    """Equivariant Euler characteristic of one Schubert class, as a character."""
    k = resolve_label(space, label)
    return _as_poly(space, space.schubert_class(k))


def _as_poly(space: HomSpace, cls) -> LaurentPoly:
    return LaurentPoly.from_terms(space.rank, euler_char(cls).items())


def _triple(space: HomSpace, ks) -> LaurentPoly:
    a, b, c = (space.schubert_class(k) for k in ks)
    return _as_poly(space, multiply(multiply(a, b), c))


def invariant(s: SpaceDescriptor, d: int, labels, equivariant: bool = True,
              cap: int = DEFAULT_CAP, via: str = "auto"):
    """The degree-d three-point invariant of three Schubert labels.

    via="auto" picks the production route for the degree regime;
    via="point-pipeline" forces the generic pushforward-to-a-point route
    (valid only for d >= D_max), the path-independence cross-check.
    """
    if len(labels) != 3:
        raise ValidationError("exactly three labels are required")
    if d < 0:
        raise ValidationError(f"degree must be nonnegative, got {d}")
    X = home_space(s, cap)
    ks = [resolve_label(X, lab) for lab in labels]
    if via == "point-pipeline":
        if d < s.D_max:
            raise ValidationError(
                "the point pipeline applies only to d >= D_max")
        s.degree_data(d)  # still subject to catalog refusals
        Y = _aux_space(s, frozenset(), cap)
        pushed = [pushforward(X.schubert_class(k), Y) for k in ks]
        out = _as_poly(Y, multiply(multiply(pushed[0], pushed[1]), pushed[2]))
    elif via != "auto":
        raise ValidationError(f"unknown route {via!r}")
    elif d == 0:
        out = _triple(X, ks)
    else:
        deg = s.degree_data(d)
        if d >= s.D_max:
            out = LaurentPoly.one(s.rank)
            for k in ks:
                out = out * _as_poly(X, X.schubert_class(k))
        else:
            Y = y_space(s, deg, cap)
            images = [pushforward_qp(X, X.reps[k], deg) for k in ks]
            out = _triple(Y, [Y.point_index(u) for u in images])
    return out if equivariant else out.evaluate_at_one()


def invariant_table(s: SpaceDescriptor, d: int, limit: int | None = None,
                    cap: int = DEFAULT_CAP):
    """All label triples in fixed-point index order: ((i, j, k), character).

    limit, when given, truncates the lexicographic enumeration (a sampling
    cap for large spaces).
    """
    X = home_space(s, cap)
    n = X.npoints
    total = n ** 3
    if limit is None and total > 10 ** 6:
        raise ValidationError(
            f"table of {total} entries needs an explicit limit")
    count = total if limit is None else min(limit, total)

    if d != 0 and d < s.D_max:
        deg = s.degree_data(d)
        Y = y_space(s, deg, cap)
        images = [Y.point_index(pushforward_qp(X, u, deg)) for u in X.reps]
    elif d != 0:
        s.degree_data(d)
        chis = [_as_poly(X, X.schubert_class(k)) for k in range(n)]

    out = []
    for t in range(count):
        i, rest = divmod(t, n * n)
        j, k = divmod(rest, n)
        if d == 0:
            val = _triple(X, (i, j, k))
        elif d >= s.D_max:
            val = chis[i] * chis[j] * chis[k]
        else:
            val = _triple(Y, (images[i], images[j], images[k]))
        out.append(((i, j, k), val))
    return out
