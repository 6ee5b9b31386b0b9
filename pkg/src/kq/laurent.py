"""Integer Laurent polynomials in the characters of a torus.

A term e^mu is keyed by packing the weight mu (fundamental-weight
coordinates, one signed integer per node) into a single int, 16 bits
per coordinate with an offset of 2**15.  Packed keys of two monomials
add coordinate-wise as long as every coordinate stays within +-2**15
of zero, which holds comfortably for every weight this package ever
multiplies (tangent weights and their modest sums).

Division by a binomial 1 - e^{-chi} works line by line: the support is
partitioned into lines mu + Z*chi, and on each line the quotient is the
running top-down partial sum of coefficients.  The division is exact
precisely when every line sums to zero; the routine is linear in the
number of lattice points it emits.
"""

from __future__ import annotations

from typing import Callable, Iterable

FIELD_BITS = 16
OFFSET = 1 << 15
_FIELD_MASK = (1 << FIELD_BITS) - 1
_COORD_BOUND = 1 << 14


def packed_zero(rank: int) -> int:
    key = 0
    for i in range(rank):
        key |= OFFSET << (FIELD_BITS * i)
    return key


def pack(coords) -> int:
    key = 0
    for i, c in enumerate(coords):
        if not -_COORD_BOUND <= c <= _COORD_BOUND:
            raise OverflowError(f"exponent coordinate {c} out of packing range")
        key |= (c + OFFSET) << (FIELD_BITS * i)
    return key


def unpack(key: int, rank: int) -> tuple[int, ...]:
    return tuple(
        ((key >> (FIELD_BITS * i)) & _FIELD_MASK) - OFFSET for i in range(rank)
    )


def step_of(coords) -> int:
    """Signed field-wise increment for repeatedly shifting packed keys."""
    delta = 0
    for i, c in enumerate(coords):
        delta += c << (FIELD_BITS * i)
    return delta


class LaurentPoly:
    """Immutable-by-convention sparse Laurent polynomial over the integers."""

    __slots__ = ("rank", "coeffs")

    def __init__(self, rank: int, coeffs: dict[int, int] | None = None):
        self.rank = rank
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls(rank, {})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls(rank, {packed_zero(rank): 1})

    @classmethod
    def monomial(cls, rank: int, weight, coeff: int = 1) -> "LaurentPoly":
        return cls(rank, {pack(weight): coeff})

    @classmethod
    def one_minus_exp(cls, rank: int, weight) -> "LaurentPoly":
        """1 - e^{weight}."""
        out = {packed_zero(rank): 1}
        key = pack(weight)
        out[key] = out.get(key, 0) - 1
        return cls(rank, out)

    @classmethod
    def from_terms(cls, rank: int, terms: Iterable[tuple[tuple[int, ...], int]]):
        out: dict[int, int] = {}
        for weight, coeff in terms:
            key = pack(weight)
            out[key] = out.get(key, 0) + coeff
        return cls(rank, out)

    # -- ring structure -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly) and self.rank == other.rank
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.rank, frozenset(self.coeffs.items())))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        big, small = self.coeffs, other.coeffs
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        for k, v in small.items():
            new = out.get(k, 0) + v
            if new:
                out[k] = new
            else:
                out.pop(k, None)
        return LaurentPoly(self.rank, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.rank, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.coeffs or not other.coeffs:
            return LaurentPoly.zero(self.rank)
        zero = packed_zero(self.rank)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        out: dict[int, int] = {}
        for ka, va in a.items():
            base = ka - zero
            for kb, vb in b.items():
                key = base + kb
                new = out.get(key, 0) + va * vb
                if new:
                    out[key] = new
                else:
                    del out[key]
        return LaurentPoly(self.rank, out)

    def scale(self, c: int) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly.zero(self.rank)
        return LaurentPoly(self.rank, {k: c * v for k, v in self.coeffs.items()})

    # -- inspection -------------------------------------------------------------

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Sorted (weight, coefficient) pairs; canonical output order."""
        out = [(unpack(k, self.rank), v) for k, v in self.coeffs.items()]
        out.sort()
        return out

    def constant_term(self) -> int:
        return self.coeffs.get(packed_zero(self.rank), 0)

    def evaluate_at_one(self) -> int:
        """Specialise every character to 1."""
        return sum(self.coeffs.values())

    def map_exponents(self, fn: Callable[[tuple[int, ...]], tuple[int, ...]]):
        out: dict[int, int] = {}
        for k, v in self.coeffs.items():
            key = pack(fn(unpack(k, self.rank)))
            new = out.get(key, 0) + v
            if new:
                out[key] = new
            else:
                del out[key]
        return LaurentPoly(self.rank, out)

    def __repr__(self):
        inner = " + ".join(
            f"{c}*e{w}" for w, c in self.terms()[:6]
        )
        extra = "" if len(self.coeffs) <= 6 else f" ... ({len(self.coeffs)} terms)"
        return f"LaurentPoly({inner or '0'}{extra})"

    # -- binomial division ----------------------------------------------------

    def divide_binomial(self, chi) -> "LaurentPoly":
        """Exact quotient self / (1 - e^{-chi}); raises ValueError if inexact."""
        out = self._binomial_quotient(chi)
        if out is None:
            raise ValueError(f"not divisible by 1 - e^-{tuple(chi)}")
        return out

    def divisible_by_binomial(self, chi) -> bool:
        return self._binomial_quotient(chi) is not None

    def _binomial_quotient(self, chi) -> "LaurentPoly | None":
        chi = tuple(chi)
        if all(c == 0 for c in chi):
            raise ValueError("binomial direction must be nonzero")
        if not self.coeffs:
            return LaurentPoly.zero(self.rank)
        rank = self.rank
        chi2 = sum(c * c for c in chi)
        # a lattice line is mu + Z*chi: same orthogonal projection AND the
        # same residue of the position <mu, chi> modulo <chi, chi>
        lines: dict[tuple, list[tuple[int, int, int]]] = {}
        for key, coeff in self.coeffs.items():
            mu = unpack(key, rank)
            s = sum(a * b for a, b in zip(mu, chi))
            rep = (tuple(m * chi2 - s * c for m, c in zip(mu, chi)), s % chi2)
            lines.setdefault(rep, []).append((s, key, coeff))
        step = step_of(chi)
        out: dict[int, int] = {}
        for entries in lines.values():
            entries.sort(reverse=True)
            if sum(c for _, _, c in entries) != 0:
                return None
            acc = 0
            pos = 0
            key = entries[0][1]
            s = entries[0][0]
            bottom = entries[-1][0]
            while s > bottom:
                if pos < len(entries) and entries[pos][0] == s:
                    acc += entries[pos][2]
                    pos += 1
                if acc:
                    out[key] = acc
                key -= step
                s -= chi2
        return LaurentPoly(self.rank, out)


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact division of Laurent polynomials with integer quotient.

    Implemented by shifting both operands into honest polynomials and
    cancelling lexicographic leading terms.  Raises ValueError when the
    division is not exact over the integers.  (Do not try plain leading
    term descent on Laurent supports directly: without the shift the
    exponents can walk downward forever.)
    """
    if den.is_zero():
        raise ValueError("division by zero polynomial")
    if num.is_zero():
        return LaurentPoly.zero(num.rank)
    rank = num.rank

    def shifted(poly: LaurentPoly) -> tuple[dict[tuple[int, ...], int], tuple[int, ...]]:
        coords = [unpack(k, rank) for k in poly.coeffs]
        mins = tuple(min(c[i] for c in coords) for i in range(rank))
        table = {
            tuple(x - m for x, m in zip(unpack(k, rank), mins)): v
            for k, v in poly.coeffs.items()
        }
        return table, mins

    ptab, pshift = shifted(num)
    qtab, qshift = shifted(den)
    qlead = max(qtab)
    qlead_coeff = qtab[qlead]
    quot: dict[tuple[int, ...], int] = {}
    while ptab:
        plead = max(ptab)
        expo = tuple(a - b for a, b in zip(plead, qlead))
        if any(e < 0 for e in expo):
            raise ValueError("not divisible: leading monomial mismatch")
        coeff, rem = divmod(ptab[plead], qlead_coeff)
        if rem:
            raise ValueError("not divisible: non-integer coefficient")
        quot[expo] = coeff
        for qexp, qc in qtab.items():
            key = tuple(a + b for a, b in zip(expo, qexp))
            new = ptab.get(key, 0) - coeff * qc
            if new:
                ptab[key] = new
            else:
                ptab.pop(key, None)
    total_shift = tuple(p - q for p, q in zip(pshift, qshift))
    return LaurentPoly.from_terms(
        rank,
        ((tuple(e + s for e, s in zip(expo, total_shift)), c)
         for expo, c in quot.items()),
    )
