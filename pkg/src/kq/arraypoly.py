"""Vectorized exact Laurent-polynomial kernels on packed integer exponents.

A monomial e^m, with m an integer weight vector of length <= 7, is packed
into one nonnegative int64 key, nine bits per coordinate, offset so that
coordinate values in (-256, 256) are representable.  A polynomial is a pair
of parallel numpy int64 arrays: keys strictly increasing, coefficients
nonzero.  Every operation is integer arithmetic on int64; nothing is ever
rounded.  Bound violations raise instead of wrapping silently:

  - coordinates must stay inside [-224, 224) (FIELD_SLACK margin),
  - coefficients must stay below 2**40 in absolute value,
  - a single polynomial must stay below 2**22 terms.

Under those invariants every intermediate (including the grouped sums in
``canon`` and the partial sums in ``div_binomial``) fits in int64 with room
to spare, so the results coincide with unbounded-integer arithmetic.
"""

from __future__ import annotations

import numpy as np

from .errors import ResourceLimitError

FIELD_BITS = 9
FIELD_OFF = 1 << (FIELD_BITS - 1)
FIELD_MASK = (1 << FIELD_BITS) - 1
FIELD_SLACK = 32
FIELD_LO = FIELD_SLACK
FIELD_HI = (1 << FIELD_BITS) - FIELD_SLACK
COEFF_BOUND = 1 << 40
SIZE_BOUND = 1 << 22

_EMPTY = np.empty(0, dtype=np.int64)


def empty_poly():
    return _EMPTY, _EMPTY


class PackedOps:
    """Packing layout and per-rank constants for one weight lattice."""

    def __init__(self, rank):
        if not 1 <= rank <= 7:
            raise ValueError(f"rank {rank} outside packing range 1..7")
        self.rank = rank
        self.shifts = tuple(FIELD_BITS * j for j in range(rank))
        self.zero_key = sum(FIELD_OFF << s for s in self.shifts)

    def delta(self, m):
        """Signed packed displacement of a weight vector (no offsets)."""
        return sum(int(m[j]) << self.shifts[j] for j in range(self.rank))

    def pack(self, m):
        for x in m:
            if not -(FIELD_OFF - FIELD_SLACK) <= x < FIELD_OFF - FIELD_SLACK:
                raise ResourceLimitError(f"coordinate {x} outside packed range")
        return self.zero_key + self.delta(m)

    def unpack(self, key):
        key = int(key)
        return tuple(((key >> s) & FIELD_MASK) - FIELD_OFF for s in self.shifts)

    def check_fields(self, keys):
        # cheap vectorized sanity sweep: all coordinates well inside range
        for s in self.shifts:
            f = (keys >> s) & FIELD_MASK
            if f.size and (int(f.min()) < FIELD_LO or int(f.max()) >= FIELD_HI):
                raise ResourceLimitError("packed coordinate drifted out of range")

    def field(self, keys, j):
        """Signed j-th coordinate of each key, as an int64 array."""
        return ((keys >> self.shifts[j]) & FIELD_MASK) - FIELD_OFF

    # -- conversions ---------------------------------------------------

    def from_dict(self, d):
        if not d:
            return empty_poly()
        keys = np.fromiter((self.pack(m) for m in d), dtype=np.int64, count=len(d))
        coeffs = np.fromiter((d[m] for m in d), dtype=np.int64, count=len(d))
        order = np.argsort(keys)
        return keys[order], coeffs[order]

    def to_dict(self, poly):
        keys, coeffs = poly
        return {self.unpack(k): int(c) for k, c in zip(keys.tolist(), coeffs.tolist())}


def _guard(keys, coeffs):
    if keys.size > SIZE_BOUND:
        raise ResourceLimitError(f"polynomial size {keys.size} exceeds engine bound")
    if coeffs.size and int(np.abs(coeffs).max()) >= COEFF_BOUND:
        raise ResourceLimitError("coefficient exceeds engine bound")
    return keys, coeffs


def canon(keys, coeffs):
    """Sort by key, combine equal keys, drop zeros.  Exact in int64."""
    if keys.size == 0:
        return empty_poly()
    if keys.size > SIZE_BOUND:
        raise ResourceLimitError(f"polynomial size {keys.size} exceeds engine bound")
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    c = coeffs[order]
    starts = np.empty(k.size, dtype=bool)
    starts[0] = True
    np.not_equal(k[1:], k[:-1], out=starts[1:])
    idx = np.flatnonzero(starts)
    sums = np.add.reduceat(c, idx)
    nz = sums != 0
    return _guard(k[idx][nz], sums[nz])


def poly_add(a, b, sign=1):
    """a + sign*b."""
    ka, ca = a
    kb, cb = b
    if kb.size == 0:
        return ka, ca
    if ka.size == 0:
        return (kb, cb if sign == 1 else -cb)
    return canon(np.concatenate((ka, kb)),
                 np.concatenate((ca, cb if sign == 1 else -cb)))


def poly_scale(a, c):
    keys, coeffs = a
    if c == 0:
        return empty_poly()
    if keys.size == 0:
        return a
    return _guard(keys, coeffs * np.int64(c))


def poly_shift(ops, a, delta, sign=1):
    """Multiply by the unit sign*e^{delta} (delta a signed packed key)."""
    keys, coeffs = a
    if keys.size == 0:
        return a
    out = keys + np.int64(delta)
    ops.check_fields(out)
    return out, (coeffs if sign == 1 else -coeffs)


def mul_binomial(ops, a, m):
    """Multiply by (1 - e^{-m}) for a weight vector m."""
    keys, coeffs = a
    if keys.size == 0:
        return a
    shifted = keys - np.int64(ops.delta(m))
    ops.check_fields(shifted)
    return canon(np.concatenate((keys, shifted)),
                 np.concatenate((coeffs, -coeffs)))


def poly_mul(ops, a, b):
    """Full product a*b via the outer sum of exponent keys.

    Packed keys add fieldwise only while every coordinate sum stays inside
    the representable window, so the coordinate ranges are checked before
    the addition; going outside raises rather than corrupting neighbours.
    """
    ka, ca = a
    kb, cb = b
    if ka.size == 0 or kb.size == 0:
        return empty_poly()
    if ka.size * kb.size > SIZE_BOUND:
        raise ResourceLimitError("product size exceeds engine bound")
    if int(np.abs(ca).max()) * int(np.abs(cb).max()) >= COEFF_BOUND:
        raise ResourceLimitError("coefficient exceeds engine bound in product")
    for j in range(ops.rank):
        fa = ops.field(ka, j)
        fb = ops.field(kb, j)
        lo = int(fa.min()) + int(fb.min())
        hi = int(fa.max()) + int(fb.max())
        if lo < -(FIELD_OFF - FIELD_SLACK) or hi >= FIELD_OFF - FIELD_SLACK:
            raise ResourceLimitError("coordinate outside packed range in product")
    keys = (ka[:, None] + (kb[None, :] - np.int64(ops.zero_key))).ravel()
    coeffs = (ca[:, None] * cb[None, :]).ravel()
    return canon(keys, coeffs)


_LABEL_BITS = 21
_LABEL_OFF = 1 << (_LABEL_BITS - 1)


def div_binomial(ops, a, m):
    """Exact division by (1 - e^{-m}); None when not divisible.

    Terms are grouped into lattice lines along m.  Within a line, sorted by
    decreasing pairing with m, the quotient coefficients are the running
    partial sums, emitted at every lattice step down to the next input term.
    The line total must vanish, otherwise the formal series has an infinite
    tail and the division fails.

    Line labels are built coordinate-wise (field minus quotient times m_j)
    and repacked three per int64 with wide fields, so no intermediate can
    overflow even for rank-7 keys with long lines.
    """
    keys, coeffs = a
    if keys.size == 0:
        return a
    step = np.int64(ops.delta(m))
    chi2 = 0
    fields = []
    s = np.zeros(keys.size, dtype=np.int64)
    for j in range(ops.rank):
        f = ops.field(keys, j)
        fields.append(f)
        mj = int(m[j])
        if mj:
            chi2 += mj * mj
            s += np.int64(mj) * f
    if chi2 == 0:
        raise ValueError("division by the zero weight")
    q = s // np.int64(chi2)
    labels = []
    for j in range(ops.rank):
        g = fields[j] - q * np.int64(m[j])
        if g.size and (int(np.abs(g).max()) >= _LABEL_OFF):
            raise ResourceLimitError("line label outside packed range")
        slot = j % 3
        if slot == 0:
            labels.append(g + _LABEL_OFF)
        else:
            labels[-1] += (g + _LABEL_OFF) << np.int64(_LABEL_BITS * slot)
    order = np.lexsort((-s,) + tuple(reversed(labels)))
    s = s[order]
    k = keys[order]
    c = coeffs[order]
    starts = np.empty(k.size, dtype=bool)
    starts[0] = True
    starts[1:] = False
    for lab in labels:
        lab = lab[order]
        np.logical_or(starts[1:], lab[1:] != lab[:-1], out=starts[1:])
    idx = np.flatnonzero(starts)
    cs = np.cumsum(c)
    ps = cs - np.repeat(cs[idx] - c[idx], np.diff(np.append(idx, k.size)))
    last = np.empty(k.size, dtype=bool)
    last[-1] = True
    last[:-1] = starts[1:]
    if np.any(ps[last]):
        return None
    # emission run lengths: from each non-final term down to just above the next
    runs = np.zeros(k.size, dtype=np.int64)
    gaps = (s[:-1] - s[1:]) // chi2
    inner = ~last[:-1]
    runs[:-1][inner] = gaps[inner]
    runs[ps == 0] = 0
    total = int(runs.sum())
    if total == 0:
        return empty_poly() if not np.any(c) else None
    if total > SIZE_BOUND:
        raise ResourceLimitError("quotient size exceeds engine bound")
    pos = np.flatnonzero(runs)
    reps = runs[pos]
    src = np.repeat(pos, reps)
    ends = np.cumsum(reps)
    local = np.arange(total, dtype=np.int64) - np.repeat(ends - reps, reps)
    out_keys = k[src] - step * local
    out_coeffs = ps[src]
    return canon(out_keys, out_coeffs)


# -- batched variants ----------------------------------------------------
#
# A batch is a triple (pid, keys, coeffs) of parallel int64 arrays holding
# one polynomial per distinct pid value.  Canonical form: rows sorted by
# (pid, key), equal rows combined, zero coefficients dropped.  A pid absent
# from the arrays is the zero polynomial.  Batches let one numpy call act on
# hundreds of small polynomials at once; the arithmetic guarantees are the
# same as for the single-polynomial kernels above.

# same bound as single polynomials: keeps the global cumsum in
# batch_div_binomial below 2**62 even with every coefficient at the cap
BATCH_SIZE_BOUND = SIZE_BOUND


def empty_batch():
    return _EMPTY, _EMPTY, _EMPTY


def _batch_guard(pid, keys, coeffs):
    if keys.size > BATCH_SIZE_BOUND:
        raise ResourceLimitError(f"batch size {keys.size} exceeds engine bound")
    if coeffs.size and int(np.abs(coeffs).max()) >= COEFF_BOUND:
        raise ResourceLimitError("coefficient exceeds engine bound")
    return pid, keys, coeffs


def batch_canon(pid, keys, coeffs):
    """Canonical form of a batch: sort by (pid, key), combine, drop zeros."""
    if keys.size == 0:
        return empty_batch()
    if keys.size > BATCH_SIZE_BOUND:
        raise ResourceLimitError(f"batch size {keys.size} exceeds engine bound")
    order = np.lexsort((keys, pid))
    p = pid[order]
    k = keys[order]
    c = coeffs[order]
    starts = np.empty(k.size, dtype=bool)
    starts[0] = True
    np.not_equal(k[1:], k[:-1], out=starts[1:])
    np.logical_or(starts[1:], p[1:] != p[:-1], out=starts[1:])
    idx = np.flatnonzero(starts)
    sums = np.add.reduceat(c, idx)
    nz = sums != 0
    return _batch_guard(p[idx][nz], k[idx][nz], sums[nz])


def batch_add(a, b, sign=1):
    """Pointwise a + sign*b for batches."""
    pa, ka, ca = a
    pb, kb, cb = b
    if kb.size == 0:
        return a
    if ka.size == 0:
        return (pb, kb, cb if sign == 1 else -cb)
    return batch_canon(np.concatenate((pa, pb)),
                       np.concatenate((ka, kb)),
                       np.concatenate((ca, cb if sign == 1 else -cb)))


def batch_mul_binomial(ops, b, m):
    """Multiply every member polynomial by (1 - e^{-m})."""
    pid, keys, coeffs = b
    if keys.size == 0:
        return b
    shifted = keys - np.int64(ops.delta(m))
    ops.check_fields(shifted)
    return batch_canon(np.concatenate((pid, pid)),
                       np.concatenate((keys, shifted)),
                       np.concatenate((coeffs, -coeffs)))


def batch_shift(ops, b, deltas, signs):
    """Multiply member v by the unit signs[v]*e^{deltas[v]}.

    deltas/signs are arrays indexed by pid value.  Order is preserved: a
    constant key offset per pid cannot reorder rows within that pid.
    """
    pid, keys, coeffs = b
    if keys.size == 0:
        return b
    out = keys + deltas[pid]
    ops.check_fields(out)
    return pid, out, coeffs * signs[pid]


def batch_relabel(pid, keys, coeffs, newpid):
    """Replace each pid p by newpid[p] and restore canonical order."""
    if keys.size == 0:
        return pid, keys, coeffs
    return batch_canon(newpid[pid], keys, coeffs)


def batch_div_binomial(ops, b, m, npids):
    """Divide every member by (1 - e^{-m}) where exactly possible.

    Returns (ok, out): ok is a bool array of length npids, True where the
    member was divisible (absent members are zero, hence divisible); out is
    a canonical batch holding the quotients of the divisible members only.
    Same lattice-line construction as div_binomial, with the pid as the
    outermost grouping key.
    """
    pid, keys, coeffs = b
    ok = np.ones(npids, dtype=bool)
    if keys.size == 0:
        return ok, empty_batch()
    step = np.int64(ops.delta(m))
    chi2 = 0
    fields = []
    s = np.zeros(keys.size, dtype=np.int64)
    for j in range(ops.rank):
        f = ops.field(keys, j)
        fields.append(f)
        mj = int(m[j])
        if mj:
            chi2 += mj * mj
            s += np.int64(mj) * f
    if chi2 == 0:
        raise ValueError("division by the zero weight")
    q = s // np.int64(chi2)
    labels = []
    for j in range(ops.rank):
        g = fields[j] - q * np.int64(m[j])
        if g.size and (int(np.abs(g).max()) >= _LABEL_OFF):
            raise ResourceLimitError("line label outside packed range")
        slot = j % 3
        if slot == 0:
            labels.append(g + _LABEL_OFF)
        else:
            labels[-1] += (g + _LABEL_OFF) << np.int64(_LABEL_BITS * slot)
    order = np.lexsort((-s,) + tuple(reversed(labels)) + (pid,))
    p = pid[order]
    s = s[order]
    k = keys[order]
    c = coeffs[order]
    starts = np.empty(k.size, dtype=bool)
    starts[0] = True
    starts[1:] = p[1:] != p[:-1]
    for lab in labels:
        lab = lab[order]
        np.logical_or(starts[1:], lab[1:] != lab[:-1], out=starts[1:])
    idx = np.flatnonzero(starts)
    cs = np.cumsum(c)
    ps = cs - np.repeat(cs[idx] - c[idx], np.diff(np.append(idx, k.size)))
    last = np.empty(k.size, dtype=bool)
    last[-1] = True
    last[:-1] = starts[1:]
    bad = np.unique(p[last & (ps != 0)])
    ok[bad] = False
    runs = np.zeros(k.size, dtype=np.int64)
    gaps = (s[:-1] - s[1:]) // chi2
    inner = ~last[:-1]
    runs[:-1][inner] = gaps[inner]
    runs[ps == 0] = 0
    runs[~ok[p]] = 0
    total = int(runs.sum())
    if total == 0:
        return ok, empty_batch()
    if total > BATCH_SIZE_BOUND:
        raise ResourceLimitError("quotient size exceeds engine bound")
    pos = np.flatnonzero(runs)
    reps = runs[pos]
    src = np.repeat(pos, reps)
    ends = np.cumsum(reps)
    local = np.arange(total, dtype=np.int64) - np.repeat(ends - reps, reps)
    return ok, batch_canon(p[src], k[src] - step * local, ps[src])


def batch_member(b, v):
    """Extract member v of a batch as a single polynomial."""
    pid, keys, coeffs = b
    sel = pid == v
    return keys[sel], coeffs[sel]


def batch_members(b):
    """Distinct pids present in a batch."""
    return np.unique(b[0])


def batch_from_members(items):
    """Batch from an iterable of (pid, poly) pairs; input polys canonical."""
    pids = []
    ks = []
    cs = []
    for v, (k, c) in items:
        if k.size == 0:
            continue
        pids.append(np.full(k.size, v, dtype=np.int64))
        ks.append(k)
        cs.append(c)
    if not ks:
        return empty_batch()
    return batch_canon(np.concatenate(pids), np.concatenate(ks), np.concatenate(cs))


def coeff_total(a):
    """Sum of all coefficients (the e -> 1 specialization)."""
    return int(a[1].sum()) if a[1].size else 0


def is_const(a, value):
    keys, coeffs = a
    if value == 0:
        return keys.size == 0
    return keys.size == 1 and int(coeffs[0]) == value


def poly_equal(a, b):
    ka, ca = a
    kb, cb = b
    return ka.size == kb.size and bool(np.array_equal(ka, kb)) and bool(np.array_equal(ca, cb))
