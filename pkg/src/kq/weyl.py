"""Weyl groups acting on the weight lattice.

A group element is stored as a flat row-major tuple of n*n ints: the
matrix of its action on fundamental-weight coordinates viewed as
column vectors, so multiply(w, u) is the matrix product and composes
actions as w after u.

Minimal coset representatives for W/W_P are built by *left*
multiplication from the identity: removing a left descent from a
minimal representative again gives a minimal representative, so a
length-increasing BFS over s_i * u reaches all of W^P.  (Building on
the right does not have this property.)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ._linalg import invert
from .errors import ResourceLimitError
from .roots import RootSystem, root_system

Element = tuple[int, ...]

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class ParabolicSubset:
    """Crossed-node description of a parabolic subgroup."""

    rank: int
    marked: frozenset[int]

    def __post_init__(self):
        if any(i < 0 or i >= self.rank for i in self.marked):
            raise ValueError("marked node out of range")

    @property
    def levi(self) -> frozenset[int]:
        return frozenset(range(self.rank)) - self.marked

    @classmethod
    def of(cls, rank: int, nodes) -> "ParabolicSubset":
        return cls(rank, frozenset(nodes))


class WeylGroup:
    def __init__(self, rs: RootSystem):
        self.rs = rs
        n = rs.rank
        self.n = n
        self.identity: Element = tuple(
            1 if j == k else 0 for j in range(n) for k in range(n)
        )
        self._simples = tuple(self._simple_matrix(i) for i in range(n))
        self._pos_weights = tuple(rs.root_to_weight(r) for r in rs.positive_roots)
        self._len_cache: dict[Element, int] = {self.identity: 0}
        self._inv_cache: dict[Element, Element] = {}
        self._word_cache: dict[Element, tuple[int, ...]] = {}
        self._bruhat_cache: dict[tuple[Element, Element], bool] = {}

    def _simple_matrix(self, i: int) -> Element:
        n = self.n
        cartan = self.rs.cartan
        mat = []
        for j in range(n):
            for k in range(n):
                if k == i:
                    mat.append((1 if j == i else 0) - cartan[i][j])
                else:
                    mat.append(1 if j == k else 0)
        return tuple(mat)

    def simple(self, i: int) -> Element:
        return self._simples[i]

    # -- group operations ----------------------------------------------------

    def multiply(self, w: Element, u: Element) -> Element:
        n = self.n
        out = []
        for j in range(n):
            row = w[j * n:(j + 1) * n]
            for k in range(n):
                out.append(sum(row[t] * u[t * n + k] for t in range(n)))
        return tuple(out)

    def inverse(self, w: Element) -> Element:
        cached = self._inv_cache.get(w)
        if cached is not None:
            return cached
        n = self.n
        rows = [[w[j * n + k] for k in range(n)] for j in range(n)]
        inv_rows = invert(rows)
        flat = []
        for row in inv_rows:
            for x in row:
                if x.denominator != 1:
                    raise AssertionError("Weyl matrix inverse not integral")
                flat.append(int(x))
        out = tuple(flat)
        self._inv_cache[w] = out
        self._inv_cache[out] = w
        return out

    def act(self, w: Element, weight) -> tuple[int, ...]:
        n = self.n
        return tuple(
            sum(w[j * n + k] * weight[k] for k in range(n)) for j in range(n)
        )

    def from_word(self, word) -> Element:
        out = self.identity
        for i in word:
            out = self.multiply(out, self._simples[i])
        return out

    # -- lengths, descents, words ---------------------------------------------

    def length(self, w: Element) -> int:
        cached = self._len_cache.get(w)
        if cached is None:
            sign = self.rs.weight_sign
            act = self.act
            cached = sum(1 for m in self._pos_weights if sign(act(w, m)) < 0)
            self._len_cache[w] = cached
        return cached

    def sign(self, w: Element) -> int:
        return -1 if self.length(w) % 2 else 1

    def right_descents(self, w: Element) -> list[int]:
        cartan = self.rs.cartan
        return [
            j for j in range(self.n)
            if self.rs.weight_sign(self.act(w, cartan[j])) < 0
        ]

    def left_descents(self, w: Element) -> list[int]:
        return self.right_descents(self.inverse(w))

    def reduced_word(self, w: Element) -> tuple[int, ...]:
        """Lexicographically minimal reduced word (greedy left descents)."""
        cached = self._word_cache.get(w)
        if cached is not None:
            return cached
        word = []
        v = self.inverse(w)
        cartan = self.rs.cartan
        while True:
            descents = [
                j for j in range(self.n)
                if self.rs.weight_sign(self.act(v, cartan[j])) < 0
            ]
            if not descents:
                break
            j = descents[0]
            word.append(j)
            v = self.multiply(v, self._simples[j])
        if v != self.identity:
            raise AssertionError("descent stripping must end at the identity")
        out = tuple(word)
        self._word_cache[w] = out
        return out

    # -- parabolic quotients ---------------------------------------------------

    def is_min_rep(self, w: Element, levi) -> bool:
        cartan = self.rs.cartan
        sign = self.rs.weight_sign
        return all(sign(self.act(w, cartan[j])) > 0 for j in levi)

    def min_rep(self, w: Element, levi) -> Element:
        cartan = self.rs.cartan
        sign = self.rs.weight_sign
        while True:
            j = next(
                (j for j in levi if sign(self.act(w, cartan[j])) < 0), None
            )
            if j is None:
                return w
            w = self.multiply(w, self._simples[j])

    def minimal_representatives(self, levi, cap: int = DEFAULT_CAP) -> tuple[Element, ...]:
        """All of W^P, sorted by (length, reduced word)."""
        levi = sorted(levi)
        found = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for u in frontier:
                lu = self.length(u)
                for i in range(self.n):
                    v = self.multiply(self._simples[i], u)
                    if v in found or self.length(v) != lu + 1:
                        continue
                    if self.is_min_rep(v, levi):
                        found.add(v)
                        nxt.append(v)
                        if len(found) > cap:
                            raise ResourceLimitError(
                                f"parabolic quotient has more than {cap} "
                                "minimal representatives",
                                cap=cap,
                            )
            frontier = nxt
        return tuple(sorted(found, key=lambda w: (self.length(w), self.reduced_word(w))))

    def subgroup_elements(self, nodes, cap: int = DEFAULT_CAP) -> tuple[Element, ...]:
        """The parabolic subgroup W_J generated by the given simple nodes."""
        nodes = sorted(set(nodes))
        found = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for u in frontier:
                lu = self.length(u)
                for i in nodes:
                    v = self.multiply(self._simples[i], u)
                    if v not in found and self.length(v) == lu + 1:
                        found.add(v)
                        nxt.append(v)
                        if len(found) > cap:
                            raise ResourceLimitError(
                                f"parabolic subgroup has more than {cap} elements",
                                cap=cap,
                            )
            frontier = nxt
        return tuple(sorted(found, key=lambda w: (self.length(w), self.reduced_word(w))))

    def longest_element(self, nodes, cap: int = DEFAULT_CAP) -> Element:
        """Longest element of W_J by the antidominant chamber walk.

        Start from a weight strictly dominant on J and apply s_j whenever the
        j-th coordinate is still positive; the accumulated product is w_0(J)
        after exactly |Phi^+_J| steps, so huge groups cost nothing extra.
        """
        nodes = sorted(set(nodes))
        target = len(self.rs.levi_positive_roots(nodes))
        cur = tuple(1 if i in nodes else 0 for i in range(self.n))
        w = self.identity
        for _ in range(target):
            j = next(i for i in nodes if cur[i] > 0)
            cur = self.act(self._simples[j], cur)
            w = self.multiply(self._simples[j], w)
        if any(cur[i] >= 0 for i in nodes):
            raise AssertionError("chamber walk did not reach the antidominant cone")
        return w

    def max_min_rep(self, levi, cap: int = DEFAULT_CAP) -> Element:
        reps = self.minimal_representatives(levi, cap)
        top = reps[-1]
        if len(reps) > 1 and self.length(reps[-2]) == self.length(top):
            raise AssertionError("maximal minimal representative must be unique")
        return top

    # -- Bruhat order ------------------------------------------------------------

    def bruhat_leq(self, u: Element, w: Element) -> bool:
        if u == self.identity:
            return True
        if u == w:
            return True
        key = (u, w)
        cached = self._bruhat_cache.get(key)
        if cached is not None:
            return cached
        if self.length(u) >= self.length(w):
            self._bruhat_cache[key] = False
            return False
        descents = self.left_descents(w)
        if not descents:
            result = False
        else:
            i = descents[0]
            si = self._simples[i]
            sw = self.multiply(si, w)
            if i in self.left_descents(u):
                result = self.bruhat_leq(self.multiply(si, u), sw)
            else:
                result = self.bruhat_leq(u, sw)
        self._bruhat_cache[key] = result
        return result


@lru_cache(maxsize=None)
def weyl_group(letter: str, rank: int) -> WeylGroup:
    return WeylGroup(root_system(letter, rank))
