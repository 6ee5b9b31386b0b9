"""Exact root-system combinatorics for the finite crystallographic types.

Coordinate conventions used across the whole package:

* Simple roots are realised as exact rational vectors in a euclidean
  space, in the classical epsilon coordinates (type A_{n-1} lives in
  R^n, types B/C/D_n in R^n, E-types inside R^8, F4 in R^4, G2 in R^3).
* A *root coordinate* tuple c means the root sum_i c_i alpha_i.
* A *weight* is an integer tuple in fundamental-weight coordinates:
  m_j = <lambda, alpha_j^vee>.
* A *coroot coordinate* tuple d means sum_j d_j alpha_j^vee.

With cartan[i][j] = <alpha_i, alpha_j^vee>, root coordinates convert to
weight coordinates by m_j = sum_i c_i * cartan[i][j].

Node indices are 0-based everywhere in this package; 1-based labels
exist only at the CLI / JSON boundary.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from ._linalg import invert

RootCoords = tuple[int, ...]
Weight = tuple[int, ...]
Eps = tuple[Fraction, ...]

_RANK_RANGE = {
    "A": range(1, 33),
    "B": range(2, 33),
    "C": range(2, 33),
    "D": range(3, 33),
    "E": range(6, 9),
    "F": range(4, 5),
    "G": range(2, 3),
}


def _check_type(letter: str, rank: int) -> None:
    if letter not in _RANK_RANGE or rank not in _RANK_RANGE[letter]:
        raise ValueError(f"unsupported root system {letter}{rank}")


def _e8_simple_roots() -> list[list[Fraction]]:
    half = Fraction(1, 2)
    rows = [[half, -half, -half, -half, -half, -half, -half, half],
            [1, 1, 0, 0, 0, 0, 0, 0],
            [-1, 1, 0, 0, 0, 0, 0, 0]]
    for i in range(2, 7):
        row = [0] * 8
        row[i] = 1
        row[i - 1] = -1
        rows.append(row)
    return [[Fraction(x) for x in row] for row in rows]


def _simple_roots_eps(letter: str, rank: int) -> list[Eps]:
    _check_type(letter, rank)
    rows: list[list[Fraction]] = []
    if letter == "A":
        dim = rank + 1
        for i in range(rank):
            row = [Fraction(0)] * dim
            row[i], row[i + 1] = Fraction(1), Fraction(-1)
            rows.append(row)
    elif letter in ("B", "C", "D"):
        for i in range(rank - 1):
            row = [Fraction(0)] * rank
            row[i], row[i + 1] = Fraction(1), Fraction(-1)
            rows.append(row)
        last = [Fraction(0)] * rank
        if letter == "B":
            last[rank - 1] = Fraction(1)
        elif letter == "C":
            last[rank - 1] = Fraction(2)
        else:
            last[rank - 2] = Fraction(1)
            last[rank - 1] = Fraction(1)
        rows.append(last)
    elif letter == "E":
        rows = _e8_simple_roots()[:rank]
    elif letter == "F":
        half = Fraction(1, 2)
        rows = [[Fraction(0), Fraction(1), Fraction(-1), Fraction(0)],
                [Fraction(0), Fraction(0), Fraction(1), Fraction(-1)],
                [Fraction(0), Fraction(0), Fraction(0), Fraction(1)],
                [half, -half, -half, -half]]
    else:  # G2 inside the sum-zero plane of R^3
        rows = [[Fraction(1), Fraction(-1), Fraction(0)],
                [Fraction(-2), Fraction(1), Fraction(1)]]
    return [tuple(row) for row in rows]


def _dot(u: Eps, v: Eps) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@lru_cache(maxsize=None)
def cartan_matrix(letter: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """cartan[i][j] = <alpha_i, alpha_j^vee>, exact integers."""
    simple = _simple_roots_eps(letter, rank)
    norms = [_dot(a, a) for a in simple]
    out = []
    for i in range(rank):
        row = []
        for j in range(rank):
            val = 2 * _dot(simple[i], simple[j]) / norms[j]
            if val.denominator != 1:
                raise AssertionError("non-integral Cartan entry")
            row.append(int(val))
        out.append(tuple(row))
    return tuple(out)


class RootSystem:
    """Immutable data for one irreducible root system.

    Use the module-level `root_system` factory; instances are cached
    and safe to compare by identity.
    """

    def __init__(self, letter: str, rank: int):
        _check_type(letter, rank)
        self.letter = letter
        self.rank = rank
        self.simple_eps: tuple[Eps, ...] = tuple(_simple_roots_eps(letter, rank))
        self.norm2: tuple[Fraction, ...] = tuple(_dot(a, a) for a in self.simple_eps)
        self.cartan = cartan_matrix(letter, rank)
        self._cartan_inv = invert([list(row) for row in self.cartan])
        self.positive_roots: tuple[RootCoords, ...] = self._generate_positive_roots()
        self._positive_set = frozenset(self.positive_roots)
        self.highest_root: RootCoords = self._find_highest_root()
        # hvec . m is positive exactly when the weight m is a positive root
        hv = [sum(row, Fraction(0)) for row in self._cartan_inv]
        denom = 1
        for x in hv:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
        self.height_vector: tuple[int, ...] = tuple(int(x * denom) for x in hv)
        if any(h <= 0 for h in self.height_vector):
            raise AssertionError("height vector must be positive")

    # -- basic conversions -------------------------------------------------

    def root_to_weight(self, coords) -> Weight:
        n = self.rank
        return tuple(
            sum(coords[i] * self.cartan[i][j] for i in range(n)) for j in range(n)
        )

    def simple_root_weight(self, i: int) -> Weight:
        return tuple(self.cartan[i])

    def eps_of_root(self, coords) -> Eps:
        vec = [Fraction(0)] * len(self.simple_eps[0])
        for c, alpha in zip(coords, self.simple_eps):
            if c:
                for k, x in enumerate(alpha):
                    vec[k] += c * x
        return tuple(vec)

    def root_coords_of_weight(self, weight) -> tuple[Fraction, ...]:
        """Solve m = C^T c; entries are Fractions for a general weight."""
        n = self.rank
        return tuple(
            sum((Fraction(weight[j]) * self._cartan_inv[j][i] for j in range(n)),
                Fraction(0))
            for i in range(n)
        )

    def eps_of_weight(self, weight) -> Eps:
        return self.eps_of_root(self.root_coords_of_weight(weight))

    def weight_coords_of_eps(self, vec) -> tuple[Fraction, ...]:
        return tuple(
            2 * _dot(tuple(vec), alpha) / n2
            for alpha, n2 in zip(self.simple_eps, self.norm2)
        )

    def coroot_coords(self, coords) -> tuple[int, ...]:
        """Coordinates of alpha^vee in the simple coroot basis."""
        root_norm2 = _dot(self.eps_of_root(coords), self.eps_of_root(coords))
        out = []
        for c, n2 in zip(coords, self.norm2):
            val = Fraction(c) * n2 / root_norm2
            if val.denominator != 1:
                raise AssertionError("coroot coordinates must be integral")
            out.append(int(val))
        return tuple(out)

    # -- pairings and signs ------------------------------------------------

    def pairing(self, weight, coroot) -> int:
        """<lambda, sum_j d_j alpha_j^vee> for a weight in m-coordinates."""
        return sum(m * d for m, d in zip(weight, coroot))

    def pairing_eps(self, vec, coroot) -> Fraction:
        acc = Fraction(0)
        for d, alpha, n2 in zip(coroot, self.simple_eps, self.norm2):
            if d:
                acc += d * 2 * _dot(tuple(vec), alpha) / n2
        return acc

    def weight_sign(self, weight) -> int:
        """Sign of a root given in weight coordinates (0 for the zero weight)."""
        val = sum(h * m for h, m in zip(self.height_vector, weight))
        return (val > 0) - (val < 0)

    def is_root_weight(self, weight) -> bool:
        coords = self.root_coords_of_weight(weight)
        if any(x.denominator != 1 for x in coords):
            return False
        tup = tuple(int(x) for x in coords)
        return tup in self._positive_set or tuple(-x for x in tup) in self._positive_set

    # -- root generation ---------------------------------------------------

    def _reflect_root(self, coords: RootCoords, j: int) -> RootCoords:
        pair = sum(coords[i] * self.cartan[i][j] for i in range(self.rank))
        out = list(coords)
        out[j] -= pair
        return tuple(out)

    def _generate_positive_roots(self) -> tuple[RootCoords, ...]:
        n = self.rank
        simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        seen: set[RootCoords] = set(simple)
        frontier = list(simple)
        while frontier:
            root = frontier.pop()
            for j in range(n):
                image = self._reflect_root(root, j)
                if image not in seen:
                    seen.add(image)
                    frontier.append(image)
        for root in seen:
            pos = all(c >= 0 for c in root)
            neg = all(c <= 0 for c in root)
            if not (pos or neg):
                raise AssertionError("mixed-sign root generated")
        positives = [r for r in seen if all(c >= 0 for c in r)]
        positives.sort(key=lambda r: (sum(r), r))
        return tuple(positives)

    def _find_highest_root(self) -> RootCoords:
        top = self.positive_roots[-1]
        if len(self.positive_roots) > 1 \
                and sum(self.positive_roots[-2]) == sum(top):
            raise AssertionError("highest root is not unique")
        if any(m < 0 for m in self.root_to_weight(top)):
            raise AssertionError("highest root must be dominant")
        return top

    # -- parabolic bookkeeping ----------------------------------------------

    def levi_positive_roots(self, levi_nodes) -> tuple[RootCoords, ...]:
        keep = set(levi_nodes)
        return tuple(
            r for r in self.positive_roots
            if all(i in keep for i, c in enumerate(r) if c)
        )

    def positive_complement(self, marked_nodes) -> tuple[RootCoords, ...]:
        marked = set(marked_nodes)
        return tuple(
            r for r in self.positive_roots if any(r[i] for i in marked)
        )

    @property
    def cominuscule_nodes(self) -> frozenset[int]:
        return frozenset(
            i for i, c in enumerate(self.highest_root) if c == 1
        )

    def fundamental_weight_root_coords(self, i: int) -> tuple[Fraction, ...]:
        return tuple(self._cartan_inv[i])

    def fundamental_coweight(self, i: int) -> tuple[Fraction, ...]:
        return tuple(row[i] for row in self._cartan_inv)

    # -- diagram handling ----------------------------------------------------

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (i, j)
            for i, j in combinations(range(self.rank), 2)
            if self.cartan[i][j] != 0
        )

    def identify_components(self, nodes):
        """Classify the sub-diagram induced on `nodes`.

        Returns a list of (letter, rank, ordered_nodes) with ordered_nodes a
        tuple of original node indices arranged so that the induced Cartan
        matrix equals cartan_matrix(letter, rank) entrywise.  Components are
        listed by smallest member.  Simply-laced chains classify as type A
        (so a D3-shaped piece comes back as A3) and a rank-2 double bond
        comes back as B2.
        """
        nodes = sorted(set(nodes))
        if any(i < 0 or i >= self.rank for i in nodes):
            raise ValueError("node index out of range")
        components = []
        unseen = set(nodes)
        while unseen:
            start = min(unseen)
            comp = {start}
            stack = [start]
            while stack:
                cur = stack.pop()
                for other in unseen - comp:
                    if self.cartan[cur][other] != 0:
                        comp.add(other)
                        stack.append(other)
            unseen -= comp
            components.append(sorted(comp))
        return [self._classify_component(comp) for comp in components]

    def _classify_component(self, comp: list[int]):
        rank = len(comp)
        candidates = [
            letter for letter in "ABCDEFG" if rank in _RANK_RANGE[letter]
        ]
        for letter in candidates:
            target = cartan_matrix(letter, rank)
            order = self._match_cartan(comp, target)
            if order is not None:
                return letter, rank, order
        raise AssertionError(f"unclassifiable sub-diagram {comp}")

    def _match_cartan(self, comp: list[int], target) -> tuple[int, ...] | None:
        rank = len(comp)

        def extend(assigned: list[int]) -> tuple[int, ...] | None:
            pos = len(assigned)
            if pos == rank:
                return tuple(assigned)
            for node in comp:
                if node in assigned:
                    continue
                ok = True
                for prev_pos, prev in enumerate(assigned):
                    if (self.cartan[prev][node] != target[prev_pos][pos]
                            or self.cartan[node][prev] != target[pos][prev_pos]):
                        ok = False
                        break
                if ok:
                    result = extend(assigned + [node])
                    if result is not None:
                        return result
            return None

        return extend([])


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=None)
def root_system(letter: str, rank: int) -> RootSystem:
    """Cached factory; the canonical way to get a RootSystem."""
    return RootSystem(letter, rank)
