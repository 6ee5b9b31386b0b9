"""Space/degree catalog: which Schubert variety a degree-d curve sweeps.

Each cominuscule space X = G/P ships with its two critical degrees
(d_max: two general points, D_max: three general points) and, for the
degrees 0 < d < D_max where the data is known, the element w_d whose
Schubert variety X(w_d) has a unique translate containing a general
degree-d curve, together with the parabolic Q_d stabilizing it.

Node numbers and reduced words are 1-indexed Bourbaki in the JSON file
and converted to 0-indexed on load.  Y_d = point is encoded by the
sentinel sigma_Qd = all simple nodes (an all-crossed set would otherwise
denote G/B, which never occurs as a legitimate Y_d here).

Provenance tags: "table" (value printed in the source tables),
"external" (classical type-A degree data), "derived" (synthesized, e.g.
the d >= D_max regime).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import CatalogError, ValidationError
from .roots import root_system
from .weyl import weyl_group

# frozen over the verbatim text of the two degree-table blocks
TABLE_SHA256 = "761bcf31e7d0a3670f5dd8bd2e7d0971a768c872a463f240443cc3fd1d58a75a"

PROVENANCE_TAGS = ("table", "external", "derived")


@dataclass(frozen=True)
class DegreeData:
    d: int
    w_d: tuple[int, ...]            # reduced word, 0-indexed letters
    sigma_Qd: frozenset[int]        # crossed nodes of Q_d, 0-indexed
    zd_homogeneous: bool
    provenance: str

    def is_point(self, rank: int) -> bool:
        return self.sigma_Qd == frozenset(range(rank))


@dataclass(frozen=True)
class SpaceDescriptor:
    name: str
    letter: str
    rank: int
    sigma_P: frozenset[int]
    dim_X: int
    c1: int
    d_max: int
    D_max: int
    degrees: dict[int, DegreeData] = field(repr=False)
    provenance: str = "table"
    veronese_model: tuple[int, int] | None = None
    disputed_degrees: frozenset[int] = frozenset()

    @property
    def marked_node(self) -> int:
        (node,) = self.sigma_P
        return node

    def degree_data(self, d: int) -> DegreeData:
        """Degree entry, synthesizing the d = 0 and d >= D_max regimes."""
        if d < 0:
            raise ValidationError(f"degree must be nonnegative, got {d}")
        if d in self.disputed_degrees:
            raise CatalogError(
                f"{self.name}: degree {d} lies in the disputed band of the "
                "C-family row (the table and the Veronese threshold "
                "disagree); refusing to pick a side",
                reason="disputed-band")
        if d in self.degrees:
            return self.degrees[d]
        g = weyl_group(self.letter, self.rank)
        levi = sorted(frozenset(range(self.rank)) - self.sigma_P)
        if d == 0:
            # Y_0 = X: the unique translate of a point through a constant map
            return DegreeData(0, (), frozenset(self.sigma_P), True, "derived")
        if d >= self.D_max:
            # Y_d = point, X(w_d) = X
            w = g.max_min_rep(levi)
            return DegreeData(d, g.reduced_word(w),
                              frozenset(range(self.rank)), True, "derived")
        raise CatalogError(
            f"{self.name}: no catalog entry for degree {d} "
            f"(0 < {d} < D_max = {self.D_max}); the low-degree data for this "
            "family is not shipped")


@dataclass(frozen=True)
class Catalog:
    spaces: tuple[SpaceDescriptor, ...]
    table_text: tuple[str, ...]
    table_checksum: str
    cn_dispute: dict

    def __getitem__(self, name: str) -> SpaceDescriptor:
        for s in self.spaces:
            if s.name == name:
                return s
        raise ValidationError(f"unknown space {name!r}; known: "
                              + ", ".join(s.name for s in self.spaces))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.spaces)


def gw_dimension(s: SpaceDescriptor, d: int) -> int:
    """Expected dimension d*c1 - 2*dim of the three-point locus."""
    if d < 0:
        raise ValidationError(f"degree must be nonnegative, got {d}")
    return d * s.c1 - 2 * s.dim_X


def _check_degree_entry(s: SpaceDescriptor, entry: DegreeData) -> None:
    g = weyl_group(s.letter, s.rank)
    levi = sorted(frozenset(range(s.rank)) - s.sigma_P)
    w = g.from_word(entry.w_d)
    if g.length(w) != len(entry.w_d):
        raise ValidationError(
            f"{s.name} d={entry.d}: w_d word is not reduced")
    if g.min_rep(w, levi) != w:
        raise ValidationError(
            f"{s.name} d={entry.d}: w_d is not a minimal coset representative")
    if not (0 < entry.d < s.D_max):
        raise ValidationError(
            f"{s.name}: explicit degree entries must satisfy 0 < d < D_max, "
            f"got d={entry.d}")
    # the fixed locus of X(w_d) must be stable under exactly the levi of Q_d
    reps = g.minimal_representatives(levi)
    below = {z for z in reps if g.bruhat_leq(z, w)}

    def stable(j: int) -> bool:
        return all(g.min_rep(g.multiply(g.simple(j), z), levi) in below
                   for z in below)

    for j in range(s.rank):
        if j in entry.sigma_Qd:
            if stable(j):
                raise ValidationError(
                    f"{s.name} d={entry.d}: node {j + 1} is crossed in "
                    "sigma_Qd but stabilizes X(w_d); the stabilizer is "
                    "larger than the recorded Q_d")
        elif not stable(j):
            raise ValidationError(
                f"{s.name} d={entry.d}: node {j + 1} is not crossed in "
                "sigma_Qd but does not stabilize X(w_d)")


def _check_space(s: SpaceDescriptor) -> None:
    rs = root_system(s.letter, s.rank)
    if not s.sigma_P:
        raise ValidationError(f"{s.name}: sigma_P must be nonempty")
    if len(s.sigma_P) != 1 or s.marked_node not in rs.cominuscule_nodes:
        raise ValidationError(
            f"{s.name}: sigma_P {sorted(i + 1 for i in s.sigma_P)} is not a "
            "single cominuscule node")
    complement = rs.positive_complement(s.sigma_P)
    dim = len(complement)
    if dim != s.dim_X:
        raise ValidationError(
            f"{s.name}: dim_X {s.dim_X} disagrees with root data ({dim})")
    p = s.marked_node
    c1 = sum(rs.root_to_weight(r)[p] for r in complement)
    if c1 != s.c1:
        raise ValidationError(
            f"{s.name}: c1 {s.c1} disagrees with root data ({c1})")
    if s.d_max > s.D_max:
        raise ValidationError(f"{s.name}: d_max {s.d_max} > D_max {s.D_max}")
    if s.provenance not in PROVENANCE_TAGS:
        raise ValidationError(f"{s.name}: unknown provenance tag")
    for d, entry in s.degrees.items():
        if entry.d != d or entry.provenance not in PROVENANCE_TAGS:
            raise ValidationError(f"{s.name}: malformed degree entry {d}")
        _check_degree_entry(s, entry)


def _nodes(raw, rank: int, what: str) -> frozenset[int]:
    out = set()
    for i in raw:
        if not isinstance(i, int) or not 1 <= i <= rank:
            raise ValidationError(f"{what}: node {i!r} outside 1..{rank}")
        out.add(i - 1)
    return frozenset(out)


def load_catalog(path: str | None = None) -> Catalog:
    """Load and fully validate a catalog file (default: the bundled one)."""
    if path is None:
        raw = resources.files("kq").joinpath("data/catalog.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"catalog is not valid JSON: {exc}") from exc
    if doc.get("schema") != "kq-catalog/1":
        raise ValidationError("catalog schema marker missing or unsupported")
    text = doc.get("table_text")
    checksum = doc.get("table_checksum")
    if not isinstance(text, list) or not all(isinstance(x, str) for x in text):
        raise ValidationError("table_text must be a list of strings")
    digest = hashlib.sha256(("\n".join(text) + "\n").encode("utf-8")).hexdigest()
    if digest != checksum:
        raise ValidationError(
            "table_checksum does not match table_text; refusing a silently "
            "edited table")
    if digest != TABLE_SHA256:
        raise ValidationError(
            "table text differs from the frozen source tables "
            f"(sha256 {digest})")
    spaces = []
    for entry in doc.get("spaces", []):
        try:
            letter, rank = entry["type"]
            degrees = {}
            for dd in entry["degrees"]:
                word = tuple(i - 1 for i in dd["w_d"])
                if any(not 0 <= i < rank for i in word):
                    raise ValidationError(
                        f"{entry['name']}: w_d letter outside 1..{rank}")
                degrees[dd["d"]] = DegreeData(
                    d=dd["d"],
                    w_d=word,
                    sigma_Qd=_nodes(dd["sigma_Qd"], rank,
                                    f"{entry['name']} sigma_Qd"),
                    zd_homogeneous=bool(dd["zd_homogeneous"]),
                    provenance=dd["provenance"],
                )
            model = entry.get("veronese_model")
            s = SpaceDescriptor(
                name=entry["name"],
                letter=letter,
                rank=rank,
                sigma_P=_nodes(entry["sigma_P"], rank,
                               f"{entry['name']} sigma_P"),
                dim_X=entry["dim_X"],
                c1=entry["c1"],
                d_max=entry["d_max"],
                D_max=entry["D_max"],
                degrees=degrees,
                provenance=entry["provenance"],
                veronese_model=tuple(model) if model else None,
                disputed_degrees=frozenset(entry.get("disputed_degrees", [])),
            )
        except KeyError as exc:
            raise ValidationError(
                f"catalog space entry missing field {exc}") from exc
        _check_space(s)
        spaces.append(s)
    names = [s.name for s in spaces]
    if len(set(names)) != len(names):
        raise ValidationError("duplicate space names in catalog")
    return Catalog(
        spaces=tuple(spaces),
        table_text=tuple(text),
        table_checksum=checksum,
        cn_dispute=doc.get("cn_dispute", {}),
    )


@dataclass(frozen=True)
class Flag:
    kind: str                      # "cn-row" | "dimension-exception"
    space: str
    detail: str


@dataclass(frozen=True)
class ConsistencyReport:
    flags: tuple[Flag, ...]
    checked: tuple[str, ...]

    @property
    def clean(self) -> bool:
        return not self.flags


def consistency_report(catalog: Catalog) -> ConsistencyReport:
    """Cross-check the catalog against dimension counts and Veronese degrees.

    Three checks per space: (i) the naive dimension gw_dimension(d) should
    be negative for every 0 < d < D_max (no curve through three general
    points below the critical degree); (ii) where the space carries a
    Veronese model X(a,n), the emptiness threshold n must equal D_max;
    (iii) the C-family row is compared against that threshold at the
    formula level.  Discrepancies are reported, never repaired.
    """
    flags = []
    checked = []
    cn_exceptions = []
    for s in catalog.spaces:
        checked.append(s.name)
        for d in range(1, s.D_max):
            dim = gw_dimension(s, d)
            if dim < 0:
                continue
            if d in s.disputed_degrees:
                cn_exceptions.append(
                    f"{s.name}: gw_dimension({d}) = {dim} >= 0 inside the "
                    "disputed band")
            else:
                flags.append(Flag(
                    kind="dimension-exception",
                    space=s.name,
                    detail=(
                        f"gw_dimension({d}) = {dim} >= 0 while d < D_max = "
                        f"{s.D_max}: the three-point locus has nonnegative "
                        "expected dimension yet no curve exists"),
                ))
        if s.veronese_model is not None:
            _, n = s.veronese_model
            if n != s.D_max and s.letter != "C":
                flags.append(Flag(
                    kind="dimension-exception",
                    space=s.name,
                    detail=(f"Veronese threshold {n} differs from D_max "
                            f"{s.D_max}"),
                ))
            elif n != s.D_max:
                cn_exceptions.append(
                    f"{s.name}: Veronese threshold {n} < table D_max {s.D_max}")
    # formula-level C-family check: the row says n+1, the threshold says n
    dispute = catalog.cn_dispute
    if dispute or cn_exceptions:
        detail = ("table row has d_max = D_max = "
                  f"{dispute.get('table_D_max', 'n+1')} but the degree-n "
                  "Veronese model gives a nonempty rational three-point locus "
                  "already at d = n")
        if cn_exceptions:
            detail += "; " + "; ".join(cn_exceptions)
        flags.append(Flag(kind="cn-row",
                          space=dispute.get("space", "C-family"),
                          detail=detail))
    order = {"cn-row": 1, "dimension-exception": 0}
    flags.sort(key=lambda f: (order.get(f.kind, 9), f.space))
    return ConsistencyReport(flags=tuple(flags), checked=tuple(checked))
