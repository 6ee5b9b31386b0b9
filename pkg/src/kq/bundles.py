"""Weight-level data for open-cell fibrations of homogeneous spaces.

A cominuscule parabolic Q acting on X = G/P has a dense orbit Z whose
projection to a smaller homogeneous space Y is a vector bundle; the fibre
directions form a representation of the stabiliser and everything about the
bundle (rank, first Chern number, restriction to rational curves) can be read
off from exact root and weight combinatorics.  This module computes those
weight multisets and the handful of fixed exceptional-group configurations
built on them.  No geometry is represented beyond integer weight data.

Conventions.  Fibre weights are the honest torus weights of the cell
directions, i.e. of U_Q^{w0}/(U_Q^{w0} cap P); they are negative roots.  For
an associated bundle the degree of a line summand on the curve generated by a
coroot h is minus the pairing of its weight with h, so all first Chern
numbers below come out with the sign geometry expects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import InternalConsistencyError, ValidationError
from .roots import RootSystem, root_system
from .weyl import WeylGroup

RootCoords = tuple[int, ...]


def _root_coords(rs: RootSystem, weight) -> RootCoords:
    coords = rs.root_coords_of_weight(weight)
    if any(x.denominator != 1 for x in coords):
        raise InternalConsistencyError("expected a root-lattice weight")
    return tuple(int(x) for x in coords)


def _in_parabolic(coords: RootCoords, marked) -> bool:
    # roots of P(marked) are the positive ones plus the Levi negatives; both
    # cases amount to non-negative coefficients on every marked node
    return all(coords[i] >= 0 for i in marked)


def weyl_involution(letter: str, rank: int) -> tuple[int, ...]:
    """The diagram involution j -> k with w0(alpha_j) = -alpha_k."""
    rs = root_system(letter, rank)
    g = WeylGroup(rs)
    w0 = g.longest_element(range(rank))
    out = []
    for j in range(rank):
        image = g.act(w0, rs.simple_root_weight(j))
        coords = _root_coords(rs, tuple(-x for x in image))
        if sum(coords) != 1 or any(c not in (0, 1) for c in coords):
            raise InternalConsistencyError("w0 must send simple roots to negatives of simple roots")
        out.append(coords.index(1))
    return tuple(out)


def reflect(rs: RootSystem, weight, root: RootCoords) -> tuple[int, ...]:
    """Reflection of a weight (m-coordinates) in the given root."""
    coroot = rs.coroot_coords(root)
    c = rs.pairing(weight, coroot)
    rw = rs.root_to_weight(root)
    return tuple(m - c * a for m, a in zip(weight, rw))


def degree_pairing(rs: RootSystem, weights, coroot) -> tuple[int, ...]:
    """Pair each weight (m-coordinates) against a coroot-lattice vector."""
    coroot = tuple(coroot)
    if len(coroot) != rs.rank:
        raise ValidationError("coroot vector has the wrong rank")
    out = []
    for w in weights:
        if len(w) != rs.rank:
            raise ValidationError("weight vector has the wrong rank")
        out.append(rs.pairing(w, coroot))
    return tuple(out)


# ---------------------------------------------------------------------------
# generic fibration data


@dataclass(frozen=True)
class FibrationData:
    letter: str
    rank: int
    p_nodes: tuple[int, ...]
    q_node: int
    codim_two: bool
    y_nodes: tuple[int, ...]
    y_marked: tuple[int, ...]
    y_components: tuple
    y_dim: int
    x_dim: int
    e_weights: tuple
    e_rank: int
    c1: tuple[int, ...]


def fibration_data(letter: str, rank: int, p_nodes, q_node: int) -> FibrationData:
    """Weight data of the open-cell fibration Z -> Y defined by (P, Q).

    P is the parabolic of X = G/P (any nonempty set of marked nodes) and Q a
    maximal parabolic whose unipotent radical must be abelian, i.e. q_node
    must be cominuscule; otherwise the dense Q-orbit is only an iterated
    affine bundle and this constructor refuses (see adjoint_tower_data for
    the two-step case).
    """
    rs = root_system(letter, rank)
    p_nodes = tuple(sorted(set(p_nodes)))
    if not p_nodes or any(i < 0 or i >= rank for i in p_nodes):
        raise ValidationError("p_nodes must be a nonempty set of diagram nodes")
    if q_node not in rs.cominuscule_nodes:
        raise ValidationError(
            f"node {q_node + 1} of {letter}{rank} is not cominuscule; "
            "the orbit fibration is not a single vector bundle"
        )
    g = WeylGroup(rs)
    w0 = g.longest_element(range(rank))
    iq = weyl_involution(letter, rank)[q_node]

    e_weights = []
    for rt in rs.positive_complement([q_node]):
        coords = _root_coords(rs, g.act(w0, rs.root_to_weight(rt)))
        if not _in_parabolic(coords, p_nodes):
            e_weights.append(coords)
    e_weights.sort()

    y_nodes = tuple(j for j in range(rank) if j != iq)
    y_marked = tuple(j for j in p_nodes if j != iq)
    y_dim = sum(
        1 for r in rs.levi_positive_roots(y_nodes) if any(r[j] for j in y_marked)
    )
    x_dim = len(rs.positive_complement(p_nodes))
    if len(e_weights) != x_dim - y_dim:
        raise InternalConsistencyError("fibre rank must equal dim X - dim Y")

    det = [0] * rank
    for coords in e_weights:
        for j, m in enumerate(rs.root_to_weight(coords)):
            det[j] += m
    for j in y_nodes:
        if j not in y_marked and det[j] != 0:
            raise InternalConsistencyError(
                "det E must be a character of the Levi of the base"
            )
    c1 = tuple(-det[j] for j in y_marked)

    return FibrationData(
        letter=letter,
        rank=rank,
        p_nodes=p_nodes,
        q_node=q_node,
        codim_two=(iq not in p_nodes),
        y_nodes=y_nodes,
        y_marked=y_marked,
        y_components=tuple(rs.identify_components(y_nodes)),
        y_dim=y_dim,
        x_dim=x_dim,
        e_weights=tuple(e_weights),
        e_rank=len(e_weights),
        c1=c1,
    )


# ---------------------------------------------------------------------------
# sub-root-system classification (conjugated Levis are not diagram-induced)


def classify_subsystem(rs: RootSystem, roots) -> list[tuple[str, int]]:
    """Cartan types of the components of a closed symmetric set of roots.

    The set must contain the negative of each member.  Components are found
    through non-orthogonality of the simple elements (the positive members
    that are not sums of two positive members) and the letter is decided by
    rank, root count and root lengths.
    """
    roots = {tuple(r) for r in roots}
    if any(tuple(-x for x in r) not in roots for r in roots):
        raise ValidationError("root set must be symmetric")
    pos = [r for r in roots if sum(r) > 0]
    pos_set = set(pos)
    simples = [
        p for p in pos
        if not any(
            tuple(a - b for a, b in zip(p, q)) in pos_set for q in pos_set if q != p
        )
    ]
    coroots = {s: rs.coroot_coords(s) for s in simples}
    comps: list[list[RootCoords]] = []
    unseen = set(simples)
    while unseen:
        comp = [unseen.pop()]
        grew = True
        while grew:
            grew = False
            for s in list(unseen):
                if any(rs.pairing(rs.root_to_weight(s), coroots[t]) for t in comp):
                    comp.append(s)
                    unseen.discard(s)
                    grew = True
        comps.append(comp)

    out = []
    for comp in comps:
        members = [
            p for p in pos
            if any(rs.pairing(rs.root_to_weight(p), coroots[s]) for s in comp)
        ]
        r, count = len(comp), len(members)
        lengths = {
            sum(a * b for a, b in zip(rs.eps_of_root(p), rs.eps_of_root(p)))
            for p in members
        }
        if count == r * (r + 1) // 2 and len(lengths) == 1:
            out.append(("A", r))
        elif r >= 2 and count == r * r:
            out.append(("B", r))  # B and C agree as abstract systems of rank 2
        elif r >= 3 and count == r * (r - 1) and len(lengths) == 1:
            out.append(("D", r))
        elif r == 2 and count == 6:
            out.append(("G", 2))
        else:
            raise InternalConsistencyError("unrecognised root subsystem")
    return sorted(out)


# ---------------------------------------------------------------------------
# spinor bundle restricted to the sl2(theta + alpha_1) conic


def spinor_fiber_weights(delta: int, parity: int = 0):
    """Fibre weights of the spinor bundle on the 2*delta-dimensional quadric.

    The isometry group is Spin(2*delta + 2), type D_{delta+1}; the quadric is
    its cominuscule space for the first node, and the bundle fibre at the
    base point consists of the half-spin weights with first epsilon
    coordinate -1/2 (the central charge is part of the weight).  parity picks
    which of the two half-spin representations is meant.
    """
    if delta < 2:
        raise ValidationError("need a quadric of dimension at least 4")
    if parity not in (0, 1):
        raise ValidationError("parity must be 0 or 1")
    half = Fraction(1, 2)
    out = []
    for signs in product((half, -half), repeat=delta):
        if (1 + sum(1 for s in signs if s < 0)) % 2 == parity:
            out.append((-half,) + signs)
    return tuple(sorted(out))


def spinor_degree_multiset(delta: int, parity: int = 0) -> tuple[int, ...]:
    """Line-bundle degrees of the spinor bundle on the degree-2 conic.

    Inside the isometry group take the highest root theta and the first
    simple root alpha_1; they are orthogonal and h = theta^vee + alpha_1^vee
    kills every other simple root, so h is twice the first epsilon axis.  The
    sl2 through the root vectors of theta and alpha_1 moves the base point
    along a conic (the vector representation pairs its highest weight to 2
    against h) and each fibre weight contributes a line summand of degree
    minus its h-pairing.  The result is all ones: 2^(delta-1) of them.
    """
    rs = root_system("D", delta + 1)
    theta = rs.highest_root
    alpha1 = tuple(1 if j == 0 else 0 for j in range(delta + 1))
    if rs.pairing(rs.root_to_weight(theta), rs.coroot_coords(alpha1)) != 0:
        raise InternalConsistencyError("theta and alpha_1 must be orthogonal")
    h = tuple(
        a + b for a, b in zip(rs.coroot_coords(theta), rs.coroot_coords(alpha1))
    )
    for j in range(1, delta + 1):
        if rs.pairing(rs.simple_root_weight(j), h) != 0:
            raise InternalConsistencyError("h must kill all simple roots past the first")
    # conic: the hw line of the vector representation has pairing 2 with h
    if rs.pairing(rs.root_to_weight(rs.highest_root), h) != 2:
        raise InternalConsistencyError("the orbit of the highest weight line must be a conic")

    weights = spinor_fiber_weights(delta, parity)
    degrees = []
    swap_set = set()
    for lam in weights:
        wc = rs.weight_coords_of_eps(lam)
        if any(x.denominator != 1 for x in wc):
            raise InternalConsistencyError("half-spin weights must be integral in m-coordinates")
        val = rs.pairing(tuple(int(x) for x in wc), h)
        degrees.append(-val)
        # the reflection s_theta s_alpha1 exchanges the two torus-fixed
        # points of the conic; the fibre there is the opposite half
        swap_set.add((-lam[0], -lam[1]) + lam[2:])
    if any(lam in swap_set for lam in weights):
        raise InternalConsistencyError("endpoint swap must exchange the two fibre halves")
    return tuple(degrees)


def doubled_degree_multiset(delta: int, parity: int = 0) -> tuple[int, ...]:
    """Degrees after composing with a double cover of the conic."""
    return tuple(2 * d for d in spinor_degree_multiset(delta, parity))


def h1_twist_vanishes(degrees, twist: int) -> bool:
    """Whether H^1 of a sum of O(d_i + twist) on the line vanishes."""
    return all(d + twist >= -1 for d in degrees)


# ---------------------------------------------------------------------------
# the E6/P4 cell of the three-point lemma


@dataclass(frozen=True)
class E6P4CellData:
    w_word: tuple[int, ...]
    conjugator_word: tuple[int, ...]
    levi_types: tuple
    quotient_factor_dims: tuple[int, ...]
    bundle_roots_display: tuple
    bundle_bidegrees: tuple


def _display_e6(coords: RootCoords) -> tuple[int, ...]:
    # row order used for E6 root displays: alpha_1 alpha_3 alpha_4 alpha_5
    # alpha_6 over alpha_2
    return (coords[0], coords[2], coords[3], coords[4], coords[5], coords[1])


def e6_p4_cell_data() -> E6P4CellData:
    """Root data of the dense P4-orbit cell in the E6/P1 Schubert geometry.

    The orbit of the P4-stable point is L4^v/(P1 cap L4^v) with v = s1 s3 s4
    (the tail s5 s6 s2 of the defining word normalises P4), and the fibre
    directions are the radical roots of P4 whose v-image leaves P1.
    """
    rs = root_system("E", 6)
    g = WeylGroup(rs)
    w_word = (0, 2, 3, 4, 5, 1)
    conj = (0, 2, 3)
    # the dropped tail must consist of nodes fixing P4, i.e. nodes != 4
    if any(j == 3 for j in w_word[len(conj):]):
        raise InternalConsistencyError("tail of the cell word must normalise P4")
    v = g.from_word(conj)

    levi4 = [j for j in range(6) if j != 3]
    conjugated = []
    for rt in rs.levi_positive_roots(levi4):
        for sgn in (1, -1):
            coords = tuple(sgn * x for x in rt)
            conjugated.append(_root_coords(rs, g.act(v, rs.root_to_weight(coords))))
    levi_types = tuple(classify_subsystem(rs, conjugated))

    # quotient directions: conjugated Levi roots that leave P1
    quotient = [b for b in conjugated if not _in_parabolic(b, (0,))]
    pos = [r for r in conjugated if sum(r) > 0]
    simples = [
        p for p in pos
        if not any(
            tuple(a - b for a, b in zip(p, q)) in set(pos) for q in pos if q != p
        )
    ]
    comp_of = {}
    comps: list[list[RootCoords]] = []
    unseen = set(simples)
    while unseen:
        comp = [unseen.pop()]
        grew = True
        while grew:
            grew = False
            for s in list(unseen):
                if any(
                    rs.pairing(rs.root_to_weight(s), rs.coroot_coords(t))
                    for t in comp
                ):
                    comp.append(s)
                    unseen.discard(s)
                    grew = True
        comps.append(sorted(comp))
    comps.sort()
    factor_dims = []
    for comp in comps:
        n = sum(
            1 for b in quotient
            if any(rs.pairing(rs.root_to_weight(b), rs.coroot_coords(s)) for s in comp)
        )
        factor_dims.append(n)
    if sum(factor_dims) != len(quotient):
        raise InternalConsistencyError("quotient directions must split over the factors")

    # fibre roots: radical roots of P4 pushed out of P1 by v
    bundle = []
    for rt in rs.positive_complement([3]):
        image = _root_coords(rs, g.act(v, rs.root_to_weight(rt)))
        if not _in_parabolic(image, (0,)):
            if rt[3] != 1:
                raise InternalConsistencyError("cell fibre roots must have alpha_4 coefficient 1")
            bundle.append((tuple(rt), image))
    bundle.sort()

    # bidegrees of the fibre on the quotient factors: pair each image root
    # against the marked simple of every positive-dimensional factor
    marked_simples = []
    for comp, dim in zip(comps, factor_dims):
        if dim == 0:
            continue
        # the marked simple is the one whose negative leaves P1
        marked = [s for s in comp if not _in_parabolic(tuple(-x for x in s), (0,))]
        if len(marked) != 1:
            raise InternalConsistencyError("each projective factor carries one marked simple")
        marked_simples.append(rs.coroot_coords(marked[0]))
    bidegrees = tuple(
        tuple(-rs.pairing(rs.root_to_weight(img), h) for h in marked_simples)
        for _, img in bundle
    )

    return E6P4CellData(
        w_word=tuple(j + 1 for j in w_word),
        conjugator_word=tuple(j + 1 for j in conj),
        levi_types=levi_types,
        quotient_factor_dims=tuple(factor_dims),
        bundle_roots_display=tuple(_display_e6(rt) for rt, _ in bundle),
        bundle_bidegrees=bidegrees,
    )


# ---------------------------------------------------------------------------
# adjoint varieties


@dataclass(frozen=True)
class AdjointTowerData:
    letter: str
    rank: int
    adjoint_node: int
    q_node: int
    steps: int
    y_nodes: tuple[int, ...]
    y_marked: tuple[int, ...]
    y_components: tuple
    y_dim: int
    x_dim: int
    bundles: tuple  # (name, rank, c1, weights) from the cell filtration


def adjoint_tower_data(g_type: str) -> AdjointTowerData:
    """Cell fibration data for the adjoint variety of an exceptional group.

    The adjoint node is the one supporting the highest root.  When the
    diagram has a cominuscule node the cell is a single vector bundle over Y
    (an extension of O(1) by the twisted cotangent bundle); otherwise Q is
    taken at the unique other node with highest-root coefficient two and the
    cell is a two-step affine tower whose direction bundles E and F come
    from the filtration of the unipotent radical by the q-coefficient.
    """
    g_type = g_type.strip().upper()
    table = {"E6": ("E", 6), "E7": ("E", 7), "E8": ("E", 8), "F4": ("F", 4)}
    if g_type not in table:
        raise ValidationError("adjoint tower data covers E6, E7, E8 and F4")
    letter, rank = table[g_type]
    rs = root_system(letter, rank)

    theta_weight = rs.root_to_weight(rs.highest_root)
    supp = [j for j in range(rank) if theta_weight[j]]
    if len(supp) != 1 or theta_weight[supp[0]] != 1:
        raise InternalConsistencyError("the highest root must sit over a single node")
    adjoint = supp[0]

    if rs.cominuscule_nodes:
        q_node = min(rs.cominuscule_nodes)
        fib = fibration_data(letter, rank, (adjoint,), q_node)
        if fib.e_rank != fib.y_dim + 1:
            raise InternalConsistencyError(
                "the adjoint cell bundle must have rank dim Y + 1"
            )
        bundles = (("E", fib.e_rank, fib.c1[0], fib.e_weights),)
        return AdjointTowerData(
            letter=letter,
            rank=rank,
            adjoint_node=adjoint,
            q_node=q_node,
            steps=1,
            y_nodes=fib.y_nodes,
            y_marked=fib.y_marked,
            y_components=fib.y_components,
            y_dim=fib.y_dim,
            x_dim=fib.x_dim,
            bundles=bundles,
        )

    # two-step tower: q = the other coefficient-2 node of the highest root
    candidates = [
        j for j in range(rank) if j != adjoint and rs.highest_root[j] == 2
    ]
    if len(candidates) != 1:
        raise InternalConsistencyError("expected a unique tower node")
    q_node = candidates[0]
    g = WeylGroup(rs)
    w0 = g.longest_element(range(rank))
    iq = weyl_involution(letter, rank)[q_node]

    levels: dict[int, list[RootCoords]] = {1: [], 2: []}
    for rt in rs.positive_complement([q_node]):
        if rt[q_node] not in levels:
            raise InternalConsistencyError("tower must have exactly two filtration levels")
        coords = _root_coords(rs, g.act(w0, rs.root_to_weight(rt)))
        if not _in_parabolic(coords, (adjoint,)):
            levels[rt[q_node]].append(coords)

    y_nodes = tuple(j for j in range(rank) if j != iq)
    y_marked = tuple(j for j in (adjoint,) if j != iq)
    y_dim = sum(
        1 for r in rs.levi_positive_roots(y_nodes) if any(r[j] for j in y_marked)
    )
    x_dim = len(rs.positive_complement([adjoint]))
    if len(levels[1]) + len(levels[2]) != x_dim - y_dim:
        raise InternalConsistencyError("tower ranks must add up to the cell dimension")

    bundles = []
    for name, coords_list in (("E", levels[1]), ("F", levels[2])):
        det = [0] * rank
        for coords in coords_list:
            for j, m in enumerate(rs.root_to_weight(coords)):
                det[j] += m
        for j in y_nodes:
            if j not in y_marked and det[j] != 0:
                raise InternalConsistencyError(
                    "each filtration bundle must have central determinant"
                )
        c1 = -det[y_marked[0]]
        bundles.append((name, len(coords_list), c1, tuple(sorted(coords_list))))

    return AdjointTowerData(
        letter=letter,
        rank=rank,
        adjoint_node=adjoint,
        q_node=q_node,
        steps=2,
        y_nodes=y_nodes,
        y_marked=y_marked,
        y_components=tuple(rs.identify_components(y_nodes)),
        y_dim=y_dim,
        x_dim=x_dim,
        bundles=tuple(bundles),
    )
