"""Knot diagrams as decorated 4-valent planar maps, cycle enumeration,
alternation, and the resistance energies RE / MRE / GMRE.

A cycle is an embedded circle inside the diagram image: at each crossing
it either passes straight through (two opposite branches) or turns (two
adjacent branches), using every crossing and edge at most once.  The
edge set determines the turn/straight structure, so cycles are exactly
the vertex-simple cycles of the underlying 4-valent multigraph; arcs are
the maximal runs between turn crossings, and a cycle is alternated when
every arc has one endpoint on an over-strand and one on an under-strand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curve import ClosedCurve, TWO_PI
from .errors import CodimensionOneError, CycleExplosionError, SingularDiagramError

_POSITION_TOL = 1e-9
_ANGLE_TOL = 1e-3
DEFAULT_CYCLE_LIMIT = 10**7

# slot layout at a crossing: strand 0 owns slots 0 (in) and 1 (out),
# strand 1 owns slots 2 (in) and 3 (out)
_SLOT_STRAND = (0, 0, 1, 1)


@dataclass(frozen=True)
class Crossing:
    position: np.ndarray
    over_passage: int
    under_passage: int
    transversality_angle: float

    @property
    def passages(self) -> tuple[int, int]:
        return tuple(sorted((self.over_passage, self.under_passage)))


@dataclass(frozen=True)
class Edge:
    """Curve segment between two consecutive crossing passages."""

    start_passage: int
    end_passage: int
    points: np.ndarray  # polyline including both crossing endpoints
    interior_indices: tuple[int, ...] = ()  # curve sample indices strictly inside


@dataclass(frozen=True)
class Arc:
    """Maximal run of a cycle between consecutive turn crossings.

    Straight pass-through crossings are interior to the arc; each
    endpoint records (crossing id, reached along the over-strand?).
    """

    edge_ids: tuple[int, ...]
    interior_crossings: tuple[int, ...]
    endpoints: tuple[tuple[int, bool], tuple[int, bool]]

    @property
    def alternated(self) -> bool:
        return self.endpoints[0][1] != self.endpoints[1][1]


@dataclass(frozen=True)
class DiagramCycle:
    edge_ids: tuple[int, ...]
    turn_crossings: tuple[int, ...]
    arcs: tuple[Arc, ...]
    area: float
    alternated: bool
    polyline: np.ndarray
    orientations: tuple[bool, ...] = ()  # per edge_ids entry: traversed forward?

    @property
    def n_arcs(self) -> int:
        return max(1, len(self.turn_crossings))

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.edge_ids))


@dataclass(frozen=True)
class EnergyBreakdown:
    total: float
    per_cycle: tuple[tuple[int, float], ...]
    family: str
    delta: float | None = None
    cycles: tuple[DiagramCycle, ...] = ()


class DiagramGraph:
    """4-valent map: crossings with 4 slots each, edges joining slots.

    Endpoints are (crossing index, slot) pairs, or None for the dangling
    strand ends of lattice fragments.  `over_strand[c]` names the strand
    (0 or 1) whose passage is the overpass at crossing c.
    """

    def __init__(self, n_crossings, positions, over_strand):
        self.n_crossings = n_crossings
        self.positions = np.asarray(positions, dtype=float).reshape(n_crossings, 2)
        self.over_strand = list(over_strand)
        self.edges: list[tuple] = []  # (end0, end1, polyline)
        self.slot_edge: list[dict] = [dict() for _ in range(n_crossings)]

    def add_edge(self, end0, end1, points) -> int:
        eid = len(self.edges)
        self.edges.append((end0, end1, np.asarray(points, dtype=float)))
        for end in (end0, end1):
            if end is not None:
                c, s = end
                if s in self.slot_edge[c]:
                    raise ValueError(f"slot {s} of crossing {c} already wired")
                self.slot_edge[c][s] = eid
        return eid

    def other_end(self, eid: int, end) -> tuple | None:
        e0, e1, _ = self.edges[eid]
        return e1 if end == e0 else e0

    def edge_polyline(self, eid: int, forward: bool) -> np.ndarray:
        pts = self.edges[eid][2]
        return pts if forward else pts[::-1]


def shoelace_area(points: np.ndarray) -> float:
    """Absolute shoelace area of a closed polyline (last edge implied)."""
    p = np.asarray(points, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))) / 2.0


def cycle_area(cy: DiagramCycle) -> float:
    return shoelace_area(cy.polyline)


# ---------------------------------------------------------------------------
# crossing detection
# ---------------------------------------------------------------------------


def _segment_intersections(pts: np.ndarray):
    """All transversal interior intersections between non-adjacent segments.

    Returns (i, j, t, u, point, angle) per intersection with parameters in
    [0, 1) along segments i < j.
    """
    n = len(pts)
    a = pts
    b = np.roll(pts, -1, axis=0)
    d = b - a
    ii, jj = np.triu_indices(n, k=2)
    # exclude the wrap-adjacent pair (0, n-1)
    keep = ~((ii == 0) & (jj == n - 1))
    ii, jj = ii[keep], jj[keep]
    # quick bounding-box rejection
    lo_i = np.minimum(a[ii], b[ii])
    hi_i = np.maximum(a[ii], b[ii])
    lo_j = np.minimum(a[jj], b[jj])
    hi_j = np.maximum(a[jj], b[jj])
    boxok = np.all((lo_i <= hi_j) & (lo_j <= hi_i), axis=1)
    ii, jj = ii[boxok], jj[boxok]
    if len(ii) == 0:
        return []
    di, dj = d[ii], d[jj]
    denom = di[:, 0] * dj[:, 1] - di[:, 1] * dj[:, 0]
    rel = a[jj] - a[ii]
    scale = np.hypot(*di.T) * np.hypot(*dj.T)
    ok = np.abs(denom) > 1e-14 * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (rel[:, 0] * dj[:, 1] - rel[:, 1] * dj[:, 0]) / denom
        u = (rel[:, 0] * di[:, 1] - rel[:, 1] * di[:, 0]) / denom
    hit = ok & (t >= 0.0) & (t < 1.0) & (u >= 0.0) & (u < 1.0)
    out = []
    for idx in np.nonzero(hit)[0]:
        i, j = int(ii[idx]), int(jj[idx])
        point = a[i] + t[idx] * d[i]
        ang = float(
            abs(np.arctan2(di[idx, 0] * dj[idx, 1] - di[idx, 1] * dj[idx, 0],
                           di[idx, 0] * dj[idx, 0] + di[idx, 1] * dj[idx, 1]))
        )
        out.append((i, j, float(t[idx]), float(u[idx]), point, ang))
    return out


def detect_crossings(c: ClosedCurve, over_under="alternate") -> "KnotDiagram":
    """Build the knot diagram of a closed polyline in general position.

    over_under: "alternate" synthesizes overpasses alternating along the
    strand (falling back to first-passage-over where the passage parities
    coincide), or a sequence of booleans first_passage_over per crossing
    in order of first passage, or a callable (index, params) -> bool.
    """
    pts = c.points
    n = c.n
    hits = _segment_intersections(pts)
    for k in range(len(hits)):
        for l in range(k + 1, len(hits)):
            if np.hypot(*(hits[k][4] - hits[l][4])) < _POSITION_TOL:
                raise CodimensionOneError(
                    "codimension-one configuration: concurrent crossings",
                    location=hits[k][4],
                )
    for i, j, t, u, point, ang in hits:
        if min(ang, np.pi - ang) <= _ANGLE_TOL:
            raise CodimensionOneError(
                "codimension-one configuration: tangential intersection",
                location=point,
            )

    # passage parameters in grid units of the normalized parameter
    h = TWO_PI / n
    raw = []
    for i, j, t, u, point, ang in hits:
        raw.append(((i + t) * h, (j + u) * h, point, ang, (i, j)))
    raw.sort(key=lambda r: min(r[0], r[1]))
    # assign passage indices by sorting all 2n parameters
    all_params = []
    for ci, rec in enumerate(raw):
        all_params.append((rec[0], ci))
        all_params.append((rec[1], ci))
    all_params.sort()
    passage_of = {}  # (crossing, which) -> passage index
    passage_params = [p for p, _ in all_params]
    passage_crossing = [ci for _, ci in all_params]
    seen = {}
    for pi, (p, ci) in enumerate(all_params):
        which = seen.get(ci, 0)
        passage_of[(ci, which)] = pi
        seen[ci] = which + 1

    crossings = []
    crossing_segments = []
    for ci, (s1, s2, point, ang, segs) in enumerate(raw):
        p_first = passage_of[(ci, 0)]
        p_second = passage_of[(ci, 1)]
        if isinstance(over_under, str) and over_under == "alternate":
            first_over = p_first % 2 == 0
            if p_first % 2 == p_second % 2:
                first_over = True
        elif callable(over_under):
            first_over = bool(over_under(ci, (s1, s2)))
        else:
            first_over = bool(over_under[ci])
        over_p, under_p = (p_first, p_second) if first_over else (p_second, p_first)
        crossings.append(Crossing(np.asarray(point), over_p, under_p, ang))
        crossing_segments.append(segs)

    edges = _build_edges(pts, passage_params, crossings, passage_crossing)
    return KnotDiagram(
        c,
        crossings,
        edges,
        passage_params=passage_params,
        passage_crossing=passage_crossing,
        crossing_segments=crossing_segments,
    )


def _build_edges(pts, passage_params, crossings, passage_crossing):
    n = len(pts)
    h = TWO_PI / n
    m = len(passage_params)
    edges = []
    for j in range(m):
        t0 = passage_params[j]
        t1 = passage_params[(j + 1) % m]
        p0 = crossings[passage_crossing[j]].position
        p1 = crossings[passage_crossing[(j + 1) % m]].position
        if j + 1 < m:
            ks = np.arange(int(np.floor(t0 / h)) + 1, int(np.ceil(t1 / h)))
        else:
            ks = np.arange(int(np.floor(t0 / h)) + 1, n + int(np.ceil(t1 / h)))
        mids = pts[ks % n]
        poly = np.vstack([p0[None, :], mids, p1[None, :]])
        # drop interior points coincident with the crossing endpoints
        keep = np.ones(len(poly), dtype=bool)
        if len(poly) > 2:
            keep[1:-1] = (np.hypot(*(poly[1:-1] - poly[0]).T) > 1e-12) & (
                np.hypot(*(poly[1:-1] - poly[-1]).T) > 1e-12
            )
        interior = tuple(int(k % n) for k, kept in zip(ks, keep[1:-1]) if kept)
        edges.append(Edge(j, (j + 1) % m, poly[keep], interior))
    return edges


class KnotDiagram:
    """Immersed closed curve with over/under data at each crossing."""

    def __init__(
        self,
        curve: ClosedCurve,
        crossings: list[Crossing],
        edges: list[Edge],
        passage_params=None,
        passage_crossing=None,
        crossing_segments=None,
    ):
        self.curve = curve
        self.crossings = crossings
        self.edges = edges
        self.passage_params = passage_params or []
        self.passage_crossing = passage_crossing or []
        self.crossing_segments = crossing_segments or []
        self.graph = self._build_graph()

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def _build_graph(self) -> DiagramGraph:
        n = len(self.crossings)
        g = DiagramGraph(
            n,
            np.array([c.position for c in self.crossings]).reshape(n, 2),
            [0 if c.over_passage == min(c.passages) else 1 for c in self.crossings],
        )
        if n == 0:
            return g
        # passage -> (crossing, strand): strand 0 is the earlier passage
        passage_owner = {}
        for ci, c in enumerate(self.crossings):
            p1, p2 = c.passages
            passage_owner[p1] = (ci, 0)
            passage_owner[p2] = (ci, 1)
        for e in self.edges:
            c_tail, s_tail = passage_owner[e.start_passage]
            c_head, s_head = passage_owner[e.end_passage]
            # out slot of the tail strand, in slot of the head strand
            g.add_edge((c_tail, 2 * s_tail + 1), (c_head, 2 * s_head), e.points)
        return g

    def scaled(self, s: float) -> "KnotDiagram":
        return detect_crossings_like(self, self.curve.scaled(s))


def detect_crossings_like(d: KnotDiagram, c: ClosedCurve) -> KnotDiagram:
    """Re-detect on a transformed copy, keeping d's over/under choices."""
    rule = [cr.over_passage == min(cr.passages) for cr in d.crossings]
    return detect_crossings(c, rule)


# ---------------------------------------------------------------------------
# cycle enumeration
# ---------------------------------------------------------------------------


def _whole_curve_cycle(d: KnotDiagram) -> DiagramCycle:
    # crossing-free diagram: the curve itself, one closed arc, vacuously
    # alternated (convention recorded in the package docs)
    poly = d.curve.points
    return DiagramCycle(
        edge_ids=(0,),
        turn_crossings=(),
        arcs=(),
        area=shoelace_area(poly),
        alternated=True,
        polyline=poly,
        orientations=(True,),
    )


def enumerate_cycles_graph(
    g: DiagramGraph,
    area_cap: float | None = None,
    arc_cap: int | None = None,
    max_cycles: int = DEFAULT_CYCLE_LIMIT,
    edge_subset=None,
) -> list[DiagramCycle]:
    """All embedded circles of a 4-valent map, canonically ordered.

    DFS anchored at the minimal edge id of each cycle; the anchor is
    traversed in its stored orientation, so every cycle is produced
    exactly once.  arc_cap prunes on the running turn count.
    """
    n_edges = len(g.edges)
    allowed = set(range(n_edges)) if edge_subset is None else set(edge_subset)
    found: list[DiagramCycle] = []

    def strand(end):
        return _SLOT_STRAND[end[1]]

    def record(path):
        cy = _cycle_from_path(g, path)
        if arc_cap is not None and cy.n_arcs > arc_cap:
            return
        if area_cap is not None and cy.area >= area_cap:
            return
        found.append(cy)
        if len(found) > max_cycles:
            raise CycleExplosionError(
                f"cycle explosion: more than {max_cycles} cycles", len(found)
            )

    for anchor in sorted(allowed):
        end0, end1, _ = g.edges[anchor]
        if end0 is None or end1 is None:
            continue
        c_home, s_home = end0
        used_edges = {anchor}
        used_cross = set()
        path = [(anchor, True)]

        def dfs(arrive_end, turns):
            c, s_in = arrive_end
            if c == c_home:
                record(path)
                return
            if c in used_cross:
                return
            used_cross.add(c)
            for s_out, eid in g.slot_edge[c].items():
                if s_out == s_in or eid in used_edges or eid <= anchor or eid not in allowed:
                    continue
                nxt = g.other_end(eid, (c, s_out))
                if nxt is None:
                    continue
                t2 = turns + (1 if _SLOT_STRAND[s_out] != _SLOT_STRAND[s_in] else 0)
                if arc_cap is not None and t2 > arc_cap:
                    continue
                used_edges.add(eid)
                e0, _, _ = g.edges[eid]
                path.append((eid, (c, s_out) == e0))
                dfs(nxt, t2)
                path.pop()
                used_edges.discard(eid)
            used_cross.discard(c)

        dfs(end1, 0)

    found.sort(key=lambda cy: (cy.n_arcs, cy.key))
    return found


def _cycle_from_path(g: DiagramGraph, path) -> DiagramCycle:
    """Build the DiagramCycle for a closed dart path."""
    ends = []  # per step: (crossing, slot_in, slot_out) at the crossing between steps
    k = len(path)
    for idx in range(k):
        eid, fwd = path[idx]
        e0, e1, _ = g.edges[eid]
        arrive = e1 if fwd else e0
        nid, nfwd = path[(idx + 1) % k]
        n0, n1, _ = g.edges[nid]
        depart = n0 if nfwd else n1
        assert arrive[0] == depart[0]
        ends.append((arrive[0], arrive[1], depart[1]))

    turn_flags = [_SLOT_STRAND[s_in] != _SLOT_STRAND[s_out] for _, s_in, s_out in ends]
    turn_crossings = tuple(ends[i][0] for i in range(k) if turn_flags[i])

    # polyline
    pieces = [g.edge_polyline(eid, fwd)[:-1] for eid, fwd in path]
    poly = np.vstack(pieces)

    # arcs: split the dart sequence at turn crossings
    arcs = []
    if turn_crossings:
        turn_positions = [i for i in range(k) if turn_flags[i]]
        for a_i, start in enumerate(turn_positions):
            end = turn_positions[(a_i + 1) % len(turn_positions)]
            # the arc departs crossing ends[start] and arrives at ends[end]
            steps = []
            interior = []
            j = start
            while True:
                j_next = (j + 1) % k
                steps.append(path[j_next][0])
                if j_next == end:
                    break
                interior.append(ends[j_next][0])
                j = j_next
            c_start, _, s_out = ends[start]
            c_end, s_in, _ = ends[end]
            start_over = g.over_strand[c_start] == _SLOT_STRAND[s_out]
            end_over = g.over_strand[c_end] == _SLOT_STRAND[s_in]
            arcs.append(
                Arc(tuple(steps), tuple(interior), ((c_start, start_over), (c_end, end_over)))
            )

    alternated = all(a.alternated for a in arcs) if arcs else True
    return DiagramCycle(
        edge_ids=tuple(e for e, _ in path),
        turn_crossings=turn_crossings,
        arcs=tuple(arcs),
        area=shoelace_area(poly),
        alternated=alternated,
        polyline=poly,
        orientations=tuple(f for _, f in path),
    )


def enumerate_cycles(
    d: KnotDiagram,
    area_cap: float | None = None,
    arc_cap: int | None = None,
    max_cycles: int = DEFAULT_CYCLE_LIMIT,
) -> list[DiagramCycle]:
    """Every embedded circle of the diagram, deduplicated and ordered."""
    if d.n_crossings == 0:
        cy = _whole_curve_cycle(d)
        if area_cap is not None and cy.area >= area_cap:
            return []
        if arc_cap is not None and cy.n_arcs > arc_cap:
            return []
        return [cy]
    return enumerate_cycles_graph(d.graph, area_cap, arc_cap, max_cycles)


# ---------------------------------------------------------------------------
# resistance energies
# ---------------------------------------------------------------------------


def _breakdown(cycles, family, delta=None) -> EnergyBreakdown:
    per = []
    for i, cy in enumerate(cycles):
        if cy.area <= 1e-12:
            raise SingularDiagramError("singular diagram: zero-area alternated cycle")
        contrib = 1.0 / cy.area if delta is None else 1.0 / cy.area - 1.0 / delta
        per.append((i, contrib))
    return EnergyBreakdown(
        total=float(sum(v for _, v in per)),
        per_cycle=tuple(per),
        family=family,
        delta=delta,
        cycles=tuple(cycles),
    )


def resistance_energy(d: KnotDiagram, max_cycles: int = DEFAULT_CYCLE_LIMIT) -> EnergyBreakdown:
    """RE = sum of 1/area over all alternated cycles."""
    cycles = [cy for cy in enumerate_cycles(d, max_cycles=max_cycles) if cy.alternated]
    return _breakdown(cycles, "RE")


def mre(d: KnotDiagram, delta: float, max_cycles: int = DEFAULT_CYCLE_LIMIT) -> EnergyBreakdown:
    """Material resistance energy: sum of (1/A - 1/delta) over alternated
    cycles with area < delta.

    Two-step evaluation: faces of area < delta seed the low-area domains,
    and only cycles supported on a domain's closure are enumerated.
    Every delta-critical cycle bounds a union of such faces, so nothing
    is missed.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if d.n_crossings == 0:
        cy = _whole_curve_cycle(d)
        cycles = [cy] if cy.area < delta else []
        return _breakdown(cycles, "MRE", delta)

    domains = _low_area_domains(d, delta)
    seen = {}
    for edge_ids in domains:
        for cy in enumerate_cycles_graph(
            d.graph, area_cap=delta, max_cycles=max_cycles, edge_subset=edge_ids
        ):
            if cy.alternated:
                seen.setdefault(cy.key, cy)
    cycles = sorted(seen.values(), key=lambda cy: (cy.n_arcs, cy.key))
    return _breakdown(cycles, "MRE", delta)


def gmre(
    d: KnotDiagram,
    delta: float,
    include_nonalternated_four_arc: bool = True,
    max_cycles: int = DEFAULT_CYCLE_LIMIT,
) -> EnergyBreakdown:
    """Genericity modification: delta-critical alternated cycles with at
    most 3 arcs, plus delta-critical 4-arc cycles (alternated or not by
    default; see include_nonalternated_four_arc)."""
    if delta <= 0 and not np.isinf(delta):
        raise ValueError("delta must be positive")
    cycles = [
        cy
        for cy in enumerate_cycles(d, area_cap=delta, arc_cap=4, max_cycles=max_cycles)
        if cy.n_arcs <= 3 and cy.alternated
        or cy.n_arcs == 4 and (include_nonalternated_four_arc or cy.alternated)
    ]
    dlt = None if np.isinf(delta) else delta
    bd = _breakdown(cycles, "GMRE", dlt)
    return EnergyBreakdown(bd.total, bd.per_cycle, "GMRE", delta, bd.cycles)


def gamma_bound(n_crossings: int) -> float:
    """The crossing-count bound n^4/24 + n^3/6 + n^2/2 + n."""
    n = n_crossings
    return n**4 / 24 + n**3 / 6 + n**2 / 2 + n


# ---------------------------------------------------------------------------
# faces of the planar map (used by the MRE low-area seeding step)
# ---------------------------------------------------------------------------


def _rotations(g: DiagramGraph):
    """CCW cyclic slot order at each crossing, from edge departure angles."""
    rot = []
    for c in range(g.n_crossings):
        entries = []
        for s, eid in g.slot_edge[c].items():
            e0, e1, pts = g.edges[eid]
            if e0 == (c, s):
                v = pts[1] - pts[0]
            else:
                v = pts[-2] - pts[-1]
            entries.append((float(np.arctan2(v[1], v[0])), s))
        entries.sort()
        rot.append([s for _, s in entries])
    return rot


def diagram_faces(d: KnotDiagram):
    """Faces of the planar map as (edge id set, signed area) records.

    Signed area is positive for the bounded faces under the traversal
    rule used here; the unbounded face carries the negative total.
    """
    g = d.graph
    rot = _rotations(g)
    darts = set()
    for eid, (e0, e1, _) in enumerate(g.edges):
        if e0 is not None and e1 is not None:
            darts.add((eid, True))
            darts.add((eid, False))
    faces = []
    remaining = set(darts)
    while remaining:
        start = min(remaining)
        walk = []
        dart = start
        while True:
            walk.append(dart)
            remaining.discard(dart)
            eid, fwd = dart
            e0, e1, _ = g.edges[eid]
            c, s_in = e1 if fwd else e0
            order = rot[c]
            # next dart departs from the clockwise-next slot after arrival
            k = order.index(s_in)
            s_out = order[(k - 1) % len(order)]
            nid = g.slot_edge[c][s_out]
            n0, _, _ = g.edges[nid]
            dart = (nid, (c, s_out) == n0)
            if dart == start:
                break
        pts = np.vstack([g.edge_polyline(eid, fwd)[:-1] for eid, fwd in walk])
        x, y = pts[:, 0], pts[:, 1]
        signed = (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0
        faces.append((frozenset(eid for eid, _ in walk), float(signed), walk))
    return faces


def _low_area_domains(d: KnotDiagram, delta: float):
    """Edge-id sets of the connected low-area domains.

    Bounded faces of area < delta are grouped when they share an edge or
    a crossing (vertex-pinched interiors stay together).
    """
    faces = diagram_faces(d)
    outer = min(range(len(faces)), key=lambda i: faces[i][1])
    low = [
        i
        for i in range(len(faces))
        if i != outer and abs(faces[i][1]) < delta
    ]
    if not low:
        return []
    g = d.graph

    def face_crossings(i):
        out = set()
        for eid in faces[i][0]:
            for end in g.edges[eid][:2]:
                if end is not None:
                    out.add(end[0])
        return out

    fc = {i: face_crossings(i) for i in low}
    parent = {i: i for i in low}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a_i, i in enumerate(low):
        for j in low[a_i + 1 :]:
            if faces[i][0] & faces[j][0] or fc[i] & fc[j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups = {}
    for i in low:
        groups.setdefault(find(i), set()).update(faces[i][0])
    return list(groups.values())
