"""Projected gradient descent on E = U_f + resistance, with Reidemeister
event detection and the bounded-GMRE knot-type monitor.

The descent lives in angle space: the step direction is the analytic
bending gradient plus a finite-difference resistance gradient evaluated
on the frozen cycle set of the current diagram, projected off the two
closure directions.  Every accepted iterate is re-closed, resampled to
uniform arclength and renormalized to length 2pi.  Over/under data is
inherited across iterates by spatial matching; census changes are
classified as R2 / R3 and anything else aborts the flow as FORBIDDEN.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .curve import ClosedCurve, GaussRep, TWO_PI, curve_from_gauss, gauss_from_curve, resample_arclength, whitney_index
from .diagram import (
    KnotDiagram,
    detect_crossings,
    gmre,
    mre,
    resistance_energy,
)
from .errors import CodimensionOneError, SingularDiagramError, StalledError
from .uniformization import EnergyFunctional, F_X2, energy_uf, gradient_norm, project_closure, uf_gradient

_FD_ALPHA = 1e-6  # finite-difference step for the resistance gradient
_ARMIJO = 1e-4
_STEP_FLOOR = 1e-12
_STEP_GROWTH = 1.5

RESISTANCE_FAMILIES = ("RE", "MRE", "GMRE", "none")


@dataclass(frozen=True)
class FlowConfig:
    functional: EnergyFunctional = F_X2
    resistance: str = "MRE"
    delta: float = 0.1
    step0: float = 1e-4
    max_iters: int = 2000
    grad_tol: float = 1e-4
    gmre_ceiling: float = np.inf

    def __post_init__(self):
        if self.resistance not in RESISTANCE_FAMILIES:
            raise ValueError(f"resistance must be one of {RESISTANCE_FAMILIES}")
        if self.step0 <= 0 or self.grad_tol <= 0:
            raise ValueError("step0 and grad_tol must be positive")
        if self.resistance in ("MRE", "GMRE") and self.delta <= 0:
            raise ValueError("delta must be positive")


@dataclass(frozen=True)
class FlowEvent:
    iter: int
    kind: str  # R2_appear | R2_vanish | R3 | FORBIDDEN
    location: np.ndarray
    crossing_delta: int


@dataclass
class FlowTrace:
    energies: list = field(default_factory=list)  # (iter, U, R, total)
    events: list = field(default_factory=list)
    final_curve: ClosedCurve = None
    terminated: str = "max_iters"
    gmre_values: list = field(default_factory=list)
    crossing_counts: list = field(default_factory=list)
    findings: list = field(default_factory=list)

    @property
    def max_gmre(self) -> float:
        return max(self.gmre_values) if self.gmre_values else 0.0


def resistance_value(d: KnotDiagram, cfg: FlowConfig) -> float:
    if cfg.resistance == "none":
        return 0.0
    if cfg.resistance == "RE":
        return resistance_energy(d).total
    if cfg.resistance == "MRE":
        return mre(d, cfg.delta).total
    return gmre(d, cfg.delta).total


def _frozen_cycles(d: KnotDiagram, cfg: FlowConfig):
    if cfg.resistance == "none" or d.n_crossings == 0:
        return []
    if cfg.resistance == "RE":
        return list(resistance_energy(d).cycles)
    if cfg.resistance == "MRE":
        return list(mre(d, cfg.delta).cycles)
    return list(gmre(d, cfg.delta).cycles)


def total_energy(c: ClosedCurve, cfg: FlowConfig, diagram: KnotDiagram | None = None):
    """(U, R) on the curve; the diagram is re-detected unless supplied."""
    g = gauss_from_curve(c)
    u = energy_uf(g, cfg.functional)
    if diagram is None:
        diagram = detect_crossings(c, "alternate")
    return u, resistance_value(diagram, cfg)


# ---------------------------------------------------------------------------
# frozen-combinatorics resistance gradient
# ---------------------------------------------------------------------------


def _cycle_vertex_specs(d: KnotDiagram, cycles):
    """Index structure of each cycle polyline: ('x', crossing) and ('p', point)."""
    specs = []
    for cy in cycles:
        if d.n_crossings == 0:
            specs.append([("p", i) for i in range(d.curve.n)])
            continue
        spec = []
        for eid, fwd in zip(cy.edge_ids, cy.orientations):
            e = d.edges[eid]
            if fwd:
                spec.append(("x", d.passage_crossing[e.start_passage]))
                spec.extend(("p", i) for i in e.interior_indices)
            else:
                spec.append(("x", d.passage_crossing[e.end_passage]))
                spec.extend(("p", i) for i in reversed(e.interior_indices))
        specs.append(spec)
    return specs


def _eval_resistance_on_points(points, d: KnotDiagram, specs, delta):
    """Resistance of the frozen cycle set for perturbed sample points.

    points has shape (..., N, 2); returns an array of shape (...) of
    sums of 1/A (or 1/A - 1/delta when delta is finite).
    """
    pts = np.asarray(points, dtype=float)
    batch = pts.shape[:-2]
    n = pts.shape[-2]
    # crossing positions from their defining segment pairs
    cross_pos = []
    for (i, j) in d.crossing_segments:
        a = pts[..., i, :]
        b = pts[..., (i + 1) % n, :]
        c = pts[..., j, :]
        dd = pts[..., (j + 1) % n, :]
        d1 = b - a
        d2 = dd - c
        rel = c - a
        denom = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
        t = (rel[..., 0] * d2[..., 1] - rel[..., 1] * d2[..., 0]) / denom
        cross_pos.append(a + t[..., None] * d1)
    total = np.zeros(batch)
    for spec in specs:
        m = len(spec)
        vx = np.empty(batch + (m,))
        vy = np.empty(batch + (m,))
        for idx, (kind, val) in enumerate(spec):
            src = cross_pos[val] if kind == "x" else pts[..., val, :]
            vx[..., idx] = src[..., 0]
            vy[..., idx] = src[..., 1]
        area = 0.5 * np.abs(
            np.sum(vx * np.roll(vy, -1, axis=-1) - vy * np.roll(vx, -1, axis=-1), axis=-1)
        )
        area = np.maximum(area, 1e-300)
        total = total + (1.0 / area if delta is None else 1.0 / area - 1.0 / delta)
    return total


def _points_from_alpha(alpha, base, length):
    """Periodic-trapezoid integration of the tangent field, batched."""
    a = np.asarray(alpha, dtype=float)
    n = a.shape[-1]
    h = length / n
    tx, ty = np.cos(a), np.sin(a)
    txe = np.concatenate([tx, tx[..., :1]], axis=-1)
    tye = np.concatenate([ty, ty[..., :1]], axis=-1)
    zeros = np.zeros(a.shape[:-1] + (1,))
    px = base[0] + np.concatenate(
        [zeros, np.cumsum(0.5 * h * (txe[..., :-1] + txe[..., 1:]), axis=-1)], axis=-1
    )
    py = base[1] + np.concatenate(
        [zeros, np.cumsum(0.5 * h * (tye[..., :-1] + tye[..., 1:]), axis=-1)], axis=-1
    )
    return np.stack([px[..., :-1], py[..., :-1]], axis=-1)


def _resistance_gradient(curve: ClosedCurve, g: GaussRep, cfg: FlowConfig, d: KnotDiagram):
    """Central finite differences of the frozen resistance in angle space.

    Returned in the L^2 convention used by uf_gradient (divide the
    Euclidean partials by the arclength step).
    """
    cycles = _frozen_cycles(d, cfg)
    n = g.n
    if not cycles:
        return np.zeros(n)
    specs = _cycle_vertex_specs(d, cycles)
    delta = None if cfg.resistance == "RE" else cfg.delta
    alpha = g.alpha
    batch = np.tile(alpha, (2 * n, 1))
    idx = np.arange(n)
    batch[2 * idx, idx] += _FD_ALPHA
    batch[2 * idx + 1, idx] -= _FD_ALPHA
    pts = _points_from_alpha(batch, curve.points[0], g.length)
    vals = _eval_resistance_on_points(pts, d, specs, delta)
    grad_euclid = (vals[0::2] - vals[1::2]) / (2.0 * _FD_ALPHA)
    return grad_euclid / (g.length / n)


def projected_total_gradient(curve: ClosedCurve, cfg: FlowConfig, d: KnotDiagram):
    g = gauss_from_curve(curve)
    grad = uf_gradient(g, cfg.functional) + _resistance_gradient(curve, g, cfg, d)
    return g, project_closure(g, grad)


# ---------------------------------------------------------------------------
# stepping
# ---------------------------------------------------------------------------


def _reclose_alpha(alpha, length):
    """Newton-correct alpha along sin/cos directions so both closure
    integrals vanish (the projected step leaves an O(step^2) drift)."""
    a = alpha.copy()
    s0, c0 = np.sin(alpha), np.cos(alpha)
    n = len(a)
    h = length / n
    for _ in range(8):
        f1 = h * np.cos(a).sum()
        f2 = h * np.sin(a).sum()
        if abs(f1) < 1e-12 * TWO_PI and abs(f2) < 1e-12 * TWO_PI:
            break
        j11 = -h * np.sum(np.sin(a) * s0)
        j12 = -h * np.sum(np.sin(a) * c0)
        j21 = h * np.sum(np.cos(a) * s0)
        j22 = h * np.sum(np.cos(a) * c0)
        det = j11 * j22 - j12 * j21
        if abs(det) < 1e-14:
            break
        da = (j22 * -f1 - j12 * -f2) / det
        db = (j11 * -f2 - j21 * -f1) / det
        a = a + da * s0 + db * c0
    return a


def _integrate_alpha(alpha, base) -> ClosedCurve:
    """Closed curve of length 2pi from exactly-closed angle samples.

    Unit-tangent integration is already uniform in arclength, so no
    resampling is needed; the residual endpoint gap (1e-12 scale after
    the Newton re-closure) is distributed linearly.
    """
    n = len(alpha)
    h = TWO_PI / n
    pts = _points_from_alpha(alpha, base, TWO_PI)
    gap_vec = np.array([h * np.cos(alpha).sum(), h * np.sin(alpha).sum()])
    if np.hypot(*gap_vec) > 1e-6:
        raise StalledError("stalled: step broke the closure constraints")
    pts = pts - np.outer(np.arange(n) / n, gap_vec)
    return ClosedCurve(pts, TWO_PI)


def _inherited_rule(prev: KnotDiagram | None, curve: ClosedCurve, radius: float):
    """Detect crossings on `curve`, inheriting over/under from `prev`.

    Matched crossings keep their overpass strand (matched by passage
    parameter); unmatched new crossings put the earlier passage on top,
    which is the consistent choice for an R2 pair.
    """
    base = detect_crossings(curve, "alternate")
    if prev is None or prev.n_crossings == 0 or base.n_crossings == 0:
        return base
    pairs = _match_crossings(prev, base, radius)
    rule = []
    matched = {j: i for i, j in pairs}
    for j, cr in enumerate(base.crossings):
        p1, p2 = cr.passages
        if j in matched:
            old = prev.crossings[matched[j]]
            o1, _ = old.passages
            old_first_over = old.over_passage == o1
            # passage correspondence by cyclic parameter distance
            if _param_flip(prev, matched[j], base, j):
                rule.append(not old_first_over)
            else:
                rule.append(old_first_over)
        else:
            rule.append(True)
    return detect_crossings(curve, rule)


def _param_of_passage(d: KnotDiagram, passage: int) -> float:
    return d.passage_params[passage]


def _cyc_dist(a: float, b: float) -> float:
    r = abs(a - b) % TWO_PI
    return min(r, TWO_PI - r)


def _param_flip(d_old: KnotDiagram, i: int, d_new: KnotDiagram, j: int) -> bool:
    """True when the new crossing's first passage matches the old second."""
    o1, o2 = d_old.crossings[i].passages
    n1, n2 = d_new.crossings[j].passages
    po1, po2 = _param_of_passage(d_old, o1), _param_of_passage(d_old, o2)
    pn1, pn2 = _param_of_passage(d_new, n1), _param_of_passage(d_new, n2)
    straight = _cyc_dist(pn1, po1) + _cyc_dist(pn2, po2)
    flipped = _cyc_dist(pn1, po2) + _cyc_dist(pn2, po1)
    return flipped < straight


def _match_crossings(before: KnotDiagram, after: KnotDiagram, radius: float):
    """Greedy nearest-pair matching of crossing positions within radius."""
    if before.n_crossings == 0 or after.n_crossings == 0:
        return []
    pb = np.array([c.position for c in before.crossings])
    pa = np.array([c.position for c in after.crossings])
    dist = np.hypot(*(pb[:, None, :] - pa[None, :, :]).transpose(2, 0, 1))
    pairs = []
    used_b, used_a = set(), set()
    order = np.dstack(np.unravel_index(np.argsort(dist, axis=None), dist.shape))[0]
    for i, j in order:
        i, j = int(i), int(j)
        if dist[i, j] > radius:
            break
        if i in used_b or j in used_a:
            continue
        pairs.append((i, j))
        used_b.add(i)
        used_a.add(j)
    return pairs


def _step_from_alpha(alpha0, base, curve, diagram, cfg: FlowConfig, step: float):
    """One Armijo-backtracking descent step from exactly-closed angles.

    Both sides of the Armijo test measure the bending part directly on
    the angle samples, so the comparison is exact; the resistance part is
    re-detected honestly on each candidate curve.
    Returns (alpha, curve, accepted step, (U, R), diagram).
    """
    g = GaussRep(alpha0, base, TWO_PI)
    grad = project_closure(
        g, uf_gradient(g, cfg.functional) + _resistance_gradient(curve, g, cfg, diagram)
    )
    gnorm2 = (TWO_PI / g.n) * float(np.dot(grad, grad))
    u0 = energy_uf(g, cfg.functional)
    e0 = u0 + resistance_value(diagram, cfg)
    radius = max(5.0 * step * np.sqrt(max(gnorm2, 0.0)), 1e-3)
    s = step
    while s >= _STEP_FLOOR:
        try:
            alpha_s = _reclose_alpha(alpha0 - s * grad, TWO_PI)
            if np.array_equal(alpha_s, alpha0):
                # already critical to rounding: nothing moves
                return alpha0, curve, s, (u0, e0 - u0), diagram
            cand = _integrate_alpha(alpha_s, base)
            d_cand = _inherited_rule(diagram, cand, radius)
            u1 = energy_uf(GaussRep(alpha_s, base, TWO_PI), cfg.functional)
            r1 = resistance_value(d_cand, cfg)
        except (CodimensionOneError, SingularDiagramError, StalledError):
            s *= 0.5
            continue
        if u1 + r1 <= e0 - _ARMIJO * s * gnorm2:
            return alpha_s, cand, s, (u1, r1), d_cand
        s *= 0.5
    raise StalledError("stalled")


def flow_step(c: ClosedCurve, cfg: FlowConfig, step: float, diagram: KnotDiagram | None = None):
    """One backtracking line-search step; returns (new curve, accepted step).

    Energy is non-increasing (Armijo factor 1e-4); a step underflow below
    1e-12 raises StalledError("stalled").
    """
    if diagram is None:
        diagram = detect_crossings(c, "alternate")
    alpha0 = _reclose_alpha(gauss_from_curve(c).alpha, TWO_PI)
    _, curve, s, _, _ = _step_from_alpha(alpha0, c.points[0], c, diagram, cfg, step)
    return curve, s


# ---------------------------------------------------------------------------
# event classification
# ---------------------------------------------------------------------------


def _gauss_sequence(d: KnotDiagram, labels):
    """Cyclic sequence of crossing labels in passage order."""
    return [labels[d.passage_crossing[p]] for p in range(2 * d.n_crossings)]


def _cyclic_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = a + a
    return any(doubled[i : i + len(b)] == b for i in range(len(a)))


def classify_event(before: KnotDiagram, after: KnotDiagram, radius: float = 0.1) -> FlowEvent:
    """Classify a combinatorial change between consecutive diagrams.

    Crossing-count changes of +-2 with a mutually close unmatched pair
    are R2 moves; an unchanged census whose passage order changed across
    a cluster of three crossings is an R3; everything else (including
    +-1 loop events and crossing-type flips) is FORBIDDEN.
    """
    delta = after.n_crossings - before.n_crossings
    pairs = _match_crossings(before, after, radius)
    matched_b = {i for i, _ in pairs}
    matched_a = {j for _, j in pairs}
    gone = [i for i in range(before.n_crossings) if i not in matched_b]
    new = [j for j in range(after.n_crossings) if j not in matched_a]

    labels_b = {i: f"b{i}" for i in range(before.n_crossings)}
    labels_a = {j: "?" for j in range(after.n_crossings)}
    for i, j in pairs:
        labels_a[j] = labels_b[i]

    def location(ids, diagram):
        if not ids:
            return np.zeros(2)
        return np.mean([diagram.crossings[k].position for k in ids], axis=0)

    def cluster_ok(ids, diagram, rad):
        pos = [diagram.crossings[k].position for k in ids]
        return all(
            np.hypot(*(pos[x] - pos[y])) <= rad
            for x in range(len(pos))
            for y in range(x + 1, len(pos))
        )

    seq_b = _gauss_sequence(before, labels_b)
    seq_a = _gauss_sequence(after, labels_a)

    if delta == 2 and len(new) == 2 and not gone:
        if cluster_ok(new, after, 4 * radius):
            marks = {labels_a[j] for j in new} | {"?"}
            trimmed_a = [x for x in seq_a if x not in marks]
            if _cyclic_equal(trimmed_a, seq_b):
                return FlowEvent(-1, "R2_appear", location(new, after), 2)
    if delta == -2 and len(gone) == 2 and not new:
        if cluster_ok(gone, before, 4 * radius):
            marks = {labels_b[i] for i in gone}
            trimmed_b = [x for x in seq_b if x not in marks]
            if _cyclic_equal(trimmed_b, seq_a):
                return FlowEvent(-1, "R2_vanish", location(gone, before), -2)
    if delta == 0 and not gone and not new:
        # crossing-type flips are forbidden
        for i, j in pairs:
            ob = before.crossings[i].over_passage == min(before.crossings[i].passages)
            oa = after.crossings[j].over_passage == min(after.crossings[j].passages)
            if _param_flip(before, i, after, j):
                oa = not oa
            if ob != oa:
                return FlowEvent(
                    -1, "FORBIDDEN", after.crossings[j].position.copy(), 0
                )
        if _cyclic_equal(seq_a, seq_b):
            # no combinatorial change at all; report a neutral R3-free event
            return FlowEvent(-1, "R3", location(list(matched_a), after), 0)
        moved = _changed_crossings(seq_b, seq_a, pairs, before, after)
        if len(moved) == 3 and cluster_ok(moved, after, 6 * radius):
            return FlowEvent(-1, "R3", location(moved, after), 0)
    kind_ids = new if new else gone
    diagram = after if new else before
    return FlowEvent(-1, "FORBIDDEN", location(kind_ids, diagram), delta)


def _changed_crossings(seq_b, seq_a, pairs, before, after):
    """After-crossing ids whose removal reconciles the two sequences."""
    from itertools import combinations

    label_to_after = {}
    for i, j in pairs:
        label_to_after[f"b{i}"] = j
    labels = sorted(set(seq_b))
    for r in (3,):
        for combo in combinations(labels, r):
            drop = set(combo)
            if _cyclic_equal(
                [x for x in seq_b if x not in drop], [x for x in seq_a if x not in drop]
            ):
                return [label_to_after[lbl] for lbl in combo]
    return []


# ---------------------------------------------------------------------------
# the driver
# ---------------------------------------------------------------------------


def relax(c0: ClosedCurve, cfg: FlowConfig, keyframe_cb=None) -> FlowTrace:
    """Iterate descent steps to convergence or termination.

    The state is the exactly-closed angle sample vector; iterates are its
    unit-speed integrals, so every recorded curve has length 2pi.  The
    trace records (U, R, total) and the GMRE monitor value per iterate;
    any event other than R2/R3 aborts with terminated = "forbidden_event".
    A stalled line search is recorded as convergence (the iterate is a
    numerical critical point).
    """
    curve = c0
    if abs(curve.length - TWO_PI) > 1e-8:
        curve = curve.scaled(TWO_PI / curve.length)
    trace = FlowTrace()
    base = curve.points[0]
    alpha = _reclose_alpha(gauss_from_curve(curve).alpha, TWO_PI)
    try:
        curve = _integrate_alpha(alpha, base)
        diagram = detect_crossings(curve, "alternate")
    except (CodimensionOneError, StalledError):
        trace.final_curve = curve
        trace.terminated = "singular"
        return trace
    step = cfg.step0
    last_whitney = _safe_whitney(curve)
    pending = None

    for it in range(cfg.max_iters):
        if pending is None:
            # measure on the angle basis, the same way the step accepts
            u = energy_uf(GaussRep(alpha, base, TWO_PI), cfg.functional)
            r = resistance_value(diagram, cfg)
        else:
            u, r = pending
        trace.energies.append((it, u, r, u + r))
        trace.crossing_counts.append(diagram.n_crossings)
        trace.gmre_values.append(gmre(diagram, cfg.delta).total if diagram.n_crossings else 0.0)
        if keyframe_cb is not None:
            keyframe_cb(it, curve)

        g = GaussRep(alpha, base, TWO_PI)
        grad = project_closure(
            g, uf_gradient(g, cfg.functional) + _resistance_gradient(curve, g, cfg, diagram)
        )
        gnorm = gradient_norm(g, grad)
        if gnorm < cfg.grad_tol:
            trace.terminated = "converged"
            break
        try:
            alpha_new, new_curve, accepted, pending, new_diagram = _step_from_alpha(
                alpha, base, curve, diagram, cfg, step
            )
        except StalledError:
            trace.terminated = "converged"
            trace.findings.append(f"iter {it}: line search stalled at |grad| = {gnorm:.3e}")
            break

        disp = float(np.max(np.hypot(*(new_curve.points - curve.points).T)))
        radius = max(5.0 * disp, 1e-3)
        if _census_changed(diagram, new_diagram, radius):
            event = classify_event(diagram, new_diagram, radius)
            event = dataclasses.replace(event, iter=it)
            trace.events.append(event)
            if event.kind == "FORBIDDEN":
                # record the offending state so the GMRE monitor sees it
                u1, r1 = pending
                trace.energies.append((it + 1, u1, r1, u1 + r1))
                trace.crossing_counts.append(new_diagram.n_crossings)
                try:
                    trace.gmre_values.append(gmre(new_diagram, cfg.delta).total)
                except SingularDiagramError:
                    trace.gmre_values.append(np.inf)
                trace.terminated = "forbidden_event"
                trace.final_curve = new_curve
                return trace

        w = _safe_whitney(new_curve)
        if w is not None and last_whitney is not None and w != last_whitney:
            trace.findings.append(f"iter {it}: Whitney index changed {last_whitney} -> {w}")
        last_whitney = w if w is not None else last_whitney

        alpha, curve, diagram = alpha_new, new_curve, new_diagram
        step = min(accepted * _STEP_GROWTH, 1.0)
    else:
        trace.terminated = "max_iters"

    trace.final_curve = curve
    return trace


def _safe_whitney(curve: ClosedCurve):
    try:
        return whitney_index(curve)
    except ValueError:
        return None


def _census_changed(before: KnotDiagram, after: KnotDiagram, radius: float) -> bool:
    if before.n_crossings != after.n_crossings:
        return True
    if before.n_crossings == 0:
        return False
    pairs = _match_crossings(before, after, radius)
    if len(pairs) != before.n_crossings:
        return True
    labels_b = {i: f"b{i}" for i in range(before.n_crossings)}
    labels_a = {j: labels_b[i] for i, j in pairs}
    if not _cyclic_equal(
        _gauss_sequence(before, labels_b), _gauss_sequence(after, labels_a)
    ):
        return True
    for i, j in pairs:
        ob = before.crossings[i].over_passage == min(before.crossings[i].passages)
        oa = after.crossings[j].over_passage == min(after.crossings[j].passages)
        if _param_flip(before, i, after, j):
            oa = not oa
        if ob != oa:
            return True
    return False
