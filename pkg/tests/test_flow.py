import numpy as np
import pytest

from flatknot.curve import TWO_PI, gauss_from_curve, resample_arclength
from flatknot.diagram import detect_crossings, enumerate_cycles
from flatknot.errors import StalledError
from flatknot.fixtures import (
    bigon_pair,
    circle_curve,
    limacon_curve,
    noisy_circle,
    noisy_figure_eight,
    trefoil_curve,
)
from flatknot.flow import (
    FlowConfig,
    classify_event,
    flow_step,
    relax,
    total_energy,
)
from flatknot.pendulum import build_infinity_curve
from flatknot.uniformization import (
    EnergyFunctional,
    F_X2,
    gradient_norm,
    project_closure,
    uf_gradient,
)


def bump_curve(c, center, width, vec):
    pts = c.points.copy()
    w = np.exp(-np.hypot(*(pts - center).T) ** 2 / width**2)
    pts = pts + np.outer(w, vec)
    out = resample_arclength(pts, c.n)
    return out.scaled(TWO_PI / out.length)


def r3_pair():
    """Trefoil and its deformation sliding one central strand across the
    opposite crossing: a pure third Reidemeister move."""
    base = trefoil_curve(512)
    d0 = detect_crossings(base)
    centroid = np.array([c.position for c in d0.crossings]).mean(axis=0)
    i0 = int(np.argmin(np.hypot(*(base.points - centroid).T)))
    p0 = base.points[i0]
    moved = bump_curve(base, p0, 0.25, (centroid - p0) * 1.8)
    return d0, detect_crossings(moved)


class TestTotalEnergy:
    def test_round_circle(self):
        cfg = FlowConfig(resistance="MRE", delta=0.01)
        u, r = total_energy(circle_curve(512), cfg)
        assert u == pytest.approx(TWO_PI, abs=1e-6)
        assert r == 0.0

    def test_infinity_with_re(self, infinity_curve):
        cfg = FlowConfig(resistance="RE")
        u, r = total_energy(infinity_curve, cfg)
        assert u == pytest.approx(17.8949330683, abs=1e-6)  # frozen regression
        lobes = enumerate_cycles(detect_crossings(infinity_curve))
        assert abs(lobes[0].area - lobes[1].area) < 1e-6
        assert r == pytest.approx(2.0 / lobes[0].area, rel=1e-9)

    def test_scaling_laws(self, trefoil_diagram):
        cfg = FlowConfig(resistance="RE")
        c = trefoil_diagram.curve
        u1, r1 = total_energy(c, cfg)
        u2, r2 = total_energy(c.scaled(2.0), cfg)
        assert u2 == pytest.approx(u1 / 2, rel=1e-9)
        assert r2 == pytest.approx(r1 / 4, rel=1e-9)


class TestFlowStep:
    def test_descends_on_perturbed_circle(self):
        cfg = FlowConfig(resistance="none", step0=1e-4)
        c = noisy_circle(128, seed=3)
        e0 = sum(total_energy(c, cfg))
        c1, s = flow_step(c, cfg, cfg.step0)
        assert sum(total_energy(c1, cfg)) < e0
        assert s > 0

    def test_critical_circle_barely_moves(self):
        cfg = FlowConfig(resistance="none", step0=1e-4)
        c = circle_curve(128)
        c1, _ = flow_step(c, cfg, cfg.step0)
        assert np.abs(c1.points - c.points).max() < 1e-8

    def test_perturbed_infinity_gradient_drops(self):
        cfg = FlowConfig(resistance="none", step0=1e-4, grad_tol=1e-12, max_iters=200)
        c = noisy_figure_eight(256, seed=2, amplitude=0.03)
        g0 = gauss_from_curve(c)
        n0 = gradient_norm(g0, project_closure(g0, uf_gradient(g0, F_X2)))
        tr = relax(c, cfg)
        g1 = gauss_from_curve(tr.final_curve)
        n1 = gradient_norm(g1, project_closure(g1, uf_gradient(g1, F_X2)))
        assert n1 <= n0 / 10


class TestClassify:
    def test_r2_vanish(self):
        with_bigon, without = bigon_pair()
        ev = classify_event(
            detect_crossings(with_bigon), detect_crossings(without), radius=1.0
        )
        assert ev.kind == "R2_vanish"
        assert ev.crossing_delta == -2

    def test_r2_appear(self):
        with_bigon, without = bigon_pair()
        ev = classify_event(
            detect_crossings(without), detect_crossings(with_bigon), radius=1.0
        )
        assert ev.kind == "R2_appear"
        assert ev.crossing_delta == 2

    def test_r3(self):
        before, after = r3_pair()
        ev = classify_event(before, after, radius=0.3)
        assert ev.kind == "R3"
        assert ev.crossing_delta == 0

    def test_omega1_forbidden(self):
        before = detect_crossings(limacon_curve(n=256))
        after = detect_crossings(circle_curve(256))
        ev = classify_event(before, after, radius=1.0)
        assert ev.kind == "FORBIDDEN"
        assert ev.crossing_delta == -1

    def test_crossing_flip_forbidden(self, trefoil_diagram):
        flipped = detect_crossings(
            trefoil_diagram.curve,
            [c.over_passage != min(c.passages) for c in trefoil_diagram.crossings],
        )
        ev = classify_event(trefoil_diagram, flipped, radius=0.3)
        assert ev.kind == "FORBIDDEN"


class TestRelax:
    def test_monotone_and_length(self):
        lengths = []
        cfg = FlowConfig(resistance="MRE", delta=0.05, step0=1e-4, grad_tol=2e-3, max_iters=150)
        tr = relax(noisy_circle(128, seed=5), cfg, keyframe_cb=lambda it, c: lengths.append(c.length))
        totals = [t for _, _, _, t in tr.energies]
        assert all(t1 <= t0 + 1e-12 for t0, t1 in zip(totals, totals[1:]))
        assert all(abs(L - TWO_PI) < 1e-8 for L in lengths)
        for (_, u, r, t) in tr.energies:
            assert t == pytest.approx(u + r, abs=1e-8)

    def test_whitney_stays_put(self):
        cfg = FlowConfig(resistance="none", step0=1e-4, grad_tol=1e-3, max_iters=120)
        tr = relax(noisy_figure_eight(160, seed=4), cfg)
        assert not any("Whitney" in f for f in tr.findings)

    def test_trefoil_keeps_small_cycles(self):
        cfg = FlowConfig(resistance="MRE", delta=0.2, step0=1e-4, grad_tol=1e-4, max_iters=400)
        tr = relax(trefoil_curve(192), cfg)
        final = detect_crossings(tr.final_curve, "alternate")
        crit = [cy for cy in enumerate_cycles(final) if cy.alternated and cy.area < cfg.delta]
        assert len(crit) >= 1
        assert not any(ev.kind == "FORBIDDEN" for ev in tr.events)

    def test_adversarial_forbidden_with_gmre_spike(self):
        from flatknot.fixtures import collapse_functional

        cfg = FlowConfig(functional=collapse_functional(), resistance="none",
                         delta=0.05, step0=1e-4, grad_tol=1e-6, max_iters=500)
        tr = relax(limacon_curve(inner=2.0, n=256), cfg)
        assert tr.terminated == "forbidden_event"
        assert any(ev.kind == "FORBIDDEN" for ev in tr.events)
        # the knot-type theorem stays vacuous: the monitor blows up
        assert tr.max_gmre > 50.0

    def test_gmre_monitor_on_clean_run(self):
        cfg = FlowConfig(resistance="MRE", delta=0.1, step0=1e-4, grad_tol=5e-4, max_iters=120)
        tr = relax(noisy_circle(128, seed=6), cfg)
        assert tr.max_gmre <= 50.0
        assert not any(ev.kind == "FORBIDDEN" for ev in tr.events)
