"""JSON wire formats.

Curve JSON:    {"points": [[x, y], ...], "length": L}
Gauss JSON:    {"alpha": [...], "base": [x, y]}
Diagram JSON:  {"curve": CurveJSON, "crossings": [{"pos": [x, y], "over": i, "under": j}]}
Census JSON:   {"counts_by_arcs": {...}, "alternated": k, "total": m}
Energy report: {"functional": name, "value": v, "gradient_norm": n, "el": {...}}
Trace lines:   one JSON object per iteration plus event records.
"""

from __future__ import annotations

import json
from collections import Counter

import numpy as np

from .curve import ClosedCurve, GaussRep
from .diagram import EnergyBreakdown, KnotDiagram, detect_crossings


def curve_to_json(c: ClosedCurve) -> dict:
    return {"points": c.points.tolist(), "length": c.length}


def curve_from_json(obj: dict) -> ClosedCurve:
    return ClosedCurve(np.asarray(obj["points"], dtype=float), float(obj["length"]))


def gauss_to_json(g: GaussRep) -> dict:
    return {"alpha": g.alpha.tolist(), "base": g.base_point.tolist()}


def gauss_from_json(obj: dict) -> GaussRep:
    return GaussRep(np.asarray(obj["alpha"], dtype=float), np.asarray(obj["base"], dtype=float))


def diagram_to_json(d: KnotDiagram) -> dict:
    return {
        "curve": curve_to_json(d.curve),
        "crossings": [
            {"pos": c.position.tolist(), "over": c.over_passage, "under": c.under_passage}
            for c in d.crossings
        ],
    }


def diagram_from_json(obj: dict) -> KnotDiagram:
    """Rebuild a diagram: crossings are re-detected from the curve and the
    stored over/under choices are replayed onto them."""
    curve = curve_from_json(obj["curve"])
    recs = obj.get("crossings", [])
    if not recs:
        return detect_crossings(curve, "alternate")
    by_first = sorted(recs, key=lambda r: min(r["over"], r["under"]))
    rule = [r["over"] < r["under"] for r in by_first]
    return detect_crossings(curve, rule)


def census_to_json(cycles) -> dict:
    counts = Counter(cy.n_arcs for cy in cycles)
    return {
        "counts_by_arcs": {str(k): counts[k] for k in sorted(counts)},
        "alternated": sum(1 for cy in cycles if cy.alternated),
        "total": len(cycles),
    }


def breakdown_to_json(b: EnergyBreakdown) -> dict:
    out = {
        "family": b.family,
        "total": b.total,
        "per_cycle": [[i, v] for i, v in b.per_cycle],
    }
    if b.delta is not None:
        out["delta"] = b.delta
    return out


def energy_report_json(name: str, value: float, grad_norm: float, el=None) -> dict:
    out = {"functional": name, "value": value, "gradient_norm": grad_norm}
    if el is not None:
        out["el"] = {"c1": el.c1, "c2": el.c2, "rms": el.rms_residual}
    return out


def write_trace_jsonl(trace, path) -> None:
    with open(path, "w") as fh:
        for (it, u, r, total), gm, nc in zip(
            trace.energies, trace.gmre_values, trace.crossing_counts
        ):
            fh.write(
                json.dumps({"iter": it, "U": u, "R": r, "gmre": gm, "crossings": nc}) + "\n"
            )
        for ev in trace.events:
            fh.write(
                json.dumps(
                    {
                        "event": ev.kind,
                        "iter": ev.iter,
                        "location": np.asarray(ev.location).tolist(),
                        "crossing_delta": ev.crossing_delta,
                    }
                )
                + "\n"
            )


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
