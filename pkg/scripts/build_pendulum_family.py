"""Scan the closure integral over the swing amplitude, locate its root,
and emit the infinity-shaped critical curve with closure diagnostics.

Usage: python scripts/build_pendulum_family.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from flatknot import (
    build_infinity_curve,
    closure_report,
    delta_x,
    el_residual,
    F_X2,
    find_critical_xi,
    gauss_from_curve,
)
from flatknot.jsonio import curve_to_json, dump_json
from flatknot.svg import curve_svg

outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "out/pendulum")
outdir.mkdir(parents=True, exist_ok=True)

print("xi        Delta x(xi, 2)")
for xi in np.linspace(0.0, 0.98, 15):
    print(f"{xi:0.4f}    {delta_x(float(xi), 2):+.6f}")

xi_star = find_critical_xi(2)
print(f"\nroot: xi = {xi_star:.12f}")

curve = build_infinity_curve(2, 2048)
rep = closure_report(gauss_from_curve(curve))
el = el_residual(gauss_from_curve(curve), F_X2)
print(f"closure integrals: ({rep.cos_integral:.2e}, {rep.sin_integral:.2e}), whitney {rep.whitney}")
print(f"Euler-Lagrange fit: C1 = {el.c1:.3e}, C2 = {el.c2:.6f}, rms {el.rms_residual:.2e}")

dump_json(curve_to_json(curve), outdir / "infinity.json")
(outdir / "infinity.svg").write_text(curve_svg(curve))
print(f"wrote {outdir}/infinity.json and .svg")
