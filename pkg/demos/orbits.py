"""Schwarzschild orbits: precession, light bending, interior fall."""

from pathlib import Path

import numpy as np

from grtool import geodesics as geo

OUT = Path(__file__).with_name("out")

p = geo.SchwarzschildParams(1.0)
for semi in (20.0, 100.0, 1000.0):
    print(f"p={semi:7.1f}  precession={geo.perihelion_precession(p, semi, 0.2):.6f}  6piM/p={6 * np.pi / semi:.6f}")
for b in (10.0, 100.0, 1000.0):
    print(f"b={b:7.1f}  deflection={geo.deflection_angle(p, b):.6f}  4M/b={4 / b:.6f}")
print(f"maximal interior fall time {geo.interior_proper_time(p, 2 * (1 - 1e-12)).tau:.6f} (pi M = {np.pi:.6f})")

q = geo.orbit_charges(p, 20.0, 0.2)
T = 2 * np.pi * (20.0 / 0.96) ** 1.5
tr = geo.integrate_orbit(p, q, geo.OrbitState(0, 0, 20.0 / 1.2, 0, 0.0), 5 * T, n_samples=4001)
OUT.mkdir(exist_ok=True)
(OUT / "orbit.csv").write_text(tr.to_csv())
print(f"orbit written to {OUT / 'orbit.csv'}; max constraint residual {np.abs(tr.constraint_residual).max():.1e}")
