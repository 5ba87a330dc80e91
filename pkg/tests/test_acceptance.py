"""Acceptance criteria 1-14.

Run with ``pytest -s tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``;
each criterion prints one PASS/FAIL line.
"""

import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad

from grtool import asymptotics as asy
from grtool import constraints as con
from grtool import cosmology as cos
from grtool import geodesics as geo
from grtool import geometry as gm
from grtool import kinematics as kin
from grtool import stellar as st
from grtool import waves as wv

RADII = [10.0, 20.0, 40.0, 80.0]
CRITERIA = []


def criterion(n, title):
    def register(fn):
        CRITERIA.append((n, title, fn))
        return fn

    return register


def _line(n, title, ok, detail):
    return f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"


# ------------------------------------------------------------ criteria


@criterion(1, "ADM mass, isotropic slice")
def c01():
    t0 = time.perf_counter()
    m = asy.adm_mass(asy.isotropic_schwarzschild(1.0), RADII).extrapolated
    dt = time.perf_counter() - t0
    return abs(m - 1.0) < 1e-3 and dt < 5.0, f"m={m:.10f} in {dt:.2f}s"


@criterion(2, "ADM mass, Schwarzschild-coordinate slice c=2")
def c02():
    m = asy.adm_mass(asy.schwarzschild_slice(2.0), RADII).extrapolated
    return abs(m - 1.0) < 1e-3, f"m={m:.10f}"


@criterion(3, "Penrose equality with quadratured horizon area")
def c03():
    d = asy.isotropic_schwarzschild(1.0)
    area = asy.sphere_area(d.three_metric, 0.5)
    ratio, ok = asy.penrose_check(asy.adm_mass(d, RADII).extrapolated, area)
    return abs(ratio - 1.0) < 1e-6 and ok, f"ratio-1={ratio - 1.0:.2e}"


@criterion(4, "Kerr horizons, area, Penrose ratio")
def c04():
    k = asy.KerrParams(1.0, 0.6)
    s = asy.kerr_structure(k)
    delta = max(abs(r * r - 2 * k.M * r + k.a**2) for r in (s.r_minus, s.r_plus))

    def dens(th):
        rho2 = s.r_plus**2 + k.a**2 * np.cos(th) ** 2
        gpp = (s.r_plus**2 + k.a**2) * np.sin(th) ** 2 + 2 * k.M * s.r_plus * k.a**2 * np.sin(th) ** 4 / rho2
        return np.sqrt(rho2 * gpp)

    brute = 2 * np.pi * quad(dens, 0.0, np.pi, epsabs=1e-13)[0]
    area_err = max(abs(s.horizon_area - 8 * np.pi * k.M * s.r_plus), abs(brute - 8 * np.pi * k.M * s.r_plus))
    ratios = np.array([asy.kerr_structure(asy.KerrParams(1.0, a)).penrose_ratio for a in np.linspace(0, 0.99, 50)])
    r0_err = abs(ratios[0] - 1 / np.sqrt(16 * np.pi))
    ok = delta < 1e-12 and area_err < 1e-4 and r0_err < 1e-6 and ratios.argmin() == 0
    return ok, f"Delta={delta:.1e} area_err={area_err:.1e} ratio(0)={ratios[0]:.7f}"


@criterion(5, "Perihelion precession and constraint drift")
def c05():
    p1 = geo.SchwarzschildParams(1.0)
    prec = geo.perihelion_precession(p1, 1000.0, 0.2)
    oracle = 6 * np.pi / 1000.0
    q = geo.orbit_charges(p1, 1000.0, 0.2)
    T = 2 * np.pi * (1000.0 / (1 - 0.04)) ** 1.5
    tr = geo.integrate_orbit(p1, q, geo.OrbitState(0, 0, 1000.0 / 1.2, 0, 0.0), 10 * T, n_samples=5001)
    drift = float(np.max(np.abs(tr.constraint_residual)))
    rel = abs(prec - oracle) / oracle
    return rel < 1e-2 and drift < 1e-8, f"precession={prec:.6f} rel={rel:.1e} drift={drift:.1e}"


@criterion(6, "Light deflection")
def c06():
    p1 = geo.SchwarzschildParams(1.0)
    d3 = geo.deflection_angle(p1, 1e3)
    gaps = [abs(geo.deflection_angle(p1, b) * b - 4.0) for b in (1e3, 1e4, 1e5)]
    rel = abs(d3 - 4e-3) / 4e-3
    return rel < 1e-2 and gaps[0] > gaps[1] > gaps[2], f"rel={rel:.1e} gaps={[f'{g:.1e}' for g in gaps]}"


@criterion(7, "Interior proper time bound")
def c07():
    p1 = geo.SchwarzschildParams(1.0)
    tau = geo.interior_proper_time(p1, 2.0 * (1 - 1e-12)).tau
    rng = np.random.default_rng(11)
    ok = abs(tau - np.pi) < 1e-4
    for _ in range(10):
        M = rng.uniform(0.5, 2.0)
        res = geo.interior_proper_time(geo.SchwarzschildParams(M), rng.uniform(0.05, 1.95) * M, rng.uniform(0, 2), rng.uniform(0, 3) * M)
        ok = ok and res.tau <= np.pi * M + 1e-10 and res.strictly_decreasing
    return ok, f"tau_max-pi={tau - np.pi:.1e}"


@criterion(8, "Closed FLRW universe")
def c08():
    m = cos.FLRWModel(1.0, 0.0, 3.0 / (4.0 * np.pi))
    s0 = 0.25
    tr = cos.solve_conformal_scale(m, 1 - np.cos(s0), np.sin(s0), (s0, 3 * np.pi), t0=s0 - np.sin(s0))
    ts = np.linspace(tr.t[0], tr.t[-1], 102)[1:-1]
    cyc = max(abs(tr.state_at_time(t)[1] - cos.cycloid_scale_factor(m.alpha, t)) for t in ts)
    eqb2 = float(np.max(np.abs(tr.eqb2_residual)))
    crunch = abs(tr.event["t"] - 2 * np.pi * m.alpha)
    rho = float(np.max(np.abs(tr.density() * tr.a**3 - m.c_m)) / m.c_m)
    flat = cos.FLRWModel(0.0, 0.0, 0.1)
    ftr = cos.solve_conformal_scale(flat, 0.5, None, (0.0, 4.0))
    chart = cos.flrw_chart(ftr)
    closure = 0.0
    for t in np.linspace(ftr.t[0], ftr.t[-1], 7)[1:-1]:
        E = gm.curvature(chart, np.array([t, 0.3, -0.2, 0.1])).einstein
        target = np.zeros((4, 4))
        target[0, 0] = 8 * np.pi * flat.c_m / ftr.state_at_time(t)[1] ** 3
        closure = max(closure, float(np.max(np.abs(E - target))))
    ok = cyc < 1e-6 and eqb2 < 1e-8 and crunch < 1e-6 and rho < 1e-9 and closure < 1e-4
    return ok, f"cycloid={cyc:.1e} eqb2={eqb2:.1e} crunch={crunch:.1e} rho_a3={rho:.1e} closure={closure:.1e}"


@criterion(9, "TOV incompressible star")
def c09():
    eos, pc = st.incompressible_star(1.0, 0.25)
    prof = st.integrate_tov(eos, pc, n_samples=401)
    inside = prof.r < prof.r0 * (1 - 1e-9)
    exact = st.incompressible_pressure(eos.rho0, 1.0, 0.25, prof.r[inside])
    err = float(np.max(np.abs(prof.p[inside] - exact) / exact))
    M = 1.0
    r0 = 2.25 * M * (1 + 1e-6)
    eos_b, pc_b = st.incompressible_star(r0, M)
    return err < 1e-6 and pc_b > 1e3 * eos_b.rho0, f"rel_err={err:.1e} p_c/rho0={pc_b / eos_b.rho0:.3e}"


@criterion(10, "Vacuum Ricci of Schwarzschild and Kerr")
def c10():
    worst = 0.0
    for chart, r_lo in ((geo.schwarzschild_chart(geo.SchwarzschildParams(1.0)), 3.0), (asy.kerr_chart(asy.KerrParams(1.0, 0.6)), 2.5)):
        rng = np.random.default_rng(0)
        for _ in range(20):
            x = [rng.uniform(-1, 1), rng.uniform(r_lo, r_lo + 20), rng.uniform(0.2, np.pi - 0.2), rng.uniform(0, 2 * np.pi)]
            worst = max(worst, float(np.max(np.abs(gm.curvature(chart, x).ricci))))
    return worst < 1e-4, f"max|Ric|={worst:.1e}"


@criterion(11, "Constraint solver")
def c11():
    g16 = con.TorusGrid(16)
    phi = con.solve_lichnerowicz(con.constant_seed(g16, 2.0, con.sigma_with_norm(6.0)), None, 1.0)
    cmc = float(np.max(np.abs(phi - (3 * 6.0 / (2 * 4.0)) ** (1 / 12))))
    grid = con.TorusGrid(32)
    X = grid.coords[0]
    sigma = np.broadcast_to(con.sigma_with_norm(6.0)[:, :, None, None, None], (3, 3) + grid.shape).copy()
    seed = con.ConformalSeed(grid, 3.0 + 0.01 * np.sin(X), sigma)
    sol = con.coupled_subcritical_solve(seed)
    energy = con.energy_identity(seed, sol)["relative"]
    rec = con.reconstruct_and_verify(seed, sol)
    res = max(rec["hamiltonian_residual"], rec["momentum_residual"])
    probe = con.nonexistence_probe(con.constant_seed(g16, 1.0, np.zeros((3, 3))))["status"]
    rng = np.random.default_rng(42)
    adj = 0.0
    for _ in range(10):
        V = rng.normal(size=(3,) + g16.shape)
        S = rng.normal(size=(3, 3) + g16.shape)
        S = 0.5 * (S + S.transpose(1, 0, 2, 3, 4))
        S -= np.eye(3)[:, :, None, None, None] * np.einsum("ii...->...", S) / 3.0
        a = con.inner(g16, con.conformal_killing_op(g16, V), S)
        b = con.inner(g16, V, con.adjoint(g16, S))
        adj = max(adj, abs(a - b) / max(abs(a), 1.0))
    ok = cmc < 1e-10 and energy < 1e-8 and res < 1e-6 and probe == "Infeasible" and adj < 1e-10
    return ok, f"cmc={cmc:.1e} energy={energy:.1e} residual={res:.1e} probe={probe} adjoint={adj:.1e}"


@criterion(12, "Waves")
def c12():
    errs = []
    for N in (32, 64, 128):
        f = wv.fd_wave_solve(np.sin, lambda x: 0.0 * x, 0.0, 2 * np.pi, N, 1.0)
        errs.append(np.max(np.abs(f.u - np.sin(f.x) * np.cos(1.0))))
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    t, x = 1.5, 0.2
    far = lambda f, c: lambda s: f(s) + (c if abs(s - x) > t + 1e-9 else 0.0)  # noqa: E731
    psi = lambda s: np.exp(-s * s)  # noqa: E731
    dod = wv.dalembert_exact(np.cos, psi, t, x) == wv.dalembert_exact(far(np.cos, 7.0), far(psi, -3.0), t, x)
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    b = wv.ring_deformation(wv.TTWaveSpec(1.0, 1.0, 0.0), np.stack([np.cos(th), np.sin(th)], 1), 0.0)
    ring = float(np.max(np.abs(b - np.stack([1.5 * np.cos(th), 0.5 * np.sin(th)], 1))))
    rng = np.random.default_rng(7)
    tt = True
    for _ in range(100):
        h = wv.tt_wave_field(wv.TTWaveSpec(rng.uniform(0.1, 5), *rng.normal(size=2)), *rng.uniform(-10, 10, 2))
        tt = tt and np.einsum("ab,ab->", wv.ETA, h) == 0 and not h[0].any() and not h[3].any()
    Q = wv.quadrupole_moment(wv.binary_source(1.0, 1.0, 1.0, blob_radius=0.5), 0.0)
    qerr = float(np.max(np.abs(Q - np.diag([4 / 3, -2 / 3, -2 / 3]))))
    src = wv.binary_source(1.0, 1.0, 1.0)
    times = np.linspace(0.0, 16 * np.pi, 256, endpoint=False)
    q11 = [wv.quadrupole_second_derivative(src, s, 2e-3 * np.pi)[0, 0] for s in times]
    peak = wv.spectral_peak(times, q11)
    ok = all(3.5 <= r <= 4.5 for r in ratios) and dod and ring < 1e-12 and tt and qerr < 1e-5 and abs(peak - 2.0) < 1e-12
    return ok, f"ratios={[round(float(r), 3) for r in ratios]} ring={ring:.1e} Q_err={qerr:.1e} peak={peak:.6f}"


@criterion(13, "Kinematics")
def c13():
    shell = max(abs(E * E - p * p - 1.0) for _, p, E in (kin.relativistic_dynamics(1.0, v) for v in np.linspace(0, 0.99, 100)))
    tau = kin.proper_time(kin.round_trip(0.99, 10.0), 0.0, 10.0)
    err = abs(tau - 10.0 * np.sqrt(1 - 0.99**2))
    return shell < 1e-12 and err < 1e-8, f"mass_shell={shell:.1e} langevin_err={err:.1e}"


@criterion(14, "CLI determinism")
def c14():
    runs = [
        ["adm", "--metric", "isotropic", "--mass", "1", "--radii", "10,20,40,80"],
        ["geodesic", "--mode", "orbit", "--M", "1", "--semilatus", "20", "--e", "0.2", "--s-end", "200"],
        ["wave", "--ring", "--aplus", "1", "--omega", "1", "--frames", "8"],
    ]
    same = True
    with tempfile.TemporaryDirectory() as tmp:
        for i, argv in enumerate(runs):
            blobs = []
            for k in range(2):
                path = Path(tmp) / f"{i}_{k}.csv"
                proc = subprocess.run([sys.executable, "-m", "grtool", *argv, "-o", str(path)], capture_output=True)
                blobs.append((proc.returncode, proc.stdout, path.read_bytes()))
            same = same and blobs[0] == blobs[1] and blobs[0][0] == 0
    return same, f"{len(runs)} commands run twice"


# ------------------------------------------------------------ drivers


@pytest.mark.parametrize("n,title,fn", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(n, title, fn):
    ok, detail = fn()
    print("\n" + _line(n, title, ok, detail))
    assert ok, detail


def main() -> int:
    failures = 0
    for n, title, fn in CRITERIA:
        try:
            ok, detail = fn()
        except Exception as exc:  # report and continue
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        failures += not ok
        print(_line(n, title, ok, detail))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
