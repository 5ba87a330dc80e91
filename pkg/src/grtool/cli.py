"""``grtool`` command-line front end.

Every subcommand prints one JSON summary line on stdout. With ``--output``
the full result is also written to that file as CSV or JSON. Domain errors
exit with status 1 and a JSON object on stderr; usage errors exit with 2.
Floats are written with 17 significant digits, JSON keys are sorted, and
lines end with LF, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Callable, Optional

import numpy as np

from . import asymptotics as asy
from . import constraints as con
from . import cosmology as cos
from . import geodesics as geo
from . import geometry as gm
from . import kinematics as kin
from . import stellar as st
from . import waves as wv
from .errors import GRError


class UsageError(Exception):
    pass


# ------------------------------------------------------------ serialization


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _Float(float(obj))
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


class _Float(float):
    pass


def dumps(obj) -> str:
    """JSON with sorted keys and floats printed as ``%.17g`` (non-finite values become null)."""

    def enc(o):
        if isinstance(o, _Float) or isinstance(o, float):
            return format(o, ".17g") if math.isfinite(o) else "null"
        if isinstance(o, dict):
            return "{" + ", ".join(json.dumps(k) + ": " + enc(o[k]) for k in sorted(o)) + "}"
        if isinstance(o, list):
            return "[" + ", ".join(enc(v) for v in o) + "]"
        return json.dumps(o)

    return enc(_plain(obj))


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format(float(v), ".17g") for v in row))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ argument helpers


def _floats(text: str, n: Optional[int] = None, name: str = "value") -> list[float]:
    try:
        vals = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}")
    if n is not None and len(vals) != n:
        raise UsageError(f"{name}: expected {n} numbers, got {len(vals)}")
    return vals


class Params:
    """Flag values merged with an optional config file; flags win."""

    def __init__(self, ns: argparse.Namespace, config: dict):
        self._ns = ns
        self._cfg = config

    def get(self, name: str, default=None):
        v = getattr(self._ns, name, None)
        if v is None or v is False:
            v = self._cfg.get(name, self._cfg.get(name.replace("_", "-"), v))
        return default if v is None else v

    def need(self, name: str) -> float:
        v = self.get(name)
        if v is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")
        return float(v)

    def num(self, name: str, default: float) -> float:
        return float(self.get(name, default))

    def int(self, name: str, default: int) -> int:
        return int(self.get(name, default))


# ------------------------------------------------------------ subcommands


def cmd_geodesic(p: Params):
    mode = p.get("mode", "orbit")
    if mode == "raychaudhuri":
        s = geo.raychaudhuri_blowup(p.need("theta0"), p.num("s0", 0.0))
        return {"s_blowup": s}, None
    sp = geo.SchwarzschildParams(p.need("M"))
    if mode == "orbit":
        semi, e = p.need("semilatus"), p.need("e")
        q = geo.orbit_charges(sp, semi, e)
        init = geo.OrbitState(0.0, 0.0, semi / (1.0 + e), 0.0, 0.0)
        tr = geo.integrate_orbit(sp, q, init, p.need("s_end"), n_samples=p.int("samples", 2001))
        drift = float(np.max(np.abs(tr.constraint_residual)))
        return {"c1": q.c1, "c2": q.c2, "max_constraint_residual": drift, "terminated_by": tr.terminated_by}, tr.to_csv()
    if mode == "precession":
        semi, e = p.need("semilatus"), p.need("e")
        val = geo.perihelion_precession(sp, semi, e)
        return {"precession": val, "oracle_6piM_over_p": 6.0 * np.pi * sp.M / semi}, None
    if mode == "deflection":
        b = p.need("b")
        return {"deflection": geo.deflection_angle(sp, b), "weak_field_4M_over_b": 4.0 * sp.M / b}, None
    if mode == "interior":
        res = geo.interior_proper_time(sp, p.need("r0"), p.num("c1", 0.0), p.num("c2", 0.0))
        csv = _csv(["s", "r", "r_dot"], zip(res.s, res.r, res.r_dot))
        return {
            "tau": res.tau, "pi_M": np.pi * sp.M, "bound_residual": res.bound_residual,
            "strictly_decreasing": res.strictly_decreasing,
        }, csv
    if mode == "expansions":
        th_in, th_out = geo.null_expansions_sphere(p.need("r"), sp)
        return {"theta_in": th_in, "theta_out": th_out, "trapped": bool(th_in < 0 and th_out < 0)}, None
    if mode == "chart":
        x = _floats(p.get("point") or _missing("point"), 4, "point")
        ch = geo.schwarzschild_chart(sp, "interior" if 0 < x[1] < sp.c else "exterior")
        cb = gm.curvature(ch, x)
        box_r = gm.dalembertian(ch, lambda y: y[1], x)
        return {
            "christoffel": gm.christoffel(ch, x), "ricci": cb.ricci, "scalar": cb.scalar,
            "box_r": box_r,
        }, None
    raise UsageError(f"unknown geodesic mode {mode!r}")


def _missing(name):
    raise UsageError(f"--{name} is required")


def cmd_cosmos(p: Params):
    model = cos.FLRWModel(p.need("K"), p.need("Lambda"), p.need("cm"))
    mode = p.get("mode", "evolve")
    if mode == "fate":
        return {"fate": cos.classify_fate(model.K, model.Lambda, model.c_m)}, None
    if mode == "cycloid":
        t = p.need("t")
        return {"alpha": model.alpha, "t": t, "a": cos.cycloid_scale_factor(model.alpha, t)}, None
    if mode != "evolve":
        raise UsageError(f"unknown cosmos mode {mode!r}")
    b0_dot = p.get("b0_dot")
    tr = cos.solve_conformal_scale(
        model, p.need("b0"), None if b0_dot is None else float(b0_dot), (0.0, p.need("s_end")),
        t0=p.num("t0", 0.0),
    )
    n = p.int("samples", 401)
    s = np.linspace(tr.s[0], tr.s[-1], n)
    b, bd, t = tr.dense(s)
    csv = _csv(["s", "b", "eqb2_residual", "t", "a", "rho"], zip(s, b, cos.eqb2_residual(model, b, bd), t, b, cos.density(model, b)))
    worst = float(np.max(np.abs(tr.eqb2_residual)))
    return {"event": tr.event, "max_abs_eqb2_residual": worst, "alpha": model.alpha}, csv


def cmd_star(p: Params):
    mode = p.get("mode", "tov")
    if mode == "buchdahl":
        margin, stable = st.buchdahl_margin(p.need("M"), p.need("r0"))
        return {"margin": margin, "stable": stable}, None
    if mode == "closed-form":
        M, r0 = p.need("M"), p.need("r0")
        eos, pc = st.incompressible_star(r0, M)
        r = np.linspace(0.0, r0, p.int("samples", 201))
        pr = st.incompressible_pressure(eos.rho0, r0, M, r)
        return {"rho0": eos.rho0, "p_center": pc, "p_center_over_rho0": pc / eos.rho0}, _csv(["r", "p"], zip(r, pr))
    if mode == "shoot":
        eos = st.EquationOfState.incompressible(p.need("rho0"))
        pc = st.shoot_central_pressure(eos, p.need("r0"))
        return {"p_center": pc, "p_center_over_rho0": pc / eos.rho0}, None
    if mode != "tov":
        raise UsageError(f"unknown star mode {mode!r}")
    eos = st.EquationOfState.incompressible(p.need("rho0"))
    prof = st.integrate_tov(eos, p.need("pc"), n_samples=p.int("samples", 201))
    return prof.summary(), prof.to_csv()


def _dataset(p: Params):
    kind = p.get("metric") or _missing("metric")
    if kind == "isotropic":
        return asy.isotropic_schwarzschild(p.need("mass")), "isotropic"
    if kind == "schwarzschild":
        return asy.schwarzschild_slice(2.0 * p.need("mass")), "schwarzschild"
    if kind == "bowen-york":
        return asy.bowen_york(_floats(p.get("P") or _missing("P"), 3, "P")), "bowen-york"
    raise UsageError(f"unknown metric {kind!r}")


def cmd_adm(p: Params):
    d, kind = _dataset(p)
    radii = _floats(p.get("radii") or _missing("radii"), name="radii")
    order = tuple(int(v) for v in _floats(p.get("quad_order", "32,64"), 2, "quad-order"))
    model = p.get("model", "richardson")
    mass = asy.adm_mass(d, radii, order, model)
    mom = asy.adm_momentum(d, radii, order, model)
    out = {"mass_estimates": mass.to_dict()["estimates"], "extrapolated": mass.extrapolated, "momentum": mom.extrapolated}
    cols = [radii, mass.estimates]
    header = ["r", "adm_mass"]
    if p.get("komar") and kind != "bowen-york":
        m = p.need("mass")
        if kind == "isotropic":
            f = lambda x: (1 - 0.5 * m / np.linalg.norm(x)) / (1 + 0.5 * m / np.linalg.norm(x))  # noqa: E731
        else:
            f = lambda x: np.sqrt(1 - 2 * m / np.linalg.norm(x))  # noqa: E731
        km = asy.komar_static_mass(f, d.three_metric, radii, quad_order=order, model=model, r_min=d.r_min)
        out["komar"] = km.extrapolated
        cols.append(km.estimates)
        header.append("komar_mass")
    if kind != "bowen-york":
        m = p.need("mass")
        r_h = 0.5 * m if kind == "isotropic" else 2.0 * m * (1.0 + 1e-9)
        area = asy.sphere_area(d.three_metric, r_h, order)
        ratio, ok = asy.penrose_check(mass.extrapolated, area)
        out["penrose"] = {"area": area, "ratio": ratio, "satisfied": ok}
    return out, _csv(header, zip(*cols))


def cmd_kerr(p: Params):
    k = asy.KerrParams(p.need("M"), p.need("a"))
    s = asy.kerr_structure(k)
    out = s.to_dict()
    if s.r_plus is not None:
        delta = lambda r: r * r - 2 * k.M * r + k.a**2  # noqa: E731
        out["delta_at_horizons"] = [delta(s.r_minus), delta(s.r_plus)]
    if p.get("region"):
        r, th = _floats(p.get("region"), 2, "region")
        out["region"] = s.region(r, th)
    n = p.int("vacuum_check", 0)
    if n:
        rng = np.random.default_rng(p.int("seed", 0))
        ch = asy.kerr_chart(k)
        r_out = (s.r_plus if s.r_plus is not None else 0.0) + 0.5 * k.M
        worst = 0.0
        for _ in range(n):
            x = [rng.uniform(-1, 1), r_out + rng.uniform(0, 20) * k.M, rng.uniform(0.2, np.pi - 0.2), rng.uniform(0, 2 * np.pi)]
            worst = max(worst, float(np.max(np.abs(gm.curvature(ch, x).ricci))))
        out["max_abs_ricci"] = worst
    return out, None


def _seed(p: Params, N: int) -> con.ConformalSeed:
    grid = con.TorusGrid(N)
    X, _, Z = grid.coords
    tau = p.need("tau") + p.num("tau_amp", 0.0) * np.sin(X)
    sigma = np.broadcast_to(con.sigma_with_norm(p.need("sigma2"))[:, :, None, None, None], (3, 3) + grid.shape).copy()
    wave = p.num("sigma_wave", 0.0)
    sigma[0, 0] += wave * np.cos(Z)
    sigma[1, 1] -= wave * np.cos(Z)
    return con.ConformalSeed(grid, tau, sigma)


def cmd_constraints(p: Params):
    seed = _seed(p, p.int("N", 32))
    mode = p.get("mode", "solve")
    if mode == "probe":
        return con.nonexistence_probe(seed), None
    if mode == "lichnerowicz":
        phi = con.solve_lichnerowicz(seed, None, 1.0)
        return {"phi_min": float(phi.min()), "phi_max": float(phi.max())}, None
    if mode != "solve":
        raise UsageError(f"unknown constraints mode {mode!r}")
    sol = con.coupled_subcritical_solve(seed, con.epsilon_schedule(p.int("levels", 6)))
    out = {
        "phi_min": float(sol.phi.min()), "phi_max": float(sol.phi.max()),
        "kernel_residual": sol.kernel_residual, "dtau_over_tau_L3": sol.dtau_over_tau_L3,
        "outer_iterations": len(sol.epsilon_history),
    }
    out.update(con.reconstruct_and_verify(seed, sol))
    out["energy_identity_relative"] = con.energy_identity(seed, sol)["relative"]
    out.update({f"coupled_{k}": v for k, v in con.coupled_residuals(seed, sol).items()})
    return out, sol.to_csv()


def _tt(p: Params) -> wv.TTWaveSpec:
    return wv.TTWaveSpec(p.need("omega"), p.num("aplus", 0.0), p.num("across", 0.0))


def cmd_wave(p: Params):
    if p.get("ring"):
        spec = _tt(p)
        frames, n = p.int("frames", 8), p.int("particles", 16)
        csv = wv.ring_snapshots_csv(spec, n, frames)
        b = wv.ring_deformation(spec, [[1.0, 0.0], [0.0, 1.0]], 0.0)
        return {"frames": frames, "particles": n, "axes_at_phase_0": [float(b[0, 0]), float(b[1, 1])]}, csv
    if p.get("fd"):
        N = p.int("N", 64)
        t_end = p.need("t_end")
        f = wv.fd_wave_solve(np.sin, lambda x: 0.0 * x, 0.0, 2.0 * np.pi, N, t_end, p.num("cfl", 0.5), p.get("boundary", "periodic"))
        exact = np.array([wv.dalembert_exact(np.sin, lambda x: 0.0, t_end, x) for x in f.x])
        drift = float(np.ptp(f.energy) / f.energy[0]) if f.energy[0] else 0.0
        return {
            "max_error": float(np.max(np.abs(f.u - exact))), "energy_drift": drift, "dt": f.dt, "steps": f.steps,
        }, _csv(["x", "u", "exact"], zip(f.x, f.u, exact))
    if p.get("tt"):
        spec = _tt(p)
        t, x3 = p.need("t"), p.need("x3")
        h = wv.tt_wave_field(spec, t, x3)
        pert = wv.tt_perturbation(spec)
        x = np.array([t, 0.0, 0.0, x3])
        amp = p.num("gauge_amp", 1e-3)
        xi = lambda y: amp * np.sin(y[0] + 0.5 * y[3]) * np.array([1.0, 0.3, -0.2, 0.1])  # noqa: E731
        G = wv.linearized_einstein(pert, x)
        G2 = wv.linearized_einstein(wv.gauge_transform(pert, xi), x)
        return {
            "h": h, "trace": float(np.trace(wv.ETA @ h)), "hbar": wv.trace_reverse(h),
            "lorenz_residual": wv.lorenz_residual(pert, x), "einstein": G,
            "einstein_gauge_shift": float(np.max(np.abs(G2 - G))),
        }, None
    if p.get("interferometer"):
        spec = _tt(p)
        n = p.int("samples", 64)
        times = np.linspace(0.0, p.need("t_end"), n)
        return {"samples": n}, wv.interferometer_csv(spec, times)
    if p.get("quadrupole"):
        m, d, Om = p.need("m"), p.need("d"), p.need("Omega")
        blob = p.get("blob_radius")
        src = wv.binary_source(m, d, Om, None if blob is None else float(blob))
        period = 2.0 * np.pi / Om
        n = p.int("samples", 128)
        ts = np.arange(n) * p.num("periods", 4.0) * period / n
        kw = {} if blob is None else {"panels": p.int("panels", 6), "order": p.int("order", 6)}
        Q = [wv.quadrupole_moment(src, t, **kw) for t in ts]
        Qdd = [wv.quadrupole_second_derivative(src, t, 1e-3 * period, **kw) for t in ts]
        peak = wv.spectral_peak(ts, [q[0, 0] for q in Qdd])
        csv = _csv(["t", "Q11", "Q22", "Q12", "Qdd11"], [(t, q[0, 0], q[1, 1], q[0, 1], qd[0, 0]) for t, q, qd in zip(ts, Q, Qdd)])
        return {"peak_angular_frequency": peak, "two_Omega": 2.0 * Om, "Q_at_0": Q[0]}, csv
    raise UsageError("choose one of --ring, --fd, --tt, --interferometer, --quadrupole")


def cmd_kinematics(p: Params):
    v = p.need("v")
    dil, con_ = kin.lorentz_factors(v)
    out = {"dilation": dil, "contraction": con_}
    if p.get("m0") is not None:
        m0 = p.need("m0")
        mass, mom, energy = kin.relativistic_dynamics(m0, v)
        out.update({"mass": mass, "momentum": mom, "energy": energy, "mass_shell_residual": energy**2 - mom**2 - m0**2})
    if p.get("duration") is not None:
        T = p.need("duration")
        out["round_trip_proper_time"] = kin.proper_time(kin.round_trip(v, T), 0.0, T)
        out["analytic"] = T * np.sqrt(1.0 - v * v)
    return out, None


def cmd_classify(p: Params):
    g = np.array(_floats(p.get("g"), 16, "g")).reshape(4, 4) if p.get("g") else kin.ETA
    out = {}
    if p.get("E"):
        E = np.array(_floats(p.get("E"), 16, "E")).reshape(4, 4)
        if p.get("dominant_energy"):
            out["dominant_energy"] = asy.dominant_energy_check(E, g, p.int("trials", 1000), p.int("seed", 0))
        else:
            t = gm.classify_einstein(E, g)
            out.update({"type": t.kind.value, "eigenvalues": list(t.eigenvalues), "params": t.params})
    if p.get("causal"):
        out["causal_character"] = gm.causal_character(g, _floats(p.get("causal"), 4, "causal"))
    if p.get("carter_penrose"):
        t, r = _floats(p.get("carter_penrose"), 2, "carter-penrose")
        T, R, om = gm.carter_penrose(t, r)
        out.update({"T": T, "R": R, "omega_sq": om})
    if not out:
        raise UsageError("nothing to do: give --E, --causal or --carter-penrose")
    return out, None


# operation coverage: which module operations each subcommand exercises
DISPATCH: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "geodesic": (cmd_geodesic, (
        "geodesics.schwarzschild_chart", "geodesics.integrate_orbit", "geodesics.perihelion_precession",
        "geodesics.deflection_angle", "geodesics.interior_proper_time", "geodesics.null_expansions_sphere",
        "geodesics.raychaudhuri_blowup", "geometry.christoffel", "geometry.curvature", "geometry.dalembertian",
    )),
    "cosmos": (cmd_cosmos, (
        "cosmology.solve_conformal_scale", "cosmology.cycloid_scale_factor", "cosmology.density",
        "cosmology.classify_fate",
    )),
    "star": (cmd_star, ("stellar.integrate_tov", "stellar.incompressible_pressure", "stellar.buchdahl_margin")),
    "adm": (cmd_adm, (
        "asymptotics.adm_mass", "asymptotics.adm_momentum", "asymptotics.komar_static_mass",
        "asymptotics.penrose_check",
    )),
    "kerr": (cmd_kerr, ("asymptotics.kerr_chart", "asymptotics.kerr_structure", "geometry.curvature")),
    "constraints": (cmd_constraints, (
        "constraints.conformal_killing_op", "constraints.solve_vector_equation", "constraints.solve_lichnerowicz",
        "constraints.coupled_subcritical_solve", "constraints.reconstruct_and_verify",
        "constraints.nonexistence_probe",
    )),
    "wave": (cmd_wave, (
        "waves.dalembert_exact", "waves.fd_wave_solve", "waves.tt_wave_field", "waves.trace_reverse",
        "waves.lorenz_residual", "waves.gauge_transform", "waves.linearized_einstein", "waves.ring_deformation",
        "waves.arm_strain", "waves.quadrupole_moment",
    )),
    "kinematics": (cmd_kinematics, ("kinematics.lorentz_factors", "kinematics.relativistic_dynamics", "kinematics.proper_time")),
    "classify": (cmd_classify, (
        "geometry.classify_einstein", "geometry.carter_penrose", "geometry.causal_character",
        "asymptotics.dominant_energy_check",
    )),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grtool", description="General-relativity numerics toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, *flags):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="JSON file with parameter values; flags override it")
        sp.add_argument("--output", "-o", help="write the full result to this file")
        sp.add_argument("--format", choices=("csv", "json"), help="file format (default: csv when available)")
        for flag in flags:
            if isinstance(flag, tuple):
                name_, kw = flag
                sp.add_argument(name_, **kw)
            else:
                sp.add_argument(flag)
        return sp

    flag = {"action": "store_true", "default": None}
    add("geodesic", "Schwarzschild geodesics and focusing",
        ("--mode", {"choices": ("orbit", "precession", "deflection", "interior", "expansions", "raychaudhuri", "chart")}),
        "--M", "--semilatus", "--e", "--s-end", "--samples", "--b", "--r0", "--c1", "--c2", "--r",
        "--theta0", "--s0", "--point")
    add("cosmos", "FLRW scale factor", ("--mode", {"choices": ("evolve", "fate", "cycloid")}),
        "--K", "--Lambda", "--cm", "--b0", "--b0-dot", "--s-end", "--t0", "--t", "--samples")
    add("star", "static stars", ("--mode", {"choices": ("tov", "closed-form", "shoot", "buchdahl")}),
        "--rho0", "--pc", "--r0", "--M", "--samples")
    add("adm", "ADM and Komar masses", ("--metric", {"choices": ("isotropic", "schwarzschild", "bowen-york")}),
        "--mass", "--P", "--radii", "--quad-order", ("--model", {"choices": ("richardson", "linear")}),
        ("--komar", flag))
    add("kerr", "Kerr horizons and ergosphere", "--M", "--a", "--region", "--vacuum-check", "--seed")
    add("constraints", "conformal constraint solver on the torus",
        ("--mode", {"choices": ("solve", "lichnerowicz", "probe")}),
        "--N", "--tau", "--tau-amp", "--sigma2", "--sigma-wave", "--levels")
    add("wave", "wave equation and linearized gravity",
        ("--ring", flag), ("--fd", flag), ("--tt", flag), ("--interferometer", flag), ("--quadrupole", flag),
        "--omega", "--aplus", "--across", "--frames", "--particles", "--N", "--t-end", "--cfl",
        ("--boundary", {"choices": ("periodic", "absorbing")}), "--t", "--x3", "--gauge-amp", "--samples",
        "--m", "--d", "--Omega", "--periods", "--blob-radius", "--panels", "--order")
    add("kinematics", "special-relativistic kinematics", "--v", "--m0", "--duration")
    add("classify", "Einstein-tensor type, causal character, compactification",
        "--E", "--g", ("--dominant-energy", flag), "--trials", "--seed", "--causal", "--carter-penrose")
    return ap


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)  # exits with status 2 on usage errors
    try:
        config = {}
        if ns.config:
            with open(ns.config, encoding="utf-8") as fh:
                config = json.load(fh)
            if not isinstance(config, dict):
                raise UsageError("config file must hold a JSON object")
        params = Params(ns, config)
        handler = DISPATCH[ns.command][0]
        summary, csv_text = handler(params)
        output = params.get("output")
        if output:
            fmt = params.get("format") or ("csv" if csv_text is not None else "json")
            if fmt == "csv" and csv_text is None:
                raise UsageError(f"{ns.command}: no CSV form for this result; use --format json")
            _write(output, csv_text if fmt == "csv" else dumps(summary) + "\n")
        sys.stdout.write(dumps(summary) + "\n")
        return 0
    except (UsageError, ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"grtool {ns.command}: error: {exc}\n")
        return 2
    except GRError as exc:
        sys.stderr.write(dumps(exc.to_dict()) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
