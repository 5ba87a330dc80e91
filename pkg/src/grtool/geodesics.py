"""Schwarzschild orbits, light bending, interior fall and focusing.

Equatorial geodesics of ``-(1 - 2M/r) dt^2 + dr^2/(1 - 2M/r) + r^2 dOmega^2``
are governed by the conserved charges ``c1`` (energy) and ``c2`` (angular
momentum)::

    (r')^2 + (1 - 2M/r)(c2^2/r^2 + kappa) = c1^2
    r^2 phi' = c2
    (1 - 2M/r) t' = c1

with ``kappa = 1`` for timelike and ``kappa = 0`` for null curves. The
integrator propagates the second-order radial equation

    r'' = -kappa M/r^2 + c2^2/r^3 - 3 M c2^2/r^4

and keeps the first-order relation as a drift monitor, which avoids the
square-root branch ambiguity at turning points.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import (
    InconsistentConstraint,
    NonNegativeTheta,
    NotInterior,
    PhotonCaptured,
    SingularityReached,
    UnboundOrbit,
)
from .geometry import MetricChart


@dataclass(frozen=True)
class SchwarzschildParams:
    M: float

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("M must be positive")

    @property
    def c(self) -> float:
        return 2.0 * self.M


@dataclass(frozen=True)
class ConservedCharges:
    c1: float
    c2: float
    kappa: int = 1


@dataclass(frozen=True)
class OrbitState:
    s: float
    t: float
    r: float
    phi: float
    r_dot: float


@dataclass
class Trajectory:
    """Sampled solution of the equatorial geodesic system."""

    s: np.ndarray
    t: np.ndarray
    r: np.ndarray
    phi: np.ndarray
    r_dot: np.ndarray
    constraint_residual: np.ndarray
    events: dict = field(default_factory=dict)
    terminated_by: Optional[str] = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("s,t,r,phi,r_dot,constraint_residual\n")
        for row in zip(self.s, self.t, self.r, self.phi, self.r_dot, self.constraint_residual):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()


def schwarzschild_chart(p: SchwarzschildParams, region: str = "exterior") -> MetricChart:
    """Schwarzschild metric in ``(t, r, theta, phi)`` with analytic first derivatives.

    ``region`` selects the connected domain: ``"exterior"`` (``r > 2M``)
    or ``"interior"`` (``0 < r < 2M``).
    """
    if region not in ("exterior", "interior"):
        raise ValueError(f"unknown region {region!r}")
    M = p.M
    outside = region == "exterior"

    def comps(x):
        _, r, th, _ = x
        f = 1.0 - 2.0 * M / r
        s = np.sin(th)
        return np.diag([-f, 1.0 / f, r * r, r * r * s * s])

    def derivs(x):
        _, r, th, _ = x
        f = 1.0 - 2.0 * M / r
        fp = 2.0 * M / r**2
        s, c = np.sin(th), np.cos(th)
        d = np.zeros((4, 4, 4))
        d[1] = np.diag([-fp, -fp / f**2, 2.0 * r, 2.0 * r * s * s])
        d[2, 3, 3] = 2.0 * r * r * s * c
        return d

    def domain(x):
        r, th = x[1], x[2]
        in_r = r > 2.0 * M if outside else 0 < r < 2.0 * M
        return in_r and 0 < th < np.pi

    return MetricChart(comps, 4, derivs, domain=domain, scale=M, name=f"schwarzschild-{region}")


def constraint_residual(p: SchwarzschildParams, q: ConservedCharges, r, r_dot):
    """Residual of ``(r')^2 + (1 - 2M/r)(c2^2/r^2 + kappa) - c1^2``."""
    r = np.asarray(r, dtype=float)
    return np.asarray(r_dot) ** 2 + (1.0 - 2.0 * p.M / r) * (q.c2**2 / r**2 + q.kappa) - q.c1**2


def _rhs(p: SchwarzschildParams, q: ConservedCharges):
    M, c1, c2, k = p.M, q.c1, q.c2, q.kappa

    def f(s, y):
        _, r, _, rd = y
        return [
            c1 / (1.0 - 2.0 * M / r),
            rd,
            c2 / r**2,
            -k * M / r**2 + c2**2 / r**3 - 3.0 * M * c2**2 / r**4,
        ]

    return f


def integrate_orbit(
    p: SchwarzschildParams,
    charges: ConservedCharges,
    init: OrbitState,
    s_end: float,
    rtol: float = 1e-12,
    atol: float = 1e-12,
    max_step: float = np.inf,
    n_samples: Optional[int] = None,
    r_min_factor: float = 1e-6,
    horizon_guard: float = 1e-8,
) -> Trajectory:
    """Integrate an equatorial geodesic from ``init.s`` to ``s_end``.

    Crossing ``r = 2M`` is recorded in ``events['horizon']`` and does not
    stop the integration. The coordinate time ``t`` diverges there, so once
    ``|r - 2M| < horizon_guard * 2M`` only ``(r, phi, r')`` are propagated
    and later samples carry ``t = nan``. Reaching ``r <= r_min_factor * M``
    raises :class:`SingularityReached`, with the partial trajectory
    attached as ``err.trajectory``.
    """
    res0 = float(constraint_residual(p, charges, init.r, init.r_dot))
    if abs(res0) > 1e-10 * max(1.0, charges.c1**2):
        raise InconsistentConstraint(f"initial constraint residual {res0:.3e}")
    c = p.c
    r_min = r_min_factor * p.M
    full = _rhs(p, charges)

    def reduced(s, y):
        d = full(s, y)
        d[0] = 0.0
        return d

    def guard(s, y):
        return abs(y[1] - c) - horizon_guard * c

    guard.terminal = True
    guard.direction = -1

    def horizon(s, y):
        return y[1] - c

    def singular(s, y):
        return y[1] - r_min

    singular.terminal = True
    t_eval = np.linspace(init.s, s_end, n_samples) if n_samples else None
    kw = dict(method="DOP853", rtol=rtol, atol=atol, max_step=max_step)
    y0 = [init.t, init.r, init.phi, init.r_dot]
    near = abs(init.r - c) <= horizon_guard * c
    segments, crossings, hits = [], [], []
    sol = None
    if not near:
        sol = solve_ivp(full, (init.s, s_end), y0, t_eval=t_eval, events=(guard, singular), **kw)
        segments.append((sol.t, sol.y))
        hits = sol.t_events[1].tolist()
        near = bool(sol.t_events[0].size)
        if near:
            y0 = sol.y_events[0][0].copy()
    if near and not hits:
        s0 = sol.t_events[0][0] if sol is not None else init.s
        y0[0] = 0.0
        te = None if t_eval is None else t_eval[t_eval > s0]
        sol2 = solve_ivp(reduced, (s0, s_end), y0, t_eval=te, events=(horizon, singular), **kw)
        y2 = sol2.y.copy()
        y2[0] = np.nan
        segments.append((sol2.t, y2))
        crossings = sol2.t_events[0].tolist()
        hits = sol2.t_events[1].tolist()
    s_all = np.concatenate([seg[0] for seg in segments])
    t, r, ph, rd = np.concatenate([seg[1] for seg in segments], axis=1)
    traj = Trajectory(
        s=s_all,
        t=t,
        r=r,
        phi=ph,
        r_dot=rd,
        constraint_residual=constraint_residual(p, charges, r, rd),
        events={"horizon": crossings, "singularity": hits},
    )
    if hits:
        traj.terminated_by = "singularity"
        err = SingularityReached(f"r reached {r_min:.3e} at s={hits[0]:.17g}")
        err.trajectory = traj
        raise err
    return traj


# --- bound orbits -----------------------------------------------------------

def _turning_roots(p: SchwarzschildParams, semilatus: float, e: float):
    if not (0.0 <= e < 1.0) or semilatus <= 0:
        raise UnboundOrbit("need 0 <= e < 1 and a positive semi-latus rectum")
    u1 = (1.0 + e) / semilatus
    u2 = (1.0 - e) / semilatus
    u3 = 1.0 / (2.0 * p.M) - u1 - u2
    if u3 <= u1:
        raise UnboundOrbit("no stable bound orbit for these parameters")
    return u1, u2, u3


def orbit_charges(p: SchwarzschildParams, semilatus: float, e: float) -> ConservedCharges:
    """Charges of the timelike orbit with turning points ``semilatus / (1 +- e)``.

    The Binet form ``(du/dphi)^2 = 2M (u - u1)(u - u2)(u - u3)`` fixes
    ``1/c2^2 = u1 u2 + u3 (u1 + u2)``; ``c1`` then follows from ``r' = 0``
    at perihelion.
    """
    u1, u2, u3 = _turning_roots(p, semilatus, e)
    c2 = 1.0 / np.sqrt(u1 * u2 + u3 * (u1 + u2))
    c1 = np.sqrt((1.0 - 2.0 * p.M * u1) * (1.0 + c2**2 * u1**2))
    return ConservedCharges(float(c1), float(c2), 1)


def perihelion_precession(
    p: SchwarzschildParams, semilatus: float, e: float, newtonian: bool = False, rtol: float = 1e-12
) -> float:
    """Advance of the perihelion per radial period, in radians.

    Integrates ``u'' + u = M/c2^2 + 3 M u^2`` (``u = 1/r``, derivative in
    ``phi``) from one perihelion to the next. With ``newtonian=True`` the
    relativistic ``3 M u^2`` term is dropped and ``c2^2 = M p``, which
    yields closed Kepler ellipses.
    """
    M = p.M
    if newtonian:
        if not (0.0 <= e < 1.0) or semilatus <= 0:
            raise UnboundOrbit("need 0 <= e < 1 and a positive semi-latus rectum")
        inv_c2sq = 1.0 / (M * semilatus)
        rel = 0.0
        u1 = (1.0 + e) / semilatus
    else:
        u1, u2, u3 = _turning_roots(p, semilatus, e)
        inv_c2sq = u1 * u2 + u3 * (u1 + u2)
        rel = 3.0 * M

    def rhs(phi, y):
        return [y[1], -y[0] + M * inv_c2sq + rel * y[0] ** 2]

    def peri(phi, y):
        return y[1] if phi > np.pi else -1.0

    peri.terminal = True
    peri.direction = -1
    sol = solve_ivp(
        rhs, (0.0, 4.0 * np.pi), [u1, 0.0], method="DOP853", rtol=rtol, atol=1e-14 * u1, events=peri
    )
    if not sol.t_events[0].size:
        raise UnboundOrbit("no return to perihelion")
    return float(sol.t_events[0][0] - 2.0 * np.pi)


def critical_impact_parameter(p: SchwarzschildParams) -> float:
    """Capture threshold ``3 sqrt(3) M``: the photon sphere ``r = 3M`` is the
    maximum of ``(1 - 2M/r)/r^2``, whose value is ``1/(27 M^2)``."""
    return 3.0 * np.sqrt(3.0) * p.M


def deflection_angle(p: Optional[SchwarzschildParams], b: float, rtol: float = 1e-13) -> float:
    """Total bending angle of a light ray with impact parameter ``b``.

    Null geodesics normalised with ``c1 = 1`` have ``c2 = b``; the orbit
    obeys ``u'' + u = 3 M u^2`` and is integrated from ``u = 0`` back to
    ``u = 0``. ``p=None`` means flat space.
    """
    M = 0.0 if p is None else p.M
    if M == 0.0:
        return 0.0
    if b <= critical_impact_parameter(p):
        raise PhotonCaptured(f"b={b} <= 3*sqrt(3)*M; the photon is captured")

    def rhs(phi, y):
        return [y[1], -y[0] + 3.0 * M * y[0] ** 2]

    def back_to_infinity(phi, y):
        return y[0] if phi > 0.5 * np.pi else 1.0

    back_to_infinity.terminal = True
    back_to_infinity.direction = -1
    sol = solve_ivp(
        rhs,
        (0.0, 4.0 * np.pi),
        [0.0, 1.0 / b],
        method="DOP853",
        rtol=rtol,
        atol=1e-6 * rtol / b,
        events=back_to_infinity,
    )
    if not sol.t_events[0].size:
        raise PhotonCaptured("ray did not escape")
    return float(sol.t_events[0][0] - np.pi)


# --- interior ---------------------------------------------------------------

class NoSingularity(SingularityReached):
    pass


@dataclass
class InteriorResult:
    tau: float
    s: np.ndarray
    r: np.ndarray
    r_dot: np.ndarray
    bound_residual: float
    strictly_decreasing: bool


def interior_proper_time(
    p: SchwarzschildParams,
    r0: float,
    c1: float = 0.0,
    c2: float = 0.0,
    rtol: float = 1e-12,
    r_min_factor: float = 1e-6,
    r_switch_factor: float = 1e-2,
) -> InteriorResult:
    """Proper time from ``r0 < 2M`` to the singularity along a timelike geodesic.

    Inside the horizon ``F(r) = c1^2 + (2M/r - 1)(1 + c2^2/r^2)`` is
    positive and ``r' = -sqrt(F)``, so ``r`` decreases strictly. The
    second-order radial equation is integrated in proper time down to
    ``r_switch``; below it the angular-momentum barrier makes the
    equation stiff, and the remaining time ``int dr / sqrt(F)`` down to
    ``r_min = r_min_factor * M`` is evaluated by quadrature on a
    geometric grid of radii.

    ``bound_residual`` is the largest value of
    ``dR/ds + sqrt(1/R - 1) / c`` with ``R = r/c``, ``c = 2M``; it is
    non-positive up to round-off on every geodesic.
    """
    M = p.M
    c = 2.0 * M
    if not (0.0 < r0 < c):
        raise NotInterior(f"r0={r0} is not inside the horizon r={c}")
    q = ConservedCharges(c1, c2, 1)

    def F(r):
        return c1**2 + (c / r - 1.0) * (1.0 + c2**2 / r**2)

    r_min = r_min_factor * M
    r_switch = max(min(r_switch_factor * M, 0.5 * r0), r_min)

    def rhs(s, y):
        r, rd = y
        return [rd, -M / r**2 + c2**2 / r**3 - 3.0 * M * c2**2 / r**4]

    def hit(s, y):
        return y[0] - r_switch

    hit.terminal = True
    sol = solve_ivp(
        rhs, (0.0, 10.0 * np.pi * M), [r0, -np.sqrt(F(r0))],
        method="DOP853", rtol=rtol, atol=1e-14 * M, events=hit,
    )
    if not sol.t_events[0].size:
        raise NoSingularity("singularity not reached")
    s1 = float(sol.t_events[0][0])
    r_a, rd_a = sol.y
    drift = np.max(np.abs(constraint_residual(p, q, r_a, rd_a)) / (1.0 + rd_a**2))
    if drift > 1e-6:
        raise InconsistentConstraint(f"interior drift {drift:.3e}")

    radii = np.geomspace(r_switch, r_min, 60)
    steps = [
        quad(lambda r: 1.0 / np.sqrt(F(r)), b, a, epsabs=0.0, epsrel=1e-13)[0]
        for a, b in zip(radii[:-1], radii[1:])
    ]
    s_b = s1 + np.concatenate([[0.0], np.cumsum(steps)])
    rd_b = -np.sqrt(F(radii))

    s = np.concatenate([sol.t[:-1], s_b])
    r = np.concatenate([r_a[:-1], radii])
    rd = np.concatenate([rd_a[:-1], rd_b])
    R = r / c
    bound = rd / c + np.sqrt(np.clip(1.0 / R - 1.0, 0.0, None)) / c
    return InteriorResult(
        tau=float(s_b[-1]),
        s=s,
        r=r,
        r_dot=rd,
        bound_residual=float(np.max(bound)),
        strictly_decreasing=bool(np.all(np.diff(r) < 0)),
    )


def maximal_fall_time(p: SchwarzschildParams) -> float:
    """Quadrature of ``int_0^{2M} dr / sqrt(2M/r - 1)``, the longest interior proper time."""
    M = p.M
    # r = M (1 - cos v) maps the integral to int_0^pi M (1 - cos v) dv
    val, _ = quad(lambda v: M * (1.0 - np.cos(v)), 0.0, np.pi, epsabs=1e-14)
    return float(val)


# --- expansions and focusing ------------------------------------------------

def eddington_finkelstein_chart(M: float) -> MetricChart:
    """Ingoing chart ``-(1 - 2M/r) dv^2 + 2 dv dr + r^2 dOmega^2``, regular at ``r = 2M``."""

    def comps(x):
        _, r, th, _ = x
        g = np.zeros((4, 4))
        g[0, 0] = -(1.0 - 2.0 * M / r)
        g[0, 1] = g[1, 0] = 1.0
        g[2, 2] = r * r
        g[3, 3] = (r * np.sin(th)) ** 2
        return g

    return MetricChart(comps, 4, domain=lambda x: x[1] > 0 and 0 < x[2] < np.pi, scale=max(M, 1.0), name="ingoing-EF")


def _sphere_area(chart: MetricChart, v: float, r: float, n_theta: int = 24, n_phi: int = 8) -> float:
    x, w = np.polynomial.legendre.leggauss(n_theta)
    th = np.arccos(x)
    total = 0.0
    for thk, wk in zip(th, w):
        for ph in np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False):
            g = chart.metric(np.array([v, r, thk, ph]))
            h = g[2:, 2:]
            total += wk * np.sqrt(np.linalg.det(h)) / np.sin(thk) * (2.0 * np.pi / n_phi)
    return total


def null_expansions_sphere(r: float, p: Optional[SchwarzschildParams] = None, delta: Optional[float] = None):
    """Expansions ``(theta_in, theta_out)`` of the coordinate sphere of radius ``r``.

    Both future null normals are written in ingoing Eddington-Finkelstein
    coordinates, ``k_in = -d_r`` and ``k_out = 2 d_v + (1 - 2M/r) d_r``,
    normalised by ``g(k_in, k_out) = -2``. The sphere is pushed a
    parameter distance ``+-delta`` along each field, the area of the image
    is obtained by quadrature, and the logarithmic rate of change of the
    area is returned. ``p=None`` means flat space.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    M = 0.0 if p is None else p.M
    chart = eddington_finkelstein_chart(M)
    delta = 1e-4 * r if delta is None else delta

    def kr_in(lam, y):
        return [-1.0]

    def kr_out(lam, y):
        return [1.0 - 2.0 * M / y[0]]

    a0 = _sphere_area(chart, 0.0, r)
    out = []
    for field_r in (kr_in, kr_out):
        areas = []
        for sgn in (1.0, -1.0):
            sol = solve_ivp(field_r, (0.0, sgn * delta), [r], rtol=1e-13, atol=1e-15 * r)
            areas.append(_sphere_area(chart, 0.0, float(sol.y[0, -1])))
        out.append((areas[0] - areas[1]) / (2.0 * delta * a0))
    return float(out[0]), float(out[1])


def raychaudhuri_blowup(theta0: float, s0: float = 0.0, threshold: float = 1e6, rtol: float = 1e-12) -> float:
    """Parameter at which ``dTheta/ds = -Theta^2/3`` reaches ``|Theta| = threshold``.

    The exact solution ``Theta(s) = 3 Theta0 / (3 + Theta0 (s - s0))``
    diverges at ``s0 + 3/|Theta0|``, which bounds the returned value.
    """
    if not theta0 < 0:
        raise NonNegativeTheta("focusing needs a negative initial expansion")

    def rhs(s, y):
        return [-y[0] ** 2 / 3.0]

    def big(s, y):
        return abs(y[0]) - threshold

    big.terminal = True
    horizon = 3.0 / abs(theta0)
    sol = solve_ivp(rhs, (s0, s0 + 2.0 * horizon), [theta0], method="DOP853", rtol=rtol, atol=1e-12, events=big)
    return float(sol.t_events[0][0])
