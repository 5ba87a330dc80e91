"""Homogeneous isotropic cosmologies in conformal time.

With ``g = b(s)^2 (-ds^2 + gbar)``, ``gbar`` of constant sectional
curvature ``K`` and dust of density ``rho = c_m / b^3``, the Einstein
equation reduces to

    b'' + K b - (2/3) Lambda b^3 = (4/3) pi c_m
    3 b'^2 / b + 3 K b - Lambda b^3 = 8 pi c_m

The cosmic time obeys ``dt/ds = b`` and ``a(t) = b(s(t))``. For ``K = 1``,
``Lambda = 0`` the solution is the cycloid ``a = alpha (1 - cos v)``,
``t = alpha (v - sin v)`` with ``alpha = (4/3) pi c_m``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import InconsistentInitialData, NonPositiveScale, OutOfInterval, UnstudiedRegime
from .geometry import MetricChart


@dataclass(frozen=True)
class FLRWModel:
    K: float
    Lambda: float
    c_m: float

    def __post_init__(self):
        if not self.c_m > 0:
            raise ValueError("c_m must be positive")

    @property
    def alpha(self) -> float:
        return 4.0 / 3.0 * np.pi * self.c_m


def eqb2_residual(m: FLRWModel, b, b_dot):
    """First integral multiplied through by ``b``:
    ``3 b'^2 + 3 K b^2 - Lambda b^4 - 8 pi c_m b``.

    The product form stays finite as ``b -> 0``.
    """
    b = np.asarray(b, dtype=float)
    return 3.0 * np.asarray(b_dot) ** 2 + 3.0 * m.K * b**2 - m.Lambda * b**4 - 8.0 * np.pi * m.c_m * b


def expanding_rate(m: FLRWModel, b0: float) -> float:
    """``b'`` on the expanding branch fixed by the first integral."""
    q = (8.0 * np.pi * m.c_m * b0 - 3.0 * m.K * b0**2 + m.Lambda * b0**4) / 3.0
    if q < 0:
        raise InconsistentInitialData(f"no real b' at b={b0}")
    return float(np.sqrt(q))


@dataclass
class ScaleTrajectory:
    s: np.ndarray
    b: np.ndarray
    b_dot: np.ndarray
    t: np.ndarray
    eqb2_residual: np.ndarray
    model: FLRWModel
    event: Optional[dict] = None
    dense: object = field(default=None, repr=False)

    @property
    def a(self) -> np.ndarray:
        return self.b

    def density(self) -> np.ndarray:
        return density(self.model, self.b)

    def state_at_time(self, t: float):
        """``(s, b, b')`` at cosmic time ``t`` via the dense interpolant."""
        lo, hi = self.t[0], self.t[-1]
        if not min(lo, hi) <= t <= max(lo, hi):
            raise OutOfInterval(f"t={t} outside [{lo}, {hi}]")
        s = brentq(lambda x: self.dense(x)[2] - t, self.s[0], self.s[-1], xtol=1e-15, rtol=1e-15)
        b, bd, _ = self.dense(s)
        return s, b, bd

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("s,b,eqb2_residual,t,a,rho\n")
        rho = self.density()
        for row in zip(self.s, self.b, self.eqb2_residual, self.t, self.b, rho):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()


def solve_conformal_scale(
    m: FLRWModel,
    b0: float,
    b0_dot: Optional[float],
    s_span: tuple[float, float],
    t0: float = 0.0,
    rtol: float = 1e-12,
    atol: float = 1e-14,
    b_max: float = np.inf,
    n_samples: Optional[int] = None,
) -> ScaleTrajectory:
    """Integrate the second-order equation for ``b`` with ``t`` carried along.

    ``b0_dot=None`` takes the expanding root of the first integral;
    otherwise the supplied pair must satisfy it to ``1e-10`` relative.
    The integration stops at the first extremum of ``b`` in the direction
    of integration that is a minimum (a Big Crunch forward in ``s``, a
    Big Bang backward, when ``b`` there is below ``1e-6`` of the scale) or
    when ``b`` exceeds ``b_max``; ``event`` records which happened and
    where.
    """
    if b0 <= 0:
        raise NonPositiveScale(f"b0={b0} must be positive")
    if b0_dot is None:
        b0_dot = expanding_rate(m, b0)
    scale = max(8.0 * np.pi * m.c_m * b0, 3.0 * b0_dot**2, 1e-300)
    if abs(eqb2_residual(m, b0, b0_dot)) > 1e-10 * scale:
        raise InconsistentInitialData("initial data violate the first integral")
    b_ref = 2.0 * m.alpha if m.K > 0 else max(b0, m.alpha)
    tiny = 1e-9 * b_ref

    def rhs(s, y):
        b, bd, _ = y
        return [bd, 4.0 / 3.0 * np.pi * m.c_m - m.K * b + 2.0 / 3.0 * m.Lambda * b**3, b]

    forward = s_span[1] >= s_span[0]

    def extremum(s, y):
        # starting from a bang, the first minimum of b is the collapse
        return y[1]

    extremum.terminal = True
    extremum.direction = 1 if forward else -1

    def negative(s, y):
        return y[0] + tiny

    negative.terminal = True

    def runaway(s, y):
        return y[0] - b_max

    runaway.terminal = True
    t_eval = np.linspace(*s_span, n_samples) if n_samples else None
    sol = solve_ivp(
        rhs, s_span, [b0, b0_dot, t0], method="DOP853", rtol=rtol, atol=atol,
        events=(extremum, negative, runaway), dense_output=True, t_eval=t_eval,
    )
    b, bd, t = sol.y
    event = None
    if sol.t_events[0].size:
        y_ev = sol.y_events[0][0]
        kind = ("crunch" if forward else "bang") if y_ev[0] < 1e-6 * b_ref else "minimum"
        event = {"kind": kind, "s": float(sol.t_events[0][0]), "t": float(y_ev[2]), "b": float(y_ev[0])}
    elif sol.t_events[1].size:
        raise NonPositiveScale(f"b became negative at s={sol.t_events[1][0]:.17g}")
    elif sol.t_events[2].size:
        y_ev = sol.y_events[2][0]
        event = {"kind": "runaway", "s": float(sol.t_events[2][0]), "t": float(y_ev[2]), "b": float(y_ev[0])}
    return ScaleTrajectory(sol.t, b, bd, t, eqb2_residual(m, b, bd), m, event, sol.sol)


def _v_minus_sin(v: float) -> float:
    if v < 1e-2:
        v2 = v * v
        return v * v2 / 6.0 * (1.0 - v2 / 20.0 * (1.0 - v2 / 42.0 * (1.0 - v2 / 72.0)))
    return v - np.sin(v)


def cycloid_scale_factor(alpha: float, t: float) -> float:
    """Scale factor of the closed dust universe at cosmic time ``t``.

    Inverts ``v - sin v = t/alpha`` on ``(0, 2 pi)`` by Brent's method and
    returns ``alpha (1 - cos v)``.
    """
    if alpha <= 0:
        raise OutOfInterval("alpha must be positive")
    tau = t / alpha
    if not 0.0 < tau < 2.0 * np.pi:
        raise OutOfInterval(f"t={t} outside (0, {2 * np.pi * alpha})")
    v = brentq(lambda x: _v_minus_sin(x) - tau, 0.0, 2.0 * np.pi, xtol=1e-300, rtol=1e-15, maxiter=500)
    return float(2.0 * alpha * np.sin(0.5 * v) ** 2)


def density(m: FLRWModel, a):
    """Dust density ``c_m / a^3``."""
    return m.c_m / np.asarray(a, dtype=float) ** 3


class Fate(str, Enum):
    BANG_AND_CRUNCH = "BangAndCrunch"
    BANG_ONLY = "BangOnly"


def classify_fate(K: float, Lambda: float, c_m: float, s_max: float = 1e6) -> Fate:
    """Big-Bang/Big-Crunch classification by numeric continuation.

    A solution is launched on the expanding branch near ``b = 0`` and
    followed forward until it collapses or grows past ``1e4`` times the
    matter scale. Settled regimes are ``Lambda = 0`` with any ``K`` and
    ``Lambda > 0`` with ``K >= 0``.
    """
    if c_m <= 0 or Lambda < 0 or (Lambda > 0 and K < 0):
        raise UnstudiedRegime(f"K={K}, Lambda={Lambda}, c_m={c_m} is not a settled regime")
    m = FLRWModel(K, Lambda, c_m)
    b0 = 1e-6 * m.alpha
    back = solve_conformal_scale(m, b0, None, (0.0, -s_max), b_max=1e4 * m.alpha)
    if back.event is None or back.event["kind"] != "bang":
        raise UnstudiedRegime("no Big-Bang found in the past")
    fwd = solve_conformal_scale(m, b0, None, (0.0, s_max), b_max=1e4 * m.alpha)
    if fwd.event is not None and fwd.event["kind"] == "crunch":
        return Fate.BANG_AND_CRUNCH
    if fwd.event is not None and fwd.event["kind"] == "runaway":
        return Fate.BANG_ONLY
    raise UnstudiedRegime("continuation inconclusive")


def flrw_chart(traj: ScaleTrajectory) -> MetricChart:
    """Chart ``-dt^2 + a(t)^2 delta`` in Cartesian coordinates for a flat model.

    ``a`` and ``da/dt = b'/b`` come from the dense ODE interpolant, so the
    metric derivatives carry only integration error.
    """
    if traj.model.K != 0:
        raise ValueError("Cartesian chart requires K = 0")

    def comps(x):
        _, b, _ = traj.state_at_time(x[0])
        return np.diag([-1.0, b * b, b * b, b * b])

    def derivs(x):
        _, b, bd = traj.state_at_time(x[0])
        d = np.zeros((4, 4, 4))
        # d(a^2)/dt = 2 a (b'/b) = 2 b'
        d[0, 1, 1] = d[0, 2, 2] = d[0, 3, 3] = 2.0 * bd
        return d

    t_mid = 0.5 * (traj.t[0] + traj.t[-1])
    return MetricChart(comps, 4, derivs, scale=abs(t_mid), name="flrw")
