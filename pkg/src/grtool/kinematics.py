"""Special-relativistic kinematics in units where ``c = 1``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import NonTimelikeSegment, SuperluminalSpeed

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


def _check_speed(v: float) -> float:
    v = abs(float(v))
    if v >= 1.0:
        raise SuperluminalSpeed(f"|v|={v} must be below the speed of light")
    return v


def lorentz_factors(v: float) -> tuple[float, float]:
    """Time-dilation and length-contraction factors ``(sqrt(1 - v^2), 1/sqrt(1 - v^2))``."""
    v = _check_speed(v)
    d = np.sqrt(1.0 - v * v)
    return float(d), float(1.0 / d)


def relativistic_dynamics(m0: float, v: float) -> tuple[float, float, float]:
    """Relativistic mass, momentum and energy of a rest mass ``m0`` moving at speed ``v``."""
    if m0 < 0:
        raise ValueError("rest mass must be non-negative")
    v = _check_speed(v)
    gamma = 1.0 / np.sqrt(1.0 - v * v)
    mass = m0 * gamma
    return float(mass), float(mass * v), float(mass)


@dataclass(frozen=True)
class Worldline:
    """Curve ``t -> c(t)`` in Minkowski coordinates ``(t, x, y, z)``.

    ``velocity`` returns ``c'(t)``; when omitted it is approximated by
    central differences. ``breakpoints`` lists parameter values where the
    tangent jumps (for example the turnaround of a round trip).
    """

    position: Callable[[float], Sequence[float]]
    velocity: Optional[Callable[[float], Sequence[float]]] = None
    breakpoints: tuple = ()
    h: float = 1e-6

    def tangent(self, t: float) -> np.ndarray:
        if self.velocity is not None:
            return np.asarray(self.velocity(t), dtype=float)
        return (np.asarray(self.position(t + self.h)) - np.asarray(self.position(t - self.h))) / (2 * self.h)


def proper_time(w: Worldline, t0: float, t1: float, tol: float = 1e-12) -> float:
    """``int_{t0}^{t1} sqrt(-eta(c', c')) dt`` by adaptive Gauss-Kronrod quadrature.

    The tolerance is floored at ``1e-9`` when the tangent is a difference quotient.
    """

    def integrand(t):
        u = w.tangent(t)
        q = -float(u @ ETA @ u)
        if q < 0:
            raise NonTimelikeSegment(f"tangent at t={t} is spacelike")
        return np.sqrt(q)

    if w.velocity is None:
        # difference-quotient tangents carry ~1e-10 noise
        tol = max(tol, 1e-9)
    lo, hi = min(t0, t1), max(t0, t1)
    pts = [b for b in w.breakpoints if lo < b < hi]
    val, _ = quad(integrand, lo, hi, points=pts or None, epsabs=tol, epsrel=tol, limit=500)
    return float(val)


def inertial(v: float) -> Worldline:
    """Straight worldline through the origin with speed ``v`` along ``x``."""
    _check_speed(v)
    return Worldline(lambda t: (t, v * t, 0.0, 0.0), lambda t: (1.0, v, 0.0, 0.0))


def round_trip(v: float, duration: float) -> Worldline:
    """Out-and-back trip at speed ``v`` that returns to the origin at ``t = duration``."""
    _check_speed(v)
    half = 0.5 * duration

    def pos(t):
        return (t, v * t if t <= half else v * (duration - t), 0.0, 0.0)

    def vel(t):
        return (1.0, v if t < half else -v, 0.0, 0.0)

    return Worldline(pos, vel, breakpoints=(half,))
