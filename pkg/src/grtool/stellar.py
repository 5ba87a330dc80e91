"""Static spherically symmetric stars.

Interior metric ``-e^{2 phi} dt^2 + dr^2/(1 - 2m/r) + r^2 dOmega^2`` with

    dp/dr   = -(rho + p)(m + 4 pi r^3 p) / (r (r - 2m))
    dm/dr   = 4 pi rho r^2
    dphi/dr = (m + 4 pi r^3 p) / (r (r - 2m))

The pressure decreases outward and the surface ``r0`` is where ``p = 0``;
outside, the metric is Schwarzschild with mass ``M = m(r0)``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import BeyondBuchdahl, HorizonFormation, InconsistentMass, NoSurface


@dataclass(frozen=True)
class EquationOfState:
    """Either constant density ``rho0`` or a tabulated monotone ``p -> rho`` map."""

    rho0: Optional[float] = None
    p_table: Optional[tuple] = None
    rho_table: Optional[tuple] = None

    @classmethod
    def incompressible(cls, rho0: float) -> "EquationOfState":
        if rho0 <= 0:
            raise ValueError("rho0 must be positive")
        return cls(rho0=float(rho0))

    @classmethod
    def tabulated(cls, p: Sequence[float], rho: Sequence[float]) -> "EquationOfState":
        p = np.asarray(p, dtype=float)
        rho = np.asarray(rho, dtype=float)
        if np.any(np.diff(p) <= 0) or np.any(rho < 0) or np.any(np.diff(rho) < 0):
            raise ValueError("table must have p strictly increasing and rho >= 0 non-decreasing")
        return cls(p_table=tuple(p), rho_table=tuple(rho))

    @property
    def mode(self) -> str:
        return "incompressible" if self.rho0 is not None else "tabulated"

    def density(self, p: float) -> float:
        if self.rho0 is not None:
            return self.rho0
        return float(np.interp(p, self.p_table, self.rho_table))


@dataclass
class StellarProfile:
    r: np.ndarray
    p: np.ndarray
    m: np.ndarray
    phi: np.ndarray
    r0: float
    M: float
    p_center: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("r,p,m,phi\n")
        for row in zip(self.r, self.p, self.m, self.phi):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()

    def summary(self) -> dict:
        margin, _ = buchdahl_margin(self.M, self.r0)
        return {"r0": self.r0, "M": self.M, "p_center": self.p_center, "buchdahl_margin": margin}


def integrate_tov(
    eos: EquationOfState,
    p_center: float,
    rtol: float = 1e-12,
    atol: float = 0.0,
    r_max: Optional[float] = None,
    n_samples: Optional[int] = None,
) -> StellarProfile:
    """Integrate the structure equations outward from a regular centre.

    The first step uses the Taylor expansion
    ``m = 4/3 pi rho_c r^3``,
    ``p = p_c - 2/3 pi (rho_c + p_c)(rho_c + 3 p_c) r^2``,
    ``phi = 2/3 pi (rho_c + 3 p_c) r^2``
    at a radius ``1e-6`` times the smaller of ``1/sqrt(max(rho_c, p_c))``
    and the quadratic estimate of the surface. The surface is located as the zero of
    ``p``; ``phi`` is then shifted so that ``e^{2 phi(r0)} = 1 - 2M/r0``.
    """
    if not p_center > 0:
        raise ValueError("p_center must be positive")
    rho_c = eos.density(p_center)
    r_max = 1e3 / np.sqrt(max(rho_c, 1e-300)) if r_max is None else r_max
    # well inside both the density scale and the Taylor estimate of the surface
    r_s = 1e-6 * min(
        1.0 / np.sqrt(max(rho_c, p_center)),
        np.sqrt(p_center / ((rho_c + p_center) * (rho_c + 3.0 * p_center))),
    )
    p_s = p_center - 2.0 / 3.0 * np.pi * (rho_c + p_center) * (rho_c + 3.0 * p_center) * r_s**2
    m_s = 4.0 / 3.0 * np.pi * rho_c * r_s**3
    phi_s = 2.0 / 3.0 * np.pi * (rho_c + 3.0 * p_center) * r_s**2

    def rhs(r, y):
        p, m, _ = y
        rho = eos.density(max(p, 0.0))
        num = (m + 4.0 * np.pi * r**3 * p) / (r * (r - 2.0 * m))
        return [-(rho + p) * num, 4.0 * np.pi * rho * r * r, num]

    def surface(r, y):
        return y[0]

    surface.terminal = True
    surface.direction = -1

    def horizon(r, y):
        return r - 2.0 * y[1]

    horizon.terminal = True
    sol = solve_ivp(
        rhs, (r_s, r_max), [p_s, m_s, phi_s], method="DOP853", rtol=rtol,
        atol=[atol or 1e-300, 1e-300, 1e-300], events=(surface, horizon), dense_output=True,
    )
    if sol.t_events[1].size:
        raise HorizonFormation(f"m(r) reached r/2 at r={sol.t_events[1][0]:.17g}")
    if not sol.t_events[0].size:
        raise NoSurface(f"pressure did not vanish before r={r_max}")
    r0 = float(sol.t_events[0][0])
    M = float(sol.y_events[0][0][1])
    if n_samples:
        r = np.concatenate([[0.0], np.linspace(r_s, r0, n_samples - 1)])
        y = sol.sol(r[1:])
        p = np.concatenate([[p_center], y[0]])
        m = np.concatenate([[0.0], y[1]])
        phi = np.concatenate([[0.0], y[2]])
    else:
        keep = sol.t < r0
        r = np.concatenate([[0.0], sol.t[keep], [r0]])
        p = np.concatenate([[p_center], sol.y[0, keep], [0.0]])
        m = np.concatenate([[0.0], sol.y[1, keep], [M]])
        phi = np.concatenate([[0.0], sol.y[2, keep], [sol.y_events[0][0][2]]])
    p[-1] = 0.0
    shift = 0.5 * np.log(1.0 - 2.0 * M / r0) - phi[-1]
    return StellarProfile(r, p, m, phi + shift, r0, M, float(p_center))


def _check_incompressible(rho0: float, r0: float, M: float):
    if abs(M - 4.0 / 3.0 * np.pi * rho0 * r0**3) > 1e-10 * max(M, 1e-300):
        raise InconsistentMass("M must equal 4/3 pi rho0 r0^3")
    if r0 <= 2.0 * M:
        raise BeyondBuchdahl("r0 must exceed 2M")
    if 3.0 * np.sqrt(1.0 - 2.0 * M / r0) - 1.0 <= 0:
        raise BeyondBuchdahl("central pressure diverges for r0 <= 9M/4")


def incompressible_pressure(rho0: float, r0: float, M: float, r):
    """Closed-form pressure of a constant-density star, with ``c = 2M``::

        p(r) = rho0 (sqrt(1 - c r^2/r0^3) - sqrt(1 - c/r0))
                    / (3 sqrt(1 - c/r0) - sqrt(1 - c r^2/r0^3))
    """
    _check_incompressible(rho0, r0, M)
    c = 2.0 * M
    r = np.asarray(r, dtype=float)
    inner = np.sqrt(1.0 - c * r**2 / r0**3)
    edge = np.sqrt(1.0 - c / r0)
    return rho0 * (inner - edge) / (3.0 * edge - inner)


def incompressible_star(r0: float, M: float) -> tuple[EquationOfState, float]:
    """Equation of state and exact central pressure of the star with radius ``r0`` and mass ``M``."""
    rho0 = 3.0 * M / (4.0 * np.pi * r0**3)
    return EquationOfState.incompressible(rho0), float(incompressible_pressure(rho0, r0, M, 0.0))


def shoot_central_pressure(eos: EquationOfState, r0: float, bracket=(1e-8, 1e12)) -> float:
    """Central pressure whose integrated surface radius equals ``r0``.

    The radius grows monotonically with ``p_c``; Brent's method runs on
    ``log p_c`` inside ``bracket`` (in units of the central density).
    """
    rho = eos.density(0.0) if eos.rho0 is None else eos.rho0

    def miss(lp):
        return integrate_tov(eos, rho * np.exp(lp)).r0 - r0

    lo, hi = np.log(bracket[0]), np.log(bracket[1])
    return float(rho * np.exp(brentq(miss, lo, hi, xtol=1e-14, rtol=1e-14)))


def buchdahl_margin(M: float, r0: float) -> tuple[float, bool]:
    """``(r0 - 9M/4, r0 > 9M/4)``."""
    margin = r0 - 2.25 * M
    return float(margin), bool(margin > 0)


def profile_json(profile: StellarProfile) -> str:
    return json.dumps(profile.summary(), sort_keys=True)
