"""Mass and momentum of asymptotically flat data, and Kerr black-hole structure.

Flux integrals are evaluated on coordinate spheres ``|x| = r`` of the
asymptotic Cartesian chart with Gauss-Legendre nodes in ``cos(theta)`` and
the trapezoid rule in ``phi``. Limits ``r -> infinity`` are obtained by
polynomial extrapolation in ``1/r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ChartDomain, CoordinateSingularity
from .geometry import MetricChart, orthonormal_frame

Array = np.ndarray


@dataclass(frozen=True)
class SpatialDataSet:
    """Initial data ``(g, h)`` on the asymptotic region ``|x| > r_min`` of R^3.

    ``extrinsic`` maps a point to the symmetric second fundamental form;
    ``None`` means time-symmetric data.
    """

    three_metric: MetricChart
    extrinsic: Optional[Callable[[Array], Array]] = None
    decay_order: dict = field(default_factory=lambda: {"metric": 1, "extrinsic": 2})
    r_min: float = 0.0
    name: str = ""


def _isotropic_metric(m: float) -> MetricChart:
    def comps(x):
        psi = 1.0 + 0.5 * m / np.linalg.norm(x)
        return psi**4 * np.eye(3)

    def derivs(x):
        r = np.linalg.norm(x)
        psi = 1.0 + 0.5 * m / r
        dpsi = -0.5 * m * x / r**3
        return 4.0 * psi**3 * dpsi[:, None, None] * np.eye(3)

    return MetricChart(comps, 3, derivs, scale=max(m, 1.0), lorentzian=False, name="isotropic")


def isotropic_schwarzschild(m: float) -> SpatialDataSet:
    """Time-symmetric slice ``(1 + m/(2|x|))^4 delta``."""
    return SpatialDataSet(_isotropic_metric(m), None, r_min=0.0, name=f"isotropic(m={m})")


def schwarzschild_slice(c: float) -> SpatialDataSet:
    """Slice ``dr^2/(1 - c/r) + r^2 dOmega^2`` written as ``delta + c/(r - c) n n``."""

    def comps(x):
        r2 = x @ x
        r = np.sqrt(r2)
        return np.eye(3) + c / (r2 * (r - c)) * np.outer(x, x)

    def derivs(x):
        r2 = x @ x
        r = np.sqrt(r2)
        B = c / (r2 * (r - c))
        dB = -c * (3.0 * r2 - 2.0 * c * r) / (r2 * (r - c)) ** 2
        eye = np.eye(3)
        d = dB * (x / r)[:, None, None] * np.outer(x, x)
        d += B * (eye[:, :, None] * x[None, None, :] + eye[:, None, :] * x[None, :, None])
        return d

    chart = MetricChart(comps, 3, derivs, scale=max(c, 1.0), lorentzian=False, name="schwarzschild-slice")
    return SpatialDataSet(chart, None, r_min=c, name=f"schwarzschild(c={c})")


def bowen_york(P: Sequence[float]) -> SpatialDataSet:
    """Flat metric with ``h_ij = 3/(2r^2) (P_i n_j + P_j n_i - (delta_ij - n_i n_j) P.n)``."""
    P = np.asarray(P, dtype=float)

    def h(x):
        r = np.linalg.norm(x)
        n = x / r
        pn = P @ n
        return 1.5 / r**2 * (np.outer(P, n) + np.outer(n, P) - (np.eye(3) - np.outer(n, n)) * pn)

    chart = MetricChart(lambda x: np.eye(3), 3, lambda x: np.zeros((3, 3, 3)), lorentzian=False, name="flat")
    return SpatialDataSet(chart, h, r_min=0.0, name="bowen-york")


def sphere_rule(r: float, order: tuple[int, int] = (32, 64)):
    """Nodes ``(n_points, 3)``, unit normals and Euclidean area weights on ``|x| = r``."""
    n_mu, n_phi = order
    mu, w_mu = np.polynomial.legendre.leggauss(n_mu)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    s = np.sqrt(1.0 - mu**2)
    nrm = np.stack(
        [np.outer(s, np.cos(phi)), np.outer(s, np.sin(phi)), np.outer(mu, np.ones(n_phi))], axis=-1
    ).reshape(-1, 3)
    w = np.outer(w_mu, np.full(n_phi, 2.0 * np.pi / n_phi)).ravel() * r * r
    return r * nrm, nrm, w


def _check_radii(d: SpatialDataSet, radii) -> Array:
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size == 0 or np.any(np.diff(radii) <= 0):
        raise ChartDomain("radii must be a non-empty increasing list")
    if radii[0] <= d.r_min:
        raise ChartDomain(f"radius {radii[0]} not in the asymptotic chart |x| > {d.r_min}")
    return radii


def extrapolate(radii, values, model: str = "richardson") -> float:
    """Limit ``r -> infinity`` of values sampled at ``radii``.

    ``"richardson"`` interpolates a polynomial of degree ``n - 1`` in ``1/r``
    through all samples; ``"linear"`` fits ``c0 + c1/r`` by least squares.
    """
    u = 1.0 / np.asarray(radii, dtype=float)
    v = np.asarray(values, dtype=float)
    if v.size == 1:
        return float(v[0])
    deg = v.size - 1 if model == "richardson" else 1
    if model not in ("richardson", "linear"):
        raise ValueError(f"unknown extrapolation model {model!r}")
    # polyfit returns the highest power first; the constant term is last
    return float(np.polyfit(u, v, deg)[-1])


@dataclass(frozen=True)
class FluxResult:
    radii: Array
    estimates: Array
    extrapolated: object

    def to_dict(self) -> dict:
        ex = self.extrapolated
        return {
            "estimates": [{"r": float(r), "value": _plain(v)} for r, v in zip(self.radii, self.estimates)],
            "extrapolated": _plain(ex),
        }


def _plain(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else [float(x) for x in v]


def adm_mass(
    d: SpatialDataSet, radii, quad_order: tuple[int, int] = (32, 64), model: str = "richardson"
) -> FluxResult:
    """``(1/16 pi) oint (d_i g_ij - d_j g_ii) nu^j dA`` on each sphere, then extrapolated."""
    radii = _check_radii(d, radii)
    out = []
    for r in radii:
        pts, nrm, w = sphere_rule(r, quad_order)
        total = 0.0
        for x, n, wk in zip(pts, nrm, w):
            dg = d.three_metric.metric_derivatives(x)
            # d_i g_ij - d_j g_ii, contracted with n^j
            div = np.einsum("iij->j", dg)
            grad_tr = np.einsum("jii->j", dg)
            total += wk * (div - grad_tr) @ n
        out.append(total / (16.0 * np.pi))
    est = np.array(out)
    return FluxResult(radii, est, extrapolate(radii, est, model))


def adm_momentum(
    d: SpatialDataSet, radii, quad_order: tuple[int, int] = (32, 64), model: str = "richardson"
) -> FluxResult:
    """``P_i = (1/16 pi) oint 2 (h_ik - delta_ik tr h) nu^k dA`` per sphere, then extrapolated."""
    radii = _check_radii(d, radii)
    if d.extrinsic is None:
        est = np.zeros((radii.size, 3))
        return FluxResult(radii, est, np.zeros(3))
    out = []
    for r in radii:
        pts, nrm, w = sphere_rule(r, quad_order)
        total = np.zeros(3)
        for x, n, wk in zip(pts, nrm, w):
            h = np.asarray(d.extrinsic(x), dtype=float)
            total += wk * 2.0 * (h - np.trace(h) * np.eye(3)) @ n
        out.append(total / (16.0 * np.pi))
    est = np.array(out)
    limit = np.array([extrapolate(radii, est[:, i], model) for i in range(3)])
    return FluxResult(radii, est, limit)


def komar_static_mass(
    f: Callable[[Array], float],
    three_metric: MetricChart,
    radii,
    grad_f: Optional[Callable[[Array], Array]] = None,
    quad_order: tuple[int, int] = (32, 64),
    model: str = "richardson",
    r_min: float = 0.0,
) -> FluxResult:
    """``(1/4 pi) oint g(grad f, nu) dA_g`` over coordinate spheres.

    ``nu`` is the ``g``-unit outward normal and ``dA_g`` the induced area.
    Without ``grad_f`` the gradient is a central difference with step
    ``1e-6 r``.
    """
    radii = _check_radii(SpatialDataSet(three_metric, r_min=r_min), radii)
    out = []
    for r in radii:
        pts, nrm, w = sphere_rule(r, quad_order)
        h = 1e-6 * r
        total = 0.0
        for x, n, wk in zip(pts, nrm, w):
            if grad_f is not None:
                df = np.asarray(grad_f(x), dtype=float)
            else:
                e = np.eye(3) * h
                df = np.array([(f(x + e[k]) - f(x - e[k])) / (2.0 * h) for k in range(3)])
            g = three_metric.metric(x)
            ginv = np.linalg.inv(g)
            norm_dr = np.sqrt(n @ ginv @ n)
            nu = ginv @ n / norm_dr
            dA = np.sqrt(np.linalg.det(g)) * norm_dr * wk
            total += (nu @ df) * dA
        out.append(total / (4.0 * np.pi))
    est = np.array(out)
    return FluxResult(radii, est, extrapolate(radii, est, model))


def sphere_area(three_metric: MetricChart, r: float, quad_order: tuple[int, int] = (32, 64)) -> float:
    """Area of the coordinate sphere ``|x| = r`` in the induced metric."""
    pts, nrm, w = sphere_rule(r, quad_order)
    total = 0.0
    for x, n, wk in zip(pts, nrm, w):
        g = three_metric.metric(x)
        total += np.sqrt(np.linalg.det(g)) * np.sqrt(n @ np.linalg.inv(g) @ n) * wk
    return float(total)


def penrose_check(mass: float, horizon_area: float) -> tuple[float, bool]:
    """``ratio = mass / sqrt(A / 16 pi)``; satisfied when ``ratio >= 1 - 1e-10``."""
    if horizon_area < 0:
        raise ValueError("horizon area must be non-negative")
    if horizon_area == 0:
        return float("inf"), True
    ratio = mass / np.sqrt(horizon_area / (16.0 * np.pi))
    return float(ratio), bool(ratio >= 1.0 - 1e-10)


# ---------------------------------------------------------------- Kerr


@dataclass(frozen=True)
class KerrParams:
    M: float
    a: float

    def __post_init__(self):
        if not self.M > 0 or self.a < 0:
            raise ValueError("need M > 0 and a >= 0")

    @property
    def regime(self) -> str:
        a2, m2 = self.a**2, self.M**2
        if np.isclose(a2, m2, rtol=1e-14, atol=0.0):
            return "extremal"
        return "subextremal" if a2 < m2 else "naked"


def _kerr_components(M, a, r, th, with_rr=True):
    s, c = np.sin(th), np.cos(th)
    rho2 = r * r + a * a * c * c
    delta = r * r - 2.0 * M * r + a * a
    k = 2.0 * M * r / rho2
    g = np.zeros((4, 4), dtype=np.result_type(r, th, float))
    g[0, 0] = -1.0 + k
    g[0, 3] = g[3, 0] = -k * a * s * s
    g[1, 1] = rho2 / delta if with_rr else 0.0
    g[2, 2] = rho2
    g[3, 3] = (r * r + a * a) * s * s + k * a * a * s**4
    return g


def kerr_chart(k: KerrParams, h_fd: float = 1e-5) -> MetricChart:
    """Boyer-Lindquist chart ``(t, r, theta, phi)``.

    First derivatives are exact up to rounding (complex step); second
    derivatives difference them with step ``h_fd * M``.
    """
    M, a = k.M, k.a

    def comps(x):
        _, r, th, _ = x
        rr, tr = np.real(r), np.real(th)
        if abs(rr * rr - 2.0 * M * rr + a * a) < 1e-12 * max(M * M, 1e-300):
            raise CoordinateSingularity(f"Delta = 0 at r={rr}")
        if rr * rr + a * a * np.cos(tr) ** 2 < 1e-12 * M * M:
            raise CoordinateSingularity("ring singularity rho = 0")
        if abs(np.sin(tr)) < 1e-12:
            raise CoordinateSingularity("polar axis")
        return _kerr_components(M, a, r, th)

    step = 1e-30

    def derivs(x):
        x = np.asarray(x, dtype=float)
        d = np.zeros((4, 4, 4))
        for j in (1, 2):
            z = x.astype(complex)
            z[j] += 1j * step
            d[j] = np.imag(comps(z)) / step
        return d

    return MetricChart(comps, 4, derivs, h_fd=h_fd, scale=M, name="kerr")


@dataclass(frozen=True)
class KerrStructure:
    params: KerrParams
    regime: str
    r_minus: Optional[float]
    r_plus: Optional[float]
    horizon_area: Optional[float]
    penrose_ratio: Optional[float]

    def ergosphere(self, theta: float) -> float:
        """Outer boundary ``M + sqrt(M^2 - a^2 cos^2 theta)`` of the ergoregion."""
        M, a = self.params.M, self.params.a
        return float(M + np.sqrt(max(M * M - a * a * np.cos(theta) ** 2, 0.0)))

    def g_tt(self, r: float, theta: float) -> float:
        M, a = self.params.M, self.params.a
        return float(-1.0 + 2.0 * M * r / (r * r + a * a * np.cos(theta) ** 2))

    def region(self, r: float, theta: float, tol: float = 1e-12) -> str:
        """``"I"`` inside the inner horizon, ``"II"`` between the horizons,
        ``"III"`` outside the black hole where ``d/dt`` is spacelike,
        ``"IV"`` where ``d/dt`` is timelike; ``"boundary"`` on a horizon or
        the ergosurface.
        """
        gtt = self.g_tt(r, theta)
        if self.r_plus is not None:
            for rh in (self.r_minus, self.r_plus):
                if abs(r - rh) <= tol * self.params.M:
                    return "boundary"
            if r < self.r_minus:
                return "I"
            if r < self.r_plus:
                return "II"
        if abs(gtt) <= tol:
            return "boundary"
        return "III" if gtt > 0 else "IV"

    def to_dict(self) -> dict:
        return {
            "M": self.params.M,
            "a": self.params.a,
            "regime": self.regime,
            "r_minus": self.r_minus,
            "r_plus": self.r_plus,
            "ergosphere_equator": self.ergosphere(0.5 * np.pi),
            "horizon_area": self.horizon_area,
            "penrose_ratio": self.penrose_ratio,
        }


def kerr_horizon_area(k: KerrParams, r_h: float, order: tuple[int, int] = (32, 64)) -> float:
    """Area of ``{t = const, r = r_h}`` by quadrature of the induced 2-metric."""
    mu, w_mu = np.polynomial.legendre.leggauss(order[0])
    total = 0.0
    for m, w in zip(mu, w_mu):
        th = np.arccos(m)
        g = _kerr_components(k.M, k.a, r_h, th, with_rr=False)
        # d(theta) = d(mu)/sin(theta); the phi integrand is constant
        dens = np.sqrt(g[2, 2] * g[3, 3] - g[2, 3] ** 2) / np.sin(th)
        total += w * dens
    return float(2.0 * np.pi * total)


def kerr_structure(k: KerrParams, order: tuple[int, int] = (32, 64)) -> KerrStructure:
    regime = k.regime
    if regime == "naked":
        return KerrStructure(k, regime, None, None, None, None)
    root = np.sqrt(max(k.M**2 - k.a**2, 0.0))
    r_minus, r_plus = k.M - root, k.M + root
    area = kerr_horizon_area(k, r_plus, order)
    return KerrStructure(k, regime, float(r_minus), float(r_plus), area, float(k.M / np.sqrt(area)))


def dominant_energy_check(tau, g, trials: int = 1000, seed: int = 0, rtol: float = 1e-12) -> bool:
    """Sampled dominant-energy test for a covariant stress tensor ``tau``.

    For random unit timelike ``W`` it requires ``tau(W, W) >= 0`` and that
    ``tau(W, .)`` raised with ``g`` is not spacelike. It also requires
    ``tau_00 >= |tau_ab|`` in an orthonormal frame.
    """
    tau = np.asarray(tau, dtype=float)
    g = np.asarray(g, dtype=float)
    e = orthonormal_frame(g)
    hat = e.T @ tau @ e
    tol = rtol * max(np.max(np.abs(hat)), 1e-300)
    if np.any(np.abs(hat) > hat[0, 0] + tol):
        return False
    ginv = np.linalg.inv(g)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        v = rng.normal(size=3)
        v *= rng.uniform(0.0, 0.999) / np.linalg.norm(v)
        W = (e[:, 0] + e[:, 1:] @ v) / np.sqrt(1.0 - v @ v)
        if W @ tau @ W < -tol:
            return False
        X = ginv @ (tau @ W)
        if X @ g @ X > tol * max(1.0, float(W @ W)):
            return False
    return True
