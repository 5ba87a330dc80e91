"""Metric charts, curvature, the wave operator and Einstein-tensor types.

Conventions used throughout the package:

* geometrized units ``G = c = 1`` and signature ``(-, +, +, +)``;
* the Laplacian carries the geometer sign ``Delta f = -sum_i d_i d_i f``;
* the d'Alembertian is ``box_g f = -g^{ij} (d_ij f - Gamma^k_ij d_k f)``,
  which reduces to the geometer Laplacian on flat Riemannian charts;
* Christoffel symbols are stored as ``gamma[k, i, j] = Gamma^k_ij``;
* metric derivatives are stored as ``dg[k, i, j] = d_k g_ij`` and
  ``ddg[k, l, i, j] = d_k d_l g_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateMetric, DomainError, SingularMetric

Array = np.ndarray


@dataclass(frozen=True)
class MetricChart:
    """Coordinate expression of a (pseudo-)Riemannian metric.

    Parameters
    ----------
    components : callable
        ``x -> g(x)``, a symmetric ``(dim, dim)`` array.
    dim : int
        4 for spacetime charts, 3 for spatial slices.
    derivatives : callable, optional
        Analytic first derivatives ``x -> dg`` with ``dg[k, i, j] = d_k g_ij``.
        When absent, central differences with step ``h_fd * scale`` are used.
    h_fd : float
        Relative finite-difference step.
    scale : float
        Coordinate length scale multiplying ``h_fd``.
    richardson : bool
        Apply one Richardson step to the central differences.
    domain : callable, optional
        Predicate ``x -> bool`` describing where the chart is valid.
    lorentzian : bool
        Whether the chart is a spacetime chart (signature check).
    """

    components: Callable[[Array], Array]
    dim: int = 4
    derivatives: Optional[Callable[[Array], Array]] = None
    h_fd: float = 1e-5
    scale: float = 1.0
    richardson: bool = False
    domain: Optional[Callable[[Array], bool]] = None
    lorentzian: bool = True
    name: str = ""

    @property
    def step(self) -> float:
        return self.h_fd * self.scale

    @property
    def derivative_mode(self) -> str:
        return "analytic" if self.derivatives is not None else "central-difference"

    def _check(self, x: Array) -> Array:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DomainError(f"point must have shape ({self.dim},), got {x.shape}")
        if self.domain is not None and not self.domain(x):
            raise DomainError(f"point {x.tolist()} outside chart {self.name!r}")
        return x

    def metric(self, x) -> Array:
        x = self._check(x)
        return np.asarray(self.components(x), dtype=float)

    def with_step(self, h_fd: float, analytic: bool = True) -> "MetricChart":
        """Copy of the chart with another step, optionally dropping analytic derivatives."""
        return MetricChart(
            components=self.components,
            dim=self.dim,
            derivatives=self.derivatives if analytic else None,
            h_fd=h_fd,
            scale=self.scale,
            richardson=self.richardson,
            domain=self.domain,
            lorentzian=self.lorentzian,
            name=self.name,
        )

    def _central(self, fun: Callable[[Array], Array], x: Array, h: float) -> Array:
        out = []
        for k in range(self.dim):
            e = np.zeros(self.dim)
            e[k] = h
            out.append((np.asarray(fun(x + e)) - np.asarray(fun(x - e))) / (2.0 * h))
        return np.array(out)

    def _diff(self, fun: Callable[[Array], Array], x: Array, h: Optional[float] = None, richardson=None) -> Array:
        h = self.step if h is None else h
        richardson = self.richardson if richardson is None else richardson
        if self.domain is not None:
            for k in range(self.dim):
                e = np.zeros(self.dim)
                e[k] = 2.0 * h
                if not (self.domain(x + e) and self.domain(x - e)):
                    raise DomainError("finite-difference stencil leaves the chart domain")
        d = self._central(fun, x, h)
        if richardson:
            d = (4.0 * self._central(fun, x, 0.5 * h) - d) / 3.0
        return d

    def metric_derivatives(self, x) -> Array:
        """``dg[k, i, j] = d_k g_ij`` at ``x``."""
        x = self._check(x)
        if self.derivatives is not None:
            return np.asarray(self.derivatives(x), dtype=float)
        return self._diff(self.components, x)

    def metric_second_derivatives(self, x) -> Array:
        """``ddg[k, l, i, j] = d_k d_l g_ij`` at ``x``.

        With analytic first derivatives this is a fourth-order
        (Richardson) central difference of them with step ``1e-3 * scale``,
        near the ``eps^(1/5)`` optimum for that stencil. Otherwise a
        second-difference stencil with step ``1e-4 * scale`` is used, which
        balances truncation against round-off for double precision.
        """
        x = self._check(x)
        if self.derivatives is not None:
            dd = self._diff(self.derivatives, x, 1e-3 * self.scale, richardson=True)
        else:
            dd = _second_differences(self.components, x, 1e-4 * self.scale, self.dim)
        return 0.5 * (dd + dd.transpose(1, 0, 2, 3))


def _second_differences(fun, x, h, dim):
    g0 = np.asarray(fun(x))
    dd = np.empty((dim, dim) + g0.shape)
    eye = np.eye(dim) * h
    for k in range(dim):
        gp = np.asarray(fun(x + eye[k]))
        gm = np.asarray(fun(x - eye[k]))
        dd[k, k] = (gp - 2.0 * g0 + gm) / h**2
        for l in range(k + 1, dim):
            v = (
                np.asarray(fun(x + eye[k] + eye[l]))
                - np.asarray(fun(x + eye[k] - eye[l]))
                - np.asarray(fun(x - eye[k] + eye[l]))
                + np.asarray(fun(x - eye[k] - eye[l]))
            ) / (4.0 * h**2)
            dd[k, l] = dd[l, k] = v
    return dd


@dataclass(frozen=True)
class CurvatureBundle:
    christoffel: Array
    ricci: Array
    scalar: float
    einstein: Array
    lam: float = 0.0


def _inverse(g: Array) -> Array:
    det = np.linalg.det(g)
    ref = max(np.max(np.abs(g)), 1e-300) ** g.shape[0]
    if not np.isfinite(det) or abs(det) < 1e-14 * ref:
        raise SingularMetric(f"metric determinant {det:.3e} too small")
    return np.linalg.inv(g)


def christoffel_from_derivatives(g: Array, dg: Array) -> Array:
    """``Gamma^k_ij = 1/2 g^{kl} (d_i g_lj + d_j g_li - d_l g_ij)``."""
    ginv = _inverse(g)
    # lowered symbols Gamma_{l i j}
    low = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    return np.einsum("kl,lij->kij", ginv, low)


def christoffel(chart: MetricChart, x) -> Array:
    """Christoffel symbols ``gamma[k, i, j]`` of ``chart`` at ``x``."""
    return christoffel_from_derivatives(chart.metric(x), chart.metric_derivatives(x))


def ricci_from_derivatives(g: Array, dg: Array, ddg: Array) -> tuple[Array, Array]:
    """Christoffel symbols and Ricci tensor from the metric jets.

    Uses ``R_ab = d_i G^i_ab - d_b G^i_ai + G^i_im G^m_ab - G^i_bm G^m_ia``.
    """
    ginv = _inverse(g)
    gamma = christoffel_from_derivatives(g, dg)
    low = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    # d_l of the lowered symbols
    dlow = 0.5 * (
        ddg.transpose(0, 2, 1, 3) + ddg.transpose(0, 2, 3, 1) - ddg
    )
    dginv = -np.einsum("ka,lab,bm->lkm", ginv, dg, ginv)
    dgamma = np.einsum("lkm,mij->lkij", dginv, low) + np.einsum("km,lmij->lkij", ginv, dlow)
    ric = (
        np.einsum("iiab->ab", dgamma)
        - np.einsum("biai->ab", dgamma)
        + np.einsum("iim,mab->ab", gamma, gamma)
        - np.einsum("ibm,mia->ab", gamma, gamma)
    )
    return gamma, 0.5 * (ric + ric.T)


def curvature(chart: MetricChart, x, lam: float = 0.0) -> CurvatureBundle:
    """Christoffel symbols, Ricci tensor, scalar curvature and Einstein tensor.

    The Einstein tensor includes the cosmological term,
    ``E = Ric - R g / 2 + lam g``.
    """
    g = chart.metric(x)
    gamma, ric = ricci_from_derivatives(
        g, chart.metric_derivatives(x), chart.metric_second_derivatives(x)
    )
    scalar = float(np.einsum("ij,ij->", np.linalg.inv(g), ric))
    einstein = ric - 0.5 * scalar * g + lam * g
    return CurvatureBundle(gamma, ric, scalar, einstein, lam)


def dalembertian(chart: MetricChart, f: Callable[[Array], float], x, h: Optional[float] = None) -> float:
    """``box_g f = -g^{ij} (d_ij f - Gamma^k_ij d_k f)`` at ``x``.

    Derivatives of ``f`` are central differences with step ``h``
    (default ``1e-4 * chart.scale``).
    """
    x = np.asarray(x, dtype=float)
    g = chart.metric(x)
    gamma = christoffel(chart, x)
    h = 1e-4 * chart.scale if h is None else h
    grad = chart._central(lambda y: np.asarray(f(y), dtype=float), x, h)
    hess = _second_differences(lambda y: np.asarray(f(y), dtype=float), x, h, chart.dim)
    ginv = np.linalg.inv(g)
    return float(-np.einsum("ij,ij->", ginv, hess - np.einsum("kij,k->ij", gamma, grad)))


# --- standard charts -------------------------------------------------------

def minkowski_chart() -> MetricChart:
    eta = np.diag([-1.0, 1.0, 1.0, 1.0])
    return MetricChart(
        components=lambda x: eta.copy(),
        derivatives=lambda x: np.zeros((4, 4, 4)),
        name="minkowski",
    )


def euclidean_chart(dim: int = 3) -> MetricChart:
    return MetricChart(
        components=lambda x: np.eye(dim),
        dim=dim,
        derivatives=lambda x: np.zeros((dim, dim, dim)),
        lorentzian=False,
        name="euclidean",
    )


def static_chart(f: Callable[[Array], float], df: Optional[Callable[[Array], Array]] = None) -> MetricChart:
    """Static chart ``-f(x)^2 dt^2 + delta`` with ``f`` a function of the spatial point."""

    def comps(x):
        g = np.eye(4)
        g[0, 0] = -f(x[1:]) ** 2
        return g

    deriv = None
    if df is not None:
        def deriv(x):
            d = np.zeros((4, 4, 4))
            d[1:, 0, 0] = -2.0 * f(x[1:]) * np.asarray(df(x[1:]))
            return d

    return MetricChart(components=comps, derivatives=deriv, name="static")


# --- algebraic classification ---------------------------------------------

class EinsteinKind(str, Enum):
    TYPE0 = "Type0"
    TYPEI = "TypeI"
    TYPEII = "TypeII"
    TYPEIII = "TypeIII"
    TYPEIV = "TypeIV"
    OTHER = "Other"


@dataclass(frozen=True)
class EinsteinType:
    kind: EinsteinKind
    eigenvalues: tuple = ()
    multiplicities: tuple = ()
    params: dict = field(default_factory=dict)

    def __eq__(self, other):
        if isinstance(other, (EinsteinKind, str)):
            return self.kind == other
        return NotImplemented

    __hash__ = None


def _null_space(a: Array, tol: float) -> Array:
    _, s, vt = np.linalg.svd(a)
    rank = int(np.sum(s > tol))
    return vt[rank:].T


def _restricted_signature(g: Array, basis: Array, tol: float) -> tuple[int, int, int]:
    """(negative, zero, positive) counts of ``g`` restricted to span(basis)."""
    if basis.shape[1] == 0:
        return (0, 0, 0)
    q, _ = np.linalg.qr(basis)
    w = np.linalg.eigvalsh(q.T @ g @ q)
    scale = max(np.max(np.abs(np.linalg.eigvalsh(g))), 1.0)
    t = 1e-9 * scale
    return (int(np.sum(w < -t)), int(np.sum(np.abs(w) <= t)), int(np.sum(w > t)))


def classify_einstein(E, g, rtol: float = 1e-8) -> EinsteinType:
    """Algebraic type of an Einstein tensor at a point.

    Eigenvalues and eigenspaces of the mixed tensor ``E^a_b = g^{ac} E_cb``
    are matched against the tabulated forms:

    ``Type0``: ``E = 0``.
    ``TypeI``: ``-mu`` (timelike line), ``lam`` in ``(-mu, mu)`` (3-dim).
    ``TypeII``: ``-mu`` (timelike line), ``lam1`` (line), ``lam2`` (plane).
    ``TypeIII``: ``-mu`` on a plane, ``+mu`` on a spacelike plane.
    ``TypeIV``: only eigenvalue 0, 3-dim eigenspace tangent to the light cone.

    Anything else is ``Other``. Eigenvalues closer than ``rtol * |E|`` are
    treated as equal.
    """
    E = np.asarray(E, dtype=float)
    g = np.asarray(g, dtype=float)
    if abs(np.linalg.det(g)) < 1e-14 * max(np.max(np.abs(g)), 1e-300) ** 4:
        raise DegenerateMetric("metric is degenerate")
    w_g = np.linalg.eigvalsh(0.5 * (g + g.T))
    if np.sum(w_g < 0) != 1:
        raise DegenerateMetric("metric is not Lorentzian")
    mixed = np.linalg.solve(g, E)
    norm = np.linalg.norm(mixed)
    if norm <= 1e-300 or np.linalg.norm(E) <= 1e-300:
        return EinsteinType(EinsteinKind.TYPE0)
    tol = rtol * norm
    # non-diagonalizable blocks perturb eigenvalues by ~sqrt(eps)
    ctol = max(tol, 1e-6 * norm)
    vals = np.linalg.eigvals(mixed)
    if np.max(np.abs(vals.imag)) > ctol:
        return EinsteinType(EinsteinKind.OTHER, tuple(vals))
    vals = np.sort(vals.real)
    clusters: list[list[float]] = []
    for v in vals:
        if clusters and abs(v - clusters[-1][-1]) <= ctol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    centers = [float(np.mean(c)) for c in clusters]
    alg = [len(c) for c in clusters]
    spaces = [_null_space(mixed - lam * np.eye(4), max(tol, 1e-7 * norm)) for lam in centers]
    geo = [s.shape[1] for s in spaces]
    cent = tuple(centers)

    if sum(geo) < 4:
        if len(centers) == 1 and abs(centers[0]) <= ctol and geo[0] == 3:
            neg, zero, _ = _restricted_signature(g, spaces[0], tol)
            if neg == 0 and zero == 1:
                return EinsteinType(EinsteinKind.TYPEIV, cent, tuple(geo))
        return EinsteinType(EinsteinKind.OTHER, cent, tuple(geo))

    sig = [_restricted_signature(g, s, tol) for s in spaces]
    timelike = [i for i, s in enumerate(sig) if s[0] == 1]
    if len(timelike) != 1:
        return EinsteinType(EinsteinKind.OTHER, cent, tuple(geo))
    it = timelike[0]
    lam_t = centers[it]

    if sorted(geo) == [1, 3] and geo[it] == 1 and lam_t < -ctol:
        mu = -lam_t
        lam = centers[1 - it]
        if -mu < lam < mu:
            return EinsteinType(EinsteinKind.TYPEI, cent, tuple(geo), {"mu": mu, "lambda": lam})
    if sorted(geo) == [1, 1, 2] and geo[it] == 1 and lam_t < -ctol:
        i1 = [i for i in range(3) if geo[i] == 1 and i != it][0]
        i2 = [i for i in range(3) if geo[i] == 2][0]
        return EinsteinType(
            EinsteinKind.TYPEII,
            cent,
            tuple(geo),
            {"mu": -lam_t, "lambda1": centers[i1], "lambda2": centers[i2]},
        )
    if geo == [2, 2] and lam_t < -ctol:
        mu = -lam_t
        other = 1 - it
        if abs(centers[other] - mu) <= ctol and sig[other][0] == 0 and sig[other][1] == 0:
            return EinsteinType(EinsteinKind.TYPEIII, cent, tuple(geo), {"mu": mu})
    return EinsteinType(EinsteinKind.OTHER, cent, tuple(geo))


# --- conformal compactification and causal character ----------------------

def carter_penrose(t: float, r: float) -> tuple[float, float, float]:
    """Compactified coordinates ``(T, R)`` and conformal factor ``Omega^2`` of Minkowski space."""
    if r < 0:
        raise DomainError("r must be non-negative")
    a, b = np.arctan(t + r), np.arctan(t - r)
    omega_sq = 4.0 / ((1.0 + (t + r) ** 2) * (1.0 + (t - r) ** 2))
    return float(a + b), float(a - b), float(omega_sq)


def causal_character(g, v, tol: float = 1e-12) -> str:
    """``'timelike'``, ``'null'`` or ``'spacelike'`` according to the sign of ``g(v, v)``."""
    g = np.asarray(g, dtype=float)
    v = np.asarray(v, dtype=float)
    q = float(v @ g @ v)
    ref = tol * max(float(np.abs(g).max()) * float(v @ v), 1.0)
    if q < -ref:
        return "timelike"
    if q > ref:
        return "spacelike"
    return "null"


def orthonormal_frame(g: Array) -> Array:
    """Columns ``e_a`` with ``g(e_a, e_b) = eta_ab``; timelike vector first."""
    w, v = np.linalg.eigh(0.5 * (g + g.T))
    order = np.argsort(w)
    w, v = w[order], v[:, order]
    return v / np.sqrt(np.abs(w))
