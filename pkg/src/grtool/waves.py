"""Linearized gravity on Minkowski space and the 1+1 wave equation.

Perturbations ``g = eta + h`` are described by the trace reverse
``hbar = h - (1/2) (tr h) eta`` and ``V_a = eta^{mn} d_m hbar_{an}``. The
linearized Einstein tensor is

    G_ab = 1/2 (-eta^{mn} d_m d_n hbar_ab + d_b V_a + d_a V_b - eta_ab d^m V_m)

Transverse-traceless plane waves travel along ``x^3`` with ``k = omega``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import CFLViolation, NonUnitDirection, QuadratureDomain

Array = np.ndarray
ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


# ------------------------------------------------------------ 1+1 waves


def dalembert_exact(phi: Callable[[float], float], psi: Callable[[float], float], t: float, x: float) -> float:
    """``u(t, x) = (phi(x - t) + phi(x + t))/2 + (1/2) int_{x-t}^{x+t} psi``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    integral = 0.0
    if t > 0:
        integral, _ = quad(psi, x - t, x + t, epsabs=1e-14, epsrel=1e-13, limit=200)
    return 0.5 * (phi(x - t) + phi(x + t)) + 0.5 * integral


@dataclass
class WaveField1D:
    x: Array
    u: Array
    t: float
    dx: float
    dt: float
    steps: int
    energy: Array

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,u\n")
        for a, b in zip(self.x, self.u):
            buf.write(f"{a:.17g},{b:.17g}\n")
        return buf.getvalue()


def fd_wave_solve(
    phi: Callable[[Array], Array],
    psi: Callable[[Array], Array],
    x_min: float,
    x_max: float,
    N: int,
    t_end: float,
    cfl: float = 0.5,
    boundary: str = "periodic",
) -> WaveField1D:
    """Leapfrog scheme for ``u_tt = u_xx``.

    The time step is ``t_end / ceil(t_end / (cfl dx))`` so that ``t_end`` is
    hit exactly with a Courant number not above ``cfl``. The first step uses
    the Taylor start ``u^1 = u^0 + dt psi + dt^2/2 u^0_xx``. ``boundary`` is
    ``"periodic"`` (``N`` points, ``x_max`` excluded) or ``"absorbing"``
    (``N + 1`` points with first-order one-way conditions). ``energy``
    holds the conserved staggered energy after every step.
    """
    if not 0 < cfl <= 1:
        raise CFLViolation(f"cfl={cfl} must lie in (0, 1]")
    if boundary not in ("periodic", "absorbing"):
        raise ValueError(f"unknown boundary {boundary!r}")
    L = x_max - x_min
    dx = L / N
    if boundary == "periodic":
        x = x_min + dx * np.arange(N)
    else:
        x = x_min + dx * np.arange(N + 1)
    steps = max(1, int(np.ceil(t_end / (cfl * dx) - 1e-12)))
    dt = t_end / steps
    lam2 = (dt / dx) ** 2

    def lap(u):
        if boundary == "periodic":
            return np.roll(u, -1) - 2.0 * u + np.roll(u, 1)
        out = np.zeros_like(u)
        out[1:-1] = u[2:] - 2.0 * u[1:-1] + u[:-2]
        return out

    def fwd_diff(u):
        if boundary == "periodic":
            return (np.roll(u, -1) - u) / dx
        return np.diff(u) / dx

    def energy(new, old):
        vel = (new - old) / dt
        return 0.5 * dx * (np.sum(vel**2) + np.sum(fwd_diff(new) * fwd_diff(old)))

    u0 = np.asarray(phi(x), dtype=float) * np.ones_like(x)
    v0 = np.asarray(psi(x), dtype=float) * np.ones_like(x)
    u1 = u0 + dt * v0 + 0.5 * lam2 * lap(u0)
    c = (dt - dx) / (dt + dx)
    if boundary == "absorbing":
        u1[0] = u0[1] + c * (u1[1] - u0[0])
        u1[-1] = u0[-2] + c * (u1[-2] - u0[-1])
    hist = [energy(u1, u0)]
    prev, cur = u0, u1
    for _ in range(steps - 1):
        nxt = 2.0 * cur - prev + lam2 * lap(cur)
        if boundary == "absorbing":
            nxt[0] = cur[1] + c * (nxt[1] - cur[0])
            nxt[-1] = cur[-2] + c * (nxt[-2] - cur[-1])
        prev, cur = cur, nxt
        hist.append(energy(cur, prev))
    return WaveField1D(x, cur, t_end, dx, dt, steps, np.array(hist))


# ------------------------------------------------------------ TT waves


@dataclass(frozen=True)
class TTWaveSpec:
    omega: float
    a_plus: float
    a_cross: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")

    @property
    def k(self) -> float:
        return self.omega


def tt_wave_field(spec: TTWaveSpec, t: float, x3: float) -> Array:
    """``h_11 = -h_22 = a_+ cos(omega(t - x3))``, ``h_12 = h_21 = a_x cos(omega(t - x3))``."""
    c = np.cos(spec.omega * (t - x3))
    h = np.zeros((4, 4))
    h[1, 1] = spec.a_plus * c
    h[2, 2] = -spec.a_plus * c
    h[1, 2] = h[2, 1] = spec.a_cross * c
    return h


def tt_perturbation(spec: TTWaveSpec) -> "LinearPerturbation":
    return LinearPerturbation(lambda x: tt_wave_field(spec, x[0], x[3]))


def trace_reverse(h) -> Array:
    """``hbar = h - (1/2) (eta^{ab} h_ab) eta``."""
    h = np.asarray(h, dtype=float)
    return h - 0.5 * np.einsum("ab,ab->", ETA, h) * ETA


@dataclass(frozen=True)
class LinearPerturbation:
    """Field ``x -> h_ab(x)`` on Minkowski space; derivatives by central differences of step ``fd_step``."""

    h: Callable[[Array], Array]
    fd_step: float = 1e-3

    def __call__(self, x) -> Array:
        return np.asarray(self.h(np.asarray(x, dtype=float)), dtype=float)

    def trace(self, x) -> float:
        return float(np.einsum("ab,ab->", ETA, self(x)))

    def bar(self, x) -> Array:
        return trace_reverse(self(x))

    def _grad_bar(self, x) -> Array:
        """``D[m, a, b] = d_m hbar_ab``."""
        x = np.asarray(x, dtype=float)
        s = self.fd_step
        e = np.eye(4) * s
        return np.array([(self.bar(x + e[m]) - self.bar(x - e[m])) / (2.0 * s) for m in range(4)])

    def _hess_bar(self, x) -> Array:
        """``H[m, n, a, b] = d_m d_n hbar_ab``."""
        x = np.asarray(x, dtype=float)
        s = self.fd_step
        e = np.eye(4) * s
        H = np.empty((4, 4, 4, 4))
        b0 = self.bar(x)
        for m in range(4):
            H[m, m] = (self.bar(x + e[m]) - 2.0 * b0 + self.bar(x - e[m])) / s**2
            for n in range(m + 1, 4):
                H[m, n] = H[n, m] = (
                    self.bar(x + e[m] + e[n])
                    - self.bar(x + e[m] - e[n])
                    - self.bar(x - e[m] + e[n])
                    + self.bar(x - e[m] - e[n])
                ) / (4.0 * s * s)
        return H


def lorenz_residual(p: LinearPerturbation, x) -> Array:
    """``V_a = eta^{mn} d_m hbar_an``."""
    return np.einsum("mn,man->a", ETA, p._grad_bar(x))


def linearized_einstein(p: LinearPerturbation, x) -> Array:
    """Linearized Einstein tensor from the Hessian of ``hbar``."""
    H = p._hess_bar(x)
    box = -np.einsum("mn,mnab->ab", ETA, H)
    dV = np.einsum("mn,bman->ab", ETA, H)  # dV[a, b] = d_b V_a
    divV = np.einsum("mn,pq,pmqn->", ETA, ETA, H)  # d^p V_p
    return 0.5 * (box + dV + dV.T - ETA * divV)


def gauge_transform(
    p: LinearPerturbation,
    xi: Callable[[Array], Array],
    dxi: Optional[Callable[[Array], Array]] = None,
) -> LinearPerturbation:
    """``h'_ab = h_ab - d_b xi_a - d_a xi_b`` for a covector field ``xi``.

    ``dxi(x)[b, a] = d_b xi_a``; central differences are used when absent.
    The Lorenz residual then shifts by ``-eta^{mn} d_m d_n xi_a``.
    """

    def grad(x):
        if dxi is not None:
            return np.asarray(dxi(x), dtype=float)
        s = p.fd_step
        e = np.eye(4) * s
        return np.array([(np.asarray(xi(x + e[b])) - np.asarray(xi(x - e[b]))) / (2.0 * s) for b in range(4)])

    def h_new(x):
        D = grad(x)  # D[b, a] = d_b xi_a
        return p(x) - D - D.T

    return LinearPerturbation(h_new, p.fd_step)


def ring_deformation(spec: TTWaveSpec, particles: Sequence[Sequence[float]], t: float) -> Array:
    """Positions ``(b1, b2)`` of free particles initially at ``(a1, a2)`` in the plane ``x3 = 0``.

    ``b1 = a1 + (a_+ a1 + a_x a2) cos(omega t)/2`` and
    ``b2 = a2 + (a_x a1 - a_+ a2) cos(omega t)/2``.
    """
    a = np.asarray(particles, dtype=float).reshape(-1, 2)
    c = 0.5 * np.cos(spec.omega * t)
    b1 = a[:, 0] + c * (spec.a_plus * a[:, 0] + spec.a_cross * a[:, 1])
    b2 = a[:, 1] + c * (spec.a_cross * a[:, 0] - spec.a_plus * a[:, 1])
    return np.stack([b1, b2], axis=1)


def ring_snapshots_csv(spec: TTWaveSpec, n_particles: int, frames: int) -> str:
    """Unit ring sampled at ``n_particles`` angles over one wave period in ``frames`` steps."""
    theta = 2.0 * np.pi * np.arange(n_particles) / n_particles
    ring = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    period = 2.0 * np.pi / spec.omega
    buf = io.StringIO()
    buf.write("frame,t,particle,a1,a2,b1,b2\n")
    for f in range(frames):
        t = period * f / frames
        b = ring_deformation(spec, ring, t)
        for i in range(n_particles):
            vals = (t, ring[i, 0], ring[i, 1], b[i, 0], b[i, 1])
            buf.write(f"{f},{vals[0]:.17g},{i}," + ",".join(f"{v:.17g}" for v in vals[1:]) + "\n")
    return buf.getvalue()


def arm_strain(h_tt, n) -> float:
    """Relative length change ``(1/2) h(n, n)`` of an arm along the unit spatial vector ``n``."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise NonUnitDirection("arm direction must be a unit 3-vector")
    h = np.asarray(h_tt, dtype=float)[1:, 1:]
    return float(0.5 * n @ h @ n)


def interferometer_csv(spec: TTWaveSpec, times: Sequence[float], arm1=(1.0, 0.0, 0.0), arm2=(0.0, 1.0, 0.0)) -> str:
    """Time series ``t, strain_arm1, strain_arm2, differential`` at the origin."""
    buf = io.StringIO()
    buf.write("t,strain_arm1,strain_arm2,differential\n")
    for t in times:
        h = tt_wave_field(spec, t, 0.0)
        s1, s2 = arm_strain(h, arm1), arm_strain(h, arm2)
        buf.write(f"{t:.17g},{s1:.17g},{s2:.17g},{s1 - s2:.17g}\n")
    return buf.getvalue()


# ------------------------------------------------------------ quadrupoles


@dataclass(frozen=True)
class QuadrupoleSource:
    """Matter distribution as a density ``rho(t, pts)`` on ``(n, 3)`` points, or as point masses.

    ``points(t)`` returns ``(masses, positions)``; when given it takes
    precedence and the moment is an exact sum.
    """

    support_radius: float
    density: Optional[Callable[[float, Array], Array]] = None
    points: Optional[Callable[[float], tuple]] = None


def _bump(q: Array) -> Array:
    out = np.zeros_like(q)
    inside = q < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - q[inside] ** 2))
    return out


def blob_density(masses: Sequence[float], centers: Callable[[float], Array], radius: float):
    """Sum of smooth isotropic bumps ``exp(-1/(1 - q^2))``, ``q = |x - c|/radius``, with given masses."""
    norm, _ = quad(lambda r: np.exp(-1.0 / (1.0 - (r / radius) ** 2)) * r * r if r < radius else 0.0, 0.0, radius)
    norm *= 4.0 * np.pi
    masses = np.asarray(masses, dtype=float)

    def rho(t, pts):
        c = np.asarray(centers(t), dtype=float)
        out = np.zeros(len(pts))
        for m, ck in zip(masses, c):
            q = np.linalg.norm(pts - ck, axis=1) / radius
            out += m / norm * _bump(q)
        return out

    return rho


def binary_source(m: float, d: float, Omega: float, blob_radius: Optional[float] = None) -> QuadrupoleSource:
    """Equal masses at ``+-d (cos Omega t, sin Omega t, 0)``."""

    def centers(t):
        u = np.array([np.cos(Omega * t), np.sin(Omega * t), 0.0])
        return np.array([d * u, -d * u])

    if blob_radius is None:
        return QuadrupoleSource(d, points=lambda t: (np.array([m, m]), centers(t)))
    return QuadrupoleSource(d + blob_radius, density=blob_density([m, m], centers, blob_radius))


def _box_rule(half: float, panels: int, order: int):
    g, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-half, half, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    hw = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + hw[:, None] * g[None, :]).ravel()
    weights = (hw[:, None] * w[None, :]).ravel()
    return nodes, weights


def quadrupole_moment(
    src: QuadrupoleSource, t: float, half_width: Optional[float] = None, panels: int = 16, order: int = 8
) -> Array:
    """``Q_ij = int rho (x_i x_j - |x|^2 delta_ij / 3)``.

    Densities are integrated with composite Gauss-Legendre on the cube
    ``[-half_width, half_width]^3`` (default: the support radius), which
    must contain the support.
    """
    if src.points is not None:
        m, x = src.points(t)
        x = np.asarray(x, dtype=float)
        Q = np.einsum("k,ki,kj->ij", m, x, x)
        return Q - np.trace(Q) / 3.0 * np.eye(3)
    half = src.support_radius if half_width is None else half_width
    if src.support_radius > half:
        raise QuadratureDomain(f"support radius {src.support_radius} exceeds box half-width {half}")
    nodes, weights = _box_rule(half, panels, order)
    Q = np.zeros((3, 3))
    # slab by slab along x1 keeps memory bounded
    X2, X3 = np.meshgrid(nodes, nodes, indexing="ij")
    W23 = np.outer(weights, weights).ravel()
    rest = np.stack([X2.ravel(), X3.ravel()], axis=1)
    for x1, w1 in zip(nodes, weights):
        pts = np.column_stack([np.full(len(rest), x1), rest])
        wr = w1 * W23 * src.density(t, pts)
        Q += np.einsum("k,ki,kj->ij", wr, pts, pts)
    return Q - np.trace(Q) / 3.0 * np.eye(3)


def quadrupole_second_derivative(src: QuadrupoleSource, t: float, dt: float, **quad_kw) -> Array:
    """``Q''(t)`` by the central difference ``(Q(t+dt) - 2Q(t) + Q(t-dt))/dt^2``."""
    return (
        quadrupole_moment(src, t + dt, **quad_kw) - 2.0 * quadrupole_moment(src, t, **quad_kw)
        + quadrupole_moment(src, t - dt, **quad_kw)
    ) / dt**2


def spectral_peak(times: Sequence[float], values: Sequence[float]) -> float:
    """Angular frequency of the largest non-zero Fourier mode of a uniformly sampled series."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    spec = np.abs(np.fft.rfft(y - y.mean()))
    freqs = np.fft.rfftfreq(len(y), t[1] - t[0])
    return float(2.0 * np.pi * freqs[1 + np.argmax(spec[1:])])
