"""Conformal method for the vacuum constraints on the flat 3-torus.

Given a mean-curvature function ``tau`` and a transverse-traceless tensor
``sigma``, the unknowns ``(phi, W)`` solve

    8 Delta phi = -(2/3) tau^2 phi^5 + |sigma + LW|^2 phi^-7
    div(LW)     = (2/3) phi^6 d tau

where ``Delta = -sum d_i^2`` and ``LW = dW + dW^T - (2/3)(div W) delta``.
The data ``(phi^4 delta, (tau/3) phi^4 delta + phi^-2 (sigma + LW))`` then
satisfy both constraints.

All derivatives are spectral. The Nyquist mode is dropped from first
derivatives, and second-order operators are built as compositions of
first derivatives, so the discrete operators satisfy integration by parts
exactly.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
import scipy.fft as sfft
from scipy.sparse.linalg import LinearOperator, cg

from .errors import BarrierFailure, IterationDiverged, NoConvergence

Array = np.ndarray


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("GRTOOL_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid with ``N`` points per axis on ``(R / 2 pi Z)^3``."""

    N: int

    def __post_init__(self):
        if self.N < 16 or self.N % 2:
            raise ValueError("N must be even and at least 16")

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.N

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.N,) * 3

    @cached_property
    def coords(self) -> tuple[Array, Array, Array]:
        x = self.spacing * np.arange(self.N)
        return tuple(np.meshgrid(x, x, x, indexing="ij"))

    @cached_property
    def wavenumbers(self) -> Array:
        """``(3, N, N, N)`` integer wavenumbers with the Nyquist entry zeroed."""
        k = sfft.fftfreq(self.N, 1.0 / self.N)
        k[self.N // 2] = 0.0
        return np.stack(np.meshgrid(k, k, k, indexing="ij"))

    @cached_property
    def k2(self) -> Array:
        return np.sum(self.wavenumbers**2, axis=0)

    def integrate(self, f: Array) -> float:
        return float(np.sum(f) * self.spacing**3)

    def fft(self, f: Array) -> Array:
        return sfft.fftn(f, axes=(-3, -2, -1), workers=_workers())

    def ifft(self, f: Array) -> Array:
        return sfft.ifftn(f, axes=(-3, -2, -1), workers=_workers()).real

    def gradient(self, f: Array) -> Array:
        """``(d_1 f, d_2 f, d_3 f)`` for a scalar field, or ``d_j V_i`` stacked as ``[j, i]``."""
        fh = self.fft(f)
        kk = self.wavenumbers.reshape((3,) + (1,) * (f.ndim - 3) + self.shape)
        return self.ifft(1j * kk * fh[None])

    def laplacian(self, f: Array) -> Array:
        """Geometer Laplacian ``-sum d_i d_i f``."""
        return self.ifft(self.k2 * self.fft(f))


@dataclass(frozen=True)
class ConformalSeed:
    """Free data: ``tau`` (scalar) and ``sigma`` (``(3, 3, N, N, N)``, TT w.r.t. flat metric)."""

    grid: TorusGrid
    tau: Array
    sigma: Array

    def __post_init__(self):
        if self.tau.shape != self.grid.shape or self.sigma.shape != (3, 3) + self.grid.shape:
            raise ValueError("field shapes do not match the grid")
        if not np.allclose(self.sigma, self.sigma.transpose(1, 0, 2, 3, 4), rtol=0, atol=1e-14):
            raise ValueError("sigma must be symmetric")
        if np.max(np.abs(np.einsum("ii...->...", self.sigma))) >= 1e-12:
            raise ValueError("sigma must be trace-free")
        scale = max(1.0, float(np.max(np.abs(self.sigma))))
        if np.max(np.abs(divergence(self.grid, self.sigma))) > 1e-10 * scale:
            raise ValueError("sigma must be divergence-free")

    @property
    def is_cmc(self) -> bool:
        return bool(np.ptp(self.tau) == 0.0)


def constant_seed(grid: TorusGrid, tau: float, sigma: Sequence[Sequence[float]]) -> ConformalSeed:
    s = np.asarray(sigma, dtype=float)
    return ConformalSeed(
        grid, np.full(grid.shape, float(tau)), np.broadcast_to(s[:, :, None, None, None], (3, 3) + grid.shape).copy()
    )


def sigma_with_norm(norm2: float) -> Array:
    """Constant diagonal TT tensor ``diag(a, -a, 0)`` with ``|sigma|^2 = norm2``."""
    a = np.sqrt(0.5 * norm2)
    return np.diag([a, -a, 0.0])


def conformal_killing_op(grid: TorusGrid, W: Array) -> Array:
    """``(LW)_ij = d_i W_j + d_j W_i - (2/3) (div W) delta_ij``."""
    dW = grid.gradient(W)  # dW[i, j] = d_i W_j
    div = np.einsum("ii...->...", dW)
    out = dW + dW.transpose(1, 0, 2, 3, 4)
    for i in range(3):
        out[i, i] -= 2.0 / 3.0 * div
    return out


def divergence(grid: TorusGrid, S: Array) -> Array:
    """``(div S)_j = d_i S_ij``."""
    return np.einsum("iij...->j...", grid.gradient(S))


def adjoint(grid: TorusGrid, S: Array) -> Array:
    """L^2 adjoint of ``L`` on trace-free symmetric fields: ``L^dagger S = -2 div S``."""
    return -2.0 * divergence(grid, S)


def inner(grid: TorusGrid, a: Array, b: Array) -> float:
    return grid.integrate(np.sum(a * b, axis=tuple(range(a.ndim - 3))))


def div_l(grid: TorusGrid, W: Array) -> Array:
    """``div(LW) = sum_i d_i d_i W + (1/3) grad div W``, the operator of the momentum equation."""
    return divergence(grid, conformal_killing_op(grid, W))


@dataclass(frozen=True)
class VectorSolve:
    W: Array
    kernel_residual: float


def solve_vector_equation(grid: TorusGrid, rhs: Array) -> VectorSolve:
    """Solve ``div(LW) = P rhs`` mode by mode.

    In Fourier space the operator acts as ``-|k|^2`` on the part of ``W``
    transverse to ``k`` and ``-(4/3)|k|^2`` on the longitudinal part.
    ``P`` removes the modes where the symbol vanishes (the mean, which is
    the kernel of ``L``); the size of the removed part is reported.
    """
    rh = grid.fft(rhs)
    k = grid.wavenumbers
    k2 = grid.k2
    zero = k2 == 0
    safe = np.where(zero, 1.0, k2)
    proj = np.sum(k * rh, axis=0) / safe
    Wh = -(rh - k * proj) / safe - 0.75 * k * proj / safe
    Wh[:, zero] = 0.0
    removed = np.zeros_like(rh)
    removed[:, zero] = rh[:, zero]
    return VectorSolve(grid.ifft(Wh), float(np.max(np.abs(grid.ifft(removed)))))


def _norm2(S: Array) -> Array:
    return np.einsum("ij...,ij...->...", S, S)


def _solve_positive(grid: TorusGrid, coef: Array, rhs: Array, rtol: float = 1e-14) -> Array:
    """Solve ``8 Delta u + coef u = rhs`` (``coef > 0``) by preconditioned CG."""
    shape = grid.shape
    c = float(np.mean(coef))
    if np.ptp(coef) == 0.0:
        return grid.ifft(grid.fft(rhs) / (8.0 * grid.k2 + c))
    n = rhs.size

    def mv(v):
        u = v.reshape(shape)
        return (8.0 * grid.laplacian(u) + coef * u).ravel()

    def pc(v):
        return grid.ifft(grid.fft(v.reshape(shape)) / (8.0 * grid.k2 + c)).ravel()

    A = LinearOperator((n, n), matvec=mv, dtype=float)
    M = LinearOperator((n, n), matvec=pc, dtype=float)
    x0 = pc(rhs.ravel())
    sol, info = cg(A, rhs.ravel(), x0=x0, rtol=rtol, atol=0.0, M=M, maxiter=500)
    if info != 0:
        raise NoConvergence(f"linear solve did not converge (info={info})")
    return sol.reshape(shape)


def lichnerowicz_residual(grid: TorusGrid, tau: Array, A: Array, phi: Array) -> Array:
    """``8 Delta phi + (2/3) tau^2 phi^5 - A phi^-7`` with ``A = |sigma + LW|^2``."""
    return 8.0 * grid.laplacian(phi) + 2.0 / 3.0 * tau**2 * phi**5 - A * phi**-7


@dataclass(frozen=True)
class Barriers:
    lower: Array
    upper: float


def lichnerowicz_barriers(grid: TorusGrid, tau: Array, A: Array) -> Barriers:
    """Constant supersolution and scaled linear subsolution.

    ``upper = max (3A / (2 tau^2))^(1/12)`` makes the right-hand side
    non-negative. ``lower = alpha eta`` where ``8 Delta eta + (2/3) tau^2 eta
    = A``; with ``alpha = min(1/max eta, (max eta)^(-7/8))`` both
    ``alpha^4 eta^4 <= 1`` and ``alpha^8 eta^7 <= 1`` hold, which makes
    ``alpha eta`` a subsolution.
    """
    if np.any(tau == 0):
        raise BarrierFailure("tau vanishes somewhere")
    upper = float(np.max((1.5 * A / tau**2) ** (1.0 / 12.0)))
    if not upper > 0:
        raise BarrierFailure("|sigma + LW|^2 vanishes identically; no positive supersolution")
    eta = _solve_positive(grid, 2.0 / 3.0 * tau**2, A)
    emax = float(np.max(eta))
    if not np.min(eta) > 0:
        raise BarrierFailure("linear subsolution is not positive")
    alpha = min(1.0 / emax, emax ** (-7.0 / 8.0))
    lower = alpha * eta
    if np.any(lower > upper * (1.0 + 1e-12)):
        raise BarrierFailure("lower barrier exceeds upper barrier")
    return Barriers(lower, upper)


def solve_lichnerowicz(
    seed: ConformalSeed,
    W: Optional[Array],
    phi0,
    tol: float = 1e-10,
    max_iter: int = 100,
    clamp: bool = True,
    history: Optional[list] = None,
) -> Array:
    """Damped Newton iteration for the Lichnerowicz equation.

    Iterates are clamped into the barrier interval unless ``clamp`` is
    false. Each step is halved (at most 30 times) until the residual
    decreases. Converges when the residual sup-norm is below ``tol``.
    ``history``, when given, receives one record per iterate.
    """
    grid = seed.grid
    LW = 0.0 if W is None else conformal_killing_op(grid, W)
    A = _norm2(seed.sigma + LW)
    tau = seed.tau
    bar = lichnerowicz_barriers(grid, tau, A)
    phi = np.broadcast_to(np.asarray(phi0, dtype=float), grid.shape).copy()
    if clamp:
        phi = np.clip(phi, bar.lower, bar.upper)
    F = lichnerowicz_residual(grid, tau, A, phi)
    res = float(np.max(np.abs(F)))
    for it in range(max_iter + 1):
        if history is not None:
            history.append(
                {
                    "iter": it,
                    "residual": res,
                    "min": float(phi.min()),
                    "max": float(phi.max()),
                    "within_barriers": bool(
                        np.all(phi >= bar.lower * (1 - 1e-12)) and np.all(phi <= bar.upper * (1 + 1e-12))
                    ),
                }
            )
        if res < tol:
            return phi
        if it == max_iter:
            break
        coef = 10.0 / 3.0 * tau**2 * phi**4 + 7.0 * A * phi**-8
        delta = _solve_positive(grid, coef, -F)
        step = 1.0
        for _ in range(31):
            trial = phi + step * delta
            if clamp:
                trial = np.clip(trial, bar.lower, bar.upper)
            if np.all(trial > 0):
                Ft = lichnerowicz_residual(grid, tau, A, trial)
                rt = float(np.max(np.abs(Ft)))
                if rt < res:
                    break
            step *= 0.5
        else:
            raise NoConvergence(f"step halving failed at iteration {it} (residual {res:.3e})")
        phi, F, res = trial, Ft, rt
    raise NoConvergence(f"Newton did not reach {tol} in {max_iter} iterations (residual {res:.3e})")


@dataclass
class ConformalSolution:
    grid: TorusGrid
    phi: Array
    W: Array
    epsilon_history: list = field(default_factory=list)
    kernel_residual: float = 0.0
    dtau_over_tau_L3: float = 0.0

    def log_lines(self) -> str:
        return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in self.epsilon_history)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("i,j,k,phi,W1,W2,W3\n")
        N = self.grid.N
        idx = np.indices(self.grid.shape).reshape(3, -1).T
        flat = np.concatenate([self.phi[None], self.W]).reshape(4, -1).T
        for (i, j, k), row in zip(idx, flat):
            buf.write(f"{i},{j},{k}," + ",".join(f"{v:.17g}" for v in row) + "\n")
        assert idx.shape[0] == N**3
        return buf.getvalue()


def epsilon_schedule(levels: int = 6) -> list[float]:
    """``1, 1/2, ..., 2^-(levels-1), 0``."""
    return [0.5**i for i in range(levels)] + [0.0]


def coupled_subcritical_solve(
    seed: ConformalSeed,
    epsilon_schedule_: Optional[Sequence[float]] = None,
    tol: float = 1e-12,
    max_outer: int = 100,
    phi0=1.0,
    gamma_bound: float = 1e8,
) -> ConformalSolution:
    """Fixed-point continuation in ``epsilon``.

    For each ``epsilon`` the map ``phi -> N_eps(phi)`` solves the momentum
    equation with source ``(2/3) phi^(6 - eps) d tau`` and then the
    Lichnerowicz equation for the resulting ``W``. Iteration stops when
    successive ``phi`` differ by less than ``tol`` in sup-norm; the next
    ``epsilon`` starts from the result.
    """
    grid = seed.grid
    schedule = list(epsilon_schedule() if epsilon_schedule_ is None else epsilon_schedule_)
    dtau = grid.gradient(seed.tau)
    l3 = grid.integrate(np.sum(dtau**2, axis=0) ** 1.5 / np.abs(seed.tau) ** 3) ** (1.0 / 3.0)
    phi = np.broadcast_to(np.asarray(phi0, dtype=float), grid.shape).copy()
    W = np.zeros((3,) + grid.shape)
    log: list = []
    kernel = 0.0
    for eps in schedule:
        for it in range(1, max_outer + 1):
            vs = solve_vector_equation(grid, 2.0 / 3.0 * phi ** (6.0 - eps) * dtau)
            W, kernel = vs.W, vs.kernel_residual
            new = solve_lichnerowicz(seed, W, phi)
            change = float(np.max(np.abs(new - phi)))
            phi = new
            gamma = grid.integrate(_norm2(conformal_killing_op(grid, W))) ** (1.0 / 3.0)
            log.append({"epsilon": eps, "outer_iter": it, "residual": change, "gamma_eps": gamma})
            if not np.isfinite(gamma) or gamma > gamma_bound:
                raise IterationDiverged(f"gamma_eps={gamma} exceeds {gamma_bound} at epsilon={eps}")
            if change < tol:
                break
        else:
            raise NoConvergence(f"fixed point not reached at epsilon={eps}")
    return ConformalSolution(grid, phi, W, log, kernel, float(l3))


def coupled_residuals(seed: ConformalSeed, sol: ConformalSolution) -> dict:
    """Sup-norm residuals of the critical (``epsilon = 0``) system."""
    grid = seed.grid
    A = _norm2(seed.sigma + conformal_killing_op(grid, sol.W))
    ham = lichnerowicz_residual(grid, seed.tau, A, sol.phi)
    mom = div_l(grid, sol.W) - 2.0 / 3.0 * sol.phi**6 * grid.gradient(seed.tau)
    return {"lichnerowicz": float(np.max(np.abs(ham))), "vector": float(np.max(np.abs(mom)))}


def energy_identity(seed: ConformalSeed, sol: ConformalSolution) -> dict:
    """Both sides of ``(7/2) int |du|^2 + (2/3) int tau^2 u^3 = int |sigma|^2 + int |LW|^2``, ``u = phi^4``."""
    grid = seed.grid
    u = sol.phi**4
    du = grid.gradient(u)
    lhs = 3.5 * grid.integrate(np.sum(du**2, axis=0)) + 2.0 / 3.0 * grid.integrate(seed.tau**2 * u**3)
    rhs = grid.integrate(_norm2(seed.sigma)) + grid.integrate(_norm2(conformal_killing_op(grid, sol.W)))
    return {"lhs": lhs, "rhs": rhs, "relative": abs(lhs - rhs) / max(abs(rhs), 1e-300)}


def reconstruct(seed: ConformalSeed, phi: Array, W: Array) -> tuple[Array, Array]:
    """Physical data ``h' = phi^4 delta`` and ``K' = (tau/3) phi^4 delta + phi^-2 (sigma + LW)``."""
    grid = seed.grid
    eye = np.eye(3)[:, :, None, None, None]
    h = phi**4 * eye
    K = seed.tau / 3.0 * phi**4 * eye + phi**-2 * (seed.sigma + conformal_killing_op(grid, W))
    return h, K


def reconstruct_and_verify(seed: ConformalSeed, sol: ConformalSolution) -> dict:
    """Constraint residuals of the reconstructed data.

    ``hamiltonian_residual`` is ``R + (tr K)^2 - |K|^2`` (scalar equation),
    ``momentum_residual`` is ``div K - d tr K`` (vector equation), both as
    sup-norms over the grid. The scalar curvature of ``phi^4 delta`` is
    ``8 phi^-5 Delta phi``.
    """
    grid = seed.grid
    phi = sol.phi
    h, K = reconstruct(seed, phi, sol.W)
    inv = phi**-4
    R = 8.0 * phi**-5 * grid.laplacian(phi)
    trK = inv * np.einsum("ii...->...", K)
    normK = inv**2 * _norm2(K)
    ham = R + trK**2 - normK
    # Christoffel symbols of phi^4 delta: 2/phi (d^k_i d_j phi + d^k_j d_i phi - delta_ij d_k phi)
    dphi = grid.gradient(phi)
    eye = np.eye(3)
    gam = (
        np.einsum("ki,j...->kij...", eye, dphi)
        + np.einsum("kj,i...->kij...", eye, dphi)
        - np.einsum("ij,k...->kij...", eye, dphi)
    ) * (2.0 / phi)
    dK = grid.gradient(K)  # dK[k, i, j] = d_k K_ij
    cov = dK - np.einsum("mki...,mj...->kij...", gam, K) - np.einsum("mkj...,im...->kij...", gam, K)
    divK = inv * np.einsum("iij...->j...", cov)
    mom = divK - grid.gradient(trK)
    return {
        "hamiltonian_residual": float(np.max(np.abs(ham))),
        "momentum_residual": float(np.max(np.abs(mom))),
    }


def nonexistence_probe(seed: ConformalSeed) -> dict:
    """Decide solvability for CMC seeds through the integrated Lichnerowicz equation.

    On a CMC torus ``W = 0``. Integrating gives
    ``(2/3) int tau^2 phi^5 = int |sigma|^2 phi^-7``; with ``sigma = 0`` the
    left side is positive for any ``phi > 0``, so no solution exists.
    """
    if not seed.is_cmc:
        raise ValueError("probe applies to constant tau")
    s2 = seed.grid.integrate(_norm2(seed.sigma))
    if s2 == 0.0:
        return {
            "status": "Infeasible",
            "identity": "(2/3) int tau^2 phi^5 = int |sigma|^2 phi^-7",
            "int_sigma2": 0.0,
            "reason": "right side vanishes while the left side is positive for phi > 0",
        }
    phi = solve_lichnerowicz(seed, None, 1.0)
    return {"status": "Feasible", "int_sigma2": s2, "phi_min": float(phi.min()), "phi_max": float(phi.max())}
