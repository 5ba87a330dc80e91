import numpy as np
import pytest

from grtool import geometry as gm
from grtool import waves as wv
from grtool.errors import CFLViolation, NonUnitDirection, QuadratureDomain

ETA = wv.ETA
X0 = np.array([0.3, -0.4, 0.7, 1.1])


# ------------------------------------------------------------ d'Alembert


def test_dalembert_constant_velocity():
    for t, x in [(0.0, 1.0), (0.5, -2.0), (3.0, 0.25)]:
        assert wv.dalembert_exact(lambda s: 0.0, lambda s: 1.0, t, x) == pytest.approx(t, abs=1e-13)


def test_dalembert_standing_wave():
    rng = np.random.default_rng(0)
    for t, x in rng.uniform(0, 5, size=(20, 2)):
        assert abs(wv.dalembert_exact(np.sin, lambda s: 0.0, t, x) - np.sin(x) * np.cos(t)) < 1e-12


def test_domain_of_dependence():
    t, x = 1.5, 0.2
    phi, psi = np.cos, lambda s: np.exp(-s * s)

    def outside(f, bump):
        return lambda s: f(s) + (bump if abs(s - x) > t + 1e-9 else 0.0)

    base = wv.dalembert_exact(phi, psi, t, x)
    changed = wv.dalembert_exact(outside(phi, 7.0), outside(psi, -3.0), t, x)
    assert changed == pytest.approx(base, abs=1e-12)


# ------------------------------------------------------------ finite differences


def _fd_error(N, t=1.0):
    f = wv.fd_wave_solve(np.sin, lambda x: 0.0 * x, 0.0, 2 * np.pi, N, t)
    return np.max(np.abs(f.u - np.sin(f.x) * np.cos(t)))


def test_fd_second_order():
    errs = [_fd_error(N) for N in (32, 64, 128)]
    for a, b in zip(errs, errs[1:]):
        assert 3.5 <= a / b <= 4.5


def test_fd_zero_data():
    f = wv.fd_wave_solve(lambda x: 0.0 * x, lambda x: 0.0 * x, -1.0, 1.0, 50, 2.0)
    assert np.all(f.u == 0.0)


def _bump(x, c=0.0, w=1.0):
    q = (x - c) / w
    out = np.zeros_like(x)
    inside = np.abs(q) < 1
    out[inside] = np.exp(-1.0 / (1.0 - q[inside] ** 2))
    return out


def test_pulse_speed():
    t = 4.0
    f = wv.fd_wave_solve(_bump, lambda x: 0.0 * x, -10.0, 10.0, 2000, t)
    right = f.x > 0
    peak = f.x[right][np.argmax(f.u[right])]
    assert abs(peak - t) <= f.dx


def test_energy_conservation_periodic():
    L = 2 * np.pi
    f = wv.fd_wave_solve(lambda x: _bump(x, np.pi, 1.0), lambda x: np.cos(x), 0.0, L, 256, 10 * L, cfl=0.9)
    drift = np.max(np.abs(f.energy - f.energy[0])) / f.energy[0]
    assert drift < 1e-6


def test_absorbing_boundary_lets_pulse_leave():
    f = wv.fd_wave_solve(_bump, lambda x: 0.0 * x, -5.0, 5.0, 500, 12.0, boundary="absorbing")
    assert np.max(np.abs(f.u)) < 1e-2 * np.exp(-1.0)


def test_cfl_violation():
    with pytest.raises(CFLViolation):
        wv.fd_wave_solve(np.sin, np.cos, 0.0, 1.0, 10, 1.0, cfl=1.5)


def test_wave_csv():
    f = wv.fd_wave_solve(np.sin, lambda x: 0.0 * x, 0.0, 1.0, 4, 0.1)
    lines = f.to_csv().splitlines()
    assert lines[0] == "x,u" and len(lines) == 5


# ------------------------------------------------------------ TT waves


def test_tt_phase_zero():
    h = wv.tt_wave_field(wv.TTWaveSpec(2.0, 0.3, -0.1), 1.7, 1.7)
    assert h[1, 1] == 0.3 and h[1, 2] == -0.1 and h[2, 2] == -0.3


def test_tt_gauge_conditions_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        spec = wv.TTWaveSpec(rng.uniform(0.1, 5), rng.normal(), rng.normal())
        h = wv.tt_wave_field(spec, *rng.uniform(-10, 10, size=2))
        assert np.einsum("ab,ab->", ETA, h) == 0.0
        assert np.all(h[0] == 0) and np.all(h[:, 0] == 0)
        assert np.all(h[3] == 0) and np.all(h[:, 3] == 0)
        assert np.array_equal(h, h.T)


def test_tt_components_are_waves():
    spec = wv.TTWaveSpec(1.3, 0.4, 0.2)
    chart = gm.minkowski_chart()
    for a, b in [(1, 1), (1, 2), (2, 2)]:
        box = gm.dalembertian(chart, lambda x: wv.tt_wave_field(spec, x[0], x[3])[a, b], X0, h=1e-3)
        assert abs(box) < 1e-6


def test_spec_validation():
    with pytest.raises(ValueError):
        wv.TTWaveSpec(0.0, 1.0, 0.0)
    assert wv.TTWaveSpec(2.5, 0, 0).k == 2.5


# ------------------------------------------------------------ trace reverse


def test_trace_reverse_examples():
    h = np.zeros((4, 4))
    h[1, 2] = h[2, 1] = 0.3
    h[1, 1], h[2, 2] = 0.5, -0.5
    assert np.array_equal(wv.trace_reverse(h), h)
    assert np.allclose(wv.trace_reverse(ETA), -ETA, atol=1e-15)


def test_trace_reverse_involution():
    rng = np.random.default_rng(1)
    for _ in range(20):
        h = rng.normal(size=(4, 4))
        h = h + h.T
        hb = wv.trace_reverse(h)
        assert np.allclose(wv.trace_reverse(hb), h, atol=1e-14)
        assert np.einsum("ab,ab->", ETA, hb) == pytest.approx(-np.einsum("ab,ab->", ETA, h), abs=1e-13)


# ------------------------------------------------------------ Lorenz residual, gauge


def test_lorenz_residual_tt_and_zero():
    p = wv.tt_perturbation(wv.TTWaveSpec(1.7, 0.5, 0.25))
    assert np.max(np.abs(wv.lorenz_residual(p, X0))) < 1e-8
    zero = wv.LinearPerturbation(lambda x: np.zeros((4, 4)))
    assert np.all(wv.lorenz_residual(zero, X0) == 0.0)


def _static_junk(x):
    h = np.zeros((4, 4))
    h[1, 1] = x[1]
    return h


def test_lorenz_residual_static_junk():
    # hbar = h - (x1/2) eta, so V_1 = d_1 hbar_11 = 1/2 and the rest vanish
    V = wv.lorenz_residual(wv.LinearPerturbation(_static_junk), X0)
    assert np.allclose(V, [0.0, 0.5, 0.0, 0.0], atol=1e-10)


def test_gauge_identity():
    p = wv.tt_perturbation(wv.TTWaveSpec(1.0, 0.3, 0.1))
    q = wv.gauge_transform(p, lambda x: np.zeros(4))
    assert np.array_equal(q(X0), p(X0))


def test_gauge_reaches_lorenz():
    p = wv.LinearPerturbation(_static_junk)

    def xi(x):
        return np.array([0.0, 0.25 * x[1] ** 2, 0.0, 0.0])  # eta^{mn} d_m d_n xi_1 = 1/2

    def dxi(x):
        D = np.zeros((4, 4))
        D[1, 1] = 0.5 * x[1]
        return D

    for q in (wv.gauge_transform(p, xi, dxi), wv.gauge_transform(p, xi)):
        assert np.max(np.abs(wv.lorenz_residual(q, X0))) < 1e-6


def test_gauge_shift_of_lorenz_residual():
    rng = np.random.default_rng(4)
    c, k = rng.normal(size=4), rng.normal(size=4)
    p = wv.LinearPerturbation(_static_junk)
    q = wv.gauge_transform(p, lambda x: 1e-2 * c * np.sin(k @ x))
    box_xi = -1e-2 * c * np.sin(k @ X0) * (k @ ETA @ k)
    assert np.allclose(wv.lorenz_residual(q, X0), wv.lorenz_residual(p, X0) - box_xi, atol=1e-6)


def test_einstein_gauge_invariance():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(4, 4))
    A = 1e-3 * (A + A.T)
    K = rng.normal(size=4)
    p = wv.LinearPerturbation(lambda x: A * np.cos(K @ x))
    G = wv.linearized_einstein(p, X0)
    for _ in range(5):
        c, q = 1e-3 * rng.normal(size=4), rng.normal(size=4)
        G2 = wv.linearized_einstein(wv.gauge_transform(p, lambda x: c * np.sin(q @ x)), X0)
        assert np.max(np.abs(G2 - G)) < 1e-6


def test_einstein_zero_and_vacuum_wave():
    zero = wv.LinearPerturbation(lambda x: np.zeros((4, 4)))
    assert np.all(wv.linearized_einstein(zero, X0) == 0.0)
    p = wv.tt_perturbation(wv.TTWaveSpec(2.0, 0.7, -0.4))
    assert np.max(np.abs(wv.linearized_einstein(p, X0))) < 1e-6


@pytest.mark.parametrize("eps", [1e-4, 1e-5, 1e-6])
def test_linear_matches_nonlinear(eps):
    rng = np.random.default_rng(3)
    A = rng.normal(size=(4, 4))
    A = A + A.T
    K = rng.normal(size=4)

    def h(x):
        return eps * A * np.cos(K @ x)

    def dh(x):
        return -eps * np.einsum("k,ij->kij", K, A) * np.sin(K @ x)

    chart = gm.MetricChart(lambda x: ETA + h(x), derivatives=dh)
    Gn = gm.curvature(chart, X0).einstein
    Gl = wv.linearized_einstein(wv.LinearPerturbation(h), X0)
    assert np.max(np.abs(Gn - Gl)) < 10 * eps * np.max(np.abs(Gl))


# ------------------------------------------------------------ ring and arms


def test_ring_examples():
    plus = wv.TTWaveSpec(1.0, 1.0, 0.0)
    cross = wv.TTWaveSpec(1.0, 0.0, 1.0)
    assert np.allclose(wv.ring_deformation(plus, [(1.0, 0.0)], 0.0), [[1.5, 0.0]])
    assert np.allclose(wv.ring_deformation(cross, [(1.0, 0.0)], 0.0), [[1.0, 0.5]])


def test_ring_ellipse():
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    b = wv.ring_deformation(wv.TTWaveSpec(1.0, 1.0, 0.0), np.stack([np.cos(th), np.sin(th)], 1), 0.0)
    assert np.allclose((b[:, 0] / 1.5) ** 2 + (b[:, 1] / 0.5) ** 2, 1.0, atol=1e-14)
    assert np.max(np.abs(b[:, 0])) == pytest.approx(1.5) and np.max(np.abs(b[:, 1])) == pytest.approx(0.5)


def test_ring_identity_quarter_period():
    spec = wv.TTWaveSpec(2.0, 0.8, 0.3)
    pts = np.random.default_rng(2).normal(size=(10, 2))
    assert np.allclose(wv.ring_deformation(spec, pts, np.pi / 4), pts, atol=1e-15)


def test_ring_area_first_order():
    a = 1e-3
    th = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    b = wv.ring_deformation(wv.TTWaveSpec(1.0, a, 0.0), np.stack([np.cos(th), np.sin(th)], 1), 0.0)
    area = 0.5 * np.sum(b[:, 0] * np.roll(b[:, 1], -1) - np.roll(b[:, 0], -1) * b[:, 1])
    area0 = 0.5 * 400 * np.sin(2 * np.pi / 400)
    assert abs(area / area0 - 1.0) < a * a


def test_ring_csv():
    lines = wv.ring_snapshots_csv(wv.TTWaveSpec(1.0, 0.1, 0.0), 4, 3).splitlines()
    assert lines[0] == "frame,t,particle,a1,a2,b1,b2" and len(lines) == 13


def test_arm_strain_examples():
    spec = wv.TTWaveSpec(1.0, 0.2, 0.0)
    h = wv.tt_wave_field(spec, 0.0, 0.0)
    assert wv.arm_strain(h, [1, 0, 0]) == pytest.approx(0.1)
    assert wv.arm_strain(h, [0, 0, 1]) == 0.0
    s1, s2 = wv.arm_strain(h, [1, 0, 0]), wv.arm_strain(h, [0, 1, 0])
    assert (s1, s2) == pytest.approx((0.1, -0.1)) and s1 - s2 == pytest.approx(0.2)
    with pytest.raises(NonUnitDirection):
        wv.arm_strain(h, [1, 1, 0])


def test_arm_strain_linear_and_even():
    rng = np.random.default_rng(6)
    for _ in range(20):
        h1 = wv.tt_wave_field(wv.TTWaveSpec(1.0, *rng.normal(size=2)), *rng.normal(size=2))
        h2 = wv.tt_wave_field(wv.TTWaveSpec(2.0, *rng.normal(size=2)), *rng.normal(size=2))
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        a, b = rng.normal(size=2)
        lhs = wv.arm_strain(a * h1 + b * h2, n)
        assert lhs == pytest.approx(a * wv.arm_strain(h1, n) + b * wv.arm_strain(h2, n), abs=1e-14)
        assert wv.arm_strain(h1, -n) == pytest.approx(wv.arm_strain(h1, n), abs=1e-15)


def test_interferometer_csv():
    lines = wv.interferometer_csv(wv.TTWaveSpec(1.0, 0.2, 0.0), [0.0, 1.0]).splitlines()
    assert lines[0] == "t,strain_arm1,strain_arm2,differential"
    assert [float(v) for v in lines[1].split(",")] == pytest.approx([0.0, 0.1, -0.1, 0.2])


# ------------------------------------------------------------ quadrupoles


def test_point_dumbbell():
    Q = wv.quadrupole_moment(wv.binary_source(1.0, 1.0, 1.0), 0.0)
    assert np.allclose(Q, np.diag([4 / 3, -2 / 3, -2 / 3]), atol=1e-15)


def test_blob_dumbbell():
    Q = wv.quadrupole_moment(wv.binary_source(1.0, 1.0, 1.0, blob_radius=0.5), 0.0)
    # isotropic blobs add no quadrupole of their own
    assert np.max(np.abs(Q - np.diag([4 / 3, -2 / 3, -2 / 3]))) < 1e-5
    assert abs(np.trace(Q)) < 1e-12


def test_spherical_source():
    src = wv.QuadrupoleSource(0.8, density=wv.blob_density([2.0], lambda t: np.zeros((1, 3)), 0.8))
    assert np.max(np.abs(wv.quadrupole_moment(src, 0.0))) < 1e-10


def test_quadrature_domain():
    src = wv.binary_source(1.0, 1.0, 1.0, blob_radius=0.5)
    with pytest.raises(QuadratureDomain):
        wv.quadrupole_moment(src, 0.0, half_width=1.0)


def test_binary_second_derivative_and_peak():
    Omega = 1.0
    src = wv.binary_source(1.0, 1.0, Omega)
    period = 2 * np.pi / Omega
    dt = 1e-3 * period
    times = np.linspace(0.0, 8 * period, 256, endpoint=False)
    q11 = np.array([wv.quadrupole_second_derivative(src, t, dt)[0, 0] for t in times])
    assert np.max(np.abs(q11 + 4 * Omega**2 * np.cos(2 * Omega * times))) < 1e-4
    assert wv.spectral_peak(times, q11) == pytest.approx(2 * Omega, rel=1e-12)
