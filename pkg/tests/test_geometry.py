import numpy as np
import pytest

from grtool import geometry as gm
from grtool.asymptotics import KerrParams, kerr_chart
from grtool.errors import DegenerateMetric, DomainError, SingularMetric
from grtool.geodesics import SchwarzschildParams, schwarzschild_chart

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


def schw_fd(M=1.0, h=1e-5):
    return schwarzschild_chart(SchwarzschildParams(M)).with_step(h, analytic=False)


# ------------------------------------------------------------ christoffel


def test_christoffel_minkowski_zero():
    assert np.all(gm.christoffel(gm.minkowski_chart(), [0.3, 1.0, -2.0, 5.0]) == 0.0)


def test_christoffel_schwarzschild_fd_oracle():
    x = [0.0, 4.0, np.pi / 2, 0.0]
    gam_fd = gm.christoffel(schw_fd(), x)
    assert gam_fd[1, 0, 0] == pytest.approx(0.03125, abs=1e-9)
    assert gam_fd[0, 0, 1] == pytest.approx(0.125, abs=1e-9)
    gam = gm.christoffel(schwarzschild_chart(SchwarzschildParams(1.0)), x)
    assert np.allclose(gam, gam_fd, atol=1e-9)


def test_christoffel_static_exponential_lapse():
    chart = gm.static_chart(lambda y: np.exp(y[0]))
    gam = gm.christoffel(chart, [0.0, 0.7, 0.0, 0.0])
    assert gam[0, 0, 1] == pytest.approx(1.0, abs=1e-9)


def test_christoffel_lower_symmetry():
    gam = gm.christoffel(kerr_chart(KerrParams(1.0, 0.7)), [0.0, 5.0, 1.1, 0.4])
    assert np.allclose(gam, gam.transpose(0, 2, 1), atol=1e-14)


def test_singular_metric_raises():
    chart = gm.MetricChart(lambda x: np.diag([-1.0, 1.0, 1.0, 0.0]), derivatives=lambda x: np.zeros((4, 4, 4)))
    with pytest.raises(SingularMetric):
        gm.christoffel(chart, np.zeros(4))


def test_domain_error_outside_chart():
    with pytest.raises(DomainError):
        gm.christoffel(schwarzschild_chart(SchwarzschildParams(1.0)), [0.0, -1.0, 1.0, 0.0])


def test_fd_stencil_near_boundary_raises():
    chart = schwarzschild_chart(SchwarzschildParams(1.0)).with_step(1e-3, analytic=False)
    with pytest.raises(DomainError):
        gm.christoffel(chart, [0.0, 2.0 + 1e-3, 1.0, 0.0])


@pytest.mark.parametrize("chart_fn", [
    lambda: schwarzschild_chart(SchwarzschildParams(1.0)),
    lambda: kerr_chart(KerrParams(1.0, 0.6)),
])
def test_fd_christoffel_second_order(chart_fn):
    chart = chart_fn()
    x = np.array([0.0, 4.0, 1.0, 0.3])
    exact = gm.christoffel(chart, x)
    errs = [np.max(np.abs(gm.christoffel(chart.with_step(h, analytic=False), x) - exact)) for h in (4e-2, 2e-2)]
    assert 3.5 <= errs[0] / errs[1] <= 4.5


# ------------------------------------------------------------ curvature


def test_curvature_minkowski():
    cb = gm.curvature(gm.minkowski_chart(), np.zeros(4))
    assert np.all(cb.ricci == 0.0) and cb.scalar == 0.0


@pytest.mark.parametrize("r", [3.0, 5.0, 10.0])
def test_schwarzschild_ricci_flat(r):
    cb = gm.curvature(schwarzschild_chart(SchwarzschildParams(1.0)), [0.0, r, 1.0, 0.2])
    assert np.max(np.abs(cb.ricci)) < 1e-8
    assert np.allclose(cb.ricci, cb.ricci.T)
    assert np.allclose(cb.christoffel, cb.christoffel.transpose(0, 2, 1))


def test_static_cosh_r00():
    chart = gm.static_chart(lambda y: np.cosh(y[0]), lambda y: np.array([np.sinh(y[0]), 0.0, 0.0]))
    cb = gm.curvature(chart, [0.0, 0.0, 0.0, 0.0])
    assert cb.ricci[0, 0] == pytest.approx(1.0, abs=1e-6)
    # same value by brute finite differencing of the metric alone
    brute = gm.curvature(gm.static_chart(lambda y: np.cosh(y[0])), [0.0, 0.0, 0.0, 0.0])
    assert brute.ricci[0, 0] == pytest.approx(1.0, abs=1e-5)


def test_einstein_includes_lambda():
    cb = gm.curvature(gm.minkowski_chart(), np.zeros(4), lam=0.5)
    assert np.allclose(cb.einstein, 0.5 * ETA)


def _vacuum_samples(chart, r_lo, n=20, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        x = [rng.uniform(-1, 1), rng.uniform(r_lo, r_lo + 20.0), rng.uniform(0.2, np.pi - 0.2), rng.uniform(0, 2 * np.pi)]
        worst = max(worst, float(np.max(np.abs(gm.curvature(chart, x).ricci))))
    return worst


def test_vacuum_schwarzschild_20_points():
    chart = schwarzschild_chart(SchwarzschildParams(1.0))
    # curvature scale M/r^3 <= 1/27 on r >= 3
    assert _vacuum_samples(chart, 3.0) < 10 * chart.h_fd**2 * (1.0 / 27.0)


def test_vacuum_kerr_20_points():
    chart = kerr_chart(KerrParams(1.0, 0.6))
    assert _vacuum_samples(chart, 2.5) < 10 * chart.h_fd**2 * (1.0 / 2.5**3)


# ------------------------------------------------------------ dalembertian


def test_box_t_squared():
    assert gm.dalembertian(gm.minkowski_chart(), lambda x: x[0] ** 2, [0.3, 0.1, 0.0, 0.0]) == pytest.approx(2.0, abs=1e-6)


def test_box_plane_wave():
    assert gm.dalembertian(gm.minkowski_chart(), lambda x: np.sin(x[1] - x[0]), [0.2, 0.9, 0.0, 0.0]) == pytest.approx(0.0, abs=1e-6)


def test_geometer_laplacian_sign():
    val = gm.dalembertian(gm.euclidean_chart(3), lambda x: np.sin(x[0]), [1.0, 0.0, 0.0])
    assert val == pytest.approx(np.sin(1.0), abs=1e-6)
    assert round(val, 4) == 0.8415


# ------------------------------------------------------------ classification


def test_classify_type0():
    assert gm.classify_einstein(np.zeros((4, 4)), ETA) == "Type0"


def test_classify_type1():
    t = gm.classify_einstein(np.diag([2.0, 0.5, 0.5, 0.5]), ETA)
    assert t == "TypeI"
    assert t.params["mu"] == pytest.approx(2.0)
    assert t.params["lambda"] == pytest.approx(0.5)


def test_classify_type2():
    t = gm.classify_einstein(np.diag([1.0, 0.2, 0.5, 0.5]), ETA)
    assert t == "TypeII"
    assert t.params["mu"] == pytest.approx(1.0)
    assert t.params["lambda1"] == pytest.approx(0.2)
    assert t.params["lambda2"] == pytest.approx(0.5)


def test_classify_mixed_tensor_sign():
    # the table lists the mixed tensor; E_00 = +mu lowers to eigenvalue -mu
    assert gm.classify_einstein(np.diag([-2.0, 0.5, 0.5, 0.5]), ETA) == "Other"


def test_classify_type3_and_4():
    mu = 1.5
    assert gm.classify_einstein(np.diag([mu, -mu, mu, mu]), ETA) == "TypeIII"
    k = np.array([1.0, 1.0, 0.0, 0.0])
    E4 = np.outer(ETA @ k, ETA @ k)
    assert gm.classify_einstein(E4, ETA) == "TypeIV"


def test_classify_degenerate_metric():
    with pytest.raises(DegenerateMetric):
        gm.classify_einstein(np.eye(4), np.diag([0.0, 1.0, 1.0, 1.0]))


def _random_lorentz(rng):
    v = rng.uniform(-0.9, 0.9, 3)
    v *= rng.uniform(0, 0.95) / max(np.linalg.norm(v), 1e-12)
    g = 1.0 / np.sqrt(1.0 - v @ v)
    B = np.eye(4)
    B[0, 0] = g
    B[0, 1:] = B[1:, 0] = g * v
    B[1:, 1:] += (g - 1.0) * np.outer(v, v) / max(v @ v, 1e-300)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    R = np.eye(4)
    R[1:, 1:] = q * np.sign(np.linalg.det(q))
    return B @ R


def test_classification_frame_invariance():
    rng = np.random.default_rng(7)
    cases = [
        (np.diag([2.0, 0.5, 0.5, 0.5]), "TypeI"),
        (np.diag([1.0, 0.2, 0.5, 0.5]), "TypeII"),
        (np.diag([1.5, -1.5, 1.5, 1.5]), "TypeIII"),
        (np.zeros((4, 4)), "Type0"),
    ]
    for _ in range(100):
        A = _random_lorentz(rng)
        for E, kind in cases:
            # components in the new frame: A^T E A, A^T eta A
            assert gm.classify_einstein(A.T @ E @ A, A.T @ ETA @ A) == kind


# ------------------------------------------------------------ compactification, causal type


def test_carter_penrose_examples():
    assert gm.carter_penrose(0.0, 0.0) == pytest.approx((0.0, 0.0, 4.0))
    assert gm.carter_penrose(0.0, 1.0) == pytest.approx((0.0, np.pi / 2, 1.0))
    T, R, _ = gm.carter_penrose(0.0, 1e12)
    assert T == pytest.approx(0.0, abs=1e-9) and R == pytest.approx(np.pi, abs=1e-9)
    with pytest.raises(DomainError):
        gm.carter_penrose(0.0, -1.0)


def test_carter_penrose_null_rays():
    rng = np.random.default_rng(3)
    for u in rng.uniform(-5, 5, 10):
        ts = np.linspace(max(0.0, u) + 0.1, max(0.0, u) + 30.0, 7)
        vals = [gm.carter_penrose(t, t - u) for t in ts]
        diffs = [T - R for T, R, _ in vals]
        assert np.ptp(diffs) < 1e-12
        for T, R, _ in vals:
            assert -np.pi < T + R < np.pi and -np.pi < T - R < np.pi


@pytest.mark.parametrize("v,kind", [((1, 0, 0, 0), "timelike"), ((1, 1, 0, 0), "null"), ((1, 2, 0, 0), "spacelike")])
def test_causal_character(v, kind):
    assert gm.causal_character(ETA, v) == kind
