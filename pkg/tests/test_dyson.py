"""Eigenvalue closed forms, the rotated-coordinate SDE integrator, and the
vector off-diagonal reduction."""

import numpy as np
import pytest

from besqlab import besq, dyson, stattest
from besqlab.besq import BesqParams
from besqlab.dyson import DriverState, EigenPair, MatrixProcessConfig
from besqlab.errors import DomainError

# hand evaluation for b1=3, b2=1, xi=2, c=0.5: discriminant 4 + 4 = 8,
# trace 4, so the pair is 2 +- sqrt(2)
LAM1_312 = 3.4142135623730951
LAM2_312 = 0.5857864376269049


def test_eigenvalues_diagonal_matrix_gives_order_statistics():
    pair = dyson.eigenvalues(DriverState(1.0, 0.0, 0.0), 0.7)
    assert pair.lambda1 == 1.0 and pair.lambda2 == 0.0


def test_eigenvalues_hand_evaluated_point():
    pair = dyson.eigenvalues(DriverState(3.0, 1.0, 2.0), 0.5)
    assert pair.lambda1 == pytest.approx(LAM1_312, rel=1e-15)
    assert pair.lambda2 == pytest.approx(LAM2_312, rel=1e-15)


def test_eigenvalues_scalar_matrix_degenerate():
    for c in (0.0, 0.3, 2.0):
        pair = dyson.eigenvalues(DriverState(1.7, 1.7, 0.0), c)
        assert pair.lambda1 == pair.lambda2 == 1.7


def test_eigenvalues_rejects_negative_coupling():
    with pytest.raises(DomainError):
        dyson.eigenvalues(DriverState(1.0, 0.0, 1.0), -0.1)


def test_driver_state_rejects_negative_xi():
    with pytest.raises(DomainError):
        DriverState(0.0, 0.0, -1.0)


def test_eigen_pair_rejects_wrong_order():
    with pytest.raises(DomainError):
        EigenPair(0.0, 1.0)


def test_decompose_returns_sum_and_gap():
    assert dyson.decompose(EigenPair(1.0, 0.0)) == (1.0, 1.0)
    s, g = dyson.decompose(EigenPair(LAM1_312, LAM2_312))
    assert s == pytest.approx(4.0, abs=1e-15)
    assert g == pytest.approx(2.8284271247461903, rel=1e-15)
    s, g = dyson.decompose(EigenPair(2.5, 2.5))
    assert s == 5.0 and g == 0.0


def test_pathwise_decomposition_identities():
    rng = np.random.default_rng(71)
    cfg = MatrixProcessConfig(0.6, 1.5, tuple(np.linspace(0.05, 2.0, 200)))
    state = dyson.simulate_drivers(rng, cfg)
    pair = dyson.eigenvalues(state, cfg.c)
    s, g = dyson.decompose(pair)
    assert np.max(np.abs(s - (state.b1 + state.b2))) < 1e-12
    resid = g * g - (state.b1 - state.b2) ** 2 - 2.0 * cfg.c * state.xi**2
    assert np.max(np.abs(resid)) < 1e-12


def test_eigenvalue_ordering_holds_on_paths():
    rng = np.random.default_rng(72)
    for c in (0.0, 0.5, 1.0, 2.0):
        cfg = MatrixProcessConfig(c, 1.0, tuple(np.linspace(0.1, 1.0, 50)))
        lam1, lam2 = dyson.eigen_paths(rng, cfg)
        assert np.all(lam1.values >= lam2.values)


def test_zero_coupling_is_order_statistics_pathwise():
    rng = np.random.default_rng(73)
    cfg = MatrixProcessConfig(0.0, 2.0, tuple(np.linspace(0.1, 3.0, 120)))
    state = dyson.simulate_drivers(rng, cfg)
    pair = dyson.eigenvalues(state, 0.0)
    # rotation arithmetic rounds, so agreement is to machine precision
    np.testing.assert_allclose(pair.lambda1, np.maximum(state.b1, state.b2), atol=1e-14)
    np.testing.assert_allclose(pair.lambda2, np.minimum(state.b1, state.b2), atol=1e-14)


def test_gap_is_monotone_in_coupling_on_shared_drivers():
    rng = np.random.default_rng(74)
    cfg = MatrixProcessConfig(1.0, 1.0, tuple(np.linspace(0.1, 2.0, 80)))
    state = dyson.simulate_drivers(rng, cfg)
    gaps = [dyson.decompose(dyson.eigenvalues(state, c))[1] for c in (0.0, 0.5, 1.0)]
    assert np.all(gaps[1] >= gaps[0]) and np.all(gaps[2] >= gaps[1])


def test_driver_moments():
    rng = np.random.default_rng(75)
    cfg = MatrixProcessConfig(1.0, 2.5, (0.7,))
    b1 = np.empty(3000)
    xisq = np.empty(3000)
    for i in range(b1.size):
        state = dyson.simulate_drivers(rng, cfg)
        b1[i] = state.b1[0]
        xisq[i] = state.xi[0] ** 2
    t = cfg.times[0]
    assert abs(np.mean(b1)) < 4.0 * np.sqrt(t / b1.size)
    assert np.var(b1) == pytest.approx(t, rel=0.15)
    # E[xi^2] = delta t, Var[xi^2] = 2 delta t^2 from zero
    assert np.mean(xisq) == pytest.approx(cfg.delta * t, abs=4.0 * np.sqrt(2 * cfg.delta * t**2 / b1.size))
    corr = np.corrcoef(b1, xisq)[0, 1]
    assert abs(corr) < 4.0 / np.sqrt(b1.size)


def test_vector_offdiag_matches_scalar_reduction():
    rng = np.random.default_rng(76)
    for size in (1, 2, 4):
        for _ in range(20):
            v = rng.normal(size=size)
            b1, b2 = rng.normal(size=2)
            c = rng.uniform(0.0, 2.0)
            got = dyson.eigenvalues_from_vector_offdiag(b1, b2, v, c)
            want = dyson.eigenvalues(DriverState(b1, b2, float(np.linalg.norm(v))), c)
            assert got.lambda1 == want.lambda1 and got.lambda2 == want.lambda2


def test_vector_offdiag_hand_evaluated_point():
    # |v| = 5 and c = 2 make the offdiagonal magnitude 5, so the spectrum
    # of [[0, 5], [5, 0]] is +-5
    pair = dyson.eigenvalues_from_vector_offdiag(0.0, 0.0, (3.0, 4.0), 2.0)
    assert pair.lambda1 == pytest.approx(5.0, rel=1e-15)
    assert pair.lambda2 == pytest.approx(-5.0, rel=1e-15)


def test_vector_offdiag_zero_vector_is_order_statistics():
    pair = dyson.eigenvalues_from_vector_offdiag(-1.0, 2.0, (0.0, 0.0, 0.0, 0.0), 1.3)
    assert (pair.lambda1, pair.lambda2) == (2.0, -1.0)


def test_vector_offdiag_rotation_invariant():
    rng = np.random.default_rng(77)
    v = rng.normal(size=4)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    a = dyson.eigenvalues_from_vector_offdiag(0.4, -0.2, v, 1.0)
    b = dyson.eigenvalues_from_vector_offdiag(0.4, -0.2, q @ v, 1.0)
    assert a.lambda1 == pytest.approx(b.lambda1, rel=1e-12)
    assert a.lambda2 == pytest.approx(b.lambda2, rel=1e-12)


def test_vector_offdiag_rejects_bad_length():
    with pytest.raises(DomainError):
        dyson.eigenvalues_from_vector_offdiag(0.0, 0.0, (1.0, 2.0, 3.0), 1.0)


def test_config_validation():
    with pytest.raises(DomainError):
        MatrixProcessConfig(-1.0, 1.0, (1.0,))
    with pytest.raises(DomainError):
        MatrixProcessConfig(1.0, 0.0, (1.0,))
    with pytest.raises(DomainError):
        MatrixProcessConfig(1.0, 1.0, ())
    with pytest.raises(DomainError):
        MatrixProcessConfig(1.0, 1.0, (1.0, 0.5))


def test_sde_sum_variance_grows_like_2t():
    rng = np.random.default_rng(78)
    finals = np.empty(4000)
    for i in range(finals.size):
        lam1, lam2 = dyson.integrate_dyson_sde(rng, 1.0, (0.5, 1.0))
        finals[i] = lam1.values[-1] + lam2.values[-1]
    assert np.var(finals) == pytest.approx(2.0, rel=0.12)
    assert abs(np.mean(finals)) < 4.0 * np.sqrt(2.0 / finals.size)


def test_sde_gap_stays_positive():
    rng = np.random.default_rng(79)
    times = tuple(np.linspace(1e-4, 1.0, 2000))
    for _ in range(500):
        lam1, lam2 = dyson.integrate_dyson_sde(rng, 1.0, times)
        assert np.all(lam1.values - lam2.values > 0.0)


def test_sde_accepts_ordered_initial_state():
    rng = np.random.default_rng(80)
    lam1, lam2 = dyson.integrate_dyson_sde(rng, 2.0, (0.5,), initial=EigenPair(2.0, 1.0))
    assert lam1.values[0] > lam2.values[0]


def test_sde_rejects_bad_inputs():
    rng = np.random.default_rng(81)
    with pytest.raises(DomainError):
        dyson.integrate_dyson_sde(rng, 0.0, (1.0,))
    with pytest.raises(DomainError):
        dyson.integrate_dyson_sde(rng, 1.0, (2.0, 1.0))


def test_sde_matches_matrix_model_at_unit_time():
    n = 20_000
    out = {}
    for tag, draw in (
        ("sde", lambda r: dyson.integrate_dyson_sde(r, 1.0, (1.0,))),
        ("mat", lambda r: dyson.eigen_paths(r, MatrixProcessConfig(1.0, 1.0, (1.0,)))),
    ):
        rng = np.random.default_rng(82)
        lam1 = np.empty(n)
        gap = np.empty(n)
        for i in range(n):
            a, b = draw(rng)
            lam1[i] = a.values[0]
            gap[i] = a.values[0] - b.values[0]
        out[tag] = (lam1, gap)
    for k in (0, 1):
        rep = stattest.ks_two_sample(out["sde"][k], out["mat"][k], alpha=0.001, seed=0)
        assert rep.verdict == "consistent"


def test_sde_gap_is_scaled_bessel_one_plus_delta():
    n = 20_000
    rng = np.random.default_rng(83)
    gap = np.empty(n)
    for i in range(n):
        lam1, lam2 = dyson.integrate_dyson_sde(rng, 1.0, (1.0,))
        gap[i] = lam1.values[0] - lam2.values[0]
    ref = np.sqrt(besq.sample_transitions(rng, BesqParams(2.0), 1.0, np.zeros(n)))
    rep = stattest.ks_two_sample(gap / np.sqrt(2.0), ref, alpha=0.001, seed=0)
    assert rep.verdict == "consistent"


def test_simulation_is_deterministic_per_seed():
    cfg = MatrixProcessConfig(0.5, 1.0, (0.3, 0.9))
    a = dyson.eigen_paths(np.random.default_rng(84), cfg)
    b = dyson.eigen_paths(np.random.default_rng(84), cfg)
    np.testing.assert_array_equal(a[0].values, b[0].values)
    np.testing.assert_array_equal(a[1].values, b[1].values)
