import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import polmax as pm

E1 = math.exp(-1.0)


class TestPoisson:
    def test_vacuum(self):
        dist = pm.poisson_distribution(0.0, 5)
        assert_allclose(dist.probs, [1, 0, 0, 0, 0, 0], atol=0)
        assert dist.tail_bound == 0.0
        assert dist.declared_mean == 0.0

    def test_small_truncation_values(self):
        dist = pm.poisson_distribution(1.0, 2)
        assert_allclose(dist.probs, [E1, E1, E1 / 2], rtol=1e-14)
        assert_allclose(dist.tail_bound, 0.0803013970713942, atol=1e-12)

    def test_normalization_and_mean_at_large_dim(self):
        dist = pm.poisson_distribution(4.0, 60)
        assert abs(dist.probs.sum() - 1.0) <= 1e-12
        mean, _ = pm.distribution_moments(dist)
        assert abs(mean - 4.0) <= 1e-9

    @pytest.mark.parametrize("nbar", [0.5, 1.0, 5.0, 10.0])
    def test_poissonian_mandel_q_is_zero(self, nbar):
        dim = int(nbar + 20.0 * math.sqrt(nbar)) + 1
        q = pm.mandel_q(pm.poisson_distribution(nbar, dim))
        assert abs(q) <= 1e-9

    def test_stable_at_huge_mean(self):
        nbar = 1e4
        dist = pm.poisson_distribution(nbar, pm.poisson_dim_for_tail(nbar))
        assert np.all(np.isfinite(dist.probs))
        assert abs(dist.probs.sum() - 1.0) <= 1e-12
        assert abs(pm.mandel_q(dist)) <= 1e-6

    def test_rejects_negative_arguments(self):
        with pytest.raises(ValueError):
            pm.poisson_distribution(-1.0, 5)
        with pytest.raises(ValueError):
            pm.poisson_distribution(1.0, -1)


class TestThermal:
    def test_vacuum(self):
        assert_allclose(pm.thermal_distribution(0.0, 3).probs, [1, 0, 0, 0], atol=0)

    def test_geometric_halving(self):
        dist = pm.thermal_distribution(1.0, 3)
        assert_allclose(dist.probs, [0.5, 0.25, 0.125, 0.0625], rtol=1e-14)
        assert_allclose(dist.tail_bound, 0.0625, rtol=1e-12)

    def test_mandel_q_equals_mean(self):
        q = pm.mandel_q(pm.thermal_distribution(3.0, 200))
        assert abs(q - 3.0) <= 1e-6

    def test_moments(self):
        mean, var = pm.distribution_moments(pm.thermal_distribution(1.0, 200))
        assert abs(mean - 1.0) <= 1e-9
        assert abs(var - 2.0) <= 1e-9

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            pm.thermal_distribution(-0.5, 10)


class TestTwinBeam:
    # tanh(xi)^2 = 1/2 at this squeezing
    XI_HALF = math.atanh(math.sqrt(0.5))

    def test_vacuum(self):
        assert_allclose(pm.twin_beam_distribution(0.0, 4).probs, [1, 0, 0, 0, 0], atol=0)

    def test_half_lambda_values(self):
        dist = pm.twin_beam_distribution(self.XI_HALF, 4)
        assert_allclose(dist.probs, [0.5, 0, 0.25, 0, 0.125], rtol=1e-12, atol=0)

    @pytest.mark.parametrize("xi", [0.2, 0.7, 1.3, 2.0])
    def test_odd_numbers_never_populated(self, xi):
        dist = pm.twin_beam_distribution(xi, 31)
        assert np.all(dist.probs[1::2] == 0.0)

    @pytest.mark.parametrize("xi", [0.3, 0.9, 1.7])
    def test_declared_mean_matches_moments(self, xi):
        dist = pm.twin_beam_distribution(xi, pm.twin_beam_dim_for_tail(xi))
        mean, _ = pm.distribution_moments(dist)
        assert abs(mean - dist.declared_mean) <= 1e-9
        assert dist.declared_mean == 2.0 * math.sinh(xi) ** 2

    def test_xi_for_mean_roundtrip(self):
        xi = pm.twin_beam_xi_for_mean(7.0)
        assert abs(2.0 * math.sinh(xi) ** 2 - 7.0) <= 1e-12

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            pm.twin_beam_distribution(-0.1, 4)


class TestSu2Coefficients:
    def test_equator_single_photon(self):
        coeffs = pm.su2_coherent_coefficients(1, math.pi / 2, 0.0)
        assert_allclose(coeffs, [1 / math.sqrt(2), 1 / math.sqrt(2)], rtol=1e-15)

    def test_pole_concentrates_all_photons(self):
        assert_allclose(pm.su2_coherent_coefficients(3, 0.0, 0.0), [0, 0, 0, 1], atol=0)
        # math.pi/2 does not land exactly on the zero of cos, so the
        # suppressed amplitudes are only ~1e-16 rather than exactly 0
        assert_allclose(pm.su2_coherent_coefficients(3, math.pi, 0.0), [1, 0, 0, 0], atol=1e-15)

    @pytest.mark.parametrize("n,theta,phi", [(20, 1.1, 2.3), (75, 0.4, 5.0), (200, 2.7, 1.0)])
    def test_unit_norm(self, n, theta, phi):
        coeffs = pm.su2_coherent_coefficients(n, theta, phi)
        assert abs(np.sum(np.abs(coeffs) ** 2) - 1.0) <= 1e-12

    @pytest.mark.parametrize("phi", [0.0, 0.4, 2.2, 6.0])
    def test_magnitudes_independent_of_phi(self, phi):
        base = np.abs(pm.su2_coherent_coefficients(9, 1.2, 0.0))
        assert_allclose(np.abs(pm.su2_coherent_coefficients(9, 1.2, phi)), base, rtol=1e-15)

    def test_phase_convention(self):
        coeffs = pm.su2_coherent_coefficients(2, math.pi / 2, 0.7)
        assert_allclose(np.angle(coeffs[1]), -0.7, rtol=1e-12)

    def test_rejects_out_of_range_theta(self):
        with pytest.raises(ValueError):
            pm.su2_coherent_coefficients(3, -0.1, 0.0)
        with pytest.raises(ValueError):
            pm.su2_coherent_coefficients(3, 3.2, 0.0)


class TestMoments:
    def test_delta(self):
        mean, var = pm.distribution_moments(pm.n_photon_distribution(5))
        assert (mean, var) == (5.0, 0.0)

    def test_optimal_distribution_variance(self):
        mean, var = pm.distribution_moments(pm.optimal_distribution(4.0))
        assert abs(mean - 4.0) <= 1e-12
        assert abs(var - 4.8) <= 1e-12

    def test_mandel_q_of_optimal(self):
        q = pm.mandel_q(pm.optimal_distribution(3.0))
        assert abs(q) <= 1e-12

    def test_mandel_q_rejects_zero_mean(self):
        with pytest.raises(ValueError):
            pm.mandel_q(pm.n_photon_distribution(0))


def _certified_cases():
    for nbar in (0.3, 1.0, 7.5, 42.0):
        yield pm.poisson_distribution(nbar, pm.poisson_dim_for_tail(nbar))
        yield pm.thermal_distribution(nbar, pm.thermal_dim_for_tail(nbar))
    for xi in (0.4, 1.1, 2.3):
        yield pm.twin_beam_distribution(xi, pm.twin_beam_dim_for_tail(xi))
    yield pm.n_photon_distribution(17)
    yield pm.optimal_distribution(6.0)


@pytest.mark.parametrize("dist", list(_certified_cases()), ids=lambda d: f"mean={d.declared_mean:g}")
def test_invariants_at_certified_truncation(dist):
    assert np.all(dist.probs >= 0.0)
    assert abs(dist.probs.sum() - 1.0) <= max(dist.tail_bound, 1e-12)
    mean, _ = pm.distribution_moments(dist)
    assert abs(mean - dist.declared_mean) <= max(dist.truncation_dim * dist.tail_bound, 1e-9)


@pytest.mark.parametrize(
    "nbar,dim_fn,tail_fn",
    [
        (0.5, pm.poisson_dim_for_tail, None),
        (25.0, pm.poisson_dim_for_tail, None),
        (3.0, pm.thermal_dim_for_tail, lambda nbar, d: (nbar / (nbar + 1)) ** (d + 1)),
        (400.0, pm.thermal_dim_for_tail, lambda nbar, d: (nbar / (nbar + 1)) ** (d + 1)),
    ],
)
def test_dim_helpers_certify_tail(nbar, dim_fn, tail_fn):
    from scipy import special

    dim = dim_fn(nbar)
    if tail_fn is None:
        tail = float(special.gammainc(dim + 1.0, nbar))
    else:
        tail = tail_fn(nbar, dim)
    assert tail < 1e-12


class TestCustom:
    def test_accepts_and_renormalizes_tiny_drift(self):
        drift = 1.0 + 5e-10
        dist = pm.custom_distribution([0.25 * drift, 0.75 * drift])
        assert abs(dist.probs.sum() - 1.0) <= 1e-15
        assert abs(dist.declared_mean - 0.75) <= 1e-12

    def test_rejects_larger_drift(self):
        with pytest.raises(ValueError):
            pm.custom_distribution([0.25, 0.7500001])

    def test_rejects_mismatched_declared_mean(self):
        with pytest.raises(ValueError):
            pm.custom_distribution([0.5, 0.5], declared_mean=0.75)

    def test_rejects_negative_entries(self):
        with pytest.raises(ValueError):
            pm.custom_distribution([1.1, -0.1])


class TestStateSpecs:
    def test_dispatch(self):
        assert pm.state_distribution(pm.NPhotonPure(3, 1)).probs[3] == 1.0
        assert pm.state_distribution(pm.Su2Coherent(2, 1.0, 0.5)).probs[2] == 1.0
        poisson = pm.state_distribution(pm.QuadratureCoherent(2.0))
        assert abs(poisson.declared_mean - 2.0) == 0.0
        assert poisson.tail_bound < 1e-12
        twin = pm.state_distribution(pm.TwinBeam(0.8))
        assert np.all(twin.probs[1::2] == 0.0)
        thermal = pm.state_distribution(pm.ThermalTotal(1.0))
        assert_allclose(thermal.probs[0], 0.5, rtol=1e-14)
        custom = pm.Custom(pm.custom_distribution([0.5, 0.5]))
        assert pm.state_distribution(custom) is custom.dist

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            pm.NPhotonPure(2, 3)
        with pytest.raises(ValueError):
            pm.Su2Coherent(2, 4.0, 0.0)
        with pytest.raises(ValueError):
            pm.Su2Coherent(2, 1.0, 6.5)
        with pytest.raises(ValueError):
            pm.QuadratureCoherent(-1.0)
        with pytest.raises(ValueError):
            pm.TwinBeam(-0.2)
        with pytest.raises(ValueError):
            pm.ThermalTotal(-3.0)

    def test_twin_beam_mean(self):
        spec = pm.TwinBeam(0.9)
        assert spec.mean_photons == 2.0 * math.sinh(0.9) ** 2


def test_probabilities_are_immutable():
    dist = pm.poisson_distribution(1.0, 10)
    with pytest.raises(ValueError):
        dist.probs[0] = 0.5


def test_distribution_rejects_inconsistent_sum():
    with pytest.raises(ValueError):
        pm.PhotonDistribution(np.array([0.5, 0.4]), 0.4, tail_bound=0.0)
