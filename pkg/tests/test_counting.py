import math

import numpy as np
import pytest

from llent.bethe import InvalidInputError
from llent.counting import (
    EULER_GAMMA,
    asymptotic_cumulants,
    balanced_probability_asymptotic,
    barnes_log_g,
    characteristic_function,
    counting_distribution,
    counting_model,
    cumulants,
    fisher_hartwig_f,
    gaussian_pk,
    overlap_matrix,
    variance_asymptotic,
)


class TestOverlapMatrix:
    def test_structure(self):
        g = overlap_matrix(4, 0.3)
        assert np.allclose(np.diag(g), 0.3)
        assert np.allclose(g, g.T)
        assert g[0, 1] == pytest.approx(math.sin(math.pi * 0.3) / math.pi)

    def test_eigenvalues_in_unit_interval(self):
        vals = np.linalg.eigvalsh(overlap_matrix(12, 0.4))
        assert vals.min() > -1e-12 and vals.max() < 1.0 + 1e-12

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            overlap_matrix(0, 0.5)
        with pytest.raises(InvalidInputError):
            overlap_matrix(3, 0.0)


class TestCharacteristicFunction:
    def test_alpha_zero_is_one(self):
        assert characteristic_function(overlap_matrix(5, 0.5), 0.0) == pytest.approx(1.0)

    def test_spectral_product_identity(self):
        # det(1 - (1-e^(ia)) Gamma) = prod_j (1 - (1-e^(ia)) g_j)
        gamma = overlap_matrix(6, 0.35)
        vals = np.linalg.eigvalsh(gamma)
        alpha = 1.3
        direct = characteristic_function(gamma, alpha)
        product = np.prod(1.0 - (1.0 - np.exp(1j * alpha)) * vals)
        assert direct == pytest.approx(product, abs=1e-12)


class TestDistribution:
    @pytest.mark.parametrize("n,ell", [(2, 0.5), (4, 0.3), (7, 0.5), (12, 0.25)])
    def test_valid_distribution(self, n, ell):
        pk = counting_distribution(overlap_matrix(n, ell))
        assert len(pk) == n + 1
        assert pk.sum() == pytest.approx(1.0, abs=1e-12)
        assert pk.min() > -1e-12

    def test_pair_half_ring_closed_form(self):
        pk = counting_distribution(overlap_matrix(2, 0.5))
        assert pk[1] == pytest.approx(0.5 + 2.0 / math.pi ** 2, abs=1e-14)

    def test_full_arc_is_certain(self):
        pk = counting_distribution(overlap_matrix(3, 1.0))
        assert pk[3] == pytest.approx(1.0, abs=1e-12)

    def test_mean_is_n_ell(self):
        model = counting_model(9, 0.4)
        assert model.cumulants[0] == pytest.approx(9 * 0.4, abs=1e-10)


class TestBarnesG:
    def test_special_values(self):
        # G(1) = G(2) = G(3) = 1, so ln G vanishes at z = 0, 1, 2
        for z in (0.0, 1.0, 2.0):
            assert barnes_log_g(z) == pytest.approx(0.0, abs=1e-13)

    def test_functional_equation(self):
        # ln G(1 + z) = ln Gamma(z) + ln G(z)
        z = 1.37
        assert barnes_log_g(z) == pytest.approx(
            math.lgamma(z) + barnes_log_g(z - 1.0), abs=1e-12)

    def test_against_mpmath(self):
        mpmath = pytest.importorskip("mpmath")
        for z in (0.05, 0.31, 0.5, 0.93, 1.5, 2.0):
            ref = float(mpmath.log(mpmath.barnesg(1.0 + z)))
            assert barnes_log_g(z) == pytest.approx(ref, abs=1e-12)

    def test_domain(self):
        with pytest.raises(InvalidInputError):
            barnes_log_g(-0.6)
        with pytest.raises(InvalidInputError):
            barnes_log_g(2.5)


class TestAsymptotics:
    def test_fisher_hartwig_tracks_exact(self):
        n = 150
        exact = characteristic_function(overlap_matrix(n, 0.5), 0.8)
        approx = fisher_hartwig_f(n, 0.5, 0.8)
        assert abs(approx - exact) / abs(exact) < 0.01

    def test_fisher_hartwig_domain(self):
        with pytest.raises(InvalidInputError):
            fisher_hartwig_f(50, 0.5, math.pi)

    def test_variance_formula(self):
        n = 80
        expected = math.log(2 * n * math.exp(EULER_GAMMA + 1.0)) / math.pi ** 2
        assert variance_asymptotic(n) == pytest.approx(expected, rel=1e-14)

    def test_cumulant_targets(self):
        k1, k2, k3, k4 = asymptotic_cumulants(64, 0.5)
        assert k1 == pytest.approx(32.0)
        assert k2 == pytest.approx(variance_asymptotic(64), rel=1e-14)
        assert k3 == 0.0
        assert k4 == pytest.approx(-3 * 1.2020569031595942854 / (2 * math.pi ** 4))

    def test_exact_cumulants_approach_targets(self):
        model = counting_model(150, 0.5)
        k1, k2, k3, k4 = cumulants(model)
        t1, t2, t3, t4 = asymptotic_cumulants(150, 0.5)
        assert k1 == pytest.approx(t1, abs=1e-8)
        assert k2 == pytest.approx(t2, rel=0.05)
        assert abs(k3) < 1e-8
        assert k4 == pytest.approx(t4, rel=0.05)

    def test_gaussian_and_balanced_asymptote(self):
        model = counting_model(120, 0.5)
        exact = model.pk[60]
        assert gaussian_pk(120, 60) == pytest.approx(exact, rel=0.03)
        assert balanced_probability_asymptotic(120) == pytest.approx(exact, rel=0.05)
