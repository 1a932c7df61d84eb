import numpy as np
import pytest

from jastrow1d.oscillator import (MAX_ORBITAL, gauss_hermite_rule, graded_panel_rule,
                                  hermite_function_table, ho_derivatives, ho_eigenfunction)

SQRT_PI = np.sqrt(np.pi)

# chi_7(1.3) from a 40-digit mpmath evaluation of the defining formula
CHI7_AT_1P3 = 0.4060986642519053777861198


def analytic_moment(k: int) -> float:
    # integral of x^k exp(-x^2): (k-1)!! sqrt(pi) / 2^(k/2) for even k, 0 for odd
    if k % 2:
        return 0.0
    dfac = 1.0
    for j in range(1, k, 2):
        dfac *= j
    return SQRT_PI * dfac / 2 ** (k // 2)


class TestGaussHermite:
    def test_order_one(self):
        rule = gauss_hermite_rule(1)
        assert rule.nodes.tolist() == [0.0]
        assert rule.weights[0] == pytest.approx(SQRT_PI, abs=1e-14)

    def test_order_two(self):
        rule = gauss_hermite_rule(2)
        assert rule.nodes == pytest.approx([-np.sqrt(0.5), np.sqrt(0.5)], abs=1e-14)
        assert rule.weights == pytest.approx([0.8862269, 0.8862269], abs=1e-7)

    def test_second_moment_order_40(self):
        rule = gauss_hermite_rule(40)
        assert (rule.weights * rule.nodes**2).sum() == pytest.approx(SQRT_PI / 2, abs=1e-10)

    @pytest.mark.parametrize("order", [3, 8, 11, 20, 64])
    def test_polynomial_exactness(self, order):
        rule = gauss_hermite_rule(order)
        for k in range(0, min(2 * order - 1, 20) + 1):
            got = (rule.weights * rule.nodes**k).sum()
            cond = (rule.weights * np.abs(rule.nodes) ** k).sum()  # cancellation scale
            assert got == pytest.approx(analytic_moment(k), abs=1e-13 * cond + 1e-13)

    @pytest.mark.parametrize("order", [2, 7, 40, 128, 256])
    def test_structure_invariants(self, order):
        rule = gauss_hermite_rule(order)
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.max(np.abs(rule.nodes + rule.nodes[::-1])) <= 1e-12
        assert rule.weights.sum() == pytest.approx(SQRT_PI, abs=1e-10)
        assert np.all(rule.weights > 0)

    @pytest.mark.parametrize("order", [150, 512])
    def test_high_order_residuals(self, order):
        # raw weights may underflow up here; nodes and log-weights must stay sound
        rule = gauss_hermite_rule(order)
        assert np.all(np.isfinite(rule.nodes))
        assert np.all(np.isfinite(rule.log_weights))
        resid = hermite_function_table(order + 1, rule.nodes)[order]
        assert np.max(np.abs(resid)) < 1e-13

    def test_order_out_of_range(self):
        with pytest.raises(ValueError):
            gauss_hermite_rule(0)
        with pytest.raises(ValueError):
            gauss_hermite_rule(MAX_ORBITAL + 1)


class TestEigenfunctions:
    def test_ground_state_at_origin(self):
        assert ho_eigenfunction(0, 0.0) == pytest.approx(np.pi**-0.25, abs=1e-15)

    def test_odd_parity_zero(self):
        assert ho_eigenfunction(1, 0.0) == 0.0

    def test_against_high_precision_value(self):
        assert ho_eigenfunction(7, 1.3) == pytest.approx(CHI7_AT_1P3, abs=1e-12)

    @pytest.mark.parametrize("n", range(16))
    def test_parity(self, n):
        x = np.array([0.3, 1.7, 2.9])
        left = ho_eigenfunction(n, -x)
        right = (-1.0) ** n * ho_eigenfunction(n, x)
        assert np.max(np.abs(left - right)) <= 1e-13

    def test_orthonormality(self):
        rule = gauss_hermite_rule(48)
        table = hermite_function_table(15, rule.nodes)
        w = np.exp(rule.deweighted_log())
        overlap = np.einsum("mi,i,ni->mn", table, w, table)
        assert np.max(np.abs(overlap - np.eye(15))) < 1e-9


class TestDerivatives:
    def test_ground_state(self):
        val, d1, d2 = ho_derivatives(0, 0.0)
        assert val == pytest.approx(np.pi**-0.25, abs=1e-15)
        assert d1 == 0.0
        assert d2 == pytest.approx(-np.pi**-0.25, abs=1e-15)

    def test_first_excited_slope(self):
        # chi_1'(0) = sqrt(2) pi^(-1/4); cross-checked against central differences
        _, d1, d2 = ho_derivatives(1, 0.0)
        assert d1 == pytest.approx(np.sqrt(2.0) * np.pi**-0.25, abs=1e-14)
        assert d2 == 0.0
        h = 1e-5
        fd = (ho_eigenfunction(1, h) - ho_eigenfunction(1, -h)) / (2 * h)
        assert d1 == pytest.approx(fd, abs=1e-8)

    @pytest.mark.parametrize("n", range(16))
    @pytest.mark.parametrize("x", [-2.0, 0.7, 3.1])
    def test_second_derivative_vs_finite_difference(self, n, x):
        h = 1e-4
        vals = [ho_eigenfunction(n, x + k * h) for k in (-1, 0, 1)]
        fd2 = (vals[0] - 2 * vals[1] + vals[2]) / h**2
        assert ho_derivatives(n, x)[2] == pytest.approx(fd2, abs=1e-6)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            ho_eigenfunction(-1, 0.0)
        with pytest.raises(ValueError):
            ho_derivatives(MAX_ORBITAL, 0.0)


class TestPanels:
    def test_gaussian_integral(self):
        rule = graded_panel_rule(0.07, 12.0)
        got = (rule.weights * np.exp(-rule.nodes**2)).sum()
        assert got == pytest.approx(SQRT_PI / 2, abs=1e-13)

    def test_kinked_integrand(self):
        # integral of x exp(-x^2) over the positive axis
        rule = graded_panel_rule(0.07, 12.0)
        got = (rule.weights * rule.nodes * np.exp(-rule.nodes**2)).sum()
        assert got == pytest.approx(0.5, abs=1e-13)
