import math
from fractions import Fraction
from pathlib import Path

import pytest

from jainops import (
    ExactPoly,
    ExpPoly,
    RangeError,
    asymptotic_derivative_coefficients,
    central_moment_closed,
    central_moment_derived,
    central_moment_discrepancy,
    central_moment_exp_coefficient,
    expfree_coefficient,
    expfree_moment_closed,
    expfree_moment_recur,
    f_recurrence_coefficient,
    f_recurrence_coefficient_quoted,
    jain_moment_closed,
    large_n_limit,
    poly_eval,
    ratio_poly_closed,
    ratio_poly_recur,
    t_moment_closed,
    t_moment_general,
)

GOLDEN_DIR = Path(__file__).parent / "golden"

K = ExactPoly.main()
X = ExactPoly.main()
B = ExactPoly.beta()
NI = ExactPoly.ninv()
OMB = ExactPoly.one_minus_beta()


class TestRatioPolynomials:
    def test_order_zero_is_one(self):
        assert ratio_poly_closed(0) == ExactPoly.const(1)

    def test_order_one_reduces_to_k_over_n_at_beta_zero(self):
        assert ratio_poly_closed(1).at_beta_zero() == K * NI

    def test_order_two_table_entry(self):
        expected = NI**2 * (
            OMB**2 * K**2
            + ExactPoly.beta_series([1, 4, -2]) * K
            + (B**2 * (3 - B)).over_one_minus_beta()
        )
        assert ratio_poly_closed(2) == expected

    @pytest.mark.parametrize("r", range(6))
    def test_recurrence_reproduces_every_closed_form(self, r):
        assert ratio_poly_recur(r) == ratio_poly_closed(r)

    @pytest.mark.parametrize("r", range(9))
    def test_three_term_recurrence_residual_is_the_zero_polynomial(self, r):
        lhs = ratio_poly_recur(r + 2).times_n_power(2)
        rhs = (OMB * (K - 1) + (r + 2)) * ratio_poly_recur(r + 1).times_n_power(1) + B * (
            r + 2
        ) * (K - 1) * ratio_poly_recur(r)
        assert (lhs - rhs).is_zero

    @pytest.mark.parametrize("r", range(9))
    def test_degree_law(self, r):
        p = ratio_poly_recur(r)
        assert p.max_main_degree() == r
        lead = p.main_coefficients()[r]
        assert lead == OMB**r * NI**r

    def test_order_six_leading_coefficient(self):
        lead = ratio_poly_recur(6).main_coefficients()[6]
        assert lead == OMB**6 * NI**6

    def test_closed_range_is_enforced(self):
        with pytest.raises(RangeError):
            ratio_poly_closed(6)
        with pytest.raises(RangeError):
            ratio_poly_recur(-1)

    def test_beta_zero_collapse_is_rising_factorial(self):
        # at beta = 0 the order-r polynomial is k(k+1)...(k+r-1)/n^r
        for r in range(5):
            prod = ExactPoly.const(1)
            for i in range(r):
                prod = prod * (K + i)
            assert ratio_poly_recur(r).at_beta_zero() == prod * NI**r


class TestJainMoments:
    def test_mass(self):
        assert jain_moment_closed(0) == ExactPoly.const(1)

    def test_first_moment(self):
        assert jain_moment_closed(1) == X.over_one_minus_beta()

    def test_second_moment_at_beta_zero(self):
        value = poly_eval(jain_moment_closed(2), 1.0, 0.0, 10.0)
        assert value == pytest.approx(1.1)

    def test_range(self):
        with pytest.raises(RangeError):
            jain_moment_closed(6)


class TestTMoments:
    def test_order_zero(self):
        assert t_moment_closed(0) == ExpPoly(1, 0)

    def test_order_one_at_beta_zero_is_x(self):
        collapsed = t_moment_closed(1).at_beta_zero()
        assert collapsed == ExpPoly(X, 0)

    def test_order_two_at_beta_zero(self):
        collapsed = t_moment_closed(2).at_beta_zero()
        assert collapsed == ExpPoly(X**2 + 2 * X * NI, 0)

    def test_order_three_at_beta_zero(self):
        collapsed = t_moment_closed(3).at_beta_zero()
        assert collapsed == ExpPoly(X**3 + 6 * X**2 * NI + 6 * X * NI**2, 0)

    @pytest.mark.parametrize("r", range(4))
    def test_general_construction_matches_closed_table(self, r):
        assert t_moment_general(r) == t_moment_closed(r)

    @pytest.mark.parametrize("r", range(6))
    def test_exp_coefficient_closed_form(self, r):
        # exp coefficient is delta_{r,0} - (beta/n)^r (r+1-beta)/(1-beta)
        expected = -((B * NI) ** r * (r + 1 - B)).over_one_minus_beta()
        if r == 0:
            expected = expected + 1
        assert t_moment_general(r).exp_coeff == expected

    def test_poly_part_limit_at_large_x_has_no_exp_term(self):
        # for r = 1 the polynomial part is exactly x + beta(2-beta)/(n(1-beta))
        expected = X + (B * (2 - B) * NI).over_one_minus_beta()
        assert t_moment_general(1).poly_part == expected

    def test_range_error_names_the_limiting_table(self):
        with pytest.raises(RangeError, match="jain_moment_closed stops at 5"):
            t_moment_general(6)

    def test_closed_table_range(self):
        with pytest.raises(RangeError):
            t_moment_closed(4)


class TestExpFreeMoments:
    def test_order_zero_is_one(self):
        assert expfree_moment_closed(0) == ExactPoly.const(1)

    @pytest.mark.parametrize("r", range(6))
    def test_equals_poly_part_of_t_moment(self, r):
        assert expfree_moment_closed(r) == t_moment_general(r).poly_part

    def test_first_order_coefficient_table_row(self):
        for r in range(1, 6):
            assert expfree_coefficient(1, r) == ExactPoly.beta_series([r - 1, 2, -1])

    def test_coefficient_extraction_reproduces_the_table(self):
        # reading C(r,j) b_j x^{r-j}/(n(1-beta))^j coefficients back out of
        # the closed forms must reproduce every tabulated b_j
        for r in range(1, 6):
            split = expfree_moment_closed(r).main_coefficients()
            for j in range(r):
                got = split[r - j] * OMB**j
                expected = math.comb(r, j) * expfree_coefficient(j, r) * NI**j
                assert got == expected

    @pytest.mark.parametrize("r", (2, 3, 4, 5))
    def test_recurrence_matches_closed_form_exactly(self, r):
        assert expfree_moment_recur(r) == expfree_moment_closed(r)

    def test_quoted_recurrence_table_deviates_for_high_orders(self):
        # the (r-2)(r-3) prefactor in the quoted j = 2 row kills the term at
        # r = 3 outright; the exact prefactor is (r-1)(r-2)
        assert expfree_moment_recur(2, quoted_table=True) == expfree_moment_closed(2)
        mismatches = [
            r
            for r in (3, 4, 5)
            if expfree_moment_recur(r, quoted_table=True) != expfree_moment_closed(r)
        ]
        assert mismatches == [3, 4, 5]

    def test_quoted_vs_exact_coefficient_entries(self):
        differing = sorted(
            (j, r)
            for r in range(2, 6)
            for j in range(1, r)
            if f_recurrence_coefficient(j, r) != f_recurrence_coefficient_quoted(j, r)
        )
        assert differing == [(2, 3), (2, 4), (2, 5), (3, 5), (4, 5)]

    def test_range(self):
        with pytest.raises(RangeError):
            expfree_moment_recur(1)
        with pytest.raises(RangeError):
            expfree_moment_closed(6)
        with pytest.raises(RangeError):
            f_recurrence_coefficient(3, 3)


class TestCentralMoments:
    def test_first_central_moment_structure(self):
        f1 = central_moment_exp_coefficient(1)
        assert f1 == (B * (2 - B) * NI).over_one_minus_beta()
        assert central_moment_derived(1) == ExpPoly(f1, -f1)

    def test_order_zero_derived_is_one(self):
        assert central_moment_derived(0) == ExpPoly(1, 0)

    def test_vanishes_at_beta_zero_for_first_order(self):
        assert central_moment_derived(1).at_beta_zero().is_zero

    def test_second_moment_at_beta_zero(self):
        assert central_moment_derived(2).at_beta_zero() == ExpPoly(2 * X * NI, 0)

    @pytest.mark.parametrize("r", (1, 2))
    def test_reference_table_exact_for_low_orders(self, r):
        assert central_moment_closed(r) == central_moment_derived(r)

    def test_third_order_discrepancy_is_the_known_x_coefficient_slip(self):
        # reference table minus construction: exactly 9 beta^3 x /(n^2 (1-beta)^2)
        diff = central_moment_discrepancy(3)
        assert diff.exp_coeff.is_zero
        assert diff.poly_part == (9 * B**3 * X * NI**2).over_one_minus_beta(2)

    def test_fourth_order_discrepancy_sits_in_the_x_squared_row(self):
        diff = central_moment_discrepancy(4)
        assert diff.exp_coeff.is_zero
        expected = (
            4 * ExactPoly.beta_series([2, 4, -2, -3, 3]) * X**2 * NI**2
        ).over_one_minus_beta(2)
        assert diff.poly_part == expected

    def test_fifth_order_discrepancy_sits_in_the_x_row(self):
        diff = central_moment_discrepancy(5)
        assert diff.exp_coeff.is_zero
        expected = (
            5
            * ExactPoly.beta_series([-1, -10, -21, -4, 6])
            * X
            * NI**4
        ).over_one_minus_beta(4)
        assert diff.poly_part == expected

    def test_derived_fifth_order_x_row_matches_the_expfree_table(self):
        # the exact x-coefficient of mu_5 is 5 b_4^5 x/(n^4 (1-beta)^4), the
        # same beta-polynomial as the top exponential-free coefficient
        split = central_moment_derived(5).poly_part.main_coefficients()
        target = (5 * expfree_coefficient(4, 5) * NI**4).over_one_minus_beta(4)
        f5 = central_moment_exp_coefficient(5).main_coefficients()
        assert split[1] - f5[1] == target

    def test_range(self):
        with pytest.raises(RangeError):
            central_moment_closed(0)
        with pytest.raises(RangeError):
            central_moment_closed(6)


class TestLargeNLimits:
    def test_first_moment_drift(self):
        a_coeff, c_coeff = asymptotic_derivative_coefficients()
        assert a_coeff == (B * (2 - B)).over_one_minus_beta()
        assert c_coeff == X.over_one_minus_beta()

    def test_raw_second_moment_limit(self):
        limit = large_n_limit(t_moment_general(2) - ExpPoly(X**2, 0))
        assert limit == (2 * ExactPoly.beta_series([1, 2, -1]) * X).over_one_minus_beta()

    def test_divergent_scaling_is_rejected(self):
        from jainops import DomainError

        with pytest.raises(DomainError):
            large_n_limit(t_moment_general(1), scale=2)


class TestGoldenFiles:
    @pytest.mark.parametrize("r", range(6))
    def test_ratio_polys(self, r):
        path = GOLDEN_DIR / f"ratio_poly_r{r}.txt"
        assert ratio_poly_closed(r).to_text("k") + "\n" == path.read_text()

    @pytest.mark.parametrize("r", range(6))
    def test_expfree(self, r):
        path = GOLDEN_DIR / f"expfree_moment_r{r}.txt"
        assert expfree_moment_closed(r).to_text("x") + "\n" == path.read_text()

    @pytest.mark.parametrize("r", range(4))
    def test_t_moments(self, r):
        path = GOLDEN_DIR / f"t_moment_r{r}.txt"
        assert t_moment_closed(r).to_text("x") + "\n" == path.read_text()

    @pytest.mark.parametrize("r", range(1, 6))
    def test_central_moments(self, r):
        derived = GOLDEN_DIR / f"central_moment_r{r}.txt"
        reference = GOLDEN_DIR / f"central_moment_reference_r{r}.txt"
        assert central_moment_derived(r).to_text("x") + "\n" == derived.read_text()
        assert central_moment_closed(r).to_text("x") + "\n" == reference.read_text()
