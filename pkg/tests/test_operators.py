import math

import pytest

from jainops import (
    JainParams,
    TestFunction,
    apply_jain,
    apply_phillips,
    basis_moment_integral,
    builtin_function,
    central_moment_derived,
    central_moment_series,
    integrate_halfline,
    jain_basis,
    monomial,
    t_moment_closed,
    t_moment_general,
    t_moment_series,
)
from conftest import (
    MOMENT_BETAS,
    MOMENT_NS,
    MOMENT_XS,
    STANDARD_BETAS,
    STANDARD_NS,
    STANDARD_XS,
)


class TestSamplingOperator:
    def test_reproduces_constants(self, cfg):
        p = JainParams(3.0, 0.5)
        assert apply_jain(p, builtin_function("const"), 2.0, cfg) == pytest.approx(
            1.0, abs=10 * cfg.tail_tol
        )

    def test_first_moment(self, cfg):
        p = JainParams(4.0, 0.25)
        got = apply_jain(p, builtin_function("linear"), 1.0, cfg)
        assert got == pytest.approx(4.0 / 3.0, rel=1e-11)

    def test_poisson_second_moment(self, cfg):
        p = JainParams(10.0, 0.0)
        got = apply_jain(p, builtin_function("square"), 2.0, cfg)
        assert got == pytest.approx(4.2, rel=1e-11)

    def test_value_at_origin_is_f_of_zero(self, cfg):
        p = JainParams(5.0, 0.25)
        f = builtin_function("exp-neg")
        assert apply_jain(p, f, 0.0, cfg) == pytest.approx(1.0)


class TestIntegralOperator:
    @pytest.mark.parametrize("n", STANDARD_NS)
    @pytest.mark.parametrize("beta", STANDARD_BETAS)
    @pytest.mark.parametrize("x", STANDARD_XS)
    def test_preserves_constants_on_grid(self, n, beta, x, cfg):
        p = JainParams(n, beta)
        got = apply_phillips(p, builtin_function("const"), x, cfg)
        assert abs(got - 1.0) <= 10 * cfg.tail_tol

    def test_value_at_origin_is_f_of_zero(self, cfg):
        p = JainParams(5.0, 0.25)
        f = builtin_function("exp-neg")
        assert apply_phillips(p, f, 0.0, cfg) == pytest.approx(1.0)

    def test_positivity(self, cfg):
        p = JainParams(2.0, 0.5)
        f = builtin_function("abs-sin")
        for x in (0.1, 1.0, 3.0):
            assert apply_phillips(p, f, x, cfg) >= 0.0

    def test_linearity(self, cfg):
        p = JainParams(3.0, 0.25)
        x = 1.2
        f = builtin_function("exp-neg")
        g = builtin_function("sin")
        combo = TestFunction(
            eval=lambda t: 2.5 * math.exp(-t) + math.sin(t),
            label="combo",
            is_bounded=True,
            sup_norm_hint=3.5,
        )
        lhs = apply_phillips(p, combo, x, cfg)
        rhs = 2.5 * apply_phillips(p, f, x, cfg) + apply_phillips(p, g, x, cfg)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-10)

    def test_polynomial_route_matches_quadrature_route(self, cfg):
        # same operator through the closed moment integrals and through
        # adaptive quadrature of the same inner products
        p = JainParams(5.0, 0.4)
        poly_f = builtin_function("linear")
        quad_f = TestFunction(eval=lambda t: t, label="linear-by-quad", is_bounded=False)
        a = apply_phillips(p, poly_f, 1.0, cfg)
        b = apply_phillips(p, quad_f, 1.0, cfg)
        assert a == pytest.approx(b, rel=1e-9)

    def test_monomial_images_approach_the_moment_polynomials(self, cfg):
        # the integral-weight ratios converge to the ratio polynomials in
        # the large-index limit, so the operator's monomial images approach
        # the closed moment forms as n grows (they differ visibly at n = 5)
        f = builtin_function("linear")
        gaps = []
        for n in (5.0, 20.0, 80.0):
            p = JainParams(n, 0.4)
            got = apply_phillips(p, f, 1.0, cfg)
            closed = t_moment_closed(1).eval(1.0, 0.4, n)
            gaps.append(abs(got - closed) / closed)
        assert gaps[0] > 1e-3  # genuinely different at small n
        assert gaps[1] < 1e-4
        assert gaps[2] < 1e-9

    def test_exp_neg_against_dense_brute_force(self, cfg):
        # independent brute force: fresh quadrature per index with a tight
        # tolerance and a fixed generous index cap
        from jainops import SeriesQuadConfig

        p = JainParams(3.0, 0.25)
        x = 0.5
        f = builtin_function("exp-neg")
        got = apply_phillips(p, f, x, cfg)
        tight = SeriesQuadConfig(quad_rel_tol=1e-12)
        bound = sum(
            integrate_halfline(
                lambda t, _k=k: jain_basis(p, _k - 1, t) * math.exp(-t), tight,
                breakpoints=[max((k - 1) * 0.25 - 20, 0.1), (k - 1) * 0.25 + 20],
            )
            / basis_moment_integral(p, k, 0)
            * jain_basis(p, k, x)
            for k in range(1, 400)
        ) + math.exp(-p.n * x)
        assert got == pytest.approx(bound, abs=1e-8)

    def test_ratio_cache_is_reused_across_points(self, cfg):
        p = JainParams(4.0, 0.25)
        f = builtin_function("sin")
        apply_phillips(p, f, 1.0, cfg)
        cached = len(f._moment_cache)
        assert cached > 0
        apply_phillips(p, f, 0.5, cfg)  # smaller truncation index: all cached
        assert len(f._moment_cache) == cached


class TestMomentSeries:
    @pytest.mark.parametrize("n", MOMENT_NS)
    @pytest.mark.parametrize("beta", MOMENT_BETAS)
    @pytest.mark.parametrize("x", MOMENT_XS)
    def test_t_moment_series_matches_closed_forms(self, n, beta, x, cfg):
        p = JainParams(n, beta)
        for r in range(4):
            series = t_moment_series(p, r, x, cfg)
            closed = t_moment_closed(r).eval(x, beta, n)
            assert series == pytest.approx(closed, rel=1e-9)

    def test_order_zero_is_one(self, cfg):
        p = JainParams(6.0, 0.5)
        assert t_moment_series(p, 0, 2.0, cfg) == pytest.approx(1.0, abs=1e-10)

    def test_order_one_at_beta_zero_is_x(self, cfg):
        p = JainParams(9.0, 0.0)
        assert t_moment_series(p, 1, 1.7, cfg) == pytest.approx(1.7, rel=1e-11)

    def test_high_order_against_symbolic_construction(self, cfg):
        p = JainParams(4.0, 0.5)
        series = t_moment_series(p, 4, 1.0, cfg)
        symbolic = t_moment_general(4).eval(1.0, 0.5, 4.0)
        assert series == pytest.approx(symbolic, rel=1e-9)


class TestCentralMomentSeries:
    def test_order_zero(self, cfg):
        p = JainParams(5.0, 0.25)
        assert central_moment_series(p, 0, 1.0, cfg) == pytest.approx(1.0, abs=1e-10)

    def test_second_order_at_beta_zero(self, cfg):
        p = JainParams(10.0, 0.0)
        assert central_moment_series(p, 2, 1.0, cfg) == pytest.approx(0.2, rel=1e-9)

    @pytest.mark.parametrize("r", (1, 2, 3, 4, 5))
    def test_matches_the_binomial_construction(self, r, cfg):
        p = JainParams(8.0, 0.25)
        series = central_moment_series(p, r, 1.0, cfg)
        symbolic = central_moment_derived(r).eval(1.0, 0.25, 8.0)
        assert series == pytest.approx(symbolic, rel=1e-9, abs=1e-12)


class TestMonomialHelper:
    def test_monomial_metadata(self):
        m3 = monomial(3)
        assert m3.poly_coeffs == (0.0, 0.0, 0.0, 1.0)
        assert not m3.is_bounded
        assert m3.eval(2.0) == 8.0
        assert m3.d1(2.0) == 12.0
        assert m3.d2(2.0) == 12.0

    def test_unknown_builtin(self):
        with pytest.raises(KeyError):
            builtin_function("nope")
