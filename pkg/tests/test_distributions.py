"""Law construction, expectations, and log-MGF against closed-form oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from selfnorm.distributions import (DensityLaw, DiscreteLaw, DistributionModel,
                                    DivergentError, EmpiricalLaw, Rademacher,
                                    StandardGaussian, UniformSymmetric,
                                    parse_distribution)

SQRT3 = math.sqrt(3.0)


def gauss_log_mgf2(l1, l2):
    # closed form for the standard normal: requires l2 > -1/2
    if 1.0 + 2.0 * l2 <= 0.0:
        return math.inf
    return l2 - 0.5 * math.log(1.0 + 2.0 * l2) + l1 * l1 / (2.0 * (1.0 + 2.0 * l2))


@pytest.fixture(scope="module")
def laws():
    return {
        "rademacher": Rademacher(),
        "gaussian": StandardGaussian(),
        "uniform": UniformSymmetric(SQRT3),
    }


class TestExpect:
    def test_rademacher_square(self, laws):
        assert laws["rademacher"].expect(lambda x: x * x) == 1.0

    def test_gaussian_fourth_moment(self, laws):
        assert laws["gaussian"].expect(lambda x: x ** 4) == pytest.approx(
            3.0, rel=1e-9)

    def test_uniform_fourth_moment(self, laws):
        # closed form a^4/5 with a = sqrt(3)
        assert laws["uniform"].expect(lambda x: x ** 4) == pytest.approx(
            SQRT3 ** 4 / 5.0, rel=1e-9)

    def test_discrete_matches_exact_sum(self):
        law = DiscreteLaw([(-2.0, 0.25), (0.0, 0.25), (1.0, 0.5)])
        expected = 0.25 * math.sin(-2.0) + 0.25 * math.sin(0.0) + 0.5 * math.sin(1.0)
        assert law.expect(math.sin) == expected

    def test_divergent_raises(self):
        # normalized density 2/(pi*(1+x^2)^2): variance 1, fourth moment infinite
        heavy = DensityLaw(lambda x: 2.0 / (math.pi * (1.0 + x * x) ** 2))
        with pytest.raises(DivergentError):
            heavy.expect(lambda x: x ** 4)


class TestLpNorm:
    def test_rademacher_any_p(self, laws):
        for p in (1.0, 2.5, 7.0, 64.0):
            assert laws["rademacher"].lp_norm(p) == pytest.approx(1.0, rel=1e-12)

    def test_gaussian_p2_and_p4(self, laws):
        assert laws["gaussian"].lp_norm(2.0) == pytest.approx(1.0, rel=1e-9)
        assert laws["gaussian"].lp_norm(4.0) == pytest.approx(3 ** 0.25, rel=1e-9)

    def test_gaussian_large_p_log_stable(self, laws):
        # closed form (2^{p/2} Gamma((p+1)/2)/sqrt(pi))^{1/p}
        p = 900.0
        expected = math.exp((0.5 * p * math.log(2.0)
                             + math.lgamma((p + 1) / 2)
                             - 0.5 * math.log(math.pi)) / p)
        assert laws["gaussian"].lp_norm(p) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("name", ["rademacher", "gaussian", "uniform"])
    def test_nondecreasing_in_p(self, laws, name):
        grid = [1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0]
        vals = [laws[name].lp_norm(p) for p in grid]
        assert all(b >= a - 1e-10 for a, b in zip(vals, vals[1:]))

    def test_p_below_one_rejected(self, laws):
        with pytest.raises(ValueError):
            laws["gaussian"].lp_norm(0.5)


class TestLogMgf2:
    @pytest.mark.parametrize("name", ["rademacher", "gaussian", "uniform"])
    def test_zero_at_origin(self, laws, name):
        assert laws[name].log_mgf2(0.0, 0.0) == 0.0

    def test_rademacher_ignores_quadratic_slot(self, laws):
        for l1, l2 in [(0.3, -5.0), (0.7, 0.0), (2.0, 13.0), (-1.1, 2.0)]:
            expected = abs(l1) + math.log1p(math.exp(-2 * abs(l1))) - math.log(2)
            assert laws["rademacher"].log_mgf2(l1, l2) == pytest.approx(
                expected, abs=1e-12)

    def test_gaussian_closed_form(self, laws):
        for l1, l2 in [(0.0, 0.5), (1.0, 1.0), (2.0, 0.1), (0.5, -0.3),
                       (100.0, 5000.0)]:
            assert laws["gaussian"].log_mgf2(l1, l2) == pytest.approx(
                gauss_log_mgf2(l1, l2), rel=1e-8, abs=1e-9)

    def test_gaussian_divergence(self, laws):
        assert laws["gaussian"].log_mgf2(0.0, -0.5) == math.inf
        assert laws["gaussian"].log_mgf2(1.0, -2.0) == math.inf

    @pytest.mark.parametrize("name", ["rademacher", "gaussian", "uniform"])
    def test_small_argument_quadratic(self, laws, name):
        law = laws[name]
        for l1 in (1e-2, -1e-2, 3e-3):
            err = abs(law.log_mgf2(l1, 0.0) - law.sigma2 * l1 * l1 / 2.0)
            assert err <= 1e-3 * l1 * l1

    @settings(max_examples=30, deadline=None)
    @given(a1=st.floats(-3, 3), a2=st.floats(-0.4, 3),
           b1=st.floats(-3, 3), b2=st.floats(-0.4, 3))
    def test_gaussian_midpoint_convexity(self, a1, a2, b1, b2):
        law = StandardGaussian()
        mid = law.log_mgf2((a1 + b1) / 2, (a2 + b2) / 2)
        assert mid <= (law.log_mgf2(a1, a2) + law.log_mgf2(b1, b2)) / 2 + 1e-9

    @settings(max_examples=50, deadline=None)
    @given(a1=st.floats(-20, 20), a2=st.floats(-20, 20),
           b1=st.floats(-20, 20), b2=st.floats(-20, 20))
    def test_rademacher_midpoint_convexity(self, a1, a2, b1, b2):
        law = Rademacher()
        mid = law.log_mgf2((a1 + b1) / 2, (a2 + b2) / 2)
        assert mid <= (law.log_mgf2(a1, a2) + law.log_mgf2(b1, b2)) / 2 + 1e-9


class TestQuadraticMoments:
    def test_rademacher(self, laws):
        qm = laws["rademacher"].quadratic_moments()
        assert (qm.sigma2, qm.w, qm.z) == (1.0, 0.0, 0.0)

    def test_gaussian(self, laws):
        qm = laws["gaussian"].quadratic_moments()
        assert qm.sigma2 == 1.0
        assert qm.w == pytest.approx(2.0, rel=1e-9)
        assert qm.z == pytest.approx(0.0, abs=1e-9)

    def test_uniform(self, laws):
        qm = laws["uniform"].quadratic_moments()
        assert qm.sigma2 == pytest.approx(1.0, rel=1e-12)
        assert qm.w == pytest.approx(0.8, rel=1e-9)
        assert qm.z == pytest.approx(0.0, abs=1e-9)

    def test_z_conventions_coincide_for_centered_laws(self):
        # with E xi = 0 both odd cross terms collapse to -E xi^3, so the
        # convention switch changes nothing numerically for valid laws
        law = DiscreteLaw([(-1.0, 0.8), (4.0, 0.2)])
        z_lin = law.quadratic_moments("sigma-linear").z
        z_var = law.quadratic_moments("variance-exact").z
        assert z_lin == pytest.approx(-law.expect(lambda x: x ** 3))
        assert z_lin == pytest.approx(z_var)

    def test_unknown_convention(self, laws):
        with pytest.raises(ValueError):
            laws["gaussian"].quadratic_moments("bogus")

    def test_divergent_fourth_moment(self):
        heavy = DensityLaw(lambda x: 2.0 / (math.pi * (1.0 + x * x) ** 2))
        with pytest.raises(DivergentError):
            heavy.quadratic_moments()


class TestSummandMoments:
    def test_variance_rademacher(self, laws):
        for n, B in [(1, 0.5), (4, 2.0), (64, 10.0)]:
            assert laws["rademacher"].summand_variance(n, B) == pytest.approx(n)

    def test_variance_gaussian(self, laws):
        assert laws["gaussian"].summand_variance(1, 1.0) == pytest.approx(
            3.0, rel=1e-9)

    def test_variance_at_b_zero(self, laws):
        for name in laws:
            law = laws[name]
            assert law.summand_variance(7, 0.0) == pytest.approx(7 * law.sigma2)

    def test_variance_exact_convention_matches_direct_variance(self):
        # asymmetric law with sigma != 1: only the variance-exact z
        # reproduces Var(sqrt(n)*xi + B*(sigma^2 - xi^2))
        law = DiscreteLaw([(-1.0, 0.8), (4.0, 0.2)])
        n, B = 3, 0.7
        s2 = law.sigma2
        mean_eta = 0.0
        var_direct = law.expect(
            lambda x: (math.sqrt(n) * x + B * (s2 - x * x)) ** 2) - mean_eta
        ex_eta = law.expect(lambda x: math.sqrt(n) * x + B * (s2 - x * x))
        var_direct -= ex_eta ** 2
        assert law.summand_variance(n, B, "variance-exact") == pytest.approx(
            var_direct, rel=1e-9)

    def test_lp_rademacher_constant(self, laws):
        for n, B, p in [(1, 1.0, 2.0), (9, 4.0, 3.5), (64, 0.3, 1.0)]:
            assert laws["rademacher"].summand_lp_norm(n, B, p) == pytest.approx(
                1.0, rel=1e-12)

    def test_lp_reduces_at_b_zero(self, laws):
        for name in laws:
            law = laws[name]
            assert law.summand_lp_norm(5, 0.0, 3.0) == pytest.approx(
                law.lp_norm(3.0), rel=1e-10)

    def test_lp_gaussian_p2(self, laws):
        assert laws["gaussian"].summand_lp_norm(1, 1.0, 2.0) == pytest.approx(
            math.sqrt(3.0), rel=1e-9)

    @pytest.mark.parametrize("name", ["gaussian", "uniform"])
    def test_p2_identity_against_expect(self, laws, name):
        # |summand|_2^2 = sigma^2 + 2*B*z'/sqrt(n) + B^2*w/n, z' = E xi(s2-xi^2)
        law = laws[name]
        n, B = 5, 1.7
        s2 = law.sigma2
        zp = law.expect(lambda x: x * (s2 - x * x))
        w = law.expect(lambda x: (s2 - x * x) ** 2)
        expected = s2 + 2 * B * zp / math.sqrt(n) + B * B * w / n
        assert law.summand_lp_norm(n, B, 2.0) ** 2 == pytest.approx(
            expected, rel=1e-9)


class TestConstruction:
    def test_uniform_sigma2(self):
        assert UniformSymmetric(SQRT3).sigma2 == pytest.approx(1.0)
        assert UniformSymmetric(2.0).sigma2 == pytest.approx(4.0 / 3.0)

    def test_discrete_rejects_off_center(self):
        with pytest.raises(ValueError, match="not centered"):
            DiscreteLaw([(0.0, 0.5), (1.0, 0.5)])

    def test_discrete_rejects_bad_probs(self):
        with pytest.raises(ValueError, match="sum"):
            DiscreteLaw([(-1.0, 0.6), (1.0, 0.6)])
        with pytest.raises(ValueError, match="nonnegative"):
            DiscreteLaw([(-1.0, 1.5), (1.0, -0.5)])

    def test_density_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="integrates"):
            DensityLaw(lambda x: math.exp(-abs(x)), support=(-math.inf, math.inf))

    def test_density_rejects_off_center(self):
        with pytest.raises(ValueError, match="not centered"):
            DensityLaw(lambda x: math.exp(-x) if x > 0 else 0.0,
                       support=(0.0, math.inf))

    def test_empirical_recenters(self):
        law = EmpiricalLaw([1.0, 2.0, 3.0, 6.0])
        assert law.expect(lambda x: x) == pytest.approx(0.0, abs=1e-12)
        assert law.sigma2 == pytest.approx(np.var([1.0, 2.0, 3.0, 6.0]))

    def test_empirical_rejects_constant(self):
        with pytest.raises(ValueError):
            EmpiricalLaw([2.0, 2.0, 2.0])

    def test_immutable_semantics(self, laws):
        law = laws["gaussian"]
        assert isinstance(law, DistributionModel)
        assert law.sigma2 == 1.0


class TestSampling:
    def test_rademacher_support(self, laws):
        x = laws["rademacher"].sample(np.random.default_rng(0), 1000)
        assert set(np.unique(x)) == {-1.0, 1.0}

    def test_uniform_support(self, laws):
        x = laws["uniform"].sample(np.random.default_rng(0), 1000)
        assert np.all(np.abs(x) <= SQRT3)

    def test_gaussian_moments(self, laws):
        x = laws["gaussian"].sample(np.random.default_rng(0), 200000)
        assert abs(x.mean()) < 0.01
        assert abs(x.var() - 1.0) < 0.02

    def test_density_law_sampling(self):
        law = DensityLaw(lambda x: math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi))
        x = law.sample(np.random.default_rng(5), 50000)
        assert abs(x.mean()) < 0.02
        assert abs(x.var() - 1.0) < 0.05

    def test_discrete_sampling_frequencies(self):
        law = DiscreteLaw([(-2.0, 0.25), (0.0, 0.25), (1.0, 0.5)])
        x = law.sample(np.random.default_rng(9), 100000)
        assert abs(np.mean(x == 1.0) - 0.5) < 0.01


class TestProbBetween:
    def test_gaussian_interval(self, laws):
        from scipy.stats import norm
        assert laws["gaussian"].prob_between(0.0, 0.01) == pytest.approx(
            norm.cdf(0.01) - 0.5, rel=1e-9)

    def test_discrete_strict_endpoints(self):
        law = DiscreteLaw([(-1.0, 0.5), (1.0, 0.5)])
        assert law.prob_between(0.0, 1.0) == 0.0
        assert law.prob_between(0.0, 1.0 + 1e-12) == 0.5

    def test_empirical_fraction(self):
        law = EmpiricalLaw([-3.0, -1.0, 1.0, 3.0])
        assert law.prob_between(0.0, 2.0) == 0.25


class TestParseGrammar:
    def test_builtins(self):
        assert parse_distribution("rademacher").name == "rademacher"
        assert parse_distribution("gaussian").name == "gaussian"
        law = parse_distribution("uniform:a=1.5")
        assert isinstance(law, UniformSymmetric)
        assert law.half_width == 1.5

    def test_discrete(self):
        law = parse_distribution("discrete:-1:0.5,1:0.5")
        assert isinstance(law, DiscreteLaw)
        assert law.sigma2 == 1.0

    def test_empirical(self, tmp_path):
        path = tmp_path / "samples.txt"
        path.write_text("1.0\n-1.0\n2.0\n-2.0\n")
        law = parse_distribution(f"empirical:{path}")
        assert isinstance(law, EmpiricalLaw)
        assert law.sigma2 == pytest.approx(2.5)

    @pytest.mark.parametrize("bad", [
        "uniform:a=bogus", "uniform:x=1", "discrete:1:0.5", "discrete:a:b",
        "empirical:/nonexistent/file.txt", "cauchy", "",
    ])
    def test_errors(self, bad):
        with pytest.raises(ValueError):
            parse_distribution(bad)
