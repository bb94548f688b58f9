import math

import numpy as np
import pytest

from ineqif import (
    Dirac,
    Empirical,
    contaminate,
    cumulative_functional,
    expect,
    integrate,
    lorenz,
    make_distribution,
    quantile,
    scaled,
    translated,
)
from ineqif.errors import InvalidParameter

PARAMETRIC = [
    ("exp", (1.0,)),
    ("exp", (0.5,)),
    ("pareto", (3.0, 1.0)),
    ("pareto", (2.0, 1.0)),
    ("lognormal", (0.0, 0.5)),
    ("uniform", (0.0, 1.0)),
    ("uniform", (0.5, 2.5)),
    ("sm", (2.0, 1.0, 3.0)),
]


class TestConstruction:
    def test_unit_exponential_mean(self):
        assert make_distribution("exp", 1.0).mean() == pytest.approx(1.0)

    def test_pareto_mean_against_quadrature(self):
        F = make_distribution("pareto", 2.0, 1.0)
        oracle = integrate(lambda y: y * F.pdf(y), F.lep, F.uep)
        assert oracle == pytest.approx(2.0, rel=1e-8)
        assert F.mean() == pytest.approx(oracle, rel=1e-8)

    @pytest.mark.parametrize("kind,params", [
        ("exp", (0.0,)),
        ("exp", (-1.0,)),
        ("pareto", (1.0, 1.0)),      # infinite mean
        ("pareto", (2.0, 0.0)),
        ("lognormal", (0.0, 0.0)),
        ("sm", (2.0, 1.0, 0.4)),     # q <= 1/a
        ("uniform", (1.0, 1.0)),
        ("uniform", (-1.0, 1.0)),
        ("dirac", (0.0,)),
    ])
    def test_invalid_parameters(self, kind, params):
        with pytest.raises(InvalidParameter):
            make_distribution(kind, *params)

    def test_unknown_kind(self):
        with pytest.raises(InvalidParameter):
            make_distribution("cauchy", 1.0)


class TestContamination:
    def test_epsilon_zero_is_identity(self):
        F = make_distribution("exp", 1.0)
        C = contaminate(F, 0.0, 5.0)
        for u in (0.0, 0.3, 1.0, 2.5, 10.0):
            assert float(C.cdf(u)) == float(F.cdf(u))

    def test_mixture_mean(self):
        C = contaminate(make_distribution("exp", 1.0), 0.1, 5.0)
        assert C.mean() == pytest.approx(0.9 * 1.0 + 0.1 * 5.0, abs=1e-15)

    def test_atom_included_right_continuously(self):
        C = contaminate(make_distribution("uniform", 0.0, 1.0), 0.2, 0.5)
        assert float(C.cdf(0.5)) == pytest.approx(0.8 * 0.5 + 0.2, abs=1e-15)
        assert float(C.cdf(0.5 - 1e-12)) < 0.45

    def test_expectation_is_exact_mixture_rule(self):
        F = make_distribution("exp", 1.0)
        g = lambda x: np.sqrt(x) + 1.0
        for eps, z in ((0.1, 5.0), (0.01, 0.2), (0.5, 1.0)):
            C = contaminate(F, eps, z)
            assert expect(C, g) == (1 - eps) * expect(F, g) + eps * float(g(z))

    def test_invalid_contamination(self):
        F = make_distribution("exp", 1.0)
        with pytest.raises(InvalidParameter):
            contaminate(F, -0.1, 1.0)
        with pytest.raises(InvalidParameter):
            contaminate(F, 1.1, 1.0)
        with pytest.raises(InvalidParameter):
            contaminate(F, 0.1, -1.0)

    def test_atoms_merge(self):
        F = contaminate(contaminate(Dirac(2.0), 0.5, 1.0), 0.2, 1.0)
        atoms = dict(F.atoms())
        assert atoms[2.0] == pytest.approx(0.4)
        assert atoms[1.0] == pytest.approx(0.6)


class TestExpect:
    def test_exponential_identity(self):
        F = make_distribution("exp", 1.0)
        assert expect(F, lambda x: x) == pytest.approx(1.0, abs=1e-9)

    def test_lognormal_log_moment(self):
        # E log X = log-mean parameter; quadrature vs the analytic value
        F = make_distribution("lognormal", 0.0, 0.5)
        assert expect(F, np.log) == pytest.approx(0.0, abs=1e-9)

    def test_contaminated_identity(self):
        C = contaminate(make_distribution("exp", 1.0), 0.1, 5.0)
        assert expect(C, lambda x: x) == pytest.approx(1.4, abs=1e-9)

    def test_scalar_only_callable_falls_back(self):
        F = make_distribution("uniform", 0.0, 1.0)
        value = expect(F, lambda x: math.sqrt(x))  # rejects arrays
        assert value == pytest.approx(2.0 / 3.0, abs=1e-9)


class TestQuantile:
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_uniform_identity(self, p):
        F = make_distribution("uniform", 0.0, 1.0)
        assert quantile(F, p) == pytest.approx(p, abs=1e-15)

    def test_exponential_analytic_inverse(self):
        # invert 1 - e^-x by hand: Q(1 - e^-1) = 1
        F = make_distribution("exp", 1.0)
        assert quantile(F, 1.0 - math.exp(-1.0)) == pytest.approx(1.0, abs=1e-12)

    def test_contaminated_quantile_hits_atom(self):
        # brute-force oracle: scan the mixture cdf for inf{x : F(x) >= p}
        C = contaminate(make_distribution("uniform", 0.0, 1.0), 0.5, 2.0)
        xs = np.linspace(0.0, 3.0, 300001)
        oracle = xs[np.asarray(C.cdf(xs)) >= 0.75][0]
        assert oracle == pytest.approx(2.0, abs=1e-4)
        assert quantile(C, 0.75) == pytest.approx(2.0, abs=1e-9)

    def test_out_of_range(self):
        F = make_distribution("exp", 1.0)
        with pytest.raises(InvalidParameter):
            quantile(F, -0.1)
        with pytest.raises(InvalidParameter):
            quantile(F, 1.5)

    @pytest.mark.parametrize("kind,params", PARAMETRIC)
    def test_cdf_quantile_roundtrip(self, kind, params):
        F = make_distribution(kind, *params)
        ps = np.linspace(0.01, 0.99, 99)
        err = max(abs(float(F.cdf(F.quantile(p))) - p) for p in ps)
        assert err <= 1e-9

    @pytest.mark.parametrize("kind,params", PARAMETRIC)
    def test_quantile_array_matches_scalar(self, kind, params):
        F = make_distribution(kind, *params)
        ps = np.linspace(0.05, 0.95, 19)
        arr = F.quantile_array(ps)
        scalars = np.array([F.quantile(p) for p in ps])
        np.testing.assert_allclose(arr, scalars, rtol=1e-13)


class TestMoments:
    @pytest.mark.parametrize("kind,params", PARAMETRIC)
    def test_closed_form_mean_matches_quadrature(self, kind, params):
        F = make_distribution(kind, *params)
        oracle = integrate(lambda y: y * F.pdf(y), F.lep, F.uep)
        assert F.mean() == pytest.approx(oracle, rel=1e-8)

    @pytest.mark.parametrize("kind,params", PARAMETRIC)
    @pytest.mark.parametrize("level", [0.25, 0.6, 0.9])
    def test_partial_mean_matches_quadrature(self, kind, params, level):
        F = make_distribution(kind, *params)
        t = F.quantile(level)
        oracle = integrate(lambda y: y * F.pdf(y), F.lep, t)
        assert F.partial_mean(t) == pytest.approx(oracle, abs=1e-9, rel=1e-9)


class TestLorenz:
    def test_endpoints(self):
        for F in (make_distribution("exp", 1.0), Dirac(3.0)):
            assert lorenz(F, 0.0) == 0.0
            assert lorenz(F, 1.0) == 1.0

    def test_exponential_closed_form(self):
        # oracle: antiderivative of -log(1-s) is (1-s)log(1-s) + s
        F = make_distribution("exp", 1.0)
        p = 0.5
        oracle = (1 - p) * math.log(1 - p) + p
        assert oracle == pytest.approx(0.153426, abs=1e-6)
        assert lorenz(F, p) == pytest.approx(oracle, abs=1e-9)

    def test_dirac_equality_line(self):
        assert lorenz(Dirac(4.0), 0.5) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("spec", ["exp:1", "uniform:0,1", "pareto:3,1"])
    def test_nondecreasing_and_convex(self, spec, fleet):
        F = fleet[spec]
        ps = np.linspace(0.0, 1.0, 21)
        ls = np.array([lorenz(F, p) for p in ps])
        assert np.all(np.diff(ls) >= -1e-12)
        assert np.all(np.diff(ls, 2) >= -1e-9)


class TestCumulativeFunctional:
    def test_uniform_half(self):
        F = make_distribution("uniform", 0.0, 1.0)
        assert cumulative_functional(F, 0.5) == pytest.approx(0.125, abs=1e-10)

    def test_full_mass_is_mean(self):
        F = make_distribution("exp", 1.0)
        assert cumulative_functional(F, 1.0) == pytest.approx(1.0, abs=1e-9)

    def test_empty_integral(self):
        assert cumulative_functional(make_distribution("exp", 1.0), 0.0) == 0.0

    def test_monotone_in_p(self):
        F = make_distribution("lognormal", 0.0, 0.5)
        vals = [cumulative_functional(F, p) for p in np.linspace(0.0, 1.0, 11)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_includes_atoms_below_quantile(self):
        E = Empirical.from_values([1.0, 2.0, 3.0, 4.0])
        # Q(0.5) = 2; atoms 1 and 2 contribute with full weight 1/4 each
        assert cumulative_functional(E, 0.5) == pytest.approx(0.75, abs=1e-15)


class TestEmpirical:
    def test_quantile_order_statistic(self):
        E = Empirical.from_values(range(1, 11))
        assert E.quantile(0.2) == 2.0
        assert E.quantile(0.8) == 8.0
        assert E.quantile(0.81) == 9.0

    def test_cdf_step(self):
        E = Empirical.from_values([1.0, 3.0])
        assert float(E.cdf(0.5)) == 0.0
        assert float(E.cdf(1.0)) == 0.5
        assert float(E.cdf(3.0)) == 1.0

    def test_mid_cdf_with_ties(self):
        E = Empirical.from_values([1.0, 2.0, 2.0, 5.0])
        assert E.mid_cdf(2.0) == pytest.approx(0.5)

    def test_validation(self):
        with pytest.raises(InvalidParameter):
            Empirical.from_values([])
        with pytest.raises(InvalidParameter):
            Empirical.from_values([-1.0, 2.0])
        with pytest.raises(InvalidParameter):
            Empirical.from_values([0.0, 0.0])


class TestTransforms:
    @pytest.mark.parametrize("kind,params", PARAMETRIC)
    def test_scaled_quantiles(self, kind, params):
        F = make_distribution(kind, *params)
        G = scaled(F, 7.0)
        for p in (0.1, 0.5, 0.9):
            assert G.quantile(p) == pytest.approx(7.0 * F.quantile(p), rel=1e-12)

    def test_translated_uniform(self):
        F = make_distribution("uniform", 0.0, 1.0)
        G = translated(F, 2.0)
        assert G.mean() == pytest.approx(F.mean() + 2.0, abs=1e-12)

    def test_translation_not_closed(self):
        with pytest.raises(InvalidParameter):
            translated(make_distribution("exp", 1.0), 1.0)
