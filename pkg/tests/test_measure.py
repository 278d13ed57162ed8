import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fockops.measure import (
    GaussianMeasure,
    GridFunction,
    MultiIndex,
    build_rule,
    default_radius,
    gaussian_monomial_moment,
    integrate,
    log_gaussian_monomial_moment,
    lp_norm,
)


def test_rule_is_normalized():
    rule = build_rule(1, 1.0, 1e-10)
    assert abs(integrate(rule.sample(lambda z: np.ones_like(z.real)), rule.measure(), rule) - 1) <= 1e-10


def test_larger_scale_gives_smaller_radius():
    assert build_rule(1, 2.0, 1e-10).radius < build_rule(1, 1.0, 1e-10).radius


def test_two_dimensional_rule_reproduces_moment():
    rule = build_rule(2, 1.0, 1e-8)
    got = integrate(rule.sample(lambda z1, z2: np.abs(z1) ** 2 + 0 * z2.real), rule.measure(), rule)
    assert got.real == pytest.approx(gaussian_monomial_moment((1, 0), 2, 1.0), abs=1e-8)


@pytest.mark.parametrize(
    "n, t, tol",
    [(3, 1.0, 1e-10), (1, 0.0, 1e-10), (1, -1.0, 1e-10), (1, 1.0, 0.0), (1, 1.0, 1.0)],
)
def test_build_rule_rejects_bad_input(n, t, tol):
    with pytest.raises(ValueError):
        build_rule(n, t, tol)


def test_build_rule_flags_failed_normalization():
    with pytest.raises(RuntimeError):
        build_rule(1, 1.0, 1e-14, n_radial=3)


def test_breakpoints_split_the_radial_rule():
    rule = build_rule(1, 1.0, breakpoints=(1.0,))
    f = rule.sample(lambda z: (np.abs(z) <= 1.0).astype(float))
    assert integrate(f, rule.measure(), rule).real == pytest.approx(1 - math.exp(-1.0), rel=1e-13)


def test_default_radius_grows_with_offset():
    assert default_radius(1.0, 1e-10, 2.0) == pytest.approx(default_radius(1.0, 1e-10) + 2.0)


@pytest.mark.parametrize(
    "f, expected",
    [(lambda z: np.ones_like(z.real), 1.0), (lambda z: np.abs(z) ** 2, 1.0)],
    ids=["constant", "abs-squared"],
)
def test_integrate_examples(f, expected):
    rule = build_rule(1, 1.0)
    assert integrate(rule.sample(f), rule.measure(), rule).real == pytest.approx(expected, rel=1e-13)


def test_kernel_modulus_integral_example():
    rule = build_rule(1, 1.0, 1e-12, offset=1.0)
    f = rule.sample(lambda z: np.abs(np.exp(2 * z * np.conj(1.0 + 0j))))
    assert integrate(f, rule.measure(), rule).real == pytest.approx(math.e, rel=1e-12)


def test_integrate_checks_scale_and_dimension():
    rule = build_rule(1, 1.0)
    f = rule.sample(lambda z: np.ones_like(z.real))
    with pytest.raises(ValueError):
        integrate(f, GaussianMeasure(1, 2.0), rule)
    with pytest.raises(ValueError):
        integrate(f, GaussianMeasure(2, 1.0), rule)


@pytest.mark.parametrize(
    "m, p, t, expected",
    [((0,), 3.0, 0.7, 1.0), ((0, 0), 1.5, 2.0, 1.0), ((2,), 2, 2.0, 0.5), ((1,), 4, 1.0, 2.0)],
)
def test_moment_examples(m, p, t, expected):
    assert gaussian_monomial_moment(m, p, t) == pytest.approx(expected, rel=1e-15)


def test_moment_p2_is_factorial_over_power():
    m = MultiIndex((3, 2))
    assert gaussian_monomial_moment(m, 2, 1.5) == pytest.approx(m.factorial / 1.5 ** m.order, rel=1e-14)


def test_log_moment_survives_overflow():
    val = log_gaussian_monomial_moment((400,), 4, 1.0)
    assert math.isfinite(val)
    assert val == pytest.approx(math.lgamma(801), rel=1e-14)
    assert gaussian_monomial_moment((400,), 4, 1.0) == math.inf


@pytest.mark.parametrize("m", [(-1,), (1.5,), ()])
def test_multi_index_validation(m):
    with pytest.raises((ValueError, TypeError)):
        MultiIndex(m)


def test_lp_norm_of_constant_and_monomial():
    rule = build_rule(1, 1.0)
    one = rule.sample(lambda z: np.ones_like(z.real))
    assert lp_norm(one, 2, 1.0, rule) == pytest.approx(1.0, rel=1e-13)
    z = rule.sample(lambda z: z)
    assert lp_norm(z, 4, 1.0, rule) == pytest.approx(gaussian_monomial_moment((1,), 4, 1.0) ** 0.25, rel=1e-13)


def test_grid_function_arithmetic():
    g = GridFunction(np.array([1 + 1j, -2.0]), 1)
    assert_allclose(abs(g).values, [math.sqrt(2), 2.0])
    assert_allclose((g * g).values, [2j, 4.0])


def test_gaussian_density_integrates_along_rays():
    mu = GaussianMeasure(1, 2.0)
    assert mu.density(np.array([0.0]))[0] == pytest.approx(2 / math.pi)
