"""Quantitative acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion
is printed in the terminal summary) or ``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import subprocess
import sys
import time
import warnings
from pathlib import Path

import numpy as np
import pytest

from fockops import (
    OperatorSpec,
    ParamTriple,
    Polynomial,
    RadialOperatorA,
    TruncationWarning,
    apply_A,
    apply_S,
    build_rule,
    classify,
    gaussian_monomial_moment,
    integrate,
    kernel_abs_integral,
    lemma13_extrapolate,
    lower_bound_feps,
    lower_bound_power_iteration,
    radial_correspondence_check,
    reduce_ab,
    reproduce_check,
    schur_certify,
    threshold_norm_estimate,
)
from fockops.norms import p1_growth_exponent, reevaluate_witness
from fockops.operators import fxk

pytestmark = pytest.mark.acceptance

TESTS_DIR = Path(__file__).resolve().parent


def _separable_power(p, m):
    def f(*z):
        out = 1.0
        for zk, mk in zip(z, m):
            out = out * np.abs(zk) ** (p * mk)
        return out

    return f


def test_criterion_01_moment_identity():
    start = time.perf_counter()
    worst = {1: 0.0, 2: 0.0}
    for n, ts in ((1, (0.5, 1.0, 2.0)), (2, (0.5, 1.0, 2.0))):
        indices = [(k,) for k in range(7)] if n == 1 else list(itertools.product(range(4), repeat=2))
        for t in ts:
            rule = build_rule(n, t)
            mu = rule.measure()
            for m in indices:
                for p in (1, 2, 3, 4):
                    exact = gaussian_monomial_moment(m, p, t)
                    approx = integrate(rule.sample(_separable_power(p, m)), mu, rule).real
                    worst[n] = max(worst[n], abs(approx - exact) / exact)
    elapsed = time.perf_counter() - start
    print(f"moment rel err n=1 {worst[1]:.2e}, n=2 {worst[2]:.2e}, {elapsed:.2f}s")
    assert worst[1] <= 1e-8
    assert worst[2] <= 1e-6
    assert elapsed <= 5.0


def test_criterion_02_kernel_integral():
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    radii = np.concatenate([[0.0, 3.0], rng.uniform(0, 3, 6)])
    angles = rng.uniform(0, 2 * np.pi, radii.size)
    worst = 0.0
    for sigma in (1.0, 2.0, 3.0):
        for t in (1.0, 2.0):
            for r, th in zip(radii, angles):
                a = r * np.exp(1j * th)
                rule = build_rule(1, t, 1e-12, offset=sigma * abs(a) / (2 * t))
                f = rule.sample(lambda z: np.exp(sigma * (z * np.conj(a)).real))
                approx = integrate(f, rule.measure(), rule).real
                exact = kernel_abs_integral(a, sigma, t)
                worst = max(worst, abs(approx - exact) / exact)
    elapsed = time.perf_counter() - start
    print(f"kernel integral rel err {worst:.2e}, {elapsed:.2f}s")
    assert worst <= 1e-6
    assert elapsed <= 5.0


def test_criterion_03_reproducing_formula():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    pts = 2.0 * np.sqrt(rng.uniform(size=20)) * np.exp(2j * np.pi * rng.uniform(size=20))
    t = 1.0
    rule = build_rule(1, t)
    worst = 0.0
    for a in pts:
        for k in range(9):
            worst = max(worst, reproduce_check(Polynomial.monomial((k,)), a, t, rule))
    elapsed = time.perf_counter() - start
    print(f"reproducing residual {worst:.2e}, {elapsed:.2f}s")
    assert worst <= 1e-8
    assert elapsed <= 5.0


def test_criterion_04_closed_form_action():
    z = np.array([0.3 + 0.4j, -1.0 + 0.5j, 1.5j, 2.0 - 0.1j])
    worst = 0.0
    for t in (1.0, 2.0):
        rule = build_rule(1, t)
        spec = OperatorSpec("S", t, t, 1)
        for x, k in itertools.product((0.5, 1.0, 2.0), range(7)):
            got = apply_S(spec, rule.sample(fxk(x, k)), z, rule)
            exact = (t / (t + x)) ** (1 + k) * z**k
            worst = max(worst, float(np.max(np.abs(got - exact) / np.abs(exact))))
    print(f"S f_xk rel err {worst:.2e}")
    assert worst <= 1e-7


def test_criterion_05_radial_correspondence():
    radii = np.linspace(0.0, 3.0, 10)
    z = radii * np.exp(0.7j)
    worst = 0.0
    profiles = {"exp": lambda y: np.exp(-y), "yexp": lambda y: y * np.exp(-y)}
    for t in (1.0, 2.0):
        rule = build_rule(1, t)
        A = RadialOperatorA(t)
        for G in profiles.values():
            res = radial_correspondence_check(t, G, z, rule, A)
            sq = radii**2
            ref = np.exp(0.5 * t * sq) * np.abs(apply_A(A, G, sq))
            worst = max(worst, float(np.max(res / ref)))
    print(f"radial correspondence rel err {worst:.2e}")
    assert worst <= 1e-5


def test_criterion_06_norm_sandwich():
    start = time.perf_counter()
    params = ParamTriple(2, 2, 2)
    cert = schur_certify(params, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        feps = lower_bound_feps(2.0, 2.0, 1e-3, RadialOperatorA(2.0, 4000.0, 2000))
    power = lower_bound_power_iteration(RadialOperatorA(2.0, 400.0, 2000))
    est2 = threshold_norm_estimate(params, 2)
    elapsed = time.perf_counter() - start
    print(
        f"upper {cert.bound!r}, f_eps {feps:.5f}, power {power:.5f}, "
        f"n=2 [{est2.lower:.5f}, {est2.upper!r}], {elapsed:.1f}s"
    )
    # "exactly 2" holds to floating-point rounding of C1^(1/q) C2^(1/p)
    assert cert.bound == pytest.approx(2.0, rel=1e-14)
    assert cert.max_residual <= 1e-12
    assert feps >= 1.95
    assert 1.9 <= power <= 2.001
    assert est2.lower >= 1.95**2
    assert est2.upper == pytest.approx(4.0, rel=1e-14)
    assert elapsed <= 60.0


def test_criterion_07_limit_integral():
    start = time.perf_counter()
    hs = [1e-2, 1e-3, 1e-4]
    for p in (1, 2):
        tables = {c: lemma13_extrapolate(c, p, hs) for c in (0.5, 1.0, 2.0)}
        target = tables[1.0].target
        print(f"p={p}: target {target:.8f}, " + ", ".join(f"c={c}: {tb.estimate:.8f}" for c, tb in tables.items()))
        assert target == pytest.approx((2 * math.sqrt(2 * math.pi)) ** p, rel=1e-15)
        assert tables[1.0].rel_error <= 1e-2
        ests = [tb.estimate for tb in tables.values()]
        for e1, e2 in itertools.combinations(ests, 2):
            assert abs(e1 - e2) / target <= 2e-2
    elapsed = time.perf_counter() - start
    print(f"{elapsed:.1f}s")
    assert elapsed <= 120.0


def test_criterion_08_threshold_dichotomy():
    grid = np.linspace(0.5, 2.0, 16)
    p = 2.0
    n_bounded = 0
    for t, s in itertools.product(grid, grid):
        params = ParamTriple(p, float(t), float(s))
        c = classify(params, 1, estimate=False)
        on = abs(p * t - 2 * s) / (p * t) <= 1e-12
        assert c.status == ("bounded" if on else "unbounded"), (t, s, c)
        if on:
            n_bounded += 1
        else:
            assert reevaluate_witness(c.witness) > 1e3
    assert n_bounded == 16  # the diagonal s = t
    n_bounded = 0
    for t, s in itertools.product(grid, grid):
        gamma = p1_growth_exponent(float(t), float(s))
        on = abs(t - 2 * s) / t <= 1e-12
        if on:
            n_bounded += 1
            assert gamma <= 1e-24
        else:
            assert gamma > 0
        c = classify(ParamTriple(1.0, float(t), float(s)), 1, estimate=False)
        assert c.status == ("bounded" if on else "unbounded")
        if not on:
            assert reevaluate_witness(c.witness) > 1e3
    assert n_bounded == 6  # t = 2s for t in {1.0, 1.2, ..., 2.0}


def test_criterion_09_ab_reduction():
    rng = np.random.default_rng(9)
    agree = 0
    for i in range(100):
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0, rng.uniform(1, 4)]))
        a = float(rng.uniform(0.1, 2.0))
        if i % 2:
            # on the reduced threshold: p(a+b) = 2(s+pa) with s > 0 needs b > a
            b = a + float(rng.uniform(0.1, 2.0))
            s = p * (b - a) / 2
        else:
            b, s = float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.1, 2.0))
        t2, s2, cond = reduce_ab(a, b, s, p)
        status = classify(ParamTriple(p, t2, s2), 1, estimate=False).status
        assert status != "inconclusive"
        assert cond == (status == "bounded"), (p, a, b, s)
        agree += 1
    assert agree == 100
    assert reduce_ab(1, 3, 1, 1)[2] is True
    assert classify(ParamTriple(1, *reduce_ab(1, 3, 1, 1)[:2]), 1, estimate=False).status == "bounded"


def test_criterion_10_property_suites():
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(TESTS_DIR / "test_properties.py")],
        capture_output=True,
        text=True,
        cwd=TESTS_DIR.parent,
    )
    print(proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-500:])
    assert proc.returncode == 0, proc.stdout[-2000:]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-rA"]))
