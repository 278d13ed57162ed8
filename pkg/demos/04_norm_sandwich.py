"""Bracketing ||T_t|| on the threshold pt = 2s.

Upper bound: a Schur test with weight exp(lam |z|^2) certifies 2^n.
Lower bounds: the test functions f_eps(y) = exp(-eps y / p) pushed through
the radial operator A, and (p = 2) power iteration on a discretization of A.
"""

import warnings

from fockops import (
    ParamTriple,
    RadialOperatorA,
    TruncationWarning,
    lower_bound_feps,
    lower_bound_power_iteration,
    schur_certify,
    threshold_norm_estimate,
)

params = ParamTriple(2, 2, 2)
cert = schur_certify(params)
print(f"Schur: lambda = {cert.lam}, C1 = {cert.c1}, C2 = {cert.c2}, bound = {cert.bound:.15f}")

A = RadialOperatorA(2.0, 4000.0)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", TruncationWarning)
    for eps in (10.0, 1.0, 0.1, 0.01, 0.001):
        print(f"eps = {eps:<6g} eps^(1/p) ||A f_eps|| = {lower_bound_feps(2.0, 2.0, eps, A):.5f}")
print("power iteration, X = 400:", lower_bound_power_iteration(RadialOperatorA(2.0, 400.0)))

for triple, n in [((2, 2, 2), 2), ((3, 2, 3), 1), ((1, 2, 1), 1)]:
    est = threshold_norm_estimate(ParamTriple(*triple), n)
    print(f"(p, t, s) = {triple}, n = {n}: [{est.lower:.5f}, {est.upper:.5f}] via {', '.join(est.methods)}")
