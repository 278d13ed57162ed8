"""Gaussian moments on C^n: closed form against polar quadrature.

The probability measure dv_t = (t/pi)^n exp(-t|z|^2) dv has the moments

    int |z^m|^p dv_t = prod_k Gamma(p m_k / 2 + 1) / t^{p m_k / 2}.

We build the polar product rule for n = 1 and n = 2 and compare.
"""

import itertools
import math

import numpy as np

from fockops import build_rule, gaussian_monomial_moment, integrate
from fockops.measure import log_gaussian_monomial_moment

for n, t in [(1, 0.5), (1, 2.0), (2, 1.0)]:
    rule = build_rule(n, t)
    print(f"n={n} t={t}: {rule.size} nodes, radius {rule.radius:.2f}")
    worst = 0.0
    for m in itertools.product(range(4), repeat=n):
        for p in (1, 2, 3, 4):
            # sample separably: |z_1|^(p m_1) |z_2|^(p m_2) broadcasts over the grid
            f = rule.sample(lambda *z: math.prod(np.abs(zk) ** (p * mk) for zk, mk in zip(z, m)))
            approx = integrate(f, rule.measure(), rule).real
            exact = gaussian_monomial_moment(m, p, t)
            worst = max(worst, abs(approx - exact) / exact)
    print(f"    worst relative error over m, p: {worst:.1e}")

# huge orders stay finite in log space
print("log moment for m = (400,), p = 4:", log_gaussian_monomial_moment((400,), 4, 1.0))
