"""The reproducing formula and the action of S_t on a Gaussian family.

For entire f of moderate growth, S_t f(a) = int exp(t<a,z>) f(z) dv_t(z) = f(a).
On f_{x,k}(z) = exp(-x|z|^2) z^k the operator acts by a scalar:

    S_t f_{x,k} = (t / (t + x))^{1+k} z^k.
"""

import numpy as np

from fockops import OperatorSpec, Polynomial, apply_S, apply_T, build_rule, reproduce_check
from fockops.operators import fxk

t = 1.0
rule = build_rule(1, t)
f = Polynomial({(0,): 1.0, (3,): -2.0, (8,): 0.5j})
for a in (0.0, 0.7, 1 + 0.5j, -1.4 + 1.3j):
    print(f"a = {a!s:>12}: |S_t f(a) - f(a)| = {reproduce_check(f, a, t, rule):.1e}")

z = np.array([0.5, 1.0j, -1.5 + 0.3j])
spec = OperatorSpec("S", t, t)
for x, k in [(0.5, 1), (1.0, 2), (2.0, 5)]:
    got = apply_S(spec, rule.sample(fxk(x, k)), z, rule)
    exact = (t / (t + x)) ** (1 + k) * z**k
    print(f"x={x}, k={k}: max relative error {np.max(np.abs(got / exact - 1)):.1e}")

# The modulus kernel does not reproduce: T_t 1 = exp(t|z|^2 / 4)
rule = build_rule(1, t, offset=1.0)
one = rule.sample(lambda w: np.ones_like(w.real))
print("T_t 1 / exp(t|z|^2/4):", apply_T(OperatorSpec("T", t, t), one, z, rule) / np.exp(t * np.abs(z) ** 2 / 4))
