"""T_t on radial functions is the Bessel-kernel operator A on the half-line.

With f(w) = G(|w|^2) exp(t|w|^2/2) one has

    T_t f(z) = exp(t|z|^2/2) (A G)(|z|^2),
    A G(x) = int_0^inf t exp(-t(x+y)/2) I_0(t sqrt(xy)) G(y) dy.

The left side is a planar quadrature, the right a one-dimensional Nystrom sum.
"""

import warnings

import numpy as np

from fockops import RadialOperatorA, TruncationWarning, apply_A, build_rule, radial_correspondence_check

t = 2.0
rule = build_rule(1, t)
A = RadialOperatorA(t)
radii = np.linspace(0, 3, 7)
for name, G in {"exp(-y)": lambda y: np.exp(-y), "y exp(-y)": lambda y: y * np.exp(-y)}.items():
    res = radial_correspondence_check(t, G, radii, rule, A)
    ref = np.exp(t * radii**2 / 2) * apply_A(A, G, radii**2)
    print(f"G = {name:10s} max relative gap {np.max(res / ref):.1e}")

# every row of the kernel integrates to 2, which is why ||A|| on L^1 is 2;
# G = 1 is not integrable, so apply_A flags the truncation
x = np.array([0.5, 5.0, 50.0])
A_long = RadialOperatorA(t, 4000.0)
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", TruncationWarning)
    rows = apply_A(A_long, np.ones_like(A_long.nodes), x)
print("row integrals:", rows, f"({len(caught)} truncation warning)")
