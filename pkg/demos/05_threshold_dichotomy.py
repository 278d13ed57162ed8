"""S_t and T_t are bounded on L^p(dv_s) exactly when pt = 2s.

Off the threshold every cell carries a witness: a test function whose norm
ratio exceeds 10^3, recomputable from the stored parameters alone.
"""

import numpy as np

from fockops import ParamTriple, classify, reduce_ab
from fockops.norms import reevaluate_witness

grid = np.linspace(0.5, 2.0, 7)
for p in (1.0, 2.0, 3.0):
    print(f"p = {p}: rows t, columns s  (B bounded, . unbounded)")
    for t in grid:
        cells = [classify(ParamTriple(p, t, s), estimate=False) for s in grid]
        print(f"  t={t:4.2f} " + " ".join("B" if c.status == "bounded" else "." for c in cells))

for triple in [(2, 1, 0.9), (1.5, 1, 0.8), (3, 1, 1.6), (1, 1, 0.9)]:
    w = classify(ParamTriple(*triple)).witness
    where = f"a={w.a:.4f}" if w.family == "p1_exponent" else f"x={w.x:.4f} k={w.k}"
    print(f"{triple}: {w.family} ({w.route}) {where} ratio={reevaluate_witness(w):.4g}")

# Two-parameter kernels exp(a|z|^2) ... reduce to the one-parameter case
for a, b, s, p in [(1, 3, 1, 1), (1, 3, 2, 1)]:
    t2, s2, ok = reduce_ab(a, b, s, p)
    print(f"(a, b, s, p) = {(a, b, s, p)} -> t' = {t2}, s' = {s2}, bounded: {ok}")
