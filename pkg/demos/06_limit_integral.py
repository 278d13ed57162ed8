"""The double integral behind the sharp lower bound and its h -> 0 limit.

    V(c, p, h) = h int_c^inf [ int_c^inf (uv)^{-1/4} exp(sqrt(uv) - (u+v)/2 - hv/p) dv ]^p du

tends to (2 sqrt(2 pi))^p. The error is O(h), so extrapolating from a
geometric h sequence gains several digits.
"""

from fockops import lemma13_extrapolate

for p in (1, 2):
    for c in (0.5, 1.0, 2.0):
        tab = lemma13_extrapolate(c, p, [1e-2, 1e-3, 1e-4])
        raw = ", ".join(f"{v:.6f}" for v in tab.values)
        print(f"p={p} c={c}: raw [{raw}] -> {tab.estimate:.7f} (target {tab.target:.7f}, rel err {tab.rel_error:.1e})")
