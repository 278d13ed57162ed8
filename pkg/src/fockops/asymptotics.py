"""The double integral behind the sharp lower bound, and its h -> 0 limit.

    V(c, p, h) = h int_c^inf [ int_c^inf (uv)^{-1/4}
                     exp(sqrt(uv) - (u+v)/2 - h v/p) dv ]^p du

tends to (2 sqrt(2 pi))^p as h -> 0+, for every c > 0.  The exponent is
evaluated as -(sqrt u - sqrt v)^2/2 - h v/p, which is never positive, and
the inner integral is taken in w = sqrt(v), where its peak has unit width
wherever it sits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import TruncationError
from .measure import leggauss

__all__ = [
    "Lemma13Params",
    "Lemma13Table",
    "limit_value",
    "inner_integral",
    "lemma13_value",
    "lemma13_extrapolate",
]

# half-width of the inner window in w = sqrt(v): exp(-W^2/2) ~ 1e-20
INNER_HALF_WIDTH = 9.5
INNER_NODES = 160
OUTER_CUTOFF = 40.0  # outer domain ends where h*u reaches this
OUTER_PANEL_NODES = 24
DECAY_RTOL = 1e-16


@dataclass(frozen=True)
class Lemma13Params:
    c: float
    p: float
    h: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not self.h > 0:
            raise ValueError(f"h must be positive, got {self.h}")


def limit_value(p: float) -> float:
    return (2.0 * math.sqrt(2.0 * math.pi)) ** p


def _inner_exponent(u, w, h, p):
    # sqrt(uv) - (u+v)/2 - hv/p with v = w^2, in cancellation-free form
    return -0.5 * (np.sqrt(u) - w) ** 2 - h * w * w / p


def inner_integral(u, c: float, p: float, h: float) -> np.ndarray:
    """int_c^inf (uv)^{-1/4} exp(sqrt(uv) - (u+v)/2 - hv/p) dv for each u."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    # v = w^2, dv = 2w dw; the integrand in w is 2 u^{-1/4} w^{1/2} exp(...)
    # peak of -(sqrt u - w)^2/2 - h w^2/p sits at sqrt(u) / (1 + 2h/p)
    a = 1.0 + 2.0 * h / p
    centre = np.sqrt(u) / a
    half = INNER_HALF_WIDTH / math.sqrt(a)
    lo = np.maximum(math.sqrt(c), centre - half)
    hi = np.maximum(lo + 2.0 * half, centre + half)
    x, wts = leggauss(INNER_NODES)
    mid, rad = 0.5 * (hi + lo), 0.5 * (hi - lo)
    w = mid[:, None] + rad[:, None] * x[None, :]
    expo = _inner_exponent(u[:, None], w, h, p)
    if np.any(expo > 1e-12):
        raise AssertionError("stabilized exponent must be non-positive")
    vals = 2.0 * u[:, None] ** -0.25 * np.sqrt(w) * np.exp(expo)
    # the integrand must be negligible at the upper window edge
    edge = _inner_exponent(u, hi, h, p)
    peak = np.max(expo, axis=1)
    if np.any(edge - peak > math.log(DECAY_RTOL)):
        raise TruncationError("inner integrand has not decayed at the window edge")
    return (vals * wts[None, :]).sum(axis=1) * rad


def _outer_nodes(c: float, u_max: float):
    # geometric panels: the integrand varies on scale ~u near c, ~1/h far out
    edges = [c]
    while edges[-1] < u_max:
        edges.append(min(u_max, max(2.0 * edges[-1], edges[-1] + 1.0)))
    x, w = leggauss(OUTER_PANEL_NODES)
    us, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        us.append(0.5 * (hi + lo) + 0.5 * (hi - lo) * x)
        ws.append(0.5 * (hi - lo) * w)
    return np.concatenate(us), np.concatenate(ws)


def lemma13_value(params: Lemma13Params) -> float:
    """h * int_c^inf I(u)^p du by nested Gauss-Legendre quadrature.

    Raises TruncationError if the outer integrand has not fallen below
    1e-16 of its maximum at the cutoff u = 40/h.
    """
    c, p, h = params.c, params.p, params.h
    u_max = max(c * 2.0, OUTER_CUTOFF / h)
    u, w = _outer_nodes(c, u_max)
    inner = inner_integral(u, c, p, h)
    f = inner**p
    tail = inner_integral(np.array([u_max]), c, p, h)[0] ** p
    if tail > DECAY_RTOL * f.max():
        raise TruncationError(f"outer integrand at u={u_max:g} is {tail / f.max():.2e} of its maximum")
    return float(h * np.sum(f * w))


@dataclass
class Lemma13Table:
    c: float
    p: float
    hs: list[float]
    values: list[float]
    estimate: float
    target: float
    monotone: bool
    extrapolants: list[float] = field(default_factory=list)

    @property
    def rel_error(self) -> float:
        return abs(self.estimate - self.target) / self.target


def _richardson(hs, values, exponents):
    m = len(hs)
    mat = np.column_stack([np.ones(m)] + [np.asarray(hs) ** e for e in exponents[: m - 1]])
    return float(np.linalg.solve(mat, np.asarray(values))[0])


def _measured_order(hs, values) -> float | None:
    d1, d2 = values[-3] - values[-2], values[-2] - values[-1]
    if d1 == 0 or d2 == 0 or (d1 > 0) != (d2 > 0):
        return None
    return math.log(d1 / d2) / math.log(hs[-3] / hs[-2])


def lemma13_extrapolate(
    c: float, p: float, hs: Sequence[float], exponents: Sequence[float] | None = None
) -> Lemma13Table:
    """Extrapolate V(c, p, h) to h = 0 from a geometrically decreasing sequence.

    By default the convergence order is measured from the last three values
    and one Richardson step is taken on the last two (Aitken's delta-squared
    for geometric h).  With explicit ``exponents`` the values are fitted
    exactly by ``L + sum_j a_j h^{e_j}`` instead.  ``monotone`` is False when
    the raw values stop approaching the known limit along the sequence.
    """
    hs = [float(h) for h in hs]
    if len(hs) < 3:
        raise ValueError("need at least 3 values of h")
    if any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("h values must be strictly decreasing")
    ratios = [a / b for a, b in zip(hs, hs[1:])]
    if max(ratios) / min(ratios) > 1.0 + 1e-9:
        raise ValueError("h values must decrease geometrically")
    values = [lemma13_value(Lemma13Params(c, p, h)) for h in hs]
    extrap = []
    for m in range(3, len(hs) + 1):
        sub_h, sub_v = hs[:m], values[:m]
        if exponents is not None:
            extrap.append(_richardson(sub_h, sub_v, list(exponents)))
            continue
        order = _measured_order(sub_h, sub_v)
        if order is None or order <= 0:
            extrap.append(sub_v[-1])
        else:
            r = (sub_h[-2] / sub_h[-1]) ** order
            extrap.append(sub_v[-1] + (sub_v[-1] - sub_v[-2]) / (r - 1.0))
    target = limit_value(p)
    dist = [abs(v - target) for v in values]
    monotone = all(b <= a for a, b in zip(dist, dist[1:]))
    return Lemma13Table(c, p, hs, values, extrap[-1], target, monotone, extrap)
