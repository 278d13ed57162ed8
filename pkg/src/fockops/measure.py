"""Gaussian probability measures on C^n and polar quadrature against them.

The measure of scale ``t`` on ``C^n`` is

    dv_t(z) = (t/pi)^n exp(-t|z|^2) dv(z),

a probability measure.  Grid quadrature is provided for ``n = 1, 2`` as a
tensor product, per complex coordinate, of a Gauss-Legendre rule in the
radius and a uniform (trapezoidal) rule in the angle.  The Gaussian density
and the polar Jacobian are folded into the weights, so integrating a
function is a weighted sum of its samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln

__all__ = [
    "GaussianMeasure",
    "MultiIndex",
    "QuadratureRule",
    "GridFunction",
    "build_rule",
    "default_radius",
    "integrate",
    "gaussian_monomial_moment",
    "log_gaussian_monomial_moment",
    "lp_norm",
]

# Additive margin in the truncation radius; absorbs polynomial growth of
# the integrand up to degree ~20.
TAIL_MARGIN = 40.0

DEFAULT_NODES = {1: (400, 256), 2: (40, 24)}


@dataclass(frozen=True)
class GaussianMeasure:
    """The probability measure dv_t on C^n."""

    dimension: int
    scale: float

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    def density(self, *coords):
        """Density of dv_t with respect to Lebesgue measure on C^n."""
        sq = sum(np.abs(np.asarray(c)) ** 2 for c in coords)
        t, n = self.scale, self.dimension
        return (t / np.pi) ** n * np.exp(-t * sq)


@dataclass(frozen=True)
class MultiIndex:
    entries: tuple[int, ...]

    def __post_init__(self):
        if any(m != int(m) for m in self.entries):
            raise ValueError(f"multi-index entries must be integers, got {self.entries}")
        entries = tuple(int(m) for m in self.entries)
        if any(m < 0 for m in entries) or len(entries) == 0:
            raise ValueError(f"multi-index entries must be nonnegative, got {self.entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def order(self) -> int:
        return sum(self.entries)

    @property
    def factorial(self) -> int:
        return math.prod(math.factorial(m) for m in self.entries)

    def monomial(self, *coords):
        """Evaluate z^m at the given coordinate arrays."""
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        out = 1.0
        for c, m in zip(coords, self.entries):
            out = out * np.asarray(c) ** m
        return out


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Truncated polar product rule for integration against dv_t.

    Each complex coordinate carries ``len(r_nodes) * n_angular`` points.
    For ``n = 2`` the full grid is the outer product of two copies of the
    coordinate grid, so sample arrays have shape ``(N, N)``.
    """

    n: int
    t: float
    radius: float
    tol: float
    r_nodes: np.ndarray
    r_weights: np.ndarray
    n_angular: int
    _coord: np.ndarray = field(repr=False, default=None)
    _coord_w: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        theta = 2.0 * np.pi * np.arange(self.n_angular) / self.n_angular
        coord = (self.r_nodes[:, None] * np.exp(1j * theta)[None, :]).ravel()
        coord_w = np.repeat(self.r_weights / self.n_angular, self.n_angular)
        coord.setflags(write=False)
        coord_w.setflags(write=False)
        object.__setattr__(self, "_coord", coord)
        object.__setattr__(self, "_coord_w", coord_w)

    @property
    def coordinate_nodes(self) -> np.ndarray:
        """Complex nodes of one coordinate, flattened radius-major."""
        return self._coord

    @property
    def coordinate_weights(self) -> np.ndarray:
        return self._coord_w

    @property
    def shape(self) -> tuple[int, ...]:
        return (self._coord.size,) * self.n

    @property
    def size(self) -> int:
        return self._coord.size ** self.n

    def points(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays, broadcastable against each other to ``shape``."""
        c = self._coord
        if self.n == 1:
            return (c,)
        return (c[:, None], c[None, :])

    def weights(self) -> np.ndarray:
        w = self._coord_w
        if self.n == 1:
            return w
        return w[:, None] * w[None, :]

    def sq_norm(self) -> np.ndarray:
        """|z|^2 on the grid."""
        pts = self.points()
        return sum(np.abs(c) ** 2 for c in pts)

    def sample(self, func: Callable, n: int | None = None) -> "GridFunction":
        """Sample ``func(z1[, z2])`` on the grid."""
        values = np.broadcast_to(func(*self.points()), self.shape)
        return GridFunction(np.array(values), self.n)

    def measure(self) -> GaussianMeasure:
        return GaussianMeasure(self.n, self.t)


@dataclass(frozen=True, eq=False)
class GridFunction:
    values: np.ndarray
    n: int

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"grid functions exist only for n in (1, 2), got {self.n}")
        if np.ndim(self.values) != self.n:
            raise ValueError(f"values must be {self.n}-dimensional, got shape {np.shape(self.values)}")

    def __abs__(self):
        return GridFunction(np.abs(self.values), self.n)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            return GridFunction(self.values * other.values, self.n)
        return GridFunction(self.values * other, self.n)

    __rmul__ = __mul__


def default_radius(t: float, tol: float, offset: float = 0.0) -> float:
    """Truncation radius with Gaussian tail exp(-t R^2) below ``tol``."""
    return offset + math.sqrt((math.log(1.0 / tol) + TAIL_MARGIN) / t)


@lru_cache(maxsize=64)
def leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached, read-only Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _gauss_legendre(a: float, b: float, n: int, breakpoints: Sequence[float] = ()):
    cuts = sorted({a, b, *(x for x in breakpoints if a < x < b)})
    x0, w0 = leggauss(n)
    panels = len(cuts) - 1
    xs, ws = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        half = 0.5 * (hi - lo)
        # split the node budget across panels, at least 8 per panel
        m = max(8, n // panels)
        xm, wm = (x0, w0) if m == n else leggauss(m)
        xs.append(lo + half * (xm + 1.0))
        ws.append(half * wm)
    return np.concatenate(xs), np.concatenate(ws)


def build_rule(
    n: int,
    t: float,
    tol: float = 1e-10,
    *,
    n_radial: int | None = None,
    n_angular: int | None = None,
    offset: float = 0.0,
    breakpoints: Sequence[float] = (),
) -> QuadratureRule:
    """Build a polar product rule for dv_t on C^n, n in {1, 2}.

    ``offset`` widens the truncation radius for integrands whose mass sits
    away from the origin (e.g. ``|e^{s<z,a>}|`` peaks near ``|z| = s|a|/2t``).
    ``breakpoints`` are radii where the integrand is not smooth; the radial
    rule is split there.

    Raises ValueError for n > 2, non-positive t, or tol outside (0, 1).
    """
    if n not in (1, 2):
        raise ValueError(f"grid quadrature supports n in (1, 2), got n={n}; use closed forms for larger n")
    if not t > 0:
        raise ValueError(f"scale t must be positive, got {t}")
    if not 0 < tol < 1:
        raise ValueError(f"tol must lie in (0, 1), got {tol}")
    nr_default, na_default = DEFAULT_NODES[n]
    nr = n_radial or nr_default
    na = n_angular or na_default
    radius = default_radius(t, tol, offset)
    r, glw = _gauss_legendre(0.0, radius, nr, breakpoints)
    # (t/pi) e^{-t r^2} r dr dtheta, with the 2*pi of the angle folded in
    w = 2.0 * t * r * np.exp(-t * r * r) * glw
    r.setflags(write=False)
    w.setflags(write=False)
    rule = QuadratureRule(n, float(t), radius, float(tol), r, w, na)
    mass = float(np.sum(w)) ** n
    if abs(mass - 1.0) > tol:
        raise RuntimeError(f"rule fails normalization: |mass - 1| = {abs(mass - 1.0):.3e} > {tol}")
    return rule


def _check_compat(f: GridFunction, mu: GaussianMeasure, rule: QuadratureRule):
    if not (f.n == mu.dimension == rule.n):
        raise ValueError(f"dimension mismatch: function n={f.n}, measure n={mu.dimension}, rule n={rule.n}")
    if not math.isclose(mu.scale, rule.t, rel_tol=1e-12):
        raise ValueError(f"scale mismatch: measure t={mu.scale}, rule t={rule.t}")
    if np.shape(f.values) != rule.shape:
        raise ValueError(f"grid function shape {np.shape(f.values)} does not match rule {rule.shape}")


def integrate(f: GridFunction, mu: GaussianMeasure, rule: QuadratureRule) -> complex:
    """Quadrature approximation of the integral of ``f`` against ``mu``."""
    _check_compat(f, mu, rule)
    # np.sum over a contiguous buffer is pairwise, hence order-deterministic
    total = np.sum((f.values * rule.weights()).ravel())
    return complex(total) if np.iscomplexobj(total) else float(total)


def log_gaussian_monomial_moment(m: MultiIndex | Sequence[int], p: float, t: float) -> float:
    """log of the integral of |z^m|^p against dv_t."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    entries = m.entries if isinstance(m, MultiIndex) else MultiIndex(tuple(m)).entries
    a = p * np.asarray(entries, dtype=float) / 2.0
    return float(np.sum(gammaln(a + 1.0) - a * math.log(t)))


def gaussian_monomial_moment(m: MultiIndex | Sequence[int], p: float, t: float) -> float:
    """Closed form  prod_k Gamma(p m_k/2 + 1) / t^{p m_k/2}; inf past the float range."""
    try:
        return math.exp(log_gaussian_monomial_moment(m, p, t))
    except OverflowError:
        return math.inf


def lp_norm(f: GridFunction, p: float, s: float, rule: QuadratureRule) -> float:
    """(integral of |f|^p dv_s)^{1/p} by quadrature; ``rule`` must be built at scale s."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    mu = GaussianMeasure(f.n, s)
    val = integrate(GridFunction(np.abs(f.values) ** p, f.n), mu, rule)
    return max(float(val), 0.0) ** (1.0 / p)
