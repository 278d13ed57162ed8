"""The Fock reproducing kernel K_t(z, w) = exp(t <z, w>)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .measure import GaussianMeasure, GridFunction, QuadratureRule, integrate

__all__ = [
    "KernelParams",
    "as_point",
    "inner",
    "eval_kernel",
    "kernel_abs_integral",
    "Polynomial",
    "reproduce_check",
]


@dataclass(frozen=True)
class KernelParams:
    t: float
    n: int = 1

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"kernel scale t must be positive, got {self.t}")
        if self.n < 1:
            raise ValueError(f"dimension must be positive, got {self.n}")


def as_point(z) -> np.ndarray:
    """Coerce a scalar or sequence into a 1-d complex array (a point of C^n)."""
    pt = np.atleast_1d(np.asarray(z, dtype=complex))
    if pt.ndim != 1:
        raise ValueError(f"a point of C^n must be 1-d, got shape {pt.shape}")
    if not np.all(np.isfinite(pt)):
        raise ValueError("point has non-finite coordinates")
    return pt


def inner(z, w) -> complex:
    """Hermitian inner product <z, w> = sum z_k conj(w_k)."""
    z, w = as_point(z), as_point(w)
    if z.shape != w.shape:
        raise ValueError(f"dimension mismatch: {z.size} vs {w.size}")
    return complex(np.sum(z * np.conj(w)))


def eval_kernel(params: KernelParams, z, w) -> complex:
    z, w = as_point(z), as_point(w)
    if z.size != params.n or w.size != params.n:
        raise ValueError(f"points must lie in C^{params.n}")
    return complex(np.exp(params.t * inner(z, w)))


def kernel_abs_integral(a, sigma: float, t: float) -> float:
    """Closed form of the integral of |exp(sigma <z, a>)| against dv_t."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    a = as_point(a)
    sq = float(np.sum(np.abs(a) ** 2))
    return math.exp(sigma * sigma * sq / (4.0 * t))


class Polynomial:
    """Sparse polynomial in z: a map from exponent tuples to coefficients."""

    def __init__(self, coeffs: Mapping[Sequence[int], complex]):
        items = {tuple(int(e) for e in k): complex(c) for k, c in coeffs.items()}
        dims = {len(k) for k in items}
        if len(dims) != 1:
            raise ValueError("all exponent tuples must share one dimension")
        self.n = dims.pop()
        self.coeffs = items

    @classmethod
    def monomial(cls, m: Sequence[int], coeff: complex = 1.0) -> "Polynomial":
        return cls({tuple(m): coeff})

    @property
    def degree(self) -> int:
        return max(sum(k) for k in self.coeffs)

    def __call__(self, *coords):
        out = 0.0
        for m, c in self.coeffs.items():
            term = c
            for z, e in zip(coords, m):
                term = term * np.asarray(z) ** e
            out = out + term
        return out

    def at(self, a) -> complex:
        a = as_point(a)
        if a.size != self.n:
            raise ValueError(f"point has dimension {a.size}, polynomial has {self.n}")
        return complex(self(*a))


def reproduce_check(f: Polynomial, a, t: float, rule: QuadratureRule) -> float:
    """|S_t f(a) - f(a)| for a polynomial ``f``; S_t f(a) is computed by quadrature.

    The reference value ``f(a)`` is exact monomial evaluation.
    """
    a = as_point(a)
    if f.n != rule.n or a.size != rule.n:
        raise ValueError("polynomial, point and rule must share the same dimension")
    if not math.isclose(rule.t, t, rel_tol=1e-12):
        raise ValueError(f"rule scale {rule.t} does not match t={t}")
    pts = rule.points()
    phase = sum(ak * np.conj(zk) for ak, zk in zip(a, pts))
    values = np.exp(t * phase) * f(*pts)
    g = GridFunction(np.broadcast_to(values, rule.shape).copy(), rule.n)
    approx = integrate(g, GaussianMeasure(rule.n, t), rule)
    return abs(approx - f.at(a))
