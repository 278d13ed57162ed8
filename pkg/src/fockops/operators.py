"""Pointwise application of S_t, T_t, their adjoints, and the radial operator A.

On ``L^p(C^n, dv_s)``

    S_t f(z)   = int exp(t<z,w>) f(w) dv_t(w)
    T_t f(z)   = int |exp(t<z,w>)| f(w) dv_t(w)
    S_t^* f(z) = (t/s)^n exp((s-t)|z|^2) int exp(t<z,w>) f(w) dv_s(w)
    T_t^* f(z) = (t/s)^n exp((s-t)|z|^2) int |exp(t<z,w>)| f(w) dv_s(w)

and, on ``L^p(0, inf)``,

    A G(x) = int_0^inf t exp(-t(x+y)/2) I_0(t sqrt(xy)) G(y) dy.

Grid functions for S_t, T_t must be sampled on a rule of scale ``t``; those
for the adjoints on a rule of scale ``s``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import TruncationWarning
from .measure import GridFunction, QuadratureRule, _gauss_legendre
from .special import i0e

__all__ = [
    "OperatorSpec",
    "TruncationWarning",
    "apply_S",
    "apply_T",
    "apply_S_adjoint",
    "apply_T_adjoint",
    "fxk",
    "RadialOperatorA",
    "kernel_A_eval",
    "apply_A",
    "radial_correspondence_check",
]

KINDS = ("S", "T", "S_adj", "T_adj")


@dataclass(frozen=True)
class OperatorSpec:
    kind: str
    t: float
    s: float
    n: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (self.t > 0 and self.s > 0):
            raise ValueError(f"t and s must be positive, got t={self.t}, s={self.s}")
        if self.n < 1:
            raise ValueError(f"dimension must be positive, got {self.n}")

    @property
    def rule_scale(self) -> float:
        """Scale of the measure the integral is taken against."""
        return self.t if self.kind in ("S", "T") else self.s


def fxk(x: float, k: int, first: int = 0) -> Callable:
    """The test family f_{x,k}(z) = exp(-x|z|^2) z_1^k as a grid callable."""

    def f(*coords):
        sq = sum(np.abs(c) ** 2 for c in coords)
        return np.exp(-x * sq) * coords[first] ** k

    return f


def _points(z, n: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if n == 1 and z.ndim <= 1:
        return z.reshape(-1, 1)
    z = np.atleast_2d(z)
    if z.shape[-1] != n:
        raise ValueError(f"points must have {n} coordinates, got shape {z.shape}")
    return z


def _check(spec: OperatorSpec, kinds: tuple[str, ...], f: GridFunction, rule: QuadratureRule):
    if spec.kind not in kinds:
        raise ValueError(f"operator spec of kind {spec.kind!r} passed where {kinds} expected")
    if spec.n not in (1, 2):
        raise ValueError(f"grid application supports n in (1, 2), got {spec.n}")
    if f.n != spec.n or rule.n != spec.n:
        raise ValueError(f"dimension mismatch: spec n={spec.n}, f n={f.n}, rule n={rule.n}")
    if not math.isclose(rule.t, spec.rule_scale, rel_tol=1e-12):
        raise ValueError(f"{spec.kind} integrates against dv_{spec.rule_scale}, rule has scale {rule.t}")
    if np.shape(f.values) != rule.shape:
        raise ValueError(f"grid function shape {np.shape(f.values)} does not match rule {rule.shape}")


def _kernel_integrals(z, f: GridFunction, rule: QuadratureRule, t: float, modulus: bool) -> np.ndarray:
    pts = rule.points()
    fw = (f.values * rule.weights()).ravel()
    zs = _points(z, rule.n)
    out = np.empty(len(zs), dtype=float if modulus and not np.iscomplexobj(fw) else complex)
    for i, zi in enumerate(zs):
        # <z, w> = sum z_k conj(w_k)
        phase = sum(zk * np.conj(wk) for zk, wk in zip(zi, pts))
        phase = np.broadcast_to(phase, rule.shape).ravel()
        if modulus:
            ker = np.exp(t * phase.real)
        else:
            ker = np.exp(t * phase)
        out[i] = np.sum(ker * fw)
    return out


def _adjoint_weight(spec: OperatorSpec, z) -> np.ndarray:
    zs = _points(z, spec.n)
    sq = np.sum(np.abs(zs) ** 2, axis=1)
    return (spec.t / spec.s) ** spec.n * np.exp((spec.s - spec.t) * sq)


def apply_S(spec: OperatorSpec, f: GridFunction, z, rule: QuadratureRule) -> np.ndarray:
    """S_t f at the point(s) ``z``; returns one complex value per point."""
    _check(spec, ("S",), f, rule)
    return _kernel_integrals(z, f, rule, spec.t, modulus=False)


def apply_T(spec: OperatorSpec, f: GridFunction, z, rule: QuadratureRule) -> np.ndarray:
    _check(spec, ("T",), f, rule)
    return _kernel_integrals(z, f, rule, spec.t, modulus=True)


def apply_S_adjoint(spec: OperatorSpec, f: GridFunction, z, rule: QuadratureRule) -> np.ndarray:
    """Adjoint of S_t for the dv_s pairing; ``rule`` has scale s."""
    _check(spec, ("S_adj",), f, rule)
    return _adjoint_weight(spec, z) * _kernel_integrals(z, f, rule, spec.t, modulus=False)


def apply_T_adjoint(spec: OperatorSpec, f: GridFunction, z, rule: QuadratureRule) -> np.ndarray:
    _check(spec, ("T_adj",), f, rule)
    return _adjoint_weight(spec, z) * _kernel_integrals(z, f, rule, spec.t, modulus=True)


@dataclass(frozen=True, eq=False)
class RadialOperatorA:
    """Nystrom discretization of A on (0, x_max].

    Nodes are Gauss-Legendre in ``u = sqrt(y)``: the kernel is a Gaussian
    bump of fixed width ``1/sqrt(t)`` in that variable, wherever it sits.
    """

    t: float
    x_max: float | None = None
    n_nodes: int = 2000
    breakpoints: Sequence[float] = ()
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"t must be positive, got {self.t}")
        x_max = 400.0 / self.t if self.x_max is None else float(self.x_max)
        if not x_max > 0:
            raise ValueError(f"x_max must be positive, got {x_max}")
        if self.n_nodes < 1:
            raise ValueError("need at least one node")
        object.__setattr__(self, "x_max", x_max)
        u, w = _gauss_legendre(0.0, math.sqrt(x_max), self.n_nodes, [math.sqrt(b) for b in self.breakpoints])
        y = u * u
        wy = 2.0 * u * w
        y.setflags(write=False)
        wy.setflags(write=False)
        object.__setattr__(self, "nodes", y)
        object.__setattr__(self, "weights", wy)

    def kernel(self, x, y) -> np.ndarray:
        return kernel_A_eval(self, x, y)

    @cached_property
    def kernel_matrix(self) -> np.ndarray:
        """k(y_i, y_j) on the nodes; built once per instance."""
        y = self.nodes
        K = kernel_A_eval(self, y[:, None], y[None, :])
        K.setflags(write=False)
        return K

    def matrix(self) -> np.ndarray:
        """Symmetrized discretization  sqrt(w_i) k(y_i, y_j) sqrt(w_j)."""
        sw = np.sqrt(self.weights)
        return sw[:, None] * self.kernel_matrix * sw[None, :]

    def lp_norm(self, values: np.ndarray, p: float) -> float:
        """L^p(0, x_max) norm of a function sampled on the nodes."""
        return float(np.sum(self.weights * np.abs(values) ** p)) ** (1.0 / p)


def kernel_A_eval(A: RadialOperatorA, x, y):
    """t exp(-t(x+y)/2) I_0(t sqrt(xy)), in the overflow-free form

    t exp(-t (sqrt x - sqrt y)^2 / 2) * [exp(-t sqrt(xy)) I_0(t sqrt(xy))].
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise ValueError("kernel of A is defined for nonnegative arguments only")
    t = A.t
    rx, ry = np.sqrt(x), np.sqrt(y)
    out = t * np.exp(-0.5 * t * (rx - ry) ** 2) * i0e(t * rx * ry)
    return out if np.ndim(out) else float(out)


def apply_A(A: RadialOperatorA, G, x=None, tail_tol: float = 1e-2) -> np.ndarray:
    """A G at the rule nodes, or at ``x`` when given (Nystrom extension).

    ``G`` is a callable of y or an array sampled on ``A.nodes``.  Emits a
    TruncationWarning when the share of |G| mass in the last tenth of
    (0, x_max] exceeds ``tail_tol``.
    """
    y, w = A.nodes, A.weights
    g = np.asarray(G(y) if callable(G) else G, dtype=float)
    if g.shape != y.shape:
        raise ValueError(f"G must be sampled on the {y.size} rule nodes, got shape {g.shape}")
    mass = w * np.abs(g)
    total = mass.sum()
    if total > 0:
        share = mass[y > 0.9 * A.x_max].sum() / total
        if share > tail_tol:
            warnings.warn(
                f"{share:.2%} of |G| mass lies in the last tenth of (0, {A.x_max:g}]",
                TruncationWarning,
                stacklevel=2,
            )
    wg = w * g
    if x is None:
        return A.kernel_matrix @ wg
    at = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(at.shape)
    # chunked to bound memory at large node counts
    for lo in range(0, at.size, 512):
        xs = at[lo : lo + 512]
        out[lo : lo + 512] = kernel_A_eval(A, xs[:, None], y[None, :]) @ wg
    return out


def radial_correspondence_check(
    t: float, G: Callable, z, rule: QuadratureRule, A: RadialOperatorA
) -> np.ndarray:
    """|T_t f(z) - exp(t|z|^2/2) (A G)(|z|^2)| for f(w) = G(|w|^2) exp(t|w|^2/2), n = 1.

    The left side is a 2-D polar quadrature, the right a 1-D Nystrom sum;
    the two share no nodes.
    """
    if rule.n != 1:
        raise ValueError("the radial correspondence is stated for n = 1")
    if not (math.isclose(rule.t, t, rel_tol=1e-12) and math.isclose(A.t, t, rel_tol=1e-12)):
        raise ValueError("rule, A and t must share one scale")
    if A.x_max < rule.radius**2:
        raise ValueError(
            f"truncation mismatch: A covers y <= {A.x_max:g} but the planar rule reaches |w|^2 = {rule.radius**2:g}"
        )
    f = rule.sample(lambda w: G(np.abs(w) ** 2) * np.exp(0.5 * t * np.abs(w) ** 2))
    spec = OperatorSpec("T", t, t, 1)
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    lhs = apply_T(spec, f, zs, rule).real
    sq = np.abs(zs) ** 2
    rhs = np.exp(0.5 * t * sq) * apply_A(A, G, sq)
    return np.abs(lhs - rhs)
