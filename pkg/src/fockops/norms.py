"""Norm bounds, boundedness classification and unboundedness witnesses.

On ``L^p(C^n, dv_s)`` with ``p >= 1`` the operators S_t and T_t are bounded
exactly when ``p t = 2 s``, and then ``||S_t|| <= ||T_t|| = 2^n``.  This
module produces the pieces of evidence for either side:

* a Schur-test certificate for the upper bound ``2^n`` (``p > 1``), or the
  Fubini bound when ``p = 1``;
* lower bounds from the test functions ``exp(-eps y / p)`` pushed through the
  radial operator A, and from power iteration on its discretization;
* witnesses of unboundedness off the threshold, from the closed-form norm
  ratios of the families ``exp(-x|z|^2) z_1^k``.

All ratios with large exponents are formed in log space.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, TruncationWarning
from .kernel import kernel_abs_integral
from .operators import RadialOperatorA, apply_A

__all__ = [
    "THRESHOLD_RTOL",
    "WITNESS_THRESHOLD",
    "ParamTriple",
    "SchurCertificate",
    "NormEstimate",
    "Witness",
    "Bounded",
    "Unbounded",
    "Inconclusive",
    "schur_lambda",
    "schur_certify",
    "fubini_bound",
    "lower_bound_feps",
    "lower_bound_power_iteration",
    "log_witness_ratio_fxk",
    "witness_ratio_fxk",
    "log_witness_ratio_adjoint_fxk",
    "witness_ratio_adjoint_fxk",
    "p1_growth_exponent",
    "p1_witness_ratio",
    "reevaluate_witness",
    "find_witness",
    "threshold_norm_estimate",
    "classify",
    "reduce_ab",
]

THRESHOLD_RTOL = 1e-12
WITNESS_THRESHOLD = 1e3
WITNESS_X_GRID = np.logspace(-3, 2, 60)
MAX_WITNESS_K = 10**9
LOWER_CLAMP_RTOL = 1e-10


@dataclass(frozen=True)
class ParamTriple:
    """Exponent p, kernel scale t and measure scale s."""

    p: float
    t: float
    s: float

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not (self.t > 0 and self.s > 0):
            raise ValueError(f"t and s must be positive, got t={self.t}, s={self.s}")
        if not all(math.isfinite(v) for v in (self.p, self.t, self.s)):
            raise ValueError("p, t, s must be finite")

    @property
    def q(self) -> float:
        """Conjugate exponent; infinite when p = 1."""
        return math.inf if self.p == 1 else self.p / (self.p - 1.0)

    @property
    def threshold_gap(self) -> float:
        """Relative distance |pt - 2s| / (pt) from the boundedness threshold."""
        pt = self.p * self.t
        return abs(pt - 2.0 * self.s) / pt

    @property
    def on_threshold(self) -> bool:
        return self.threshold_gap <= THRESHOLD_RTOL

    def scaled(self, c: float) -> "ParamTriple":
        return ParamTriple(self.p, c * self.t, c * self.s)


@dataclass(frozen=True)
class SchurCertificate:
    params: ParamTriple
    n: int
    lam: float
    c1: float
    c2: float
    bound: float
    residuals_z: np.ndarray = field(repr=False)
    residuals_w: np.ndarray = field(repr=False)

    @property
    def max_residual(self) -> float:
        return float(max(np.max(self.residuals_z, initial=0.0), np.max(self.residuals_w, initial=0.0)))


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: float
    methods: tuple[str, ...]
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper):
            raise ValueError(f"need 0 <= lower <= upper, got [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class Witness:
    """Concrete evidence that S_t (hence T_t) is unbounded.

    ``params`` is the triple the closed-form ratio is evaluated at.  It is the
    input triple except on the transferred adjoint route (p > 2), where the
    ratio lives on ``L^p(dv_sigma)`` with ``sigma = s - q(s - t)``.
    """

    family: str
    params: ParamTriple
    n: int
    x: float | None = None
    k: int | None = None
    a: float | None = None
    ratio: float | None = None
    gamma: float | None = None
    threshold: float = WITNESS_THRESHOLD
    route: str = "direct"

    def __post_init__(self):
        if self.family not in ("f_xk", "adjoint_f_xk", "p1_exponent"):
            raise ValueError(f"unknown witness family {self.family!r}")
        ok = (self.ratio is not None and self.ratio > self.threshold) or (
            self.gamma is not None and self.gamma > 0
        )
        if not ok:
            raise ValueError("witness neither exceeds its threshold nor has positive growth exponent")


@dataclass(frozen=True)
class Bounded:
    params: ParamTriple
    n: int
    estimate: NormEstimate
    status = "bounded"


@dataclass(frozen=True)
class Unbounded:
    params: ParamTriple
    n: int
    witness: Witness
    status = "unbounded"


@dataclass(frozen=True)
class Inconclusive:
    """Off the threshold, but no witness was found on the search grid."""

    params: ParamTriple
    n: int
    reason: str
    status = "inconclusive"


# -- upper bounds -------------------------------------------------------------


def _require_threshold(params: ParamTriple):
    if not params.on_threshold:
        raise ValueError(
            f"pt = {params.p * params.t:g} differs from 2s = {2 * params.s:g} "
            f"(relative gap {params.threshold_gap:.3e}); the operators are unbounded"
        )


def schur_lambda(params: ParamTriple) -> float:
    """Exponent of the Schur weight h(z) = exp(lam |z|^2)."""
    if params.p == 1:
        raise ValueError("p = 1 has no Schur weight; the Fubini bound applies")
    _require_threshold(params)
    lam = params.t / (2.0 * params.q)
    alt = (2.0 * params.s - params.t) / (2.0 * params.p)
    # both expressions coincide on the threshold
    assert math.isclose(lam, alt, rel_tol=1e-10, abs_tol=1e-300), (lam, alt)
    return lam


def _default_samples(n: int, count: int = 16, rmax: float = 3.0) -> np.ndarray:
    r = np.linspace(0.0, rmax, count)
    phase = np.exp(1j * np.linspace(0.0, 2.0, count))
    pts = np.zeros((count, n), dtype=complex)
    pts[:, 0] = r * phase
    if n > 1:
        pts[:, 1:] = (0.5 * r * np.conj(phase))[:, None]
    return pts


def schur_certify(
    params: ParamTriple, n: int = 1, samples: Sequence | None = None, tol: float = 1e-10
) -> SchurCertificate:
    """Schur-test certificate for ``||T_t|| <= 2^n`` on the threshold.

    With kernel H(z, w) = (t/s)^n |exp(t<z,w>)| exp((s-t)|w|^2) against dv_s
    and weight h = exp(lam |z|^2), both Schur integrals have closed forms:

        int H(z, w) h(w)^q dv_s(w) = (t/(t - q lam))^n exp(t^2|z|^2 / 4(t - q lam))
        int H(z, w) h(z)^p dv_s(z) = (t/(s - p lam))^n exp((s - t + t^2/4(s - p lam))|w|^2)

    The residuals are the relative gaps between these and ``C h^q``,
    ``C h^p``; for the computed lam they vanish.
    """
    lam = schur_lambda(params)
    p, q, t, s = params.p, params.q, params.t, params.s
    if not t > q * lam:
        raise ValueError(f"Schur condition t > q*lam fails: t={t}, q*lam={q * lam}")
    if not s - p * lam > 0:
        raise ValueError(f"Schur condition s - p*lam > 0 fails: {s - p * lam}")
    c1 = (t / (t - q * lam)) ** n
    c2 = (t / (s - p * lam)) ** n
    pts = _default_samples(n) if samples is None else np.atleast_2d(np.asarray(samples, dtype=complex))
    if pts.shape[1] != n:
        raise ValueError(f"samples must be points of C^{n}")
    res_z, res_w = [], []
    for z in pts:
        sq = float(np.sum(np.abs(z) ** 2))
        integral_z = c1 * kernel_abs_integral(z, t, t - q * lam)
        res_z.append(abs(integral_z / (c1 * math.exp(q * lam * sq)) - 1.0))
        integral_w = c2 * math.exp((s - t) * sq) * kernel_abs_integral(z, t, s - p * lam)
        res_w.append(abs(integral_w / (c2 * math.exp(p * lam * sq)) - 1.0))
    res_z, res_w = np.array(res_z), np.array(res_w)
    cert = SchurCertificate(params, n, lam, c1, c2, c1 ** (1.0 / q) * c2 ** (1.0 / p), res_z, res_w)
    if cert.max_residual > tol:
        raise RuntimeError(f"Schur inequalities fail by {cert.max_residual:.3e}; formula or input bug")
    return cert


def fubini_bound(t: float, s: float, n: int = 1) -> float:
    """L^1 bound sup_w int H(z, w) dv_s(z) = (t/s)^n exp(gamma |w|^2), finite iff t = 2s."""
    gamma = p1_growth_exponent(t, s)
    if gamma > THRESHOLD_RTOL * max(t, s):
        return math.inf
    return (t / s) ** n


# -- lower bounds -------------------------------------------------------------


def lower_bound_feps(t: float, p: float, eps: float, A: RadialOperatorA) -> float:
    """eps^{1/p} ||A f_eps||_{L^p(0, x_max)} with f_eps(y) = exp(-eps y / p).

    Truncating to (0, x_max] only lowers the value, so the result stays a
    lower bound for ||A||.  A TruncationWarning is emitted when the part of
    f_eps beyond x_max carries more than 1% of its norm, as the value is
    then visibly below its eps-limit.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if not math.isclose(A.t, t, rel_tol=1e-12):
        raise ValueError(f"A has scale {A.t}, expected {t}")
    tail = math.exp(-eps * A.x_max / p)
    if tail > 1e-2:
        warnings.warn(
            f"f_eps keeps {tail:.2%} of its L^{p:g} norm beyond x_max={A.x_max:g}",
            TruncationWarning,
            stacklevel=2,
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        Af = apply_A(A, lambda y: np.exp(-eps * y / p))
    return eps ** (1.0 / p) * A.lp_norm(Af, p)


def lower_bound_power_iteration(
    A: RadialOperatorA, rtol: float = 1e-12, max_iter: int = 20000
) -> float:
    """Largest eigenvalue of the symmetrized discretization of A (p = 2).

    The matrix is entrywise positive, so iteration from the all-ones vector
    converges to the Perron eigenvector; the Rayleigh quotient is returned.
    """
    M = A.matrix()
    v = np.ones(M.shape[0]) / math.sqrt(M.shape[0])
    lam = 0.0
    for _ in range(max_iter):
        w = M @ v
        new = float(v @ w)
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0:
            return 0.0
        v = w / nrm
        if abs(new - lam) <= rtol * abs(new):
            return new
        lam = new
    raise ConvergenceError(f"power iteration did not reach rtol={rtol} in {max_iter} steps")


# each f_eps gives a valid lower bound; larger eps loses less to truncation
EPS_LADDER = (1.0, 4.0, 16.0, 64.0)


@lru_cache(maxsize=32)
def _canonical_lower(p: float, eps_over_t: float, x_max_times_t: float, n_nodes: int):
    # A is dilation-equivalent across t, so t = 1 stands for every scale
    A = RadialOperatorA(1.0, x_max_times_t, n_nodes)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        ladder = [(lower_bound_feps(1.0, p, eps_over_t * m, A), m) for m in EPS_LADDER]
    best, mult = max(ladder)
    power = None
    if p == 2:
        power = lower_bound_power_iteration(RadialOperatorA(1.0, x_max_times_t / 10.0, n_nodes))
    return ladder[0][0], best, mult, power


def threshold_norm_estimate(
    params: ParamTriple,
    n: int = 1,
    eps: float | None = None,
    x_max: float | None = None,
    n_nodes: int = 2000,
) -> NormEstimate:
    """Sandwich [lower, 2^n] for ||T_t|| on the threshold.

    The lower bound is the best one-dimensional bound raised to the n-th
    power (tensor products of radial test functions).  The defaults
    x_max = 8000/t and eps = 2.5e-4 p t leave the same share exp(-2) of f_eps
    beyond x_max for every p; at (p, t) = (2, 2) they are eps = 1e-3,
    x_max = 4000.  The f_eps bound is the best over eps times EPS_LADDER.
    Power iteration (p = 2) runs on a domain ten times shorter.
    """
    _require_threshold(params)
    t, p = params.t, params.p
    x_max = 8000.0 / t if x_max is None else x_max
    eps = 2.5e-4 * p * t if eps is None else eps
    feps, best, mult, power = _canonical_lower(float(p), eps / t, x_max * t, n_nodes)
    methods = ["fubini" if p == 1 else "schur", "f_eps"]
    lower_1d = best
    if power is not None:
        methods.append("power_iteration")
        lower_1d = max(lower_1d, power)
    if n > 1:
        methods.append("tensor")
    upper = fubini_bound(t, params.s, n) if p == 1 else schur_certify(params, n).bound
    lower = lower_1d**n
    # discretization error can push a near-extremal ratio a hair past the bound
    clamped = upper < lower <= upper * (1.0 + LOWER_CLAMP_RTOL)
    if clamped:
        lower = upper
    return NormEstimate(
        lower=lower,
        upper=upper,
        methods=tuple(methods),
        parameters={
            "eps": eps,
            "x_max": x_max,
            "n_nodes": n_nodes,
            "f_eps": feps,
            "f_eps_best": best,
            "eps_best": eps * mult,
            "power_iteration": power,
            "clamped": clamped,
        },
    )


# -- witnesses ----------------------------------------------------------------


def _fxk_terms(params: ParamTriple, x, n: int):
    """log ratio of the direct family = base(x) + k * slope(x)."""
    p, t, s = params.p, params.t, params.s
    x = np.asarray(x, dtype=float)
    lt = np.log(t / (t + x))
    ls = np.log1p(p * x / s)
    return p * n * lt + n * ls, p * lt + 0.5 * p * ls


def _adjoint_sigma(params: ParamTriple) -> float:
    return params.s - params.q * (params.s - params.t)


def _adjoint_terms(params: ParamTriple, x, n: int):
    q, t, s = params.q, params.t, params.s
    sigma = _adjoint_sigma(params)
    x = np.asarray(x, dtype=float)
    lt = np.log(t / (s + x))
    lqx = np.log(s + q * x)
    base = q * n * lt + n * math.log(s / sigma) + n * (lqx - math.log(s))
    slope = q * lt + 0.5 * q * (lqx - math.log(sigma))
    return base, slope


def log_witness_ratio_fxk(params: ParamTriple, x: float, k: int, n: int = 1) -> float:
    """log of ||S_t f_{x,k}||^p / ||f_{x,k}||^p on L^p(dv_s)."""
    if x < 0 or k < 0:
        raise ValueError("need x >= 0 and k >= 0")
    base, slope = _fxk_terms(params, x, n)
    return float(base + k * slope)


def witness_ratio_fxk(params: ParamTriple, x: float, k: int, n: int = 1) -> float:
    """(t/(t+x))^{p(n+k)} ((s+px)/s)^{n+pk/2}; may return inf on overflow."""
    with np.errstate(over="ignore"):
        return float(np.exp(log_witness_ratio_fxk(params, x, k, n)))


def log_witness_ratio_adjoint_fxk(params: ParamTriple, x: float, k: int, n: int = 1) -> float:
    """log of ||S_t^* f_{x,k}||_q^q / ||f_{x,k}||_q^q on L^q(dv_s).

    Returns +inf when s - q(s - t) <= 0: then S_t^* 1 is not in L^q(dv_s).
    """
    if params.p == 1:
        raise ValueError("the adjoint family needs p > 1")
    if x < 0 or k < 0:
        raise ValueError("need x >= 0 and k >= 0")
    if _adjoint_sigma(params) <= 0:
        return math.inf
    base, slope = _adjoint_terms(params, x, n)
    return float(base + k * slope)


def witness_ratio_adjoint_fxk(params: ParamTriple, x: float, k: int, n: int = 1) -> float:
    with np.errstate(over="ignore"):
        return float(np.exp(log_witness_ratio_adjoint_fxk(params, x, k, n)))


def p1_growth_exponent(t: float, s: float) -> float:
    """gamma = s - t + t^2/(4s) = (2s - t)^2 / (4s)."""
    if not (t > 0 and s > 0):
        raise ValueError("t and s must be positive")
    return (2.0 * s - t) ** 2 / (4.0 * s)


def p1_witness_ratio(t: float, s: float, a: float, n: int = 1) -> float:
    """S_t^* f_a(a) = (t/s)^n exp(gamma |a|^2), with ||f_a||_inf = 1."""
    with np.errstate(over="ignore"):
        return float(np.exp(n * math.log(t / s) + p1_growth_exponent(t, s) * a * a))


def reevaluate_witness(w: Witness) -> float:
    """Recompute a witness's ratio from its stored parameters alone."""
    if w.family == "f_xk":
        return witness_ratio_fxk(w.params, w.x, w.k, w.n)
    if w.family == "adjoint_f_xk":
        return witness_ratio_adjoint_fxk(w.params, w.x, w.k, w.n)
    return p1_witness_ratio(w.params.t, w.params.s, w.a, w.n)


def _search_linear(terms, params: ParamTriple, n: int, threshold: float):
    """Smallest k with base(x) + k slope(x) > log(threshold), over x."""
    target = math.log(threshold)

    def k_needed(x):
        base, slope = terms(params, x, n)
        base, slope = float(base), float(slope)
        if base > target:
            return 0
        if slope <= 0:
            return None
        k = math.ceil((target - base) / slope)
        # guard the boundary against rounding
        while base + k * slope <= target:
            k += 1
        return k

    best = None
    for x in WITNESS_X_GRID:
        k = k_needed(x)
        if k is not None and (best is None or k < best[1]):
            best = (float(x), k)
    # refine x around the slope maximum; the grid can miss narrow optima
    res = minimize_scalar(
        lambda lx: -float(terms(params, math.exp(lx), n)[1]),
        bounds=(math.log(WITNESS_X_GRID[0]) - 5.0, math.log(WITNESS_X_GRID[-1])),
        method="bounded",
        options={"xatol": 1e-10},
    )
    x_opt = math.exp(res.x)
    k = k_needed(x_opt)
    if k is not None and (best is None or k < best[1]):
        best = (x_opt, k)
    if best is None or best[1] > MAX_WITNESS_K:
        return None
    return best


def find_witness(params: ParamTriple, n: int = 1, threshold: float = WITNESS_THRESHOLD) -> Witness | None:
    """Search the family that applies off the threshold; None if nothing is found."""
    if params.on_threshold:
        raise ValueError("no witness exists on the threshold pt = 2s")
    p, t, s = params.p, params.t, params.s
    if p * t > 2 * s:
        hit = _search_linear(_fxk_terms, params, n, threshold)
        if hit is None:
            return None
        x, k = hit
        return Witness("f_xk", params, n, x=x, k=k, ratio=witness_ratio_fxk(params, x, k, n), threshold=threshold)
    if p == 1:
        gamma = p1_growth_exponent(t, s)
        # smallest |a| with (t/s)^n exp(gamma a^2) above threshold, plus slack
        a = math.sqrt(max(0.0, math.log(threshold) - n * math.log(t / s)) / gamma) * (1.0 + 1e-9) + 1e-12
        ratio = p1_witness_ratio(t, s, a, n)
        return Witness("p1_exponent", params, n, a=a, ratio=ratio, gamma=gamma, threshold=threshold)
    sigma = _adjoint_sigma(params)
    if sigma <= 0:
        return Witness("adjoint_f_xk", params, n, x=0.0, k=0, ratio=math.inf, threshold=threshold, route="integrability")
    target, route = params, "direct"
    if p > 2:
        # S_t^* bounded on L^q(dv_s) iff S_t bounded on L^q(dv_sigma), q < 2
        target, route = ParamTriple(params.q, t, sigma), "transferred"
    hit = _search_linear(_adjoint_terms, target, n, threshold)
    if hit is None:
        return None
    x, k = hit
    ratio = witness_ratio_adjoint_fxk(target, x, k, n)
    return Witness("adjoint_f_xk", target, n, x=x, k=k, ratio=ratio, threshold=threshold, route=route)


# -- classification -----------------------------------------------------------


def classify(params: ParamTriple, n: int = 1, estimate: bool = True):
    """Bounded (with a norm sandwich), Unbounded (with a witness) or Inconclusive."""
    if params.on_threshold:
        if estimate:
            est = threshold_norm_estimate(params, n)
        else:
            upper = fubini_bound(params.t, params.s, n) if params.p == 1 else schur_certify(params, n).bound
            est = NormEstimate(0.0, upper, ("fubini" if params.p == 1 else "schur",))
        return Bounded(params, n, est)
    w = find_witness(params, n)
    if w is None:
        return Inconclusive(
            params, n, f"no witness up to k = {MAX_WITNESS_K} (relative threshold gap {params.threshold_gap:.3e})"
        )
    return Unbounded(params, n, w)


def reduce_ab(a: float, b: float, s: float, p: float) -> tuple[float, float, bool]:
    """Map S_{a,b}, T_{a,b} on L^p(dv_s) to S_{a+b} on L^p(dv_{s+pa}).

    Returns ``(t', s', condition)`` with condition ``p t' = 2 s'`` tested at
    the classifier's relative tolerance.
    """
    if not (a > 0 and b > 0 and s > 0):
        raise ValueError("a, b, s must be positive")
    if not p >= 1:
        raise ValueError("p must be >= 1")
    t2, s2 = a + b, s + p * a
    return t2, s2, ParamTriple(p, t2, s2).on_threshold
