"""Joint-law kernel integrals for the weighted sum of two squared Bessel processes.

Let ``Z = c X + Y`` with ``X, Y`` independent squared Bessel processes of
dimensions ``delta1, delta2`` started at zero and a coupling ``0 < c < 1``.
Whether ``Z`` remembers more than its current value is decided by the
conditional law of ``Z(2)`` given ``(Z(eps), Z(1))``, and that law is a ratio
of kernel integrals over the hidden coordinate of ``X``:

    pair(eps, z1, z2)       = int_0^{z1} int_0^{z2} A11 A12 dx2 dx1
    triple(eps, z1, z2, z3) = int_0^{z1} int_0^{z2} int_0^{z3} A11 A12 A13 ...

with A11, A12, A13 products of squared-Bessel transition kernels.  The
integration range of each hidden coordinate follows the kernels' own
domains, ``x_i in (0, z_i)``; for ``c < 1`` the second kernel argument
``z_i - c x_i`` then stays positive automatically.

The module also evaluates the three limit regimes that make the dependence
on ``(eps, z1)`` provable rather than merely observable: the ``eps -> 0``
kernel (A21), the ``z3 -> 0`` weighted limit with its beta-type constant
``C1``, and the ``z2 -> infinity`` Laplace asymptotics whose only surviving
``r = z1/z2`` dependence is the factor ``D(r)^(-delta1/2)``.

All kernels are assembled in log space and exponentiated only inside the
innermost quadrature evaluations, with a scenario-wide shift chosen by
probing the log-integrand; products of three transition densities underflow
raw arithmetic long before the ratios of interest become ill-defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import besq, quadrature, specfun
from .besq import BesqParams
from .errors import ConvergenceError, DomainError, UnreliableRatioError
from .quadrature import QuadratureSpec

# Below this log value a pair density cannot be divided through reliably.
_LOG_FLOOR = math.log(1e-300)


@dataclass(frozen=True)
class ScenarioParams:
    """One conditioning scenario: coupling, dimensions, and observation levels.

    The intended coupling range is ``0 < c < 1`` (the regime where the
    conditional law depends on ``(eps, z1)``); ``c = 1`` is admitted as the
    Markov sanity configuration, where every ratio collapses to a single
    squared-Bessel kernel of dimension ``delta1 + delta2``.
    """

    c: float
    delta1: float
    delta2: float
    eps: float
    z1: float
    z2: float
    z3: float

    def __post_init__(self):
        if not 0.0 < self.c <= 1.0:
            raise DomainError("c must lie in (0, 1]")
        if not (self.delta1 > 0.0 and self.delta2 > 0.0):
            raise DomainError("dimensions must be positive")
        if not 0.0 < self.eps < 1.0:
            raise DomainError("eps must lie in (0, 1)")
        if not (self.z1 > 0.0 and self.z2 > 0.0 and self.z3 > 0.0):
            raise DomainError("observation levels must be positive")


@dataclass
class RatioResult:
    """A conditional-density ratio with its quadrature bookkeeping."""

    ratio: float
    log_ratio: float
    log_pair: float
    log_triple: float
    rel_error_estimate: float
    evaluations: int
    converged: bool


# ---------------------------------------------------------------------------
# Kernels, in log space.  Each is a product of two transition densities, one
# for the hidden X coordinate and one for the Y remainder z - c x.

def log_kernel_a11(s: ScenarioParams, x1):
    """Log of the joint density factor of (X(eps), Z(eps)) at (x1, z1).

    Both processes start at zero, so this is a product of two started-at-zero
    kernels; it stays finite in log space down to arbitrarily small ``x1``
    even when ``delta1 < 2`` makes the linear value blow up.
    """
    x1 = np.asarray(x1, dtype=float)
    if x1.size and not (np.all(x1 > 0.0) and np.all(s.c * x1 < s.z1)):
        raise DomainError("need 0 < x1 < z1/c")
    p1 = BesqParams(s.delta1)
    p2 = BesqParams(s.delta2)
    return besq.log_transition_density(p1, s.eps, 0.0, x1) + besq.log_transition_density(
        p2, s.eps, 0.0, s.z1 - s.c * x1
    )


def kernel_a11(s: ScenarioParams, x1):
    """Linear-space value of :func:`log_kernel_a11`."""
    return np.exp(log_kernel_a11(s, x1))


def _log_a12(s: ScenarioParams, x1, x2):
    p1 = BesqParams(s.delta1)
    p2 = BesqParams(s.delta2)
    t = 1.0 - s.eps
    return besq.log_transition_density(p1, t, x1, x2) + besq.log_transition_density(
        p2, t, s.z1 - s.c * x1, s.z2 - s.c * x2
    )


def _log_a13(s: ScenarioParams, x2, x3):
    p1 = BesqParams(s.delta1)
    p2 = BesqParams(s.delta2)
    return besq.log_transition_density(p1, 1.0, x2, x3) + besq.log_transition_density(
        p2, 1.0, s.z2 - s.c * x2, s.z3 - s.c * x3
    )


def _log_a21(c, delta1, delta2, z1, z2, x2):
    # eps -> 0 limit kernel: X restarts from 0, Y carries the whole of z1
    p1 = BesqParams(delta1)
    p2 = BesqParams(delta2)
    return besq.log_transition_density(p1, 1.0, 0.0, x2) + besq.log_transition_density(
        p2, 1.0, z1, z2 - c * x2
    )


def _log_a32(c, delta1, delta2, z2, x2):
    # product of weighted zero-limits, the z3 -> 0 companion of A21
    x2 = np.asarray(x2, dtype=float)
    l1 = (
        -0.5 * delta1 * math.log(2.0)
        - specfun.ln_gamma(0.5 * delta1)
        - 0.5 * x2
    )
    l2 = (
        -0.5 * delta2 * math.log(2.0)
        - specfun.ln_gamma(0.5 * delta2)
        - 0.5 * (z2 - c * x2)
    )
    return l1 + l2


# ---------------------------------------------------------------------------
# Shift probing.  The integrands are exponentials of smooth log surfaces with
# possible endpoint singularities; a coarse probe of the log surface gives a
# shift that keeps the exponentiated integrand O(1) at its peak.

_PROBE = np.concatenate(
    [
        np.array([1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 0.05]),
        np.linspace(0.1, 0.9, 17),
        1.0 - np.array([0.05, 1e-2, 1e-3, 1e-4, 1e-6, 1e-9, 1e-12]),
    ]
)


# Ceiling for shifted exponents.  Probe shifts keep the smooth part of the
# log surface near zero, but an endpoint singularity is unbounded on the log
# scale and the deepest tanh-sinh nodes can push the shifted exponent past
# the overflow point of exp.  Those nodes carry double-exponentially small
# weights, so capping the exponent changes the integral by less than
# exp(-alpha * 700 / (1 - alpha)) for an x**(alpha-1) endpoint, which is
# far below every tolerance in use once alpha >= 0.05.
_EXP_CLAMP = 700.0


def _shifted_exp(u) -> np.ndarray:
    return np.exp(np.minimum(u, _EXP_CLAMP))


def _probe_max_1d(log_f: Callable[[np.ndarray], np.ndarray], hi: float) -> float:
    values = log_f(hi * _PROBE)
    peak = float(np.max(values[np.isfinite(values)]))
    return peak


def _probe_max_2d(log_f, hi1: float, hi2: float) -> float:
    g1 = (hi1 * _PROBE)[:, None]
    g2 = (hi2 * _PROBE)[None, :]
    values = log_f(g1, g2)
    peak = float(np.max(values[np.isfinite(values)]))
    return peak


def _upper_support(z: float, c: float) -> float:
    # largest float b with fl(c * b) < z: rounding is monotone, so every
    # quadrature node x < b then keeps fl(z - c * x) > 0; the raw z / c can
    # round up far enough that nodes hugging it make the companion argument
    # collapse to zero or below
    b = z / c
    while c * b >= z:
        b = math.nextafter(b, 0.0)
    return b


def _scenario_specs(delta1: float, delta2: float, c: float) -> dict:
    left = min(0.5 * delta1, 1.0)
    # every x_i integral runs to z_i/c, where the companion argument
    # z_i - c x_i closes down to zero; for delta2 < 2 that endpoint is
    # singular, and node spacing next to an endpoint away from 0.0 floors
    # the attainable relative error near 1e-8, so asking for more would
    # only burn every refinement level
    right = min(0.5 * delta2, 1.0)
    if delta2 < 2.0:
        return {
            "x1": QuadratureSpec(1e-7, 1e-15, 12, left, right),
            "x2": QuadratureSpec(1e-7, 1e-15, 12, left, right),
            "x3": QuadratureSpec(1e-7, 1e-16, 12, left, right),
            "limit": QuadratureSpec(1e-7, 1e-16, 13, left, right),
        }
    return {
        "x1": QuadratureSpec(1e-8, 1e-15, 12, left, right),
        "x2": QuadratureSpec(1e-9, 1e-15, 12, left, right),
        "x3": QuadratureSpec(1e-10, 1e-16, 12, left, right),
        "limit": QuadratureSpec(1e-10, 1e-16, 13, left, right),
    }


@dataclass
class _LogIntegral:
    log_value: float
    rel_error: float
    evaluations: int
    converged: bool


def _pair_log(s: ScenarioParams, use_eps: bool) -> _LogIntegral:
    # each hidden coordinate ranges over the full support 0 < x_i < z_i / c
    # where both kernel factors are positive; stopping at z_i would discard
    # real mass whenever c < 1
    specs = _scenario_specs(s.delta1, s.delta2, s.c)
    b1 = _upper_support(s.z1, s.c)
    b2 = _upper_support(s.z2, s.c)
    if use_eps:
        shift = _probe_max_2d(
            lambda x1, x2: log_kernel_a11(s, x1) + _log_a12(s, x1, x2), b1, b2
        )

        def integrand(x1, x2):
            return _shifted_exp(log_kernel_a11(s, np.asarray([x1])) + _log_a12(s, x1, x2) - shift)

        res = quadrature.integrate_iterated(
            integrand, [(0.0, b1), (0.0, b2)], [specs["x1"], specs["x2"]]
        )
    else:
        shift = _probe_max_1d(
            lambda x2: _log_a21(s.c, s.delta1, s.delta2, s.z1, s.z2, x2), b2
        )

        def integrand(x2):
            return _shifted_exp(_log_a21(s.c, s.delta1, s.delta2, s.z1, s.z2, x2) - shift)

        res = quadrature.integrate(integrand, 0.0, b2, specs["limit"])

    if res.value <= 0.0:
        return _LogIntegral(-math.inf, math.inf, res.evaluations, res.converged)
    return _LogIntegral(
        shift + math.log(res.value),
        res.error_estimate / res.value,
        res.evaluations,
        res.converged,
    )


def _triple_log(s: ScenarioParams, use_eps: bool) -> _LogIntegral:
    specs = _scenario_specs(s.delta1, s.delta2, s.c)
    b1 = _upper_support(s.z1, s.c)
    b2 = _upper_support(s.z2, s.c)
    b3 = _upper_support(s.z3, s.c)
    h_cache: dict[float, float] = {}
    h_stats = {"rel": 0.0, "evals": 0, "converged": True}

    def h_log(x2: float) -> float:
        # innermost x3 integral, kept in log space end to end: near z3 -> 0
        # its integrable endpoint blowup overflows any linear-space value
        cached = h_cache.get(x2)
        if cached is not None:
            return cached

        def log_inner(x3):
            return _log_a13(s, x2, x3)

        shift = _probe_max_1d(log_inner, b3)
        res = quadrature.integrate(
            lambda x3: _shifted_exp(log_inner(x3) - shift), 0.0, b3, specs["x3"]
        )
        h_stats["evals"] += res.evaluations
        if not res.converged:
            h_stats["converged"] = False
        if res.value > 0.0:
            h_stats["rel"] = max(h_stats["rel"], res.error_estimate / res.value)
        out = shift + math.log(res.value) if res.value > 0.0 else -math.inf
        h_cache[x2] = out
        return out

    def h_log_array(x2) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(x2, dtype=float))
        return np.array([h_log(float(v)) for v in arr.ravel()]).reshape(arr.shape)

    if use_eps:
        def log_total(x1, x2):
            return log_kernel_a11(s, np.asarray(x1)) + _log_a12(s, x1, x2) + h_log_array(x2)

        shift = _probe_max_2d(log_total, b1, b2)

        def integrand(x1, x2):
            return _shifted_exp(log_total(np.asarray([x1]), x2) - shift)

        res = quadrature.integrate_iterated(
            integrand, [(0.0, b1), (0.0, b2)], [specs["x1"], specs["x2"]]
        )
    else:
        def log_total_lim(x2):
            return _log_a21(s.c, s.delta1, s.delta2, s.z1, s.z2, x2) + h_log_array(x2)

        shift = _probe_max_1d(log_total_lim, b2)

        def integrand(x2):
            return _shifted_exp(log_total_lim(x2) - shift)

        res = quadrature.integrate(integrand, 0.0, b2, specs["limit"])

    evaluations = res.evaluations + h_stats["evals"]
    converged = res.converged and h_stats["converged"]
    if res.value <= 0.0:
        return _LogIntegral(-math.inf, math.inf, evaluations, converged)
    return _LogIntegral(
        shift + math.log(res.value),
        res.error_estimate / res.value + h_stats["rel"],
        evaluations,
        converged,
    )


# ---------------------------------------------------------------------------
# Public density and ratio operations.

def joint_density_pair(s: ScenarioParams, use_eps: bool = True) -> float:
    """Kernel integral for the law of ``(Z(eps), Z(1))`` at ``(z1, z2)``.

    With ``use_eps`` false, returns the ``eps -> 0`` limit object built on
    the A21 kernel instead (its own code path; the started-at-zero kernel
    concentrates like a delta function as eps shrinks, which is hostile to
    fixed quadrature).
    """
    res = _pair_log(s, use_eps)
    if not res.converged:
        raise ConvergenceError("pair density quadrature did not converge")
    return math.exp(res.log_value) if math.isfinite(res.log_value) else 0.0


def joint_density_triple(s: ScenarioParams, use_eps: bool = True) -> float:
    """Kernel integral for the law of ``(Z(eps), Z(1), Z(2))`` at ``(z1, z2, z3)``."""
    res = _triple_log(s, use_eps)
    if not res.converged:
        raise ConvergenceError("triple density quadrature did not converge")
    return math.exp(res.log_value) if math.isfinite(res.log_value) else 0.0


def conditional_ratio_detail(s: ScenarioParams, use_eps: bool = True) -> RatioResult:
    """Conditional density of ``Z(2)`` at ``z3`` given ``(Z(eps), Z(1)) = (z1, z2)``.

    Returns the ratio together with its log-space parts, a first-order
    relative error estimate (sum of the pair and triple estimates), the
    innermost evaluation count, and the joint convergence flag.
    """
    pair = _pair_log(s, use_eps)
    if pair.log_value < _LOG_FLOOR:
        raise UnreliableRatioError(
            "pair density below 1e-300; the conditional ratio is not trustworthy"
        )
    triple = _triple_log(s, use_eps)
    log_ratio = triple.log_value - pair.log_value
    return RatioResult(
        ratio=math.exp(log_ratio) if math.isfinite(log_ratio) else 0.0,
        log_ratio=log_ratio,
        log_pair=pair.log_value,
        log_triple=triple.log_value,
        rel_error_estimate=pair.rel_error + triple.rel_error,
        evaluations=pair.evaluations + triple.evaluations,
        converged=pair.converged and triple.converged,
    )


def conditional_ratio(s: ScenarioParams, use_eps: bool = True) -> float:
    """Scalar version of :func:`conditional_ratio_detail`."""
    detail = conditional_ratio_detail(s, use_eps)
    if not detail.converged:
        raise ConvergenceError("conditional ratio quadrature did not converge")
    return detail.ratio


# ---------------------------------------------------------------------------
# Limit objects: z3 -> 0 and z2 -> infinity.

def c1_constant(c: float, delta1: float, delta2: float) -> float:
    """Beta-type constant ``int_0^1 u^{d1/2-1} (1-cu)^{d2/2-1} du``.

    Substituting ``x3 = z3 u`` in the innermost kernel integral leaves a
    ``u``-integral of this shape behind; over the unit interval it covers
    the ``x3 < z3`` part.  The full support runs to ``u = 1/c``, where the
    integral has the closed form ``c^{-d1/2} B(d1/2, d2/2)``; both agree at
    ``c = 1``.
    """
    if not (0.0 < c <= 1.0):
        raise DomainError("c must lie in (0, 1]")
    if not (delta1 > 0.0 and delta2 > 0.0):
        raise DomainError("dimensions must be positive")
    if c == 1.0 and delta2 < 2.0:
        # singular right endpoint at u = 1; node spacing near 1.0 cannot
        # represent better than ~1e-8 relative there
        spec = QuadratureSpec(1e-7, 1e-16, 13, min(0.5 * delta1, 1.0), 0.5 * delta2)
    else:
        spec = QuadratureSpec(1e-12, 1e-16, 13, min(0.5 * delta1, 1.0), 1.0)
    e1 = 0.5 * delta1 - 1.0
    e2 = 0.5 * delta2 - 1.0
    res = quadrature.integrate(lambda u: u**e1 * (1.0 - c * u) ** e2, 0.0, 1.0, spec)
    if not res.converged:
        raise ConvergenceError("c1 constant quadrature did not converge")
    return res.value


def _log_q_tilde(c, delta1, delta2, z1, z2, spec) -> _LogIntegral:
    def log_f(x2):
        return _log_a21(c, delta1, delta2, z1, z2, x2) + _log_a32(c, delta1, delta2, z2, x2)

    b2 = _upper_support(z2, c)
    shift = _probe_max_1d(log_f, b2)
    res = quadrature.integrate(lambda x2: _shifted_exp(log_f(x2) - shift), 0.0, b2, spec)
    if res.value <= 0.0:
        return _LogIntegral(-math.inf, math.inf, res.evaluations, res.converged)
    return _LogIntegral(
        shift + math.log(res.value), res.error_estimate / res.value, res.evaluations, res.converged
    )


def _log_q_pair_limit(c, delta1, delta2, z1, z2, spec) -> _LogIntegral:
    def log_f(x2):
        return _log_a21(c, delta1, delta2, z1, z2, x2)

    b2 = _upper_support(z2, c)
    shift = _probe_max_1d(log_f, b2)
    res = quadrature.integrate(lambda x2: _shifted_exp(log_f(x2) - shift), 0.0, b2, spec)
    if res.value <= 0.0:
        return _LogIntegral(-math.inf, math.inf, res.evaluations, res.converged)
    return _LogIntegral(
        shift + math.log(res.value), res.error_estimate / res.value, res.evaluations, res.converged
    )


def zero_limit_weighted_triple(s: ScenarioParams) -> float:
    """The ``z3 -> 0`` limit of ``z3^{1-(d1+d2)/2}`` times the triple integral.

    Evaluates the closed limit: the full-support rescaling constant
    ``c^{-d1/2} B(d1/2, d2/2)`` times ``q_tilde(z2; z1)``, where ``q_tilde``
    pairs the A21 kernel with the product of weighted zero-limits (A32);
    ``s.z3`` plays no role here and ``s.eps`` refers to the limit object.
    """
    specs = _scenario_specs(s.delta1, s.delta2, s.c)
    qt = _log_q_tilde(s.c, s.delta1, s.delta2, s.z1, s.z2, specs["limit"])
    if not qt.converged:
        raise ConvergenceError("weighted zero-limit quadrature did not converge")
    log_beta = (
        specfun.ln_gamma(0.5 * s.delta1)
        + specfun.ln_gamma(0.5 * s.delta2)
        - specfun.ln_gamma(0.5 * (s.delta1 + s.delta2))
    )
    log_c1 = log_beta - 0.5 * s.delta1 * math.log(s.c)
    return math.exp(log_c1 + qt.log_value)


def d_of_r(r: float, c: float) -> float:
    """The surviving ``r = z1/z2`` dependence in the large-``z2`` ratio law.

    ``D(r) = 1 + (1-c) / (1-c + sqrt(r) c)``; decreasing in ``r`` from 2 at
    ``r = 0+`` to 1 at infinity, and identically ``2 - c`` at ``r = 1``.
    """
    if not r >= 0.0:
        raise DomainError("r must be nonnegative")
    if not (0.0 < c < 1.0):
        raise DomainError("c must lie in (0, 1)")
    return 1.0 + (1.0 - c) / (1.0 - c + math.sqrt(r) * c)


def lemma3_ratio_check(
    r1: float, r2: float, z2: float, c: float, delta1: float, delta2: float
) -> float:
    """Residual of the large-``z2`` double-ratio law.

    For ``rho(r) = q_tilde(z2; z2 r) / q(z2; z2 r)`` the unknown constant and
    the shared ``exp(-z2/2)`` factor cancel in ``rho(r1)/rho(r2)``, whose
    limit is ``(D(r1)/D(r2))^(-delta1/2)``.  Returns the signed difference
    between the double ratio at this ``z2`` and that limit.
    """
    if not (r1 > 0.0 and r2 > 0.0):
        raise DomainError("ratios r must be positive")
    if not z2 > 0.0:
        raise DomainError("z2 must be positive")
    if not (delta1 > 0.0 and delta2 > 0.0):
        raise DomainError("dimensions must be positive")
    spec = _scenario_specs(delta1, delta2, c)["limit"]

    logs = {}
    for r in (r1, r2):
        qt = _log_q_tilde(c, delta1, delta2, z2 * r, z2, spec)
        qp = _log_q_pair_limit(c, delta1, delta2, z2 * r, z2, spec)
        if not (qt.converged and qp.converged):
            raise ConvergenceError("ratio-law quadrature did not converge")
        if qp.log_value < _LOG_FLOOR:
            raise UnreliableRatioError("pair integral below 1e-300 in the ratio law")
        logs[r] = qt.log_value - qp.log_value
    double_ratio = math.exp(logs[r1] - logs[r2])
    predicted = (d_of_r(r1, c) / d_of_r(r2, c)) ** (-0.5 * delta1)
    return double_ratio - predicted


# ---------------------------------------------------------------------------
# Generic endpoint Laplace asymptotics.

@dataclass(frozen=True)
class LaplaceProblem:
    """Data of an endpoint Laplace integral ``int_0^1 e^{-lam phi} f x^{nu-1} dx``.

    ``phi`` must be strictly increasing on (0, 1) with ``phi(0+) = a`` and
    ``phi'(0+) = b > 0``; ``f(lam, .)`` bounded with ``f(lam, x/lam)``
    converging to the constant ``f_limit``.
    """

    a: float
    b: float
    nu: float
    phi: Callable[[np.ndarray], np.ndarray]
    f: Callable[[float, np.ndarray], np.ndarray]
    f_limit: float

    def __post_init__(self):
        if not self.b > 0.0:
            raise DomainError("phi'(0+) must be positive")
        if not self.nu > 0.0:
            raise DomainError("nu must be positive")


def laplace_asymptotic(p: LaplaceProblem, lam: float) -> float:
    """Leading term ``f_limit Gamma(nu) b^{-nu} lam^{-nu} e^{-a lam}``."""
    if not lam > 0.0:
        raise DomainError("lam must be positive")
    return p.f_limit * math.exp(
        specfun.ln_gamma(p.nu) - p.nu * (math.log(p.b) + math.log(lam)) - p.a * lam
    )


def laplace_numeric(p: LaplaceProblem, lam: float, spec: QuadratureSpec | None = None) -> float:
    """Direct quadrature of the Laplace integral, the oracle for the asymptotic.

    The constant part ``e^{-a lam}`` is factored out before integrating so
    that large ``lam`` with ``a > 0`` cannot underflow the whole integrand.
    """
    if not lam > 0.0:
        raise DomainError("lam must be positive")
    if spec is None:
        spec = QuadratureSpec(1e-11, 1e-18, 13, min(p.nu, 1.0), 1.0)

    def integrand(x):
        return np.exp(-lam * (p.phi(x) - p.a)) * p.f(lam, x) * x ** (p.nu - 1.0)

    res = quadrature.integrate(integrand, 0.0, 1.0, spec)
    if not res.converged:
        raise ConvergenceError("Laplace quadrature did not converge")
    return math.exp(-p.a * lam) * res.value


def laplace_hypothesis_margin(p: LaplaceProblem, n: int = 1000) -> float:
    """Grid check of the growth bound ``(phi(x) - a) / x >= K > 0``.

    Returns the grid minimum of the quotient; a positive value certifies the
    hypothesis that justifies trusting :func:`laplace_asymptotic`.
    """
    x = (np.arange(n) + 0.5) / n
    return float(np.min((p.phi(x) - p.a) / x))


def standard_laplace_problems() -> dict[str, LaplaceProblem]:
    """Three reference problems covering curvature, offset, and nu variety.

    quadratic: phi = x + x^2/2 (a=0, b=1), nu=1, f constant.
    affine:    phi = 3 + 2x (a=3, b=2), nu=1/2, f = 1/(1+x).
    log:       phi = -log(1 - x/2) (a=0, b=1/2), nu=2, f constant.
    """
    one = lambda lam, x: np.ones_like(x)
    return {
        "quadratic": LaplaceProblem(
            0.0, 1.0, 1.0, lambda x: x + 0.5 * x * x, one, 1.0
        ),
        "affine": LaplaceProblem(
            3.0, 2.0, 0.5, lambda x: 3.0 + 2.0 * x, lambda lam, x: 1.0 / (1.0 + x), 1.0
        ),
        "log": LaplaceProblem(
            0.0, 0.5, 2.0, lambda x: -np.log1p(-0.5 * x), one, 1.0
        ),
    }
