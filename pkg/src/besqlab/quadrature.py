"""Tanh-sinh quadrature on finite intervals, with semi-infinite and nested variants.

The tanh-sinh substitution ``x = m + r tanh((pi/2) sinh t)`` pushes the
endpoints to infinity double-exponentially fast, so integrable endpoint
singularities like ``x**(alpha-1)`` cost nothing special: node weights decay
faster than any power of the distance to the endpoint.  Refinement halves the
step in ``t`` and reuses every previously evaluated node.

Integrands must be vectorized: they are called once per refinement level with
a 1-D array of abscissae and must return an array of the same shape.
Integrands are never evaluated at the endpoints themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError

# Beyond this t the distance to the endpoint, 2/(1+exp(2*(pi/2)*sinh t)),
# underflows double precision entirely; nodes out there carry zero mass.
_T_MAX = math.asinh(745.0 / math.pi)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and refinement budget for one integration axis.

    ``left_exponent`` / ``right_exponent`` record the integrable endpoint
    behavior ``(x - a)**(exponent - 1)`` the caller expects; tanh-sinh does not
    need the value to place nodes, but the spec travels with the axis so that
    nested integrals document their singularity structure.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_levels: int = 12
    left_exponent: float = 1.0
    right_exponent: float = 1.0

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise DomainError("tolerances must be positive")
        if self.max_levels < 2:
            raise DomainError("max_levels must be at least 2")
        if not (0.0 < self.left_exponent <= 1.0 and 0.0 < self.right_exponent <= 1.0):
            raise DomainError("endpoint exponents must lie in (0, 1]")


@dataclass
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool


# Node tables per refinement level, shared by every integration.  Level k
# contributes the abscissae t = j * 2**-k for odd j (level 0: all integers
# including t = 0), each stored as (distance to endpoint, weight).
_node_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _nodes(level: int) -> tuple[np.ndarray, np.ndarray]:
    cached = _node_cache.get(level)
    if cached is not None:
        return cached
    if level == 0:
        t = np.arange(1.0, math.floor(_T_MAX) + 1.0)
    else:
        h = 2.0 ** (-level)
        j = np.arange(1.0, _T_MAX / h, 2.0)
        t = j * h
    w_arg = math.pi * np.sinh(t)  # 2 * (pi/2) sinh t
    # delta = 1 - tanh((pi/2) sinh t) computed without forming exp(+w_arg)
    e = np.exp(-w_arg)
    delta = 2.0 * e / (1.0 + e)
    weight = 0.5 * math.pi * np.cosh(t) * delta * (2.0 - delta)
    keep = delta > 0.0
    result = (delta[keep], weight[keep])
    _node_cache[level] = result
    return result


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> QuadratureResult:
    """Integrate a vectorized integrand over the open interval ``(a, b)``.

    Parameters
    ----------
    f : callable
        Maps a 1-D array of points in ``(a, b)`` to integrand values.
        Must be finite on the open interval; endpoint singularities are fine
        because the endpoints themselves are never passed in.
    a, b : float
        Finite limits with ``a < b``.
    spec : QuadratureSpec, optional
        Tolerances and budget; defaults to ``QuadratureSpec()``.

    Returns
    -------
    QuadratureResult
        ``converged`` is False if the refinement budget ran out before the
        successive-level difference met the tolerance; no exception is raised
        so the caller can inspect the partial value.
    """
    if spec is None:
        spec = QuadratureSpec()
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DomainError("integrate requires finite limits with a < b")

    m = 0.5 * (a + b)
    r = 0.5 * (b - a)

    # A singular endpoint that is not exactly 0.0 cannot be approached closer
    # than its ulp, and the mass inside that band is lost to double precision
    # no matter how deep the refinement goes.  Fold that floor into the error
    # estimate so convergence is never claimed below what is representable.
    rep_floor = 0.0
    for endpoint, alpha in ((a, spec.left_exponent), (b, spec.right_exponent)):
        if alpha < 1.0 and endpoint != 0.0:
            gap = 0.5 * math.ulp(abs(endpoint)) / (b - a)
            rep_floor = max(rep_floor, gap**alpha / alpha)

    evaluations = 0
    weighted_sum = 0.0
    previous = math.nan
    value = math.nan
    error = math.inf
    converged = False

    for level in range(spec.max_levels + 1):
        if level == 0:
            center = float(f(np.array([m]))[0])
            evaluations += 1
            weighted_sum += 0.5 * math.pi * center
        delta, weight = _nodes(level)
        x_left = a + r * delta
        x_right = b - r * delta
        # mask each side on its own: near a singular endpoint one side keeps
        # representable nodes long after the other has rounded onto its limit
        left_ok = x_left > a
        right_ok = x_right < b
        xs = np.concatenate([x_left[left_ok], x_right[right_ok]])
        if xs.size:
            fv = np.asarray(f(xs), dtype=float)
            evaluations += xs.size
            n = int(left_ok.sum())
            weighted_sum += float(np.dot(weight[left_ok], fv[:n]))
            weighted_sum += float(np.dot(weight[right_ok], fv[n:]))
        h = 2.0 ** (-level)
        value = r * h * weighted_sum
        if not math.isfinite(value):
            # an inf or nan never refines away, and rel_tol * |value| would
            # otherwise accept it as converged
            return QuadratureResult(value, math.inf, evaluations, False)
        if level >= 1:
            error = max(abs(value - previous), rep_floor * abs(value))
            if level >= 2 and error <= max(spec.rel_tol * abs(value), spec.abs_tol):
                converged = True
                break
        previous = value

    return QuadratureResult(value, error, evaluations, converged)


def integrate_to_inf(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    spec: QuadratureSpec | None = None,
) -> QuadratureResult:
    """Integrate over ``(a, inf)`` via the substitution ``y = a + s/(1-s)``.

    Suited to integrands with at-least-exponential tail decay; the far tail
    maps to an invisible sliver near ``s = 1``.
    """
    a = float(a)
    if not math.isfinite(a):
        raise DomainError("integrate_to_inf requires a finite lower limit")
    if spec is None:
        spec = QuadratureSpec()
    # the far tail maps to s -> 1 where a decaying integrand is smooth, so the
    # caller's right-endpoint hint does not survive the substitution
    spec = replace(spec, right_exponent=1.0)

    def transformed(s: np.ndarray) -> np.ndarray:
        y = a + s / (1.0 - s)
        out = np.zeros_like(s)
        ok = np.isfinite(y)
        if np.any(ok):
            fv = np.asarray(f(y[ok]), dtype=float)
            with np.errstate(over="ignore", invalid="ignore"):
                contrib = fv / (1.0 - s[ok]) ** 2
            # where f already underflowed to 0, the Jacobian blowup is moot
            contrib[fv == 0.0] = 0.0
            out[ok] = contrib
        return out

    return integrate(transformed, 0.0, 1.0, spec)


def integrate_iterated(
    f: Callable[..., np.ndarray],
    boxes: Sequence[tuple],
    specs: Sequence[QuadratureSpec],
) -> QuadratureResult:
    """Iterated integral over up to three nested axes.

    Parameters
    ----------
    f : callable
        ``f(x1, ..., xd)`` where the leading ``d - 1`` arguments are scalars
        and the last is a 1-D array; must return an array of matching shape.
    boxes : sequence of (lower, upper)
        One per axis, outermost first.  Each bound is a float or a callable
        receiving the outer coordinates (so inner limits may depend on them).
    specs : sequence of QuadratureSpec
        One per axis.

    Returns
    -------
    QuadratureResult
        ``evaluations`` counts innermost integrand evaluations.  The error
        estimate composes for nonnegative integrands: each axis adds its own
        quadrature error plus the worst inner relative error scaled by the
        axis value (inner nodes that underflowed to zero contribute their
        absolute estimate times the interval length instead).
    """
    d = len(boxes)
    if d < 1 or d > 3:
        raise DomainError("integrate_iterated supports 1 to 3 axes")
    if len(specs) != d:
        raise DomainError("need one QuadratureSpec per axis")

    eval_count = [0]
    all_converged = [True]

    def resolve(bound, prefix):
        if callable(bound):
            return float(bound(*prefix))
        return float(bound)

    def nest(prefix: tuple, axis: int) -> QuadratureResult:
        lo = resolve(boxes[axis][0], prefix)
        hi = resolve(boxes[axis][1], prefix)
        if axis == d - 1:
            def innermost(xs: np.ndarray) -> np.ndarray:
                eval_count[0] += xs.size
                return np.asarray(f(*prefix, xs), dtype=float)

            res = integrate(innermost, lo, hi, specs[axis])
            if not res.converged:
                all_converged[0] = False
            return res

        inner_pairs: list[tuple[float, float]] = []

        def layer(xs: np.ndarray) -> np.ndarray:
            values = np.empty_like(xs)
            for i, xi in enumerate(xs):
                sub = nest(prefix + (float(xi),), axis + 1)
                values[i] = sub.value
                inner_pairs.append((sub.value, sub.error_estimate))
            return values

        res = integrate(layer, lo, hi, specs[axis])
        if not res.converged:
            all_converged[0] = False
        # sum_j w_j e_j <= max_j(e_j / v_j) * sum_j w_j v_j for v_j >= 0
        rel = max((e / abs(v) for v, e in inner_pairs if v != 0.0), default=0.0)
        zero_abs = max((e for v, e in inner_pairs if v == 0.0), default=0.0)
        propagated = rel * abs(res.value) + zero_abs * (hi - lo)
        return QuadratureResult(
            res.value, res.error_estimate + propagated, res.evaluations, res.converged
        )

    top = nest((), 0)
    return QuadratureResult(top.value, top.error_estimate, eval_count[0], all_converged[0])
