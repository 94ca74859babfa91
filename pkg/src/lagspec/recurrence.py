"""Generalized Laguerre polynomials and functions via three-term recurrences.

Three evaluation routes are provided:

* the textbook three-term recurrence (``eval_poly_standard`` /
  ``eval_fun_standard``),
* a difference reformulation that propagates successive differences
  ``dL_n = L_n - L_{n-1}`` and loses fewer digits for small arguments
  (``eval_poly_modified`` / ``eval_fun_modified``),
* an adaptive rescaling scheme that folds the exponential prefactor
  ``exp(-x/2)`` into the iteration in small portions, so Laguerre functions
  of degree 1000+ can be evaluated at large arguments without overflow or
  underflow (``eval_fun_stable`` and friends).

All functions are pure; overflow/underflow in the standard routes is
deliberately passed through as IEEE infinities/zeros rather than masked,
since callers use it to detect where the stable route is required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LagParams",
    "LagSeries",
    "StableEvalConfig",
    "eval_poly_standard",
    "eval_poly_modified",
    "eval_poly_derivative",
    "eval_fun_standard",
    "eval_fun_modified",
    "eval_fun_stable",
    "eval_fun_derivative",
    "fun_series_stable",
    "fun_value_deriv_stable",
    "norm_const",
]


@dataclass(frozen=True)
class LagParams:
    """Family exponent and degree of a generalized Laguerre evaluation.

    ``alpha`` must be > -1 (integrability of the weight ``x^alpha e^-x``),
    ``n`` is the highest degree requested.
    """

    alpha: float
    n: int

    def __post_init__(self) -> None:
        if not self.alpha > -1.0:
            raise ValueError(f"alpha must be > -1, got {self.alpha}")
        if self.n < 0:
            raise ValueError(f"degree must be >= 0, got {self.n}")


@dataclass
class LagSeries:
    """Values ``L_0 .. L_n`` at one abscissa.

    ``values[k]`` holds either the polynomial ``L_k(x)`` or the function
    ``exp(-x/2) L_k(x)`` depending on which routine produced the series.
    ``deltas[k-1] = values[k] - values[k-1]`` when the difference form was
    used, ``derivs`` is filled on demand.
    """

    params: LagParams
    x: float
    values: np.ndarray
    deltas: np.ndarray | None = None
    derivs: np.ndarray | None = None


@dataclass(frozen=True)
class StableEvalConfig:
    """Thresholds of the adaptive rescaling scheme.

    Rescaling is triggered once ``|L| > exp(k1)`` and pushes the magnitude
    back down to about ``exp(-k2)``.  ``k1 + k2 < 80`` keeps every
    intermediate representable in double precision.
    """

    k1: float = 32.0
    k2: float = 32.0

    def __post_init__(self) -> None:
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError("k1 and k2 must be positive")
        if self.k1 + self.k2 >= 80.0:
            raise ValueError("k1 + k2 must be < 80 to avoid overflow")


_DEFAULT_STABLE_CFG = StableEvalConfig()

# Cody-Waite split of ln 2: the high part carries ~33 significant bits, so
# products with moderate integers are exact; the low part restores full
# precision in the compensated exponent of the rescaled evaluation.
_LN2 = math.log(2.0)
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10


def _scale_exponent(M, x):
    """Compensated ``t = M ln 2 - x/2`` as a (head, tail) pair.

    ``M * _LN2_HI`` is exact for the integer counts arising here; the
    head/tail split keeps the path-dependent part of the final exponent
    below one ulp of the result, which is what makes the rescaled
    evaluation independent of its threshold configuration.
    """
    a = M * _LN2_HI
    b = 0.5 * x
    s = a - b
    bv = s - a
    err = (a - (s - bv)) + (-b - bv)
    return s, err + M * _LN2_LO


def _finalize_scalar(L: float, M: int, x: float) -> float:
    # canonicalize to mantissa-exponent form first: iterates produced under
    # different rescale thresholds differ only by exact powers of two, so
    # after this step the result is bitwise threshold-independent
    mant, e = math.frexp(L)
    t_hi, t_lo = _scale_exponent(M + e, x)
    return mant * math.exp(t_hi) * (1.0 + t_lo)


def _finalize_array(L, M, x):
    mant, e = np.frexp(L)
    t_hi, t_lo = _scale_exponent((np.asarray(M) + e).astype(float), x)
    return mant * np.exp(t_hi) * (1.0 + t_lo)


def _check_x(x: float) -> float:
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"abscissa must be >= 0, got {x}")
    return x


def eval_poly_standard(params: LagParams, x: float) -> LagSeries:
    """Evaluate ``L_0(x) .. L_n(x)`` by the classical three-term recurrence.

    (k+1) L_{k+1} = (2k + alpha + 1 - x) L_k - (k + alpha) L_{k-1}.
    """
    x = _check_x(x)
    alpha, n = params.alpha, params.n
    values = np.empty(n + 1)
    values[0] = 1.0
    if n >= 1:
        values[1] = alpha + 1.0 - x
    for k in range(1, n):
        values[k + 1] = ((2.0 * k + alpha + 1.0 - x) * values[k]
                         - (k + alpha) * values[k - 1]) / (k + 1.0)
    return LagSeries(params=params, x=x, values=values)


def eval_poly_modified(params: LagParams, x: float) -> LagSeries:
    """Evaluate ``L_0(x) .. L_n(x)`` via the difference recurrence.

    Propagating ``dL_k = L_k - L_{k-1}`` avoids storing the coefficient
    ``2k + alpha + 1 - x`` explicitly, which is the dominant source of lost
    digits for small ``x``:

        dL_{k+1} = ((k+alpha) dL_k - x L_k) / (k+1),
        L_{k+1}  = L_k + dL_{k+1}.
    """
    x = _check_x(x)
    alpha, n = params.alpha, params.n
    values = np.empty(n + 1)
    deltas = np.empty(max(n, 0))
    values[0] = 1.0
    if n >= 1:
        deltas[0] = alpha - x
        values[1] = values[0] + deltas[0]
    for k in range(1, n):
        deltas[k] = ((k + alpha) * deltas[k - 1] - x * values[k]) / (k + 1.0)
        values[k + 1] = values[k] + deltas[k]
    return LagSeries(params=params, x=x, values=values, deltas=deltas)


def eval_poly_derivative(series: LagSeries) -> np.ndarray:
    """Derivatives ``L_0'(x) .. L_n'(x)`` from a polynomial value series.

    Uses ``L_{k+1}' = L_k' - L_k`` (equivalently the derivative is minus
    the partial sum of lower-degree values).  Attaches the result to
    ``series.derivs`` and returns it.
    """
    n = series.params.n
    values = series.values
    derivs = np.empty(n + 1)
    derivs[0] = 0.0
    for k in range(n):
        derivs[k + 1] = derivs[k] - values[k]
    series.derivs = derivs
    return derivs


def eval_fun_standard(params: LagParams, x: float) -> LagSeries:
    """Laguerre functions ``exp(-x/2) L_k(x)`` via the direct recurrence.

    The whole prefactor is applied up front; for large ``x`` it underflows
    to zero and the entire series collapses.  That failure mode is passed
    through on purpose -- use the stable route when it matters.
    """
    x = _check_x(x)
    alpha, n = params.alpha, params.n
    w = math.exp(-x / 2.0)
    values = np.empty(n + 1)
    values[0] = w
    if n >= 1:
        values[1] = (alpha + 1.0 - x) * w
    for k in range(1, n):
        values[k + 1] = ((2.0 * k + alpha + 1.0 - x) * values[k]
                         - (k + alpha) * values[k - 1]) / (k + 1.0)
    return LagSeries(params=params, x=x, values=values)


def eval_fun_modified(params: LagParams, x: float) -> LagSeries:
    """Laguerre functions via the difference recurrence.

    Same underflow caveat as :func:`eval_fun_standard`.
    """
    x = _check_x(x)
    alpha, n = params.alpha, params.n
    w = math.exp(-x / 2.0)
    values = np.empty(n + 1)
    deltas = np.empty(max(n, 0))
    values[0] = w
    if n >= 1:
        deltas[0] = (alpha - x) * w
        values[1] = values[0] + deltas[0]
    for k in range(1, n):
        deltas[k] = ((k + alpha) * deltas[k - 1] - x * values[k]) / (k + 1.0)
        values[k + 1] = values[k] + deltas[k]
    return LagSeries(params=params, x=x, values=values, deltas=deltas)


def eval_fun_stable(params: LagParams, x: float,
                    cfg: StableEvalConfig | None = None) -> float:
    """Overflow/underflow-safe evaluation of ``exp(-x/2) L_n(x)``.

    Runs the difference recurrence on partially weighted values.  A budget
    ``x_b = x/2`` of exponent remains to be applied; whenever the iterate
    grows past ``exp(k1)`` (and unconditionally on the first step) a chunk
    ``x_c = min(max(log|L| + k2, 0), x_b)`` of the weight is folded in and
    deducted from the budget.  Each chunk is applied as an exact power of
    two, and the leftover exponent goes through a compensated split at the
    end, so the result does not depend on ``(k1, k2)`` beyond the final
    rounding.
    """
    x = _check_x(x)
    if cfg is None:
        cfg = _DEFAULT_STABLE_CFG
    alpha, n = params.alpha, params.n
    if n == 0:
        return math.exp(-x / 2.0)
    if n == 1:
        return (1.0 + alpha - x) * math.exp(-x / 2.0)

    big = math.exp(cfg.k1)
    L = 1.0 + alpha - x
    dL = alpha - x
    M = 0  # halvings applied so far: stored L is 2^-M times the true one
    half_x = 0.5 * x
    for k in range(1, n):
        dL = ((k + alpha) * dL - x * L) / (k + 1.0)
        L = L + dL
        if (k == 1 or abs(L) > big) and L != 0.0 and math.isfinite(L):
            xb = max(half_x - M * _LN2, 0.0)
            xc = min(max(math.log(abs(L)) + cfg.k2, 0.0), xb)
            m = int(xc / _LN2)
            if m > 0:
                L = math.ldexp(L, -m)
                dL = math.ldexp(dL, -m)
                M += m
        if not math.isfinite(L):
            raise ArithmeticError(
                f"non-finite intermediate at step {k}; check rescale config")
    return _finalize_scalar(L, M, x)


def fun_series_stable(params: LagParams, x, cfg: StableEvalConfig | None = None
                      ) -> np.ndarray:
    """Stable Laguerre-function series at one or many abscissae.

    Extends the adaptive rescaling to return the full series: the partially
    weighted iterates are recorded together with the number of exact
    power-of-two halvings applied when each was produced, and every entry
    is finalized through the compensated leftover exponent.  Early entries
    whose true magnitude is below the double-precision range come out as
    exact zeros.

    Returns an array of shape ``(n+1,)`` for scalar ``x`` or
    ``(n+1, len(x))`` for array ``x``.
    """
    if cfg is None:
        cfg = _DEFAULT_STABLE_CFG
    alpha, n = params.alpha, params.n
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    scalar = np.ndim(x) == 0
    if np.any(xs < 0):
        raise ValueError("abscissae must be >= 0")
    npts = xs.size

    stored = np.empty((n + 1, npts))
    halvings = np.zeros((n + 1, npts), dtype=np.int64)
    stored[0] = 1.0
    if n >= 1:
        L = 1.0 + alpha - xs
        dL = alpha - xs
        stored[1] = L
        M = np.zeros(npts, dtype=np.int64)
        big = math.exp(cfg.k1)
        half_x = 0.5 * xs
        for k in range(1, n):
            dL = ((k + alpha) * dL - xs * L) / (k + 1.0)
            L = L + dL
            mask = np.abs(L) > big
            if k == 1:
                mask = np.ones_like(mask)
            mask &= (L != 0.0) & np.isfinite(L)
            if mask.any():
                absL = np.where(mask, np.abs(L), 1.0)
                xb = np.maximum(half_x - M * _LN2, 0.0)
                xc = np.where(mask,
                              np.clip(np.log(absL) + cfg.k2, 0.0, xb), 0.0)
                shift = (xc / _LN2).astype(np.int64)
                L = np.ldexp(L, -shift)
                dL = np.ldexp(dL, -shift)
                M = M + shift
            stored[k + 1] = L
            halvings[k + 1] = M
        if not np.all(np.isfinite(L)):
            raise ArithmeticError(
                "non-finite intermediate in rescaled recurrence")
    values = _finalize_array(stored, halvings, xs[None, :])
    return values[:, 0] if scalar else values


def fun_value_deriv_stable(params: LagParams, x,
                           cfg: StableEvalConfig | None = None):
    """Degree-``n`` Laguerre function and its derivative, stably.

    Returns ``(exp(-x/2) L_n(x), d/dx [exp(-x/2) L_n(x)])`` for scalar or
    array ``x``.  The derivative uses the partial-sum identity
    ``L_n' = -(L_0 + ... + L_{n-1})`` with the running sum rescaled in
    lockstep with the iterate, so the ratio value/derivative stays accurate
    for Newton refinement of quadrature nodes.
    """
    if cfg is None:
        cfg = _DEFAULT_STABLE_CFG
    alpha, n = params.alpha, params.n
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    scalar = np.ndim(x) == 0
    if np.any(xs < 0):
        raise ValueError("abscissae must be >= 0")
    w = np.exp(-xs / 2.0)
    if n == 0:
        val, der = w, -0.5 * w
        return (val[0], der[0]) if scalar else (val, der)
    if n == 1:
        val = (1.0 + alpha - xs) * w
        der = -(alpha + 3.0 - xs) / 2.0 * w
        return (val[0], der[0]) if scalar else (val, der)

    big = math.exp(cfg.k1)
    L = 1.0 + alpha - xs
    dL = alpha - xs
    S = 1.0 + L  # running sum L_0 + ... + L_top, same scale as L
    M = np.zeros(xs.size, dtype=np.int64)
    half_x = 0.5 * xs
    for k in range(1, n):
        dL = ((k + alpha) * dL - xs * L) / (k + 1.0)
        L = L + dL
        S = S + L
        mask = np.abs(L) > big
        if k == 1:
            mask = np.ones_like(mask)
        mask &= (L != 0.0) & np.isfinite(L)
        if mask.any():
            absL = np.where(mask, np.abs(L), 1.0)
            xb = np.maximum(half_x - M * _LN2, 0.0)
            xc = np.where(mask, np.clip(np.log(absL) + cfg.k2, 0.0, xb), 0.0)
            shift = (xc / _LN2).astype(np.int64)
            L = np.ldexp(L, -shift)
            dL = np.ldexp(dL, -shift)
            S = np.ldexp(S, -shift)
            M = M + shift
    if not np.all(np.isfinite(L)) or not np.all(np.isfinite(S)):
        raise ArithmeticError("non-finite intermediate in rescaled recurrence")
    val = _finalize_array(L, M, xs)
    # exp(-x/2) * L_n' = -(S - L) * leftover scale; then the product rule
    # for the exp(-x/2) prefactor contributes -val/2
    der = -_finalize_array(S - L, M, xs) - 0.5 * val
    return (val[0], der[0]) if scalar else (val, der)


def eval_fun_derivative(params: LagParams, x: float) -> np.ndarray:
    """Derivative series of the Laguerre functions at ``x``.

    d/dx [exp(-x/2) L_{k+1}] = previous - half the two neighbouring
    function values; the function values themselves come from the stable
    series.
    """
    x = _check_x(x)
    n = params.n
    values = fun_series_stable(params, x)
    derivs = np.empty(n + 1)
    derivs[0] = -0.5 * values[0]
    for k in range(n):
        derivs[k + 1] = derivs[k] - 0.5 * values[k] - 0.5 * values[k + 1]
    return derivs


def norm_const(params: LagParams) -> float:
    """Squared norm Gamma(n+alpha+1)/n! of the degree-n family member.

    Computed as a log-gamma difference so large degrees do not overflow.
    """
    alpha, n = params.alpha, params.n
    return math.exp(math.lgamma(n + alpha + 1.0) - math.lgamma(n + 1.0))
