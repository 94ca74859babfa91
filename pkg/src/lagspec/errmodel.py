"""Round-off error propagation model for the three-term recurrences.

The forward error ``e_n`` of the recurrence obeys the same three-term
recurrence driven by a per-step perturbation ``zeta_n`` whose magnitude is
set by the local values and machine epsilon.  This module provides the
perturbation envelopes, the energy-functional worst-case bounds (with the
non-expansive and expansive regimes), Monte-Carlo simulation of the error
recurrences, and empirical error measurement against the extended-precision
oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from mpmath import mp

from .oracle import HpContext, _poly_series_mpf
from .recurrence import LagParams, eval_poly_modified, eval_poly_standard

__all__ = [
    "DOUBLE_EPS",
    "Regime",
    "ErrorBoundInput",
    "ErrorBoundResult",
    "zeta_estimate",
    "zeta_delta_estimate",
    "growth_factor",
    "energy_bound",
    "abs_error_bound",
    "simulate_error_propagation",
    "simulate_energy",
    "measure_actual_error",
]

DOUBLE_EPS = 2.22e-16


class Regime(str, Enum):
    NONEXPANSIVE = "nonexpansive"  # 1 - 2 alpha - x - eta >= 0
    EXPANSIVE = "expansive"        # -1.5 < 1 - 2 alpha - x - eta < 0


@dataclass(frozen=True)
class ErrorBoundInput:
    """Inputs of the worst-case bounds.

    ``e1`` is the magnitude of the first-step error, ``zeta_max`` the
    largest per-step perturbation, ``eta`` the free Cauchy-inequality
    parameter of the energy argument.
    """

    n: int
    alpha: float
    x: float
    eta: float
    e1: float
    zeta_max: float
    eps: float = DOUBLE_EPS

    def __post_init__(self) -> None:
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if not 3.0 - self.alpha - self.x - self.eta > 0:
            raise ValueError(
                "hypothesis 3 - alpha - x - eta > 0 violated: "
                f"{3.0 - self.alpha - self.x - self.eta} <= 0")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def discriminant(self) -> float:
        return 1.0 - 2.0 * self.alpha - self.x - self.eta

    @property
    def regime(self) -> Regime:
        d = self.discriminant
        if d >= 0:
            return Regime.NONEXPANSIVE
        if d > -1.5 and self.alpha >= 0:
            return Regime.EXPANSIVE
        raise ValueError(
            f"parameters outside both regimes: 1-2a-x-eta = {d}, "
            f"alpha = {self.alpha}")


@dataclass(frozen=True)
class ErrorBoundResult:
    regime: Regime
    energy_bound: float
    abs_bound: float
    beta_n: float | None = None


def zeta_estimate(alpha: float, n: int, x: float, series=None,
                  eps: float = DOUBLE_EPS) -> float:
    """Perturbation envelope of one standard-recurrence step:
    ``(2 + x/(n+1)) |L_n| eps + |L_{n-1}| eps``.
    """
    if series is None:
        series = eval_poly_standard(LagParams(alpha=alpha, n=n), x)
    v = series.values
    return (2.0 + x / (n + 1.0)) * abs(v[n]) * eps + abs(v[n - 1]) * eps


def zeta_delta_estimate(alpha: float, n: int, x: float, series=None,
                        eps: float = DOUBLE_EPS) -> float:
    """Perturbation envelope of one difference-recurrence step:
    ``(|dL_n| + (x/(n+1)) |L_n|) eps``.
    """
    if series is None:
        series = eval_poly_modified(LagParams(alpha=alpha, n=n), x)
    if series.deltas is None:
        raise ValueError("series must carry deltas (difference form)")
    dl = abs(series.deltas[n - 1])
    return (dl + x / (n + 1.0) * abs(series.values[n])) * eps


def growth_factor(n: int, alpha: float, x: float, eta: float) -> float:
    """Expansive-regime growth factor

    beta_n = [Gamma(n+2+alpha)/Gamma(2+alpha)] /
             [Gamma(n+3-alpha-x-eta)/Gamma(3-alpha-x-eta)]

    evaluated through log-gamma differences.
    """
    s = 3.0 - alpha - x - eta
    return math.exp(math.lgamma(n + 2.0 + alpha) - math.lgamma(2.0 + alpha)
                    - math.lgamma(n + s) + math.lgamma(s))


def _energy_e1(inp: ErrorBoundInput) -> float:
    # E_1 = x e_1^2 + (1 + alpha)(e_1 - e_0)^2 with e_0 = 0
    return (inp.x + 1.0 + inp.alpha) * inp.e1 ** 2


def energy_bound(inp: ErrorBoundInput) -> ErrorBoundResult:
    """Worst-case bound on the energy ``E_{n+1}``.

    Non-expansive regime:
        E_1 + (n+1)(n+2)(2n+3)/(6 eta) * zeta_max^2
    Expansive regime (alpha >= 0):
        beta_n E_1 + [(n-3)(n+1)^2 + 29 beta_n]/eta * zeta_max^2
    """
    regime = inp.regime
    n = inp.n
    e1sq = _energy_e1(inp)
    z2 = inp.zeta_max ** 2
    if regime is Regime.NONEXPANSIVE:
        eb = e1sq + (n + 1.0) * (n + 2.0) * (2.0 * n + 3.0) / (6.0 * inp.eta) * z2
        beta_n = None
    else:
        beta_n = growth_factor(n, inp.alpha, inp.x, inp.eta)
        eb = beta_n * e1sq + ((n - 3.0) * (n + 1.0) ** 2 + 29.0 * beta_n) / inp.eta * z2
    ab = abs_error_bound(inp)
    return ErrorBoundResult(regime=regime, energy_bound=eb, abs_bound=ab,
                            beta_n=beta_n)


def abs_error_bound(inp: ErrorBoundInput) -> float:
    """Explicit bound on ``|e_{n+1}|``.

    First branch (-1 < alpha <= 1/4, x < 1/4, eta = 1/4):
        (2 + 2 (n+2)^{3/2} / sqrt(3)) * max{|e_1|, zeta_max} / sqrt(x)
    Second branch (expansive, alpha >= 0):
        (2 sqrt(beta_n) + (5.5 sqrt(beta_n) + sqrt(n) (n+1)) / sqrt(eta))
            * max{|e_1|, zeta_max} / sqrt(x)
    """
    n = inp.n
    m = max(abs(inp.e1), abs(inp.zeta_max))
    sx = math.sqrt(abs(inp.x))
    if sx == 0.0:
        raise ValueError("x must be nonzero for the explicit bound")
    regime = inp.regime
    if regime is Regime.NONEXPANSIVE:
        if not (inp.alpha <= 0.25 and inp.x < 0.25):
            raise ValueError(
                "first-branch bound needs alpha <= 1/4 and x < 1/4")
        return (2.0 + 2.0 * (n + 2.0) ** 1.5 / math.sqrt(3.0)) * m / sx
    bn = growth_factor(n, inp.alpha, inp.x, inp.eta)
    sb = math.sqrt(bn)
    return (2.0 * sb + (5.5 * sb + math.sqrt(n) * (n + 1.0))
            / math.sqrt(inp.eta)) * m / sx


def _zeta_envelopes(alpha: float, n_max: int, x: float, mode: str,
                    eps: float) -> np.ndarray:
    params = LagParams(alpha=alpha, n=n_max)
    if mode == "standard":
        series = eval_poly_standard(params, x)
        v = np.abs(series.values)
        n = np.arange(1, n_max)
        return (2.0 + x / (n + 1.0)) * v[1:n_max] * eps + v[0:n_max - 1] * eps
    if mode == "delta":
        series = eval_poly_modified(params, x)
        v = np.abs(series.values)
        d = np.abs(series.deltas)
        n = np.arange(1, n_max)
        return (d[0:n_max - 1] + x / (n + 1.0) * v[1:n_max]) * eps
    raise ValueError(f"unknown mode {mode!r}")


def simulate_error_propagation(alpha: float, n_max: int, x: float,
                               mode: str = "standard", rng_seed: int = 0,
                               eps: float = DOUBLE_EPS,
                               e1: float | None = None) -> np.ndarray:
    """Simulate the error recurrence with random per-step perturbations.

    ``zeta_n`` is drawn uniformly from ``[-env_n, +env_n]`` where the
    envelope comes from the corresponding estimate.  Returns the
    trajectory ``e_0 .. e_{n_max}``; deterministic for a given seed.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = np.random.default_rng(rng_seed)
    env = _zeta_envelopes(alpha, n_max, x, mode, eps)
    zeta = rng.uniform(-env, env)
    if e1 is None:
        e1 = abs(1.0 + alpha - x) * eps
    e = np.zeros(n_max + 1)
    e[1] = e1
    if mode == "standard":
        for n in range(1, n_max):
            e[n + 1] = ((2.0 * n + alpha + 1.0 - x) / (n + 1.0) * e[n]
                        - (n + alpha) / (n + 1.0) * e[n - 1] + zeta[n - 1])
    else:
        d = e1
        for n in range(1, n_max):
            d = (n + alpha) / (n + 1.0) * d - x / (n + 1.0) * e[n] + zeta[n - 1]
            e[n + 1] = e[n] + d
    return e


def simulate_energy(alpha: float, x: float, e: np.ndarray) -> np.ndarray:
    """Energies ``E_1 .. E_n`` of a simulated trajectory:
    ``E_n = x e_n^2 + (n + alpha)(e_n - e_{n-1})^2``.
    """
    n = np.arange(1, e.size)
    return x * e[1:] ** 2 + (n + alpha) * np.diff(e) ** 2


def measure_actual_error(alpha: float, n: int, x: float,
                         mode: str = "standard",
                         ctx: HpContext | None = None) -> float:
    """Relative error of a double-precision recurrence value vs the oracle."""
    if ctx is None:
        ctx = HpContext()
    params = LagParams(alpha=alpha, n=n)
    if mode == "standard":
        val = eval_poly_standard(params, x).values[n]
    elif mode == "delta":
        val = eval_poly_modified(params, x).values[n]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    with mp.workdps(ctx.digits):
        ref = _poly_series_mpf(mp.mpf(alpha), n, mp.mpf(x))[n]
        return float(abs((mp.mpf(float(val)) - ref) / ref))
