"""Extended-precision reference values for recurrences and quadrature nodes.

Everything here runs through mpmath at a configurable decimal precision
(24 digits by default, matching the double-precision test regime with a
comfortable margin).  Results cross module boundaries as decimal strings so
the double-precision API stays free of extended-precision types.

Reference node sets can be cached to CSV (``alpha,N,kind,index,value_decimal``)
so repeated test runs do not re-derive them; the cache directory is taken
from the ``LAGSPEC_ORACLE_CACHE`` environment variable when set.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from pathlib import Path

from mpmath import mp

from .quadrature import nodes_eigen_seed

__all__ = [
    "HpContext",
    "hp_eval_poly",
    "hp_eval_fun",
    "hp_gauss_nodes",
    "hp_poly_series",
    "hp_gauss_nodes_mpf",
    "cache_path",
    "save_nodes_cache",
    "load_nodes_cache",
]


@dataclass(frozen=True)
class HpContext:
    """Working decimal precision of the reference computations."""

    digits: int = 24

    def __post_init__(self) -> None:
        if not 24 <= self.digits <= 64:
            raise ValueError("digits must lie in [24, 64]")


def _poly_series_mpf(alpha, n: int, x):
    """Standard three-term recurrence carried out in mpf arithmetic."""
    values = [mp.mpf(1)]
    if n >= 1:
        values.append(alpha + 1 - x)
    for k in range(1, n):
        values.append(((2 * k + alpha + 1 - x) * values[k]
                       - (k + alpha) * values[k - 1]) / (k + 1))
    return values


def _to_mpf(v):
    # float input is taken bit-exactly; strings are parsed at current dps
    return mp.mpf(v)


def hp_eval_poly(ctx: HpContext, alpha, n: int, x) -> str:
    """Degree-n polynomial value at ``x`` as a decimal string."""
    with mp.workdps(ctx.digits):
        a, xx = _to_mpf(alpha), _to_mpf(x)
        val = _poly_series_mpf(a, n, xx)[n]
        return mp.nstr(val, ctx.digits)


def hp_eval_fun(ctx: HpContext, alpha, n: int, x) -> str:
    """Degree-n Laguerre function value ``exp(-x/2) L_n(x)``."""
    with mp.workdps(ctx.digits):
        a, xx = _to_mpf(alpha), _to_mpf(x)
        val = mp.e ** (-xx / 2) * _poly_series_mpf(a, n, xx)[n]
        return mp.nstr(val, ctx.digits)


def hp_poly_series(ctx: HpContext, alpha, n: int, x) -> list[str]:
    """Full polynomial series ``L_0(x) .. L_n(x)`` as decimal strings."""
    with mp.workdps(ctx.digits):
        a, xx = _to_mpf(alpha), _to_mpf(x)
        return [mp.nstr(v, ctx.digits) for v in _poly_series_mpf(a, n, xx)]


def hp_gauss_nodes_mpf(ctx: HpContext, alpha, N: int):
    """Reference Gauss nodes as mpf values (ascending).

    Double-precision eigenvalue seeds are polished by Newton iterations in
    extended precision until the step falls below ``10^(2-digits) * x``.
    Ten guard digits are carried internally so recurrence round-off at the
    working precision cannot stall the iteration below the tolerance.
    """
    seeds = nodes_eigen_seed(float(alpha), N)
    with mp.workdps(ctx.digits + 10):
        a = _to_mpf(alpha)
        tol = mp.mpf(10) ** (2 - ctx.digits)
        out = []
        for j, seed in enumerate(seeds):
            x = mp.mpf(float(seed))
            for _ in range(60):
                vals = _poly_series_mpf(a, N + 1, x)
                deriv = -sum(vals[:N + 1])
                step = vals[N + 1] / deriv
                x = x - step
                if abs(step) <= tol * x:
                    break
            else:
                raise ArithmeticError(
                    f"reference Newton did not converge at node {j}")
            out.append(x)
        return out


def hp_gauss_nodes(ctx: HpContext, alpha, N: int) -> list[str]:
    """Reference Gauss nodes as decimal strings."""
    with mp.workdps(ctx.digits):
        return [mp.nstr(x, ctx.digits) for x in hp_gauss_nodes_mpf(ctx, alpha, N)]


def cache_path(alpha, N: int, kind: str, digits: int,
               directory: str | os.PathLike | None = None) -> Path:
    """Location of the cache file for one reference node/value set."""
    if directory is None:
        directory = os.environ.get("LAGSPEC_ORACLE_CACHE", ".")
    name = f"oracle_a{alpha}_N{N}_{kind}_d{digits}.csv"
    return Path(directory) / name


def save_nodes_cache(ctx: HpContext, alpha, N: int, values: list[str],
                     kind: str = "gauss",
                     directory: str | os.PathLike | None = None) -> Path:
    path = cache_path(alpha, N, kind, ctx.digits, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "N", "kind", "index", "value_decimal"])
        for i, v in enumerate(values):
            writer.writerow([alpha, N, kind, i, v])
    return path


def load_nodes_cache(alpha, N: int, kind: str = "gauss", digits: int = 24,
                     directory: str | os.PathLike | None = None
                     ) -> list[str] | None:
    """Read a cached reference set; None when absent or malformed."""
    path = cache_path(alpha, N, kind, digits, directory)
    if not path.is_file():
        return None
    out: list[str] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["alpha", "N", "kind", "index", "value_decimal"]:
            return None
        for row in reader:
            out.append(row[4])
    return out or None
