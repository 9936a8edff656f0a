"""Closed-form norm bounds for the expansion terms and their truncation tails.

Throughout, ``x`` abbreviates the scaled time DELTA_XI * h_max * t, where
h_max bounds the generator's operator norm on [0, t].  Every bound is finite
for x < 1; the tail bounds diverge for x >= 1 and report ``inf``.  Returned
values are rounded one ulp upward, so a float comparison against them never
under-reports the mathematical bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DELTA_XI",
    "XI",
    "BoundReport",
    "ComparisonRow",
    "build_report",
    "coefficient_envelope",
    "comparison_csv",
    "comparison_table",
    "magnus_term_bound",
    "scaled_time",
    "truncation_bound",
    "truncation_bound_tight",
]

# Convergence radius of the scalar majorant equation and its reciprocal.
# Both are stored as the fixed literal decimals used everywhere downstream;
# they multiply to 1 within 1e-5 but are deliberately not derived from each
# other at runtime.
XI = 1.086869
DELTA_XI = 0.920075


def _ceil_ulp(value: float) -> float:
    if value == 0.0 or not math.isfinite(value):
        return value
    return math.nextafter(value, math.inf)


def scaled_time(h_max: float, t: float) -> float:
    """The dimensionless product x = DELTA_XI * h_max * t."""
    if h_max < 0.0:
        raise ValueError(f"h_max must be >= 0, got {h_max}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    return DELTA_XI * h_max * t


def coefficient_envelope(n: int, constant: float = 8.0) -> float:
    """Envelope constant * DELTA_XI**n / (n**2 * 2**n) for the exact order
    coefficients.  The default constant 8 is the smallest even integer that
    dominates every nu_n with 1 <= n <= 24; 6 already fails."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return _ceil_ulp(constant * DELTA_XI**n / (n * n * 2.0**n))


def magnus_term_bound(
    n: int, h_max: float, t: float, prefactor: float = 4.0
) -> float:
    """Per-order norm bound prefactor * x**n / n**2."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = scaled_time(h_max, t)
    if x == 0.0:
        return 0.0
    return _ceil_ulp(prefactor * x**n / (n * n))


def truncation_bound(
    n_trunc: int, h_max: float, t: float, prefactor: float = 4.0
) -> float:
    """Tail bound prefactor / (N+1)**2 * x**(N+1) / (1 - x) after keeping the
    first N = n_trunc orders; ``inf`` when x >= 1."""
    if n_trunc < 0:
        raise ValueError(f"n_trunc must be >= 0, got {n_trunc}")
    x = scaled_time(h_max, t)
    if x >= 1.0:
        return math.inf
    if x == 0.0:
        return 0.0
    top = n_trunc + 1
    return _ceil_ulp(prefactor * x**top / (top * top * (1.0 - x)))


def truncation_bound_tight(
    n_trunc: int,
    h_max: float,
    t: float,
    prefactor: float = 4.0,
    rel_tol: float = 1e-10,
) -> float:
    """Sharper tail bound prefactor * sum_{m > N} x**m / m**2.

    Finite for x <= 1 (at x = 1 the p-series tail is summed in closed form
    from pi**2 / 6); ``inf`` for x > 1.  For x < 1 the partial sum stops once
    the geometric remainder estimate drops below rel_tol of the total, and
    that remainder estimate is added back in, so the result stays a true
    upper bound and sits strictly below :func:`truncation_bound`.
    """
    if n_trunc < 0:
        raise ValueError(f"n_trunc must be >= 0, got {n_trunc}")
    x = scaled_time(h_max, t)
    if x > 1.0:
        return math.inf
    if x == 0.0:
        return 0.0
    if x == 1.0:
        head = math.fsum(1.0 / (m * m) for m in range(1, n_trunc + 1))
        return _ceil_ulp(prefactor * (math.pi**2 / 6.0 - head))
    total = 0.0
    m = n_trunc + 1
    while True:
        total += x**m / (m * m)
        m += 1
        remainder = x**m / (m * m * (1.0 - x))
        if remainder <= rel_tol * total:
            return _ceil_ulp(prefactor * (total + remainder))


@dataclass(frozen=True)
class ComparisonRow:
    """One order's new bound next to the prior generic-radius bound pi * x**n."""

    n: int
    bound: float
    prior_bound: float
    ratio: float


def comparison_table(
    n_max: int, h_max: float, t: float, prefactor: float = 4.0
) -> tuple[ComparisonRow, ...]:
    """Per-order comparison rows (n, prefactor * x**n / n**2, pi * x**n, ratio).

    The ratio tends to prefactor / (pi n**2); note it exceeds 1 at n = 1,
    where the prior bound is the smaller one.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    x = scaled_time(h_max, t)
    rows = []
    for n in range(1, n_max + 1):
        new = magnus_term_bound(n, h_max, t, prefactor)
        prior = _ceil_ulp(math.pi * x**n) if x else 0.0
        ratio = new / prior if prior else 0.0
        rows.append(ComparisonRow(n, new, prior, ratio))
    return tuple(rows)


def comparison_csv(rows: tuple[ComparisonRow, ...]) -> str:
    """CSV rendering: columns n, bound_new, bound_prior, ratio."""
    lines = ["n,bound_new,bound_prior,ratio"]
    for row in rows:
        lines.append(
            f"{row.n},{row.bound:.8e},{row.prior_bound:.8e},{row.ratio:.8e}"
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BoundReport:
    """Bundle of the per-order and tail bounds for one (h_max, t, N) input."""

    h_max: float
    t: float
    n_trunc: int
    prefactor: float
    x: float
    per_term: tuple[tuple[int, float], ...]
    truncation_simple: float
    truncation_tight: float | None
    diverged: bool

    def to_json_dict(self) -> dict:
        def fin(v: float | None) -> float | None:
            return None if v is None or not math.isfinite(v) else v

        return {
            "h_max": self.h_max,
            "t": self.t,
            "n_trunc": self.n_trunc,
            "prefactor": self.prefactor,
            "x": self.x,
            "per_term": [{"n": n, "bound": b} for n, b in self.per_term],
            "truncation": {
                "simple": fin(self.truncation_simple),
                "tight": fin(self.truncation_tight),
                "diverged": self.diverged,
            },
        }


def build_report(
    h_max: float,
    t: float,
    n_trunc: int,
    *,
    tight: bool = False,
    prefactor: float = 4.0,
) -> BoundReport:
    """Evaluate every bound for the given scaled-time inputs."""
    if n_trunc < 1:
        raise ValueError(f"n_trunc must be >= 1, got {n_trunc}")
    x = scaled_time(h_max, t)
    per_term = tuple(
        (n, magnus_term_bound(n, h_max, t, prefactor)) for n in range(1, n_trunc + 1)
    )
    simple = truncation_bound(n_trunc, h_max, t, prefactor)
    tight_value = (
        truncation_bound_tight(n_trunc, h_max, t, prefactor) if tight else None
    )
    return BoundReport(
        h_max=h_max,
        t=t,
        n_trunc=n_trunc,
        prefactor=prefactor,
        x=x,
        per_term=per_term,
        truncation_simple=simple,
        truncation_tight=tight_value,
        diverged=not math.isfinite(simple),
    )
