"""Truncated power series over exact rationals, the generating-function
checks built on them, and the floating-point tail model for how the order
coefficients scale.

The exact half lives in :class:`PowerSeries`: the coefficient sequence
f(x) = sum nu_n x**n satisfies the first-order equation

    f'(x) = f/2 - (f/2) * cot(f/2) + 1,

which :func:`verify_ode` checks coefficient by coefficient, and the
antiderivative of the reciprocal right-hand side has the closed form
2*log(f) + polynomial part, produced by :func:`lhs_integral_series`.

The floating-point half models nu_n by the weighted sum
nu_hat(n, beta) = (6 / (2**n n!)) * sum_k k**(k+n-1) / (k! beta**k) and
inverts it for beta, from which the per-order decay base
delta = exp(1 + 1/theta) / (beta**(1/theta) * theta), theta = log(beta) - 1,
follows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .coefficients import NuTable, nu_recursive
from .exact import bernoulli, factorial, rational_string

__all__ = [
    "BracketingError",
    "LogSeries",
    "OdeCheck",
    "PowerSeries",
    "RangeOverflowError",
    "SeriesCompositionError",
    "SeriesDivisionError",
    "SeriesOrderError",
    "SweepRow",
    "beta_sweep",
    "beta_sweep_csv",
    "cot_half_series",
    "delta_from_beta",
    "emit_phi_curve",
    "estimate_beta",
    "generating_kernel_series",
    "lhs_integral_series",
    "lhs_series_csv",
    "nu_hat",
    "phi",
    "phi_argmax",
    "phi_curve_csv",
    "theta_from_beta",
    "verify_ode",
]


class SeriesOrderError(IndexError):
    """Coefficient requested beyond the truncation order."""


class SeriesDivisionError(ZeroDivisionError):
    """Division by a series with zero constant term."""


class SeriesCompositionError(ValueError):
    """Composition with an inner series whose constant term is nonzero."""


class BracketingError(ValueError):
    """Root bracket does not enclose a sign change."""


class RangeOverflowError(OverflowError):
    """Intermediate value left the finite float range."""


@dataclass(frozen=True)
class PowerSeries:
    """A polynomial truncation sum_{k=0}^{order} c_k x**k with exact rational
    coefficients.  Binary operations truncate to the smaller order."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("a series needs at least the constant coefficient")

    @staticmethod
    def from_list(values: Sequence[Fraction | int]) -> "PowerSeries":
        return PowerSeries(tuple(Fraction(v) for v in values))

    @staticmethod
    def constant(value: Fraction | int, order: int) -> "PowerSeries":
        cs = [Fraction(0)] * (order + 1)
        cs[0] = Fraction(value)
        return PowerSeries(tuple(cs))

    @staticmethod
    def monomial(coefficient: Fraction | int, power: int, order: int) -> "PowerSeries":
        if power > order:
            raise SeriesOrderError(f"monomial power {power} exceeds order {order}")
        cs = [Fraction(0)] * (order + 1)
        cs[power] = Fraction(coefficient)
        return PowerSeries(tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise SeriesOrderError(
                f"coefficient {k} outside truncation order {self.order}"
            )
        return self.coefficients[k]

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise SeriesOrderError(
                f"cannot extend order {self.order} to {order} by truncation"
            )
        return PowerSeries(self.coefficients[: order + 1])

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries(
            tuple(self.coefficients[k] + other.coefficients[k] for k in range(n + 1))
        )

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries(
            tuple(self.coefficients[k] - other.coefficients[k] for k in range(n + 1))
        )

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(tuple(-c for c in self.coefficients))

    def scale(self, factor: Fraction | int) -> "PowerSeries":
        f = Fraction(factor)
        return PowerSeries(tuple(f * c for c in self.coefficients))

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ci = self.coefficients[i]
            if not ci:
                continue
            for j in range(n + 1 - i):
                cj = other.coefficients[j]
                if cj:
                    out[i + j] += ci * cj
        return PowerSeries(tuple(out))

    def divide(self, other: "PowerSeries") -> "PowerSeries":
        """Series quotient self / other; ``other`` needs a nonzero constant."""
        if other.coefficients[0] == 0:
            raise SeriesDivisionError("divisor has zero constant term")
        n = min(self.order, other.order)
        lead = other.coefficients[0]
        out = [Fraction(0)] * (n + 1)
        for k in range(n + 1):
            acc = self.coefficients[k]
            for j in range(1, k + 1):
                acc -= other.coefficients[j] * out[k - j]
            out[k] = acc / lead
        return PowerSeries(tuple(out))

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner(x)); the inner series must annihilate the constant."""
        if inner.coefficients[0] != 0:
            raise SeriesCompositionError("inner series has nonzero constant term")
        n = min(self.order, inner.order)
        inner_t = inner.truncate(n)
        acc = PowerSeries.constant(self.coefficients[n], n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner_t + PowerSeries.constant(self.coefficients[k], n)
        return acc

    def integrate(self) -> "PowerSeries":
        """Term-wise antiderivative with zero constant; order grows by one."""
        out = [Fraction(0)] * (self.order + 2)
        for k, c in enumerate(self.coefficients):
            out[k + 1] = c / (k + 1)
        return PowerSeries(tuple(out))

    def differentiate(self) -> "PowerSeries":
        """Term-wise derivative; order shrinks by one."""
        if self.order == 0:
            raise SeriesOrderError("cannot differentiate an order-0 truncation")
        return PowerSeries(
            tuple(k * self.coefficients[k] for k in range(1, self.order + 1))
        )


def cot_half_series(order: int) -> PowerSeries:
    """Series in y of (y/2) * cot(y/2): even powers only, with coefficient
    (-1)**k B_{2k} / (2k)! on y**(2k)."""
    if order < 0:
        raise ValueError("order must be >= 0")
    cs = [Fraction(0)] * (order + 1)
    cs[0] = Fraction(1)
    for k in range(1, order // 2 + 1):
        cs[2 * k] = (-1) ** k * bernoulli(2 * k) / factorial(2 * k)
    return PowerSeries(tuple(cs))


def generating_kernel_series(order: int) -> PowerSeries:
    """Series of y/2 - (y/2) cot(y/2) + 1, the right-hand side of the
    coefficient generating function's differential equation.  Its value also
    equals sum_{r>=1} |B_r| y**r / r!."""
    half_y = PowerSeries.monomial(Fraction(1, 2), 1, order) if order >= 1 else PowerSeries.constant(0, 0)
    one = PowerSeries.constant(1, order)
    return half_y - cot_half_series(order) + one


@dataclass(frozen=True)
class LogSeries:
    """A function of f of the form log_coefficient * log(f) + polynomial."""

    log_coefficient: Fraction
    series: PowerSeries

    def coefficient(self, k: int) -> Fraction:
        return self.series.coefficient(k)


def lhs_integral_series(order: int) -> LogSeries:
    """Antiderivative, in the variable f, of the reciprocal kernel
    1 / (f/2 - (f/2) cot(f/2) + 1).

    The kernel equals f * S(f) with S(0) = 1/2, so its reciprocal is 2/f plus
    a regular series; integrating term by term gives

        2 log(f) - f/3 + f**2/36 - 2 f**3/405 + 11 f**4/12960 - ...

    and the polynomial part is returned through the requested order.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    kernel = generating_kernel_series(order + 1)
    if kernel.coefficient(0) != 0 or kernel.coefficient(1) != Fraction(1, 2):
        raise ArithmeticError("kernel lost its expected leading structure")
    shifted = PowerSeries(kernel.coefficients[1:])
    reciprocal = PowerSeries.constant(1, shifted.order).divide(shifted)
    poly = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        poly[k] = reciprocal.coefficient(k) / k
    return LogSeries(reciprocal.coefficient(0), PowerSeries(tuple(poly)))


@dataclass(frozen=True)
class OdeCheck:
    """Outcome of the coefficient-wise differential equation check."""

    passed: bool
    order_checked: int
    first_failure: int | None


def verify_ode(table: NuTable) -> OdeCheck:
    """Check, exactly and order by order, that f(x) = sum nu_n x**n solves

        f'(x) = 1 + sum_{r>=1} |B_r| f(x)**r / r!

    through x**(n_max - 1).  The sum on the right has the closed form
    f/2 - (f/2) cot(f/2) + 1; the lone extra 1 carries the seed order
    (without it the relation misses the x**0 coefficient, where f' equals
    nu_1 = 1 while every power of f vanishes).
    """
    n_max = table.n_max
    if n_max < 2:
        raise ValueError("need at least nu_1 and nu_2 to check the equation")
    f = PowerSeries(tuple([Fraction(0)] + [table[n] for n in range(1, n_max + 1)]))
    lhs = f.differentiate()
    kernel = generating_kernel_series(n_max - 1)
    rhs = kernel.compose(f.truncate(n_max - 1)) + PowerSeries.constant(1, n_max - 1)
    first_failure = None
    for k in range(n_max):
        if lhs.coefficient(k) != rhs.coefficient(k):
            first_failure = k
            break
    return OdeCheck(first_failure is None, n_max - 1, first_failure)


def nu_hat(n: int, beta: float, k_cut: int = 60) -> float:
    """Tail-model value (6 / (2**n n!)) * sum_{k=1}^{k_cut} k**(k+n-1) / (k! beta**k),
    evaluated in the log domain so large n and k stay in range."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k_cut < 1:
        raise ValueError("k_cut must be >= 1")
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    prefactor = math.log(6.0) - n * math.log(2.0) - math.lgamma(n + 1)
    log_beta = math.log(beta)
    logs = [
        prefactor + (k + n - 1) * math.log(k) - math.lgamma(k + 1) - k * log_beta
        for k in range(1, k_cut + 1)
    ]
    top = max(logs)
    if top > 700.0:
        raise RangeOverflowError("tail-model sum exceeds the float range")
    return math.exp(top) * math.fsum(math.exp(v - top) for v in logs)


def estimate_beta(
    n: int,
    k_cut: int = 60,
    *,
    nu_exact: Fraction | None = None,
    bracket: tuple[float, float] = (math.e + 0.1, 100.0),
    rel_tol: float = 1e-9,
) -> float:
    """Solve nu_hat(n, beta, k_cut) = nu_n for beta by bisection.

    ``nu_exact`` defaults to the exact table value for this n.  nu_hat is
    strictly decreasing in beta, so a sign change over the bracket pins the
    root; the default bracket starts just above e, below which the decay
    base downstream is undefined.
    """
    if nu_exact is None:
        nu_exact = nu_recursive(n)[n]
    target = float(nu_exact)
    lo, hi = bracket
    if not 0.0 < lo < hi:
        raise ValueError(f"bad bracket {bracket}")
    if not (nu_hat(n, lo, k_cut) > target > nu_hat(n, hi, k_cut)):
        raise BracketingError(
            f"no sign change for n={n} on bracket [{lo:g}, {hi:g}]"
        )
    while (hi - lo) > rel_tol * 0.5 * (hi + lo):
        mid = 0.5 * (lo + hi)
        if nu_hat(n, mid, k_cut) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def theta_from_beta(beta: float) -> float:
    """theta = log(beta) - 1; requires beta > e so theta is positive."""
    if beta <= math.e:
        raise ValueError(f"beta must exceed e, got {beta}")
    return math.log(beta) - 1.0


def delta_from_beta(beta: float) -> float:
    """Per-order decay base exp(1 + 1/theta) / (beta**(1/theta) * theta).

    Algebraically this collapses to 1/theta; the explicit product form is
    evaluated here and the collapse is left to the tests.
    """
    theta = theta_from_beta(beta)
    return math.exp(1.0 + 1.0 / theta) / (beta ** (1.0 / theta) * theta)


def phi(n: int, k: float, beta: float) -> float:
    """Smooth majorant of the tail-model terms:

        (6 / 2 pi) * (e/2)**n * n**-(n + 1/2) * k**(n - 3/2) * (e/beta)**k,

    evaluated in the log domain."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k <= 0.0:
        raise ValueError("k must be positive")
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    log_value = (
        math.log(6.0 / (2.0 * math.pi))
        + n * (1.0 - math.log(2.0))
        - (n + 0.5) * math.log(n)
        + (n - 1.5) * math.log(k)
        + k * (1.0 - math.log(beta))
    )
    if log_value > 700.0:
        raise RangeOverflowError("majorant exceeds the float range")
    return math.exp(log_value)


def phi_argmax(n: int, beta: float) -> float:
    """Maximizing k of :func:`phi` in the continuum: (n - 3/2) / theta."""
    if n < 2:
        raise ValueError("the majorant peaks in the interior only for n >= 2")
    return (n - 1.5) / theta_from_beta(beta)


def emit_phi_curve(
    n: int, beta: float, k_min: int = 1, k_max: int = 60
) -> tuple[tuple[int, float], ...]:
    """Sampled majorant values ((k, phi(n, k, beta)), ...) on k_min..k_max."""
    if k_min < 1 or k_max < k_min:
        raise ValueError("need 1 <= k_min <= k_max")
    return tuple((k, phi(n, float(k), beta)) for k in range(k_min, k_max + 1))


@dataclass(frozen=True)
class SweepRow:
    """Fitted scale and derived decay quantities for one order n."""

    n: int
    beta: float
    theta: float
    delta: float
    k_max: float


def beta_sweep(
    n_min: int = 10,
    n_max: int = 24,
    k_cut: int = 60,
    table: NuTable | None = None,
) -> tuple[SweepRow, ...]:
    """Fit beta against the exact coefficients for each n in n_min..n_max and
    tabulate theta, the decay base delta, and the majorant peak location."""
    if not 2 <= n_min <= n_max:
        raise ValueError("need 2 <= n_min <= n_max")
    if table is None or table.n_max < n_max:
        table = nu_recursive(n_max)
    rows = []
    for n in range(n_min, n_max + 1):
        beta = estimate_beta(n, k_cut, nu_exact=table[n])
        rows.append(
            SweepRow(
                n,
                beta,
                theta_from_beta(beta),
                delta_from_beta(beta),
                phi_argmax(n, beta),
            )
        )
    return tuple(rows)


def _csv_float(value: float) -> str:
    return f"{value:.8e}"


def phi_curve_csv(rows: Iterable[tuple[int, float]]) -> str:
    """CSV rendering of a sampled majorant curve: columns k, phi."""
    lines = ["k,phi"]
    for k, value in rows:
        lines.append(f"{k},{_csv_float(value)}")
    return "\n".join(lines) + "\n"


def beta_sweep_csv(rows: Iterable[SweepRow]) -> str:
    """CSV rendering of a sweep: columns n, beta, theta, delta, k_max."""
    lines = ["n,beta,theta,delta,k_max"]
    for row in rows:
        lines.append(
            f"{row.n},{_csv_float(row.beta)},{_csv_float(row.theta)},"
            f"{_csv_float(row.delta)},{_csv_float(row.k_max)}"
        )
    return "\n".join(lines) + "\n"


def lhs_series_csv(log_series: LogSeries) -> str:
    """CSV rendering of the antiderivative: a log(f) row then power rows."""
    lines = ["power,coefficient,note"]
    lines.append(f"log(f),{rational_string(log_series.log_coefficient)},")
    for k in range(1, log_series.series.order + 1):
        note = ""
        if k == 4:
            note = "sometimes misquoted as 11/12969"
        lines.append(f"{k},{rational_string(log_series.coefficient(k))},{note}")
    return "\n".join(lines) + "\n"
