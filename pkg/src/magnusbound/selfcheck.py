"""Built-in consistency checks behind the command line's verify command.

Each check recomputes a family of quantities along two independent routes
(or against frozen reference constants) and reports the first counterexample
when something disagrees.  These run in seconds and are meant as a quick
integrity gate, not a replacement for the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import coefficient_envelope
from .coefficients import nu_enumeration, nu_recursive
from .exact import rational_string, scientific_string
from .series import beta_sweep, delta_from_beta, estimate_beta, verify_ode

__all__ = ["CheckResult", "SUITES", "run_checks"]

# Exact reference values for nu_1 .. nu_10 and their decimal renderings.
_REFERENCE_NU: tuple[tuple[int, str, str], ...] = (
    (1, "1", "1.00000000e+00"),
    (2, "1/4", "2.50000000e-01"),
    (3, "5/72", "6.94444444e-02"),
    (4, "11/576", "1.90972222e-02"),
    (5, "479/86400", "5.54398148e-03"),
    (6, "1769/1036800", "1.70621142e-03"),
    (7, "34091/60963840", "5.59200339e-04"),
    (8, "943633/4877107200", "1.93482112e-04"),
    (9, "92107357/1316818944000", "6.99468651e-05"),
    (10, "688988827/26336378880000", "2.61611070e-05"),
)

# Reference endpoints for the fitted-scale sweep (three decimals of slack
# are allowed; see the check body).
_BETA_SMALL_N = 8.32685
_BETA_LARGE_N = 8.233432
_DELTA_PEAK = 0.902362


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    lines: tuple[str, ...]


def _check_coefficients() -> CheckResult:
    table = nu_recursive(10)
    lines = []
    passed = True
    for n, exact_text, decimal_text in _REFERENCE_NU:
        value = table[n]
        ok = (
            rational_string(value) == exact_text
            and scientific_string(value) == decimal_text
        )
        if not ok:
            passed = False
            lines.append(
                f"n={n}: recursion gives {rational_string(value)} "
                f"({scientific_string(value)}), reference {exact_text} ({decimal_text})"
            )
            break
        by_trees = nu_enumeration(n)
        if by_trees != value:
            passed = False
            lines.append(
                f"n={n}: enumeration {rational_string(by_trees)} "
                f"!= recursion {rational_string(value)}"
            )
            break
    if passed:
        lines.append("recursion matches enumeration and references for n <= 10")
    return CheckResult("coefficients", passed, tuple(lines))


def _check_envelope() -> CheckResult:
    table = nu_recursive(24)
    for n in range(1, 25):
        envelope = coefficient_envelope(n)
        if float(table[n]) > envelope:
            return CheckResult(
                "envelope",
                False,
                (f"n={n}: coefficient {float(table[n]):.6e} exceeds envelope {envelope:.6e}",),
            )
    # the default constant should be minimal among even integers
    slack_failures = [
        n for n in range(1, 25) if float(table[n]) > coefficient_envelope(n, 6.0)
    ]
    if not slack_failures:
        return CheckResult(
            "envelope",
            False,
            ("constant 6 unexpectedly suffices; the default 8 would not be minimal",),
        )
    return CheckResult(
        "envelope",
        True,
        (
            "envelope holds for n <= 24 with constant 8; "
            f"constant 6 first fails at n = {slack_failures[0]}",
        ),
    )


def _check_ode() -> CheckResult:
    table = nu_recursive(16)
    outcome = verify_ode(table)
    if not outcome.passed:
        return CheckResult(
            "ode",
            False,
            (f"generating-function equation fails first at order {outcome.first_failure}",),
        )
    return CheckResult(
        "ode",
        True,
        (f"generating-function equation holds through order {outcome.order_checked}",),
    )


def _check_beta() -> CheckResult:
    table = nu_recursive(24)
    lines = []
    passed = True
    beta_small = estimate_beta(10, nu_exact=table[10])
    if not math.isclose(beta_small, _BETA_SMALL_N, rel_tol=1e-3):
        passed = False
        lines.append(f"beta at n=10 is {beta_small:.6f}, expected near {_BETA_SMALL_N}")
    beta_large = estimate_beta(24, nu_exact=table[24])
    if not math.isclose(beta_large, _BETA_LARGE_N, rel_tol=1e-3):
        passed = False
        lines.append(f"beta at n=24 is {beta_large:.6f}, expected near {_BETA_LARGE_N}")
    peak = max(row.delta for row in beta_sweep(10, 24, table=table))
    if abs(peak - _DELTA_PEAK) > 5e-4:
        passed = False
        lines.append(f"peak decay base {peak:.6f}, expected near {_DELTA_PEAK}")
    if passed:
        lines.append(
            f"beta({10})={beta_small:.6f}, beta({24})={beta_large:.6f}, "
            f"peak delta={peak:.6f} (all within tolerance)"
        )
    return CheckResult("beta", passed, tuple(lines))


SUITES = {
    "coefficients": _check_coefficients,
    "envelope": _check_envelope,
    "ode": _check_ode,
    "beta": _check_beta,
}


def run_checks(suite: str = "all") -> list[CheckResult]:
    """Run one named check, or every check for ``all``."""
    if suite == "all":
        return [check() for check in SUITES.values()]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    return [SUITES[suite]()]
