"""Exact rational arithmetic: Bernoulli numbers, combinatorial integers, and
string renderings.

Every rational quantity is a ``fractions.Fraction``, which normalizes to
lowest terms with a positive denominator on construction, so results are
canonical without any extra bookkeeping.
"""
from __future__ import annotations

import math
import re
import threading
from fractions import Fraction

__all__ = [
    "Rational",
    "bernoulli",
    "binomial",
    "decimal_string",
    "factorial",
    "parse_rational",
    "rational_string",
    "scientific_string",
]

Rational = Fraction

# Memoized Bernoulli numbers in the B_1 = -1/2 convention; extended lazily
# under a lock so concurrent readers never observe a half-built table.
_BERNOULLI_LOCK = threading.Lock()
_BERNOULLI_MINUS: list[Fraction] = [Fraction(1)]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def factorial(n: int) -> int:
    """Exact n! for n >= 0."""
    if n < 0:
        raise ValueError(f"factorial requires n >= 0, got {n}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k); zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def bernoulli(r: int) -> Fraction:
    """Bernoulli number B_r, in the convention with B_1 = +1/2.

    The table is filled from the defining recurrence
    ``sum_{j=0}^{m} C(m+1, j) * B_j = 0`` (stated for the B_1 = -1/2
    convention; only the r = 1 value differs between the two).
    """
    if r < 0:
        raise ValueError(f"bernoulli requires r >= 0, got {r}")
    if r == 1:
        return Fraction(1, 2)
    with _BERNOULLI_LOCK:
        while len(_BERNOULLI_MINUS) <= r:
            m = len(_BERNOULLI_MINUS)
            acc = Fraction(0)
            for j, b in enumerate(_BERNOULLI_MINUS):
                if b:
                    acc += math.comb(m + 1, j) * b
            _BERNOULLI_MINUS.append(-acc / (m + 1))
        return _BERNOULLI_MINUS[r]


def rational_string(value: Fraction) -> str:
    """Render a rational as ``p/q``, or just ``p`` for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse the ``p/q`` or ``p`` form produced by :func:`rational_string`.

    Only plain integer numerators and positive integer denominators are
    accepted; a zero denominator raises ``ZeroDivisionError`` and anything
    else malformed raises ``ValueError``.
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a p/q rational: {text!r}")
    return Fraction(s)


def _decimal_exponent(value: Fraction) -> int:
    """Largest e with 10**e <= value, for positive value, by exact comparison."""
    estimate = len(str(value.numerator)) - len(str(value.denominator))
    while value >= Fraction(10) ** (estimate + 1):
        estimate += 1
    while value < Fraction(10) ** estimate:
        estimate -= 1
    return estimate


def scientific_string(value: Fraction, decimals: int = 8) -> str:
    """Scientific notation like ``2.61611070e-05``, rounded half-to-even.

    The mantissa is rounded on the exact rational, never through a float, so
    the rendering is reproducible and correct in the last digit.
    """
    if decimals < 1:
        raise ValueError("decimals must be >= 1")
    if value == 0:
        return "0." + "0" * decimals + "e+00"
    sign = "-" if value < 0 else ""
    magnitude = -value if value < 0 else value
    exponent = _decimal_exponent(magnitude)
    mantissa = round(magnitude * Fraction(10) ** (decimals - exponent))
    if mantissa >= 10 ** (decimals + 1):
        # rounding carried past 9.99...9
        mantissa //= 10
        exponent += 1
    digits = str(mantissa)
    return f"{sign}{digits[0]}.{digits[1:]}e{exponent:+03d}"


def decimal_string(value: Fraction, digits: int) -> str:
    """Fixed-point decimal with ``digits`` places, rounded half-to-even."""
    if digits < 0:
        raise ValueError("digits must be >= 0")
    scaled = round(value * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    text = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"
