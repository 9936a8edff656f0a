import math
import random
from fractions import Fraction

import pytest

from magnusbound.exact import (
    bernoulli,
    binomial,
    decimal_string,
    factorial,
    parse_rational,
    rational_string,
    scientific_string,
)


def bernoulli_oracle(n):
    """Independent route: the Akiyama-Tanigawa transform, which produces the
    B_1 = +1/2 convention directly."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def factorial_oracle(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_bernoulli_frozen_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_against_akiyama_tanigawa():
    for r in range(41):
        assert bernoulli(r) == bernoulli_oracle(r), f"mismatch at r={r}"


def test_bernoulli_odd_vanish():
    for r in range(3, 40, 2):
        assert bernoulli(r) == 0


def test_bernoulli_defining_recurrence():
    # sum_{j=0}^{m} C(m+1, j) B_j^- = 0 in the B_1 = -1/2 convention
    for m in range(1, 35):
        acc = Fraction(0)
        for j in range(m + 1):
            b = -bernoulli(1) if j == 1 else bernoulli(j)
            acc += math.comb(m + 1, j) * b
        assert acc == 0, f"recurrence fails at m={m}"


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_factorial():
    assert factorial(0) == 1
    assert factorial(5) == 120
    assert factorial(20) == 2432902008176640000
    for n in range(31):
        assert factorial(n) == factorial_oracle(n)
    with pytest.raises(ValueError):
        factorial(-2)


def test_binomial():
    for n in range(25):
        for k in range(n + 1):
            assert binomial(n, k) == factorial(n) // (factorial(k) * factorial(n - k))
    assert binomial(5, 9) == 0
    assert binomial(5, -1) == 0
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_fraction_arithmetic_is_canonical():
    rng = random.Random(20260814)
    for _ in range(2000):
        p1 = rng.randint(-500, 500)
        q1 = rng.randint(1, 500)
        p2 = rng.randint(-500, 500)
        q2 = rng.randint(1, 500)
        total = Fraction(p1, q1) + Fraction(p2, q2)
        # cross-check against plain integer arithmetic
        assert total.numerator * q1 * q2 == (p1 * q2 + p2 * q1) * total.denominator
        assert total.denominator > 0
        assert math.gcd(total.numerator, total.denominator) == 1


def test_fraction_common_denominator_case():
    # denominators 1152, 1728, 720 share lcm 17280
    total = Fraction(11, 1152) + Fraction(29, 1728) + Fraction(1, 720)
    assert total == Fraction(479, 17280)


def test_rational_string_round_trip():
    rng = random.Random(99)
    for _ in range(500):
        q = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**9))
        assert parse_rational(rational_string(q)) == q
    assert rational_string(Fraction(3)) == "3"
    assert rational_string(Fraction(-5, 72)) == "-5/72"


def test_parse_rational_accepts_whitespace_and_normalizes():
    assert parse_rational(" 2/4 ") == Fraction(1, 2)
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert parse_rational("+7") == 7


def test_parse_rational_errors():
    with pytest.raises(ZeroDivisionError):
        parse_rational("3/0")
    for bad in ("1.5", "a/b", "1/2/3", "1/-2", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_scientific_string_basic():
    assert scientific_string(Fraction(1)) == "1.00000000e+00"
    assert scientific_string(Fraction(1, 4)) == "2.50000000e-01"
    assert scientific_string(Fraction(1, 3)) == "3.33333333e-01"
    assert scientific_string(Fraction(-1, 3)) == "-3.33333333e-01"
    assert scientific_string(Fraction(0)) == "0.00000000e+00"
    assert scientific_string(Fraction(688988827, 26336378880000)) == "2.61611070e-05"


def test_scientific_string_round_half_even():
    # mantissa tie at ...2.5 rounds to the even digit
    assert scientific_string(Fraction(2500000025, 10**9)) == "2.50000002e+00"
    assert scientific_string(Fraction(2500000035, 10**9)) == "2.50000004e+00"


def test_scientific_string_carry():
    # rounding 9.9999999999 must carry into the next decade
    assert scientific_string(Fraction(99999999999, 10**10)) == "1.00000000e+01"


def test_scientific_string_rejects_zero_decimals():
    with pytest.raises(ValueError):
        scientific_string(Fraction(1), decimals=0)


def test_decimal_string():
    assert decimal_string(Fraction(5, 2), 0) == "2"
    assert decimal_string(Fraction(7, 2), 0) == "4"
    assert decimal_string(Fraction(1, 3), 6) == "0.333333"
    assert decimal_string(Fraction(-1, 8), 3) == "-0.125"
    assert decimal_string(Fraction(1, 800), 4) == "0.0012"
    with pytest.raises(ValueError):
        decimal_string(Fraction(1), -1)
