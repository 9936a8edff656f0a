import json
import math
import random

import pytest

from magnusbound.bounds import (
    DELTA_XI,
    XI,
    build_report,
    coefficient_envelope,
    comparison_csv,
    comparison_table,
    magnus_term_bound,
    scaled_time,
    truncation_bound,
    truncation_bound_tight,
)

# Frozen from an early high-precision evaluation of the tail sum
# 4 * sum_{m > 3} (1/2)**m / m**2 (cross-checked against the dilogarithm).
TIGHT_AT_HALF_N3 = 0.023406550304475263


def basel_tail_oracle(n_trunc):
    """sum_{m > N} 1 / m**2 by brute partial sum plus an integral bracket."""
    cut = 200000
    head = math.fsum(1.0 / (m * m) for m in range(n_trunc + 1, cut + 1))
    return head + 0.5 * (1.0 / cut + 1.0 / (cut + 1))


def test_radius_constants():
    assert abs(XI * DELTA_XI - 1.0) < 1e-5
    assert XI == 1.086869
    assert DELTA_XI == 0.920075


def test_scaled_time():
    assert scaled_time(2.0, 3.0) == DELTA_XI * 6.0
    assert scaled_time(0.0, 5.0) == 0.0
    with pytest.raises(ValueError):
        scaled_time(-1.0, 1.0)
    with pytest.raises(ValueError):
        scaled_time(1.0, -0.5)


def test_envelope_dominates_exact_coefficients(table24):
    for n in range(1, 25):
        assert float(table24[n]) <= coefficient_envelope(n), f"n={n}"


def test_envelope_constant_is_minimal_even_integer(table24):
    violations = [
        n for n in range(1, 25) if float(table24[n]) > coefficient_envelope(n, 6.0)
    ]
    assert violations, "constant 6 should fail somewhere below 25"
    assert violations[0] == 3


def test_envelope_frozen_first_value():
    # 8 * DELTA_XI / (1 * 2) = 3.6803 with at most one ulp of upward rounding
    assert abs(coefficient_envelope(1) - 3.6803) < 1e-12
    with pytest.raises(ValueError):
        coefficient_envelope(0)


def test_magnus_term_bound_frozen_point():
    t = 0.5 / DELTA_XI  # makes x = 1/2 up to rounding
    assert math.isclose(magnus_term_bound(4, 1.0, t), 1.0 / 64.0, rel_tol=1e-12)
    assert magnus_term_bound(3, 1.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        magnus_term_bound(0, 1.0, 1.0)


def test_magnus_term_bound_matches_envelope_route():
    # prefactor * x**n / n**2 == 2**(n-1) * (h t)**n * envelope(n), since the
    # term norm route is nu_n * 2**(n-1) * (h t)**n with nu_n <= envelope(n)
    rng = random.Random(314)
    for _ in range(200):
        n = rng.randint(1, 12)
        h = rng.uniform(0.1, 3.0)
        t = rng.uniform(0.01, 2.0)
        direct = magnus_term_bound(n, h, t)
        via_envelope = 2.0 ** (n - 1) * (h * t) ** n * coefficient_envelope(n)
        assert math.isclose(direct, via_envelope, rel_tol=1e-13), (n, h, t)


def test_truncation_bound_frozen_point():
    t = 0.5 / DELTA_XI
    assert math.isclose(truncation_bound(3, 1.0, t), 0.03125, rel_tol=1e-12)


def test_truncation_bound_divergence_and_zero():
    assert truncation_bound(3, 1.0, 2.0) == math.inf  # x well above 1
    assert truncation_bound(3, 1.0, 0.0) == 0.0
    assert truncation_bound(3, 0.0, 5.0) == 0.0
    with pytest.raises(ValueError):
        truncation_bound(-1, 1.0, 1.0)


def test_truncation_bound_decreases_in_depth():
    for x_target in (0.1, 0.3, 0.5, 0.7, 0.9):
        t = x_target / DELTA_XI
        values = [truncation_bound(n, 1.0, t) for n in range(1, 9)]
        assert values == sorted(values, reverse=True), x_target


def test_tight_bound_frozen_point():
    t = 0.5 / DELTA_XI
    assert math.isclose(
        truncation_bound_tight(3, 1.0, t), TIGHT_AT_HALF_N3, rel_tol=1e-8
    )


def test_tight_bound_at_radius_edge():
    t = 1.0 / DELTA_XI
    assert scaled_time(1.0, t) == 1.0, "edge case requires x to land exactly on 1"
    value = truncation_bound_tight(3, 1.0, t)
    oracle = 4.0 * basel_tail_oracle(3)
    assert math.isclose(value, oracle, rel_tol=1e-9)
    assert truncation_bound_tight(3, 1.0, 2.0) == math.inf
    assert truncation_bound_tight(3, 1.0, 0.0) == 0.0


def test_tight_bound_below_simple_bound():
    for x_target in (0.05, 0.2, 0.4, 0.6, 0.8, 0.95):
        t = x_target / DELTA_XI
        for n_trunc in range(1, 7):
            tight = truncation_bound_tight(n_trunc, 1.0, t)
            simple = truncation_bound(n_trunc, 1.0, t)
            assert tight <= simple, (n_trunc, x_target)


def test_tight_bound_is_true_upper_bound_of_partial_sums():
    t = 0.5 / DELTA_XI
    x = scaled_time(1.0, t)
    value = truncation_bound_tight(2, 1.0, t)
    partial = 4.0 * math.fsum(x**m / (m * m) for m in range(3, 400))
    assert partial <= value


def test_comparison_table_ratio():
    t = 0.3 / DELTA_XI
    rows = comparison_table(5, 1.0, t)
    assert [row.n for row in rows] == [1, 2, 3, 4, 5]
    for row in rows:
        expected = 4.0 / (math.pi * row.n**2)
        assert math.isclose(row.ratio, expected, rel_tol=1e-10)
    # the new bound only wins from n = 2 on; at n = 1 the prior is smaller
    assert rows[0].bound > rows[0].prior_bound
    assert all(row.bound < row.prior_bound for row in rows[1:])


def test_comparison_table_zero_time():
    rows = comparison_table(3, 1.0, 0.0)
    assert all(row.bound == 0.0 and row.prior_bound == 0.0 for row in rows)
    assert all(row.ratio == 0.0 for row in rows)


def test_comparison_csv():
    rows = comparison_table(2, 1.0, 0.3 / DELTA_XI)
    text = comparison_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "n,bound_new,bound_prior,ratio"
    assert len(lines) == 3
    assert all(len(line.split(",")) == 4 for line in lines[1:])


def test_build_report_finite():
    report = build_report(1.0, 0.3 / DELTA_XI, 3, tight=True)
    assert not report.diverged
    assert len(report.per_term) == 3
    assert report.truncation_tight is not None
    assert report.truncation_tight < report.truncation_simple
    payload = report.to_json_dict()
    text = json.dumps(payload)  # must be strictly serializable
    assert json.loads(text)["truncation"]["diverged"] is False


def test_build_report_diverged_serializes_as_null():
    report = build_report(1.0, 2.0, 3, tight=True)
    assert report.diverged
    payload = report.to_json_dict()
    assert payload["truncation"]["simple"] is None
    assert payload["truncation"]["tight"] is None
    # per-term bounds stay finite even past the radius
    assert all(entry["bound"] > 0 for entry in payload["per_term"])
    json.dumps(payload)


def test_bounds_never_round_down():
    # returned values must sit at or above the mathematically exact number
    t = 0.25 / DELTA_XI
    x = scaled_time(1.0, t)
    for n in range(1, 10):
        exact = 4.0 * x**n / (n * n)
        assert magnus_term_bound(n, 1.0, t) >= exact
    exact_tail = 4.0 * x**4 / (16.0 * (1.0 - x))
    assert truncation_bound(3, 1.0, t) >= exact_tail


def test_prefactor_parameter():
    t = 0.5 / DELTA_XI
    four = magnus_term_bound(2, 1.0, t)
    two = magnus_term_bound(2, 1.0, t, prefactor=2.0)
    assert math.isclose(four, 2.0 * two, rel_tol=1e-14)
