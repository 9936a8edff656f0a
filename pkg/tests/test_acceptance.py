"""Acceptance gate: one test per shipped guarantee, each recording a one-line
verdict that the conftest summary hook prints after the run."""
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from magnusbound.bounds import (
    DELTA_XI,
    coefficient_envelope,
    truncation_bound,
    truncation_bound_tight,
)
from magnusbound.coefficients import (
    mu,
    mu_oracle,
    nu_enumeration,
    nu_recursive,
)
from magnusbound.dynamics import (
    GeneratorFunction,
    QuadratureConfig,
    magnus_term_direct,
    magnus_term_tree,
    operator_norm,
    random_trig_generator,
    truncated_propagator,
    validate_bounds,
)
from magnusbound.exact import bernoulli, factorial
from magnusbound.series import (
    beta_sweep,
    estimate_beta,
    lhs_integral_series,
    verify_ode,
)
from magnusbound.trees import enumerate_trees, parse

COEFFS_10_CSV = """\
n,exact,decimal,method
1,1,1.00000000e+00,recursion
2,1/4,2.50000000e-01,recursion
3,5/72,6.94444444e-02,recursion
4,11/576,1.90972222e-02,recursion
5,479/86400,5.54398148e-03,recursion
6,1769/1036800,1.70621142e-03,recursion
7,34091/60963840,5.59200339e-04,recursion
8,943633/4877107200,1.93482112e-04,recursion
9,92107357/1316818944000,6.99468651e-05,recursion
10,688988827/26336378880000,2.61611070e-05,recursion
"""

VALIDATION_QUAD = QuadratureConfig(grid_points=64, tol=1e-7, max_refinements=10)


def test_criterion_1_exact_coefficient_table(record_property):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "magnusbound", "coeffs", "10", "recursion"],
        capture_output=True,
        text=True,
        timeout=30,
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout == COEFFS_10_CSV
    assert elapsed < 1.0, f"took {elapsed:.2f} s, budget is 1 s"
    record_property(
        "detail", f"ten exact rationals matched byte for byte, {elapsed:.2f} s"
    )


def test_criterion_2_enumeration_matches_recursion(record_property):
    start = time.perf_counter()
    table = nu_recursive(10)
    for n in range(1, 11):
        assert nu_enumeration(n) == table[n], f"routes disagree at n = {n}"
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.1f} s, budget is 30 s"
    record_property(
        "detail", f"tree sums equal the recursion for n <= 10, {elapsed:.1f} s"
    )


def test_criterion_3_integral_weight_oracle(record_property):
    checked = 0
    for n in range(1, 9):
        for tree in enumerate_trees(n):
            assert mu(tree) == mu_oracle(tree), f"mu mismatch for n = {n}"
            checked += 1
    example = parse("((L) ((L) L))")
    assert mu(example) == Fraction(1, 112)
    record_property(
        "detail",
        f"{checked} trees agree with the symbolic integration oracle; "
        "the seven-node example gives 1/112",
    )


def test_criterion_4_coefficient_envelope(record_property):
    start = time.perf_counter()
    table = nu_recursive(24)
    for n in range(1, 25):
        assert float(table[n]) <= coefficient_envelope(n), f"envelope fails at {n}"
    undominated = [
        n for n in range(1, 25) if float(table[n]) > coefficient_envelope(n, 6.0)
    ]
    assert undominated, "constant 6 should fail somewhere below 25"
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0, f"took {elapsed:.1f} s, budget is 2 min"
    record_property(
        "detail",
        f"constant 8 dominates n <= 24, constant 6 first fails at "
        f"n = {undominated[0]}, {elapsed:.2f} s",
    )


def test_criterion_5_generating_function_ode(record_property):
    check = verify_ode(nu_recursive(17))
    assert check.passed, f"first failing order {check.first_failure}"
    assert check.order_checked >= 16

    log_series = lhs_integral_series(6)
    expected = {
        1: Fraction(-1, 3),
        2: Fraction(1, 36),
        3: Fraction(-2, 405),
        5: Fraction(-29, 170100),
    }
    for order, value in expected.items():
        assert log_series.coefficient(order) == value, f"order {order}"

    # independent oracle for the order-4 value: invert the kernel shape
    # S(y) = sum_j |B_{j+1}| / (j+1)! y^j term by term, then integrate
    shape = [abs(bernoulli(j + 1)) / factorial(j + 1) for j in range(5)]
    reciprocal = [1 / shape[0]]
    for k in range(1, 5):
        acc = sum(shape[j] * reciprocal[k - j] for j in range(1, k + 1))
        reciprocal.append(-acc / shape[0])
    oracle_order_4 = reciprocal[4] / 4
    assert oracle_order_4 == Fraction(11, 12960)
    assert log_series.coefficient(4) == oracle_order_4
    record_property(
        "detail",
        "ode holds through order 16; antiderivative order 4 is 11/12960 by "
        "the independent inversion oracle (11/12969 appears in circulation)",
    )


def test_criterion_6_tail_scale_fit(record_property):
    # reference values attached to the orders that actually produce them:
    # the fitted scale peaks near the start of the sweep and is smallest at
    # n = 24, which is what makes the decay base delta largest there
    beta_small_n = estimate_beta(10, 60)
    beta_large_n = estimate_beta(24, 60)
    assert abs(beta_small_n - 8.32685) / 8.32685 < 1e-3
    assert abs(beta_large_n - 8.233432) / 8.233432 < 1e-3

    rows = beta_sweep(10, 24, 60)
    delta_peak = max(row.delta for row in rows)
    assert abs(delta_peak - 0.902362) < 5e-4
    assert max(rows, key=lambda row: row.delta).n == 24
    record_property(
        "detail",
        f"beta({10}) = {beta_small_n:.6f}, beta({24}) = {beta_large_n:.6f}, "
        f"peak delta = {delta_peak:.6f} at n = 24",
    )


def test_criterion_7_bound_algebra(record_property):
    frozen = truncation_bound(3, 1.0, 0.5 / DELTA_XI)
    assert math.isclose(frozen, 0.03125, rel_tol=1e-12)
    pairs = 0
    for n_trunc in range(1, 9):
        for tenths in range(1, 10):
            t = (tenths / 10.0) / DELTA_XI
            tight = truncation_bound_tight(n_trunc, 1.0, t)
            simple = truncation_bound(n_trunc, 1.0, t)
            assert tight <= simple, (n_trunc, tenths)
            pairs += 1
    record_property(
        "detail",
        f"tail bound at x = 1/2, N = 3 equals 0.03125; series form stays "
        f"below the closed form on all {pairs} grid points",
    )


def test_criterion_8_measured_norms_respect_bounds(record_property):
    start = time.perf_counter()
    worst_margin = 0.0
    worst_route_gap = 0.0
    for seed in range(100, 120):
        gen, t = random_trig_generator(seed, x_target=0.3)
        report = validate_bounds(gen, t, n_max=4, quad=VALIDATION_QUAD)
        assert report.rejection is None, f"seed {seed}: {report.rejection}"
        assert report.passed, f"seed {seed} failed"
        for row in report.terms:
            assert row.measured <= row.bound + row.slack, (seed, row.n)
            worst_margin = max(worst_margin, row.measured / row.bound)
        for row in report.truncation:
            assert row.applicable, (seed, row.n_trunc)
            assert row.measured <= row.bound + row.slack, (seed, row.n_trunc)

        tree_term = magnus_term_tree(3, gen, t, VALIDATION_QUAD)
        direct_term = magnus_term_direct(3, gen, t, VALIDATION_QUAD)
        gap = operator_norm(tree_term - direct_term) / operator_norm(tree_term)
        assert gap < 1e-6, f"seed {seed}: route gap {gap:.2e}"
        worst_route_gap = max(worst_route_gap, gap)
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0, f"took {elapsed:.0f} s, budget is 5 min"
    record_property(
        "detail",
        f"20 seeded instances at x = 0.3: all norms within bounds "
        f"(worst measured/bound = {worst_margin:.3f}), order-3 route gap "
        f"<= {worst_route_gap:.1e}, {elapsed:.0f} s",
    )


def test_criterion_9_structural_invariants(record_property):
    worst_unitarity = 0.0
    for seed in (100, 101, 102, 103, 104):
        gen, t = random_trig_generator(seed, x_target=0.3)
        for n_trunc in range(1, 5):
            u = truncated_propagator(n_trunc, gen, t, VALIDATION_QUAD)
            defect = operator_norm(u @ u.conj().T - np.eye(gen.dimension))
            assert defect <= 1e-10, (seed, n_trunc, defect)
            worst_unitarity = max(worst_unitarity, defect)

    pauli_z = np.diag([1.0 + 0.0j, -1.0 + 0.0j])
    pauli_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    h = 0.6 * pauli_x + 0.3 * pauli_z
    gen = GeneratorFunction(
        dimension=2,
        evaluate=lambda s: -1j * h,
        h_max_hint=operator_norm(h),
        hermitian=True,
    )
    for n in (2, 3, 4):
        residue = operator_norm(magnus_term_tree(n, gen, 0.8, VALIDATION_QUAD))
        assert residue < 1e-10, (n, residue)
    record_property(
        "detail",
        f"truncated propagators unitary to {worst_unitarity:.1e} for N <= 4; "
        "autonomous instances leave no weight above first order",
    )
