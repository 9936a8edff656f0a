"""Grid-based evaluation of the expansion terms for matrix-valued generators,
a step-doubling reference propagator, and bound validation reports.

Conventions.  The generator is A(s) = -i H(s) with the physics prefactors
absorbed, so the n-th expansion term M_n is built from A alone, commutators
of anti-Hermitian matrices stay anti-Hermitian, and exp(M_1 + ... + M_N)
approximates the time-ordered propagator at time t.

Two independent evaluation routes exist for the terms:

* :func:`magnus_term_tree` sums, over the n-leaf trees, the tree's rational
  weight times its nested commutator-integral, sharing subtree tables.
* :func:`magnus_term_direct` (n <= 4) expands the textbook nested-commutator
  integrands into signed words A(t_i1) ... A(t_in) and integrates each word
  over the ordered time simplex.

Both use the same cumulative composite Simpson rule on a uniform grid and a
grid-doubling loop that stops when the evaluated term settles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .bounds import DELTA_XI, magnus_term_bound, scaled_time, truncation_bound
from .coefficients import alpha
from .trees import Tree, enumerate_trees

__all__ = [
    "BranchCutError",
    "ConfigError",
    "GeneratorFunction",
    "NonConvergenceError",
    "QuadratureConfig",
    "QuadratureError",
    "RunConfig",
    "TermRow",
    "TruncationRow",
    "ValidationReport",
    "build_generator",
    "cumulative_simpson",
    "example_config_text",
    "load_example_config",
    "magnus_term_direct",
    "magnus_term_tree",
    "matrix_log_principal",
    "operator_norm",
    "parse_run_config",
    "random_trig_generator",
    "reference_propagator",
    "run_validation",
    "truncated_propagator",
    "validate_bounds",
]

MAX_TERM_ORDER = 6
MAX_DIRECT_ORDER = 4


class QuadratureError(RuntimeError):
    """Grid refinement exhausted without the term settling."""


class NonConvergenceError(RuntimeError):
    """Step-doubling propagator products failed to settle."""


class BranchCutError(ValueError):
    """Principal matrix logarithm undefined or unreliable for this input."""


class ConfigError(ValueError):
    """Malformed run configuration; the message names the offending line."""


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(matrix), 2))


@dataclass(frozen=True)
class GeneratorFunction:
    """Time-dependent generator A(s) = -i H(s) on [0, t].

    ``h_max_hint`` must upper-bound the operator norm of H(s) over the run
    interval; it feeds the scaled time x = DELTA_XI * h_max_hint * t used by
    every bound.  ``hermitian`` declares that H is Hermitian (so A is
    anti-Hermitian and propagators are unitary).
    """

    dimension: int
    evaluate: Callable[[float], np.ndarray]
    h_max_hint: float
    hermitian: bool = False
    label: str = ""

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.h_max_hint < 0.0:
            raise ValueError(f"h_max_hint must be >= 0, got {self.h_max_hint}")


@dataclass(frozen=True)
class QuadratureConfig:
    grid_points: int = 128
    scheme: str = "simpson"
    tol: float = 1e-8
    max_refinements: int = 10

    def __post_init__(self) -> None:
        if self.grid_points < 8:
            raise ValueError(f"grid_points must be >= 8, got {self.grid_points}")
        if self.scheme != "simpson":
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")


def cumulative_simpson(values: np.ndarray, step: float) -> np.ndarray:
    """Cumulative integral of uniformly sampled values along the first axis.

    Even indices use composite Simpson; each odd index adds a three-point
    parabolic correction (step/12) * (5 f_0 + 8 f_1 - f_2) to the preceding
    even node.  Fourth-order accurate everywhere on the grid; the sample
    count must be odd so the interval count is even.
    """
    if values.shape[0] < 3 or values.shape[0] % 2 == 0:
        raise ValueError("need an odd number of samples (even interval count)")
    result = np.zeros_like(values)
    blocks = (step / 3.0) * (values[0:-2:2] + 4.0 * values[1:-1:2] + values[2::2])
    result[2::2] = np.cumsum(blocks, axis=0)
    result[1::2] = result[0:-1:2] + (step / 12.0) * (
        5.0 * values[0:-2:2] + 8.0 * values[1:-1:2] - values[2::2]
    )
    return result


def _sample(gen: GeneratorFunction, t: float, intervals: int) -> np.ndarray:
    grid = np.linspace(0.0, float(t), intervals + 1)
    shape = (gen.dimension, gen.dimension)
    table = np.empty((intervals + 1,) + shape, dtype=complex)
    for i, s in enumerate(grid):
        a = np.asarray(gen.evaluate(float(s)), dtype=complex)
        if a.shape != shape:
            raise ValueError(
                f"generator returned shape {a.shape}, expected {shape}"
            )
        table[i] = a
    return table


def _term_tree_on_grid(n: int, a_table: np.ndarray, step: float) -> np.ndarray:
    """Sum over n-leaf trees of alpha(tree) * (tree's commutator-integral),
    evaluated on one grid with subtree tables shared across trees."""
    memo: dict[Tree, np.ndarray] = {}

    def integrand(tree: Tree) -> np.ndarray:
        got = memo.get(tree)
        if got is not None:
            return got
        acc = a_table
        for child in tree.children:
            integral = cumulative_simpson(integrand(child), step)
            acc = acc @ integral - integral @ acc
        memo[tree] = acc
        return acc

    total = np.zeros_like(a_table[0])
    for tree in enumerate_trees(n):
        weight = alpha(tree)
        if weight == 0:
            continue
        total = total + float(weight) * cumulative_simpson(integrand(tree), step)[-1]
    return total


def _refined(
    evaluator: Callable[[np.ndarray, float], np.ndarray],
    gen: GeneratorFunction,
    t: float,
    quad: QuadratureConfig,
) -> tuple[np.ndarray, float, int]:
    """Run ``evaluator(a_table, step)`` on doubling grids until consecutive
    values agree within quad.tol (absolute, relative above norm one).

    Returns (value, defect, intervals); the defect is the final doubling
    difference and feeds the slack terms of validation reports.
    """
    intervals = quad.grid_points + (quad.grid_points % 2)
    previous: np.ndarray | None = None
    for _ in range(quad.max_refinements + 1):
        a_table = _sample(gen, t, intervals)
        value = evaluator(a_table, t / intervals)
        if previous is not None:
            defect = operator_norm(value - previous)
            if defect <= quad.tol * max(1.0, operator_norm(value)):
                return value, defect, intervals
        previous = value
        intervals *= 2
    raise QuadratureError(
        f"no convergence below tol={quad.tol:g} after "
        f"{quad.max_refinements} grid doublings (finest: {intervals // 2} intervals)"
    )


def magnus_term_tree(
    n: int,
    gen: GeneratorFunction,
    t: float,
    quad: QuadratureConfig = QuadratureConfig(),
) -> np.ndarray:
    """n-th expansion term via the per-tree route; supported for n <= 6."""
    if not 1 <= n <= MAX_TERM_ORDER:
        raise ValueError(f"term order must be in 1..{MAX_TERM_ORDER}, got {n}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    value, _, _ = _refined(
        lambda table, step: _term_tree_on_grid(n, table, step), gen, t, quad
    )
    return value


# Explicit nested-commutator integrands of the first four terms.  Integers
# name the simplex variables t_1 >= t_2 >= ... in the order they appear in
# the iterated integral; a pair is a commutator of its two entries.
_COMMUTATOR_FORMS: dict[int, tuple[Fraction, tuple[object, ...]]] = {
    1: (Fraction(1), (1,)),
    2: (Fraction(1, 2), ((1, 2),)),
    3: (Fraction(1, 6), ((1, (2, 3)), (3, (2, 1)))),
    4: (
        Fraction(1, 12),
        (
            (((1, 2), 3), 4),
            (1, ((2, 3), 4)),
            (1, (2, (3, 4))),
            (2, (3, (4, 1))),
        ),
    ),
}


def _expand_words(expr: object) -> list[tuple[int, tuple[int, ...]]]:
    """Flatten a nested-commutator expression into signed variable words."""
    if isinstance(expr, int):
        return [(1, (expr,))]
    left, right = expr  # type: ignore[misc]
    out: list[tuple[int, tuple[int, ...]]] = []
    for sign_l, word_l in _expand_words(left):
        for sign_r, word_r in _expand_words(right):
            out.append((sign_l * sign_r, word_l + word_r))
            out.append((-sign_l * sign_r, word_r + word_l))
    return out


_EINSUM_LETTERS = "abcdefghijklmnopqrsuvwxyz"


def _simplex_word_integral(
    a_table: np.ndarray, word: Sequence[int], step: float
) -> np.ndarray:
    """Iterated integral over t >= t_1 >= ... >= t_n >= 0 of the positional
    matrix product prod_p A(t_{word[p]}).

    Variables integrate innermost (largest index) first.  The partially
    integrated object is a grid table carrying one (row, column) index pair
    per contiguous consumed segment of the word; segments separated by a
    not-yet-integrated variable stay uncontracted until that variable's
    factor fills the gap.  Tensor rank stays modest for the n <= 4 words
    this backs.
    """
    tokens: list[tuple[str, int]] = [("var", v) for v in word]
    table: np.ndarray | None = None
    for v in range(len(word), 0, -1):
        tokens[tokens.index(("var", v))] = ("factor", 0)

        # group consecutive non-variable tokens into merged segments
        groups: list[list[tuple[str, int]]] = []
        rebuilt: list[tuple[str, int]] = []
        current: list[tuple[str, int]] = []
        for token in tokens:
            if token[0] == "var":
                if current:
                    groups.append(current)
                    rebuilt.append(("segment", len(groups) - 1))
                    current = []
                rebuilt.append(token)
            else:
                current.append(token)
        if current:
            groups.append(current)
            rebuilt.append(("segment", len(groups) - 1))

        letters = iter(_EINSUM_LETTERS)
        old_pairs: list[tuple[str, str]] = []
        if table is not None:
            for _ in range((table.ndim - 1) // 2):
                old_pairs.append((next(letters), next(letters)))
        factor_pair = (next(letters), next(letters))

        rename: dict[str, str] = {}

        def resolve(ch: str) -> str:
            while ch in rename:
                ch = rename[ch]
            return ch

        out_sub = ""
        for group in groups:
            pairs = [
                old_pairs[idx] if kind == "segment" else factor_pair
                for kind, idx in group
            ]
            for (_, col_prev), (row_next, _) in zip(pairs, pairs[1:]):
                rename[row_next] = resolve(col_prev)
            out_sub += resolve(pairs[0][0]) + resolve(pairs[-1][1])

        in_subs: list[str] = []
        operands: list[np.ndarray] = []
        if table is not None:
            old_sub = "".join(resolve(c) for pair in old_pairs for c in pair)
            in_subs.append("t" + old_sub)
            operands.append(table)
        in_subs.append("t" + resolve(factor_pair[0]) + resolve(factor_pair[1]))
        operands.append(a_table)

        merged = np.einsum(",".join(in_subs) + "->t" + out_sub, *operands)
        table = cumulative_simpson(merged, step)
        tokens = rebuilt

    assert table is not None and tokens == [("segment", 0)]
    return table[-1]


def magnus_term_direct(
    n: int,
    gen: GeneratorFunction,
    t: float,
    quad: QuadratureConfig = QuadratureConfig(),
) -> np.ndarray:
    """n-th expansion term from its explicit nested-commutator simplex
    integral, word by word; supported for n <= 4.

    Structurally independent of :func:`magnus_term_tree` (no trees, no
    per-tree weights), which is what makes it a meaningful cross-check.
    """
    if not 1 <= n <= MAX_DIRECT_ORDER:
        raise ValueError(f"direct evaluation covers 1..{MAX_DIRECT_ORDER}, got {n}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    prefactor, exprs = _COMMUTATOR_FORMS[n]

    def evaluate(a_table: np.ndarray, step: float) -> np.ndarray:
        total = np.zeros_like(a_table[0])
        for expr in exprs:
            for sign, word in _expand_words(expr):
                total = total + sign * _simplex_word_integral(a_table, word, step)
        return float(prefactor) * total

    value, _, _ = _refined(evaluate, gen, t, quad)
    return value


def _expm_batch(matrices: np.ndarray) -> np.ndarray:
    """exp of a batch of matrices by scaling, order-12 Taylor, and squaring.

    Accurate to machine precision once the scaled norms sit below 1/4, which
    the scaling step enforces; intended for the small step matrices of the
    midpoint product."""
    norms = np.linalg.norm(matrices, axis=(1, 2))
    top = float(norms.max(initial=0.0))
    squarings = max(0, math.ceil(math.log2(top / 0.25))) if top > 0.25 else 0
    scaled = matrices / (2.0**squarings)
    dim = matrices.shape[-1]
    result = np.broadcast_to(np.eye(dim, dtype=complex), matrices.shape).copy()
    term = result.copy()
    for k in range(1, 13):
        term = term @ scaled / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def reference_propagator(
    gen: GeneratorFunction,
    t: float,
    tol: float = 1e-10,
    initial_steps: int = 64,
    max_doublings: int = 16,
) -> np.ndarray:
    """Time-ordered propagator at time t by products of midpoint-rule
    exponentials, doubling the step count until successive products agree
    within ``tol`` in operator norm.

    The finest product is returned.  Each factor is the exponential of an
    exact multiple of A at the step midpoint, so for anti-Hermitian A the
    result is unitary to rounding regardless of the step count.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    steps = max(2, initial_steps)
    previous: np.ndarray | None = None
    for _ in range(max_doublings + 1):
        h = t / steps
        midpoints = (np.arange(steps) + 0.5) * h
        batch = np.empty((steps, gen.dimension, gen.dimension), dtype=complex)
        for i, s in enumerate(midpoints):
            batch[i] = np.asarray(gen.evaluate(float(s)), dtype=complex)
        factors = _expm_batch(batch * h)
        u = np.eye(gen.dimension, dtype=complex)
        for f in factors:  # later times multiply from the left
            u = f @ u
        if previous is not None and operator_norm(u - previous) <= tol:
            return u
        previous = u
        steps *= 2
    raise NonConvergenceError(
        f"midpoint products did not settle below {tol:g} within "
        f"{max_doublings} doublings from {max(2, initial_steps)} steps"
    )


def truncated_propagator(
    n_trunc: int,
    gen: GeneratorFunction,
    t: float,
    quad: QuadratureConfig = QuadratureConfig(),
) -> np.ndarray:
    """exp(M_1 + ... + M_{n_trunc}) with each term from the tree route."""
    if not 1 <= n_trunc <= MAX_TERM_ORDER:
        raise ValueError(f"n_trunc must be in 1..{MAX_TERM_ORDER}, got {n_trunc}")
    total = np.zeros((gen.dimension, gen.dimension), dtype=complex)
    for n in range(1, n_trunc + 1):
        total = total + magnus_term_tree(n, gen, t, quad)
    return scipy.linalg.expm(total)


def matrix_log_principal(u: np.ndarray, roundtrip_tol: float = 1e-10) -> np.ndarray:
    """Principal matrix logarithm with explicit branch checks.

    Inputs with an eigenvalue at the origin or on the closed negative real
    axis raise :class:`BranchCutError` instead of silently landing on an
    arbitrary branch, and the result is validated by exponentiating back.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    eigenvalues = np.linalg.eigvals(u)
    scale = float(np.abs(eigenvalues).max(initial=0.0))
    if scale == 0.0:
        raise BranchCutError("matrix is singular; no logarithm exists")
    for lam in eigenvalues:
        if abs(lam) <= 1e-14 * scale:
            raise BranchCutError(f"eigenvalue {lam:g} at the origin")
        if lam.real < 0.0 and abs(lam.imag) <= 1e-12 * scale:
            raise BranchCutError(
                f"eigenvalue {lam:g} on the negative real axis; "
                "the principal branch is ill-defined"
            )
    log_u = scipy.linalg.logm(u)
    defect = operator_norm(scipy.linalg.expm(log_u) - u)
    if defect > roundtrip_tol * max(1.0, operator_norm(u)):
        raise BranchCutError(f"exp(log(U)) misses U by {defect:.3e}")
    return log_u


@dataclass(frozen=True)
class TermRow:
    """One order's measured term norm against its closed-form bound."""

    n: int
    measured: float
    bound: float
    slack: float
    passed: bool


@dataclass(frozen=True)
class TruncationRow:
    """One truncation depth's measured defect against the tail bound.

    ``applicable`` is false when x >= 1 (the tail bound diverges there) or
    when the reference propagator was rejected; such rows carry no verdict.
    """

    n_trunc: int
    measured: float | None
    bound: float
    slack: float
    passed: bool
    applicable: bool


@dataclass(frozen=True)
class ValidationReport:
    """Everything measured while validating one generator instance."""

    label: str
    dimension: int
    hermitian: bool
    h_max_hint: float
    t: float
    x: float
    n_max: int
    grid_points: int
    tol: float
    terms: tuple[TermRow, ...]
    truncation: tuple[TruncationRow, ...]
    propagator_defects: tuple[tuple[int, float], ...]
    rejection: str | None
    passed: bool

    def to_json_dict(self) -> dict:
        def fin(v: float | None) -> float | None:
            return None if v is None or not math.isfinite(v) else v

        return {
            "generator": {
                "label": self.label,
                "dimension": self.dimension,
                "hermitian": self.hermitian,
                "h_max_hint": self.h_max_hint,
            },
            "t": self.t,
            "x": self.x,
            "n_max": self.n_max,
            "quadrature": {
                "grid_points": self.grid_points,
                "tol": self.tol,
                "scheme": "simpson",
            },
            "terms": [
                {
                    "n": row.n,
                    "measured": row.measured,
                    "bound": fin(row.bound),
                    "slack": row.slack,
                    "passed": row.passed,
                }
                for row in self.terms
            ],
            "truncation": [
                {
                    "n_trunc": row.n_trunc,
                    "measured": fin(row.measured),
                    "bound": fin(row.bound),
                    "slack": row.slack,
                    "passed": row.passed,
                    "applicable": row.applicable,
                }
                for row in self.truncation
            ],
            "propagator_defects": [
                {"n_trunc": n, "defect": d} for n, d in self.propagator_defects
            ],
            "rejection": self.rejection,
            "passed": self.passed,
        }


def validate_bounds(
    gen: GeneratorFunction,
    t: float,
    n_max: int = 4,
    quad: QuadratureConfig = QuadratureConfig(),
    *,
    reference_tol: float = 1e-10,
) -> ValidationReport:
    """Measure term norms and truncation defects and compare them with the
    closed-form bounds.

    Per-term rows cover n = 1..n_max.  Truncation rows cover keep-depths
    N = 1..n_max-1, comparing |log(U_ref) - sum of kept terms| against the
    tail bound; they need x < 1 and a usable principal logarithm, otherwise
    they are marked not applicable (a rejected logarithm is itemized in
    ``rejection`` rather than counted as a bound violation).  Each row's
    slack is ten times the accumulated grid-doubling defects plus the
    reference tolerance allowance; measured values must stay below
    bound + slack to pass.
    """
    if not 1 <= n_max <= MAX_TERM_ORDER:
        raise ValueError(f"n_max must be in 1..{MAX_TERM_ORDER}, got {n_max}")
    terms: dict[int, np.ndarray] = {}
    defects: dict[int, float] = {}
    for n in range(1, n_max + 1):
        value, defect, _ = _refined(
            lambda table, step, order=n: _term_tree_on_grid(order, table, step),
            gen,
            t,
            quad,
        )
        terms[n] = value
        defects[n] = defect

    x = scaled_time(gen.h_max_hint, t)
    term_rows = []
    for n in range(1, n_max + 1):
        measured = operator_norm(terms[n])
        bound = magnus_term_bound(n, gen.h_max_hint, t)
        slack = 10.0 * defects[n] + 1e-12
        term_rows.append(TermRow(n, measured, bound, slack, measured <= bound + slack))

    truncation_rows: list[TruncationRow] = []
    propagator_defects: list[tuple[int, float]] = []
    rejection: str | None = None
    log_ref: np.ndarray | None = None
    u_ref: np.ndarray | None = None
    if x < 1.0 and n_max >= 2:
        try:
            u_ref = reference_propagator(gen, t, tol=reference_tol)
            log_ref = matrix_log_principal(u_ref)
        except (BranchCutError, NonConvergenceError) as err:
            rejection = str(err)

    partial = np.zeros((gen.dimension, gen.dimension), dtype=complex)
    slack_acc = 10.0 * reference_tol + 1e-12
    for n_trunc in range(1, n_max):
        partial = partial + terms[n_trunc]
        slack_acc += 10.0 * defects[n_trunc]
        bound = truncation_bound(n_trunc, gen.h_max_hint, t)
        if log_ref is None:
            truncation_rows.append(
                TruncationRow(n_trunc, None, bound, slack_acc, True, False)
            )
            continue
        measured = operator_norm(log_ref - partial)
        truncation_rows.append(
            TruncationRow(
                n_trunc,
                measured,
                bound,
                slack_acc,
                measured <= bound + slack_acc,
                True,
            )
        )
        assert u_ref is not None
        propagator_defects.append(
            (n_trunc, operator_norm(u_ref - scipy.linalg.expm(partial)))
        )

    passed = all(r.passed for r in term_rows) and all(
        r.passed for r in truncation_rows if r.applicable
    )
    return ValidationReport(
        label=gen.label,
        dimension=gen.dimension,
        hermitian=gen.hermitian,
        h_max_hint=gen.h_max_hint,
        t=t,
        x=x,
        n_max=n_max,
        grid_points=quad.grid_points,
        tol=quad.tol,
        terms=tuple(term_rows),
        truncation=tuple(truncation_rows),
        propagator_defects=tuple(propagator_defects),
        rejection=rejection,
        passed=passed,
    )


# run configuration: a flat key = value text format

_CONFIG_KEYS = ("dimension", "family", "coefficients", "t", "n_max", "grid", "tol")
_FAMILIES = ("constant", "trig", "poly")

_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class RunConfig:
    """Parsed form of one validation run description."""

    dimension: int
    family: str
    coefficients: tuple[float, ...]
    t: float
    n_max: int
    grid: int
    tol: float


def parse_run_config(text: str) -> RunConfig:
    """Parse the flat ``key = value`` run format.

    Blank lines and ``#`` comments are ignored; every key is required exactly
    once.  Errors name the line they came from.
    """
    seen: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(
                f"line {lineno}: duplicate key {key!r} (first on line {seen[key][0]})"
            )
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        seen[key] = (lineno, value)

    missing = [k for k in _CONFIG_KEYS if k not in seen]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")

    def take_int(key: str) -> int:
        lineno, value = seen[key]
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} must be an integer") from None

    def take_float(key: str) -> float:
        lineno, value = seen[key]
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} must be a number") from None

    dimension = take_int("dimension")
    if not 2 <= dimension <= 8:
        raise ConfigError(
            f"line {seen['dimension'][0]}: dimension must be in 2..8, got {dimension}"
        )
    family_line, family = seen["family"]
    if family not in _FAMILIES:
        raise ConfigError(
            f"line {family_line}: family must be one of {', '.join(_FAMILIES)}"
        )
    coeff_line, coeff_text = seen["coefficients"]
    try:
        coefficients = tuple(float(p) for p in coeff_text.split(","))
    except ValueError:
        raise ConfigError(
            f"line {coeff_line}: coefficients must be comma-separated numbers"
        ) from None
    t = take_float("t")
    if t < 0.0:
        raise ConfigError(f"line {seen['t'][0]}: t must be >= 0")
    n_max = take_int("n_max")
    if not 1 <= n_max <= MAX_TERM_ORDER:
        raise ConfigError(
            f"line {seen['n_max'][0]}: n_max must be in 1..{MAX_TERM_ORDER}"
        )
    grid = take_int("grid")
    if grid < 8:
        raise ConfigError(f"line {seen['grid'][0]}: grid must be >= 8")
    tol = take_float("tol")
    if tol <= 0.0:
        raise ConfigError(f"line {seen['tol'][0]}: tol must be positive")
    return RunConfig(dimension, family, coefficients, t, n_max, grid, tol)


def _coefficient_count(family: str) -> int:
    return {"constant": 3, "trig": 5, "poly": 4}[family]


def build_generator(config: RunConfig) -> GeneratorFunction:
    """Construct the generator a run config describes.

    All families are two-dimensional with Hermitian H(s) in the Pauli basis:

    * ``constant``: c1, c2, c3 with H = c1 X + c2 Y + c3 Z
    * ``trig``: c1, c2, c3, w1, w2 with
      H(s) = c1 cos(w1 s) X + c2 sin(w2 s) Y + c3 Z
    * ``poly``: a, b, c, slope with H(s) = (a + slope s) X + b Y + c Z

    The sup-norm hint is the exact operator norm for ``constant`` and a
    closed-form upper bound over [0, t] for the other families.
    """
    if config.dimension != 2:
        raise ConfigError(
            f"family {config.family!r} is two-dimensional; got dimension {config.dimension}"
        )
    expected = _coefficient_count(config.family)
    if len(config.coefficients) != expected:
        raise ConfigError(
            f"family {config.family!r} takes {expected} coefficients, "
            f"got {len(config.coefficients)}"
        )
    c = config.coefficients
    if config.family == "constant":
        h = c[0] * _PAULI_X + c[1] * _PAULI_Y + c[2] * _PAULI_Z
        hint = math.sqrt(c[0] ** 2 + c[1] ** 2 + c[2] ** 2)
        evaluate = lambda s, m=h: -1.0j * m  # noqa: E731
    elif config.family == "trig":
        c1, c2, c3, w1, w2 = c

        def evaluate(s: float) -> np.ndarray:
            h = (
                c1 * math.cos(w1 * s) * _PAULI_X
                + c2 * math.sin(w2 * s) * _PAULI_Y
                + c3 * _PAULI_Z
            )
            return -1.0j * h

        hint = math.sqrt(c1**2 + c2**2 + c3**2)
    else:  # poly
        a, b, cz, slope = c

        def evaluate(s: float) -> np.ndarray:
            h = (a + slope * s) * _PAULI_X + b * _PAULI_Y + cz * _PAULI_Z
            return -1.0j * h

        x_top = max(abs(a), abs(a + slope * config.t))
        hint = math.sqrt(x_top**2 + b**2 + cz**2)
    return GeneratorFunction(
        dimension=2,
        evaluate=evaluate,
        h_max_hint=hint,
        hermitian=True,
        label=f"{config.family}-2x2",
    )


def run_validation(config: RunConfig) -> ValidationReport:
    """Build the configured generator and validate every bound against it."""
    gen = build_generator(config)
    quad = QuadratureConfig(grid_points=config.grid, tol=config.tol)
    return validate_bounds(gen, config.t, config.n_max, quad)


def example_config_text() -> str:
    """Text of the bundled example run config."""
    from importlib import resources

    return (
        resources.files(__package__).joinpath("data/example_2x2.cfg").read_text()
    )


def load_example_config() -> RunConfig:
    """Parsed form of the bundled example run config."""
    return parse_run_config(example_config_text())


def random_trig_generator(
    seed: int, x_target: float = 0.3
) -> tuple[GeneratorFunction, float]:
    """Seeded random two-level instance with the final time scaled so the
    dimensionless product DELTA_XI * h_max_hint * t equals ``x_target``.

    H(s) = c1 cos(w1 s) X + c2 sin(w2 s) Y + c3 Z with c uniform in
    magnitude on [0.3, 1.0] with random signs and w uniform on [0.5, 2.0].
    """
    if x_target <= 0.0:
        raise ValueError(f"x_target must be positive, got {x_target}")
    rng = np.random.default_rng(seed)
    c = rng.uniform(0.3, 1.0, size=3) * rng.choice([-1.0, 1.0], size=3)
    w = rng.uniform(0.5, 2.0, size=2)
    hint = float(math.sqrt(float(np.dot(c, c))))

    def evaluate(s: float) -> np.ndarray:
        h = (
            c[0] * math.cos(w[0] * s) * _PAULI_X
            + c[1] * math.sin(w[1] * s) * _PAULI_Y
            + c[2] * _PAULI_Z
        )
        return -1.0j * h

    gen = GeneratorFunction(
        dimension=2,
        evaluate=evaluate,
        h_max_hint=hint,
        hermitian=True,
        label=f"trig-seed-{seed}",
    )
    t_final = x_target / (DELTA_XI * hint)
    return gen, t_final
