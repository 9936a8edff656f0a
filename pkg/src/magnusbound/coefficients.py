"""Per-tree rational weights and the order coefficient sums built from them.

Three exact quantities attach to a tree tau with n leaves:

* ``alpha(tau)``: the signed weight of tau's commutator-integral term,
  defined by alpha(leaf) = 1 and, for a root with r grafts,
  alpha = (B_r / r!) * prod_i alpha(tau_i) with B_1 = +1/2.
* ``mu(tau)``: the value of tau's bare iterated integral over the ordered
  time simplex, normalized so that the integral equals mu * t^n.  It obeys
  mu(leaf) = 1 and mu = (1/n) * prod_i mu(tau_i).
* ``nu_n = sum over n-leaf trees of |alpha| * mu``: the coefficient that
  controls the n-th order term of the expansion.

``nu_n`` can be evaluated three ways: by brute-force tree enumeration, by an
order recursion that never touches individual trees, and by a two-term
simplified variant of that recursion which gives slightly smaller values
from n = 5 onward.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from .exact import bernoulli, factorial, rational_string, scientific_string
from .trees import Tree, enumerate_trees, serialize

__all__ = [
    "CoefficientRecord",
    "NuTable",
    "alpha",
    "coefficient_records",
    "composition_enumerate",
    "mu",
    "mu_oracle",
    "nu_enumeration",
    "nu_recursive",
    "nu_simplified",
    "nu_table_csv",
    "records_json_dict",
]


@lru_cache(maxsize=None)
def alpha(tree: Tree) -> Fraction:
    """Signed rational weight of a tree's term; zero whenever any node has an
    odd graft count of three or more (those Bernoulli numbers vanish)."""
    if tree.is_leaf:
        return Fraction(1)
    r = len(tree.children)
    weight = bernoulli(r) / factorial(r)
    for child in tree.children:
        if weight == 0:
            break
        weight *= alpha(child)
    return weight


@lru_cache(maxsize=None)
def mu(tree: Tree) -> Fraction:
    """Simplex volume factor of a tree's bare iterated integral: the integral
    equals mu(tree) * t**n for a constant integrand of norm one."""
    if tree.is_leaf:
        return Fraction(1)
    value = Fraction(1)
    for child in tree.children:
        value *= mu(child)
    return value / tree.leaves


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            if cb:
                out[i + j] += ca * cb
    return out


def _poly_integrate(a: list[Fraction]) -> list[Fraction]:
    return [Fraction(0)] + [c / (j + 1) for j, c in enumerate(a)]


def _integral_poly(tree: Tree) -> list[Fraction]:
    prod = [Fraction(1)]
    for child in tree.children:
        prod = _poly_mul(prod, _integral_poly(child))
    return _poly_integrate(prod)


def mu_oracle(tree: Tree) -> Fraction:
    """``mu`` recomputed by literally unfolding the nested integral.

    Bottom-up, a node's integrand is the polynomial product of its grafts'
    integrals, and integrating a monomial sends s**j to s**(j+1) / (j+1).
    The result must come out as a single monomial mu * t**n; this path shares
    no code with :func:`mu` and exists as its cross-check.
    """
    poly = _integral_poly(tree)
    n = tree.leaves
    if len(poly) != n + 1 or any(c != 0 for c in poly[:-1]):
        raise ArithmeticError("unfolded integral is not a clean monomial")
    return poly[n]


def composition_enumerate(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of ``total`` into ``parts`` positive parts.

    Lazily yielded in lexicographic order; there are C(total-1, parts-1) of
    them.  ``parts > total`` yields nothing.
    """
    if total < 1 or parts < 1:
        raise ValueError("total and parts must be >= 1")
    if parts > total:
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in composition_enumerate(total - first, parts - 1):
            yield (first,) + rest


def nu_enumeration(n: int) -> Fraction:
    """``nu_n`` summed tree by tree; practical for n up to about 12."""
    total = Fraction(0)
    for tree in enumerate_trees(n):
        weight = alpha(tree)
        if weight:
            total += abs(weight) * mu(tree)
    return total


@dataclass(frozen=True)
class NuTable:
    """Exact values nu_1 .. nu_{n_max}; index 0 is an unused zero slot."""

    method: str
    values: tuple[Fraction, ...]

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> Fraction:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n must be in 1..{self.n_max}, got {n}")
        return self.values[n]

    def items(self) -> Iterator[tuple[int, Fraction]]:
        for n in range(1, self.n_max + 1):
            yield n, self.values[n]


def _convolve_truncated(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * (n + 1)
    for i in range(1, n):
        ca = a[i]
        if not ca:
            continue
        for j in range(1, n - i + 1):
            cb = b[j]
            if cb:
                out[i + j] += ca * cb
    return out


def nu_recursive(n_max: int) -> NuTable:
    """The full table nu_1 .. nu_{n_max} from the order recursion

        (n + 1) * nu_{n+1} = sum_{r=1}^{n} (|B_r| / r!) *
                             sum over compositions (j_1..j_r) of n of prod nu_{j_i}.

    The inner composition sum is the x**n coefficient of the r-th power of
    f(x) = sum nu_j x**j, so it is evaluated by truncated convolution powers
    instead of enumerating compositions; odd r >= 3 contributes nothing.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    nu: list[Fraction] = [Fraction(0), Fraction(1)]
    for n in range(1, n_max):
        f = nu[:]  # coefficients of f through degree n
        power = f[:]
        total = Fraction(0)
        for r in range(1, n + 1):
            b = abs(bernoulli(r))
            if b:
                total += b / factorial(r) * power[n]
            if r < n:
                power = _convolve_truncated(power, f, n)
        nu.append(total / (n + 1))
    return NuTable("recursion", tuple(nu))


def nu_simplified(n_max: int) -> NuTable:
    """Two-channel variant keeping only the r = 1 and r = 2 terms:

        (n + 1) * nu_{n+1} = nu_n / 2 + (1/12) * sum_{j=1}^{n-1} nu_j nu_{n-j}.

    Agrees with :func:`nu_recursive` through n = 4 and runs strictly below it
    from n = 5 on (the first dropped channel is r = 4).
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    nu: list[Fraction] = [Fraction(0), Fraction(1)]
    for n in range(1, n_max):
        pair_sum = sum((nu[j] * nu[n - j] for j in range(1, n)), Fraction(0))
        nu.append((nu[n] / 2 + pair_sum / 12) / (n + 1))
    return NuTable("simplified", tuple(nu))


@dataclass(frozen=True)
class CoefficientRecord:
    """One tree with its weight, simplex factor, and their product |alpha|*mu."""

    tree: Tree
    alpha: Fraction
    mu: Fraction
    product: Fraction


def coefficient_records(n: int) -> tuple[CoefficientRecord, ...]:
    """Records for every n-leaf tree, in enumeration order."""
    records = []
    for tree in enumerate_trees(n):
        a = alpha(tree)
        m = mu(tree)
        records.append(CoefficientRecord(tree, a, m, abs(a) * m))
    return tuple(records)


def records_json_dict(records: Iterable[CoefficientRecord]) -> dict:
    """JSON-ready mapping keyed by serialized tree, rationals as p/q strings."""
    return {
        serialize(r.tree): {
            "alpha": rational_string(r.alpha),
            "mu": rational_string(r.mu),
            "product": rational_string(r.product),
        }
        for r in records
    }


def nu_table_csv(table: NuTable) -> str:
    """CSV rendering with columns n, exact, decimal, method."""
    lines = ["n,exact,decimal,method"]
    for n, value in table.items():
        lines.append(
            f"{n},{rational_string(value)},{scientific_string(value)},{table.method}"
        )
    return "\n".join(lines) + "\n"
