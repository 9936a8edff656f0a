"""Exact tree-coefficient tables, scaling analysis, and certified truncation
bounds for the commutator-integral expansion of time-ordered propagators.

The light exact/analytic layers import eagerly; the numerics and plotting
layers (numpy, scipy, matplotlib) load on first use via
``magnusbound.dynamics`` and ``magnusbound.plotting``.
"""
from .bounds import (
    DELTA_XI,
    XI,
    build_report,
    coefficient_envelope,
    magnus_term_bound,
    truncation_bound,
    truncation_bound_tight,
)
from .coefficients import (
    NuTable,
    alpha,
    mu,
    nu_enumeration,
    nu_recursive,
    nu_simplified,
)
from .exact import Rational, bernoulli, factorial
from .series import (
    PowerSeries,
    beta_sweep,
    delta_from_beta,
    estimate_beta,
    lhs_integral_series,
    nu_hat,
    verify_ode,
)
from .trees import LEAF, Tree, count, enumerate_trees, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "DELTA_XI",
    "LEAF",
    "NuTable",
    "PowerSeries",
    "Rational",
    "Tree",
    "XI",
    "__version__",
    "alpha",
    "bernoulli",
    "beta_sweep",
    "build_report",
    "coefficient_envelope",
    "count",
    "delta_from_beta",
    "enumerate_trees",
    "estimate_beta",
    "factorial",
    "lhs_integral_series",
    "magnus_term_bound",
    "mu",
    "nu_enumeration",
    "nu_hat",
    "nu_recursive",
    "nu_simplified",
    "parse",
    "serialize",
    "truncation_bound",
    "truncation_bound_tight",
    "verify_ode",
]
