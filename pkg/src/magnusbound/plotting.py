"""Figure rendering for the tabular outputs.  Every function draws with the
file-backed Agg backend and writes the figure to the given path."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bounds import coefficient_envelope
from .coefficients import NuTable
from .dynamics import ValidationReport
from .series import SweepRow

__all__ = [
    "save_beta_sweep",
    "save_coefficient_decay",
    "save_phi_curve",
    "save_validation",
]


def save_coefficient_decay(
    table: NuTable, path: str | Path, *, envelope: bool = True
) -> str:
    """Semilog decay of the exact order coefficients, optionally with the
    closed-form envelope overlaid."""
    orders = list(range(1, table.n_max + 1))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(orders, [float(table[n]) for n in orders], "o-", label=f"exact ({table.method})")
    if envelope:
        ax.semilogy(
            orders,
            [coefficient_envelope(n) for n in orders],
            "--",
            color="tab:red",
            label="envelope 8 d^n / (n^2 2^n)",
        )
    ax.set_xlabel("order n")
    ax.set_ylabel("coefficient")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_phi_curve(
    rows: Iterable[tuple[int, float]], path: str | Path, *, title: str = ""
) -> str:
    """Semilog plot of the sampled tail-term majorant against k."""
    rows = list(rows)
    ks = [k for k, _ in rows]
    values = [v for _, v in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(ks, values, "o-", markersize=3)
    peak = max(range(len(values)), key=values.__getitem__)
    ax.axvline(ks[peak], color="tab:red", linestyle=":", label=f"peak near k = {ks[peak]}")
    ax.set_xlabel("k")
    ax.set_ylabel("majorant value")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_beta_sweep(rows: Iterable[SweepRow], path: str | Path) -> str:
    """Fitted scale and resulting decay base across orders, two panels."""
    rows = list(rows)
    ns = [r.n for r in rows]
    fig, (ax_beta, ax_delta) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax_beta.plot(ns, [r.beta for r in rows], "o-")
    ax_beta.set_xlabel("order n")
    ax_beta.set_ylabel("fitted beta")
    ax_beta.grid(alpha=0.3)
    ax_delta.plot(ns, [r.delta for r in rows], "s-", color="tab:green")
    ax_delta.set_xlabel("order n")
    ax_delta.set_ylabel("decay base delta")
    ax_delta.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_validation(report: ValidationReport, path: str | Path) -> str:
    """Measured term norms and truncation defects against their bounds."""
    fig, (ax_terms, ax_tail) = plt.subplots(1, 2, figsize=(9.0, 4.0))

    ns = [row.n for row in report.terms]
    ax_terms.semilogy(ns, [row.measured for row in report.terms], "o", label="measured")
    ax_terms.semilogy(ns, [row.bound for row in report.terms], "_", markersize=14, label="bound")
    ax_terms.set_xlabel("order n")
    ax_terms.set_ylabel("term norm")
    ax_terms.set_xticks(ns)
    ax_terms.grid(alpha=0.3)
    ax_terms.legend()

    usable = [row for row in report.truncation if row.applicable and row.measured]
    if usable:
        depths = [row.n_trunc for row in usable]
        ax_tail.semilogy(depths, [row.measured for row in usable], "o", label="measured")
        ax_tail.semilogy(depths, [row.bound for row in usable], "_", markersize=14, label="bound")
        ax_tail.set_xticks(depths)
        ax_tail.legend()
    else:
        ax_tail.text(0.5, 0.5, "no applicable truncation rows", ha="center", va="center")
    ax_tail.set_xlabel("kept orders N")
    ax_tail.set_ylabel("truncation defect")
    ax_tail.grid(alpha=0.3)

    fig.suptitle(report.label or "validation run")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
