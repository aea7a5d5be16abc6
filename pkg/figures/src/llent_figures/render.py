"""Render the five standard figures from llent sweep CSV files.

Every curve and marker comes from the CSV rows; the only values computed
here are the two analytic reference curves of figure 2 (the free-boson
closed form and the impenetrable-limit asymptote) and the free-boson tick
marks, all of which are closed-form expressions, not engine output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, SweepTable, load_table

FIGURE_IDS = ("1a", "1b", "2", "3", "4", "5")

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_EULER_GAMMA = float(np.euler_gamma)


@dataclass(frozen=True)
class FigureSpec:
    csv_paths: tuple
    figure_id: str
    out_path: str
    log_x: bool = True

    def __post_init__(self):
        object.__setattr__(self, "csv_paths", tuple(self.csv_paths))
        if self.figure_id not in FIGURE_IDS:
            raise SchemaError(
                f"unsupported figure id {self.figure_id!r}; expected one of {FIGURE_IDS}")
        if not self.csv_paths:
            raise SchemaError("at least one input CSV is required")


def render(spec: FigureSpec) -> str:
    """Render one figure and return the written image path."""
    table = load_table(*spec.csv_paths)
    fig = plt.figure(figsize=(5.0, 3.4), dpi=160)
    ax = fig.add_subplot(111)
    {"1a": _fig_balanced_probability,
     "1b": _fig_outcome_probabilities,
     "2": _fig_probability_scaling,
     "3": _fig_balanced_entropy,
     "4": _fig_weighted_entanglement_tg,
     "5": _fig_extractable_entanglement}[spec.figure_id](ax, table, spec)
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path


def _require(table: SweepTable, mask, what: str) -> SweepTable:
    sub = table.select(mask)
    if len(sub) == 0:
        raise SchemaError(f"input CSV contains no rows for {what}")
    return sub


def _limit_ticks(ax, y_free, y_tg, color):
    """Short horizontal tick marks at the axis edges for the two limits."""
    for y, pos in ((y_free, 0.0), (y_tg, 1.0)):
        if y is not None and np.isfinite(y):
            ax.plot([pos - 0.018, pos + 0.018], [y, y], transform=ax.get_yaxis_transform(),
                    color=color, lw=2.2, clip_on=False, solid_capstyle="butt")


def _coupling_axis(ax, spec):
    if spec.log_x:
        ax.set_xscale("log")
    ax.set_xlabel("repulsion strength $c$")


def _fig_balanced_probability(ax, table, spec):
    for color, n in zip(_COLORS, table.particle_numbers()):
        sub = _require(table, (table.n == n) & (table.k == n // 2) & ~table.is_tg,
                       f"N={n}, k=N/2")
        order = np.argsort(sub.c)
        ax.plot(sub.c[order], sub.p_k[order], color=color, label=f"$N={n}$")
        tg = table.select((table.n == n) & (table.k == n // 2) & table.is_tg)
        free = math.comb(n, n // 2) / 2.0 ** n
        _limit_ticks(ax, free, tg.p_k[0] if len(tg) else None, "black")
    _coupling_axis(ax, spec)
    ax.set_ylabel("$p(N/2)$")
    ax.legend(frameon=False)


def _fig_outcome_probabilities(ax, table, spec):
    n = 4 if 4 in table.particle_numbers() else table.particle_numbers()[0]
    for color, k in zip(_COLORS, range(n + 1)):
        sub = _require(table, (table.n == n) & (table.k == k) & ~table.is_tg,
                       f"N={n}, k={k}")
        order = np.argsort(sub.c)
        ax.plot(sub.c[order], sub.p_k[order], color=color, label=f"$k={k}$")
        tg = table.select((table.n == n) & (table.k == k) & table.is_tg)
        free = math.comb(n, k) / 2.0 ** n
        _limit_ticks(ax, free, tg.p_k[0] if len(tg) else None, "black")
    _coupling_axis(ax, spec)
    ax.set_ylabel("$p(k)$")
    ax.legend(frameon=False, ncol=2)


def _fig_probability_scaling(ax, table, spec):
    tg = _require(table, table.is_tg, "impenetrable-limit rows")
    ns = sorted({int(n) for n in tg.n})
    tg_balanced = [float(tg.p_k[(tg.n == n) & (tg.k == n // 2)][0]) for n in ns]
    ax.plot(ns, tg_balanced, "o", color=_COLORS[1], label="impenetrable (exact)")
    free = table.select(~table.is_tg & (table.c == 0.0))
    if len(free):
        f_ns = sorted({int(n) for n in free.n})
        f_vals = [float(free.p_k[(free.n == n) & (free.k == n // 2)][0]) for n in f_ns]
        ax.plot(f_ns, f_vals, "s", color=_COLORS[0], label="free (exact)")
    dense = np.arange(min(ns), max(ns) + 1, 2)
    ax.plot(dense, [math.comb(n, n // 2) / 2.0 ** n for n in dense],
            "-", color=_COLORS[0], lw=1.0, label="free, closed form")
    ax.plot(dense, [math.sqrt(math.pi / (2.0 * math.log(2.0 * n * math.exp(_EULER_GAMMA + 1.0))))
                    for n in dense],
            "--", color=_COLORS[1], lw=1.0, label="impenetrable, asymptote")
    ax.set_xlabel("particle number $N$")
    ax.set_ylabel("$p(N/2)$")
    ax.legend(frameon=False)


def _fig_balanced_entropy(ax, table, spec):
    for color, n in zip(_COLORS, table.particle_numbers()):
        sub = _require(table, (table.n == n) & (table.k == n // 2) & ~table.is_tg,
                       f"N={n}, k=N/2")
        order = np.argsort(sub.c)
        ax.plot(sub.c[order], sub.s_a_bits[order], color=color, label=f"$N={n}$")
        tg = table.select((table.n == n) & (table.k == n // 2) & table.is_tg)
        _limit_ticks(ax, 0.0, tg.s_a_bits[0] if len(tg) else None, "black")
    _coupling_axis(ax, spec)
    ax.set_ylabel("$S_A(N/2)$ [bits]")
    ax.legend(frameon=False, loc="upper left")
    # unbalanced inset for the smallest N with interior outcomes
    inset_n = next((n for n in table.particle_numbers() if n >= 4), None)
    if inset_n is not None:
        inset = ax.inset_axes([0.62, 0.14, 0.34, 0.38])
        for color, k in zip(_COLORS, range(1, inset_n // 2 + 1)):
            sub = table.select((table.n == inset_n) & (table.k == k) & ~table.is_tg)
            if len(sub) == 0:
                continue
            order = np.argsort(sub.c)
            inset.plot(sub.c[order], sub.s_a_bits[order], color=color,
                       lw=0.9, label=f"$k={k}$")
        if spec.log_x:
            inset.set_xscale("log")
        inset.tick_params(labelsize=6)
        inset.legend(frameon=False, fontsize=5)


def _fig_weighted_entanglement_tg(ax, table, spec):
    tg = _require(table, table.is_tg, "impenetrable-limit rows")
    for color, n in zip(_COLORS, tg.particle_numbers()):
        sub = tg.select(tg.n == n)
        order = np.argsort(sub.k)
        ax.plot(sub.k[order], sub.e_k[order], "o-", color=color,
                ms=4, lw=0.9, label=f"$N={n}$")
    ax.set_xlabel("outcome $k$")
    ax.set_ylabel(r"$\mathcal{E}(k)$ [bits]")
    ax.legend(frameon=False)


def _fig_extractable_entanglement(ax, table, spec):
    for color, n in zip(_COLORS, table.particle_numbers()):
        sub = _require(table, (table.n == n) & (table.k == n // 2) & ~table.is_tg,
                       f"N={n}")
        order = np.argsort(sub.c)
        ax.plot(sub.c[order], sub.e_pp[order], color=color, label=f"$N={n}$")
        tg = table.select((table.n == n) & table.is_tg)
        _limit_ticks(ax, 0.0, tg.e_pp[0] if len(tg) else None, "black")
    _coupling_axis(ax, spec)
    ax.set_ylabel(r"$\mathcal{E}_{PP}$ [bits]")
    ax.legend(frameon=False, loc="upper left")
