"""Matplotlib figure rendering for the report paths (stats, bench, growth).

Figures are written next to the delimited output; the Agg backend keeps
everything headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .error_tree import TableStats  # noqa: E402


def save_table_profile(st: TableStats, path: str | Path) -> Path:
    """Bar chart of table entry counts per (kind, level)."""
    path = Path(path)
    labels = [f"{kind}/L{lvl}" for (kind, lvl) in sorted(st.entries)]
    values = [st.entries[key] for key in sorted(st.entries)]
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    if values:
        ax.bar(range(len(values)), values, color="#4878a8")
        ax.set_xticks(range(len(values)))
        ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    else:
        ax.text(0.5, 0.5, "no table entries", ha="center", va="center")
    ax.set_ylabel("entries")
    ax.set_title(f"table profile ({st.mode}, k={st.k}, {st.n_sequences} sequences)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_latency_figure(index_us: list[float], oracle_us: list[float],
                        path: str | Path, title: str = "query latency") -> Path:
    """Histogram comparing index and oracle per-query latencies."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    if index_us:
        ax.hist(index_us, bins=30, alpha=0.7, label="index", color="#4878a8")
    if oracle_us:
        ax.hist(oracle_us, bins=30, alpha=0.5, label="oracle scan", color="#b04a4a")
    ax.set_xlabel("latency (microseconds)")
    ax.set_ylabel("queries")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_growth_curve(sizes: list[int], ratios: list[float], path: str | Path,
                      ylabel: str = "entries / (N log_sigma N)") -> Path:
    """Growth-ratio curve over dictionary sizes (the size-claim check)."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.plot(sizes, ratios, marker="o", color="#4878a8")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("dictionary size N")
    ax.set_ylabel(ylabel)
    ax.set_title("table growth vs. dictionary size")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
