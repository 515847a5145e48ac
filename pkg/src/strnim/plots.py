"""Figure rendering for the CLI report paths.

Figures are written straight to files next to the CSV/JSON output; the
Agg backend is forced so this works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .aba import LoseTable, PeriodicPairSet
from .position import Position


def plot_lose_table(
    lose: LoseTable,
    path: str,
    pairs: PeriodicPairSet | None = None,
    max_i: int | None = None,
) -> None:
    """Scatter of the losing-extension table, drift below, saved to `path`."""
    top = len(lose.values) - 1 if max_i is None else min(max_i, len(lose.values) - 1)
    xs = list(range(top + 1))
    ys = lose.values[: top + 1]
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(8, 6), sharex=True, height_ratios=[3, 1]
    )
    ax0.scatter(xs, ys, s=12, color="tab:blue", label=f"lose[{lose.j}][i]")
    ax0.plot(xs, xs, lw=0.8, color="gray", ls="--", label="k = i")
    if pairs is not None:
        ax0.set_title(
            f"middle run j={lose.j}: period {pairs.period}, "
            f"{len(pairs.base)} base / {len(pairs.repeating)} repeating pairs"
        )
    else:
        ax0.set_title(f"middle run j={lose.j}")
    ax0.set_ylabel("losing extension k")
    ax0.legend(loc="upper left", fontsize=8)
    ax1.step(xs, [y - x for x, y in zip(xs, ys)], where="mid", color="tab:red")
    ax1.set_xlabel("left run length i")
    ax1.set_ylabel("k - i")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_grundy_table(rows: list[tuple[Position, int]], path: str) -> None:
    """Histogram of Grundy values per word length, saved to `path`."""
    by_length: dict[int, list[int]] = {}
    for pos, value in rows:
        by_length.setdefault(len(pos), []).append(value)
    lengths = sorted(by_length)
    max_g = max((g for _, g in rows), default=0)
    fig, ax = plt.subplots(figsize=(8, 5))
    bottom = [0.0] * len(lengths)
    for g in range(max_g + 1):
        frac = [
            sum(1 for v in by_length[n] if v == g) / len(by_length[n])
            for n in lengths
        ]
        ax.bar(lengths, frac, bottom=bottom, label=f"g={g}" if g <= 8 else None)
        bottom = [b + f for b, f in zip(bottom, frac)]
    ax.set_xlabel("word length")
    ax.set_ylabel("fraction of positions")
    ax.set_title("Grundy value distribution by length")
    ax.legend(fontsize=7, ncols=3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
