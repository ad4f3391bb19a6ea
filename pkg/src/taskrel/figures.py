"""Rendering of law-check reports as figures.

Kept separate from the CLI so report rendering never imports argparse
and command code never imports matplotlib unless figures are requested.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

PASS_COLOR = "#2a7f4f"
FAIL_COLOR = "#b03a2e"


def render_report_figure(reports: list[dict], path: str) -> str:
    """Write a bar chart of instances checked per law, colored by outcome.

    Takes reports in their JSON form: dicts with `law`, `instances`, `holds`.
    """
    names = [r["law"] for r in reports]
    counts = [r["instances"] for r in reports]
    colors = [PASS_COLOR if r["holds"] else FAIL_COLOR for r in reports]
    held = sum(1 for r in reports if r["holds"])

    fig, ax = plt.subplots(figsize=(max(6.0, 0.7 * len(names)), 4.2))
    ax.bar(range(len(names)), counts, color=colors)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=40, ha="right", fontsize=8)
    if counts and min(counts) > 0:
        ax.set_yscale("log")
    ax.set_ylabel("instances checked")
    ax.set_title(f"{held}/{len(reports)} laws hold")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
