"""Figure rendering for simulation traces and probe evidence.

All figures are written to files (Agg backend); the CLI pairs them with the
delimited/JSON outputs they illustrate.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from sensca.core import Configuration, RuleTable


def _state_palette(rule: RuleTable):
    states = list(rule.states())
    index = {st: i for i, st in enumerate(states)}
    return states, index


def space_time_figure(rule: RuleTable, trace, path: str):
    """1D space-time diagram: one row per step."""
    states, index = _state_palette(rule)
    lo = min((p[0] for cfg in trace for p in cfg.cells), default=0)
    hi = max((p[0] for cfg in trace for p in cfg.cells), default=0)
    width = hi - lo + 1
    img = np.zeros((len(trace), width), dtype=float)
    bg = trace[0].background
    for t, cfg in enumerate(trace):
        for x in range(lo, hi + 1):
            st = cfg.get((x,))
            img[t, x - lo] = index[st] if st != bg else 0
    fig, ax = plt.subplots(figsize=(8, max(2, len(trace) / 16)))
    ax.imshow(img, cmap="viridis", interpolation="nearest", aspect="auto")
    ax.set_xlabel(f"cell ({lo}..{hi})")
    ax.set_ylabel("step")
    ax.set_title(rule.name or "trace")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plane_figure(rule: RuleTable, config: Configuration, path: str):
    """2D raster of a configuration."""
    states, index = _state_palette(rule)
    box = config.bounding_box()
    if box is None:
        lo, hi = (0, 0), (1, 1)
    else:
        lo, hi = box
    w = hi[0] - lo[0] + 1
    h = hi[1] - lo[1] + 1
    img = np.zeros((h, w), dtype=float)
    bg = config.background
    for (x, y), st in config.cells.items():
        img[hi[1] - y, x - lo[0]] = index[st] if st != bg else 0
    fig, ax = plt.subplots(figsize=(6, 6 * h / max(w, 1)))
    ax.imshow(img, cmap="viridis", interpolation="nearest")
    ax.set_title(rule.name or "configuration")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def evidence_figures(evidence, prefix: str):
    """Verdict bars per word length plus difference-cone growth curves."""
    paths = []
    lengths = sorted(evidence.per_length)
    cert = [evidence.per_length[l]["certified"] for l in lengths]
    fals = [evidence.per_length[l]["falsified"] for l in lengths]
    unk = [evidence.per_length[l]["unknown"] for l in lengths]
    fig, ax = plt.subplots(figsize=(6, 4))
    bottom = np.zeros(len(lengths))
    for vals, label in ((cert, "certified"), (fals, "falsified"), (unk, "unknown")):
        ax.bar(lengths, vals, bottom=bottom, label=label)
        bottom += np.array(vals, dtype=float)
    ax.set_xlabel("word length")
    ax.set_ylabel("words")
    ax.set_title(f"blocking verdicts: {evidence.rule_name}")
    ax.legend()
    fig.tight_layout()
    p = f"{prefix}-verdicts.png"
    fig.savefig(p, dpi=110)
    plt.close(fig)
    paths.append(p)

    if evidence.cone_growth:
        fig, ax = plt.subplots(figsize=(6, 4))
        for i, growth in enumerate(evidence.cone_growth):
            ax.plot(range(len(growth)), growth, label=f"trial {i}")
        ax.set_xlabel("step")
        ax.set_ylabel("difference support size")
        ax.set_title(f"difference cones: {evidence.rule_name}")
        ax.legend(fontsize=7)
        fig.tight_layout()
        p = f"{prefix}-cones.png"
        fig.savefig(p, dpi=110)
        plt.close(fig)
        paths.append(p)
    return paths
