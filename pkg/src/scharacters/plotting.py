"""Matplotlib figures written next to the text/JSON reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in name)


def plot_hit_values(report, t, outdir) -> Path | None:
    """One bar panel per hit: the character value on every class.

    Bars at classes of prime power order are dark; zeros are marked.
    """
    if not report.hits:
        return None
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    from .chartab import is_prime_power

    n = len(report.hits)
    fig, axes = plt.subplots(n, 1, figsize=(max(6, 0.45 * t.n + 2), 2.2 * n), squeeze=False)
    names = t.class_names
    pp = [is_prime_power(c.order, report.options.include_identity) for c in t.classes]
    for ax, h, k in zip(axes[:, 0], report.hits, range(1, n + 1)):
        vals = [float(v) for v in h.values]
        colors = ["#2b4c7e" if p else "#a0a8b8" for p in pp]
        ax.bar(range(t.n), [max(v, 0.0) for v in vals], color=colors)
        for c in h.zero_classes:
            ax.plot(c, 0, marker="x", color="#b03030")
        ax.set_yscale("symlog", linthresh=1.0)
        ax.set_xticks(range(t.n))
        ax.set_xticklabels(names, rotation=90, fontsize=7)
        kind = "ordinary" if h.is_ordinary else "virtual"
        ax.set_title(f"{report.group}: hit {k} ({kind})", fontsize=9)
        ax.set_ylabel("value")
    fig.tight_layout()
    path = outdir / f"{_safe(report.group)}_hits.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_simplex(simplex, points, name: str, outdir, axes=None) -> Path:
    """Projection of the simplex vertices and lattice points to two coordinates
    (by default the two with the widest vertex range)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    bounds = simplex.vertex_bounds()
    if simplex.dim == 1:
        axes = (0, 0)
    elif axes is None:
        order = sorted(range(simplex.dim), key=lambda i: -(bounds[i][1] - bounds[i][0]))
        axes = tuple(sorted(order[:2]))
    i, j = axes
    fig, ax = plt.subplots(figsize=(5, 5))
    vx = [float(v[i]) for v in simplex.vertices]
    vy = [float(v[j]) if simplex.dim > 1 else 0.0 for v in simplex.vertices]
    if points:
        ax.scatter([p[i] for p in points], [p[j] if simplex.dim > 1 else 0 for p in points],
                   s=6, color="#7a7a7a", alpha=0.6, label=f"{len(points)} lattice points")
    ax.scatter(vx, vy, s=30, color="#b03030", label="vertices", zorder=3)
    ax.scatter([0], [0], s=30, marker="+", color="black", label="origin", zorder=4)
    ax.set_xlabel(f"x{i + 2}")
    ax.set_ylabel(f"x{j + 2}" if simplex.dim > 1 else "")
    ax.set_title(f"S({name}) projected to ({i + 2}, {j + 2})", fontsize=9)
    ax.legend(fontsize=7, loc="best")
    fig.tight_layout()
    path = outdir / f"{_safe(name)}_simplex.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
