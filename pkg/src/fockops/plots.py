"""Static SVG figures, written without pyplot global state."""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.figure import Figure

STATUS_CODES = {"unbounded": 0, "bounded": 1, "inconclusive": 2}


def _save(fig: Figure, path: Path) -> Path:
    # fixed element ids and no creation date, so reruns give identical files
    with matplotlib.rc_context({"svg.hashsalt": "fockops"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def ratio_vs_eps(eps, ratios, limit: float, path: Path, title: str = "") -> Path:
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    ax.semilogx(eps, ratios, "o-", label=r"$\varepsilon^{1/p}\,\|A f_\varepsilon\|_p$")
    ax.axhline(limit, color="k", lw=0.8, ls="--", label=f"limit {limit:g}")
    ax.set_xlabel(r"$\varepsilon$")
    ax.set_ylabel("norm ratio")
    ax.set_title(title)
    ax.legend(loc="lower left")
    fig.tight_layout()
    return _save(fig, path)


def boundedness_map(ts, ss, status, p: float, path: Path) -> Path:
    """Heatmap of classifier status over the (t, s) grid; ``status[i, j]`` is for (ts[i], ss[j])."""
    codes = np.vectorize(STATUS_CODES.get)(np.asarray(status, dtype=object)).astype(float)
    fig = Figure(figsize=(5.5, 5))
    ax = fig.add_subplot()
    cmap = ListedColormap(["#d9d9d9", "#2c7fb8", "#fdae61"])
    ax.pcolormesh(_edges(ts), _edges(ss), codes.T, cmap=cmap, vmin=-0.5, vmax=2.5, shading="flat")
    tt = np.linspace(min(ts), max(ts), 50)
    ax.plot(tt, p * tt / 2.0, "k--", lw=0.8, label=r"$s = pt/2$")
    ax.set_xlim(_edges(ts)[0], _edges(ts)[-1])
    ax.set_ylim(_edges(ss)[0], _edges(ss)[-1])
    ax.set_xlabel("t")
    ax.set_ylabel("s")
    ax.set_title(f"boundedness on $L^p(dv_s)$, p = {p:g} (blue: bounded)")
    ax.legend(loc="upper left")
    fig.tight_layout()
    return _save(fig, path)


def _edges(centres):
    c = np.asarray(centres, dtype=float)
    if c.size == 1:
        return np.array([c[0] - 0.5, c[0] + 0.5])
    mid = 0.5 * (c[1:] + c[:-1])
    return np.concatenate([[2 * c[0] - mid[0]], mid, [2 * c[-1] - mid[-1]]])
