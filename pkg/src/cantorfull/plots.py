"""Figure rendering for the command-line reports.

All figures are decorative companions to the CSV/JSON artifacts: nothing is
asserted here, and every number shown also appears (exactly) in the delimited
output.  Rendering is deterministic: fixed figure sizes, no timestamps in the
image metadata.
"""

from __future__ import annotations

from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_PNG_METADATA = {"Software": "cantorfull"}


def _save(fig, path: str) -> None:
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)


def render_entropy(rows: List[dict], path: str) -> None:
    """Normalized log pattern counts against the counting bound."""
    ns = [r["n"] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, [r["normalized_log_count"] for r in rows], "o-", label="log(count)/4^n")
    ax.plot(ns, [r["normalized_log_bound"] for r in rows], "s--", label="log(bound)/4^n")
    ax.set_xlabel("window size n")
    ax.set_ylabel("normalized log (display only)")
    ax.set_title("Pattern complexity of the lattice coloring")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def render_recursion(rows: List[dict], value_key: str, path: str) -> None:
    """Growth of a recursion table on a log scale."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy([r["i"] for r in rows], [r[value_key] for r in rows], "o-")
    ax.set_xlabel("step i")
    ax.set_ylabel(value_key)
    ax.set_title(f"{value_key} recursion")
    fig.tight_layout()
    _save(fig, path)


def render_quasitile(tiling, side: int, path: str) -> None:
    """Exact tiles of a two-dimensional quasi-tiling, one color per tile."""
    fig, ax = plt.subplots(figsize=(6, 6))
    cmap = plt.get_cmap("tab20")
    for idx, (k, c, pts) in enumerate(tiling.exact_tiles):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        ax.scatter(xs, ys, s=4, color=cmap(idx % 20), marker="s", linewidths=0)
    ax.set_xlim(0, side + 1)
    ax.set_ylim(0, side + 1)
    ax.set_aspect("equal")
    ax.set_title(f"quasi-tiling, coverage {tiling.coverage}")
    fig.tight_layout()
    _save(fig, path)


def render_folner_bounds(ks: Sequence[int], statement: Sequence[int], proof: Sequence[int], path: str) -> None:
    """Statement-variant vs proof-variant bound values."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(ks, statement, "o-", label="statement bound")
    ax.semilogy(ks, proof, "s--", label="proof bound")
    ax.set_xlabel("power l")
    ax.set_ylabel("bound")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
