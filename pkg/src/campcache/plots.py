"""Static figures from sweep results (needs matplotlib)."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path


def _series(results, metric, trace):
    lines = defaultdict(list)
    for cell, rep in results:
        if cell.trace != trace:
            continue
        label = cell.policy if cell.policy != "camp" else f"camp p={'inf' if cell.precision is None else cell.precision}"
        lines[label].append((cell.cache_ratio, metric(rep)))
    return {k: sorted(v) for k, v in lines.items()}


def emit_plots(results, out_dir):
    """Write one PNG per (trace, metric) under ``out_dir``; returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    metrics = {
        "cost_miss_ratio": lambda r: r.cost_miss_ratio,
        "miss_rate": lambda r: r.miss_rate,
        "heap_visits": lambda r: r.heap_visits,
    }
    written = []
    for trace in sorted({c.trace for c, _ in results}):
        for name, fn in metrics.items():
            fig, ax = plt.subplots(figsize=(5, 3.5))
            for label, pts in _series(results, fn, trace).items():
                xs, ys = zip(*pts)
                ax.plot(xs, ys, marker="o", label=label)
            ax.set_xlabel("cache size ratio")
            ax.set_ylabel(name.replace("_", " "))
            if name == "heap_visits":
                ax.set_yscale("symlog")
            ax.legend(fontsize="small")
            fig.tight_layout()
            path = out / f"{trace}_{name}.png"
            fig.savefig(path, dpi=120)
            plt.close(fig)
            written.append(path)
    return written
