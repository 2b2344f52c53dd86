"""
Precision barely matters
========================

Cost-miss ratio for p = 1..8 against the unrounded policy.
"""

from campcache import WorkloadSpec, generate, sweep

trace = generate(WorkloadSpec(key_count=10_000, request_count=100_000, seed=1))
precisions = list(range(1, 9)) + [None]
results = sweep({"t": trace}, ["camp"], [0.1, 0.25, 0.5], precisions)

for cell, rep in results:
    p = "inf" if cell.precision is None else cell.precision
    print(f"ratio {cell.cache_ratio:<5} p={p:<4} cost-miss {rep.cost_miss_ratio:.4f} queues {rep.final_queue_count}")
