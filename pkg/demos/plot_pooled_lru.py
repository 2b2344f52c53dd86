"""
Static pools versus one shared LRU
==================================

Pooled LRU splits the cache into one LRU per cost range. The split can
be uniform or proportional to each pool's total cost.
"""

from campcache import WorkloadSpec, generate, run
from campcache.simulator import cache_size_from_ratio, make_policy

trace = generate(WorkloadSpec(key_count=10_000, request_count=100_000, seed=1))

print("ratio  policy              miss    cost-miss")
for ratio in (0.25, 0.5, 0.75):
    cap = cache_size_from_ratio(trace, ratio)
    for name in ("lru", "pooled-lru-uniform", "pooled-lru-cost", "camp"):
        rep = run(trace, make_policy(name, cap, trace=trace))
        print(f"{ratio:<6} {name:<19} {rep.miss_rate:.4f}  {rep.cost_miss_ratio:.4f}")
