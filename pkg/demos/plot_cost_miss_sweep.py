"""
Cost-miss ratio as the cache grows
==================================

Three cost classes (1, 100, 10000) with log-uniform sizes. CAMP keeps
the expensive items and so loses far less cost per miss than LRU.
"""

import matplotlib.pyplot as plt

from campcache import WorkloadSpec, generate, sweep

trace = generate(WorkloadSpec(key_count=10_000, request_count=100_000, seed=1))
ratios = [0.05, 0.1, 0.25, 0.5, 0.75]
results = sweep({"three-cost": trace}, ["lru", "camp", "gds"], ratios, [5])

curves = {}
for cell, rep in results:
    curves.setdefault(cell.policy, []).append((cell.cache_ratio, rep.cost_miss_ratio, rep.miss_rate))

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
for name, pts in curves.items():
    pts.sort()
    ax1.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=name)
    ax2.plot([p[0] for p in pts], [p[2] for p in pts], marker="o", label=name)
ax1.set_xlabel("cache size / unique bytes")
ax1.set_ylabel("cost-miss ratio")
ax2.set_xlabel("cache size / unique bytes")
ax2.set_ylabel("miss rate")
ax1.legend()
fig.tight_layout()
plt.show()
