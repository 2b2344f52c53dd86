"""
Old items leaving the cache when the working set changes
========================================================

Four phases with disjoint keys. We track the share of the cache held by
phase-1 items once later phases begin.
"""

import matplotlib.pyplot as plt

from campcache import WorkloadSpec, generate, run
from campcache.simulator import cache_size_from_ratio, make_policy

spec = WorkloadSpec(key_count=10_000, request_count=100_000, phases=4, seed=7)
trace = generate(spec)
capacity = cache_size_from_ratio(trace, 0.25, phase=1)

for name in ("lru", "camp"):
    rep = run(trace, make_policy(name, capacity), sample_interval=2_000)
    series = rep.occupancy(1)
    plt.plot([i for i, _ in series], [f for _, f in series], label=name)

plt.axvline(spec.request_count, color="grey", lw=0.5)
plt.xlabel("request")
plt.ylabel("phase-1 share of capacity")
plt.legend()
plt.show()
