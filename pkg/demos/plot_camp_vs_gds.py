"""
CAMP with unbounded precision behaves like Greedy Dual Size
===========================================================

With no rounding, CAMP makes the same hit, miss and eviction decisions
as a heap-per-item GDS cache, but keeps far fewer heap nodes.
"""

from campcache import CampPolicy, GDSPolicy, WorkloadSpec, generate
from campcache.simulator import cache_size_from_ratio

trace = generate(WorkloadSpec(key_count=5_000, request_count=50_000, seed=3))
capacity = cache_size_from_ratio(trace, 0.2)

camp = CampPolicy(capacity, precision=None)
gds = GDSPolicy(capacity)

same = sum(camp.request(r) == gds.request(r) for r in trace)
print(f"{same} of {len(trace)} decisions agree")
print("heap nodes at the end:", len(camp.heap), "(camp) vs", len(gds.heap), "(gds)")

# %%
# Rounding to 5 bits collapses the queues further
camp5 = CampPolicy(capacity, precision=5)
for r in trace:
    camp5.request(r)
print("queues at p=5:", camp5.queue_count(), " at p=inf:", camp.queue_count())
