"""Reference policies: exact Greedy Dual Size, LRU and Pooled LRU."""

from __future__ import annotations

import bisect
import enum
from collections import OrderedDict
from dataclasses import dataclass, field

from .heap import DaryHeap
from .model import HIT, MISS, UNCACHEABLE, CacheEntry, Outcome, Policy, PolicyDecision, ValidationError
from .rounding import RatioContext


class GDSPolicy(Policy):
    """Greedy Dual Size with one heap node per resident item.

    Priorities are ``L + cost * max_size / size`` (integerized, not rounded).
    Ties on ``H`` evict the least recently requested item, the same rule CAMP
    uses, so the two policies are directly comparable.
    """

    name = "gds"

    def __init__(self, capacity, arity=8):
        super().__init__(capacity)
        self.ctx = RatioContext(precision=None)
        self.heap = DaryHeap(arity)
        self.entries: dict = {}
        self.ratios: dict = {}
        self.L = 0
        self._seq = 0

    def contains(self, key):
        return key in self.entries

    def __len__(self):
        return len(self.entries)

    @property
    def heap_visits(self):
        return self.heap.visits

    def queue_count(self):
        return len(self.heap)

    def access(self, key, size, cost) -> PolicyDecision:
        e = self.entries.get(key)
        heap = self.heap
        if e is not None:
            if e.size != size or e.cost != cost:
                self.mismatch_warnings += 1
            node = heap.registry[key]
            nodes = heap.nodes
            if node.slot == 0:
                # min over the other items: the root's smallest child
                children = nodes[1:1 + heap.arity]
                if children:
                    heap.visits += len(children)
                    self.L = min(c.priority for c in children)[0]
            else:
                self.L = heap.peek_min()[0][0]
            ratio = self.ctx.ratio(e.cost, e.size)
            self.ratios[key] = ratio
            e.priority = self.L + ratio
            self._seq += 1
            heap.update_priority(node, (e.priority, self._seq))
            return HIT
        if size > self.capacity:
            self.ctx.observe(size)
            return UNCACHEABLE
        ratio = self.ctx.ratio(cost, size)
        evicted = None
        while self.capacity - self._used < size:
            (h, _), victim = heap.pop_min()
            self._used -= self.entries.pop(victim).size
            del self.ratios[victim]
            self.L = h
            if evicted is None:
                evicted = []
            evicted.append(victim)
        e = CacheEntry(key, size, cost, self.L + ratio)
        self.entries[key] = e
        self.ratios[key] = ratio
        self._used += size
        self._seq += 1
        heap.push((e.priority, self._seq), key)
        if evicted:
            return PolicyDecision(Outcome.MISS, tuple(evicted))
        return MISS

    def check_invariants(self):
        self.heap.check_invariants()
        assert len(self.heap) == len(self.entries)
        total = 0
        for k, e in self.entries.items():
            assert self.heap.registry[k].priority[0] == e.priority
            assert self.L <= e.priority <= self.L + self.ratios[k]
            total += e.size
        assert total == self._used <= self.capacity


class LRUPolicy(Policy):
    name = "lru"

    def __init__(self, capacity):
        super().__init__(capacity)
        self.order: OrderedDict = OrderedDict()

    def contains(self, key):
        return key in self.order

    def __len__(self):
        return len(self.order)

    def keys(self):
        """Resident keys, least recently requested first."""
        return list(self.order)

    def access(self, key, size, cost) -> PolicyDecision:
        order = self.order
        stored = order.get(key)
        if stored is not None:
            if stored[0] != size or stored[1] != cost:
                self.mismatch_warnings += 1
            order.move_to_end(key)
            return HIT
        if size > self.capacity:
            return UNCACHEABLE
        evicted = None
        while self.capacity - self._used < size:
            victim, (vsize, _) = order.popitem(last=False)
            self._used -= vsize
            if evicted is None:
                evicted = []
            evicted.append(victim)
        order[key] = (size, cost)
        self._used += size
        if evicted:
            return PolicyDecision(Outcome.MISS, tuple(evicted))
        return MISS


class Allocation(enum.Enum):
    UNIFORM = "uniform"
    COST_PROPORTIONAL = "cost"
    RANGE_LOW_PROPORTIONAL = "range"


@dataclass
class PoolSpec:
    """Cost-range pools: cost in ``[boundaries[i], boundaries[i+1])`` goes to pool ``i``.

    Costs outside every range go to the last (open-ended) pool.
    ``weights`` are only needed for cost-proportional allocation and hold the
    total requested cost per pool, usually from :func:`pool_cost_totals`.
    """

    boundaries: list = field(default_factory=lambda: [1, 100, 10_000])
    allocation: Allocation = Allocation.UNIFORM
    weights: list | None = None

    def __post_init__(self):
        self.allocation = Allocation(self.allocation)
        if not self.boundaries or any(
            b >= c for b, c in zip(self.boundaries, self.boundaries[1:])
        ):
            raise ValidationError("pool boundaries must be non-empty and strictly ascending")

    @property
    def n_pools(self):
        return len(self.boundaries)

    def pool_of(self, cost) -> int:
        i = bisect.bisect_right(self.boundaries, cost) - 1
        return i if i >= 0 else len(self.boundaries) - 1

    def budgets(self, capacity: int) -> list[int]:
        n = self.n_pools
        if capacity < n:
            raise ValidationError(f"capacity {capacity} too small for {n} pools")
        if self.allocation is Allocation.UNIFORM:
            weights = [1] * n
        elif self.allocation is Allocation.RANGE_LOW_PROPORTIONAL:
            weights = list(self.boundaries)
        else:
            if self.weights is None:
                raise ValidationError("cost-proportional allocation needs per-pool weights")
            weights = list(self.weights)
        if len(weights) != n or any(w < 0 for w in weights) or sum(weights) <= 0:
            raise ValidationError(f"bad pool weights {weights}")
        total = sum(weights)
        budgets = [max(1, capacity * w // total) for w in weights]
        # remainder (possibly negative after the 1-byte floor) goes to the most expensive pool
        budgets[-1] += capacity - sum(budgets)
        if budgets[-1] < 1:
            raise ValidationError("capacity too small to give every pool a byte")
        return budgets

    def to_dict(self):
        d = {"boundaries": list(self.boundaries), "allocation": self.allocation.value}
        if self.weights is not None:
            d["weights"] = list(self.weights)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(list(d.get("boundaries", [1, 100, 10_000])), d.get("allocation", "uniform"), d.get("weights"))


def pool_cost_totals(spec: PoolSpec, costs) -> list[int]:
    """Total cost of all requests routed to each pool (offline pre-pass)."""
    totals = [0] * spec.n_pools
    for c in costs:
        totals[spec.pool_of(c)] += int(c)
    return totals


class PooledLRUPolicy(Policy):
    """Static partition of capacity into per-cost-range LRU pools."""

    name = "pooled-lru"

    def __init__(self, capacity, spec: PoolSpec | None = None):
        super().__init__(capacity)
        self.spec = spec or PoolSpec()
        self.budgets = self.spec.budgets(self.capacity)
        self.pools = [LRUPolicy(b) for b in self.budgets]
        self._pool_by_key: dict = {}

    def contains(self, key):
        return key in self._pool_by_key

    def __len__(self):
        return len(self._pool_by_key)

    def queue_count(self):
        return sum(1 for p in self.pools if len(p))

    def resident_bytes(self):
        return sum(p._used for p in self.pools)

    def access(self, key, size, cost) -> PolicyDecision:
        i = self._pool_by_key.get(key)
        if i is None:
            i = self.spec.pool_of(cost)
        pool = self.pools[i]
        before = pool.mismatch_warnings
        d = pool.access(key, size, cost)
        self.mismatch_warnings += pool.mismatch_warnings - before
        if d.outcome is Outcome.MISS:
            self._pool_by_key[key] = i
            for k in d.evicted:
                del self._pool_by_key[k]
        return d
