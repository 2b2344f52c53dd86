"""CAMP: Greedy Dual Size approximated by per-ratio LRU queues.

Items are grouped into LRU queues keyed by their rounded cost-to-size ratio.
Within one queue every item has priority ``L_at_last_request + ratio`` and
``L`` never decreases, so queue order is priority order and only the queue
heads need to live in the heap. Heap priorities are ``(H, seq)`` pairs where
``seq`` is the request sequence number of the head item: equal priorities
are resolved in favour of evicting the least recently requested item.
"""

from __future__ import annotations

from collections import OrderedDict

from .heap import DaryHeap
from .model import HIT, MISS, UNCACHEABLE, DEFAULT_PRECISION, Outcome, Policy, PolicyDecision
from .rounding import RatioContext

L_LIMIT = 2**52


class _Entry:
    __slots__ = ("key", "size", "cost", "ratio", "priority", "seq")

    def __init__(self, key, size, cost, ratio, priority, seq):
        self.key = key
        self.size = size
        self.cost = cost
        self.ratio = ratio
        self.priority = priority
        self.seq = seq

    def __repr__(self):
        return f"_Entry({self.key!r}, H={self.priority}, ratio={self.ratio})"


class CampQueue:
    """Items sharing one rounded ratio, least recently requested first."""

    __slots__ = ("ratio", "entries", "handle")

    def __init__(self, ratio):
        self.ratio = ratio
        self.entries: OrderedDict = OrderedDict()
        self.handle = None

    def head(self) -> _Entry:
        return next(iter(self.entries.values()))

    def __len__(self):
        return len(self.entries)


class CampPolicy(Policy):
    """CAMP eviction over a byte-capacity cache.

    ``precision=None`` disables rounding; the policy then makes exactly the
    decisions of Greedy Dual Size with least-recent tie-breaking.
    ``rerate_on_hit`` controls whether a hit recomputes the item's ratio under
    the current size scale (default) or keeps the ratio assigned on insert.
    """

    name = "camp"

    def __init__(self, capacity, precision=DEFAULT_PRECISION, arity=8, rerate_on_hit=True):
        super().__init__(capacity)
        self.ctx = RatioContext(precision)
        self.heap = DaryHeap(arity)
        self.queues: dict[int, CampQueue] = {}
        self.index: dict = {}
        self.L = 0
        self.rerate_on_hit = rerate_on_hit
        self._seq = 0

    @property
    def precision(self):
        return self.ctx.precision

    def contains(self, key):
        return key in self.index

    def __len__(self):
        return len(self.index)

    @property
    def heap_visits(self):
        return self.heap.visits

    def live_queue_count(self):
        return len(self.queues)

    queue_count = live_queue_count

    def entry(self, key):
        return self.index[key]

    def access(self, key, size, cost) -> PolicyDecision:
        e = self.index.get(key)
        if e is not None:
            if e.size != size or e.cost != cost:
                self.mismatch_warnings += 1
            self.on_hit(key)
            return HIT
        if size > self.capacity:
            self.ctx.observe(size)
            return UNCACHEABLE
        return self.on_miss_insert(key, size, cost)

    def on_hit(self, key):
        e = self.index[key]
        self._unlink(e)
        if self.heap:
            self.L = self.heap.peek_min()[0][0]
        if self.rerate_on_hit:
            e.ratio = self.ctx.ratio(e.cost, e.size)
        else:
            self.ctx.observe(e.size)
        self._seq += 1
        e.seq = self._seq
        e.priority = self.L + e.ratio
        self._link(e)

    def on_miss_insert(self, key, size, cost) -> PolicyDecision:
        ratio = self.ctx.ratio(cost, size)
        evicted = None
        free = self.capacity - self._used
        if free < size:
            evicted = []
            heap = self.heap
            queues = self.queues
            while free < size:
                _, qratio = heap.peek_min()
                q = queues[qratio]
                victim_key, victim = q.entries.popitem(last=False)
                if q.entries:
                    head = q.head()
                    heap.update_priority(q.handle, (head.priority, head.seq))
                else:
                    heap.remove(q.handle)
                    del queues[qratio]
                del self.index[victim_key]
                self._used -= victim.size
                free += victim.size
                self.L = victim.priority
                evicted.append(victim_key)
        if self.L >= L_LIMIT:
            raise OverflowError("global offset L exceeded the exact-integer guard")
        self._seq += 1
        e = _Entry(key, size, cost, ratio, self.L + ratio, self._seq)
        self.index[key] = e
        self._used += size
        self._link(e)
        if evicted:
            return PolicyDecision(Outcome.MISS, tuple(evicted))
        return MISS

    def _link(self, e):
        q = self.queues.get(e.ratio)
        if q is None:
            q = CampQueue(e.ratio)
            self.queues[e.ratio] = q
            q.entries[e.key] = e
            q.handle = self.heap.push((e.priority, e.seq), e.ratio)
        else:
            q.entries[e.key] = e

    def _unlink(self, e):
        q = self.queues[e.ratio]
        was_head = next(iter(q.entries)) == e.key
        del q.entries[e.key]
        if not was_head:
            return
        if q.entries:
            head = q.head()
            self.heap.update_priority(q.handle, (head.priority, head.seq))
        else:
            self.heap.remove(q.handle)
            del self.queues[e.ratio]

    def check_invariants(self):
        """Full-state scan; raises AssertionError on any violation."""
        self.heap.check_invariants()
        assert len(self.heap) == len(self.queues)
        total = 0
        count = 0
        heads = []
        for ratio, q in self.queues.items():
            assert q.entries, "empty queue kept alive"
            assert q.handle.payload == ratio
            prev = None
            for k, e in q.entries.items():
                assert e.ratio == ratio
                assert self.index[k] is e
                assert self.L <= e.priority <= self.L + e.ratio, (k, self.L, e.priority, e.ratio)
                if prev is not None:
                    assert (prev.priority, prev.seq) <= (e.priority, e.seq)
                prev = e
                total += e.size
                count += 1
            head = q.head()
            assert q.handle.priority == (head.priority, head.seq)
            heads.append(q.handle.priority)
        assert count == len(self.index)
        assert total == self._used <= self.capacity
        if heads:
            assert self.heap.nodes[0].priority == min(heads)
