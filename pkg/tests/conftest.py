import sys
import random

import pytest

from campcache import TraceRecord


def random_records(rng: random.Random, max_keys=100, max_requests=10_000, max_cost=None):
    """Small skewed trace with per-key fixed size and cost."""
    nk = rng.randint(2, max_keys)
    size_hi = rng.choice([4, 50, 1000, 70_000])
    sizes = [rng.randint(1, size_hi) for _ in range(nk)]
    if max_cost is None:
        costs = [rng.choice([0, 1, 3, 100, 10_000, rng.randint(0, 10**6)]) for _ in range(nk)]
    else:
        costs = [rng.randint(0, max_cost) for _ in range(nk)]
    n = rng.randint(1, max_requests)
    keys = []
    for _ in range(n):
        if rng.random() < 0.5:
            keys.append(min(int(rng.paretovariate(1.0)) - 1, nk - 1))
        else:
            keys.append(rng.randrange(nk))
    return [TraceRecord(f"k{k}", sizes[k], costs[k]) for k in keys], sum(sizes)


class NaiveGDS:
    """List-scan Greedy Dual Size; evicts min (H, last request seq)."""

    def __init__(self, capacity):
        self.capacity = capacity
        self.items = {}  # key -> [H, seq, size, ratio]
        self.L = 0
        self.max_size = 1
        self.seq = 0

    def _ratio(self, cost, size):
        from fractions import Fraction

        self.max_size = max(self.max_size, size)
        x = Fraction(cost * self.max_size, size)
        n = int(x)
        if x - n >= Fraction(1, 2):
            n += 1
        return max(1, n)

    def request(self, key, size, cost):
        self.seq += 1
        if key in self.items:
            others = [v[0] for k, v in self.items.items() if k != key]
            if others:
                self.L = min(others)
            it = self.items[key]
            it[3] = self._ratio(cost, it[2])
            it[0] = self.L + it[3]
            it[1] = self.seq
            return "hit", []
        if size > self.capacity:
            self.max_size = max(self.max_size, size)
            return "uncacheable", []
        ratio = self._ratio(cost, size)
        evicted = []
        while self.capacity - sum(v[2] for v in self.items.values()) < size:
            victim = min(self.items, key=lambda k: (self.items[k][0], self.items[k][1]))
            self.L = self.items.pop(victim)[0]
            evicted.append(victim)
        self.items[key] = [self.L + ratio, self.seq, size, ratio]
        return "miss", evicted


class PriorityMonitor:
    """Per-request check of L monotonicity and L <= H <= L + ratio.

    Checks the requested entry exactly and the heap root as a lower bound for
    every resident entry; ``full_every`` adds a complete state scan.
    """

    def __init__(self, full_every=0):
        self.prev_L = 0
        self.calls = 0
        self.full_every = full_every

    def __call__(self, policy, key):
        self.calls += 1
        L = policy.L
        assert L >= self.prev_L, f"L decreased {self.prev_L} -> {L}"
        self.prev_L = L
        if hasattr(policy, "index"):
            e = policy.index.get(key)
            if e is not None:
                assert L <= e.priority <= L + e.ratio
        else:
            e = policy.entries.get(key)
            if e is not None:
                assert L <= e.priority <= L + policy.ratios[key]
        if policy.heap.nodes:
            assert policy.heap.nodes[0].priority[0] >= L
        if self.full_every and self.calls % self.full_every == 0:
            policy.check_invariants()


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is not None and acc.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acc.RESULTS):
            terminalreporter.write_line(line)
