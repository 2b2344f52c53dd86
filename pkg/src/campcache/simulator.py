"""Trace replay, cost-aware metrics and experiment grids."""

from __future__ import annotations

import csv
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal

import numpy as np

from .baselines import Allocation, GDSPolicy, LRUPolicy, PooledLRUPolicy, PoolSpec
from .camp import CampPolicy
from .model import HIT, DEFAULT_PRECISION, Outcome, ValidationError

RESULT_COLUMNS = ["policy", "precision", "cache_ratio", "trace", "miss_rate",
                  "cost_miss_ratio", "heap_visits", "queues"]
OCCUPANCY_COLUMNS = ["request_index", "phase", "fraction"]

POLICY_NAMES = ("camp", "gds", "lru", "pooled-lru", "pooled-lru-uniform", "pooled-lru-cost",
                "pooled-lru-range")


@dataclass
class MetricsReport:
    total_requests: int = 0
    cold_requests: int = 0
    counted_requests: int = 0
    counted_misses: int = 0
    counted_miss_cost: int = 0
    counted_total_cost: int = 0
    uncacheable: int = 0
    heap_visits: int = 0
    final_queue_count: int = 0
    mismatch_warnings: int = 0
    occupancy_samples: list = field(default_factory=list)

    @property
    def miss_rate(self) -> float:
        if not self.counted_requests:
            return 0.0
        return self.counted_misses / self.counted_requests

    @property
    def cost_miss_ratio(self) -> float:
        if not self.counted_total_cost:
            return 0.0
        return self.counted_miss_cost / self.counted_total_cost

    def occupancy(self, phase) -> list:
        """``(request_index, fraction)`` series for one phase tag."""
        return [(i, fr.get(phase, 0.0)) for i, fr in self.occupancy_samples]


def cache_size_from_ratio(trace, ratio, phase=None) -> int:
    """Capacity in bytes: ``ceil(ratio * unique bytes)``.

    With ``phase`` set, only the distinct keys of that phase are summed, which
    sizes a cache relative to one segment of a multi-phase trace.
    """
    if len(trace) == 0:
        raise ValidationError("cannot size a cache from an empty trace")
    if ratio <= 0:
        raise ValidationError("cache ratio must be > 0")
    unique = trace.unique_bytes(phase)
    if unique == 0:
        raise ValidationError(f"phase {phase} has no keys")
    return max(1, math.ceil(Decimal(str(ratio)) * unique))


def pool_weights(spec: PoolSpec, trace) -> list:
    """Total requested cost per pool over the whole trace."""
    bounds = np.asarray(spec.boundaries)
    idx = np.searchsorted(bounds, trace.costs, side="right") - 1
    idx[idx < 0] = len(bounds) - 1
    return np.bincount(idx, weights=trace.costs, minlength=len(bounds)).astype(np.int64).tolist()


def make_policy(name, capacity, precision=DEFAULT_PRECISION, pool_spec=None, trace=None, arity=8):
    """Build a fresh policy by name.

    ``pooled-lru-uniform``, ``pooled-lru-cost`` and ``pooled-lru-range`` pick
    the allocation rule; plain ``pooled-lru`` uses ``pool_spec`` as given.
    Cost-proportional pools take their weights from ``trace``.
    """
    if name == "camp":
        return CampPolicy(capacity, precision=precision, arity=arity)
    if name == "gds":
        return GDSPolicy(capacity, arity=arity)
    if name == "lru":
        return LRUPolicy(capacity)
    if name.startswith("pooled-lru"):
        spec = PoolSpec(**(pool_spec.to_dict() if pool_spec else {}))
        suffix = name[len("pooled-lru"):].lstrip("-")
        if suffix:
            spec.allocation = Allocation(suffix)
        if spec.allocation is Allocation.COST_PROPORTIONAL and spec.weights is None:
            if trace is None:
                raise ValidationError("cost-proportional pools need the trace for weights")
            spec.weights = pool_weights(spec, trace)
        return PooledLRUPolicy(capacity, spec)
    raise ValidationError(f"unknown policy {name!r}; choose from {', '.join(POLICY_NAMES)}")


def run(trace, policy, sample_interval=10_000, check=None) -> MetricsReport:
    """Replay ``trace`` through a fresh ``policy``.

    The first request for each key is cold and excluded from every metric.
    Uncacheable requests count as misses. Per-phase occupancy (resident
    bytes / capacity) is sampled every ``sample_interval`` requests and at
    the end. ``check(policy, key)`` runs after every request when given.
    """
    rep = MetricsReport()
    n = len(trace)
    if n == 0:
        return rep
    phase_tags, dense_phase = np.unique(trace.phases, return_inverse=True)
    # phase of a key = phase of its first request
    used, first = np.unique(trace.keys, return_index=True)
    key_phase = np.zeros(trace.n_keys, dtype=np.int64)
    key_phase[used] = dense_phase[first]
    key_phase = key_phase.tolist()
    tags = phase_tags.tolist()
    occ = [0] * len(tags)
    resident_size = [0] * trace.n_keys
    seen = bytearray(trace.n_keys)
    capacity = policy.capacity
    access = policy.access
    MISS = Outcome.MISS
    interval = sample_interval if sample_interval and sample_interval > 0 else n + 1

    counted = misses = miss_cost = total_cost = cold = uncacheable = 0
    samples = rep.occupancy_samples
    i = 0
    step = 1 << 16
    for start in range(0, n, step):
        stop = start + step
        chunk = zip(trace.keys[start:stop].tolist(), trace.sizes[start:stop].tolist(),
                    trace.costs[start:stop].tolist())
        for k, s, c in chunk:
            d = access(k, s, c)
            if d is not HIT:
                o = d.outcome
                if o is MISS:
                    occ[key_phase[k]] += s
                    resident_size[k] = s
                    for v in d.evicted:
                        occ[key_phase[v]] -= resident_size[v]
                else:
                    uncacheable += 1
                if seen[k]:
                    counted += 1
                    total_cost += c
                    misses += 1
                    miss_cost += c
                else:
                    seen[k] = 1
                    cold += 1
            elif seen[k]:
                counted += 1
                total_cost += c
            else:
                # a hit on a never-seen key cannot happen with a fresh policy
                seen[k] = 1
                cold += 1
            if check is not None:
                check(policy, k)
            i += 1
            if i % interval == 0:
                samples.append((i, {t: o / capacity for t, o in zip(tags, occ)}))
    if not samples or samples[-1][0] != n:
        samples.append((n, {t: o / capacity for t, o in zip(tags, occ)}))

    rep.total_requests = n
    rep.cold_requests = cold
    rep.counted_requests = counted
    rep.counted_misses = misses
    rep.counted_miss_cost = miss_cost
    rep.counted_total_cost = total_cost
    rep.uncacheable = uncacheable
    rep.heap_visits = policy.heap_visits
    rep.final_queue_count = policy.queue_count()
    rep.mismatch_warnings = policy.mismatch_warnings
    return rep


@dataclass(frozen=True)
class Cell:
    trace: str
    policy: str
    cache_ratio: float
    precision: int | None = None

    def label(self):
        p = "" if self.policy != "camp" else f" p={format_precision(self.precision)}"
        return f"{self.trace}/{self.policy}{p}@{self.cache_ratio}"


class SweepError(RuntimeError):
    def __init__(self, cell, cause):
        super().__init__(f"sweep cell {cell.label()} failed: {cause!r}")
        self.cell = cell


def format_precision(p):
    return "inf" if p is None else str(p)


def parse_precision(text):
    t = str(text).strip().lower()
    if t in ("inf", "unbounded", "none", "infinity"):
        return None
    p = int(t)
    if p < 1:
        raise ValidationError("precision must be >= 1")
    return p


def grid(trace_names, policies, ratios, precisions=(DEFAULT_PRECISION,)):
    """Cartesian product of the experiment axes; precision only varies for CAMP."""
    if not ratios:
        raise ValidationError("sweep needs at least one cache ratio")
    if not policies:
        raise ValidationError("sweep needs at least one policy")
    if not trace_names:
        raise ValidationError("sweep needs at least one trace")
    if not precisions:
        raise ValidationError("sweep needs at least one precision")
    cells = []
    for t in trace_names:
        for pol in policies:
            for r in ratios:
                for p in (precisions if pol == "camp" else (None,)):
                    cells.append(Cell(t, pol, r, p))
    return cells


def run_cell(cell: Cell, trace, pool_spec=None, sample_interval=10_000, phase=None) -> MetricsReport:
    try:
        capacity = cache_size_from_ratio(trace, cell.cache_ratio, phase)
        policy = make_policy(cell.policy, capacity, cell.precision, pool_spec, trace)
        return run(trace, policy, sample_interval)
    except Exception as exc:
        raise SweepError(cell, exc) from exc


_WORKER_TRACES: dict = {}


def _worker(args):
    cell, pool_spec, sample_interval, phase = args
    return run_cell(cell, _WORKER_TRACES[cell.trace], pool_spec, sample_interval, phase)


def sweep(traces: dict, policies, ratios, precisions=(DEFAULT_PRECISION,), pool_spec=None,
          jobs=1, sample_interval=10_000, phase=None):
    """Run every cell of the grid on a fresh policy; returns ``[(cell, report)]``.

    Cells share nothing mutable, so ``jobs > 1`` runs them in worker processes.
    ``phase`` sizes caches relative to one phase's distinct bytes.
    """
    cells = grid(list(traces), policies, ratios, precisions)
    args = [(c, pool_spec, sample_interval, phase) for c in cells]
    if jobs <= 1 or len(cells) == 1:
        reports = [run_cell(c, traces[c.trace], pool_spec, sample_interval, phase) for c in cells]
    else:
        _WORKER_TRACES.clear()
        _WORKER_TRACES.update(traces)
        ctx = multiprocessing.get_context("fork")
        try:
            with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as ex:
                reports = list(ex.map(_worker, args))
        finally:
            _WORKER_TRACES.clear()
    return list(zip(cells, reports))


def result_row(cell: Cell, rep: MetricsReport) -> dict:
    return {
        "policy": cell.policy,
        "precision": format_precision(cell.precision) if cell.policy == "camp" else "",
        "cache_ratio": cell.cache_ratio,
        "trace": cell.trace,
        "miss_rate": f"{rep.miss_rate:.6f}",
        "cost_miss_ratio": f"{rep.cost_miss_ratio:.6f}",
        "heap_visits": rep.heap_visits,
        "queues": rep.final_queue_count,
    }


def write_results(results, f):
    w = csv.DictWriter(f, fieldnames=RESULT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for cell, rep in results:
        w.writerow(result_row(cell, rep))


def write_occupancy(rep: MetricsReport, f, cell: Cell | None = None):
    """Occupancy series as ``request_index,phase,fraction`` rows.

    When ``cell`` is given the row is prefixed by the cell identity columns.
    """
    w = csv.writer(f, lineterminator="\n")
    prefix = [] if cell is None else [cell.trace, cell.policy, format_precision(cell.precision), cell.cache_ratio]
    for i, fractions in rep.occupancy_samples:
        for phase, fr in fractions.items():
            w.writerow(prefix + [i, phase, f"{fr:.6f}"])
