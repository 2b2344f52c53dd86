"""Synthetic request traces and their CSV format.

Keys are split into a hot bucket (``hot_fraction`` of the keys) that receives
``hot_request_fraction`` of the requests and a cold bucket that receives the
rest; within a bucket keys are picked uniformly. Every key draws its size and
cost once. Multi-phase traces use disjoint key sets per phase, played back to
back.

CSV layout: header ``key,size,cost,phase`` then one decimal row per request,
keys named ``p<phase>k<index>``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from .model import MAX_COST, MAX_SIZE, TraceRecord, ValidationError

HEADER = "key,size,cost,phase"


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class FixedSet:
    """Each key gets one of ``values`` with equal probability."""

    values: tuple = (1, 100, 10_000)

    def draw(self, rng, n):
        return rng.choice(np.asarray(self.values, dtype=np.int64), size=n)

    def check(self):
        if not self.values:
            raise ValidationError("FixedSet needs at least one value")


@dataclass(frozen=True)
class Constant:
    value: int = 1

    def draw(self, rng, n):
        return np.full(n, self.value, dtype=np.int64)

    def check(self):
        pass


@dataclass(frozen=True)
class LogUniform:
    """Integers whose logarithm is uniform on ``[log lo, log hi]``."""

    lo: int = 64
    hi: int = 65_536

    def draw(self, rng, n):
        u = rng.uniform(math.log(self.lo), math.log(self.hi), size=n)
        return np.clip(np.rint(np.exp(u)), self.lo, self.hi).astype(np.int64)

    def check(self):
        if not 0 < self.lo < self.hi:
            raise ValidationError(f"LogUniform range must satisfy 0 < lo < hi, got ({self.lo}, {self.hi})")


@dataclass(frozen=True)
class WorkloadSpec:
    key_count: int = 100_000
    request_count: int = 1_000_000
    hot_fraction: float = 0.2
    hot_request_fraction: float = 0.7
    cost_model: object = field(default_factory=FixedSet)
    size_model: object = field(default_factory=LogUniform)
    phases: int = 1
    seed: int = 0

    def check(self):
        if self.key_count < 2:
            raise ValidationError("key_count must be >= 2")
        if self.request_count < 1:
            raise ValidationError("request_count must be >= 1")
        if not 0 < self.hot_fraction < 1:
            raise ValidationError("hot_fraction must lie in (0, 1)")
        if not 0 < self.hot_request_fraction < 1:
            raise ValidationError("hot_request_fraction must lie in (0, 1)")
        if self.phases < 1:
            raise ValidationError("phases must be >= 1")
        self.cost_model.check()
        self.size_model.check()

    def with_(self, **changes) -> "WorkloadSpec":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


PRESETS = {
    "three-cost": WorkloadSpec(),
    "evolving10": WorkloadSpec(phases=10),
    "const-cost": WorkloadSpec(cost_model=Constant(1)),
    "equi-size": WorkloadSpec(cost_model=LogUniform(1, 100_000), size_model=Constant(1024)),
}


@dataclass
class Trace:
    """Columnar request trace.

    ``keys`` holds per-request integer ids into ``names``; sizes, costs and
    phases are per request so malformed inputs survive a round trip.
    """

    names: list
    keys: np.ndarray
    sizes: np.ndarray
    costs: np.ndarray
    phases: np.ndarray

    def __len__(self):
        return len(self.keys)

    def __iter__(self) -> Iterator[TraceRecord]:
        names = self.names
        for k, s, c, p in zip(self.keys.tolist(), self.sizes.tolist(), self.costs.tolist(), self.phases.tolist()):
            yield TraceRecord(names[k], s, c, p)

    @property
    def n_keys(self):
        return len(self.names)

    def first_occurrence(self) -> np.ndarray:
        """Request index of each key's first appearance, indexed by key id."""
        _, first = np.unique(self.keys, return_index=True)
        return first

    def key_sizes(self) -> np.ndarray:
        return self.sizes[self.first_occurrence()]

    def key_phases(self) -> np.ndarray:
        return self.phases[self.first_occurrence()]

    def unique_bytes(self, phase=None) -> int:
        sizes = self.key_sizes()
        if phase is not None:
            sizes = sizes[self.key_phases() == phase]
        return int(sizes.sum())

    def slice(self, start, stop) -> "Trace":
        """Requests ``start:stop``; key ids are kept as-is."""
        return Trace(self.names, self.keys[start:stop], self.sizes[start:stop],
                     self.costs[start:stop], self.phases[start:stop])

    @classmethod
    def from_records(cls, records) -> "Trace":
        ids: dict = {}
        names, keys, sizes, costs, phases = [], [], [], [], []
        for r in records:
            r.validate()
            i = ids.get(r.key)
            if i is None:
                i = ids[r.key] = len(names)
                names.append(r.key)
            keys.append(i)
            sizes.append(r.size)
            costs.append(r.cost)
            phases.append(r.phase)
        return cls(names, np.asarray(keys, dtype=np.int64), np.asarray(sizes, dtype=np.int64),
                   np.asarray(costs, dtype=np.int64), np.asarray(phases, dtype=np.int64))


def generate_phase(spec: WorkloadSpec, phase: int, key_offset: int = 0):
    """Key attributes and request key ids (offset by ``key_offset``) for one phase."""
    rng = np.random.default_rng([spec.seed, phase])
    n = spec.key_count
    costs = spec.cost_model.draw(rng, n)
    sizes = spec.size_model.draw(rng, n)
    n_hot = min(n - 1, max(1, round(spec.hot_fraction * n)))
    m = spec.request_count
    hot = rng.random(m) < spec.hot_request_fraction
    hot_pick = rng.integers(0, n_hot, size=m)
    cold_pick = rng.integers(n_hot, n, size=m)
    idx = np.where(hot, hot_pick, cold_pick)
    return costs, sizes, idx + key_offset


def generate(spec: WorkloadSpec) -> Trace:
    """Deterministic trace for ``spec``; single-phase traces carry phase tag 0."""
    spec.check()
    tags = [0] if spec.phases == 1 else list(range(1, spec.phases + 1))
    names = []
    parts_keys, parts_sizes, parts_costs, parts_phases = [], [], [], []
    for j, tag in enumerate(tags):
        offset = j * spec.key_count
        key_costs, key_sizes, ids = generate_phase(spec, tag, offset)
        names.extend(f"p{tag}k{i}" for i in range(spec.key_count))
        local = ids - offset
        parts_keys.append(ids)
        parts_sizes.append(key_sizes[local])
        parts_costs.append(key_costs[local])
        parts_phases.append(np.full(len(ids), tag, dtype=np.int64))
    trace = Trace(names, np.concatenate(parts_keys), np.concatenate(parts_sizes),
                  np.concatenate(parts_costs), np.concatenate(parts_phases))
    return compact(trace)


def compact(trace: Trace) -> Trace:
    """Drop never-requested names and renumber keys by first appearance."""
    used, first = np.unique(trace.keys, return_index=True)
    old_ids = used[np.argsort(first, kind="stable")]
    lookup = np.full(len(trace.names), -1, dtype=np.int64)
    lookup[old_ids] = np.arange(len(old_ids))
    names = [trace.names[i] for i in old_ids.tolist()]
    return Trace(names, lookup[trace.keys], trace.sizes, trace.costs, trace.phases)


def _format(trace: Trace, out):
    out.write(HEADER + "\n")
    names = trace.names
    step = 100_000
    for start in range(0, len(trace), step):
        stop = start + step
        rows = zip(trace.keys[start:stop].tolist(), trace.sizes[start:stop].tolist(),
                   trace.costs[start:stop].tolist(), trace.phases[start:stop].tolist())
        out.write("".join(f"{names[k]},{s},{c},{p}\n" for k, s, c, p in rows))


def write_trace(trace, path):
    """Write a :class:`Trace` (or an iterable of records) as CSV."""
    if not isinstance(trace, Trace):
        trace = Trace.from_records(trace)
    with open(path, "w", encoding="utf-8", newline="") as f:
        _format(trace, f)


def dumps(trace: Trace) -> str:
    buf = io.StringIO()
    _format(trace, buf)
    return buf.getvalue()


def _parse(lines, source="<trace>") -> Trace:
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise TraceFormatError(f"{source}: empty file, expected header {HEADER!r}") from None
    if ",".join(header) != HEADER:
        raise TraceFormatError(f"{source}:1: expected header {HEADER!r}, got {','.join(header)!r}")
    ids: dict = {}
    names, keys, sizes, costs, phases = [], [], [], [], []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 4:
            raise TraceFormatError(f"{source}:{lineno}: expected 4 fields, got {len(row)}")
        key, s, c, p = row
        try:
            size, cost, phase = int(s), int(c), int(p)
        except ValueError:
            raise TraceFormatError(f"{source}:{lineno}: non-integer field in {row!r}") from None
        if not key:
            raise TraceFormatError(f"{source}:{lineno}: empty key")
        if not 1 <= size <= MAX_SIZE:
            raise TraceFormatError(f"{source}:{lineno}: size {size} outside [1, {MAX_SIZE}]")
        if not 0 <= cost <= MAX_COST:
            raise TraceFormatError(f"{source}:{lineno}: cost {cost} outside [0, {MAX_COST}]")
        if phase < 0:
            raise TraceFormatError(f"{source}:{lineno}: negative phase")
        i = ids.get(key)
        if i is None:
            i = ids[key] = len(names)
            names.append(key)
        keys.append(i)
        sizes.append(size)
        costs.append(cost)
        phases.append(phase)
    return Trace(names, np.asarray(keys, dtype=np.int64), np.asarray(sizes, dtype=np.int64),
                 np.asarray(costs, dtype=np.int64), np.asarray(phases, dtype=np.int64))


def read_trace(path) -> Trace:
    with open(path, encoding="utf-8", newline="") as f:
        return _parse(f, str(path))


def loads(text: str) -> Trace:
    return _parse(io.StringIO(text, newline=""))
