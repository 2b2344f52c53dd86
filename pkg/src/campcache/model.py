"""Shared record types and the eviction-policy contract."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Hashable

# Inputs above these bounds could overflow 64-bit ratio arithmetic.
MAX_COST = 10**9
MAX_SIZE = 2**30


class ValidationError(ValueError):
    pass


class Outcome(enum.Enum):
    HIT = "hit"
    MISS = "miss"
    UNCACHEABLE = "uncacheable"


@dataclass(frozen=True, slots=True)
class TraceRecord:
    key: Hashable
    size: int
    cost: int
    phase: int = 0

    def validate(self):
        if self.size < 1:
            raise ValidationError(f"record {self.key!r}: size must be >= 1, got {self.size}")
        if self.size > MAX_SIZE:
            raise ValidationError(f"record {self.key!r}: size {self.size} exceeds {MAX_SIZE}")
        if self.cost < 0 or self.cost > MAX_COST:
            raise ValidationError(f"record {self.key!r}: cost {self.cost} outside [0, {MAX_COST}]")
        if self.phase < 0:
            raise ValidationError(f"record {self.key!r}: negative phase")


@dataclass(slots=True)
class CacheEntry:
    key: Hashable
    size: int
    cost: int
    priority: int = 0


@dataclass(frozen=True, slots=True)
class PolicyDecision:
    outcome: Outcome
    evicted: tuple = ()

    @property
    def hit(self):
        return self.outcome is Outcome.HIT


HIT = PolicyDecision(Outcome.HIT)
MISS = PolicyDecision(Outcome.MISS)
UNCACHEABLE = PolicyDecision(Outcome.UNCACHEABLE)

#: Precision value meaning "no rounding beyond integerization".
UNBOUNDED = None
DEFAULT_PRECISION = 5


@dataclass
class CacheConfig:
    capacity: int
    precision: int | None = DEFAULT_PRECISION
    pool_spec: object | None = None

    def __post_init__(self):
        if self.capacity < 1:
            raise ValidationError("capacity must be >= 1")
        if self.precision is not None and self.precision < 1:
            raise ValidationError("precision must be >= 1 or UNBOUNDED")


class Policy:
    """Base class for eviction policies.

    Subclasses implement :meth:`access`, which takes the unpacked fields of a
    request; :meth:`request` validates a :class:`TraceRecord` and forwards.
    A miss always inserts the requested item, evicting as needed.
    """

    name = "policy"

    def __init__(self, capacity):
        if capacity < 1:
            raise ValidationError("capacity must be >= 1")
        self.capacity = int(capacity)
        self._used = 0
        # Re-requests of a resident key whose size/cost disagree with the stored entry.
        self.mismatch_warnings = 0

    def request(self, record: TraceRecord) -> PolicyDecision:
        record.validate()
        return self.access(record.key, record.size, record.cost)

    def access(self, key, size, cost) -> PolicyDecision:
        raise NotImplementedError

    def resident_bytes(self) -> int:
        return self._used

    def contains(self, key) -> bool:
        raise NotImplementedError

    def __contains__(self, key):
        return self.contains(key)

    def __len__(self):
        raise NotImplementedError

    @property
    def heap_visits(self) -> int:
        return 0

    def queue_count(self) -> int:
        """Number of independent ordering structures currently in use."""
        return 1 if len(self) else 0

