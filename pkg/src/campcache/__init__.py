"""Cost-aware cache eviction: CAMP, Greedy Dual Size, LRU and Pooled LRU."""

from .baselines import Allocation, GDSPolicy, LRUPolicy, PooledLRUPolicy, PoolSpec, pool_cost_totals
from .camp import CampPolicy
from .heap import DaryHeap, HeapError
from .model import (
    DEFAULT_PRECISION,
    HIT,
    MISS,
    UNBOUNDED,
    UNCACHEABLE,
    CacheConfig,
    CacheEntry,
    Outcome,
    Policy,
    PolicyDecision,
    TraceRecord,
    ValidationError,
)
from .rounding import RatioContext, distinct_bound, integerize, round_to_precision, rounded_ratio
from .simulator import MetricsReport, cache_size_from_ratio, make_policy, run, sweep
from .tracegen import PRESETS, Trace, WorkloadSpec, generate, read_trace, write_trace

__version__ = "0.1.0"
