"""Integer cost-to-size ratios and significant-bit rounding.

A ratio ``cost / size`` is first scaled by the largest item size seen so far
and rounded to the nearest integer, so the cheapest possible ratio
(cost 1 on the largest item) maps to 1. The integer is then rounded down to
its ``p`` most significant bits, which keeps the relative error below
``2 ** (1 - p)`` whatever the magnitude of the value.
"""

from __future__ import annotations

from dataclasses import dataclass


def round_to_precision(x: int, p: int) -> int:
    """Keep the ``p`` most significant bits of ``x`` and zero the rest.

    >>> round_to_precision(0b101101011, 4) == 0b101100000
    True
    >>> round_to_precision(7, 4)
    7
    """
    if x < 1:
        raise ValueError(f"cannot round {x}: no significant bit")
    if p < 1:
        raise ValueError(f"precision must be >= 1, got {p}")
    drop = x.bit_length() - p
    if drop <= 0:
        return x
    return (x >> drop) << drop


def integerize(cost: int, size: int, max_size: int) -> int:
    """``cost * max_size / size`` rounded half away from zero, clamped to >= 1."""
    if size < 1:
        raise ValueError("size must be >= 1")
    q, r = divmod(cost * max_size, size)
    if 2 * r >= size:
        q += 1
    return q if q > 1 else 1


@dataclass
class RatioContext:
    """Adaptive scale factor plus rounding precision (``None`` = unbounded)."""

    precision: int | None = 5
    max_size_seen: int = 1

    def __post_init__(self):
        if self.precision is not None and self.precision < 1:
            raise ValueError("precision must be >= 1 or None")

    def observe(self, size: int):
        if size > self.max_size_seen:
            self.max_size_seen = size

    def ratio(self, cost: int, size: int) -> int:
        """Update the scale with ``size``, then return the rounded ratio."""
        if size > self.max_size_seen:
            self.max_size_seen = size
        x = integerize(cost, size, self.max_size_seen)
        if self.precision is None:
            return x
        return round_to_precision(x, self.precision)


def rounded_ratio(record, ctx: RatioContext) -> int:
    return ctx.ratio(record.cost, record.size)


def distinct_bound(upper: int, p: int) -> int:
    """Upper bound on the number of distinct rounded values of ``1..upper``."""
    bits = upper.bit_length()  # == ceil(log2(upper + 1))
    return (bits - p + 1) * 2**p
