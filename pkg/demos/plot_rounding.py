"""
Rounding ratios to a few significant bits
=========================================

Each item's cost-to-size ratio is turned into an integer and then
truncated to its ``p`` leading binary digits. Small ``p`` means few
distinct values and therefore few LRU queues.
"""

import numpy as np

from campcache import distinct_bound, round_to_precision

# %%
# A handful of values at three precisions
for x in (1, 7, 100, 1000, 12345):
    print(x, [round_to_precision(x, p) for p in (1, 3, 5)])

# %%
# How many distinct values survive, against the analytic bound
xs = range(1, 2**16 + 1)
for p in range(1, 9):
    distinct = len({round_to_precision(x, p) for x in xs})
    print(f"p={p}: {distinct:5d} distinct values, bound {distinct_bound(2**16, p)}")

# %%
# Relative error never exceeds 2^(1-p)
x = np.arange(1, 2**16 + 1)
for p in (1, 2, 4, 8):
    r = np.array([round_to_precision(int(v), p) for v in x])
    print(p, float(((x - r) / r).max()), 2.0 ** (1 - p))
