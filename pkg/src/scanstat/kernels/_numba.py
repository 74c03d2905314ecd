"""numba backend: one compiled pass per length plus the branch-and-bound driver."""
import heapq
import math

import numpy as np
from numba import njit

from . import _common

STUDENTIZED = _common.STUDENTIZED
PLUS = _common.PLUS
MINUS = _common.MINUS

_better = njit(cache=True)(_common.better)
_prunable = njit(cache=True)(_common.prunable)
_interval_bound = njit(cache=True)(_common.interval_bound)
_weight = njit(cache=True)(_common.studentized_weight)


@njit(cache=True)
def length_pass(u, n, d, variant, side):
    best = -np.inf
    best_i = -1
    best_s = 0
    smin = np.inf
    smax = -np.inf
    sminpos = np.inf
    w = _weight(d, n) if variant == STUDENTIZED else 1.0
    for i in range(n - d + 1):
        s = u[i + d] - u[i]
        if s < smin:
            smin = s
        if s > smax:
            smax = s
        if variant == STUDENTIZED:
            v = (d - n * s) / w
        else:
            if s <= 0.0 or s >= 1.0:
                continue
            if s < sminpos:
                sminpos = s
            v = (d - n * s) / math.sqrt(n * s * (1.0 - s))
        # ascending i with strict comparison keeps the smallest index on ties
        if side != MINUS and v > best:
            best = v
            best_i = i
            best_s = PLUS
        if side != PLUS and -v > best:
            best = -v
            best_i = i
            best_s = MINUS
    return best, best_i, best_s, smin, smax, sminpos


@njit(cache=True)
def branch_and_bound(u, n, k, l, variant, side):
    smin = np.empty(l + 1)
    smax = np.empty(l + 1)
    sminpos = np.empty(l + 1)
    best = -np.inf
    best_d = -1
    best_i = -1
    best_s = 0
    pairs = 0
    lengths = 0

    heap = [(0.0, 0, 0)]
    heap.pop()
    d = k
    while True:
        v, i, s, smin[d], smax[d], sminpos[d] = length_pass(u, n, d, variant, side)
        pairs += n - d + 1
        lengths += 1
        if _better(v, d, i, s, best, best_d, best_i, best_s):
            best, best_d, best_i, best_s = v, d, i, s
        if d == l:
            break
        d = l
    if l - k >= 2:
        heapq.heappush(heap, (-np.inf, k, l))

    while len(heap) > 0:
        neg_bound, a, b = heapq.heappop(heap)
        if _prunable(-neg_bound, best):
            break
        m = (a + b) // 2
        v, i, s, smin[m], smax[m], sminpos[m] = length_pass(u, n, m, variant, side)
        pairs += n - m + 1
        lengths += 1
        if _better(v, m, i, s, best, best_d, best_i, best_s):
            best, best_d, best_i, best_s = v, m, i, s
        if m - a >= 2:
            bound = _interval_bound(a, m, n, variant, side, smin[a], smax[m], sminpos[a])
            if not _prunable(bound, best):
                heapq.heappush(heap, (-bound, a, m))
        if b - m >= 2:
            bound = _interval_bound(m, b, n, variant, side, smin[m], smax[b], sminpos[m])
            if not _prunable(bound, best):
                heapq.heappush(heap, (-bound, m, b))
    return best, best_d, best_i, best_s, pairs, lengths
