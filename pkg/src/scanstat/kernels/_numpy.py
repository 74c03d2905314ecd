"""Pure-numpy backend. Same arithmetic, same visiting order and the same
results as the numba backend, bit for bit."""
import heapq
import math

import numpy as np

from . import _common
from ._common import MINUS, PLUS, STUDENTIZED, better, interval_bound, prunable


def length_pass(u, n, d, variant, side):
    s = u[d:n + 1] - u[:n - d + 1]
    smin = float(s.min())
    smax = float(s.max())
    if variant == STUDENTIZED:
        v = (d - n * s) / _common.studentized_weight(d, n)
        sminpos = math.inf
    else:
        ok = (s > 0.0) & (s < 1.0)
        sminpos = float(s[ok].min()) if ok.any() else math.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            v = (d - n * s) / np.sqrt(n * s * (1.0 - s))
        v = np.where(ok, v, np.nan)
        if not ok.any():
            return -math.inf, -1, PLUS, smin, smax, sminpos

    best, best_i, best_s = -math.inf, -1, PLUS
    if side != MINUS:
        i = int(np.nanargmax(v))
        best, best_i = float(v[i]), i
    if side != PLUS:
        i = int(np.nanargmin(v))
        cand = -float(v[i])
        if cand > best or (cand == best and i < best_i):
            best, best_i, best_s = cand, i, MINUS
    return best, best_i, best_s, smin, smax, sminpos


def branch_and_bound(u, n, k, l, variant, side):
    span_min, span_max, span_minpos = {}, {}, {}
    best, best_d, best_i, best_s = -math.inf, -1, -1, 0
    pairs = lengths = 0

    def visit(d):
        nonlocal best, best_d, best_i, best_s, pairs, lengths
        v, i, s, span_min[d], span_max[d], span_minpos[d] = length_pass(u, n, d, variant, side)
        pairs += n - d + 1
        lengths += 1
        if better(v, d, i, s, best, best_d, best_i, best_s):
            best, best_d, best_i, best_s = v, d, i, s

    visit(k)
    if l != k:
        visit(l)
    heap = []
    if l - k >= 2:
        heapq.heappush(heap, (-math.inf, k, l))
    while heap:
        neg_bound, a, b = heapq.heappop(heap)
        if prunable(-neg_bound, best):
            break
        m = (a + b) // 2
        visit(m)
        for lo, hi in ((a, m), (m, b)):
            if hi - lo < 2:
                continue
            bound = interval_bound(lo, hi, n, variant, side,
                                   span_min[lo], span_max[hi], span_minpos[lo])
            if not prunable(bound, best):
                heapq.heappush(heap, (-bound, lo, hi))
    return best, best_d, best_i, best_s, pairs, lengths
