"""Backend-neutral pieces of the length scan: the tie rule and the interval
bound. Plain ``math`` only so the numba backend can compile the same source.
"""
import math

STUDENTIZED = 0
STANDARDIZED = 1

PLUS = 0
MINUS = 1
BOTH = 2

# a bound must clear the incumbent by this relative slack before it is pruned,
# so rounding in the bound can never discard a pair that ties the incumbent
PRUNE_SLACK = 1e-9


def better(v, d, i, s, best, best_d, best_i, best_s):
    """Lexicographic order: larger value, then shorter length, smaller left
    index, plus side before minus."""
    if v != v:
        return False
    if v > best:
        return True
    if v < best:
        return False
    if d != best_d:
        return d < best_d
    if i != best_i:
        return i < best_i
    return s < best_s


def prunable(bound, best):
    return bound < best - PRUNE_SLACK * (1.0 + abs(best))


def studentized_weight(d, n):
    return math.sqrt(d * (1.0 - d / n))


def interval_bound(a, b, n, variant, side, smin_a, smax_b, sminpos_a):
    """Upper bound on the scan value over the lengths strictly between the
    evaluated lengths ``a`` and ``b``.

    The span u(i+d) - u(i) is nondecreasing in d for every i, so the minimum
    span at ``a`` bounds all longer spans from below and the maximum span at
    ``b`` bounds all shorter spans from above. Every per-pair statistic is
    monotone in the span for fixed length.
    """
    lo = a + 1
    hi = b - 1
    bound = -math.inf
    if variant == STUDENTIZED:
        wmin = min(math.sqrt(lo * (1.0 - lo / n)), math.sqrt(hi * (1.0 - hi / n)))
        wmax = 0.5 * math.sqrt(n)
        if side != MINUS:
            num = hi - n * smin_a
            c = num / wmin if num > 0 else num / wmax
            if c > bound:
                bound = c
        if side != PLUS:
            num = n * smax_b - lo
            c = num / wmin if num > 0 else num / wmax
            if c > bound:
                bound = c
    else:
        if side != MINUS:
            s = sminpos_a
            if s < 1.0:
                c = (hi - n * s) / math.sqrt(n * s * (1.0 - s))
                if c > bound:
                    bound = c
        if side != PLUS:
            s = smax_b
            if s >= 1.0:
                bound = math.inf
            elif s > 0.0:
                c = (n * s - lo) / math.sqrt(n * s * (1.0 - s))
                if c > bound:
                    bound = c
    return bound
