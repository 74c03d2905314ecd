import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scanstat.errors import (AllDegenerate, DegenerateLength, DegenerateSpan, DomainError,
                             EmptyWindow)
from scanstat.order_core import sample_uniform_order_stats, sort_sample
from scanstat.scan_engine import (ScanSpec, eicker_statistics, ks_statistic, min_spacing,
                                  pair_statistic, scan, scan_fast, standardized_pair,
                                  studentized_pair)

from .conftest import seeded_samples, tied_sample

VARIANTS = ("studentized", "standardized")
SIDES = ("plus", "minus", "two_sided")


def enumerate_scan(values, variant, side, k=1, l=None):
    """Plain double loop; keeps (value, length, left, side) under the tie rule."""
    u = [0.0] + sorted(values) + [1.0]
    n = len(values)
    top = n - 1 if variant == "studentized" else n
    l = top if l is None else min(l, top)
    best = None
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            d = j - i
            if not k <= d <= l:
                continue
            s = u[j] - u[i]
            if variant == "studentized":
                m = (d - n * s) / math.sqrt(d * (1.0 - d / n))
            else:
                if not 0.0 < s < 1.0:
                    continue
                m = (d - n * s) / math.sqrt(n * s * (1.0 - s))
            for sd, val in ((0, m), (1, -m)):
                if side != "two_sided" and sd != ("plus", "minus").index(side):
                    continue
                key = (-val, d, i, sd)
                if best is None or key < best:
                    best = key
    return best


def test_studentized_pair_examples():
    s = sort_sample([0.1, 0.2])
    assert studentized_pair(s, 0, 1) == pytest.approx((1 - 0.2) / math.sqrt(0.5), abs=1e-15)
    assert studentized_pair(s, 0, 1) == pytest.approx(1.1313708, abs=1e-7)
    t = sort_sample([0.1, 0.2, 0.3, 0.9])
    assert studentized_pair(t, 1, 3) == pytest.approx(1.2, abs=1e-12)


def test_centered_pair_is_zero():
    s = sort_sample([0.25, 0.5, 0.75, 1.0])
    assert studentized_pair(s, 0, 1) == pytest.approx(0.0, abs=1e-15)
    assert standardized_pair(s, 1, 2) == pytest.approx(0.0, abs=1e-15)


def test_standardized_pair_examples():
    s = sort_sample([0.1, 0.2])
    expected = 0.8 / math.sqrt(2 * 0.1 * 0.9)
    assert standardized_pair(s, 0, 1) == pytest.approx(expected, rel=1e-13)
    assert standardized_pair(s, 0, 1) == pytest.approx(1.8856181, abs=1e-7)
    assert standardized_pair(s, 1, 2) == pytest.approx(expected, rel=1e-13)


def test_pair_errors():
    s = sort_sample([0.1, 0.2])
    with pytest.raises(DegenerateLength):
        studentized_pair(s, 0, 2)
    with pytest.raises(DegenerateSpan):
        standardized_pair(sort_sample([0.2, 0.2]), 1, 2)
    with pytest.raises(DegenerateSpan):
        standardized_pair(sort_sample([0.0, 1.0]), 1, 2)
    with pytest.raises(DomainError):
        studentized_pair(s, 1, 1)
    with pytest.raises(DomainError):
        pair_statistic(s, 0, 1, "other")


def test_two_point_scan_tie_goes_to_left_pair():
    s = sort_sample([0.1, 0.2])
    spec = ScanSpec("studentized", "plus", 1, 1)
    for out in (scan(s, spec), scan_fast(s, spec)):
        assert out.value == pytest.approx(1.1313708, abs=1e-7)
        assert (out.i, out.j) == (0, 1)
        assert out.pairs_evaluated >= 1


def test_single_length_equals_pair_statistic():
    s = sample_uniform_order_stats(9, 1)
    spec = ScanSpec("studentized", "plus", 8, 8)
    out = scan(s, spec)
    assert out.value == max(studentized_pair(s, i, i + 8) for i in range(2))


def test_length_one_is_spacing_formula():
    s = sample_uniform_order_stats(50, 2)
    n = s.n
    gaps = np.diff(s.padded[:-1])
    expected = np.max((1 - n * gaps) / math.sqrt(1 - 1 / n))
    assert scan_fast(s, ScanSpec("studentized", "plus", 1, 1)).value == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("side", SIDES)
def test_brute_force_matches_enumeration(variant, side):
    for n in (1, 2, 3, 7, 30):
        for s in seeded_samples(n, 10, seed=n):
            expected = enumerate_scan(list(s.values), variant, side)
            if expected is None:
                with pytest.raises(EmptyWindow):
                    scan(s, ScanSpec(variant, side))
                continue
            out = scan(s, ScanSpec(variant, side))
            assert out.value == -expected[0]
            assert (out.length, out.i) == (expected[1], expected[2])
            assert out.side == ("plus", "minus")[expected[3]]


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("side", SIDES)
def test_fast_matches_brute_force(variant, side, backend):
    for n in (2, 5, 20, 100):
        for s in seeded_samples(n, 15, seed=100 + n):
            a = scan(s, ScanSpec(variant, side))
            b = scan_fast(s, ScanSpec(variant, side), backend=backend)
            assert (a.value, a.i, a.j, a.side) == (b.value, b.i, b.j, b.side)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("side", SIDES)
def test_fast_matches_brute_force_with_ties(variant, side, backend):
    for seed in range(20):
        s = tied_sample(25, seed)
        try:
            a = scan(s, ScanSpec(variant, side))
        except EmptyWindow:
            with pytest.raises(EmptyWindow):
                scan_fast(s, ScanSpec(variant, side), backend=backend)
            continue
        b = scan_fast(s, ScanSpec(variant, side), backend=backend)
        assert (a.value, a.i, a.j, a.side) == (b.value, b.i, b.j, b.side)


@given(values=st.lists(st.floats(0, 1), min_size=2, max_size=40),
       variant=st.sampled_from(VARIANTS), side=st.sampled_from(SIDES),
       k=st.integers(1, 5), extra=st.integers(0, 40))
@settings(max_examples=300, deadline=None)
def test_fast_equals_brute_property(values, variant, side, k, extra):
    s = sort_sample(values)
    spec = ScanSpec(variant, side, k, k + extra)
    try:
        a = scan(s, spec)
    except EmptyWindow:
        with pytest.raises(EmptyWindow):
            scan_fast(s, spec)
        return
    b = scan_fast(s, spec)
    assert (a.value, a.i, a.j, a.side) == (b.value, b.i, b.j, b.side)
    # recompute check and window bounds
    assert b.value == pytest.approx((1 if b.side == "plus" else -1)
                                    * pair_statistic(s, b.i, b.j, variant), abs=1e-12)
    lo, hi = spec.window(s.n)
    assert lo <= b.length <= hi


@given(values=st.lists(st.floats(0, 1), min_size=3, max_size=30),
       variant=st.sampled_from(VARIANTS), side=st.sampled_from(SIDES),
       k=st.integers(1, 4), l=st.integers(1, 30), grow=st.integers(0, 5))
@settings(max_examples=200, deadline=None)
def test_enlarging_window_never_decreases(values, variant, side, k, l, grow):
    s = sort_sample(values)
    l = max(k, l)
    try:
        small = scan_fast(s, ScanSpec(variant, side, k, l)).value
    except EmptyWindow:
        return
    big = scan_fast(s, ScanSpec(variant, side, max(1, k - grow), l + grow)).value
    assert big >= small


def test_interior_scans_are_reflection_invariant():
    # (i, j) -> (n + 1 - j, n + 1 - i) keeps the span and the length
    for seed in range(10):
        s = sample_uniform_order_stats(15, seed)
        r = s.reflected()
        n = s.n
        for sign in (1, -1):
            a = max(sign * studentized_pair(s, i, j) for i in range(1, n) for j in range(i + 1, n + 1))
            b = max(sign * studentized_pair(r, i, j) for i in range(1, n) for j in range(i + 1, n + 1))
            assert a == pytest.approx(b, abs=1e-12)


def test_two_sided_is_max_of_sides():
    for s in seeded_samples(40, 10):
        for variant in VARIANTS:
            p = scan_fast(s, ScanSpec(variant, "plus")).value
            m = scan_fast(s, ScanSpec(variant, "minus")).value
            both = scan_fast(s, ScanSpec(variant, "two_sided"))
            assert both.value == max(p, m)
            assert both.side == ("plus" if p >= m else "minus")


def test_window_clamping():
    assert ScanSpec("studentized").window(10) == (1, 9)
    assert ScanSpec("standardized").window(10) == (1, 10)
    assert ScanSpec("studentized", l=100).window(10) == (1, 9)
    with pytest.raises(EmptyWindow):
        ScanSpec("studentized").window(1)
    with pytest.raises(EmptyWindow):
        ScanSpec("studentized", k=10).window(10)
    with pytest.raises(DomainError):
        ScanSpec("studentized", k=3, l=2)
    with pytest.raises(DomainError):
        ScanSpec("other")
    with pytest.raises(DomainError):
        ScanSpec("standardized", asymptotic_window=True)


def test_single_point_standardized_scan():
    out = scan_fast(sort_sample([0.5]), ScanSpec("standardized", "plus"))
    assert (out.i, out.j) == (0, 1)
    assert out.value == pytest.approx(1.0)


def test_all_pairs_degenerate_is_empty_window():
    s = sort_sample([0.0, 0.0])
    with pytest.raises(EmptyWindow):
        scan(s, ScanSpec("standardized", "plus", 1, 1))
    with pytest.raises(EmptyWindow):
        scan_fast(s, ScanSpec("standardized", "plus", 1, 1))


def test_outcome_serialization():
    out = scan_fast(sort_sample([0.1, 0.2]), ScanSpec())
    d = out.to_dict()
    assert list(d) == ["value", "side", "variant", "i", "j", "length", "interval",
                       "pairs_evaluated", "exact"]
    assert d["interval"] == [0.0, 0.1] and d["exact"] is True


def test_asymptotic_window_is_flagged_inexact():
    s = sample_uniform_order_stats(200, 5)
    spec = ScanSpec(asymptotic_window=True, window_constant=0.05)
    out = scan_fast(s, spec)
    assert out.exact is False
    cap = math.floor(0.05 * math.log(200) ** 3)
    assert spec.window(200) == (1, cap)
    assert out.value == scan(s, spec).value
    assert out.value <= scan_fast(s, ScanSpec()).value


def test_large_n_full_scan_dominates_windowed():
    n, hits, seeds = 100_000, 0, 20
    for r in range(seeds):
        s = sample_uniform_order_stats(n, 11, r)
        full = scan_fast(s, ScanSpec())
        windowed = scan_fast(s, ScanSpec(asymptotic_window=True))
        assert full.exact and not windowed.exact
        hits += full.value >= windowed.value
    assert hits / seeds >= 0.99


def test_eicker_single_point():
    e = eicker_statistics(sort_sample([0.5]))
    assert e.v_plus == pytest.approx(1.0)
    assert e.v_plus_index == 1
    assert math.isnan(e.v_plus_studentized) and e.v_plus_studentized_index is None


def test_eicker_centered_sample():
    n = 20
    e = eicker_statistics(sort_sample(np.arange(1, n + 1) / n))
    assert e.v_plus_studentized == pytest.approx(0.0, abs=1e-12)
    assert e.v_plus <= 1e-12


def test_eicker_matches_enumeration():
    s = sample_uniform_order_stats(100, 3)
    n, x = s.n, s.values
    first = max((i - n * x[i - 1]) / math.sqrt(n * x[i - 1] * (1 - x[i - 1])) for i in range(1, n + 1))
    second = max((i - n * x[i - 1]) / math.sqrt(i * (1 - i / n)) for i in range(1, n))
    e = eicker_statistics(s)
    assert e.v_plus == pytest.approx(first, rel=1e-13)
    assert e.v_plus_studentized == pytest.approx(second, rel=1e-13)


def test_eicker_all_degenerate():
    with pytest.raises(AllDegenerate):
        eicker_statistics(sort_sample([1.0]))


def test_ks_examples():
    n = 9
    assert ks_statistic(sort_sample(np.arange(1, n + 1) / (n + 1))) == pytest.approx(0.0, abs=1e-15)
    assert ks_statistic(sort_sample([0.9])) == pytest.approx(0.4)


def test_min_spacing_examples():
    assert min_spacing(sort_sample([0.1, 0.2])) == pytest.approx(0.1)
    assert min_spacing(sort_sample([0.7])) == 0.7
    # right boundary spacing 1 - u(n) is not included
    assert min_spacing(sort_sample([0.5, 0.99])) == pytest.approx(0.49)


@given(n=st.integers(1, 500), seed=st.integers(0, 2**32))
@settings(max_examples=50, deadline=None)
def test_min_spacing_at_most_one_over_n(n, seed):
    assert min_spacing(sample_uniform_order_stats(n, seed)) <= 1.0 / n
