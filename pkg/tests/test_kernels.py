import os
import subprocess
import sys

import numpy as np
import pytest

from scanstat import kernels
from scanstat.order_core import sample_uniform_order_stats
from scanstat.scan_engine import ScanSpec, scan_fast

from .conftest import tied_sample

needs_numba = pytest.mark.skipif("numba" not in kernels.available_backends(),
                                 reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("variant", ("studentized", "standardized"))
@pytest.mark.parametrize("side", ("plus", "minus", "two_sided"))
def test_backends_bitwise_identical(variant, side):
    samples = [sample_uniform_order_stats(n, 5, r) for n in (3, 50, 400) for r in range(5)]
    samples += [tied_sample(60, seed) for seed in range(5)]
    for s in samples:
        for k, l in ((1, None), (2, 7), (5, None)):
            spec = ScanSpec(variant, side, k, l)
            if k >= s.n:
                continue
            a = scan_fast(s, spec, backend="numba")
            b = scan_fast(s, spec, backend="numpy")
            assert a == b


@needs_numba
def test_kernel_counts_match():
    s = sample_uniform_order_stats(1000, 1)
    a = kernels.get_backend("numba").branch_and_bound(s.padded, s.n, 1, s.n - 1, 0, 2)
    b = kernels.get_backend("numpy").branch_and_bound(s.padded, s.n, 1, s.n - 1, 0, 2)
    assert a == b
    # pruning actually skips lengths
    assert a[5] < s.n - 1


def test_branch_and_bound_visits_fewer_pairs():
    s = sample_uniform_order_stats(2000, 3)
    out = scan_fast(s, ScanSpec())
    assert out.pairs_evaluated < s.n * (s.n - 1) // 2 // 4


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("flag, expected", [("numpy", "numpy"), ("off", "numpy"), ("0", "numpy")])
def test_env_flag_selects_fallback(flag, expected):
    code = "from scanstat import kernels; print(kernels.default_backend_name())"
    env = dict(os.environ, SCANSTAT_BACKEND=flag)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


@needs_numba
def test_env_flag_default_is_numba():
    code = "from scanstat import kernels; print(kernels.default_backend_name())"
    env = {k: v for k, v in os.environ.items() if k != "SCANSTAT_BACKEND"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
