import numpy as np
import pytest

from scanstat import kernels, sample_uniform_order_stats


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


def seeded_samples(n, count, seed=2024):
    return [sample_uniform_order_stats(n, seed, r) for r in range(count)]


def tied_sample(n, seed, levels=7):
    rng = np.random.default_rng(seed)
    from scanstat import sort_sample
    return sort_sample(rng.integers(0, levels + 1, size=n) / levels)
