"""Scan statistics of uniform empirical distributions: exact and fast scans,
limit-law calibration, and Monte Carlo verification."""
from .asymptotics import (GUMBEL_C, LimitLaw, c_A, critical_value, exact_min_spacing_sf,
                          kolmogorov_cdf, limit_cdf, p_value, u_n_tau)
from .order_core import (NullDistribution, SortedSample, cdf_transform, parse_null,
                         sample_uniform_order_stats, sort_sample)
from .scan_engine import (ScanOutcome, ScanSpec, eicker_statistics, ks_statistic, min_spacing,
                          scan, scan_fast, standardized_pair, studentized_pair)

__version__ = "0.1.0"

__all__ = [
    "GUMBEL_C", "LimitLaw", "c_A", "critical_value", "exact_min_spacing_sf", "kolmogorov_cdf",
    "limit_cdf", "p_value", "u_n_tau", "NullDistribution", "SortedSample", "cdf_transform",
    "parse_null", "sample_uniform_order_stats", "sort_sample", "ScanOutcome", "ScanSpec",
    "eicker_statistics", "ks_statistic", "min_spacing", "scan", "scan_fast",
    "standardized_pair", "studentized_pair",
]
