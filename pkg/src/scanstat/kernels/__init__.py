"""Hot scan kernels with two interchangeable backends.

``SCANSTAT_BACKEND=numpy`` forces the pure-numpy path; otherwise numba is used
when it imports. ``get_backend(name)`` returns either explicitly.
"""
import os
import types

from ._common import BOTH, MINUS, PLUS, STANDARDIZED, STUDENTIZED

__all__ = ["get_backend", "default_backend_name", "available_backends",
           "STUDENTIZED", "STANDARDIZED", "PLUS", "MINUS", "BOTH"]

ENV_FLAG = "SCANSTAT_BACKEND"


def available_backends() -> tuple:
    names = ["numpy"]
    try:
        import numba  # noqa: F401
        names.insert(0, "numba")
    except ImportError:
        pass
    return tuple(names)


def default_backend_name() -> str:
    requested = os.environ.get(ENV_FLAG, "").strip().lower()
    if requested in ("numpy", "python", "off", "0"):
        return "numpy"
    if requested and requested != "numba":
        raise ValueError(f"{ENV_FLAG} must be 'numba' or 'numpy', not {requested!r}")
    return available_backends()[0]


def get_backend(name: str | None = None) -> types.ModuleType:
    name = name or default_backend_name()
    if name == "numba":
        from . import _numba
        return _numba
    if name == "numpy":
        from . import _numpy
        return _numpy
    raise ValueError(f"unknown backend {name!r}")
