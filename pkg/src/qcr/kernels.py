"""Backend selection for the enumeration kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise,
or when ``QCR_PURE_PYTHON`` is set to a non-empty value, the pure-Python
``_pykernels`` module is used.  Both expose the same functions.
"""

from __future__ import annotations

import os
from array import array
from types import ModuleType
from typing import Iterable

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

if _ckernels is not None and not os.environ.get("QCR_PURE_PYTHON"):
    BACKEND = "cython"
    _impl: ModuleType = _ckernels
else:
    BACKEND = "python"
    _impl = _pykernels


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ckernels is not None else [])


def get(backend: str | None = None) -> ModuleType:
    if backend is None:
        return _impl
    if backend == "python":
        return _pykernels
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("the compiled kernels are not available")
        return _ckernels
    raise ValueError(f"unknown backend {backend!r}")


def u64(values: Iterable[int]) -> array:
    return array("Q", values)


def i32(values: Iterable[int]) -> array:
    return array("i", values)


def u8(size: int) -> array:
    return array("B", bytes(size))
