"""Hot-loop kernels: compiled extension when available, Python otherwise.

Set ``PACHGAP_PURE_PYTHON=1`` to force the fallback. ``BACKEND`` names the
module in use.
"""
import os

from . import _pure

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

if _core is not None and os.environ.get("PACHGAP_PURE_PYTHON") != "1":
    _impl = _core
    BACKEND = "cython"
else:
    _impl = _pure
    BACKEND = "python"

_WORD = 1 << 64


def _fits(masks) -> bool:
    return len(masks) <= 64 and all(0 <= x < _WORD for x in masks)


def min_union_popcount(masks, m, backend=None):
    impl = _pick(backend)
    if impl is not _pure and not _fits(masks):
        impl = _pure
    return impl.min_union_popcount(list(masks), m)


def coboundary_scan(n_k, dmasks, wk, wk1, cobs, backend=None):
    impl = _pick(backend)
    if impl is not _pure and (n_k > 63 or len(wk1) > 64 or not _fits(dmasks)
                              or sum(wk) >= 1 << 31 or sum(wk1) >= 1 << 31):
        impl = _pure
    return impl.coboundary_scan(n_k, list(dmasks), list(wk), list(wk1), list(cobs))


def _pick(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return _pure
    if backend == "cython":
        if _core is None:
            raise ImportError("compiled kernels are not built")
        return _core
    raise ValueError(f"unknown backend {backend!r}")


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _core is not None else [])
