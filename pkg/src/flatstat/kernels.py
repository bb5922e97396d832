"""Backend selection for the hot loops.

The compiled extension ``flatstat._kernels`` is used when it imports;
otherwise (or when ``FLATSTAT_PURE_PYTHON=1``) the numpy fallback in
``flatstat._pykernels`` is used.  Both produce identical results.
"""

from __future__ import annotations

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("FLATSTAT_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # pragma: no cover - depends on build
        compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"


def backend(name: str | None = None):
    """Return a backend module by name (``"compiled"``/``"python"``), default the active one."""
    if name is None:
        return _impl
    if name == "python":
        return python_backend
    if name == "compiled":
        if compiled_backend is None:
            raise RuntimeError("compiled kernels are not built")
        return compiled_backend
    raise ValueError(f"unknown backend {name!r}")


def fold_histogram(ind, bases, pivmasks, hist):
    return _impl.fold_histogram(ind, bases, pivmasks, hist)


def mask_profiles(masks, flats, width):
    return _impl.mask_profiles(masks, flats, width)


def anneal_run(incidence, state, counts, s, proposals, uniforms, temps):
    return _impl.anneal_run(incidence, state, counts, s, proposals, uniforms, temps)
