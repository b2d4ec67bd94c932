"""Kernel backend selection: compiled extension if available, numpy otherwise.

The compiled module implements the same five entry points as the fallback
(solve_kernel, horner, horner_compensated, backward_residuals,
log_derivative).  Set KACROOTS_BACKEND=python or =compiled to force a
backend; the default prefers the extension and silently falls back.
"""

from __future__ import annotations

import os

from . import fallback
from .guesses import initial_guesses

__all__ = [
    "BACKEND",
    "initial_guesses",
    "solve_kernel",
    "horner",
    "horner_compensated",
    "backward_residuals",
    "log_derivative",
    "load_backend",
    "available_backends",
]


def load_backend(name: str):
    """Return the kernel module for `name` ('python' or 'compiled').

    Raises ImportError if the compiled extension was requested but is not
    built in this environment.
    """
    if name == "python":
        return fallback
    if name == "compiled":
        from . import _aberth
        return _aberth
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> list[str]:
    names = ["python"]
    try:
        load_backend("compiled")
        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


_requested = os.environ.get("KACROOTS_BACKEND", "auto").lower()
if _requested == "python":
    _impl = fallback
elif _requested == "compiled":
    _impl = load_backend("compiled")
elif _requested == "auto":
    try:
        _impl = load_backend("compiled")
    except ImportError:
        _impl = fallback
else:
    raise RuntimeError(f"KACROOTS_BACKEND={_requested!r} not one of auto/compiled/python")

BACKEND: str = _impl.BACKEND_NAME
solve_kernel = _impl.solve_kernel
horner = _impl.horner
horner_compensated = _impl.horner_compensated
backward_residuals = _impl.backward_residuals
log_derivative = _impl.log_derivative
