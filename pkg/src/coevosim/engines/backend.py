"""Backend selection: compiled kernels when available, pure Python otherwise.

The compiled extension is optional; a source build without a C++
toolchain falls back to the pure implementations silently. Set
COEVOSIM_BACKEND=pure or =compiled to force a choice (forcing compiled
raises if the extension is absent).
"""

from __future__ import annotations

import os

from ..errors import UsageError

try:
    from . import _kernels  # type: ignore[attr-defined]

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    _kernels = None
    HAVE_COMPILED = False

BACKENDS = ("compiled", "pure")


def default_backend() -> str:
    forced = os.environ.get("COEVOSIM_BACKEND")
    if forced:
        return resolve_backend(forced)
    return "compiled" if HAVE_COMPILED else "pure"


def resolve_backend(name: str | None) -> str:
    """Normalize a backend name, honoring the env override for None/auto."""
    if name is None or name == "auto":
        return default_backend()
    if name not in BACKENDS:
        raise UsageError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "compiled" and not HAVE_COMPILED:
        raise UsageError(
            "compiled backend requested but the extension is not built"
        )
    return name
