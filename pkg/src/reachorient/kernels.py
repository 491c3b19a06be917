"""Backend selection for the hot kernels.

The compiled module is used when it imported and the instance's weight total
keeps every partial sum inside int64; otherwise the pure-Python twin runs with
exact big integers.  ``use_backend("python")`` forces the fallback.
"""

from __future__ import annotations

from typing import Sequence

from . import _pykernels

try:
    from . import _kernels as _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

_INT64_SAFE = 1 << 62
_forced: str | None = None


def available() -> list[str]:
    return ["python"] + (["compiled"] if _ckernels is not None else [])


def use_backend(name: str | None) -> None:
    """Force ``"python"`` or ``"compiled"``; ``None`` restores automatic choice."""
    global _forced
    if name not in (None, "python", "compiled"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _ckernels is None:
        raise RuntimeError("compiled kernels are not built")
    _forced = name


def backend_name() -> str:
    if _forced is not None:
        return _forced
    return "compiled" if _ckernels is not None else "python"


def _pick(n: int, weights: Sequence[int] | None):
    if backend_name() == "python" or _ckernels is None:
        return _pykernels
    total = n if weights is None else sum(weights)
    if total * total >= _INT64_SAFE:
        return _pykernels
    return _ckernels


def score_arcs(n: int, arcs: Sequence[tuple[int, int]], weights: Sequence[int] | None) -> int:
    return int(_pick(n, weights).score_arcs(n, arcs, weights))


def brute_force_best(n, edges, arcs, weights) -> tuple[int, int]:
    val, code = _pick(n, weights).brute_force_best(n, edges, arcs, weights)
    return int(val), int(code)


def decode(code: int, m: int) -> tuple[bool, ...]:
    """Direction code -> per-edge forward flags."""
    return tuple(not (code >> (m - 1 - i)) & 1 for i in range(m))
