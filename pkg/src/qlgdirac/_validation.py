"""Input validation helpers shared by the estimator and the CLI."""

from __future__ import annotations

import numbers

import numpy as np
from numpy.typing import ArrayLike, NDArray
from sklearn.utils.validation import check_scalar

__all__ = ["check_spinor_batch", "check_profile", "check_positive", "check_count"]


def check_spinor_batch(x: ArrayLike, *, min_sites: int = 2) -> tuple[NDArray[np.complex128], bool]:
    """Coerce ``x`` to a complex batch of spinor fields.

    Args:
        x: A single field of shape ``(L, 2)`` or a batch ``(n, L, 2)``.
        min_sites: Minimum lattice size.

    Returns:
        ``(batch, was_single)`` with ``batch`` of shape ``(n, L, 2)``.

    Raises:
        ValueError: On wrong shape, too few sites, or non-finite entries.
    """
    arr = np.asarray(x)
    if arr.dtype == object:
        raise ValueError("spinor fields must be numeric")
    arr = arr.astype(np.complex128, copy=True)
    single = arr.ndim == 2
    if single:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError(f"expected shape (L, 2) or (n, L, 2), got {np.shape(x)}")
    if arr.shape[0] == 0:
        raise ValueError("empty batch")
    if arr.shape[1] < min_sites:
        raise ValueError(f"need at least {min_sites} sites, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains NaN or Inf")
    return arr, single


def check_profile(value: ArrayLike, n_sites: int, name: str, *, lower: float | None = None) -> NDArray[np.float64]:
    """Broadcast a scalar or per-site profile to ``n_sites`` finite floats."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n_sites, float(arr))
    if arr.shape != (n_sites,):
        raise ValueError(f"{name} must be a scalar or have length {n_sites}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    if lower is not None and np.any(arr < lower):
        raise ValueError(f"{name} must be >= {lower}")
    return arr


def check_positive(value: float, name: str) -> float:
    """Validate a strictly positive real scalar."""
    return float(check_scalar(value, name, numbers.Real, min_val=0.0, include_boundaries="neither"))


def check_count(value: int, name: str, *, min_val: int = 0) -> int:
    """Validate an integer count ``>= min_val``."""
    if isinstance(value, bool):
        raise TypeError(f"{name} must be an integer")
    return int(check_scalar(value, name, numbers.Integral, min_val=min_val))
