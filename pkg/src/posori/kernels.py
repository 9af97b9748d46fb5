"""Batch pairwise kernels with selectable backend.

Two interchangeable implementations of the hot n x n loops:

  * ``numba``: jitted scalar loops (parallel over rows), the default when
    numba imports cleanly;
  * ``numpy``: fully vectorized fallback, no compilation step.

Select with the environment variable ``POSORI_BACKEND=numba|numpy`` (read
once at import).  Both backends evaluate the same arithmetic per pair;
outputs agree to rounding error, and each backend is deterministic —
results never depend on the thread count.
"""

from __future__ import annotations

import os

import numpy as np

_PURE_EPS = 1e-7
_ANTI_EPS = 1e-6
_SERIES_EPS = 1e-4

_ENV_VAR = "POSORI_BACKEND"


def _resolve_backend() -> str:
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice in ("numba", "numpy"):
        return choice
    if choice:
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}")
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


_BACKEND = _resolve_backend()
_JITTED = None


def active_backend() -> str:
    """Backend the pairwise kernels will run on ('numba' or 'numpy')."""
    return _BACKEND


def _jitted():
    global _JITTED
    if _JITTED is None:
        from . import _numba_kernels

        _JITTED = _numba_kernels
    return _JITTED


def set_threads(n: int) -> None:
    """Cap the numba thread pool; a no-op on the numpy backend."""
    if n < 1:
        raise ValueError("thread count must be >= 1")
    if _BACKEND == "numba":
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def _dot(a, b):
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def _cross(a, b):
    out = np.empty(np.broadcast(a, b).shape)
    out[..., 0] = a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1]
    out[..., 1] = a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2]
    out[..., 2] = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return out


def _default_plane_axis(ns: np.ndarray) -> np.ndarray:
    # unit normal of the fallback rotation plane for each orientation:
    # cross(n, e2) with e2 the Gram-Schmidt image of the least aligned axis
    n_pts = ns.shape[0]
    seeds = np.zeros((n_pts, 3))
    seeds[np.arange(n_pts), np.argmin(np.abs(ns), axis=1)] = 1.0
    perp = seeds - _dot(seeds, ns)[:, None] * ns
    perp /= np.sqrt(_dot(perp, perp))[:, None]
    return _cross(ns, perp)


def _pairwise_mav_numpy(xs: np.ndarray, ns: np.ndarray, w: np.ndarray) -> np.ndarray:
    x1 = xs[:, None, :]
    x2 = xs[None, :, :]
    n1 = ns[:, None, :]
    n2 = ns[None, :, :]

    cr = _cross(n1, n2)
    s = np.sqrt(_dot(cr, cr))
    c = _dot(n1, n2)
    theta = np.arctan2(s, c)
    d = x2 - x1

    pure = theta < _PURE_EPS
    anti = theta > np.pi - _ANTI_EPS

    axis = cr / np.where(s > 0.0, s, 1.0)[..., None]
    if np.any(anti):
        fallback = _default_plane_axis(ns)
        axis = np.where(anti[..., None], np.broadcast_to(fallback[:, None, :], axis.shape), axis)

    along = _dot(d, axis)
    x_perp = along[..., None] * axis
    x_par = d - x_perp

    theta_safe = np.where(theta < _SERIES_EPS, 1.0, theta)
    half = 0.5 * theta_safe
    t2 = theta * theta
    f = np.where(
        theta < _SERIES_EPS,
        1.0 - t2 / 12.0 - t2 * t2 / 720.0,
        half * np.cos(half) / np.sin(half),
    )

    x_m = 0.5 * (x1 + x2)
    v = -theta[..., None] * _cross(axis, x_m) + f[..., None] * x_par + x_perp
    omega = theta[..., None] * axis

    xdot = v + _cross(omega, np.broadcast_to(x1, v.shape))
    ndot = _cross(omega, np.broadcast_to(n1, v.shape))
    xdot = np.where(pure[..., None], np.broadcast_to(d, xdot.shape), xdot)
    ndot = np.where(pure[..., None], 0.0, ndot)

    a = _dot(xdot, n1)
    lateral = _cross(xdot, np.broadcast_to(n1, xdot.shape))
    handed = _cross(ndot, np.broadcast_to(n1, ndot.shape))
    q = (
        w[0] * a * a
        + w[1] * _dot(lateral, lateral)
        + w[2] * _dot(ndot, ndot)
        + w[3] * 2.0 * _dot(xdot, ndot)
        + w[4] * 2.0 * _dot(xdot, handed)
    )
    return np.where(q == 0.0, 0.0, np.copysign(np.sqrt(np.abs(q)), q))


def _pairwise_triple_numpy(xs: np.ndarray, ns: np.ndarray) -> np.ndarray:
    x1 = xs[:, None, :]
    x2 = xs[None, :, :]
    n1 = ns[:, None, :]
    n2 = ns[None, :, :]

    d = x2 - x1
    i1 = _dot(d, n1)
    lateral = d - i1[..., None] * n1
    i2 = np.sqrt(_dot(lateral, lateral))
    cr = _cross(n1, n2)
    i3 = np.arctan2(np.sqrt(_dot(cr, cr)), _dot(n1, n2))
    return np.stack([np.broadcast_to(i1, i3.shape), i2, i3], axis=-1)


def _check_cloud(xs: np.ndarray, ns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    xs = np.ascontiguousarray(xs, dtype=float)
    ns = np.ascontiguousarray(ns, dtype=float)
    if xs.ndim != 2 or xs.shape[1] != 3 or xs.shape != ns.shape:
        raise ValueError("expected matching (n, 3) position and orientation arrays")
    return xs, ns


def pairwise_mav(xs: np.ndarray, ns: np.ndarray, w: np.ndarray) -> np.ndarray:
    """(n, n) matrix of signed mav distances between all ordered pairs."""
    xs, ns = _check_cloud(xs, ns)
    w = np.ascontiguousarray(w, dtype=float)
    if w.shape != (5,):
        raise ValueError("expected 5 metric weights")
    if _BACKEND == "numba":
        return _jitted().pairwise_mav(xs, ns, w)
    return _pairwise_mav_numpy(xs, ns, w)


def pairwise_triple(xs: np.ndarray, ns: np.ndarray) -> np.ndarray:
    """(n, n, 3) array of the three baseline invariants for all ordered pairs."""
    xs, ns = _check_cloud(xs, ns)
    if _BACKEND == "numba":
        return _jitted().pairwise_triple(xs, ns)
    return _pairwise_triple_numpy(xs, ns)
