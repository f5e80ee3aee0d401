"""Hot numeric kernels: ray casting against wall segments.

Two implementations share one contract: a numba ``@njit`` kernel and a pure
numpy fallback.  Set ``NAVEX_NO_NUMBA=1`` to force the numpy path (also used
by the benchmark in ``benchmarks/``).
"""
from __future__ import annotations

import os

import numpy as np

_EPS = 1e-12

USE_NUMBA = os.environ.get("NAVEX_NO_NUMBA", "0").lower() not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


def _cast_rays_numpy(ox: float, oy: float, angles: np.ndarray,
                     segments: np.ndarray, max_range: float) -> np.ndarray:
    """Nearest-hit distance per ray; ``max_range`` where nothing is hit.

    ``segments`` is (S, 4): x1, y1, x2, y2.
    """
    if segments.shape[0] == 0:
        return np.full(angles.shape[0], max_range)
    dx = np.cos(angles)[:, None]          # (B, 1)
    dy = np.sin(angles)[:, None]
    vx = (segments[:, 2] - segments[:, 0])[None, :]   # (1, S)
    vy = (segments[:, 3] - segments[:, 1])[None, :]
    wx = (segments[:, 0] - ox)[None, :]
    wy = (segments[:, 1] - oy)[None, :]
    denom = dx * vy - dy * vx
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (wx * vy - wy * vx) / denom
        s = (wx * dy - wy * dx) / denom
    valid = (np.abs(denom) > _EPS) & (t >= 0.0) & (s >= 0.0) & (s <= 1.0)
    t = np.where(valid, t, np.inf)
    hits = t.min(axis=1)
    return np.minimum(hits, max_range)


def _cast_rays_loop(ox, oy, angles, segments, max_range):
    out = np.empty(angles.shape[0])
    for b in range(angles.shape[0]):
        dx = np.cos(angles[b])
        dy = np.sin(angles[b])
        best = max_range
        for i in range(segments.shape[0]):
            vx = segments[i, 2] - segments[i, 0]
            vy = segments[i, 3] - segments[i, 1]
            wx = segments[i, 0] - ox
            wy = segments[i, 1] - oy
            denom = dx * vy - dy * vx
            if abs(denom) <= _EPS:
                continue
            t = (wx * vy - wy * vx) / denom
            s = (wx * dy - wy * dx) / denom
            if t >= 0.0 and 0.0 <= s <= 1.0 and t < best:
                best = t
        out[b] = best
    return out


if USE_NUMBA:
    _cast_rays_jit = njit(cache=True)(_cast_rays_loop)

    def cast_rays(ox, oy, angles, segments, max_range):
        return _cast_rays_jit(float(ox), float(oy),
                              np.ascontiguousarray(angles, dtype=np.float64),
                              np.ascontiguousarray(segments, dtype=np.float64),
                              float(max_range))
else:
    def cast_rays(ox, oy, angles, segments, max_range):
        return _cast_rays_numpy(float(ox), float(oy),
                                np.asarray(angles, dtype=np.float64),
                                np.asarray(segments, dtype=np.float64),
                                float(max_range))


def first_hit(ox: float, oy: float, angle: float,
              segments: np.ndarray, max_range: float) -> float:
    """Distance to the nearest segment along a single ray."""
    return float(cast_rays(ox, oy, np.array([angle]), segments, max_range)[0])


def point_segment_distances(px: float, py: float, segments: np.ndarray) -> np.ndarray:
    """Distance from a point to each segment (vectorized)."""
    if segments.shape[0] == 0:
        return np.empty(0)
    ax, ay = segments[:, 0], segments[:, 1]
    vx, vy = segments[:, 2] - ax, segments[:, 3] - ay
    L2 = vx * vx + vy * vy
    with np.errstate(divide="ignore", invalid="ignore"):
        u = ((px - ax) * vx + (py - ay) * vy) / L2
    u = np.where(L2 > _EPS, np.clip(u, 0.0, 1.0), 0.0)
    cx, cy = ax + u * vx, ay + u * vy
    return np.hypot(px - cx, py - cy)


def segment_point_min_distance(x0, y0, x1, y1, pts: np.ndarray) -> float:
    """Minimum distance from a segment to a set of points (N, 2)."""
    if pts.shape[0] == 0:
        return np.inf
    vx, vy = x1 - x0, y1 - y0
    L2 = vx * vx + vy * vy
    if L2 <= _EPS:
        return float(np.hypot(pts[:, 0] - x0, pts[:, 1] - y0).min())
    u = np.clip(((pts[:, 0] - x0) * vx + (pts[:, 1] - y0) * vy) / L2, 0.0, 1.0)
    cx, cy = x0 + u * vx, y0 + u * vy
    return float(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy).min())
