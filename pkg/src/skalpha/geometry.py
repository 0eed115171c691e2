"""Planar polyline predicates on complex-valued samples.

Closed curves are given as arrays of vertices without the repeated end
point; the edge from the last vertex back to the first is implied.
"""

from __future__ import annotations

import numpy as np


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _orient(p, q, r):
    """Sign of the turn p -> q -> r (+1 left, -1 right, 0 collinear)."""
    return np.sign(_cross(q.real - p.real, q.imag - p.imag, r.real - p.real, r.imag - p.imag))


def _on_segment(p, q, r):
    """For collinear p, q, r: does r lie within the bounding box of pq."""
    return (
        (np.minimum(p.real, q.real) <= r.real)
        & (r.real <= np.maximum(p.real, q.real))
        & (np.minimum(p.imag, q.imag) <= r.imag)
        & (r.imag <= np.maximum(p.imag, q.imag))
    )


def segments_intersect(p1, p2, q1, q2):
    """Vectorized closed-segment intersection test for segments p1p2 and q1q2."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    proper = (d1 * d2 < 0) & (d3 * d4 < 0)
    touch = (
        ((d1 == 0) & _on_segment(q1, q2, p1))
        | ((d2 == 0) & _on_segment(q1, q2, p2))
        | ((d3 == 0) & _on_segment(p1, p2, q1))
        | ((d4 == 0) & _on_segment(p1, p2, q2))
    )
    return proper | touch


def closed_polyline_self_intersects(points, block: int = 512) -> bool:
    """True iff two non-adjacent edges of the closed polyline meet.

    Quadratic pair test, evaluated in blocks of rows to bound memory.
    """
    pts = np.asarray(points, dtype=complex)
    n = pts.size
    if n < 4:
        return False
    a = pts
    b = np.roll(pts, -1)
    idx = np.arange(n)
    for start in range(0, n, block):
        i = idx[start : start + block, None]
        j = idx[None, :]
        # only j > i + 1, and skip the wraparound neighbour (0, n-1)
        mask = (j > i + 1) & ~((i == 0) & (j == n - 1))
        if not mask.any():
            continue
        ii, jj = np.nonzero(mask)
        ii = ii + start
        hit = segments_intersect(a[ii], b[ii], a[jj], b[jj])
        if hit.any():
            return True
    return False


def _block(curve_size: int) -> int:
    # keep each (points x vertices) work array near 2M entries
    return max(1, 2**21 // max(curve_size, 1))


def winding_number(curve, points) -> np.ndarray:
    """Winding number of the closed polyline ``curve`` about each of ``points``.

    Sums the principal-branch argument increments of consecutive vertices
    seen from each query point.  Accurate whenever every increment is below
    pi in magnitude, which callers enforce by refining the curve.
    """
    c = np.asarray(curve, dtype=complex)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.empty(pts.size, dtype=np.int64)
    nxt = np.roll(c, -1)
    blk = _block(c.size)
    for start in range(0, pts.size, blk):
        q = pts[start : start + blk, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            inc = np.angle((nxt[None, :] - q) / (c[None, :] - q))
        out[start : start + blk] = np.rint(inc.sum(axis=1) / (2 * np.pi)).astype(np.int64)
    return out


def max_argument_increment(curve, points) -> np.ndarray:
    """Largest |arg increment| per query point, used to decide on refinement."""
    c = np.asarray(curve, dtype=complex)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    nxt = np.roll(c, -1)
    out = np.empty(pts.size)
    blk = _block(c.size)
    for start in range(0, pts.size, blk):
        q = pts[start : start + blk, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            inc = np.angle((nxt[None, :] - q) / (c[None, :] - q))
        out[start : start + blk] = np.abs(inc).max(axis=1)
    return out


def distance_to_polyline(curve, points) -> np.ndarray:
    """Euclidean distance from each point to the closed polyline."""
    a = np.asarray(curve, dtype=complex)
    b = np.roll(a, -1)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.empty(pts.size)
    d = b - a
    dd = np.abs(d) ** 2
    dd = np.where(dd == 0, 1.0, dd)
    blk = _block(a.size)
    for start in range(0, pts.size, blk):
        q = pts[start : start + blk, None]
        t = ((q - a[None, :]) * np.conj(d)[None, :]).real / dd[None, :]
        t = np.clip(t, 0.0, 1.0)
        proj = a[None, :] + t * d[None, :]
        out[start : start + blk] = np.abs(q - proj).min(axis=1)
    return out
