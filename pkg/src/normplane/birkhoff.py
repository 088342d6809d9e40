"""Birkhoff orthogonality tests and orthogonality cones.

A vector x is Birkhoff orthogonal to y when norm(x + lam*y) >= norm(x)
for every real lam, i.e. the line through x with direction y stays
outside the open ball of radius norm(x).  The relation is not symmetric
in general.  Each pointwise test reduces to a one-dimensional convex
minimization along the line; cones of orthogonal directions come from
scanning a half circle of directions and bisecting the pass boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .norms import rot90

__all__ = [
    "OrthCone",
    "birkhoff_margin",
    "is_birkhoff_orth",
    "orth_cone",
    "perp_point",
]

TWO_PI = 2.0 * math.pi
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _line_minimum(norm, xs, dirs, iters=80):
    """Lockstep golden-section minimum of norm(x + lam*d) per lane.

    xs broadcasts against dirs, one lane per direction.  The bracket
    |lam| <= 2 norm(x) / norm(d) is exact: both endpoints have value at
    least norm(x) by the triangle inequality while lam = 0 attains it,
    so a convex minimizer lies inside.  Returns (values, lams).
    """
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    xs = np.broadcast_to(np.asarray(xs, dtype=float), dirs.shape)
    nx = np.asarray(norm.value(xs), dtype=float)
    nd = np.asarray(norm.value(dirs), dtype=float)
    hi = 2.0 * nx / nd
    lo = -hi
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc = np.asarray(norm.value(xs + c[:, None] * dirs), dtype=float)
    fd = np.asarray(norm.value(xs + d[:, None] * dirs), dtype=float)
    for _ in range(iters):
        take = fc < fd
        hi = np.where(take, d, hi)
        lo = np.where(take, lo, c)
        c_old, fc_old, fd_old = c, fc, fd
        c = np.where(take, hi - _GOLDEN * (hi - lo), d)
        d = np.where(take, c_old, lo + _GOLDEN * (hi - lo))
        fresh = np.where(take, c, d)
        fe = np.asarray(norm.value(xs + fresh[:, None] * dirs), dtype=float)
        fc = np.where(take, fe, fd_old)
        fd = np.where(take, fc_old, fe)
    vals = np.minimum(fc, fd)
    lams = np.where(fc <= fd, c, d)
    return vals, lams


def birkhoff_margin(norm, x, y):
    """min over lam of norm(x + lam*y), minus norm(x).

    Always <= 0; equal to 0 (up to solver precision) exactly when x is
    Birkhoff orthogonal to y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    vals, _ = _line_minimum(norm, x, y[None, :])
    return float(vals[0]) - float(norm.value(x))


def is_birkhoff_orth(norm, x, y, tol=1e-9):
    """Whether x is Birkhoff orthogonal to y, tol relative to norm(x)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = float(norm.value(x))
    ny = float(norm.value(y))
    if nx == 0.0 or ny == 0.0:
        raise PreconditionError("is_birkhoff_orth requires nonzero vectors")
    vals, _ = _line_minimum(norm, x, y[None, :])
    return bool(vals[0] >= nx * (1.0 - tol))


@dataclass(frozen=True, eq=False)
class OrthCone:
    """Directions Birkhoff orthogonal to a base vector.

    directions holds closed angle intervals (lo, hi) in radians with lo
    in [0, 2pi) and hi - lo < pi; an interval wrapping past 2pi keeps
    hi > 2pi rather than splitting.  The set is exactly symmetric under
    theta -> theta + pi, so intervals come in antipodal pairs, and a
    degenerate interval (hi == lo) is a single direction.
    """

    base_x: np.ndarray
    directions: tuple

    def is_single_pair(self, tol=1e-3):
        """True when the cone is one antipodal direction pair up to tol width."""
        return len(self.directions) == 2 and all(hi - lo <= tol for lo, hi in self.directions)

    def contains(self, theta, slack=1e-9):
        t = float(theta) % TWO_PI
        for lo, hi in self.directions:
            if lo - slack <= t <= hi + slack or lo - slack <= t + TWO_PI <= hi + slack:
                return True
        return False

    def total_width(self):
        return float(sum(hi - lo for lo, hi in self.directions))


def _margins(norm, x, thetas, iters=80):
    dirs = np.stack([np.cos(thetas), np.sin(thetas)], axis=-1)
    vals, _ = _line_minimum(norm, x, dirs, iters=iters)
    return vals


def orth_cone(norm, x, angular_resolution=720, tol=1e-9):
    """Cone of directions Birkhoff orthogonal to x.

    Margins are scanned over [0, pi) only, since the relation is
    invariant under y -> -y, then mirrored.  Run boundaries on the scan
    grid are refined by bisecting the pass predicate to 1e-9 radians.
    For a smooth sphere point no grid direction need pass at tol, so
    the scan falls back to refining the margin peak, which then sits at
    the single orthogonal direction.
    """
    x = np.asarray(x, dtype=float)
    nx = float(norm.value(x))
    if nx == 0.0:
        raise PreconditionError("orth_cone requires a nonzero base vector")
    n = int(angular_resolution)
    thetas = np.arange(n) * (math.pi / n)
    vals = _margins(norm, x, thetas)
    thresh = nx * (1.0 - tol)
    mask = vals >= thresh
    if mask.all():
        raise RuntimeError("every direction passed the orthogonality test")

    if not mask.any():
        half_runs = [_refine_peak(norm, x, thetas, vals, nx)]
    else:
        runs = _circular_runs(mask)
        fail = []
        ok = []
        for i_lo, i_hi in runs:
            fail += [(i_lo - 1) * math.pi / n, (i_hi + 1) * math.pi / n]
            ok += [i_lo * math.pi / n, i_hi * math.pi / n]
        ends = _bisect_boundaries(norm, x, thresh, np.array(fail), np.array(ok))
        half_runs = []
        for k in range(len(runs)):
            a, b = ends[2 * k], ends[2 * k + 1]
            if b < a:
                b += math.pi  # run wraps through the scan origin
            half_runs.append((a, b))

    intervals = []
    for a, b in half_runs:
        w = b - a
        for shift in (0.0, math.pi):
            lo = (a + shift) % TWO_PI
            intervals.append((lo, lo + w))
    intervals.sort()
    return OrthCone(base_x=x / nx, directions=tuple(intervals))


def _circular_runs(mask):
    """Maximal runs of passing indices, joined across the array ends."""
    n = len(mask)
    idx = np.where(mask)[0]
    breaks = np.where(np.diff(idx) > 1)[0]
    runs = np.split(idx, breaks + 1)
    if len(runs) > 1 and idx[0] == 0 and idx[-1] == n - 1:
        runs[0] = np.concatenate([runs[-1] - n, runs[0]])
        runs.pop()
    return [(int(r[0]), int(r[-1])) for r in runs]


def _bisect_boundaries(norm, x, thresh, fail, ok, iters=40):
    # all run boundaries refined in lockstep, one margin batch per step
    for _ in range(iters):
        mid = 0.5 * (fail + ok)
        passed = _margins(norm, x, mid) >= thresh
        ok = np.where(passed, mid, ok)
        fail = np.where(passed, fail, mid)
    return ok % math.pi


def _refine_peak(norm, x, thetas, vals, nx):
    i = int(np.argmax(vals))
    h = math.pi / len(thetas)
    lo, hi = thetas[i] - h, thetas[i] + h
    # peak position is value-noise limited near a smooth maximum, so
    # mid-precision margins are enough for the ternary comparisons
    for _ in range(32):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        v1, v2 = _margins(norm, x, np.array([m1, m2]), iters=48)
        if v1 < v2:
            lo = m1
        else:
            hi = m2
    peak = 0.5 * (lo + hi)
    if _margins(norm, x, np.array([peak]))[0] < nx * (1.0 - 1e-6):
        raise RuntimeError("margin peak refinement failed to reach orthogonality")
    peak = peak % math.pi
    return peak, peak


def _polish_support_angle(norm, u, phi):
    """Sharpen a support angle when the support function peaks smoothly.

    Around a smooth peak the ternary search stalls at the value-noise
    floor, which for flat spheres can be coarse in angle.  Locating the
    center where f(psi + d) = f(psi - d) instead is exact for symmetric
    peaks and O(d^2) biased otherwise; Richardson over shrinking d kills
    the bias.  Corner peaks would gain an O(d) bias from this, so they
    are detected by their linear value drop and left to the ternary
    result.
    """

    def f(psi):
        return float(norm.unit_point(psi) @ u)

    drop1 = f(phi) - 0.5 * (f(phi - 1e-2) + f(phi + 1e-2))
    drop2 = f(phi) - 0.5 * (f(phi - 5e-3) + f(phi + 5e-3))
    if drop2 <= 0 or drop1 / drop2 < 3.0:
        return phi  # linear drop: corner support point, ternary already exact
    centers = []
    for d in (2e-2, 1e-2):
        lo, hi = phi - d, phi + d
        if not (f(lo + d) > f(lo - d) and f(hi + d) < f(hi - d)):
            return phi
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if f(mid + d) >= f(mid - d):
                lo = mid
            else:
                hi = mid
        centers.append(0.5 * (lo + hi))
    return centers[1] + (centers[1] - centers[0]) / 3.0


def perp_point(norm, x):
    """The unit point z that is Birkhoff orthogonal to x with z2 < 0.

    Needs a strictly convex norm for uniqueness and x on the unit
    sphere.  z is the support point of the ball in the Euclidean
    direction perpendicular to x, which makes the line z + lam*x a
    supporting line.  When the orthogonal pair is horizontal the second
    coordinate ties at 0 and the point with z1 < 0 is returned.
    """
    if not norm.is_strictly_convex:
        raise PreconditionError("perp_point requires a strictly convex norm")
    x = np.asarray(x, dtype=float)
    if abs(float(norm.value(x)) - 1.0) > 1e-6:
        raise PreconditionError("perp_point requires x on the unit sphere")
    from .curves import _support_angle

    u = rot90(x)
    phi = _polish_support_angle(norm, u, _support_angle(norm, u))
    z = norm.unit_point(phi)
    if abs(z[1]) <= 1e-9:
        return z if z[0] < 0 else -z
    return z if z[1] < 0 else -z
