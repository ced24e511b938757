"""Numerical range sampling and numerical radius computation.

The radius is computed as the maximum over directions of the support
function f(theta) = lambda_max(Re(e^{i theta} T)): a dense angular grid
locates the global basin, then golden-section refinement shrinks the
bracket below 1e-12 rad.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadShape
from .linalg import _tol, herm_part, op_norm, require_square

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _support_value(T, theta):
    return float(np.linalg.eigvalsh(herm_part(np.exp(1j * theta) * T))[-1])


def _support_grid(T, thetas):
    """Support-function values at many angles through one batched eigensolve."""
    phases = np.exp(1j * thetas)
    stack = phases[:, None, None] * T[None, :, :]
    stack = (stack + np.conj(np.swapaxes(stack, 1, 2))) / 2.0
    return np.linalg.eigvalsh(stack)[:, -1]


def _golden_max(f, a, b, bracket=1e-12):
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    best = max(fc, fd)
    best_x = c if fc >= fd else d
    while b - a > bracket:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        if fc > best:
            best, best_x = fc, c
        if fd > best:
            best, best_x = fd, d
    return best, best_x


def _grid_for(T, tol):
    return max(int(tol.grid_angles), 64 * T.shape[0])


def _radius_and_angle(T, tol):
    """Max of the support function and its argmax angle.

    The three highest local grid maxima are each refined, so near-ties
    between separated basins cannot deflect the global result.
    """
    t = _tol(tol)
    A = require_square(T, "num_radius")
    grid = _grid_for(A, t)
    thetas = 2.0 * np.pi * np.arange(grid) / grid
    vals = _support_grid(A, thetas)
    step = 2.0 * np.pi / grid

    local = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    if local.size == 0:
        local = np.array([int(np.argmax(vals))])
    candidates = local[np.argsort(vals[local])[::-1][:3]]

    best = float(vals.max())
    best_angle = float(thetas[int(np.argmax(vals))])
    for i in candidates:
        refined, angle = _golden_max(lambda th: _support_value(A, th),
                                     thetas[i] - step, thetas[i] + step)
        if refined > best:
            best, best_angle = refined, angle
    return best, float(best_angle % (2.0 * np.pi))


def num_radius(T, tol=None):
    """Numerical radius w(T) = max_theta lambda_max(Re(e^{i theta} T))."""
    return _radius_and_angle(T, tol)[0]


def range_boundary(T, K, tol=None):
    """K support points of the numerical range.

    For each theta_k = 2 pi k / K, takes a top eigenvector v of
    Re(e^{-i theta_k} T) and emits <Tv, v>. Every point lies in the
    numerical range; their convex hull approximates it from inside.
    """
    A = require_square(T, "range_boundary")
    if K < 3:
        raise BadShape(f"range_boundary needs K >= 3, got {K}")
    pts = []
    for k in range(K):
        theta = 2.0 * np.pi * k / K
        H = herm_part(np.exp(-1j * theta) * A)
        _, V = np.linalg.eigh(H)
        v = V[:, -1]
        pts.append(complex(np.vdot(v, A @ v)))
    return pts


@dataclass(frozen=True)
class RadiusReport:
    """Result of the four elementary radius checks.

    conditions holds, in order: (1) w(T) <= 1, (2) I + Re(lambda T) PSD on
    the circle grid, (3) Re(lambda T) <= I on the circle grid, (4)
    Re(z T) <= I on sampled radii |z| in {0.1, ..., 0.9}.
    """

    radius: float
    argmax_angle: float
    conditions: tuple
    worst_margin: float


def radius_characterizations(T, tol=None):
    """Evaluate the four radius-at-most-one conditions on a grid.

    When the radius is not within 1e-6 of the threshold, the four booleans
    are asserted to agree with ``num_radius(T) <= 1``.
    """
    t = _tol(tol)
    A = require_square(T, "radius_characterizations")
    scale = 1.0 + op_norm(A)
    radius, angle = _radius_and_angle(A, t)

    grid = _grid_for(A, t)
    thetas = 2.0 * np.pi * np.arange(grid) / grid
    phases = np.exp(1j * thetas)
    stack = phases[:, None, None] * A[None, :, :]
    stack = (stack + np.conj(np.swapaxes(stack, 1, 2))) / 2.0
    eigs = np.linalg.eigvalsh(stack)
    worst2 = 1.0 + float(eigs[:, 0].min())   # min lambda_min(I + Re)
    worst3 = 1.0 - float(eigs[:, -1].max())  # min lambda_min(I - Re)
    # condition (4) on rings |z| in {0.1, ..., 0.9}: by positive homogeneity
    # of the support function the smallest margin over all rings is attained
    # on the outermost one
    ring_grid = max(72, grid // 10)
    ring_thetas = 2.0 * np.pi * np.arange(ring_grid) / ring_grid
    tops = _support_grid(A, ring_thetas)
    worst4 = 1.0 - 0.9 * float(tops.max())

    band = t.psd_eps * scale
    cond3 = worst3 >= -band
    # the open-disk condition is verified by its boundary limit (= condition
    # 3); the ring samples are a consistency check, not the verifier
    cond4 = cond3 and worst4 >= -band
    conds = (
        radius <= 1.0 + band,
        worst2 >= -band,
        cond3,
        cond4,
    )
    worst_margin = float(min(worst2, worst3, worst4))
    if abs(radius - 1.0) > 1e-6:
        expected = radius <= 1.0
        assert all(c == expected for c in conds), (
            f"radius conditions disagree: radius={radius}, conditions={conds}")
    return RadiusReport(radius=radius, argmax_angle=angle,
                        conditions=conds, worst_margin=worst_margin)
