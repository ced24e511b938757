"""Extremal numerical-radius machinery.

For a contraction-in-radius T (w(T) <= 1) there is a largest positive
contraction X with

    [[I - X, T*/2], [T/2, X]]  PSD,

and T factors as (I + Y)^{1/2} Z (I - Y)^{1/2} with Y = 2X - I and a
contraction Z that is isometric on range(I - Y). The operator
C = Z (I - X)^{1/2} then satisfies T = 2 (I - C*C)^{1/2} C and feeds the
explicit banded unitary in :mod:`mrange.dilation`.

X is computed by the fixed-point recursion

    X_0 = I,   X_{k+1} = I - (1/4) T* pinv(X_k) T,

which decreases monotonically to the extremal X. On boundary inputs
(w(T) = 1) the plain recursion converges only algebraically, so a gated
Newton polish on the fixed-point equation is interleaved: a polish step is
accepted only when it strictly shrinks the fixed-point residual, and the
returned X is always re-verified against the defining LMI.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, RadiusTooLarge, RangeViolation
from .linalg import (
    _tol,
    dagger,
    herm_part,
    op_norm,
    pinv,
    pinv_sqrt_psd,
    psd_check,
    range_projector,
    require_square,
    sqrt_psd,
)
from .numrange import num_radius

_MAX_STEPS = 10000


def _fixed_point_map(T, tol):
    I = np.eye(T.shape[0], dtype=complex)
    Th = dagger(T)

    def F(X):
        return herm_part(I - 0.25 * Th @ pinv(X, tol) @ T)

    return F


def _newton_polish(T, X, F, tol, rounds=60):
    """Newton-lstsq on G(X) = X - I + (1/4) T* X^+ T, accepted only while the
    fixed-point residual strictly improves."""
    n = T.shape[0]
    I = np.eye(n, dtype=complex)
    Th = dagger(T)
    Xc = X
    rc = float(np.linalg.norm(F(Xc) - Xc, "fro"))
    for _ in range(rounds):
        Xinv = pinv(Xc, tol)
        G = Xc - I + 0.25 * Th @ Xinv @ T
        A = Th @ Xinv
        B = Xinv @ T
        # row-major vec: vec(A H B) = kron(A, B^T) vec(H)
        J = np.eye(n * n, dtype=complex) - 0.25 * np.kron(A, B.T)
        h, *_ = np.linalg.lstsq(J, -G.reshape(-1), rcond=None)
        Xtry = herm_part(Xc + h.reshape(n, n))
        rtry = float(np.linalg.norm(F(Xtry) - Xtry, "fro"))
        if rtry < 0.7 * rc:
            Xc, rc = Xtry, rtry
            if rc <= tol.fixpoint_eps:
                break
        else:
            break
    return Xc, rc


def ando_X(T, tol=None):
    """Extremal positive contraction X for T with w(T) <= 1.

    Returns (X, iterations). Raises RadiusTooLarge when w(T) > 1 + 1e-9,
    RangeViolation when an iterate maps T outside its column space (the
    infimum in the defining variational formula would be -infinity), and
    NoConvergence when the iteration fails to settle.
    """
    t = _tol(tol)
    A = require_square(T, "ando_X")
    w = num_radius(A, t)
    if w > 1.0 + 1e-9:
        raise RadiusTooLarge(f"numerical radius {w:.12f} exceeds 1")
    n = A.shape[0]
    I = np.eye(n, dtype=complex)
    F = _fixed_point_map(A, t)

    X = I.copy()
    polished = False
    step = np.inf
    for k in range(_MAX_STEPS):
        Xp = pinv(X, t)
        if op_norm((I - X @ Xp) @ A) > 1e-6:
            raise RangeViolation("iterate no longer covers the range of T")
        Xn = herm_part(I - 0.25 * dagger(A) @ Xp @ A)
        step = float(np.linalg.norm(Xn - X, "fro"))
        if not polished:
            rise = float(np.linalg.eigvalsh(Xn - X)[-1])
            if rise > t.psd_eps * (1.0 + op_norm(X)):
                raise NoConvergence(f"monotone decrease violated (rise {rise:.3e})")
        low = float(np.linalg.eigvalsh(Xn)[0])
        if low < -t.psd_eps * (1.0 + op_norm(Xn)):
            raise NoConvergence(f"iterate left the PSD cone (min eig {low:.3e})")
        X = Xn
        polished = False
        if step <= t.fixpoint_eps:
            break
        if k >= 30 and k % 5 == 0:
            res_now = float(np.linalg.norm(F(X) - X, "fro"))
            Xc, rc = _newton_polish(A, X, F, t)
            if rc < 0.5 * res_now:
                X, polished = Xc, True
                if rc <= t.fixpoint_eps:
                    step = rc
                    break
    else:
        raise NoConvergence(f"no fixed point after {_MAX_STEPS} steps (step {step:.3e})")
    iterations = k + 1

    scale = 1.0 + op_norm(A)
    lmi = np.block([[I - X, dagger(A) / 2.0], [A / 2.0, X]])
    ok, min_eig = psd_check(lmi, t)
    if not ok:
        raise NoConvergence(f"limit violates the defining LMI (min eig {min_eig:.3e})")
    if float(np.linalg.eigvalsh(X)[-1]) > 1.0 + t.psd_eps * scale:
        raise NoConvergence("limit exceeds the identity")
    return X, iterations


@dataclass(frozen=True)
class AndoDecomposition:
    """Extremal factorization data for one input T.

    X        extremal positive contraction
    Y_max    2X - I, the largest admissible selfadjoint contraction
    Y_min    smallest admissible one, -(2 ando_X(T*) - I)
    Z        contraction with T = (I+Y_max)^{1/2} Z (I-Y_max)^{1/2},
             supported on range(I-X) -> range(X)
    C        Z (I-X)^{1/2}, realizing T = 2 (I - C*C)^{1/2} C
    """

    X: np.ndarray
    Y_max: np.ndarray
    Y_min: np.ndarray
    Z: np.ndarray
    C: np.ndarray
    iterations: int
    residuals: dict


def ando_decompose(T, tol=None):
    t = _tol(tol)
    A = require_square(T, "ando_decompose")
    n = A.shape[0]
    I = np.eye(n, dtype=complex)

    X, iters = ando_X(A, t)
    Xstar, iters2 = ando_X(dagger(A), t)
    Y_max = 2.0 * X - I
    Y_min = -(2.0 * Xstar - I)

    sq_x_inv = pinv_sqrt_psd(X, t)
    sq_ix_inv = pinv_sqrt_psd(I - X, t)
    Z = range_projector(X, t) @ (sq_x_inv @ (A / 2.0) @ sq_ix_inv) @ range_projector(I - X, t)
    C = Z @ sqrt_psd(I - X, t)

    rec_y = op_norm(sqrt_psd(I + Y_max, t) @ Z @ sqrt_psd(I - Y_max, t) - A)
    rec_c = op_norm(2.0 * sqrt_psd(I - dagger(C) @ C, t) @ C - A)
    fixres = op_norm(X - herm_part(I - 0.25 * dagger(A) @ pinv(X, t) @ A))
    lmi_min = psd_check(np.block([[I - X, dagger(A) / 2.0], [A / 2.0, X]]), t)[1]
    ymin_gap = float(np.linalg.eigvalsh(Y_max - Y_min)[0])

    # Z is isometric on range(I - Y_max): check on an eigenbasis of that range
    from .linalg import herm_eig
    eig = herm_eig(I - Y_max)
    top = float(np.abs(eig.eigenvalues).max()) if n else 0.0
    iso_defect = 0.0
    IY = I - Y_max
    for kk in range(n):
        if eig.eigenvalues[kk] > t.rank_rel * max(top, np.finfo(float).tiny):
            v = eig.eigenvectors[:, kk]
            lhs = float(np.linalg.norm(Z @ (IY @ v)))
            rhs = float(np.linalg.norm(IY @ v))
            iso_defect = max(iso_defect, abs(lhs - rhs))

    scale = 1.0 + op_norm(A)
    residuals = {
        "reconstruction_ymax": rec_y,
        "reconstruction_c": rec_c,
        "fixed_point": fixres,
        "lmi_min_eig": lmi_min,
        "z_norm_excess": max(0.0, op_norm(Z) - 1.0),
        "z_isometry_defect": iso_defect,
        "ymin_below_ymax": ymin_gap,
    }
    assert rec_y <= 1e-8 * scale, f"factorization residual {rec_y:.3e}"
    assert rec_c <= 1e-8 * scale, f"C-form residual {rec_c:.3e}"
    assert op_norm(Z) <= 1.0 + 1e-8, f"Z norm {op_norm(Z):.12f}"
    assert iso_defect <= 1e-7, f"Z isometry defect {iso_defect:.3e}"
    assert ymin_gap >= -t.psd_eps * scale, f"Y_min above Y_max by {-ymin_gap:.3e}"
    return AndoDecomposition(X=X, Y_max=Y_max, Y_min=Y_min, Z=Z, C=C,
                             iterations=iters + iters2, residuals=residuals)


def radius_lmi(T, tol=None):
    """Radius-at-most-one-half test via the block LMI.

    When w(T) <= 1/2 returns (True, A) with 0 <= A <= I and
    [[A, T*], [T, I-A]] PSD; A is the extremal operator of the adjoint
    problem at doubled scale, A = ando_X((2T)*). Otherwise (False, None).
    """
    t = _tol(tol)
    M = require_square(T, "radius_lmi")
    w = num_radius(M, t)
    if w > 0.5 + t.psd_eps:
        return False, None
    A, _ = ando_X(dagger(2.0 * M), t)
    block = np.block([[A, dagger(M)], [M, np.eye(M.shape[0]) - A]])
    ok, min_eig = psd_check(block, t)
    assert ok, f"radius LMI block not PSD (min eig {min_eig:.3e})"
    return True, A


def ucp_from_e21(T, tol=None):
    """Unital CP map on M_2 sending the lower matrix unit E_21 to T.

    Requires w(T) <= 1/2 (+ tolerance); the Choi matrix of the returned map
    is exactly the verified block [[A, T*], [T, I-A]].
    """
    from .cpmaps import is_cp, map_on_units

    t = _tol(tol)
    M = require_square(T, "ucp_from_e21")
    w = num_radius(M, t)
    if w > 0.5 + 1e-9:
        raise RadiusTooLarge(f"numerical radius {w:.12f} exceeds 1/2")
    ok, A = radius_lmi(M, t)
    if not ok:
        raise RadiusTooLarge("radius LMI infeasible")
    I = np.eye(M.shape[0], dtype=complex)
    phi = map_on_units(2, M.shape[0], [[A, dagger(M)], [M, I - A]])
    cp_ok, min_eig = is_cp(phi, t)
    assert cp_ok, f"witness map not CP (min eig {min_eig:.3e})"
    return phi
