"""Linear maps between matrix algebras, Choi matrices, Kraus and Stinespring
forms, and a PSD-affine feasibility solver.

Conventions (frozen by round-trip tests):

* A map phi: M_n -> M_m is stored by its values on matrix units,
  ``values[i][j] = phi(E_{i+1,j+1})`` (0-based storage of 1-based units).
* The Choi matrix is the nm x nm block matrix whose (i, j) block of size
  m x m equals phi(E_ij).
* A Choi eigenvector v reshapes to an m x n Kraus operator K via
  ``v[i*m + a] = K[a, i]`` (blocks of length m indexed by the domain
  index i), and the map acts as ``phi(X) = sum_k K_k X K_k*``.
* Stinespring: V: C^m -> C^n (x) C^r with row order (i, k) -> i*r + k,
  so that ``V*(X (x) I_r)V = phi(X)`` and V*V = I_m for unital maps.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentAffine,
    NotCP,
    NotPartitionOfIdentity,
    NotPSD,
    NotUnital,
    ShapeMismatch,
)
from .linalg import (
    _tol,
    as_cmat,
    dagger,
    herm_eig,
    herm_part,
    op_norm,
    psd_check,
)


@dataclass(frozen=True)
class MapOnUnits:
    """A linear map M_n -> M_m given by its values on matrix units."""

    n: int
    m: int
    values: tuple  # values[i][j] = phi(E_{i+1,j+1}), each m x m

    def __post_init__(self):
        if len(self.values) != self.n:
            raise ShapeMismatch("values must be an n x n array of blocks")
        for row in self.values:
            if len(row) != self.n:
                raise ShapeMismatch("values must be an n x n array of blocks")
            for blk in row:
                if as_cmat(blk).shape != (self.m, self.m):
                    raise ShapeMismatch("each value block must be m x m")

    def value(self, i, j):
        """phi(E_ij), 1-based indices."""
        return np.asarray(self.values[i - 1][j - 1], dtype=complex)

    def is_selfadjoint_compatible(self, atol=1e-10):
        for i in range(self.n):
            for j in range(self.n):
                if op_norm(np.asarray(self.values[j][i]) -
                           dagger(np.asarray(self.values[i][j]))) > atol:
                    return False
        return True

    def unital_defect(self):
        s = sum(np.asarray(self.values[i][i], dtype=complex) for i in range(self.n))
        return op_norm(s - np.eye(self.m))


def map_on_units(n, m, values):
    return MapOnUnits(n=n, m=m,
                      values=tuple(tuple(as_cmat(B) for B in row) for row in values))


def identity_map(n):
    vals = [[np.zeros((n, n), dtype=complex) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            vals[i][j][i, j] = 1.0
    return map_on_units(n, n, vals)


def transpose_map(n):
    vals = [[np.zeros((n, n), dtype=complex) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            vals[i][j][j, i] = 1.0
    return map_on_units(n, n, vals)


@dataclass(frozen=True)
class ChoiMat:
    """Block matrix [phi(E_ij)]_{ij} of a map M_n -> M_m."""

    n: int
    m: int
    block: np.ndarray  # nm x nm

    def block_at(self, i, j):
        m = self.m
        return self.block[(i - 1) * m:i * m, (j - 1) * m:j * m]


def choi(phi):
    """Assemble the Choi matrix of a MapOnUnits."""
    n, m = phi.n, phi.m
    C = np.zeros((n * m, n * m), dtype=complex)
    for i in range(n):
        for j in range(n):
            C[i * m:(i + 1) * m, j * m:(j + 1) * m] = np.asarray(phi.values[i][j])
    return ChoiMat(n=n, m=m, block=C)


def map_from_choi(C):
    vals = [[C.block[i * C.m:(i + 1) * C.m, j * C.m:(j + 1) * C.m]
             for j in range(C.n)] for i in range(C.n)]
    return map_on_units(C.n, C.m, vals)


def is_cp(phi, tol=None):
    """Choi criterion: the map is completely positive iff its Choi block is PSD."""
    return psd_check(choi(phi).block, tol)


def apply_map(phi, X):
    """Linear extension over matrix units: phi(X) = sum_ij X_ij phi(E_ij)."""
    A = as_cmat(X)
    if A.shape != (phi.n, phi.n):
        raise ShapeMismatch(f"argument must be {phi.n} x {phi.n}, got {A.shape}")
    out = np.zeros((phi.m, phi.m), dtype=complex)
    for i in range(phi.n):
        for j in range(phi.n):
            out += A[i, j] * np.asarray(phi.values[i][j])
    return out


def amplify(phi, k, A):
    """Apply phi blockwise to a k x k block matrix over M_n."""
    M = as_cmat(A)
    if M.shape != (k * phi.n, k * phi.n):
        raise ShapeMismatch(f"amplification argument must be {k * phi.n} square")
    out = np.zeros((k * phi.m, k * phi.m), dtype=complex)
    n, m = phi.n, phi.m
    for s in range(k):
        for t in range(k):
            out[s * m:(s + 1) * m, t * m:(t + 1) * m] = \
                apply_map(phi, M[s * n:(s + 1) * n, t * n:(t + 1) * n])
    return out


@dataclass(frozen=True)
class KrausSet:
    operators: tuple  # m x n each; phi(X) = sum_k K X K*

    def reconstruct(self, n, m):
        vals = [[sum(K[:, i][:, None] * np.conj(K[:, j])[None, :]
                     for K in self.operators)
                 if self.operators else np.zeros((m, m), dtype=complex)
                 for j in range(n)] for i in range(n)]
        return map_on_units(n, m, vals)


def kraus_from_choi(C, tol=None, psd_slack=None):
    """Kraus operators from the spectral decomposition of the Choi block.

    ``psd_slack`` widens the PSD acceptance (used for solver output whose
    minimum eigenvalue may sit slightly below -psd_eps); negative
    eigenvalues within the slack are clipped to zero.
    """
    t = _tol(tol)
    eig = herm_eig(C.block)
    w = eig.eigenvalues
    scale = 1.0 + (float(np.abs(w).max()) if w.size else 0.0)
    slack = t.psd_eps if psd_slack is None else psd_slack
    if w.size and w[0] < -slack * scale:
        raise NotPSD(f"Choi min eigenvalue {w[0]:.3e} below tolerance")
    top = float(w.max()) if w.size else 0.0
    ops = []
    for k in range(w.size):
        if w[k] > t.rank_rel * max(top, np.finfo(float).tiny) and w[k] > 0:
            v = eig.eigenvectors[:, k] * np.sqrt(w[k])
            ops.append(v.reshape(C.n, C.m).T.copy())
    return KrausSet(operators=tuple(ops))


@dataclass(frozen=True)
class StinespringForm:
    V: np.ndarray  # (n r) x m isometry
    r: int


def stinespring(phi, tol=None, psd_slack=None):
    """Stinespring form V*(X (x) I_r)V = phi(X) of a unital CP map.

    V is stacked from the Kraus operators and then polar-corrected so the
    isometry identity holds to machine precision.
    """
    t = _tol(tol)
    okcp, min_eig = is_cp(phi, t)
    slack = t.psd_eps if psd_slack is None else psd_slack
    scale = 1.0 + op_norm(choi(phi).block)
    if not okcp and min_eig < -slack * scale:
        raise NotCP(f"Choi min eigenvalue {min_eig:.3e}")
    if phi.unital_defect() > 1e-6:
        raise NotUnital(f"unital defect {phi.unital_defect():.3e}")
    ks = kraus_from_choi(choi(phi), t, psd_slack=slack)
    r = max(len(ks.operators), 1)
    n, m = phi.n, phi.m
    V = np.zeros((n * r, m), dtype=complex)
    for k, K in enumerate(ks.operators):
        for i in range(n):
            V[i * r + k, :] = np.conj(K[:, i])
    # polar correction: V <- V (V*V)^{-1/2}
    G = dagger(V) @ V
    w, Q = np.linalg.eigh(herm_part(G))
    w = np.clip(w, np.finfo(float).tiny, None)
    V = V @ ((Q * (1.0 / np.sqrt(w))) @ dagger(Q))
    return StinespringForm(V=V, r=r)


def cstar_convex(Xs, As, atol=1e-9):
    """C*-convex combination sum_k A_k* X_k A_k for a partition of identity."""
    if len(Xs) != len(As) or not As:
        raise ShapeMismatch("need equally many operators and coefficients")
    As = [as_cmat(A) for A in As]
    Xs = [as_cmat(X) for X in Xs]
    m = As[0].shape[1]
    total = sum(dagger(A) @ A for A in As)
    if op_norm(total - np.eye(m)) > atol:
        raise NotPartitionOfIdentity(
            f"sum A_k* A_k differs from identity by {op_norm(total - np.eye(m)):.3e}")
    return sum(dagger(A) @ X @ A for A, X in zip(As, Xs))


# ---------------------------------------------------------------------------
# PSD-affine feasibility via alternating projections with Dykstra correction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineConstraint:
    """sum over (row, col, coeff) of coeff * M[row, col] == target."""

    coeffs: tuple  # ((row, col, complex coeff), ...)
    target: complex


@dataclass(frozen=True)
class FeasibilityProblem:
    """Find a Hermitian matrix that is PSD (blockwise on ``psd_blocks``)
    and satisfies all affine constraints.

    ``certificate`` is an optional caller-supplied proof of infeasibility;
    when present the solver reports Infeasible without iterating.
    """

    size: int
    constraints: tuple
    psd_blocks: tuple = ()  # diagonal block sizes; () means one full block
    certificate: str = ""

    def blocks(self):
        if not self.psd_blocks:
            return ((0, self.size),)
        spans = []
        start = 0
        for b in self.psd_blocks:
            spans.append((start, start + b))
            start += b
        if start != self.size:
            raise ShapeMismatch("psd_blocks must partition the matrix size")
        return tuple(spans)


@dataclass(frozen=True)
class Feasible:
    matrix: np.ndarray
    residual: float


@dataclass(frozen=True)
class Undetermined:
    residual: float


@dataclass(frozen=True)
class Infeasible:
    certificate: str


class _HermBasis:
    """Real coordinates for Hermitian matrices of a fixed size:
    diagonal (real), then upper-triangle real parts, then imaginary parts."""

    def __init__(self, size):
        self.size = size
        rows, cols = np.triu_indices(size, k=1)
        self.rows, self.cols = rows, cols
        self.pairs = list(zip(rows.tolist(), cols.tolist()))
        self.re_index = {rc: size + k for k, rc in enumerate(self.pairs)}
        self.im_index = {rc: size + len(self.pairs) + k
                         for k, rc in enumerate(self.pairs)}
        self.dim = size * size

    def to_vec(self, M):
        upper = M[self.rows, self.cols]
        return np.concatenate([np.real(np.diagonal(M)), upper.real, upper.imag])

    def to_mat(self, x):
        n = self.size
        k = self.rows.size
        M = np.zeros((n, n), dtype=complex)
        M[np.arange(n), np.arange(n)] = x[:n]
        upper = x[n:n + k] + 1j * x[n + k:]
        M[self.rows, self.cols] = upper
        M[self.cols, self.rows] = np.conj(upper)
        return M

    def entry_rows(self, r, c, coeff):
        """Real-linear rows of coeff * M[r, c] as (re_part, im_part) each a
        list of (vec_index, weight)."""
        a, b = coeff.real, coeff.imag
        if r == c:
            # M[r,r] real: coeff * x  ->  re = a x, im = b x
            return [(r, a)], [(r, b)]
        if r < c:
            ire, iim = self.re_index[(r, c)], self.im_index[(r, c)]
            sgn = 1.0
        else:
            ire, iim = self.re_index[(c, r)], self.im_index[(c, r)]
            sgn = -1.0
        # M[r,c] = u + i s v  (s = sgn); coeff*(u + i s v)
        re = [(ire, a), (iim, -b * sgn)]
        im = [(ire, b), (iim, a * sgn)]
        return re, im


def _psd_project(M):
    w, V = np.linalg.eigh(herm_part(M))
    w = np.clip(w, 0.0, None)
    return (V * w) @ dagger(V)


def solve_feasibility(problem, tol=None, max_iter=20000, start=None, target=None):
    """Dykstra-corrected alternating projections between the (blockwise) PSD
    cone and the affine subspace.

    Returns Feasible when the joint residual drops below feas_eps (the matrix
    reported satisfies the affine constraints essentially exactly and is PSD
    within feas_eps), Undetermined after max_iter otherwise, and Infeasible
    only when the problem carries a caller-supplied analytic certificate.
    Raises InconsistentAffine when the affine system alone has no solution.

    ``target`` sets the residual at which iteration stops early; by default
    it sits a decade below feas_eps so downstream spectral clipping stays
    inside verification tolerances. Callers that only need the feas_eps
    contract (membership witnesses, moment weights) pass a looser value.
    """
    t = _tol(tol)
    if problem.certificate:
        return Infeasible(certificate=problem.certificate)

    basis = _HermBasis(problem.size)
    rows = []
    rhs = []
    for con in problem.constraints:
        re_row = np.zeros(basis.dim)
        im_row = np.zeros(basis.dim)
        for (r, c, coeff) in con.coeffs:
            re_part, im_part = basis.entry_rows(r, c, complex(coeff))
            for idx, wgt in re_part:
                re_row[idx] += wgt
            for idx, wgt in im_part:
                im_row[idx] += wgt
        rows.extend([re_row, im_row])
        rhs.extend([complex(con.target).real, complex(con.target).imag])
    L = np.array(rows) if rows else np.zeros((0, basis.dim))
    b = np.array(rhs)

    if L.shape[0]:
        x_ls, *_ = np.linalg.lstsq(L, b, rcond=None)
        ls_res = float(np.linalg.norm(L @ x_ls - b))
        if ls_res > 1e-8 * (1.0 + float(np.linalg.norm(b))):
            raise InconsistentAffine(f"affine system unsolvable, residual {ls_res:.3e}")
        Lp = np.linalg.pinv(L, rcond=1e-12)
    else:
        x_ls = np.zeros(basis.dim)
        Lp = None

    def proj_affine(x):
        if Lp is None:
            return x
        return x - Lp @ (L @ x - b)

    def affine_res(x):
        if L.shape[0] == 0:
            return 0.0
        return float(np.max(np.abs(L @ x - b)))

    spans = problem.blocks()

    def psd_res(M):
        worst = 0.0
        for (s, e) in spans:
            w = np.linalg.eigvalsh(herm_part(M[s:e, s:e]))
            if w.size and w[0] < -worst:
                worst = -float(w[0])
        return worst

    if start is not None:
        x = basis.to_vec(as_cmat(start))
    else:
        x = proj_affine(x_ls)
    p = np.zeros(basis.dim)

    if target is None:
        target = t.feas_eps / 20.0
    best = None
    for it in range(max_iter):
        y = basis.to_mat(x + p)
        Ypsd = np.zeros_like(y)
        for (s, e) in spans:
            Ypsd[s:e, s:e] = _psd_project(y[s:e, s:e])
        ypsd = basis.to_vec(Ypsd)
        p = (x + p) - ypsd
        x = proj_affine(ypsd)
        if it % 8 == 0 or it == max_iter - 1:
            M = basis.to_mat(x)
            res = max(affine_res(x), psd_res(M))
            if best is None or res < best[0]:
                best = (res, M)
            if res <= target:
                return Feasible(matrix=M, residual=res)
    if best is not None and best[0] <= t.feas_eps:
        return Feasible(matrix=best[1], residual=best[0])
    return Undetermined(residual=best[0] if best else np.inf)


# -- helpers to phrase map-construction problems -----------------------------

def unital_constraints(n, m):
    """Affine rows pinning sum_i phi(E_ii) = I_m on an nm x nm Choi block."""
    cons = []
    for a in range(m):
        for bcol in range(m):
            coeffs = tuple((i * m + a, i * m + bcol, 1.0 + 0j) for i in range(n))
            cons.append(AffineConstraint(coeffs=coeffs,
                                         target=1.0 + 0j if a == bcol else 0.0 + 0j))
    return cons


def value_constraints(n, m, X, target):
    """Affine rows pinning phi(X) = target entrywise, for X in M_n."""
    X = as_cmat(X)
    tgt = as_cmat(target)
    cons = []
    for a in range(m):
        for bcol in range(m):
            coeffs = []
            for i in range(n):
                for j in range(n):
                    if X[i, j] != 0:
                        coeffs.append((i * m + a, j * m + bcol, complex(X[i, j])))
            cons.append(AffineConstraint(coeffs=tuple(coeffs),
                                         target=complex(tgt[a, bcol])))
    return cons


def solve_map_problem(n, m, value_pairs, tol=None, max_iter=20000,
                      unital=True, certificate=""):
    """Feasibility for a (unital) CP map M_n -> M_m with prescribed values.

    ``value_pairs`` is an iterable of (X, target) pairs meaning
    phi(X) = target. Returns the FeasibilityOutcome; on Feasible the matrix
    is the Choi block.
    """
    cons = []
    if unital:
        cons.extend(unital_constraints(n, m))
    for X, target in value_pairs:
        cons.extend(value_constraints(n, m, X, target))
    problem = FeasibilityProblem(size=n * m, constraints=tuple(cons),
                                 certificate=certificate)
    return solve_feasibility(problem, tol, max_iter=max_iter)
