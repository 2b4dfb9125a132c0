"""Dense symmetric linear algebra plus a CG path for large sparse systems.

``eigh`` runs cyclic Jacobi rotations on small matrices and hands larger
ones to LAPACK; ``solve_spd`` factors densely by Cholesky and switches to
diagonally preconditioned conjugate gradients above ``DENSE_LIMIT``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import ConvergenceError, DomainError, NotSPDError

DENSE_LIMIT = 3000
JACOBI_LIMIT = 48
CG_TOL = 1e-12


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray

    def __len__(self):
        return len(self.values)


def symmetrize(a) -> np.ndarray:
    """Dense copy of ``a`` built from its upper triangle only."""
    a = a.toarray() if sp.issparse(a) else np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    u = np.triu(a)
    return u + np.triu(a, 1).T


def solve_spd(a, rhs) -> np.ndarray:
    """Solve ``a x = rhs`` for symmetric positive definite ``a``.

    ``rhs`` may hold several columns.  Dense Cholesky up to
    ``DENSE_LIMIT`` unknowns, conjugate gradients beyond.
    """
    rhs = np.asarray(rhs, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or rhs.shape[0] != n:
        raise DomainError(f"dimension mismatch: matrix {a.shape}, rhs {rhs.shape}")
    if n == 0:
        return np.zeros_like(rhs)
    if n > DENSE_LIMIT:
        a = sp.csr_matrix(a)
        if rhs.ndim == 1:
            return conjugate_gradient(a, rhs)
        return np.column_stack([conjugate_gradient(a, rhs[:, j]) for j in range(rhs.shape[1])])
    dense = symmetrize(a)
    try:
        factor = sla.cho_factor(dense, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NotSPDError(f"matrix is not positive definite ({exc})") from None
    return sla.cho_solve(factor, rhs)


def conjugate_gradient(a, b, tol: float = CG_TOL, maxiter: int | None = None, x0=None) -> np.ndarray:
    """Jacobi-preconditioned CG; stops when ``|r| <= tol |b|``."""
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros(n)
    diag = a.diagonal()
    if np.any(diag <= 0):
        raise NotSPDError("nonpositive diagonal entry in CG system")
    inv_diag = 1.0 / diag
    maxiter = maxiter or max(10 * n, 1000)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    r = b - a @ x
    z = inv_diag * r
    p = z.copy()
    rz = r @ z
    for _ in range(maxiter):
        if np.linalg.norm(r) <= tol * bnorm:
            return x
        ap = a @ p
        pap = p @ ap
        if pap <= 0:
            raise NotSPDError("CG met a direction of nonpositive curvature")
        alpha = rz / pap
        x += alpha * p
        r -= alpha * ap
        z = inv_diag * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    res = np.linalg.norm(b - a @ x) / bnorm
    if res <= tol:
        return x
    raise ConvergenceError(f"CG did not converge in {maxiter} iterations", residual=res)


def _off_norm(a: np.ndarray) -> float:
    # direct sum; subtracting the diagonal from the full norm cancels badly
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 100) -> EigenResult:
    """Cyclic Jacobi eigendecomposition of a dense symmetric matrix."""
    a = symmetrize(a)
    n = a.shape[0]
    v = np.eye(n)
    fro = np.linalg.norm(a)
    if n <= 1 or fro == 0.0:
        return _sorted(np.diag(a).copy(), v)
    target = tol * fro
    tiny = 1e-30 * fro
    for _ in range(max_sweeps):
        off = _off_norm(a)
        if off <= target:
            return _sorted(np.diag(a).copy(), v)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tiny:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    off = _off_norm(a)
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", residual=off / fro)


def _sorted(values, vectors) -> EigenResult:
    order = np.argsort(values, kind="stable")
    return EigenResult(values[order], vectors[:, order])


def eigh(a, method: str = "auto") -> EigenResult:
    """Eigenvalues (ascending) and orthonormal eigenvectors of symmetric ``a``."""
    a = symmetrize(a)
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_LIMIT else "lapack"
    if method == "jacobi":
        return jacobi_eigh(a)
    if method == "lapack":
        w, v = np.linalg.eigh(a)
        return _sorted(w, v)
    raise DomainError(f"unknown eigensolver {method!r}")


def eigh_generalized(a, m, method: str = "auto") -> EigenResult:
    """Pencil ``a v = lam diag(m) v``; eigenvectors are ``diag(m)``-orthonormal."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 1 or m.shape[0] != a.shape[0]:
        raise DomainError("mass must be a vector matching the matrix order")
    if np.any(~(m > 0)):
        raise DomainError("mass entries must be positive")
    s = 1.0 / np.sqrt(m)
    a = symmetrize(a)
    res = eigh(s[:, None] * a * s[None, :], method=method)
    return EigenResult(res.values, s[:, None] * res.vectors)


def eigvalsh_generalized(a, m) -> np.ndarray:
    return eigh_generalized(a, m).values


def batched_min_eigenvalue(mats: np.ndarray, masses: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of each pencil in a stack of equal-sized pencils."""
    s = 1.0 / np.sqrt(masses)
    scaled = s[:, :, None] * mats * s[:, None, :]
    return np.linalg.eigvalsh(scaled)[:, 0]
