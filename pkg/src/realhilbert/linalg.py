"""Dense real linear algebra kernel.

Every operator in the package is a plain ``numpy.ndarray`` of float64.
Symmetric eigenproblems are solved with a cyclic Jacobi method (parallel
round-robin ordering, so each sweep is ``n - 1`` vectorised rotation
rounds); SVD and the matrix exponential/logarithm are delegated to
numpy/scipy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NonFinite, NonSquare, NotSymmetric, TooFarFromIdentity


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds, passed explicitly to every operation."""

    eq_tol: float = 1e-9
    eig_cluster_tol: float = 1e-7
    rank_tol: float = 1e-10

    def __post_init__(self):
        for name in ("eq_tol", "eig_cluster_tol", "rank_tol"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be strictly positive, got {v!r}")


DEFAULT_TOL = Tolerances()


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Convert to a finite 2-d float64 array, raising on NaN/Inf."""
    m = np.asarray(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise NonFinite(f"expected a 2-d matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix contains NaN or Inf entries")
    if square and m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def opnorm(a) -> float:
    """Operator (spectral) norm: the largest singular value."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def is_symmetric(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=float)
    return a.shape[0] == a.shape[1] and opnorm(a - a.T) <= tol.eq_tol * max(1.0, opnorm(a))


def _round_robin(n: int):
    """Yield ``n - 1`` (or ``n``) rounds of disjoint index pairs covering all pairs."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p >= 0 and q >= 0:
                pairs.append((min(p, q), max(p, q)))
        if pairs:
            yield np.array(pairs, dtype=int)
        players = [players[0], players[-1]] + players[1:-1]


def _jacobi(a: np.ndarray, max_sweeps: int = 60):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    if n < 2:
        return np.diag(a).copy(), v
    rounds = list(_round_robin(n))
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-16 * scale:
            break
        for pairs in rounds:
            p, q = pairs[:, 0], pairs[:, 1]
            apq = a[p, q]
            active = np.abs(apq) > 1e-20 * scale
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            big = np.abs(theta) > 1e100
            th = np.where(big, 1.0, theta)
            t = np.sign(th) / (np.abs(th) + np.sqrt(th * th + 1.0))
            t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A <- R^T A R with R[p,p]=R[q,q]=c, R[p,q]=s, R[q,p]=-s
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
    return np.diag(a).copy(), v


def sym_eig(a, tol: Tolerances = DEFAULT_TOL):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with ``w`` ascending and ``a = v @ diag(w) @ v.T``.
    """
    a = as_matrix(a, square=True)
    if opnorm(a - a.T) > tol.eq_tol * max(1.0, opnorm(a)):
        raise NotSymmetric("sym_eig requires a symmetric matrix")
    w, v = _jacobi(0.5 * (a + a.T))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def svd(a):
    """Thin SVD via LAPACK: ``a = u @ diag(s) @ v.T``, ``s`` descending."""
    a = as_matrix(a)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return u, s, vt.T


def rank(a, tol: Tolerances = DEFAULT_TOL) -> int:
    a = as_matrix(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rank_tol * s[0]))


def nullspace(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of ``a``.

    Singular values at or below ``rank_tol * sigma_max`` count as zero.
    """
    a = as_matrix(a)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols)
    _, s, vt = np.linalg.svd(a, full_matrices=a.shape[0] < cols)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol.rank_tol * smax)) if smax > 0 else 0
    return vt[r:].T.copy()


def range_projector(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the column space of ``a``."""
    a = as_matrix(a)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], a.shape[0]))
    r = int(np.sum(s > tol.rank_tol * s[0]))
    return u[:, :r] @ u[:, :r].T


def expm(a) -> np.ndarray:
    """Matrix exponential (scaling and squaring with Pade approximants)."""
    a = as_matrix(a, square=True)
    return np.asarray(scipy.linalg.expm(a), dtype=float)


def logm_near_identity(u) -> np.ndarray:
    """Principal logarithm of ``u``, defined only for ``||u - I|| < 1``."""
    u = as_matrix(u, square=True)
    n = u.shape[0]
    dist = opnorm(u - np.eye(n))
    if dist >= 1.0:
        raise TooFarFromIdentity(f"||u - I|| = {dist:.3g} >= 1")
    if dist == 0.0:
        return np.zeros((n, n))
    out = scipy.linalg.logm(u)
    return np.real(np.asarray(out))
