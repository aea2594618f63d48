"""Orthocomplemented lattice of orthogonal projectors on R^n."""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotAProjector, PrerequisiteOrderFails
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, opnorm, rank, sym_eig


def as_projector(p, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    p = as_matrix(p, square=True)
    if opnorm(p - p.T) > tol.eq_tol or opnorm(p @ p - p) > tol.eq_tol:
        raise NotAProjector("matrix is not a symmetric idempotent")
    return 0.5 * (p + p.T)


def projector_onto(vectors) -> np.ndarray:
    """Projector onto the span of the given column vectors."""
    v = as_matrix(vectors)
    q, r = np.linalg.qr(v)
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, np.max(np.abs(r), initial=0.0))
    q = q[:, keep]
    return q @ q.T


def _pair(p, q, tol):
    p, q = as_projector(p, tol), as_projector(q, tol)
    if p.shape != q.shape:
        raise DimensionMismatch(f"projectors of shapes {p.shape} and {q.shape}")
    return p, q


def orthocomplement(p, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    p = as_projector(p, tol)
    return np.eye(p.shape[0]) - p


def meet(p, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Projector onto ``Ran p  intersect  Ran q``: the eigenvalue-2 eigenspace of ``p + q``."""
    p, q = _pair(p, q, tol)
    w, v = sym_eig(p + q, tol)
    vecs = v[:, np.abs(w - 2.0) <= tol.eig_cluster_tol]
    return vecs @ vecs.T


def join(p, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Projector onto the span of ``Ran p`` and ``Ran q`` (De Morgan dual of :func:`meet`)."""
    p, q = _pair(p, q, tol)
    eye = np.eye(p.shape[0])
    return eye - meet(eye - p, eye - q, tol)


def leq(p, q, tol: Tolerances = DEFAULT_TOL) -> bool:
    p, q = _pair(p, q, tol)
    return opnorm(q @ p - p) <= tol.eq_tol


def commutes(p, q, tol: Tolerances = DEFAULT_TOL) -> bool:
    p, q = _pair(p, q, tol)
    return opnorm(p @ q - q @ p) <= tol.eq_tol


def projector_rank(p, tol: Tolerances = DEFAULT_TOL) -> int:
    return rank(as_projector(p, tol), tol)


def is_atom(p, tol: Tolerances = DEFAULT_TOL) -> bool:
    return projector_rank(p, tol) == 1


def check_orthomodularity(p, q, tol: Tolerances = DEFAULT_TOL) -> float:
    """``||q - (p v (p' ^ q))||`` for ``p <= q``."""
    p, q = _pair(p, q, tol)
    if not leq(p, q, tol):
        raise PrerequisiteOrderFails("orthomodularity is only asserted for p <= q")
    return opnorm(q - join(p, meet(orthocomplement(p, tol), q, tol), tol))


def distributivity_residual(a, b, c, tol: Tolerances = DEFAULT_TOL) -> float:
    """``||a ^ (b v c) - (a ^ b) v (a ^ c)||``; zero on Boolean (commuting) triples."""
    lhs = meet(a, join(b, c, tol), tol)
    rhs = join(meet(a, b, tol), meet(a, c, tol), tol)
    return opnorm(lhs - rhs)
