"""Spectral calculus for real symmetric matrices, polar decomposition and
one-parameter orthogonal groups.

In finite dimension every spectrum is a finite point spectrum, so a PVM is a
finite list of (eigenvalue, eigenprojector) pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DimensionMismatch,
    FunctionUndefinedAtEigenvalue,
    NonSquare,
    NotPositive,
    NotSymmetric,
    NotUnitaryAtSample,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    commutator,
    expm,
    logm_near_identity,
    opnorm,
    sym_eig,
)


@dataclass(frozen=True, eq=False)
class Pvm:
    """Eigenvalues (strictly increasing) with their orthogonal eigenprojectors."""

    blocks: tuple[tuple[float, np.ndarray], ...]
    dim: int

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.blocks])

    @property
    def projectors(self) -> list[np.ndarray]:
        return [p for _, p in self.blocks]

    @property
    def ranks(self) -> list[int]:
        return [int(round(np.trace(p))) for _, p in self.blocks]


@dataclass(frozen=True, eq=False)
class PolarDecomposition:
    u: np.ndarray
    p: np.ndarray
    kernel_dim: int


def _require_symmetric(a, tol: Tolerances) -> np.ndarray:
    a = as_matrix(a, square=True)
    if opnorm(a - a.T) > tol.eq_tol * max(1.0, opnorm(a)):
        raise NotSymmetric("operator is not symmetric")
    return 0.5 * (a + a.T)


def _cluster(w: np.ndarray, tol: Tolerances, scale: float) -> list[list[int]]:
    groups: list[list[int]] = []
    thresh = tol.eig_cluster_tol * max(1.0, scale)
    for i, lam in enumerate(w):
        if groups and lam - w[groups[-1][-1]] <= thresh:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def pvm_of(a, tol: Tolerances = DEFAULT_TOL) -> Pvm:
    """Spectral measure of a symmetric matrix, with near-degenerate eigenvalues merged."""
    a = _require_symmetric(a, tol)
    w, v = sym_eig(a, tol)
    blocks = []
    for idx in _cluster(w, tol, float(np.max(np.abs(w))) if w.size else 0.0):
        vecs = v[:, idx]
        blocks.append((float(np.mean(w[idx])), vecs @ vecs.T))
    return Pvm(tuple(blocks), a.shape[0])


def apply_function(pvm: Pvm, f: Callable[[float], float]) -> np.ndarray:
    """``f(A) = sum_i f(lambda_i) P_i``."""
    out = np.zeros((pvm.dim, pvm.dim))
    for lam, proj in pvm.blocks:
        val = f(lam)
        if val is None or not np.isfinite(val):
            raise FunctionUndefinedAtEigenvalue(f"f is not finite at eigenvalue {lam!r}")
        out += float(val) * proj
    return out


def is_positive(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = _require_symmetric(a, tol)
    w, _ = sym_eig(a, tol)
    return bool(w.size == 0 or w[0] >= -tol.eq_tol * max(1.0, opnorm(a)))


def sqrt_psd(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unique positive square root; eigenvalues within tolerance of 0 are clamped."""
    a = _require_symmetric(a, tol)
    w, v = sym_eig(a, tol)
    if w.size and w[0] < -tol.eq_tol * max(1.0, opnorm(a)):
        raise NotPositive(f"minimum eigenvalue {w[0]:.3g} is negative")
    root = v @ np.diag(np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return 0.5 * (root + root.T)


def polar(a, tol: Tolerances = DEFAULT_TOL) -> PolarDecomposition:
    """Polar decomposition ``a = u p`` with ``p = |a|`` and ``u`` a partial isometry.

    ``u`` vanishes on ``Ker(p)``.  Built from the SVD ``a = W S V^T``:
    ``p = V S V^T`` and ``u = W_r V_r^T`` over the singular values above
    ``rank_tol * sigma_max``.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"polar needs a square matrix, got shape {a.shape}")
    a = as_matrix(a)
    n = a.shape[0]
    w, s, vt = np.linalg.svd(a)
    r = int(np.sum(s > tol.rank_tol * s[0])) if s.size and s[0] > 0 else 0
    p = vt.T @ np.diag(s) @ vt
    p = 0.5 * (p + p.T)
    u = w[:, :r] @ vt[:r]
    return PolarDecomposition(u=u, p=p, kernel_dim=n - r)


@dataclass(frozen=True, eq=False)
class StoneGenerator:
    generator: np.ndarray
    symmetric_residual: float


def stone_generator(group: Callable[[float], np.ndarray], h: float = 1e-2,
                    tol: Tolerances = DEFAULT_TOL) -> StoneGenerator:
    """Recover the anti-symmetric generator ``A`` of ``t -> exp(tA)`` from one sample.

    ``A = log(U(h)) / h``.  The anti-symmetric part is returned; the norm of
    the discarded symmetric part is reported.
    """
    if h <= 0:
        raise ValueError("sample step h must be positive")
    u0 = as_matrix(group(0.0), square=True)
    n = u0.shape[0]
    if opnorm(u0 - np.eye(n)) > tol.eq_tol:
        raise NotUnitaryAtSample("group(0) is not the identity")
    uh = as_matrix(group(h), square=True)
    if uh.shape != u0.shape:
        raise DimensionMismatch("group samples change dimension")
    if opnorm(uh.T @ uh - np.eye(n)) > tol.eq_tol:
        raise NotUnitaryAtSample(f"group({h}) is not orthogonal")
    gen = logm_near_identity(uh) / h
    sym = 0.5 * (gen + gen.T)
    residual = opnorm(sym)
    if residual > 10 * tol.eq_tol:
        raise NotUnitaryAtSample(f"generator has symmetric part of norm {residual:.3g}")
    return StoneGenerator(0.5 * (gen - gen.T), residual)


PROPAGATION_TIMES = (0.3, 1.0, 2.0)


def commutation_propagation_check(a, b, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Commutator norms of ``b`` against ``a``, ``exp(ta)`` and the polar factors of ``a``.

    If ``b`` commutes with the anti-symmetric ``a`` it must also commute with
    the group it generates and with both polar factors; ``contract_holds``
    records whether that implication is observed numerically.
    """
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    if a.shape != b.shape:
        raise DimensionMismatch("a and b have different shapes")
    pd = polar(a, tol)
    residuals = {"[b,a]": opnorm(commutator(b, a))}
    for t in PROPAGATION_TIMES:
        residuals[f"[b,exp({t:g}a)]"] = opnorm(commutator(b, expm(t * a)))
    residuals["[b,u]"] = opnorm(commutator(b, pd.u))
    residuals["[b,p]"] = opnorm(commutator(b, pd.p))
    commutes = residuals["[b,a]"] <= tol.eq_tol
    contract = (not commutes) or all(v <= 100 * tol.eq_tol for v in residuals.values())
    return {
        "residuals": residuals,
        "commutes": commutes,
        "non_commuting": not commutes,
        "contract_holds": contract,
    }
