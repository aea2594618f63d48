"""Finite-dimensional real von Neumann algebras.

An algebra is held as a Frobenius-orthonormal basis of matrices together
with a ``*``-closed generating set.  In finite dimension every unital
``*``-algebra is weakly closed, so "von Neumann algebra generated by M" is
just the span of words in ``M`` and ``M^T``, and ``A == A''``.

Commutants are nullspaces of the stacked Sylvester maps ``X -> X G - G X``.
For ``n > DIRECT_LIMIT`` the unknowns are first restricted to matrices that
are block-diagonal in the eigenbasis of a random symmetric element of the
algebra (every commutant element preserves its eigenspaces), which keeps the
linear system small without changing its solution set.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    NotComplexLinear,
    NotIrreducible,
    NumericalInconsistency,
    UnexpectedCommutantDim,
)
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, opnorm, sym_eig
from .spectral import polar, pvm_of
from .structures import ComplexStructure

DIRECT_LIMIT = 12
_REDUCTION_SEED = 20240917


@dataclass(frozen=True, eq=False)
class OperatorAlgebra:
    """Real unital ``*``-algebra of ``n x n`` matrices.

    ``basis`` has shape ``(d, n, n)`` and is orthonormal for
    ``<X, Y> = tr(X^T Y)``.  ``generators`` is a ``*``-closed set whose
    commutant equals the commutant of the whole algebra.
    """

    basis: np.ndarray
    generators: np.ndarray = field(default=None)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 3 or b.shape[1] != b.shape[2]:
            raise DimensionMismatch(f"basis must have shape (d, n, n), got {b.shape}")
        object.__setattr__(self, "basis", b)
        g = b if self.generators is None else np.asarray(self.generators, dtype=float)
        object.__setattr__(self, "generators", g.reshape(-1, b.shape[1], b.shape[1]))

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _flat(self) -> np.ndarray:
        return self.basis.reshape(self.dim, -1)

    def project(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        q = self._flat()
        return (q.T @ (q @ x)).reshape(self.n, self.n)

    def contains(self, x, tol: Tolerances = DEFAULT_TOL) -> bool:
        x = as_matrix(x, square=True)
        if x.shape[0] != self.n:
            raise DimensionMismatch("matrix and algebra dimensions differ")
        return opnorm(x - self.project(x)) <= tol.eq_tol * max(1.0, opnorm(x))

    def symmetric_basis(self) -> np.ndarray:
        return _part_basis(self.basis, sym=True)

    def antisymmetric_basis(self) -> np.ndarray:
        return _part_basis(self.basis, sym=False)


AlgebraLike = Union[OperatorAlgebra, Sequence[np.ndarray], np.ndarray]


def _part_basis(basis: np.ndarray, sym: bool) -> np.ndarray:
    """Orthonormal basis of the symmetric (or anti-symmetric) part of a ``*``-closed span."""
    if basis.shape[0] == 0:
        return basis.copy()
    n = basis.shape[1]
    parts = 0.5 * (basis + basis.transpose(0, 2, 1)) if sym else \
        0.5 * (basis - basis.transpose(0, 2, 1))
    return _orthonormal_span(parts, n)


def _orthonormal_span(mats, n: int, rel: float = 1e-6) -> np.ndarray:
    mats = np.asarray(mats, dtype=float).reshape(-1, n * n)
    if mats.shape[0] == 0:
        return np.zeros((0, n, n))
    _, s, vt = np.linalg.svd(mats, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((0, n, n))
    r = int(np.sum(s > rel * s[0]))
    out = vt[:r]
    # deterministic orientation: first significant entry of each element positive
    for i in range(r):
        k = int(np.argmax(np.abs(out[i]) > 1e-8))
        if out[i, k] < 0:
            out[i] = -out[i]
    return out.reshape(r, n, n)


def _coerce_generators(gens, n: int | None = None) -> tuple[np.ndarray, int]:
    mats = [as_matrix(g, square=True) for g in gens]
    if mats:
        dims = {m.shape[0] for m in mats}
        if len(dims) != 1:
            raise DimensionMismatch(f"generators of different sizes: {sorted(dims)}")
        d = dims.pop()
        if n is not None and n != d:
            raise DimensionMismatch(f"generators are {d}x{d}, expected {n}x{n}")
        n = d
    if n is None:
        raise DimensionMismatch("cannot infer the dimension of an empty generator list")
    return np.array(mats).reshape(-1, n, n), n


def _star_close(gens: np.ndarray) -> np.ndarray:
    """Append the transposes of the non-symmetric generators."""
    extra = [g.T for g in gens if np.max(np.abs(g - g.T), initial=0.0) > 0
             and np.max(np.abs(g + g.T), initial=0.0) > 0]
    if not extra:
        return gens
    return np.concatenate([gens, np.array(extra)])


def generate_algebra(gens, n: int | None = None, tol: Tolerances = DEFAULT_TOL) -> OperatorAlgebra:
    """Smallest unital ``*``-algebra containing ``gens`` (span of all words)."""
    g, n = _coerce_generators(gens, n)
    g = _star_close(g)
    rows: list[np.ndarray] = []

    def try_add(x: np.ndarray) -> bool:
        v = x.reshape(-1).copy()
        scale = np.linalg.norm(v)
        if scale == 0.0:
            return False
        if rows:
            q = np.array(rows)
            for _ in range(2):
                v -= q.T @ (q @ v)
        nv = np.linalg.norm(v)
        if nv <= tol.eq_tol * max(1.0, scale):
            return False
        rows.append(v / nv)
        return True

    try_add(np.eye(n))
    frontier = [np.eye(n)]
    for m in g:
        if try_add(m):
            frontier.append(rows[-1].reshape(n, n))
    length = 1
    while frontier and len(rows) < n * n and length <= n * n:
        new = []
        for b in frontier:
            for m in g:
                if try_add(m @ b):
                    new.append(rows[-1].reshape(n, n))
        frontier = new
        length += 1
    basis = np.array(rows).reshape(-1, n, n)
    return OperatorAlgebra(basis=basis, generators=g if g.shape[0] else np.eye(n)[None])


def _sylvester_stack(gens: np.ndarray, n: int) -> np.ndarray:
    # row-major vec: vec(X G) = (I kron G^T) vec X, vec(G X) = (G kron I) vec X
    eye = np.eye(n)
    return np.vstack([np.kron(eye, g.T) - np.kron(g, eye) for g in gens])


def _null_rows(m: np.ndarray, tol: Tolerances, scale: float = 0.0) -> np.ndarray:
    # cutoff relative to the generators' own size as well: a stack built from
    # (numerically) scalar generators is pure rounding noise
    _, s, vt = np.linalg.svd(m, full_matrices=m.shape[0] < m.shape[1])
    smax = max(s[0] if s.size else 0.0, scale)
    r = int(np.sum(s > tol.rank_tol * smax)) if smax > 0 else 0
    return vt[r:]


def _random_symmetric_element(gens: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = gens.shape[1]
    s = np.zeros((n, n))
    for g in gens:
        s += rng.standard_normal() * (g + g.T)
    for a in gens:
        for b in gens:
            ab = a @ b
            s += rng.standard_normal() * (ab + ab.T)
    return 0.5 * (s + s.T)


def _commutant_reduced(gens: np.ndarray, n: int, tol: Tolerances) -> np.ndarray:
    rng = np.random.default_rng(_REDUCTION_SEED)
    s = _random_symmetric_element(gens, rng)
    w, v = sym_eig(s, tol)
    scale = max(1.0, float(np.max(np.abs(w))))
    # merge loosely: merging only enlarges the candidate space
    groups: list[list[int]] = []
    for i, lam in enumerate(w):
        if groups and lam - w[groups[-1][-1]] <= 1e-6 * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    unknowns = [(r, c) for grp in groups for r in grp for c in grp]
    gscale = max(opnorm(g) for g in gens)
    if len(unknowns) == n * n:
        return _null_rows(_sylvester_stack(gens, n), tol, gscale)
    rot = np.array([v.T @ g @ v for g in gens])
    d = len(unknowns)
    m = np.zeros((gens.shape[0], n, n, d))
    for idx, (r, c) in enumerate(unknowns):
        # E_rc G - G E_rc
        m[:, r, :, idx] += rot[:, c, :]
        m[:, :, c, idx] -= rot[:, :, r]
    null = _null_rows(m.reshape(-1, d), tol, gscale)
    out = np.zeros((null.shape[0], n, n))
    rr = np.array([u[0] for u in unknowns])
    cc = np.array([u[1] for u in unknowns])
    for k, y in enumerate(null):
        ym = np.zeros((n, n))
        ym[rr, cc] = y
        out[k] = v @ ym @ v.T
    return out.reshape(-1, n * n)


def commutant(x: AlgebraLike, n: int | None = None, tol: Tolerances = DEFAULT_TOL,
              method: str = "auto") -> OperatorAlgebra:
    """All matrices commuting with every generator (and its transpose).

    ``method`` is ``"direct"`` (full Sylvester system), ``"reduced"``
    (spectral pre-reduction) or ``"auto"``.
    """
    if isinstance(x, OperatorAlgebra):
        gens, n = x.generators, x.n
    else:
        gens, n = _coerce_generators(list(x) if not isinstance(x, np.ndarray) or x.ndim == 3
                                     else [x], n)
        gens = _star_close(gens)
    gens = np.array([g for g in gens if np.max(np.abs(g), initial=0.0) > 0]).reshape(-1, n, n)
    if gens.shape[0] == 0:
        basis = np.eye(n * n).reshape(n * n, n, n)
        return OperatorAlgebra(basis=basis)
    if method == "direct" or (method == "auto" and n <= DIRECT_LIMIT):
        null = _null_rows(_sylvester_stack(gens, n), tol, max(opnorm(g) for g in gens))
    elif method in ("reduced", "auto"):
        null = _commutant_reduced(gens, n, tol)
    else:
        raise ValueError(f"unknown commutant method {method!r}")
    basis = _orthonormal_span(null, n, rel=0.5)
    return OperatorAlgebra(basis=basis)


def double_commutant(x: AlgebraLike, n: int | None = None,
                     tol: Tolerances = DEFAULT_TOL) -> OperatorAlgebra:
    return commutant(commutant(x, n, tol), tol=tol)


def same_span(a: OperatorAlgebra, b: OperatorAlgebra) -> tuple[bool, float]:
    """Dimension equality and the largest principal angle between the two spans."""
    if a.dim != b.dim:
        return False, float(np.pi / 2)
    if a.dim == 0:
        return True, 0.0
    angles = scipy.linalg.subspace_angles(a._flat().T, b._flat().T)
    return True, float(np.max(angles))


def is_irreducible(x: AlgebraLike, n: int | None = None, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Irreducible iff the symmetric part of the commutant is ``R I``."""
    c = commutant(x, n, tol)
    return c.symmetric_basis().shape[0] == 1


class CommutantKind(str, enum.Enum):
    REAL_REAL = "RealReal"
    REAL_COMPLEX = "RealComplex"
    REAL_QUATERNIONIC = "RealQuaternionic"


@dataclass(frozen=True, eq=False)
class CommutantClassification:
    kind: CommutantKind
    commutant_dim: int
    j: ComplexStructure | None = None
    k: ComplexStructure | None = None
    commutant: OperatorAlgebra | None = None
    residuals: dict = field(default_factory=dict)


def pin_sign(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Flip ``m`` so that its first non-negligible entry (row-major) is positive."""
    flat = m.reshape(-1)
    thresh = 1e3 * tol.eq_tol * max(1.0, float(np.max(np.abs(flat), initial=0.0)))
    idx = np.flatnonzero(np.abs(flat) > thresh)
    if idx.size and flat[idx[0]] < 0:
        return -m
    return m


def _ninner(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.trace(x.T @ y)) / x.shape[0]


def _structure_from_antisymmetric(a: np.ndarray, tol: Tolerances) -> np.ndarray | None:
    """``a / sqrt(-c)`` when ``a @ a == c I`` with ``c < 0``; otherwise ``None``."""
    n = a.shape[0]
    sq = a @ a
    c = np.trace(sq) / n
    if c >= 0 or opnorm(sq - c * np.eye(n)) > tol.eq_tol * max(1.0, abs(c)) * 10:
        return None
    return a / np.sqrt(-c)


def _in_algebra(x: np.ndarray, alg: AlgebraLike, comm: OperatorAlgebra,
                tol: Tolerances) -> bool:
    if isinstance(alg, OperatorAlgebra) and alg.dim > comm.dim:
        return alg.contains(x, tol)
    # R = R'': membership is commutation with the commutant
    return all(opnorm(x @ b - b @ x) <= 10 * tol.eq_tol for b in comm.basis)


def classify(x: AlgebraLike, n: int | None = None,
             tol: Tolerances = DEFAULT_TOL) -> CommutantClassification:
    """Real, complex or quaternionic type of an irreducible algebra, with its structures."""
    comm = commutant(x, n, tol)
    if comm.symmetric_basis().shape[0] != 1:
        raise NotIrreducible(
            f"commutant has a {comm.symmetric_basis().shape[0]}-dimensional symmetric part")
    d = comm.dim
    anti = comm.antisymmetric_basis()
    if d == 1:
        return CommutantClassification(CommutantKind.REAL_REAL, 1, commutant=comm)
    if d == 2 and anti.shape[0] == 1:
        j = _structure_from_antisymmetric(anti[0], tol)
        if j is None:
            raise NumericalInconsistency("anti-symmetric commutant element has non-scalar square")
        j = pin_sign(j, tol)
        if not _in_algebra(j, x, comm, tol):
            raise NumericalInconsistency("extracted J does not lie in the algebra")
        js = ComplexStructure(j, tol)
        return CommutantClassification(
            CommutantKind.REAL_COMPLEX, 2, j=js, commutant=comm,
            residuals={"j_square": opnorm(j @ j + np.eye(j.shape[0]))})
    if d == 4 and anti.shape[0] == 3:
        a1, a2, a3 = anti
        e1 = a1 / np.sqrt(_ninner(a1, a1))
        e2 = a2 - _ninner(a2, e1) * e1
        e2 = e2 / np.sqrt(_ninner(e2, e2))
        j, k = pin_sign(e1, tol), pin_sign(e2, tol)
        jk = j @ k
        span_res = opnorm(jk - sum(_ninner(jk, b) / _ninner(b, b) * b for b in anti))
        if span_res > 10 * tol.eq_tol:
            raise NumericalInconsistency("J K is not in the commutant span")
        for name, m in (("J", j), ("K", k), ("JK", jk)):
            if _in_algebra(m, x, comm, tol):
                raise NumericalInconsistency(f"{name} unexpectedly lies in the algebra")
        js, ks = ComplexStructure(j, tol), ComplexStructure(k, tol)
        return CommutantClassification(
            CommutantKind.REAL_QUATERNIONIC, 4, j=js, k=ks, commutant=comm,
            residuals={"anticommutation": opnorm(j @ k + k @ j),
                       "jk_in_span": span_res})
    raise UnexpectedCommutantDim(f"commutant of an irreducible algebra has dimension {d}")


def _as_algebra(x: AlgebraLike, n: int | None, tol: Tolerances) -> OperatorAlgebra:
    if isinstance(x, OperatorAlgebra):
        return x
    gens, n = _coerce_generators(list(x) if not isinstance(x, np.ndarray) or x.ndim == 3
                                 else [x], n)
    return generate_algebra(gens, n, tol)


def _dedupe_append(store: list[np.ndarray], p: np.ndarray, tol: Tolerances):
    for q in store:
        if opnorm(p - q) <= tol.eq_tol:
            return
    store.append(p)


def projector_sublattice(x: AlgebraLike, n: int | None = None, tol: Tolerances = DEFAULT_TOL,
                         seed: int = 0, n_random: int = 8) -> list[np.ndarray]:
    """Orthogonal projectors of the algebra reached by a spectral sweep.

    Spectral projectors (and their complements) of every symmetric basis
    element plus ``n_random`` random symmetric combinations.  Always
    contains ``0`` and ``I``.
    """
    alg = _as_algebra(x, n, tol)
    n = alg.n
    out: list[np.ndarray] = [np.zeros((n, n)), np.eye(n)]
    sym = alg.symmetric_basis()
    rng = np.random.default_rng(seed)
    samples = list(sym)
    if sym.shape[0]:
        for _ in range(n_random):
            samples.append(np.tensordot(rng.standard_normal(sym.shape[0]), sym, axes=1))
    for s in samples:
        for proj in pvm_of(s, tol).projectors:
            for cand in (proj, np.eye(n) - proj):
                if alg.contains(cand, tol):
                    _dedupe_append(out, cand, tol)
    return out


@dataclass(frozen=True, eq=False)
class LatticeGap:
    dim_lattice_dc: int
    dim_alg: int
    witnesses: list = field(default_factory=list)

    @property
    def strict(self) -> bool:
        return self.dim_lattice_dc < self.dim_alg


def lattice_double_commutant_gap(x: AlgebraLike, n: int | None = None,
                                 tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> LatticeGap:
    """Compare the double commutant of the projector lattice with the algebra.

    When the former is strictly smaller, the witnesses are anti-symmetric
    partial isometries ``J`` of the algebra (polar factors of its
    anti-symmetric elements) with ``-J^2`` a projector and ``J`` outside the
    lattice's double commutant.
    """
    alg = _as_algebra(x, n, tol)
    lattice = projector_sublattice(alg, tol=tol, seed=seed)
    dc = double_commutant(np.array(lattice), alg.n, tol)
    witnesses = []
    if dc.dim < alg.dim:
        for a in alg.antisymmetric_basis():
            u = polar(a, tol).u
            u = 0.5 * (u - u.T)
            p = -(u @ u)
            if opnorm(p @ p - p) > 10 * tol.eq_tol or not alg.contains(u, tol):
                continue
            if dc.contains(u, tol):
                continue
            _dedupe_append(witnesses, pin_sign(u, tol), tol)
    return LatticeGap(dc.dim, alg.dim, witnesses)


def is_irreducible_complex(x: AlgebraLike, j: ComplexStructure, n: int | None = None,
                           tol: Tolerances = DEFAULT_TOL) -> bool:
    """Irreducibility over C, i.e. on H_J: only complex-linear commutant elements count."""
    if isinstance(x, OperatorAlgebra):
        gens = x.generators
    else:
        gens, _ = _coerce_generators(list(x) if not isinstance(x, np.ndarray) or x.ndim == 3
                                     else [x], n)
    for g in gens:
        if opnorm(g @ j.j - j.j @ g) > tol.eq_tol * max(1.0, opnorm(g)):
            raise NotComplexLinear("a generator does not commute with J")
    c = commutant(np.concatenate([gens, j.j[None]]), j.dim, tol)
    return c.symmetric_basis().shape[0] == 1
