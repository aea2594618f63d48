"""Poincare Lie algebra data and the extraction of an invariant complex
structure from the polar decomposition of the time-translation generator.

Generators are real anti-symmetric matrices labelled ``p0..p3`` (space-time
translations), ``l1..l3`` (rotations) and ``k1..k3`` (boosts).  With
``H = c * P0`` the relations involving ``H`` read ``[H, K_i] = c P_i`` and
``[K_i, P_j] = -delta_ij H / c``, i.e. exactly the abstract table below on the
``P0`` generator, so ``c`` only enters through ``H``.

No non-trivial finite-dimensional unitary representation of the full group
exists, so representations may carry any subset of the ten labels; relations
that mention a missing label are reported as skipped.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .complexification import ComplexifiedOperator
from .errors import (
    DimensionMismatch,
    MissingGenerators,
    NegativeSquaredMass,
    NonPositiveEnergy,
    NotAComplexStructure,
    NotAntiHermitian,
    PolarNotComplexStructure,
    TimeTranslationNotInjective,
)
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, commutator, expm, opnorm
from .spectral import is_positive, polar, pvm_of
from .structures import J0, ComplexStructure, standard_complex_structure
from .vnalg import _structure_from_antisymmetric, commutant

LABELS = ("p0", "p1", "p2", "p3", "l1", "l2", "l3", "k1", "k2", "k3")
_IDX = {lab: i for i, lab in enumerate(LABELS)}


def _levi(i: int, j: int, k: int) -> int:
    return int(np.sign(np.linalg.det(np.eye(3)[[i, j, k]]))) if len({i, j, k}) == 3 else 0


def _structure_constants() -> np.ndarray:
    """``C[a, b, c]`` with ``[e_a, e_b] = sum_c C[a, b, c] e_c``."""
    c = np.zeros((10, 10, 10))

    def put(a, b, coeffs):
        for lab, val in coeffs.items():
            c[_IDX[a], _IDX[b], _IDX[lab]] += val
            c[_IDX[b], _IDX[a], _IDX[lab]] -= val

    for i in range(3):
        put("p0", f"k{i+1}", {f"p{i+1}": 1.0})
        put(f"k{i+1}", f"p{i+1}", {"p0": -1.0})
        for j in range(3):
            for k in range(3):
                e = _levi(i, j, k)
                if e and i < j:
                    put(f"l{i+1}", f"l{j+1}", {f"l{k+1}": e})
                    put(f"k{i+1}", f"k{j+1}", {f"l{k+1}": -e})
                if e:
                    put(f"l{i+1}", f"p{j+1}", {f"p{k+1}": e})
                    put(f"l{i+1}", f"k{j+1}", {f"k{k+1}": e})
    return c


STRUCTURE_CONSTANTS = _structure_constants()


def jacobi_defect(c: np.ndarray = STRUCTURE_CONSTANTS) -> float:
    """Largest coefficient of ``[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`` over basis triples."""
    # [x,[y,z]] = sum_d C[y,z,d] C[x,d,:]
    t1 = np.einsum("yzd,xde->xyze", c, c)
    total = t1 + t1.transpose(1, 2, 0, 3) + t1.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(total)))


if jacobi_defect() != 0.0 or np.max(np.abs(STRUCTURE_CONSTANTS
                                            + STRUCTURE_CONSTANTS.transpose(1, 0, 2))) != 0.0:
    raise RuntimeError("Poincare structure constants violate antisymmetry or Jacobi")


def bracket(a: str, b: str) -> dict[str, float]:
    """Abstract bracket ``[a, b]`` as ``{label: coefficient}``."""
    row = STRUCTURE_CONSTANTS[_IDX[a], _IDX[b]]
    return {LABELS[i]: float(v) for i, v in enumerate(row) if v != 0.0}


@dataclass(frozen=True, eq=False)
class PoincareRep:
    gens: dict
    c: float = 1.0
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        gens = {}
        dims = set()
        for lab, m in dict(self.gens).items():
            if lab not in _IDX:
                raise MissingGenerators(f"unknown generator label {lab!r}")
            m = as_matrix(m, square=True)
            if opnorm(m + m.T) > self.tol.eq_tol * max(1.0, opnorm(m)):
                raise NotAntiHermitian(f"generator {lab} is not anti-symmetric")
            gens[lab] = m
            dims.add(m.shape[0])
        if len(dims) > 1:
            raise DimensionMismatch(f"generators of different sizes: {sorted(dims)}")
        if not gens:
            raise MissingGenerators("a representation needs at least one generator")
        if not self.c > 0:
            raise ValueError("c must be positive")
        object.__setattr__(self, "gens", {lab: gens[lab] for lab in LABELS if lab in gens})

    @property
    def dim(self) -> int:
        return next(iter(self.gens.values())).shape[0]

    @property
    def labels(self) -> list[str]:
        return list(self.gens)

    def require(self, *labels: str):
        missing = [lab for lab in labels if lab not in self.gens]
        if missing:
            raise MissingGenerators(f"missing generators: {', '.join(missing)}")
        return [self.gens[lab] for lab in labels]

    def hamiltonian(self) -> np.ndarray:
        """Anti-symmetric time-translation generator ``H~ = c P0``."""
        return self.c * self.require("p0")[0]

    def conjugated(self, o: np.ndarray) -> "PoincareRep":
        return PoincareRep({lab: o @ m @ o.T for lab, m in self.gens.items()}, self.c, self.tol)


@dataclass(frozen=True, eq=False)
class RelationReport:
    residuals: dict
    skipped: list
    max_residual: float
    threshold: float
    passed: bool
    failing: list
    trivial: bool


def check_relations(rep: PoincareRep, rel_tol: float | None = None) -> RelationReport:
    """Residual ``||[A, B] - sum_C c_AB^C C||`` for every pair of supplied labels."""
    scale = max((opnorm(m) for m in rep.gens.values()), default=0.0)
    threshold = 1e-8 * scale if rel_tol is None else rel_tol
    residuals: dict[str, float] = {}
    skipped: list[str] = []
    for a, b in itertools.combinations(rep.labels, 2):
        key = f"[{a},{b}]"
        rhs_labels = bracket(a, b)
        if any(lab not in rep.gens for lab in rhs_labels):
            skipped.append(key)
            continue
        rhs = sum((v * rep.gens[lab] for lab, v in rhs_labels.items()), np.zeros((rep.dim, rep.dim)))
        residuals[key] = opnorm(commutator(rep.gens[a], rep.gens[b]) - rhs)
    max_res = max(residuals.values(), default=0.0)
    failing = [k for k, v in residuals.items() if v > threshold]
    return RelationReport(
        residuals=residuals,
        skipped=skipped,
        max_residual=max_res,
        threshold=threshold,
        passed=not failing,
        failing=failing,
        trivial=scale == 0.0,
    )


@dataclass(frozen=True, eq=False)
class SquaredMass:
    matrix: np.ndarray
    scalar: float | None
    positive: bool


def _mass_matrix(rep: PoincareRep, require_spatial: bool) -> np.ndarray:
    p0 = rep.require("p0")[0]
    if require_spatial:
        rep.require("p1", "p2", "p3")
    m = -(p0 @ p0)
    for lab in ("p1", "p2", "p3"):
        if lab in rep.gens:
            m = m + rep.gens[lab] @ rep.gens[lab]
    return 0.5 * (m + m.T)


def squared_mass(rep: PoincareRep) -> SquaredMass:
    """``M^2 = -P0^2 + sum_k Pk^2`` and its scalar value when it is a multiple of I."""
    m = _mass_matrix(rep, require_spatial=True)
    tol = rep.tol
    mu = float(np.trace(m)) / rep.dim
    scalar = mu if opnorm(m - mu * np.eye(rep.dim)) <= tol.eq_tol * max(1.0, opnorm(m)) else None
    return SquaredMass(m, scalar, is_positive(m, tol))


class Verdict(str, enum.Enum):
    UNIQUE_UP_TO_SIGN = "UniqueUpToSign"
    NOT_UNIQUE = "NotUnique"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class UniquenessResult:
    verdict: Verdict
    commutant_dim: int
    witness: np.ndarray | None = None
    reason: str = ""


def uniqueness_scan(rep: PoincareRep, j: ComplexStructure) -> UniquenessResult:
    """Are ``+-j`` the only complex structures commuting with the representation?

    Only the commutant is searched.  Inconclusive when ``j`` itself does not
    commute with the generators or when the commutant is all of ``M_n(R)``.
    When more structures exist, one distinct from ``+-j`` is returned as the
    witness.
    """
    tol = rep.tol
    n = rep.dim
    gens = [m for m in rep.gens.values() if opnorm(m) > 0]
    for m in gens:
        if opnorm(m @ j.j - j.j @ m) > 10 * tol.eq_tol * max(1.0, opnorm(m)):
            return UniquenessResult(Verdict.INCONCLUSIVE, -1, reason="j does not commute with the generators")
    comm = commutant(np.array(gens).reshape(-1, n, n), n, tol)
    if comm.dim == n * n:
        return UniquenessResult(Verdict.INCONCLUSIVE, comm.dim, reason="commutant is the full matrix algebra")
    anti = comm.antisymmetric_basis()
    if anti.shape[0] == 0:
        return UniquenessResult(Verdict.INCONCLUSIVE, comm.dim, reason="commutant has no anti-symmetric part")
    if anti.shape[0] == 1:
        s = _structure_from_antisymmetric(anti[0], tol)
        if s is None:
            return UniquenessResult(Verdict.INCONCLUSIVE, comm.dim, reason="no element with scalar square")
        if min(opnorm(s - j.j), opnorm(s + j.j)) <= 100 * tol.eq_tol:
            return UniquenessResult(Verdict.UNIQUE_UP_TO_SIGN, comm.dim)
        return UniquenessResult(Verdict.INCONCLUSIVE, comm.dim, reason="j is not in the commutant span")
    # complex-linear part of the commutant: projector P in it gives j(I - 2P)
    coeff = np.array([(b @ j.j - j.j @ b).reshape(-1) for b in comm.basis]).T
    _, s, vt = np.linalg.svd(coeff, full_matrices=True)
    # basis is orthonormal, so an absolute cut separates rounding noise
    r = int(np.sum(s > tol.eq_tol))
    restricted = np.tensordot(vt[r:], comm.basis, axes=1)
    eye = np.eye(n)
    for x in restricted:
        sym = 0.5 * (x + x.T)
        sym = sym - np.trace(sym) / n * eye
        if opnorm(sym) <= 1e-6:
            continue
        proj = pvm_of(sym, tol).projectors[0]
        return UniquenessResult(Verdict.NOT_UNIQUE, comm.dim, witness=j.j @ (eye - 2 * proj),
                                reason="commutant contains a complex-linear projector")
    # otherwise an anti-symmetric element anticommuting with j gives a second structure
    for a in anti:
        minus = 0.5 * (a + j.j @ a @ j.j)
        if opnorm(minus) <= 1e-6:
            continue
        k = _structure_from_antisymmetric(minus, tol)
        if k is not None:
            return UniquenessResult(Verdict.NOT_UNIQUE, comm.dim, witness=k,
                                    reason="commutant contains a structure anticommuting with j")
    return UniquenessResult(Verdict.INCONCLUSIVE, comm.dim, reason="no second structure constructed")


@dataclass(frozen=True, eq=False)
class EmergentStructure:
    j: ComplexStructure
    h: np.ndarray
    commutation_residuals: dict
    observables: dict
    observable_asymmetry: dict
    hamiltonian_residual: float
    uniqueness: UniquenessResult | None = None

    @property
    def uniqueness_verdict(self) -> Verdict | None:
        return None if self.uniqueness is None else self.uniqueness.verdict


def extract_complex_structure(rep: PoincareRep, scan_uniqueness: bool = True) -> EmergentStructure:
    """Polar-decompose ``H~ = c P0 = J H`` and check that ``J`` is an invariant complex structure.

    Injectivity of ``P0`` is checked before the squared-mass sign.  Absent
    spatial translations count as zero in the squared-mass check.
    """
    tol = rep.tol
    htilde = rep.hamiltonian()
    s = np.linalg.svd(htilde, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= tol.rank_tol * s[0]:
        raise TimeTranslationNotInjective(
            f"P0 has a kernel (smallest singular value {s[-1]:.3g})")
    mass = _mass_matrix(rep, require_spatial=False)
    if not is_positive(mass, tol):
        raise NegativeSquaredMass("squared-mass operator is not positive")
    pd = polar(htilde, tol)
    try:
        j = ComplexStructure(pd.u, tol)
    except (NotAComplexStructure, ValueError) as exc:
        raise PolarNotComplexStructure(str(exc)) from exc
    residuals = {lab: opnorm(commutator(j.j, m)) for lab, m in rep.gens.items()}
    observables = {lab: -j.j @ m for lab, m in rep.gens.items()}
    asym = {lab: opnorm(o - o.T) for lab, o in observables.items()}
    h_res = opnorm(-j.j @ htilde - pd.p)
    uniq = uniqueness_scan(rep, j) if scan_uniqueness else None
    return EmergentStructure(j, pd.p, residuals, observables, asym, h_res, uniq)


def poincare_invariance_residuals(rep: PoincareRep, j: ComplexStructure,
                                  times=(0.5, 1.3)) -> dict:
    """``max_t ||exp(tX) J exp(-tX) - J||`` for every supplied generator ``X``."""
    out = {}
    for lab, m in rep.gens.items():
        out[lab] = max(opnorm(expm(t * m) @ j.j @ expm(-t * m) - j.j) for t in times)
    return out


def boost_conjugation_check(rep: PoincareRep, i: int, z: float) -> float:
    """``||exp(zK_i) P0 exp(-zK_i) - (cosh z P0 - sinh z P_i)||``."""
    if i not in (1, 2, 3):
        raise ValueError("boost axis must be 1, 2 or 3")
    k, p0, pi = rep.require(f"k{i}", "p0", f"p{i}")
    lhs = expm(z * k) @ p0 @ expm(-z * k)
    return opnorm(lhs - (np.cosh(z) * p0 - np.sinh(z) * pi))


def energy_momentum_bound(rep: PoincareRep, n_samples: int = 100, seed: int = 0) -> dict:
    """Smallest ``||H~ v|| - c ||P_k v||`` over random unit vectors, per spatial axis."""
    rng = np.random.default_rng(seed)
    htilde = rep.hamiltonian()
    vs = rng.standard_normal((n_samples, rep.dim))
    vs /= np.linalg.norm(vs, axis=1, keepdims=True)
    out = {}
    for lab in ("p1", "p2", "p3"):
        if lab not in rep.gens:
            continue
        margins = np.linalg.norm(vs @ htilde.T, axis=1) - rep.c * np.linalg.norm(vs @ rep.gens[lab].T, axis=1)
        out[lab] = float(np.min(margins))
    return out


def enveloping_commutation_check(rep: PoincareRep, j: ComplexStructure, max_len: int = 3,
                                 n_words: int = 50, seed: int = 0) -> float:
    """Largest ``||[J, w]||`` over sampled words ``w`` of length <= ``max_len`` in the generators."""
    rng = np.random.default_rng(seed)
    mats = list(rep.gens.values())
    worst = 0.0
    for _ in range(n_words):
        length = int(rng.integers(1, max_len + 1))
        w = np.eye(rep.dim)
        for idx in rng.integers(0, len(mats), size=length):
            w = w @ mats[idx]
        worst = max(worst, opnorm(commutator(j.j, w)))
    return worst


def build_translation_rep(momenta, c: float = 1.0, tol: Tolerances = DEFAULT_TOL) -> PoincareRep:
    """Translations acting as rotations with frequencies ``(E, p1, p2, p3)`` in 2-d blocks."""
    q = np.asarray(momenta, dtype=float).reshape(-1, 4)
    if q.shape[0] == 0:
        raise MissingGenerators("need at least one momentum")
    if np.any(q[:, 0] <= 0):
        raise NonPositiveEnergy("every block needs a positive energy")
    gens = {f"p{mu}": np.kron(np.diag(q[:, mu]), J0) for mu in range(4)}
    return PoincareRep(gens, c, tol)


def realify(m) -> np.ndarray:
    """Real ``2n x 2n`` form of a complex matrix, coordinates interleaved as (x1, y1, x2, y2, ...)."""
    if isinstance(m, ComplexifiedOperator):
        re, im = m.re, m.im
    else:
        z = np.asarray(m, dtype=complex)
        re, im = z.real, z.imag
    return np.kron(re, np.eye(2)) + np.kron(im, J0)


def decomplexify_complex_rep(gens: Mapping, c: float = 1.0,
                             tol: Tolerances = DEFAULT_TOL) -> tuple[PoincareRep, ComplexStructure]:
    """Realify anti-Hermitian complex generators; the hidden structure is ``i`` realified."""
    real = {}
    n = None
    for lab, m in gens.items():
        op = m if isinstance(m, ComplexifiedOperator) else ComplexifiedOperator.from_complex(m)
        scale = max(1.0, op.norm())
        if opnorm(op.re + op.re.T) > tol.eq_tol * scale or opnorm(op.im - op.im.T) > tol.eq_tol * scale:
            raise NotAntiHermitian(f"generator {lab} is not anti-Hermitian")
        if n is not None and op.dim != n:
            raise DimensionMismatch("complex generators of different sizes")
        n = op.dim
        real[lab] = realify(op)
    if n is None:
        raise MissingGenerators("no generators supplied")
    return PoincareRep(real, c, tol), standard_complex_structure(2 * n)
