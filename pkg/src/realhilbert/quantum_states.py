"""States as probability measures on projectors, densities, Lueders rule,
structured traces and the typing of symmetry representatives.

In finite dimension every operator is trace class, so trace-class
bookkeeping reduces to the ordinary trace.  What survives is the trace
factor between a real space and its complex or quaternionic reading:
``tr_{H_J} = tr / 2`` and ``tr_{H_{J,K}} = tr / 4``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    NotAState,
    NotCommutingWithStructure,
    NotPositive,
    NotSymmetric,
    NotUnitary,
    NumericalInconsistency,
    ZeroProbabilityConditioning,
)
from .lattice import as_projector
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, opnorm, sym_eig
from .structures import (
    ComplexStructure,
    QuaternionicPair,
    hermitian_product_J,
    quaternionic_product,
    structure_basis,
)


def as_density(t, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Validate a density operator: symmetric, positive, unit trace."""
    t = as_matrix(t, square=True)
    if opnorm(t - t.T) > tol.eq_tol:
        raise NotSymmetric("density operator must be symmetric")
    t = 0.5 * (t + t.T)
    w, _ = sym_eig(t, tol)
    if w[0] < -tol.eq_tol:
        raise NotPositive(f"density has negative eigenvalue {w[0]:.3g}")
    if abs(np.trace(t) - 1.0) > tol.eq_tol:
        raise NotAState(f"density has trace {np.trace(t):.12g}")
    return t


@dataclass(frozen=True, eq=False)
class StateMeasure:
    """A map from projectors to probabilities.

    Built either from a density (closed form ``tr(T P)``) or from a table of
    values on the standard polarization frame (see :func:`standard_frame`).
    """

    dim: int
    evaluate: Callable[[np.ndarray], float]

    def __call__(self, p) -> float:
        return self.evaluate(p)

    @classmethod
    def from_density(cls, t, tol: Tolerances = DEFAULT_TOL) -> "StateMeasure":
        t = as_density(t, tol)
        return cls(t.shape[0], lambda p: measure_from_density(t, p, tol))

    @classmethod
    def from_table(cls, dim: int, table: Mapping[tuple, float]) -> "StateMeasure":
        frame = standard_frame(dim)

        def lookup(p):
            p = np.asarray(p, dtype=float)
            for key, proj in frame.items():
                if np.allclose(p, proj, atol=1e-12):
                    return float(table[key])
            raise KeyError("projector is not in the recorded frame")

        return cls(dim, lookup)

    def table(self) -> dict[tuple, float]:
        return {key: float(self.evaluate(p)) for key, p in standard_frame(self.dim).items()}


def standard_frame(n: int) -> dict[tuple, np.ndarray]:
    """Rank-one projectors onto ``e_i`` and ``(e_i +- e_j)/sqrt 2``, keyed by label."""
    eye = np.eye(n)
    frame: dict[tuple, np.ndarray] = {}
    for i in range(n):
        frame[("e", i)] = np.outer(eye[i], eye[i])
    for i in range(n):
        for j in range(i + 1, n):
            for sign, lab in ((1.0, "+"), (-1.0, "-")):
                v = (eye[i] + sign * eye[j]) / np.sqrt(2.0)
                frame[(lab, i, j)] = np.outer(v, v)
    return frame


def measure_from_density(t, p, tol: Tolerances = DEFAULT_TOL) -> float:
    """``mu(P) = tr(T P)``, clamped to [0, 1] when within tolerance of it."""
    t = as_matrix(t, square=True)
    p = as_projector(p, tol)
    if t.shape != p.shape:
        raise DimensionMismatch("density and projector dimensions differ")
    val = float(np.trace(t @ p))
    if -tol.eq_tol <= val < 0.0:
        return 0.0
    if 1.0 < val <= 1.0 + tol.eq_tol:
        return 1.0
    return val


ProbeLike = Union[StateMeasure, Callable[[np.ndarray], float], Mapping[tuple, float]]


def density_from_measure(probe: ProbeLike, n: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Reconstruct the density of a state from its values on the polarization frame.

    ``t_ii = mu(P_i)`` and ``t_ij = mu(P+_ij) - (t_ii + t_jj) / 2``.  The
    ``P-_ij`` values are used to check additivity on each orthogonal pair.
    """
    if n < 3:
        raise DimensionTooSmall(f"state reconstruction needs dimension >= 3, got {n}")
    frame = standard_frame(n)
    if isinstance(probe, Mapping):
        values = {k: float(probe[k]) for k in frame}
    else:
        values = {k: float(probe(p)) for k, p in frame.items()}
    for k, v in values.items():
        if not (-tol.eq_tol <= v <= 1.0 + tol.eq_tol):
            raise NotAState(f"value {v!r} at {k} is not a probability")
    t = np.zeros((n, n))
    for i in range(n):
        t[i, i] = values[("e", i)]
    for i in range(n):
        for j in range(i + 1, n):
            plus, minus = values[("+", i, j)], values[("-", i, j)]
            if abs(plus + minus - t[i, i] - t[j, j]) > 10 * tol.eq_tol:
                raise NotAState(f"additivity fails on the pair ({i}, {j})")
            t[i, j] = t[j, i] = plus - 0.5 * (t[i, i] + t[j, j])
    if abs(np.trace(t) - 1.0) > 10 * tol.eq_tol:
        raise NotAState(f"frame values sum to {np.trace(t):.12g}, not 1")
    w, _ = sym_eig(t, tol)
    if w[0] < -10 * tol.eq_tol:
        raise NotAState(f"reconstructed operator is not positive (min eigenvalue {w[0]:.3g})")
    return t


def luders_update(t, p, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Post-measurement density ``P T P / tr(P T P)``."""
    t = as_density(t, tol)
    p = as_projector(p, tol)
    prob = measure_from_density(t, p, tol)
    if prob <= tol.eq_tol:
        raise ZeroProbabilityConditioning(f"conditioning on a proposition of probability {prob:.3g}")
    ptp = p @ t @ p
    ptp = 0.5 * (ptp + ptp.T)
    return ptp / np.trace(ptp)


Structure = Union[None, ComplexStructure, QuaternionicPair]


def _structure_units(structure: Structure) -> list[np.ndarray]:
    if structure is None:
        return []
    if isinstance(structure, QuaternionicPair):
        return [structure.j.j, structure.k.j]
    return [structure.j]


def structured_trace(a, structure: Structure, tol: Tolerances = DEFAULT_TOL) -> float:
    """Real part of the trace of ``a`` computed in an explicit H_J / H_{J,K} basis."""
    a = as_matrix(a, square=True)
    if structure is None:
        return float(np.trace(a))
    basis = structure_basis(structure)
    total = 0.0
    for b in basis.T:
        if isinstance(structure, QuaternionicPair):
            total += quaternionic_product(b, a @ b, structure)[0]
        else:
            total += hermitian_product_J(b, a @ b, structure)[0]
    return total


def trace_in_structure(a, structure: Structure = None, tol: Tolerances = DEFAULT_TOL) -> float:
    """``tr(a)``, ``tr(a)/2`` or ``tr(a)/4`` for no structure, ``J`` or ``(J, K)``."""
    a = as_matrix(a, square=True)
    if opnorm(a - a.T) > tol.eq_tol * max(1.0, opnorm(a)):
        raise NotSymmetric("trace_in_structure expects a symmetric operator")
    w, _ = sym_eig(a, tol)
    if w[0] < -tol.eq_tol * max(1.0, opnorm(a)):
        raise NotPositive("trace_in_structure expects a positive operator")
    units = _structure_units(structure)
    for u in units:
        if u.shape != a.shape:
            raise DimensionMismatch("operator and structure dimensions differ")
        if opnorm(a @ u - u @ a) > tol.eq_tol * max(1.0, opnorm(a)):
            raise NotCommutingWithStructure("operator does not commute with the structure")
    factor = {0: 1.0, 1: 0.5, 2: 0.25}[len(units)]
    value = factor * float(np.trace(a))
    explicit = structured_trace(a, structure, tol)
    if abs(value - explicit) > 10 * tol.eq_tol * max(1.0, abs(value)):
        raise NumericalInconsistency(f"trace factor {value!r} vs explicit basis trace {explicit!r}")
    return value


class SymmetryType(str, enum.Enum):
    COMMUTES = "Commutes"
    ANTICOMMUTES = "Anticommutes"
    NEITHER = "Neither"


def symmetry_type(u, j: ComplexStructure, tol: Tolerances = DEFAULT_TOL) -> SymmetryType:
    """Whether an orthogonal ``u`` commutes or anticommutes with ``J``."""
    u = as_matrix(u, square=True)
    if u.shape[0] != j.dim:
        raise DimensionMismatch("operator and structure dimensions differ")
    if opnorm(u.T @ u - np.eye(u.shape[0])) > tol.eq_tol:
        raise NotUnitary("symmetry representative is not orthogonal")
    if opnorm(u @ j.j - j.j @ u) <= tol.eq_tol:
        return SymmetryType.COMMUTES
    if opnorm(u @ j.j + j.j @ u) <= tol.eq_tol:
        return SymmetryType.ANTICOMMUTES
    return SymmetryType.NEITHER
