"""Complex and quaternionic structures on a real space.

Nothing here stores complex or quaternionic numbers natively.  A complex
structure ``J`` (orthogonal, ``J.T == -J``, ``J @ J == -I``) turns R^n into a
complex space through ``(a + ib) x := a x + b J x``; an anticommuting pair
``(J, K)`` turns it into a quaternionic one.

Quaternion convention used throughout: the imaginary units map as
``i <-> J K``, ``j <-> J``, ``k <-> K``, so the quaternionic scalar product is

    (x|y)_{J,K} = (x|y) - i (x|JKy) - j (x|Jy) - k (x|Ky).

References differ on left versus right scalar multiplication; with this
convention the left-multiplication matrices of the units ``j, k`` on R^4 form
a valid pair.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NotAComplexStructure,
    NotAnticommuting,
    OddDimension,
)
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, opnorm

J0 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    j: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        j = as_matrix(self.j, square=True)
        n = j.shape[0]
        if n % 2:
            raise OddDimension(f"no complex structure exists in odd dimension {n}")
        if opnorm(j @ j + np.eye(n)) > self.tol.eq_tol:
            raise NotAComplexStructure("J @ J != -I")
        if opnorm(j + j.T) > self.tol.eq_tol:
            raise NotAComplexStructure("J is not anti-symmetric")
        object.__setattr__(self, "j", j)

    @property
    def dim(self) -> int:
        return self.j.shape[0]

    def __neg__(self) -> "ComplexStructure":
        return ComplexStructure(-self.j, self.tol)


@dataclass(frozen=True, eq=False)
class QuaternionicPair:
    j: ComplexStructure
    k: ComplexStructure

    def __post_init__(self):
        if not isinstance(self.j, ComplexStructure):
            object.__setattr__(self, "j", ComplexStructure(self.j))
        if not isinstance(self.k, ComplexStructure):
            object.__setattr__(self, "k", ComplexStructure(self.k))
        if self.j.dim != self.k.dim:
            raise DimensionMismatch("J and K act on spaces of different dimension")
        if self.j.dim % 4:
            raise DimensionMismatch("a quaternionic pair needs dimension divisible by 4")
        tol = self.j.tol
        if opnorm(self.j.j @ self.k.j + self.k.j @ self.j.j) > tol.eq_tol:
            raise NotAnticommuting("J K != -K J")

    @property
    def dim(self) -> int:
        return self.j.dim

    @property
    def jk(self) -> np.ndarray:
        return self.j.j @ self.k.j


def standard_complex_structure(n: int) -> ComplexStructure:
    """Block-diagonal ``diag(J0, ..., J0)`` on R^n."""
    if n <= 0 or n % 2:
        raise OddDimension(f"no complex structure exists in dimension {n}")
    return ComplexStructure(np.kron(np.eye(n // 2), J0))


# Hamilton products of basis units (1, i, j, k): _MULT[a][b] = (sign, index)
_MULT = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]


def quaternion_left(q) -> np.ndarray:
    """Matrix of ``x -> q x`` on R^4 = span(1, i, j, k)."""
    q = np.asarray(q, dtype=float)
    m = np.zeros((4, 4))
    for a in range(4):
        for b in range(4):
            sign, c = _MULT[a][b]
            m[c, b] += sign * q[a]
    return m


def quaternion_right(q) -> np.ndarray:
    """Matrix of ``x -> x q`` on R^4 = span(1, i, j, k)."""
    q = np.asarray(q, dtype=float)
    m = np.zeros((4, 4))
    for a in range(4):
        for b in range(4):
            sign, c = _MULT[b][a]
            m[c, b] += sign * q[a]
    return m


def standard_quaternionic_pair(n: int = 4) -> QuaternionicPair:
    """``J``, ``K`` = left multiplication by the units j, k, repeated on R^n."""
    if n <= 0 or n % 4:
        raise DimensionMismatch(f"dimension {n} is not divisible by 4")
    blocks = np.eye(n // 4)
    return QuaternionicPair(
        ComplexStructure(np.kron(blocks, quaternion_left([0, 0, 1, 0]))),
        ComplexStructure(np.kron(blocks, quaternion_left([0, 0, 0, 1]))),
    )


def _vec(x, n: int) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape[0] != n:
        raise DimensionMismatch(f"vector of length {v.shape[0]} vs structure of dimension {n}")
    return v


def hermitian_product_J(x, y, j: ComplexStructure) -> tuple[float, float]:
    """Scalar product of H_J as (real, imaginary): ``((x|y), -(x|Jy))``."""
    x, y = _vec(x, j.dim), _vec(y, j.dim)
    return float(x @ y), float(-(x @ (j.j @ y)))


def complex_scalar_action(a: float, b: float, x, j: ComplexStructure) -> np.ndarray:
    """``(a + ib) x := a x + b J x``."""
    x = _vec(x, j.dim)
    return a * x + b * (j.j @ x)


def is_complex_linear(a, j: ComplexStructure) -> bool:
    a = as_matrix(a, square=True)
    if a.shape[0] != j.dim:
        raise DimensionMismatch("operator and structure dimensions differ")
    return opnorm(a @ j.j - j.j @ a) <= j.tol.eq_tol * max(1.0, opnorm(a))


def quaternionic_product(x, y, q: QuaternionicPair) -> tuple[float, float, float, float]:
    """Components ``((x|y), -(x|JKy), -(x|Jy), -(x|Ky))`` along (1, i, j, k)."""
    x, y = _vec(x, q.dim), _vec(y, q.dim)
    return (
        float(x @ y),
        float(-(x @ (q.jk @ y))),
        float(-(x @ (q.j.j @ y))),
        float(-(x @ (q.k.j @ y))),
    )


def is_quaternionic_linear(a, q: QuaternionicPair) -> bool:
    a = as_matrix(a, square=True)
    if a.shape[0] != q.dim:
        raise DimensionMismatch("operator and structure dimensions differ")
    scale = q.j.tol.eq_tol * max(1.0, opnorm(a))
    return (opnorm(a @ q.j.j - q.j.j @ a) <= scale
            and opnorm(a @ q.k.j - q.k.j @ a) <= scale)


def structure_basis(structure) -> np.ndarray:
    """Columns ``b_1..b_m`` forming an orthonormal basis of H_J (or H_{J,K}).

    The real vectors ``{b, Jb}`` (resp. ``{b, Jb, Kb, JKb}``) over all
    columns form an orthonormal basis of the underlying real space.
    """
    if isinstance(structure, QuaternionicPair):
        units = [structure.j.j, structure.k.j, structure.jk]
    else:
        units = [structure.j]
    n = units[0].shape[0]
    real_basis: list[np.ndarray] = []
    chosen = []
    for e in np.eye(n):
        v = e.copy()
        for _ in range(2):
            for w in real_basis:
                v -= (w @ v) * w
        if np.linalg.norm(v) < 0.5:
            continue
        v /= np.linalg.norm(v)
        chosen.append(v)
        real_basis.append(v)
        real_basis.extend(u @ v for u in units)
        if len(real_basis) == n:
            break
    return np.array(chosen).T
