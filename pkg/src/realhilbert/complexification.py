"""External complexification H -> H + iH.

An operator ``B`` on the complexified space is stored as a pair
``(re, im)`` meaning ``B = re + i im``.  The canonical conjugation
``C(x + iy) = x - iy`` commutes with ``B`` exactly when ``im == 0``, which is
how real operators are recognised.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonSquare, ViolatesConjugation
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, opnorm


@dataclass(frozen=True, eq=False)
class ComplexifiedOperator:
    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = as_matrix(self.re, square=True)
        im = as_matrix(self.im, square=True)
        if re.shape != im.shape:
            raise DimensionMismatch(f"re {re.shape} and im {im.shape} differ")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def dim(self) -> int:
        return self.re.shape[0]

    @classmethod
    def from_complex(cls, m) -> "ComplexifiedOperator":
        m = np.asarray(m, dtype=complex)
        return cls(m.real, m.imag)

    @classmethod
    def from_block(cls, m, tol: Tolerances = DEFAULT_TOL) -> "ComplexifiedOperator":
        """Inverse of :meth:`block`; rejects matrices without the block pattern."""
        m = as_matrix(m, square=True)
        if m.shape[0] % 2:
            raise DimensionMismatch("block form needs even dimension")
        n = m.shape[0] // 2
        a, b, c, d = m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:]
        if opnorm(a - d) > tol.eq_tol * max(1.0, opnorm(m)) or \
                opnorm(b + c) > tol.eq_tol * max(1.0, opnorm(m)):
            raise ViolatesConjugation("matrix is not the real form of a complex operator")
        return cls((a + d) / 2, (c - b) / 2)

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def block(self) -> np.ndarray:
        """Real ``2n x 2n`` form ``[[re, -im], [im, re]]`` acting on (x, y)."""
        return np.block([[self.re, -self.im], [self.im, self.re]])

    def adjoint(self) -> "ComplexifiedOperator":
        return ComplexifiedOperator(self.re.T, -self.im.T)

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvals(self.to_complex())

    def __add__(self, other: "ComplexifiedOperator") -> "ComplexifiedOperator":
        return ComplexifiedOperator(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexifiedOperator") -> "ComplexifiedOperator":
        return ComplexifiedOperator(self.re - other.re, self.im - other.im)

    def __matmul__(self, other: "ComplexifiedOperator") -> "ComplexifiedOperator":
        return ComplexifiedOperator(
            self.re @ other.re - self.im @ other.im,
            self.re @ other.im + self.im @ other.re,
        )

    def scale(self, a: float, b: float = 0.0) -> "ComplexifiedOperator":
        """Multiply by the complex scalar ``a + ib``."""
        return ComplexifiedOperator(a * self.re - b * self.im, a * self.im + b * self.re)

    def norm(self) -> float:
        return opnorm(self.block())


def conjugation(n: int) -> np.ndarray:
    """Block matrix of ``C: (x, y) -> (x, -y)`` on H + iH."""
    return np.block([[np.eye(n), np.zeros((n, n))], [np.zeros((n, n)), -np.eye(n)]])


def complexify(a) -> ComplexifiedOperator:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {a.shape}")
    return ComplexifiedOperator(a, np.zeros_like(a))


def decomplexify(b: ComplexifiedOperator, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return ``a`` with ``complexify(a) == b``; only possible when ``C B = B C``."""
    if opnorm(b.im) > tol.eq_tol:
        raise ViolatesConjugation(
            f"operator does not commute with the conjugation (||im|| = {opnorm(b.im):.3g})")
    return b.re.copy()


def adjoint_correspondence_check(a) -> float:
    """``||(A_C)* - (A^T)_C||``; zero up to rounding for every real ``a``."""
    a = as_matrix(a, square=True)
    lhs = complexify(a).adjoint()
    rhs = complexify(a.T)
    return (lhs - rhs).norm()
