from __future__ import annotations

import numpy as np
import pytest

from conftest import random_orthogonal
from realhilbert.errors import NotAComplexStructure, NotAnticommuting, OddDimension
from realhilbert.linalg import expm, opnorm
from realhilbert.structures import (
    J0,
    ComplexStructure,
    QuaternionicPair,
    complex_scalar_action,
    hermitian_product_J,
    is_complex_linear,
    is_quaternionic_linear,
    quaternion_left,
    quaternion_right,
    quaternionic_product,
    standard_complex_structure,
    standard_quaternionic_pair,
    structure_basis,
)


def test_standard_complex_structure():
    assert np.array_equal(standard_complex_structure(2).j, J0)
    assert np.array_equal(standard_complex_structure(4).j, np.kron(np.eye(2), J0))
    with pytest.raises(OddDimension):
        standard_complex_structure(3)


def test_complex_structure_validation():
    with pytest.raises(NotAComplexStructure):
        ComplexStructure(2 * J0)
    with pytest.raises(NotAComplexStructure):
        ComplexStructure(np.array([[0.0, -2.0], [0.5, 0.0]]))
    with pytest.raises(OddDimension):
        ComplexStructure(np.zeros((3, 3)))


def test_complex_structure_is_orthogonal(rng):
    o = random_orthogonal(rng, 6)
    j = ComplexStructure(o @ standard_complex_structure(6).j @ o.T)
    assert opnorm(j.j.T @ j.j - np.eye(6)) <= 1e-9
    assert np.array_equal((-j).j, -j.j)


def test_hermitian_product_examples():
    j = ComplexStructure(J0)
    e1, e2 = np.eye(2)
    assert hermitian_product_J(e1, e1, j) == (1.0, 0.0)
    assert hermitian_product_J(e1, J0 @ e1, j) == (0.0, 1.0)


def test_hermitian_product_is_sesquilinear(rng):
    j = standard_complex_structure(4)
    x, y = rng.standard_normal((2, 4))
    a, b = 0.3, -1.2
    # (x | (a+ib) y) = (a+ib)(x|y): linear in the second slot
    re, im = hermitian_product_J(x, complex_scalar_action(a, b, y, j), j)
    r0, i0 = hermitian_product_J(x, y, j)
    assert np.isclose(re, a * r0 - b * i0) and np.isclose(im, a * i0 + b * r0)
    # norm from the hermitian product is the Euclidean norm
    assert np.isclose(hermitian_product_J(x, x, j)[0], x @ x)
    assert abs(hermitian_product_J(x, x, j)[1]) < 1e-12


def test_orthogonality_in_hj(rng):
    j = standard_complex_structure(4)
    x = rng.standard_normal(4)
    y = rng.standard_normal(4)
    # project y off both x and Jx
    for w in (x, j.j @ x):
        y -= (w @ y) / (w @ w) * w
    assert np.allclose(hermitian_product_J(x, y, j), 0.0)


def test_is_complex_linear():
    j = ComplexStructure(J0)
    assert is_complex_linear(J0, j)
    assert not is_complex_linear(np.diag([1.0, -1.0]), j)
    assert is_complex_linear(0.4 * np.eye(2) - 2.0 * J0, j)


def test_selfadjoint_in_hj_iff_symmetric(rng):
    j = standard_complex_structure(4)
    s = rng.standard_normal((4, 4))
    s = s + s.T
    a = s - j.j @ s @ j.j  # symmetric and commutes with J
    assert is_complex_linear(a, j)
    x, y = rng.standard_normal((2, 4))
    assert np.allclose(hermitian_product_J(x, a @ y, j), hermitian_product_J(a @ x, y, j))
    b = a @ j.j  # commutes with J but is anti-symmetric
    assert not np.allclose(hermitian_product_J(x, b @ y, j), hermitian_product_J(b @ x, y, j))


def test_quaternion_matrices_are_homomorphisms(rng):
    p, q = rng.standard_normal((2, 4))
    assert np.allclose(quaternion_left(p) @ quaternion_left(q), quaternion_left(quaternion_left(p) @ q))
    assert np.allclose(quaternion_left(p) @ quaternion_right(q), quaternion_right(q) @ quaternion_left(p))


def test_standard_pair():
    q = standard_quaternionic_pair()
    assert opnorm(q.j.j @ q.k.j + q.k.j @ q.j.j) == 0.0
    # i <-> JK
    assert np.allclose(q.jk, quaternion_left([0, 1, 0, 0]))
    with pytest.raises(NotAnticommuting):
        QuaternionicPair(ComplexStructure(np.kron(np.eye(2), J0)),
                         ComplexStructure(np.kron(np.eye(2), J0)))


def test_quaternionic_product_examples():
    q = standard_quaternionic_pair()
    e1 = np.eye(4)[0]
    assert quaternionic_product(e1, e1, q) == (1.0, 0.0, 0.0, 0.0)
    assert quaternionic_product(e1, q.j.j @ e1, q) == (0.0, 0.0, 1.0, 0.0)


def test_is_quaternionic_linear():
    q = standard_quaternionic_pair()
    assert is_quaternionic_linear(np.eye(4), q)
    assert not is_quaternionic_linear(q.j.j, q)
    assert is_quaternionic_linear(quaternion_right([0.2, 1.0, -0.5, 0.3]), q)


@pytest.mark.parametrize("structure", [standard_complex_structure(6), standard_quaternionic_pair(8)])
def test_structure_basis_spans(structure):
    b = structure_basis(structure)
    if isinstance(structure, QuaternionicPair):
        units = [np.eye(8), structure.j.j, structure.k.j, structure.jk]
    else:
        units = [np.eye(6), structure.j]
    real = np.hstack([u @ b for u in units])
    assert np.allclose(real.T @ real, np.eye(real.shape[0]))


def test_exp_of_j_commutes():
    j = standard_complex_structure(4)
    u = expm(0.8 * j.j)
    assert is_complex_linear(u, j)
