from __future__ import annotations

import numpy as np
import pytest

from realhilbert.complexification import (
    ComplexifiedOperator,
    adjoint_correspondence_check,
    complexify,
    conjugation,
    decomplexify,
)
from realhilbert.errors import ViolatesConjugation
from realhilbert.spectral import polar
from realhilbert.structures import J0


def test_complexify_identity():
    c = complexify(np.eye(3))
    assert np.array_equal(c.re, np.eye(3)) and np.array_equal(c.im, np.zeros((3, 3)))


def test_complexify_j0_eigenvalues():
    ev = complexify(J0).eigvals()
    assert np.allclose(sorted(ev.imag), [-1.0, 1.0])
    assert np.allclose(ev.real, 0.0)


def test_symmetric_complexifies_to_selfadjoint(rng):
    a = rng.standard_normal((4, 4))
    a = a + a.T
    c = complexify(a)
    assert np.allclose(c.to_complex(), c.adjoint().to_complex())


def test_decomplexify():
    a = np.diag([1.0, 2.0])
    assert np.array_equal(decomplexify(complexify(a)), a)
    with pytest.raises(ViolatesConjugation):
        decomplexify(ComplexifiedOperator(np.zeros((2, 2)), np.eye(2)))


def test_block_form_commutes_with_conjugation(rng):
    a = rng.standard_normal((3, 3))
    b = complexify(a).block()
    c = conjugation(3)
    assert np.allclose(b @ c, c @ b)
    back = ComplexifiedOperator.from_block(b)
    assert np.array_equal(back.re, a)


def test_adjoint_correspondence(rng):
    assert adjoint_correspondence_check(np.diag([1.0, 2.0])) == 0.0
    assert adjoint_correspondence_check(J0) == 0.0
    for _ in range(20):
        assert adjoint_correspondence_check(rng.standard_normal((4, 4))) <= 1e-12


def test_functoriality(rng):
    a, b = rng.standard_normal((2, 4, 4))
    assert np.allclose((complexify(a) @ complexify(b)).to_complex(), complexify(a @ b).to_complex())
    assert np.allclose((complexify(a) + complexify(b)).to_complex(), complexify(a + b).to_complex())


def test_spectral_transfer(rng):
    a = rng.standard_normal((5, 5))
    a = a + a.T
    ev = np.sort(complexify(a).eigvals().real)
    assert np.allclose(ev, np.linalg.eigvalsh(a))


def test_polynomial_transfer(rng):
    a = rng.standard_normal((4, 4))
    coeffs = rng.standard_normal(5)
    pa = sum(c * np.linalg.matrix_power(a, k) for k, c in enumerate(coeffs))
    ac = complexify(a).to_complex()
    pac = sum(c * np.linalg.matrix_power(ac, k) for k, c in enumerate(coeffs))
    assert np.allclose(pac, complexify(pa).to_complex())


def test_polar_transfer(rng):
    a = rng.standard_normal((4, 4))
    pd = polar(a)
    # complex polar factors of A_C computed independently by complex SVD
    w, s, vh = np.linalg.svd(complexify(a).to_complex())
    assert np.allclose(w @ vh, complexify(pd.u).to_complex())
    assert np.allclose(vh.conj().T @ np.diag(s) @ vh, complexify(pd.p).to_complex())


def test_scale_by_i_is_i_times():
    c = complexify(np.eye(2)).scale(0.0, 1.0)
    assert np.allclose(c.to_complex(), 1j * np.eye(2))
