from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_antisymmetric, random_orthogonal
from realhilbert.errors import FunctionUndefinedAtEigenvalue, NotPositive, NotUnitaryAtSample
from realhilbert.linalg import expm, nullspace, opnorm
from realhilbert.spectral import (
    apply_function,
    commutation_propagation_check,
    is_positive,
    polar,
    pvm_of,
    sqrt_psd,
    stone_generator,
)
from realhilbert.structures import J0


def test_pvm_examples():
    pvm = pvm_of(np.diag([1.0, 1.0, 5.0]))
    assert np.allclose(pvm.eigenvalues, [1.0, 5.0])
    assert pvm.ranks == [2, 1]
    pvm = pvm_of(np.eye(3))
    assert len(pvm.blocks) == 1 and np.allclose(pvm.projectors[0], np.eye(3))


def test_pvm_clusters_near_degenerate():
    pvm = pvm_of(np.diag([1.0, 1.0 + 1e-9, 2.0]))
    assert pvm.ranks == [2, 1]
    p = pvm.projectors[0]
    assert opnorm(p @ p - p) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**31))
def test_pvm_reconstructs(n, seed):
    g = np.random.default_rng(seed)
    a = g.standard_normal((n, n))
    a = a + a.T
    assert opnorm(apply_function(pvm_of(a), lambda x: x) - a) <= 1e-8


def test_apply_function_examples():
    assert np.allclose(apply_function(pvm_of(np.diag([2.0, 3.0])), lambda x: x * x), np.diag([4.0, 9.0]))
    step = apply_function(pvm_of(np.diag([1.0, 5.0])), lambda x: float(x > 2))
    assert np.allclose(step, np.diag([0.0, 1.0]))
    with pytest.raises(FunctionUndefinedAtEigenvalue):
        apply_function(pvm_of(np.diag([0.0, 1.0])), lambda x: 1.0 / x if x else np.inf)


def test_sqrt_psd(rng):
    assert np.allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    assert np.allclose(sqrt_psd(np.eye(3)), np.eye(3))
    a = rng.standard_normal((5, 5))
    _, s, vt = np.linalg.svd(a)
    assert np.allclose(sqrt_psd(a.T @ a), vt.T @ np.diag(s) @ vt)
    with pytest.raises(NotPositive):
        sqrt_psd(np.diag([1.0, -1.0]))


def test_is_positive(rng):
    assert is_positive(np.diag([1.0, 2.0]))
    assert not is_positive(np.diag([1.0, -1.0]))
    b = rng.standard_normal((4, 4))
    assert is_positive(b.T @ b)


def test_polar_examples():
    pd = polar(J0)
    assert np.allclose(pd.u, J0) and np.allclose(pd.p, np.eye(2))
    pd = polar(2.5 * J0)
    assert np.allclose(pd.u, J0) and np.allclose(pd.p, 2.5 * np.eye(2))
    pd = polar(np.diag([2.0, -3.0]))
    assert np.allclose(pd.u, np.diag([1.0, -1.0])) and np.allclose(pd.p, np.diag([2.0, 3.0]))


def test_polar_rank_deficient_kernels(rng):
    a = rng.standard_normal((6, 3)) @ rng.standard_normal((3, 6))
    pd = polar(a)
    assert pd.kernel_dim == 3
    ku, kp = nullspace(pd.u), nullspace(pd.p)
    assert ku.shape[1] == kp.shape[1] == 3
    # same subspace
    assert opnorm(ku @ ku.T - kp @ kp.T) <= 1e-8


def test_polar_uniqueness_second_route(rng):
    a = rng.standard_normal((5, 5))
    pd = polar(a)
    w, v = np.linalg.eigh(a.T @ a)
    u2 = a @ v @ np.diag(w ** -0.5) @ v.T
    assert opnorm(pd.u - u2) <= 100 * 1e-9
    assert opnorm(pd.p - a.T @ a @ v @ np.diag(w ** -0.5) @ v.T) <= 100 * 1e-9


def test_polar_antisymmetric_injective(rng):
    a = random_antisymmetric(rng, 6)
    pd = polar(a)
    assert opnorm(pd.u.T @ pd.u - np.eye(6)) <= 1e-9
    assert opnorm(pd.u + pd.u.T) <= 1e-9
    assert opnorm(pd.u @ a - a @ pd.u) <= 1e-9


def test_stone_examples():
    g = stone_generator(lambda t: expm(t * 1.7 * J0), h=0.01)
    assert opnorm(g.generator - 1.7 * J0) <= 1e-9
    g = stone_generator(lambda t: np.eye(3))
    assert np.array_equal(g.generator, np.zeros((3, 3)))


def test_stone_consistency(rng):
    a = random_antisymmetric(rng, 5)
    g = stone_generator(lambda t: expm(t * a), h=0.01).generator
    for t in (0.5, 1.0):
        assert opnorm(expm(t * g) - expm(t * a)) <= 1e-4 + 1e-8


def test_stone_rejects_non_orthogonal():
    with pytest.raises(NotUnitaryAtSample):
        stone_generator(lambda t: np.diag([np.exp(t), np.exp(-t)]))
    with pytest.raises(NotUnitaryAtSample):
        stone_generator(lambda t: 2 * np.eye(2))


def test_commutation_propagation(rng):
    a = random_antisymmetric(rng, 4)
    rep = commutation_propagation_check(a, a)
    assert rep["commutes"] and all(v <= 1e-12 for v in rep["residuals"].values())
    b = 0.3 * np.eye(4) + a @ a - 2 * a @ a @ a
    rep = commutation_propagation_check(a, b)
    assert rep["contract_holds"] and max(rep["residuals"].values()) <= 1e-9
    rep = commutation_propagation_check(a, rng.standard_normal((4, 4)))
    assert rep["non_commuting"] and rep["residuals"]["[b,a]"] > 1e-9


def test_polar_of_conjugated(rng):
    o = random_orthogonal(rng, 4)
    a = rng.standard_normal((4, 4))
    pd, pd2 = polar(a), polar(o @ a @ o.T)
    assert opnorm(pd2.u - o @ pd.u @ o.T) <= 1e-9
