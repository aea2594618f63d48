from __future__ import annotations

import time

import numpy as np
import pytest

from conftest import random_orthogonal
from realhilbert.errors import NotIrreducible
from realhilbert.linalg import opnorm
from realhilbert.poincare import realify
from realhilbert.structures import J0, ComplexStructure, quaternion_left, quaternion_right
from realhilbert.vnalg import (
    CommutantKind,
    classify,
    commutant,
    double_commutant,
    generate_algebra,
    is_irreducible,
    is_irreducible_complex,
    lattice_double_commutant_gap,
    pin_sign,
    projector_sublattice,
    same_span,
)


def so3():
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k], eps[i, k, j] = 1.0, -1.0
    return [-eps[i] for i in range(3)]


def quaternion_units():
    return [quaternion_left(np.eye(4)[i]) for i in (1, 2, 3)]


def example_algebra():
    j = np.zeros((3, 3))
    j[:2, :2] = J0
    return [np.eye(3), j, j @ j], j


def test_generate_algebra_examples():
    assert generate_algebra([], n=3).dim == 1
    assert generate_algebra([J0]).dim == 2
    assert generate_algebra(so3()).dim == 9


def test_commutant_examples():
    assert commutant([np.eye(3)]).dim == 9
    assert commutant(so3()).dim == 1
    c = commutant([J0])
    assert c.dim == 2 and c.contains(J0) and c.contains(np.eye(2))
    c = commutant(quaternion_units())
    assert c.dim == 4
    for e in np.eye(4):
        assert c.contains(quaternion_right(e))


def test_commutant_matches_kronecker_oracle(rng):
    # independent oracle: nullspace of the stacked Sylvester operator via column-major vec
    gens = [rng.standard_normal((4, 4)) for _ in range(2)]
    gens = [g + g.T for g in gens] + [np.diag([1.0, 1.0, 2.0, 2.0])]
    blocks = [np.kron(np.eye(4), g) - np.kron(g.T, np.eye(4)) for g in gens]
    s = np.linalg.svd(np.vstack(blocks), compute_uv=False)
    oracle_dim = int(np.sum(s <= 1e-10 * s[0])) + (16 - len(s))
    assert commutant(gens).dim == oracle_dim


def test_direct_and_reduced_commutants_agree(rng):
    o = random_orthogonal(rng, 8)
    gens = [o @ np.kron(np.eye(2), q) @ o.T for q in quaternion_units()]
    direct = commutant(gens, method="direct")
    reduced = commutant(gens, method="reduced")
    ok, angle = same_span(direct, reduced)
    assert ok and angle <= 1e-8


def test_is_irreducible_examples():
    assert is_irreducible(so3())
    blocks = [np.kron(np.eye(2), e) for e in (np.diag([1.0, 0.0]), np.array([[0.0, 1.0], [0.0, 0.0]]))]
    assert not is_irreducible(blocks)
    assert is_irreducible([J0])


def test_classify_trichotomy():
    assert classify(so3()).kind is CommutantKind.REAL_REAL
    cl = classify([J0])
    assert cl.kind is CommutantKind.REAL_COMPLEX
    assert np.allclose(np.abs(cl.j.j), np.abs(J0))
    assert opnorm(cl.j.j @ cl.j.j + np.eye(2)) <= 1e-9
    cl = classify(quaternion_units())
    assert cl.kind is CommutantKind.REAL_QUATERNIONIC and cl.commutant_dim == 4
    assert opnorm(cl.j.j @ cl.k.j + cl.k.j @ cl.j.j) <= 1e-9


def test_classify_sign_is_pinned(rng):
    cl = classify([J0])
    first = cl.j.j.reshape(-1)[np.abs(cl.j.j.reshape(-1)) > 1e-9][0]
    assert first > 0
    assert np.array_equal(pin_sign(-cl.j.j), cl.j.j)


def test_classify_rejects_reducible():
    with pytest.raises(NotIrreducible):
        classify([np.diag([1.0, 0.0, 0.0])])


def test_schur_form():
    # irreducible complex-type algebra: conjugated copy of C acting on R^2 x ... irreducibly
    gens = [J0]
    cl = classify(gens)
    for x in cl.commutant.basis:
        a = np.trace(x) / 2
        b = -np.trace(cl.j.j @ x) / 2
        assert opnorm(x - a * np.eye(2) - b * cl.j.j) <= 1e-9


def test_double_commutant_random(rng):
    for _ in range(3):
        g = rng.standard_normal((4, 4))
        alg = generate_algebra([np.kron(np.eye(2), g + g.T)])
        ok, angle = same_span(alg, double_commutant(alg))
        assert ok and angle <= 1e-8


def test_full_lattice_commutant_is_trivial():
    n = 4
    eye = np.eye(n)
    atoms = [np.outer(e, e) for e in eye]
    atoms += [np.outer(eye[i] + eye[j], eye[i] + eye[j]) / 2 for i in range(n) for j in range(i + 1, n)]
    assert commutant(atoms).dim == 1


def test_quaternionic_complement():
    units = quaternion_units()
    alg = generate_algebra(units)
    j = classify(units).j.j
    mats = [a for a in alg.basis] + [j @ b for b in alg.basis]
    flat = np.array([m.reshape(-1) for m in mats])
    assert np.linalg.matrix_rank(flat, tol=1e-9) == 8
    # the j-commuting matrices form an 8-dimensional space
    assert commutant([j]).dim == 8
    assert all(opnorm(m @ j - j @ m) <= 1e-9 for m in mats)


def test_projector_sublattice_examples():
    lat = projector_sublattice([np.eye(3)])
    assert len(lat) == 2
    gens, j = example_algebra()
    lat = projector_sublattice(gens)
    p = -j @ j
    expected = [np.zeros((3, 3)), np.eye(3), p, np.eye(3) - p]
    assert len(lat) == 4
    for e in expected:
        assert any(np.allclose(e, q) for q in lat)
    for q in projector_sublattice(generate_algebra([np.array([[1.0, 2.0], [0.0, 1.0]])])):
        assert opnorm(q @ q - q) <= 1e-9 and opnorm(q - q.T) <= 1e-9


def test_lattice_gap_example():
    gens, j = example_algebra()
    gap = lattice_double_commutant_gap(gens)
    assert (gap.dim_lattice_dc, gap.dim_alg) == (2, 3) and gap.strict
    assert any(np.allclose(w, j, atol=1e-9) or np.allclose(w, -j, atol=1e-9) for w in gap.witnesses)


def test_lattice_gap_full_and_trivial():
    full = [np.eye(3)[i][:, None] @ np.eye(3)[j][None] for i in range(3) for j in range(3)]
    gap = lattice_double_commutant_gap(full)
    assert (gap.dim_lattice_dc, gap.dim_alg) == (9, 9) and not gap.strict
    gap = lattice_double_commutant_gap([np.eye(2)])
    assert (gap.dim_lattice_dc, gap.dim_alg) == (1, 1)


def test_is_irreducible_complex():
    # spin-1/2: complex irreducible doublet realified to R^4
    sx = np.array([[0, 1], [1, 0]], complex) / 2
    sy = np.array([[0, -1j], [1j, 0]]) / 2
    sz = np.array([[1, 0], [0, -1]], complex) / 2
    gens = [realify(-1j * s) for s in (sx, sy, sz)]
    j = ComplexStructure(np.kron(np.eye(2), J0))
    assert is_irreducible_complex(gens, j)
    assert is_irreducible_complex([np.eye(2), J0], ComplexStructure(J0))
    doubled = [realify(np.kron(np.eye(2), -1j * s)) for s in (sx, sy, sz)]
    assert not is_irreducible_complex(doubled, ComplexStructure(np.kron(np.eye(4), J0)))


def test_classify_is_fast():
    t0 = time.perf_counter()
    classify(so3())
    classify([J0])
    classify(quaternion_units())
    assert time.perf_counter() - t0 < 3.0
