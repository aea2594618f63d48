from __future__ import annotations

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_antisymmetric(rng, n, scale=1.0):
    a = rng.standard_normal((n, n))
    return scale * (a - a.T) / 2


def spin_matrices(s2):
    """Spin ``s = s2/2`` matrices (S_x, S_y, S_z) in the |s, m> basis, m descending."""
    s = s2 / 2
    m = np.arange(s, -s - 1, -1)
    sp = np.zeros((s2 + 1, s2 + 1), complex)
    for k in range(1, s2 + 1):
        sp[k - 1, k] = np.sqrt(s * (s + 1) - m[k] * (m[k] + 1))
    sx = (sp + sp.T) / 2
    sy = (sp - sp.T) / 2j
    return sx, sy, np.diag(m).astype(complex)
