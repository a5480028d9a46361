"""Shared brute-force oracles for the test suite.

raw_choi assembles sum_ij e_ij x f(e_ij) directly, with no Hermiticity
gate, so individual non-self-adjoint maps (single 3-cycles) can be
compared entrywise against basis elements.
"""

import numpy as np

from equimap.linalg import complex_gaussian
from equimap.perms import enumerate_sym


def raw_choi(fn, n, N):
    C = np.zeros((n * N, n * N), dtype=complex)
    unit = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            unit[i, j] = 1.0
            C[i * N : (i + 1) * N, j * N : (j + 1) * N] = fn(unit)
            unit[i, j] = 0.0
    return C


def random_paired_coeffs(k1, rng):
    """Random coefficients satisfying f(pi^-1) = conj(f(pi)): real on
    involutions, conjugate pairs elsewhere."""
    coeffs = {}
    for p in enumerate_sym(k1):
        if p in coeffs:
            continue
        q = p.inverse()
        if q == p:
            coeffs[p] = complex(rng.standard_normal())
        else:
            c = complex(complex_gaussian(rng, (1, 1))[0, 0])
            coeffs[p] = c
            coeffs[q] = c.conjugate()
    return coeffs
