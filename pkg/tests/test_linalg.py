"""Tensor-leg bookkeeping, partial transposition, and seeded sampling."""

import numpy as np
import pytest

from equimap.errors import ContractViolation, ParameterError, ShapeError
from equimap.linalg import (
    TensorShape,
    as_matrix,
    check_seed,
    complex_gaussian,
    frobenius_norm,
    haar_from_rng,
    haar_unitary,
    hermitian_eig,
    kron,
    kron_all,
    matrix_rank,
    partial_transpose,
    rng_from_seed,
    subseed,
)


def _rng(seed=0):
    return rng_from_seed(seed)


class TestTensorShape:
    def test_flatten_is_big_endian(self):
        shape = TensorShape(legs=3, dim=2)
        assert shape.flatten((1, 0, 1)) == 5
        assert shape.flatten((0, 0, 0)) == 0
        assert shape.flatten((1, 1, 1)) == 7

    def test_flatten_unflatten_round_trip(self):
        shape = TensorShape(legs=3, dim=3)
        for flat in range(shape.total):
            assert shape.flatten(shape.unflatten(flat)) == flat

    def test_out_of_range_rejected(self):
        shape = TensorShape(legs=2, dim=2)
        with pytest.raises(ShapeError):
            shape.flatten((0, 2))
        with pytest.raises(ShapeError):
            shape.flatten((0, 0, 0))
        with pytest.raises(ShapeError):
            shape.unflatten(4)

    def test_degenerate_parameters_rejected(self):
        with pytest.raises(ParameterError):
            TensorShape(legs=0, dim=2)
        with pytest.raises(ParameterError):
            TensorShape(legs=1, dim=0)


def test_kron_left_factor_is_most_significant():
    # kron(A, B)[flatten(i1,i2), flatten(j1,j2)] = A[i1,j1] B[i2,j2]
    rng = _rng(11)
    A = complex_gaussian(rng, (2, 2))
    B = complex_gaussian(rng, (3, 3))
    K = kron(A, B)
    for i1 in range(2):
        for i2 in range(3):
            for j1 in range(2):
                for j2 in range(3):
                    # last-ulp slack: vectorized multiply may fuse
                    assert abs(
                        K[i1 * 3 + i2, j1 * 3 + j2] - A[i1, j1] * B[i2, j2]
                    ) < 1e-15


def test_kron_all_matches_repeated_kron():
    rng = _rng(12)
    mats = [complex_gaussian(rng, (2, 2)) for _ in range(3)]
    expected = kron(kron(mats[0], mats[1]), mats[2])
    assert np.array_equal(kron_all(mats), expected)
    assert np.array_equal(kron_all([]), np.eye(1))


class TestPartialTranspose:
    def test_single_leg_on_product(self):
        rng = _rng(21)
        A = complex_gaussian(rng, (3, 3))
        B = complex_gaussian(rng, (3, 3))
        M = np.kron(A, B)
        shape = TensorShape(legs=2, dim=3)
        assert np.allclose(partial_transpose(M, shape, [1]), np.kron(A.T, B))
        assert np.allclose(partial_transpose(M, shape, [2]), np.kron(A, B.T))

    def test_all_legs_is_full_transpose(self):
        rng = _rng(22)
        shape = TensorShape(legs=3, dim=2)
        M = complex_gaussian(rng, (8, 8))
        assert np.array_equal(partial_transpose(M, shape, [1, 2, 3]), M.T)

    def test_involution_and_commutation(self):
        rng = _rng(23)
        shape = TensorShape(legs=2, dim=3)
        M = complex_gaussian(rng, (9, 9))
        once = partial_transpose(M, shape, [1])
        assert np.array_equal(partial_transpose(once, shape, [1]), M)
        ab = partial_transpose(partial_transpose(M, shape, [1]), shape, [2])
        ba = partial_transpose(partial_transpose(M, shape, [2]), shape, [1])
        assert np.array_equal(ab, ba)

    def test_entry_oracle(self):
        # PT on leg 2 of a 2-leg matrix swaps the second row/column digits.
        shape = TensorShape(legs=2, dim=2)
        M = np.arange(16.0).reshape(4, 4)
        T = partial_transpose(M, shape, [2])
        for i1 in range(2):
            for i2 in range(2):
                for j1 in range(2):
                    for j2 in range(2):
                        assert (
                            T[i1 * 2 + i2, j1 * 2 + j2]
                            == M[i1 * 2 + j2, j1 * 2 + i2]
                        )

    def test_bad_inputs(self):
        shape = TensorShape(legs=2, dim=2)
        with pytest.raises(ShapeError):
            partial_transpose(np.eye(3), shape, [1])
        with pytest.raises(ParameterError):
            partial_transpose(np.eye(4), shape, [3])


class TestHermitianEig:
    def test_reconstruction_and_order(self):
        rng = _rng(31)
        Z = complex_gaussian(rng, (6, 6))
        H = Z + Z.conj().T
        vals, vecs = hermitian_eig(H)
        assert np.all(np.diff(vals) >= 0)
        recon = (vecs * vals) @ vecs.conj().T
        assert frobenius_norm(recon - H) <= 1e-12 * max(1.0, frobenius_norm(H))

    def test_rejects_non_hermitian(self):
        M = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ContractViolation):
            hermitian_eig(M)

    def test_tolerates_roundoff_asymmetry(self):
        H = np.diag([1.0, 2.0]).astype(complex)
        H[0, 1] = 1e-14
        vals, _ = hermitian_eig(H)
        assert np.allclose(vals, [1.0, 2.0])

    def test_rejects_non_square(self):
        with pytest.raises(ShapeError):
            hermitian_eig(np.zeros((2, 3)))


def test_matrix_rank_counts_relative_singular_values():
    U = haar_unitary(4, 5)
    M = U @ np.diag([1.0, 0.5, 1e-13, 0.0]) @ U.conj().T
    assert matrix_rank(M) == 2
    assert matrix_rank(np.zeros((3, 3))) == 0
    assert matrix_rank(np.eye(3), tol=1e-10) == 3
    with pytest.raises(ParameterError):
        matrix_rank(np.eye(2), tol=0.0)


def test_as_matrix_requires_two_dims():
    with pytest.raises(ShapeError):
        as_matrix([1.0, 2.0])
    out = as_matrix([[1, 2], [3, 4]])
    assert out.dtype == complex


class TestSeeds:
    def test_check_seed_range(self):
        assert check_seed(0) == 0
        assert check_seed(2**64 - 1) == 2**64 - 1
        with pytest.raises(ParameterError):
            check_seed(-1)
        with pytest.raises(ParameterError):
            check_seed(2**64)

    def test_rng_determinism(self):
        a = rng_from_seed(42).standard_normal(5)
        b = rng_from_seed(42).standard_normal(5)
        assert np.array_equal(a, b)

    def test_subseed_separates_trials(self):
        seeds = {subseed(7, i) for i in range(100)}
        assert len(seeds) == 100
        assert subseed(7, 3) == subseed(7, 3)
        assert subseed(7, 3) != subseed(8, 3)


class TestHaar:
    def test_unitarity(self):
        for n in (2, 3, 5):
            U = haar_unitary(n, 123)
            assert frobenius_norm(U @ U.conj().T - np.eye(n)) < 1e-12

    def test_determinism(self):
        assert np.array_equal(haar_unitary(3, 9), haar_unitary(3, 9))
        assert not np.array_equal(haar_unitary(3, 9), haar_unitary(3, 10))

    def test_second_moment(self):
        # E |U_00|^2 = 1/n; 2000 samples put the empirical mean well
        # inside 0.03 of that for n = 2.
        rng = _rng(77)
        acc = 0.0
        trials = 2000
        for _ in range(trials):
            U = haar_from_rng(rng, 2)
            acc += abs(U[0, 0]) ** 2
        assert abs(acc / trials - 0.5) < 0.03

    def test_phase_invariance_of_first_column_mean(self):
        # Haar columns have mean zero; a plain QR without the phase fix
        # leaves a real-positive bias on the diagonal.
        rng = _rng(78)
        acc = np.zeros((), dtype=complex)
        trials = 2000
        for _ in range(trials):
            acc += haar_from_rng(rng, 2)[0, 0]
        assert abs(acc) / trials < 0.05

    def test_bad_dimension(self):
        with pytest.raises(ParameterError):
            haar_unitary(0, 1)
