"""
@file: tests/unit/test_linalg.py
@description: Модульные тесты точной линейной алгебры над F_q: исключение, ядро, Видеман
@dependencies: pytest, numpy
@created: 2025-01-21
"""

import numpy as np
import pytest

from algebra.linalg import (
    DenseMatrix,
    EchelonAccumulator,
    SparseMatrix,
    batch_rank,
    berlekamp_massey,
    determinant,
    inverse,
    matrix_rank,
    right_kernel,
    rref,
    solve,
    wiedemann_kernel_element,
)
from utils.error_handler import PreconditionError


def _singular(n: int, q: int, rng, defect: int = 1) -> np.ndarray:
    """Случайная n×n матрица с ядром размерности не меньше defect"""
    A = rng.integers(0, q, size=(n, n - defect))
    mix = rng.integers(0, q, size=(n - defect, defect))
    return np.hstack([A, A @ mix % q])


@pytest.mark.unit
@pytest.mark.linalg
class TestDenseElimination:
    """Тестирование плотного исключения"""

    def test_rref_known_matrix(self):
        """Тест приведенной формы небольшой матрицы над F_13"""
        M = DenseMatrix.from_rows([[2, 4, 6], [1, 2, 4], [0, 0, 1]], 13)
        R, rank, pivots = rref(M)
        assert rank == 2
        assert pivots == [0, 2]
        assert R.entries[0].tolist() == [1, 2, 0]
        assert R.entries[1].tolist() == [0, 0, 1]

    @pytest.mark.parametrize("q", [2, 13])
    def test_kernel_is_annihilated(self, q, rng):
        """Тест: M v = 0 для векторов базиса ядра, размерность = cols - rank"""
        M = _singular(12, q, rng, defect=3)
        kernel = right_kernel(M, q)
        assert kernel.shape[0] == 12 - matrix_rank(M, q)
        assert not (M @ kernel.T % q).any()

    @pytest.mark.parametrize("q", [2, 13])
    def test_solve(self, q, rng):
        M = rng.integers(0, q, size=(15, 10))
        x = rng.integers(0, q, size=10)
        found = solve(M, M @ x % q, q)
        assert found is not None
        assert np.array_equal(M @ found % q, M @ x % q)

    def test_solve_inconsistent(self):
        M = np.array([[1, 0], [1, 0]])
        assert solve(M, [0, 1], 13) is None

    def test_determinant_and_inverse(self, rng):
        """Тест: det(A)·det(A^-1) = 1 и A·A^-1 = I"""
        while True:
            A = rng.integers(0, 13, size=(6, 6))
            if determinant(A, 13):
                break
        Ainv = inverse(A, 13)
        assert np.array_equal(A @ Ainv % 13, np.eye(6, dtype=np.int64))
        assert determinant(A, 13) * determinant(Ainv, 13) % 13 == 1

    def test_singular_has_no_inverse(self, rng):
        assert inverse(_singular(5, 13, rng), 13) is None
        assert determinant(_singular(5, 13, rng), 13) == 0

    def test_batch_rank_matches_single(self, rng):
        stack = rng.integers(0, 13, size=(20, 5, 4))
        stack[::3, :, -1] = 0
        assert batch_rank(stack, 13).tolist() == [matrix_rank(M, 13) for M in stack]

    def test_gf2_packed_path_agrees(self, rng):
        """Тест: упакованное исключение над GF(2) дает тот же ранг, что и общий путь"""
        M = rng.integers(0, 2, size=(70, 130))
        acc = EchelonAccumulator(130, 2)
        for start in range(0, 70, 16):
            acc.add_rows(M[start:start + 16])
        assert acc.rank == matrix_rank(M, 2) == batch_rank(M[None], 2)[0]
        assert not (M @ acc.right_kernel().T % 2).any()

    def test_accumulator_rejects_wrong_width(self):
        with pytest.raises(PreconditionError):
            EchelonAccumulator(4, 13).add_rows(np.zeros((1, 5), dtype=np.int64))


@pytest.mark.unit
@pytest.mark.linalg
class TestSparse:
    """Тестирование разреженных матриц"""

    def test_duplicates_are_summed(self):
        """Тест: повторяющиеся тройки суммируются, нули отбрасываются"""
        M = SparseMatrix.from_triplets([0, 0, 1, 1], [2, 2, 0, 0], [5, 6, 3, 10], (2, 3), 13)
        assert M.row(0) == [(2, 11)]
        assert M.row(1) == []
        assert M.nnz == 1

    def test_matvec_matches_dense(self, rng):
        dense = rng.integers(0, 13, size=(9, 7)) * (rng.random((9, 7)) < 0.3)
        M = SparseMatrix.from_dense(dense, 13)
        v = rng.integers(0, 13, size=7)
        u = rng.integers(0, 13, size=9)
        assert np.array_equal(M.matvec(v), dense @ v % 13)
        assert np.array_equal(M.rmatvec(u), u @ dense % 13)
        assert np.array_equal(M.dense_block(2, 6), dense[2:6] % 13)

    def test_out_of_range_triplet(self):
        with pytest.raises(PreconditionError):
            SparseMatrix.from_triplets([0], [5], [1], (2, 3), 13)


@pytest.mark.unit
@pytest.mark.linalg
class TestWiedemann:
    """Тестирование алгоритма Видемана"""

    def test_berlekamp_massey_fibonacci(self):
        """Тест: последовательность Фибоначчи имеет многочлен связи 1 - x - x^2"""
        seq = [1, 1]
        for _ in range(10):
            seq.append((seq[-1] + seq[-2]) % 13)
        C, L = berlekamp_massey(seq, 13)
        assert L == 2
        assert C.tolist() == [1, 12, 12]

    @pytest.mark.parametrize("q", [2, 13])
    def test_kernel_element_square(self, q, rng):
        """Тест: найденный вектор ненулевой и лежит в ядре"""
        dense = _singular(40, q, rng)
        M = SparseMatrix.from_dense(dense, q)
        v = wiedemann_kernel_element(M, seed=7, retries=24)
        assert v is not None and v.any()
        assert not M.matvec(v).any()

    def test_kernel_element_rectangular(self, rng):
        """Тест: переопределенная система с ядром размерности 1 (как в линеаризации)"""
        base = _singular(30, 13, rng)
        dense = np.vstack([base, rng.integers(0, 13, size=(20, 30)) @ base % 13])
        M = SparseMatrix.from_dense(dense, 13)
        v = wiedemann_kernel_element(M, seed=3, retries=24)
        assert v is not None and v.any()
        assert not M.matvec(v).any()

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [2, 13])
    def test_agrees_with_dense_on_many_matrices(self, q):
        """Тест: на 50 случайных вырожденных матрицах вектор Видемана лежит в плотном ядре"""
        rng = np.random.default_rng(31 + q)
        for trial in range(50):
            n = int(rng.integers(12, 30))
            dense = _singular(n, q, rng, defect=int(rng.integers(1, 3)))
            kernel = right_kernel(dense, q)
            v = wiedemann_kernel_element(SparseMatrix.from_dense(dense, q), seed=trial, retries=32)
            assert v is not None and v.any()
            assert matrix_rank(np.vstack([kernel, v]), q) == kernel.shape[0]

    def test_invertible_has_trivial_kernel(self, rng):
        while True:
            dense = rng.integers(0, 13, size=(25, 25))
            if matrix_rank(dense, 13) == 25:
                break
        assert wiedemann_kernel_element(SparseMatrix.from_dense(dense, 13), seed=1) is None

    def test_agrees_with_dense_kernel(self, rng):
        """Тест: вектор Видемана пропорционален единственному вектору плотного ядра"""
        dense = _singular(20, 13, rng)
        kernel = right_kernel(dense, 13)
        if kernel.shape[0] != 1:
            pytest.skip("случайная матрица получила ядро размерности больше 1")
        v = wiedemann_kernel_element(SparseMatrix.from_dense(dense, 13), seed=5, retries=24)
        assert matrix_rank(np.vstack([kernel, v]), 13) == 1
