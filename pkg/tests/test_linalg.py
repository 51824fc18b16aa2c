import random
from fractions import Fraction

import pytest

from dglforge.linalg import (
    IncrementalSpan,
    SparseMatrix,
    feasible_mod,
    infeasibility_witness,
    kernel_basis,
    rank,
    rank_mod,
    solve,
)

F = Fraction


def mat(rows):
    return SparseMatrix.from_rows([[F(x) for x in r] for r in rows])


def test_rank_proportional_rows():
    # second row is twice the first
    assert rank(mat([[1, 2], [2, 4]])) == 1


def test_rank_identity_and_zero():
    assert rank(mat([[1, 0], [0, 1]])) == 2
    assert rank(SparseMatrix(3, 4, {})) == 0


def test_solve_unique():
    m = mat([[2, 1], [1, 3]])
    x = solve(m, [F(5), F(10)])
    assert m.mul_vector(x) == [F(5), F(10)]


def test_solve_inconsistent_returns_none():
    m = mat([[1, 2], [2, 4]])
    assert solve(m, [F(1), F(3)]) is None


def test_solve_underdetermined_minimal_support():
    # one equation, three unknowns: free variables stay zero
    m = mat([[0, 1, 1]])
    x = solve(m, [F(7)])
    assert m.mul_vector(x) == [F(7)]
    assert sum(1 for v in x if v) == 1


def test_kernel_of_sum_functional():
    m = mat([[1, 1, 0]])
    basis = kernel_basis(m)
    assert len(basis) == 2
    for v in basis:
        assert m.mul_vector(v) == [F(0)]


def test_kernel_plus_rank_is_ncols_random():
    rng = random.Random(7)
    for _ in range(12):
        n_rows, n_cols = rng.randint(1, 8), rng.randint(1, 8)
        entries = {}
        for i in range(n_rows):
            for j in range(n_cols):
                if rng.random() < 0.4:
                    entries[(i, j)] = F(rng.randint(-4, 4))
        m = SparseMatrix(n_rows, n_cols, entries)
        assert rank(m) + len(kernel_basis(m)) == n_cols
        for v in kernel_basis(m):
            assert all(c == 0 for c in m.mul_vector(v))


def test_solve_random_invertible_10x10():
    rng = random.Random(20260824)
    while True:
        rows = [[F(rng.randint(-9, 9)) for _ in range(10)] for _ in range(10)]
        m = SparseMatrix.from_rows(rows)
        if rank(m) == 10:
            break
    b = [F(rng.randint(-20, 20)) for _ in range(10)]
    x = solve(m, b)
    assert m.mul_vector(x) == b


def test_infeasibility_witness_verified():
    m = mat([[1, 2], [2, 4], [0, 0]])
    b = [F(1), F(3), F(0)]
    y = infeasibility_witness(m, b)
    assert y is not None
    assert all(v == 0 for v in m.left_mul_vector(y))
    assert sum(yi * bi for yi, bi in zip(y, b)) == 1
    # consistent system has no witness
    assert infeasibility_witness(m, [F(1), F(2), F(0)]) is None


def test_witness_random_inconsistent():
    rng = random.Random(99)
    hits = 0
    for _ in range(30):
        n_rows, n_cols = rng.randint(2, 7), rng.randint(1, 5)
        entries = {}
        for i in range(n_rows):
            for j in range(n_cols):
                if rng.random() < 0.5:
                    entries[(i, j)] = F(rng.randint(-3, 3))
        m = SparseMatrix(n_rows, n_cols, entries)
        b = [F(rng.randint(-3, 3)) for _ in range(n_rows)]
        x = solve(m, b)
        y = infeasibility_witness(m, b)
        if x is None:
            hits += 1
            assert y is not None
            assert all(v == 0 for v in m.left_mul_vector(y))
            assert sum(yi * bi for yi, bi in zip(y, b)) == 1
        else:
            assert y is None
            assert m.mul_vector(x) == b
    assert hits > 0  # the sample must actually exercise the witness path


@pytest.mark.parametrize("p", [10007, 46337])
def test_modular_prepass_agrees_with_exact(p):
    rng = random.Random(p)
    for _ in range(15):
        n_rows, n_cols = rng.randint(1, 7), rng.randint(1, 7)
        entries = {}
        for i in range(n_rows):
            for j in range(n_cols):
                if rng.random() < 0.5:
                    entries[(i, j)] = F(rng.randint(-5, 5), rng.randint(1, 4))
        m = SparseMatrix(n_rows, n_cols, entries)
        assert rank_mod(m, p) == rank(m)  # generic: no unlucky prime here
        b = [F(rng.randint(-3, 3)) for _ in range(n_rows)]
        exact = solve(m, b) is not None
        assert feasible_mod(m, b, p) == exact


def test_incremental_span_membership():
    span = IncrementalSpan()
    assert span.add({"x": F(1), "y": F(2)})
    assert not span.add({"x": F(2), "y": F(4)})
    assert span.add({"y": F(1)})
    assert span.dimension == 2
    assert span.contains({"x": F(5), "y": F(-1)})
    assert not span.contains({"z": F(1)})
