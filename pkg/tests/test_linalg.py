"""Exact linear algebra: examples, and rank-nullity style properties."""

import random
from fractions import Fraction

import pytest

from pathring.linalg import (
    SparseMatrix,
    SubspaceNotContained,
    kernel_basis,
    linear_expander,
    quotient_basis,
    rank,
    rational,
    solve,
)


def dense(rows):
    return SparseMatrix.from_dense([[Fraction(x) for x in row] for row in rows])


def test_rational_parsing():
    assert rational("3/7") == Fraction(3, 7)
    assert rational("-2") == Fraction(-2)
    assert rational(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(TypeError):
        rational(object())


def test_sparse_matrix_rejects_stored_zero():
    with pytest.raises(ValueError):
        SparseMatrix(1, 1, {(0, 0): Fraction(0)})
    with pytest.raises(ValueError):
        SparseMatrix(1, 1, {(2, 0): Fraction(1)})


def test_rank_identity():
    assert rank(SparseMatrix.identity(2)) == 2


def test_rank_zero_matrix():
    assert rank(SparseMatrix.zero(3, 4)) == 0


def test_rank_dependent_rows():
    # hand elimination: second row is twice the first
    assert rank(dense([[1, 2], [2, 4]])) == 1


def test_kernel_identity_empty():
    assert kernel_basis(SparseMatrix.identity(3)) == []


def test_kernel_zero_matrix_standard_basis():
    basis = kernel_basis(SparseMatrix.zero(2, 2))
    assert basis == [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]


def test_kernel_one_relation():
    (vec,) = kernel_basis(dense([[1, 1]]))
    assert vec[0] == -vec[1] != 0


def test_quotient_subspace_equals_cocycles():
    vecs = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    reps, _ = quotient_basis(2, vecs, vecs)
    assert reps == []


def test_quotient_trivial_subspace():
    vecs = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    reps, coords = quotient_basis(2, [], vecs)
    assert reps == vecs
    assert coords([Fraction(2), Fraction(-3)]) == [Fraction(2), Fraction(-3)]


def test_quotient_one_dimensional():
    cocycles = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    subspace = [[Fraction(1), Fraction(1)]]
    reps, coords = quotient_basis(2, subspace, cocycles)
    assert len(reps) == 1
    # both standard vectors agree modulo (1,1) up to sign
    assert coords([Fraction(1), Fraction(0)]) == [Fraction(1)]
    assert coords([Fraction(0), Fraction(1)]) == [Fraction(-1)]


def test_quotient_requires_containment():
    with pytest.raises(SubspaceNotContained):
        quotient_basis(2, [[Fraction(0), Fraction(1)]], [[Fraction(1), Fraction(0)]])


def random_matrix(rng, rows, cols):
    entries = {}
    for i in range(rows):
        for j in range(cols):
            if rng.random() < 0.6:
                v = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                if v:
                    entries[(i, j)] = v
    return SparseMatrix(rows, cols, entries)


def test_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(40):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = random_matrix(rng, rows, cols)
        kernel = kernel_basis(m)
        assert rank(m) + len(kernel) == cols
        for vec in kernel:
            assert m.apply(vec) == [Fraction(0)] * rows


def test_quotient_representatives_independent_mod_subspace():
    rng = random.Random(11)
    for _ in range(25):
        dim = rng.randint(2, 5)
        m = random_matrix(rng, rng.randint(1, 4), dim)
        cocycles = kernel_basis(m)
        if not cocycles:
            continue
        k = rng.randint(0, len(cocycles))
        subspace = []
        for _ in range(k):
            combo = [Fraction(0)] * dim
            for vec in cocycles:
                c = Fraction(rng.randint(-2, 2))
                combo = [a + c * b for a, b in zip(combo, vec)]
            subspace.append(combo)
        reps, coords = quotient_basis(dim, subspace, cocycles)
        sub_rank = rank(SparseMatrix.from_dense(subspace)) if subspace else 0
        assert len(reps) == len(cocycles) - sub_rank
        if reps:
            stacked = rank(SparseMatrix.from_dense(reps + subspace))
            assert stacked == len(reps) + sub_rank
        # coordinates reproduce a random combination
        combo = [Fraction(0)] * dim
        expected = []
        for vec in reps:
            c = Fraction(rng.randint(-3, 3))
            expected.append(c)
            combo = [a + c * b for a, b in zip(combo, vec)]
        if subspace:
            combo = [a + b for a, b in zip(combo, subspace[0])]
        assert coords(combo) == expected


def test_solve_particular_and_inconsistent():
    m = dense([[1, 2], [3, 4]])
    sol = solve(m, [Fraction(5), Fraction(11)])
    assert m.apply(sol) == [Fraction(5), Fraction(11)]
    m2 = dense([[1, 1], [2, 2]])
    assert solve(m2, [Fraction(1), Fraction(3)]) is None
    assert solve(m2, [Fraction(1), Fraction(2)]) is not None


def test_solve_random_consistent_systems():
    rng = random.Random(3)
    for _ in range(30):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = random_matrix(rng, rows, cols)
        x = [Fraction(rng.randint(-3, 3)) for _ in range(cols)]
        rhs = m.apply(x)
        sol = solve(m, rhs)
        assert sol is not None
        assert m.apply(sol) == rhs


def test_linear_expander_round_trip():
    basis = [[Fraction(1), Fraction(1), Fraction(0)], [Fraction(0), Fraction(1), Fraction(1)]]
    expand = linear_expander(basis)
    target = [Fraction(2), Fraction(5), Fraction(3)]
    coeffs = expand(target)
    assert coeffs == [Fraction(2), Fraction(3)]
    with pytest.raises(ValueError):
        expand([Fraction(1), Fraction(0), Fraction(0)])
    with pytest.raises(ValueError):
        linear_expander(basis + [[Fraction(1), Fraction(2), Fraction(1)]])


def test_compose_and_columns():
    a = dense([[1, 0], [1, 1]])
    b = dense([[2, 1], [0, 1]])
    assert a.compose(b).entries == dense([[2, 1], [2, 2]]).entries
    assert b.column(1) == [Fraction(1), Fraction(1)]
