"""Exact linear algebra: frozen examples plus seeded random cross-checks.

The rank routine (fraction-free Bareiss) and the kernel/solve/image routines
(rational Gauss-Jordan) are independent elimination paths; the property
tests here play them against each other through rank-nullity.
"""

import random
from fractions import Fraction

import pytest

from kvcohom.errors import DimensionError
from kvcohom.linalg import (
    Mat,
    Subspace,
    identity,
    image,
    intersect,
    inverse,
    kernel,
    mat_mul,
    membership,
    rank,
    rat,
    solve,
    vec,
    zeros,
)


def F(x):
    return Fraction(x)


def test_rat_coercions():
    assert rat(3) == F(3)
    assert rat("3/4") == Fraction(3, 4)
    assert rat("-2") == F(-2)
    assert rat(Fraction(5, 7)) == Fraction(5, 7)
    with pytest.raises(TypeError):
        rat(0.5)


def test_rank_identity_and_zero():
    assert rank(identity(2)) == 2
    assert rank(zeros(2, 2)) == 0


def test_rank_dependent_rows():
    m = Mat.from_rows([[1, 2], [2, 4]])
    assert rank(m) == 1


def test_rank_fractional_entries():
    m = Mat.from_rows([["1/2", "1/3"], ["1/4", "1/6"]])
    assert rank(m) == 1
    m2 = Mat.from_rows([["1/2", "1/3"], ["1/4", "1/5"]])
    assert rank(m2) == 2


def test_kernel_identity():
    assert kernel(identity(3)).dim == 0


def test_kernel_difference():
    k = kernel(Mat.from_rows([[1, -1]]))
    assert k.dim == 1
    assert k.contains([1, 1])


def test_kernel_dependent_rows():
    k = kernel(Mat.from_rows([[1, 2], [2, 4]]))
    assert k.dim == 1
    assert k.contains([-2, 1])


def test_solve_identity():
    assert solve(identity(2), [5, 7]) == (F(5), F(7))


def test_solve_inconsistent():
    assert solve(zeros(2, 2), [1, 0]) is None


def test_solve_underdetermined():
    m = Mat.from_rows([[1, 2], [2, 4]])
    x = solve(m, [1, 2])
    assert x is not None
    assert m.mat_vec(x) == (F(1), F(2))


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        solve(identity(2), [1, 2, 3])


def test_image_identity_full():
    assert image(identity(3)) == Subspace.full(3)


def test_membership():
    s = Subspace.from_vectors(2, [[1, 1]])
    assert membership(s, [2, 2])
    assert not membership(s, [1, 0])


def test_intersect_transverse_lines():
    s1 = Subspace.from_vectors(2, [[1, 0]])
    s2 = Subspace.from_vectors(2, [[0, 1]])
    assert intersect(s1, s2).dim == 0


def test_intersect_nontrivial():
    s1 = Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])
    s2 = Subspace.from_vectors(3, [[0, 1, 0], [0, 0, 1]])
    meet = intersect(s1, s2)
    assert meet.dim == 1
    assert meet.contains([0, 1, 0])


def test_subspace_equality_is_set_equality():
    s1 = Subspace.from_vectors(3, [[1, 1, 0], [0, 2, 0]])
    s2 = Subspace.from_vectors(3, [[1, 0, 0], [3, 5, 0]])
    assert s1 == s2


def test_subspace_coordinates_roundtrip():
    s = Subspace.from_vectors(3, [[1, 2, 0], [0, 0, 3]])
    v = [F(2), F(4), F(9)]
    coords = s.coordinates(v)
    assert coords is not None
    rebuilt = [F(0)] * 3
    for c, b in zip(coords, s.basis):
        for t in range(3):
            rebuilt[t] += c * b[t]
    assert tuple(rebuilt) == tuple(v)
    assert s.coordinates([1, 0, 0]) is None


def test_empty_shapes():
    assert rank(Mat.from_rows([], cols=3)) == 0
    assert kernel(Mat.from_rows([], cols=3)) == Subspace.full(3)
    m = Mat.from_rows([[1], [2]])
    assert m.rows == 2 and m.cols == 1


def _random_mat(rng, rows, cols, scale=6):
    entries = [
        Fraction(rng.randint(-scale, scale), rng.choice([1, 1, 1, 2, 3]))
        for _ in range(rows * cols)
    ]
    return Mat(rows, cols, tuple(entries))


def test_rank_nullity_cross_check():
    # Bareiss rank against Gauss-Jordan kernel: two elimination routes.
    rng = random.Random(20260816)
    for _ in range(200):
        rows = rng.randint(0, 5)
        cols = rng.randint(1, 5)
        m = _random_mat(rng, rows, cols)
        assert rank(m) + kernel(m).dim == cols
        for b in kernel(m).basis:
            assert all(x == 0 for x in m.mat_vec(b))


def test_rank_row_permutation_invariance():
    rng = random.Random(7)
    for _ in range(50):
        rows = rng.randint(2, 5)
        cols = rng.randint(1, 5)
        m = _random_mat(rng, rows, cols)
        perm = list(range(rows))
        rng.shuffle(perm)
        pm = Mat.from_rows([m.row(i) for i in perm], cols=cols)
        assert rank(m) == rank(pm)
        assert kernel(m) == kernel(pm)


def test_solve_agrees_with_consistency_rank():
    rng = random.Random(99)
    for _ in range(100):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = _random_mat(rng, rows, cols)
        b = [Fraction(rng.randint(-4, 4)) for _ in range(rows)]
        x = solve(m, b)
        aug = Mat.from_rows(
            [list(m.row(i)) + [b[i]] for i in range(rows)], cols=cols + 1
        )
        if x is None:
            assert rank(aug) > rank(m)
        else:
            assert m.mat_vec(x) == tuple(b)
            assert rank(aug) == rank(m)


def test_image_membership_consistency():
    rng = random.Random(3)
    for _ in range(50):
        m = _random_mat(rng, rng.randint(1, 4), rng.randint(1, 4))
        img = image(m)
        x = [Fraction(rng.randint(-3, 3)) for _ in range(m.cols)]
        assert img.contains(m.mat_vec(x))


def test_intersect_dimension_formula():
    # dim(S1) + dim(S2) = dim(S1 + S2) + dim(S1 ^ S2)
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 5)
        s1 = Subspace.from_vectors(
            n, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(0, n))]
        )
        s2 = Subspace.from_vectors(
            n, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(0, n))]
        )
        meet = s1.intersect(s2)
        join = s1.add(s2)
        assert s1.dim + s2.dim == join.dim + meet.dim
        for b in meet.basis:
            assert s1.contains(b) and s2.contains(b)


def test_inverse_roundtrip():
    rng = random.Random(17)
    eye3 = identity(3)
    for _ in range(40):
        m = _random_mat(rng, 3, 3)
        inv = inverse(m)
        if inv is None:
            assert rank(m) < 3
        else:
            assert mat_mul(m, inv) == eye3
            assert mat_mul(inv, m) == eye3


def test_mat_mul_known():
    a = Mat.from_rows([[1, 2], [3, 4]])
    b = Mat.from_rows([[0, 1], [1, 0]])
    assert mat_mul(a, b) == Mat.from_rows([[2, 1], [4, 3]])


def test_vec_rejects_bad_lengths_in_subspace():
    with pytest.raises(DimensionError):
        Subspace.from_vectors(2, [[1, 2, 3]])
    s = Subspace.from_vectors(2, [[1, 0]])
    with pytest.raises(DimensionError):
        s.contains([1, 2, 3])
