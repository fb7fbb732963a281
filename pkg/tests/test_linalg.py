import numpy as np
import pytest
from hypothesis import given, strategies as st

from dworklab.ff import field_of_order
from dworklab.linalg import (Mat, Poly, charpoly, companion, det, int_det, is_symplectic,
                             is_transvection, kernel_rows, rational_det, solve_linear,
                             symplectic_gram)

from conftest import random_mat


def _eval_poly_at(p: Poly, m: Mat) -> Mat:
    acc = Mat.zeros(m.ctx, m.n)
    for c in reversed(p.coeffs):
        acc = acc @ m + Mat.identity(m.ctx, m.n).scale(c)
    return acc


@given(st.sampled_from([2, 3, 4, 5, 8, 9]), st.integers(1, 7), st.integers(0, 10 ** 6))
def test_cayley_hamilton(q, n, seed):
    ctx = field_of_order(q)
    m = random_mat(ctx, n, np.random.default_rng(seed), invertible=False)
    cp = charpoly(m)
    assert cp.degree == n
    assert _eval_poly_at(cp, m) == Mat.zeros(ctx, n)


@given(st.sampled_from([2, 3, 4, 7, 8]), st.integers(1, 8), st.integers(0, 10 ** 6))
def test_inverse(q, n, seed):
    ctx = field_of_order(q)
    m = random_mat(ctx, n, np.random.default_rng(seed))
    assert (m @ m.inv()).is_identity()
    assert (m.inv() @ m).is_identity()


def test_singular_inverse_raises():
    ctx = field_of_order(3)
    with pytest.raises(ZeroDivisionError):
        Mat(ctx, [[1, 2], [2, 1]]).inv()


@given(st.integers(1, 16), st.integers(0, 10 ** 6))
def test_packed_path_matches_generic(n, seed):
    rng = np.random.default_rng(seed)
    f2 = field_of_order(2)
    a = rng.integers(0, 2, size=(n, n))
    b = rng.integers(0, 2, size=(n, n))
    assert (Mat(f2, a) @ Mat(f2, b)).tolist() == ((a @ b) % 2).tolist()


def test_det_multiplicative(rng):
    ctx = field_of_order(9)
    for _ in range(10):
        a, b = random_mat(ctx, 4, rng, False), random_mat(ctx, 4, rng, False)
        assert det(a @ b) == ctx.mul(det(a), det(b))


def test_companion_charpoly():
    ctx = field_of_order(5)
    c = [3, 0, 2, 1, 1]  # x^4 + x^3 + 2x^2 + 3
    m = companion(ctx, c)
    assert charpoly(m).coeffs == (3, 0, 2, 1, 1)


def test_symplectic_and_transvection():
    ctx = field_of_order(2)
    J = symplectic_gram(ctx, 4)
    t = Mat(ctx, [[1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    ok, _ = is_symplectic(t, J)
    assert ok
    assert is_transvection(t)
    assert not is_transvection(Mat.identity(ctx, 4))
    with pytest.raises(ValueError):
        symplectic_gram(ctx, 3)


def test_solve_linear_underdetermined():
    # two equations in three unknowns always leave a kernel
    ctx = field_of_order(7)
    M = Mat(ctx, [[1, 2, 3], [0, 1, 4]])
    sol = solve_linear(M, [1, 2])
    assert sol.consistent
    assert sol.kernel_dim == 1
    x = sol.particular
    assert [sum(ctx.mul(int(M.a[i, j]), x[j]) for j in range(3)) % 7 for i in range(2)] == [1, 2]


def test_kernel_rows_dimension(rng):
    ctx = field_of_order(4)
    rows = rng.integers(0, 4, size=(3, 6)).tolist()
    ker = kernel_rows(ctx, rows, 6)
    assert len(ker) == 6 - Mat(ctx, rows).rank()


def test_integer_determinants():
    a = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert int_det(a) == 4
    from fractions import Fraction

    assert rational_det([[Fraction(1, 2), 1], [1, 4]]) == 1
