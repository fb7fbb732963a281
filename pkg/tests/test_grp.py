import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dworklab import grp
from dworklab.ff import field_of_order
from dworklab.grp import (BoundViolated, DegreeBoundExceeded, MatGroup, element_order,
                          element_order_histogram, generate_bfs, gl_order, o_order, sp_order)
from dworklab.linalg import Mat

from conftest import random_mat


def _elementary(ctx, n, i, j, c=1):
    a = np.eye(n, dtype=np.int64)
    a[i, j] = c
    return Mat(ctx, a)


def test_order_formulas():
    assert gl_order(2, 2) == 6
    assert gl_order(3, 2) == 168
    assert sp_order(4, 2) == 720
    assert sp_order(4, 8) == 1056706560
    assert sp_order(6, 2) == 1451520
    assert o_order(4, 2, -1) == 120
    assert o_order(6, 2, 1) == 40320
    assert o_order(10, 2, -1) == 50030759116800


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_sl2(q):
    ctx = field_of_order(q)
    # root subgroups over an additive basis of F_q generate SL_2
    basis = [ctx.pow(ctx.generator, i) for i in range(ctx.r)]
    gens = [_elementary(ctx, 2, 0, 1, c) for c in basis] + [_elementary(ctx, 2, 1, 0, c) for c in basis]
    assert MatGroup(gens).order() == q * (q * q - 1)


def test_gl3_f2_from_bound():
    ctx = field_of_order(2)
    gens = [_elementary(ctx, 3, 0, 1), Mat(ctx, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])]
    G = MatGroup(gens)
    assert G.order(bound=168) == 168
    assert MatGroup(gens).order() == 168


def test_bound_violation_raises():
    ctx = field_of_order(2)
    gens = [_elementary(ctx, 3, 0, 1), Mat(ctx, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])]
    with pytest.raises(BoundViolated):
        MatGroup(gens).order(bound=24)


def test_degree_bound():
    ctx = field_of_order(2)
    G = MatGroup([Mat.identity(ctx, 26)])
    with pytest.raises(DegreeBoundExceeded):
        G.order()


def test_noninvertible_rejected():
    ctx = field_of_order(3)
    with pytest.raises(ValueError):
        MatGroup([Mat(ctx, [[1, 1], [1, 1]])])


@settings(max_examples=30)
@given(st.sampled_from([2, 3, 4]), st.integers(2, 4), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_bsgs_matches_bfs(q, n, ngens, seed):
    ctx = field_of_order(q)
    if q ** (n * n) > 10 ** 6 and q > 2:
        n = 2
    rng = np.random.default_rng(seed)
    gens = [random_mat(ctx, n, rng) for _ in range(ngens)]
    es = generate_bfs(gens, cap=25000)
    if es is None:
        return
    assert MatGroup(gens).order() == es.size
    assert MatGroup(gens).order(bound=es.size, seed=seed) == es.size


def test_contains(rng):
    ctx = field_of_order(2)
    gens = [_elementary(ctx, 4, 0, 1), _elementary(ctx, 4, 2, 3)]
    G = MatGroup(gens)
    assert G.order() == 4
    assert G.contains(gens[0] @ gens[1])
    assert not G.contains(_elementary(ctx, 4, 1, 0))


def test_backends_agree_on_1000_matrices():
    """Packed GF(2) elements and generic code arrays give the same group law
    and the same action on vectors."""
    rng = np.random.default_rng(7)
    f2 = field_of_order(2)
    for k in range(1000):
        n = int(rng.integers(1, 17))
        a = random_mat(f2, n, rng)
        b = random_mat(f2, n, rng)
        fast, slow = grp._GF2(n), grp._Generic(f2, n)
        ab_fast = fast.to_mat(fast.mul(fast.from_mat(a), fast.from_mat(b)))
        ab_slow = slow.to_mat(slow.mul(slow.from_mat(a), slow.from_mat(b)))
        assert ab_fast == ab_slow
        assert fast.to_mat(fast.inv(fast.from_mat(a))) == slow.to_mat(slow.inv(slow.from_mat(a)))
        v = int(rng.integers(0, 2 ** n))
        assert fast.act(fast.from_mat(a), v) == slow.act(slow.from_mat(a), v)
        if k % 50 == 0:
            vs = rng.integers(0, 2 ** n, size=64)
            assert np.array_equal(fast.act_many(fast.table(fast.from_mat(a)), vs),
                                  slow.act_many(slow.table(slow.from_mat(a)), vs))


def test_generic_batch_action_matches_scalar(rng):
    for q in (3, 4, 9):
        ctx = field_of_order(q)
        be = grp._Generic(ctx, 3)
        a = random_mat(ctx, 3, rng)
        e = be.from_mat(a)
        vs = rng.integers(0, q ** 3, size=50)
        assert be.act_many(be.table(e), vs).tolist() == [be.act(e, int(v)) for v in vs]


def test_s5_histogram():
    from dworklab.dwork import perm_of_type, theta_standard

    gens = [theta_standard(5, perm_of_type((2, 1, 1, 1))), theta_standard(5, perm_of_type((5,)))]
    h = element_order_histogram(MatGroup(gens))
    assert h.exact
    assert h.counts == {1: 1, 2: 25, 3: 20, 4: 30, 5: 24, 6: 20}


def test_element_order():
    ctx = field_of_order(2)
    c = Mat(ctx, [[0, 0, 1], [1, 0, 1], [0, 1, 0]])  # companion of x^3 + x + 1
    assert element_order(c) == 7
