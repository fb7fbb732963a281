import math

import pytest
from hypothesis import given, strategies as st

from dworklab.dwork import (DworkParams, check_conjugator, classify_md, compose, cycle_type,
                            dwork_A, dwork_B, dwork_generators, expected_md_verdict,
                            expected_order_A, perm_inverse, perm_of_type, partitions,
                            s_embedding_form, theta_conjugator, theta_standard)
from dworklab.ff import field_of_order
from dworklab.grp import MatGroup, element_order
from dworklab.linalg import charpoly
from dworklab.qform import classify_type, preserves


@pytest.mark.parametrize("n", range(2, 13))
def test_conjugator_relation(n):
    ok, d = check_conjugator(n)
    assert ok and d in (1, -1)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 14])
def test_order_of_A(n):
    A = dwork_A(n, field_of_order(2))
    assert element_order(A) == expected_order_A(n)


@pytest.mark.parametrize("n,N", [(4, 5), (4, 7), (6, 7), (2, 9)])
def test_B_is_companion_of_cyclotomic_window(n, N):
    # over the splitting field B has eigenvalues among the N-th roots of unity
    ctx, (A, B) = dwork_generators(DworkParams(n, N, 2))
    assert element_order(B) in (N,) or N % element_order(B) == 0


def test_params_validation():
    for bad in [(3, 5, 2), (4, 6, 2), (4, 3, 2), (4, 5, 5)]:
        with pytest.raises(ValueError):
            DworkParams(*bad)
    assert DworkParams(4, 7, 2).f == 3


@given(st.integers(0, 10 ** 6), st.sampled_from([5, 8, 9]))
def test_theta_is_homomorphism(seed, k):
    import random

    r = random.Random(seed)
    s = list(range(k))
    t = list(range(k))
    r.shuffle(s)
    r.shuffle(t)
    st_ = compose(s, t)
    assert theta_standard(k, st_) == theta_standard(k, s) @ theta_standard(k, t)
    assert theta_standard(k, perm_inverse(s)) == theta_standard(k, s).inv()


def test_partitions_count():
    assert len(list(partitions(8))) == 22
    assert cycle_type(perm_of_type((3, 2, 1))) == (3, 2, 1)


@pytest.mark.parametrize("k,n,sign", [(5, 4, "minus"), (8, 6, "plus"), (9, 8, "plus")])
def test_embedding_forms(k, n, sign):
    F = s_embedding_form(k, n)
    assert classify_type(F).kind == sign
    gens = [theta_standard(k, perm_of_type((2,) + (1,) * (k - 2)), n),
            theta_standard(k, perm_of_type((k,)), n)]
    assert all(preserves(F, g) for g in gens)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_theta_conjugator_found(n):
    k = {4: 5, 6: 8, 8: 9}[n]
    ctx, (A, B) = dwork_generators(DworkParams(n, n + 1, 2))
    c = theta_conjugator(A, B, k)
    assert c is not None
    T = c.T
    assert T @ A == theta_standard(k, c.sigma_A, n) @ T
    assert T @ B == theta_standard(k, c.sigma_B, n) @ T


@pytest.mark.parametrize("n,verdict,order", [
    (4, "S5", 120), (6, "S8", 40320), (8, "S9", 362880),
    (10, "O-10(F2)", 50030759116800),
])
def test_md_table(n, verdict, order):
    res = classify_md(DworkParams(n, n + 1, 2))
    assert res.verdict == verdict == expected_md_verdict(n)
    assert res.order == order


@pytest.mark.parametrize("N", [3, 5, 7, 9, 11])
def test_dihedral(N):
    res = classify_md(DworkParams(2, N, 2))
    assert res.verdict == f"D{2 * N}"
    assert res.evidence["conj"] and res.evidence["ord_A"] == 2 and res.evidence["ord_B"] == N


def test_n4_N7_preserves_plus_form():
    res = classify_md(DworkParams(4, 7, 2))
    # an invariant quadratic form exists, so the group is orthogonal
    assert res.inv_form_dim == 1
    assert res.form_type == "plus"
    assert res.order == 508032


def test_odd_characteristic():
    res = classify_md(DworkParams(4, 5, 3))
    assert res.verdict.startswith("Sp4")
    assert res.order == 51840
