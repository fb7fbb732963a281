import numpy as np
import pytest
from hypothesis import given, strategies as st

from dworklab.ff import field_of_order
from dworklab.grp import MatGroup
from dworklab.linalg import Mat
from dworklab.qform import (QuadForm, classify_type, invariant_alternating_forms, invariant_forms,
                            minus_zeros, plus_zeros, preserves, standard_form, value_distribution,
                            zero_count)

from conftest import random_mat


@pytest.mark.parametrize("q", [2, 4, 8])
@pytest.mark.parametrize("n", [2, 4, 6])
def test_standard_forms_classify(q, n):
    if q ** n > 10 ** 6:
        pytest.skip("covered by the splitting test")
    ctx = field_of_order(q)
    assert classify_type(standard_form("plus", n, ctx)).kind == "plus"
    assert classify_type(standard_form("minus", n, ctx)).kind == "minus"


@pytest.mark.parametrize("n", [8, 10, 12])
def test_large_forms_split(n):
    ctx = field_of_order(2)
    for sign in ("plus", "minus"):
        ft = classify_type(standard_form(sign, n, ctx))
        assert ft.kind == sign
        assert ft.zeros == (plus_zeros if sign == "plus" else minus_zeros)(n, 2)


def test_splitting_matches_enumeration():
    # F_4^8 is just above the enumeration limit when forced through the split path
    from dworklab import qform

    ctx = field_of_order(4)
    F = standard_form("minus", 6, ctx)
    direct = value_distribution(F)
    old = qform.ENUM_LIMIT
    try:
        qform.ENUM_LIMIT = 10
        split = value_distribution(F)
    finally:
        qform.ENUM_LIMIT = old
    assert direct == split


def test_zero_counts_formula():
    assert plus_zeros(4, 2) == 10
    assert minus_zeros(4, 2) == 6
    assert plus_zeros(6, 2) == 36


@given(st.sampled_from([2, 4]), st.integers(0, 10 ** 6))
def test_type_invariant_under_change_of_basis(q, seed):
    ctx = field_of_order(q)
    g = random_mat(ctx, 4, np.random.default_rng(seed))
    for sign in ("plus", "minus"):
        F = standard_form(sign, 4, ctx)
        G = F.pullback(g)
        assert classify_type(G).kind == sign
        assert zero_count(G) == zero_count(F)


@given(st.integers(0, 10 ** 6))
def test_pullback_evaluates(seed):
    rng = np.random.default_rng(seed)
    ctx = field_of_order(4)
    F = QuadForm(ctx, rng.integers(0, 4, size=(3, 3)))
    g = Mat(ctx, rng.integers(0, 4, size=(3, 3)))
    x = rng.integers(0, 4, size=3).tolist()
    gx = [ctx.vsum(ctx.vmul(g.a[i], np.array(x)), axis=0) for i in range(3)]
    assert F.pullback(g)(x) == F([int(v) for v in gx])


def test_invariant_form_of_orthogonal_group():
    from dworklab.dwork import perm_of_type, theta_standard

    gens = [theta_standard(5, perm_of_type((2, 1, 1, 1))), theta_standard(5, perm_of_type((5,)))]
    forms = invariant_forms(gens)
    assert len(forms) == 1
    assert classify_type(forms[0]).kind == "minus"
    assert all(preserves(forms[0], g) for g in gens)
    alt = invariant_alternating_forms(gens)
    assert len(alt) == 1 and alt[0].rank() == 4


def test_degenerate_form():
    ctx = field_of_order(2)
    F = QuadForm(ctx, [[1, 0, 0], [0, 0, 1], [0, 0, 0]])
    assert classify_type(F).kind == "degenerate"
