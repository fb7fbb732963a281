from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from dworklab import verify as V


def test_prime_powers():
    assert V.prime_powers(2, 20) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]
    assert V.prime_powers(2, 20, odd=True, primes_only=True) == [3, 5, 7, 11, 13, 17, 19]


def test_report_json_key():
    r = V.check_reci(4, 2, [7])[0]
    d = r.as_dict()
    assert d["pass"] is True and d["skip_reason"] is None


def test_reci_skips_and_passes():
    reps = V.check_reci(4, 2, V.prime_powers(3, 60))
    bad = {r.q: r.skip_reason for r in reps if r.skipped}
    assert "divides" in bad[5] and "t^5" in bad[31]
    assert V.summarize(reps)["fail"] == 0
    with pytest.raises(ValueError):
        V.check_reci(6, 2, [7])


def test_reci_non_integral_t():
    reps = V.check_reci(4, Fraction(2, 3), [3, 7])
    assert reps[0].skipped and "integral" in reps[0].skip_reason
    assert reps[1].passed


def test_quartic_parity():
    reps = V.check_quartic_parity(2, V.prime_powers(3, 30))
    assert V.summarize(reps)["fail"] == 0
    with pytest.raises(ValueError):
        V.check_quartic_parity(1, [3])


def test_appendixC_including_char_2():
    reps = V.check_appendixC(2, V.prime_powers(2, 40))
    assert V.summarize(reps)["fail"] == 0
    assert any(r.q in (2, 4, 8) and not r.skipped for r in reps)


def test_decomposition_exact():
    for t in (2, 3):
        reps = V.check_decomposition(t, V.prime_powers(3, 38))
        s = V.summarize(reps)
        assert s["fail"] == 0 and s["pass"] > 0


def test_dtotal_holds_away_from_q_1_mod_5():
    reps = V.check_dtotal(2, [7, 13, 17, 19, 23])
    assert all(r.passed for r in reps)


def test_dtotal_t0_skipped():
    assert all(r.skipped for r in V.check_dtotal(0, [7, 11]))


def test_isogeny_variant_resolution():
    reps = V.check_isogeny_AtBt(2, V.prime_powers(3, 100))
    assert V.resolve_A_variant(reps) == {"t3": False, "t5": True}


def test_isogeny_without_mu5_has_zero_trace():
    reps = V.check_isogeny_AtBt(2, [7, 13, 17], variant="t5", require_mu5=False)
    assert all(r.lhs == 0 for r in reps if not r.skipped)


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=7))
def test_discriminant_matches_sympy(cs):
    if cs[-1] == 0:
        cs[-1] = 1
    x = sympy.symbols("x")
    expect = sympy.discriminant(sympy.Poly(list(reversed(cs)), x))
    assert V.discriminant(cs) == Fraction(int(expect))


def test_discriminant_closed_forms():
    reps = V.check_discriminants()
    assert len(reps) == 20 and all(r.passed for r in reps)


def test_psi_transcription_checksum():
    assert len(V.PSI_TERMS) == 19
    assert sum(a for a, _, _ in V.PSI_TERMS) == 62702592
    assert sum(abs(a) for a, _, _ in V.PSI_TERMS) == 146154324
    assert max(dx for _, _, dx in V.PSI_TERMS) == 28
    # every monomial has x-degree = 3 * t-degree mod 7
    assert all((dx - 3 * dt) % 7 == 0 for _, dt, dx in V.PSI_TERMS)


def test_s8_pair_patterns():
    pats = V.s8_pair_patterns()
    # the 22 classes collapse to 19 distinct cycle types on pairs
    assert len(pats) == 19
    assert all(sum(p) == 28 for p in pats)


def test_q_t_full():
    c = V.Q_t_full(2)
    assert c[0] == Fraction(31, 8)
    # Q_t(x) = t^-10 x^5 P_t(t / x)
    x = Fraction(3)
    P = V.P_t_coeffs(2)
    assert sum(ci * x ** i for i, ci in enumerate(c)) == \
        Fraction(1, 2 ** 10) * x ** 5 * sum(pi * (2 / x) ** i for i, pi in enumerate(P))


def test_galois_small_budget():
    ev = V.galois_sample("f_t", 2, 60)
    assert ev.verdict == "proves-contains"
    with pytest.raises(ValueError):
        V.galois_sample("nope")


@pytest.mark.parametrize("n", [4, 6])
def test_theta_image(n):
    assert V.check_theta_image(n).passed


def test_threads_deterministic():
    qs = V.prime_powers(3, 80)
    a = V.check_reci(4, 2, qs, threads=1)
    b = V.check_reci(4, 2, qs, threads=4)
    assert a == b


def test_dtotal_exactness_implies_parities():
    """Where the exact identity holds, the parity and mod-3 identities hold too."""
    for q in (7, 13):
        d = V.check_dtotal(2, [q])[0]
        assert d.passed
        assert V.check_appendixC(2, [q])[0].passed
        assert V.check_reci(4, 2, [q])[0].passed
