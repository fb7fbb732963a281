"""Identity checks over sweeps of prime powers.

Each check returns ``CongruenceReport`` records, one per (identity, q),
with either a verdict or the hypothesis that excluded the prime.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from . import fpoly
from .count import (BadReduction, QUINTIC_MAX_Q, P_t_coeffs, count_C, count_D,
                    count_plane_quartic_value, count_quintic_value, count_superelliptic_value,
                    count_Zt_value, curve_A, curve_B, mirror_trace, parse_t, reduce_t,
                    trinomial_coeffs, trinomial_root_count)
from .ff import field_of_order, is_prime, prime_power


@dataclass(frozen=True)
class CongruenceReport:
    identity: str
    n: int | None
    t: str | None
    q: int
    lhs: int | None
    rhs: int | None
    modulus: int
    passed: bool | None
    skip_reason: str | None = None

    @property
    def skipped(self) -> bool:
        return self.skip_reason is not None

    def as_dict(self) -> dict:
        return {"identity": self.identity, "n": self.n, "t": self.t, "q": self.q,
                "lhs": self.lhs, "rhs": self.rhs, "modulus": self.modulus,
                "pass": self.passed, "skip_reason": self.skip_reason}


def _agree(lhs: int, rhs: int, modulus: int) -> bool:
    return lhs == rhs if modulus == 0 else (lhs - rhs) % modulus == 0


def _report(identity, n, t, q, lhs, rhs, modulus) -> CongruenceReport:
    if modulus:
        lhs, rhs = lhs % modulus, rhs % modulus
    return CongruenceReport(identity, n, str(parse_t(t)) if t is not None else None, q,
                            lhs, rhs, modulus, _agree(lhs, rhs, modulus))


def _skipped(identity, n, t, q, modulus, reason) -> CongruenceReport:
    return CongruenceReport(identity, n, str(parse_t(t)) if t is not None else None, q,
                            None, None, modulus, None, reason)


def prime_powers(q_min: int, q_max: int, odd: bool = False, primes_only: bool = False) -> list[int]:
    """Prime powers q with q_min <= q < q_max (capped at 2^16)."""
    out = []
    for q in range(max(2, q_min), min(q_max, 2 ** 16 + 1)):
        pr = prime_power(q)
        if pr is None or (odd and pr[0] == 2) or (primes_only and pr[1] > 1):
            continue
        out.append(q)
    return out


def summarize(reports: Iterable[CongruenceReport]) -> dict:
    c = Counter("skip" if r.skipped else ("pass" if r.passed else "fail") for r in reports)
    return {"pass": c["pass"], "skip": c["skip"], "fail": c["fail"]}


def _sweep(fn: Callable[[int], list[CongruenceReport]], qs: Sequence[int], threads: int = 1):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(fn, qs))
    else:
        parts = [fn(q) for q in qs]
    out = [r for part in parts for r in part]
    return sorted(out, key=lambda r: (r.q, r.identity))


def _bad_t(t, p: int, k: int) -> str | None:
    """Reason t fails: non-integral at p or t^k = 1 mod p."""
    t = parse_t(t)
    if t.denominator % p == 0:
        return f"t={t} is not {p}-integral"
    if (t.numerator ** k - t.denominator ** k) % p == 0:
        return f"t^{k} = 1 mod {p}"
    return None


# -- parity of the mirror trace -----------------------------------------


def check_reci(n: int, t, qs: Sequence[int], threads: int = 1) -> list[CongruenceReport]:
    """tr(Frob | mirror) = n(f_t, F_q) + 1 mod 2, n a power of 2."""
    if n < 2 or n & (n - 1):
        raise ValueError("n must be a power of 2")

    def one(q):
        p = prime_power(q)[0]
        if (2 * (n + 1)) % p == 0:
            return [_skipped("reci", n, t, q, 2, f"p={p} divides 2(n+1)")]
        bad = _bad_t(t, p, n + 1)
        if bad:
            return [_skipped("reci", n, t, q, 2, bad)]
        ctx = field_of_order(q)
        return [_report("reci", n, t, q, mirror_trace(n, t, ctx), trinomial_root_count(n, t, ctx) + 1, 2)]

    return _sweep(one, qs, threads)


def check_quartic_parity(t, qs: Sequence[int], threads: int = 1) -> list[CongruenceReport]:
    """n = 6: #Z_t = 1 + #C_t mod 2 and tr = q + 1 - #C_t mod 2, with C_t
    the plane quartic."""
    tt = parse_t(t)
    if tt ** 7 == 1:
        raise ValueError("t^7 = 1: the fiber is singular")

    def one(q):
        p = prime_power(q)[0]
        names = ("quartic-parity/count", "quartic-parity/trace")
        if 14 % p == 0:
            return [_skipped(nm, 6, t, q, 2, f"p={p} divides 14") for nm in names]
        bad = _bad_t(t, p, 7)
        if bad:
            return [_skipped(nm, 6, t, q, 2, bad) for nm in names]
        ctx = field_of_order(q)
        z = count_Zt_value(6, t, ctx)
        c = count_plane_quartic_value(t, ctx)
        tr = mirror_trace(6, t, ctx)
        return [_report(names[0], 6, t, q, z, 1 + c, 2), _report(names[1], 6, t, q, tr, q + 1 - c, 2)]

    return _sweep(one, qs, threads)


def check_appendixC(t, qs: Sequence[int], threads: int = 1) -> list[CongruenceReport]:
    """tr(Frob | mirror, n=4) = q + 1 - #D_t mod 3."""

    def one(q):
        p = prime_power(q)[0]
        if 15 % p == 0:
            return [_skipped("appendixC", 4, t, q, 3, f"p={p} divides 15")]
        bad = _bad_t(t, p, 5)
        if bad:
            return [_skipped("appendixC", 4, t, q, 3, bad)]
        ctx = field_of_order(q)
        d = count_D(t, ctx)
        if not d.good:
            return [_skipped("appendixC", 4, t, q, 3, d.skip_reason)]
        return [_report("appendixC", 4, t, q, mirror_trace(4, t, ctx), q + 1 - d.count, 3)]

    return _sweep(one, qs, threads)


# -- the quintic threefold and the genus 2 curve ------------------------


def _quintic_gate(t, q: int) -> str | None:
    p = prime_power(q)[0]
    tt = parse_t(t)
    if tt == 0:
        return "t=0 lies outside the identity (CM fiber)"
    if 10 % p == 0:
        return f"p={p} divides 10"
    if q > QUINTIC_MAX_Q:
        return f"q={q} above the quintic sweep budget {QUINTIC_MAX_Q}"
    bad = _bad_t(t, p, 5)
    if bad:
        return bad
    if tt.numerator % p == 0:
        return f"t = 0 mod {p}"
    return None


def check_dtotal(t, qs: Sequence[int], threads: int = 1) -> list[CongruenceReport]:
    """#Y_t = 1 + q + q^2 + q^3 - tr_W - 50 q (q + 1 - #C_t), exactly."""

    def one(q):
        reason = _quintic_gate(t, q)
        if reason:
            return [_skipped("dtotal", 4, t, q, 0, reason)]
        ctx = field_of_order(q)
        y = count_quintic_value(t, ctx)
        trw = mirror_trace(4, t, ctx)
        c = count_C(t, ctx).count
        rhs = 1 + q + q * q + q ** 3 - trw - 50 * q * (q + 1 - c)
        return [_report("dtotal", 4, t, q, y, rhs, 0)]

    return _sweep(one, qs, threads)


def check_decomposition(t, qs: Sequence[int], threads: int = 1) -> list[CongruenceReport]:
    """Diagnostic: #Y_t = 1 + q + q^2 + q^3 - tr_W - q (10 tr_A + 15 tr_B),
    with A the t^5 variant; this splits the fifty curve summands by type."""

    def one(q):
        reason = _quintic_gate(t, q)
        if reason:
            return [_skipped("decomposition", 4, t, q, 0, reason)]
        ctx = field_of_order(q)
        y = count_quintic_value(t, ctx)
        trw = mirror_trace(4, t, ctx)
        ta = q + 1 - count_superelliptic_value(curve_A(t, "t5"), ctx)
        tb = q + 1 - count_superelliptic_value(curve_B(t), ctx)
        rhs = 1 + q + q * q + q ** 3 - trw - q * (10 * ta + 15 * tb)
        return [_report("decomposition", 4, t, q, y, rhs, 0)]

    return _sweep(one, qs, threads)


def check_isogeny_AtBt(t, qs: Sequence[int], variant: str = "both", require_mu5: bool = True,
                       threads: int = 1) -> list[CongruenceReport]:
    """q + 1 - #A_t = 2 (q + 1 - #C_t) and the same for B_t.

    The isogeny is defined over a field containing the 5th roots of unity;
    when q != 1 mod 5 the map y -> y^5 is bijective on F_q, so the traces of
    A_t and B_t vanish identically and such q are skipped by default."""
    variants = ("t3", "t5") if variant == "both" else (variant,)
    for v in variants:
        if v not in ("t3", "t5"):
            raise ValueError(f"unknown variant {v!r}")

    def one(q):
        p = prime_power(q)[0]
        names = [f"isogeny-A-{v}" for v in variants] + ["isogeny-B"]
        reason = None
        if 10 % p == 0:
            reason = f"p={p} divides 10"
        elif require_mu5 and q % 5 != 1:
            reason = "q != 1 mod 5"
        elif parse_t(t) == 0:
            reason = "t=0 excluded"
        else:
            reason = _bad_t(t, p, 5)
            if reason is None and parse_t(t).numerator % p == 0:
                reason = f"t = 0 mod {p}"
        if reason:
            return [_skipped(nm, None, t, q, 0, reason) for nm in names]
        ctx = field_of_order(q)
        cres = count_C(t, ctx)
        if not cres.good:
            return [_skipped(nm, None, t, q, 0, cres.skip_reason) for nm in names]
        rhs = 2 * (q + 1 - cres.count)
        out = []
        curves = [curve_A(t, v) for v in variants] + [curve_B(t)]
        for nm, cv in zip(names, curves):
            try:
                lhs = q + 1 - count_superelliptic_value(cv, ctx)
            except BadReduction as e:
                out.append(_skipped(nm, None, t, q, 0, str(e)))
                continue
            out.append(_report(nm, None, t, q, lhs, rhs, 0))
        return out

    return _sweep(one, qs, threads)


def resolve_A_variant(reports: Sequence[CongruenceReport]) -> dict:
    """Which exponent variant of A_t passes every non-skipped report."""
    out = {}
    for v in ("t3", "t5"):
        rs = [r for r in reports if r.identity == f"isogeny-A-{v}" and not r.skipped]
        if rs:
            out[v] = all(r.passed for r in rs)
    return out


# -- discriminants ----------------------------------------------------


def _sylvester_det(f: Sequence[Fraction], g: Sequence[Fraction]) -> Fraction:
    from .linalg import rational_det

    m, n = len(f) - 1, len(g) - 1
    fh, gh = list(reversed(f)), list(reversed(g))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + fh + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gh + [Fraction(0)] * (size - n - 1 - i))
    return rational_det(rows)


def discriminant(coeffs: Sequence) -> Fraction:
    """(-1)^{d(d-1)/2} Res(f, f') / a_d for rational coefficients, low to high."""
    f = [Fraction(c) for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    d = len(f) - 1
    df = [i * f[i] for i in range(1, d + 1)]
    res = _sylvester_det(f, df)
    return (-1) ** (d * (d - 1) // 2) * res / f[-1]


def trinomial_disc_closed(n: int, t) -> Fraction:
    t = parse_t(t)
    return (-1) ** (n // 2) * n ** n * (n + 1) ** (n + 1) * (1 - t ** (n + 1))


def P_t_disc_closed(t) -> Fraction:
    t = parse_t(t)
    return 2 ** 8 * 5 ** 5 * t ** 40 * (1 - t ** 5) ** 2


DISC_T_VALUES = (0, 2, -1, Fraction(3, 2))


def check_discriminants(ts: Sequence = DISC_T_VALUES) -> list[CongruenceReport]:
    out = []
    for n in (2, 4, 6, 8):
        for t in ts:
            lhs = discriminant(trinomial_coeffs(n, t))
            out.append(_exact("disc-f_t", n, t, lhs, trinomial_disc_closed(n, t)))
    for t in ts:
        lhs = discriminant(P_t_coeffs(t)) if parse_t(t) ** 5 != 1 else Fraction(0)
        out.append(_exact("disc-P_t", None, t, lhs, P_t_disc_closed(t)))
    return out


def _exact(identity, n, t, lhs: Fraction, rhs: Fraction) -> CongruenceReport:
    # q = 0 marks an identity over Q
    return CongruenceReport(identity, n, str(parse_t(t)), 0, _as_int(lhs), _as_int(rhs), 0, lhs == rhs)


def _as_int(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


# -- Galois sampling ----------------------------------------------------


PSI_TERMS: tuple[tuple[int, int, int], ...] = (
    # (coefficient, t-degree, x-degree)
    (16, 0, 0), (2744, 3, 2), (-16352, 1, 3), (117649, 6, 4), (-172872, 4, 5),
    (512344, 2, 6), (2676352, 0, 7), (-4537890, 5, 8), (39126696, 3, 9),
    (-26289088, 1, 10), (43181985, 4, 12), (-10682784, 2, 13), (5597568, 0, 14),
    (11124176, 3, 16), (1104768, 1, 17), (493920, 2, 20), (489984, 0, 21),
    (-26880, 1, 24), (256, 0, 28),
)


def psi_coeffs(t) -> list[Fraction]:
    t = parse_t(t)
    c = [Fraction(0)] * 29
    for a, dt, dx in PSI_TERMS:
        c[dx] += a * t ** dt
    return c


def Q_t_full(t) -> list[Fraction]:
    """x^5 + 10x^4 + 35x^3 + 50x^2 + 25x + 4 - 4 t^{-5}."""
    t = parse_t(t)
    return [4 - 4 / t ** 5, Fraction(25), Fraction(50), Fraction(35), Fraction(10), Fraction(1)]


def _perm_cycle_type_on_pairs(perm: Sequence[int]) -> tuple[int, ...]:
    pairs = [(i, j) for i in range(len(perm)) for j in range(i + 1, len(perm))]
    idx = {pr: k for k, pr in enumerate(pairs)}
    img = [idx[tuple(sorted((perm[i], perm[j])))] for i, j in pairs]
    seen = [False] * len(img)
    out = []
    for s in range(len(img)):
        if not seen[s]:
            ln, x = 0, s
            while not seen[x]:
                seen[x] = True
                x = img[x]
                ln += 1
            out.append(ln)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def s8_pair_patterns() -> frozenset:
    """Cycle types of the 22 classes of S_8 acting on 2-subsets."""
    from .dwork import partitions, perm_of_type

    return frozenset(_perm_cycle_type_on_pairs(perm_of_type(s)) for s in partitions(8))


D10_PATTERNS = frozenset({(1, 1, 1, 1, 1), (1, 2, 2), (5,)})


@dataclass
class GaloisEvidence:
    poly_id: str
    t: str
    primes: list[int]
    patterns: dict
    verdict: str
    incompatible: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"poly": self.poly_id, "t": self.t, "primes": len(self.primes),
                "patterns": {" ".join(map(str, k)): v for k, v in sorted(self.patterns.items())},
                "verdict": self.verdict, "incompatible": len(self.incompatible)}


def _sample_patterns(coeffs: Sequence[Fraction], primes: Iterable[int], budget: int,
                     prime_filter: Callable[[int], bool] = lambda p: True):
    disc = discriminant(coeffs)
    lead = Fraction(coeffs[-1])
    used, pats = [], Counter()
    for p in primes:
        if len(used) >= budget:
            break
        if not prime_filter(p):
            continue
        if any(Fraction(c).denominator % p == 0 for c in coeffs):
            continue
        if lead.numerator % p == 0 or disc.numerator % p == 0:
            continue
        f = fpoly.from_rationals(coeffs, p)
        pats[fpoly.degree_pattern(f, p)] += 1
        used.append(p)
    return used, pats


def _primes_from(start: int = 2):
    p = start
    while True:
        if is_prime(p):
            yield p
        p += 1


def galois_sample(poly: str, t=2, prime_budget: int = 200, n: int = 4) -> GaloisEvidence:
    """Frobenius cycle types by factoring mod unramified primes.

    poly is 'f_t' (target S_{n+1}), 'Q_t' (split primes, D_10 types) or
    'Psi' (S_8 acting on the 28 pairs)."""
    if poly == "f_t":
        coeffs = trinomial_coeffs(n, t)
        used, pats = _sample_patterns(coeffs, _primes_from(), prime_budget)
        cyc = (n + 1,)
        transp = (1,) * (n - 1) + (2,)
        bad = [k for k in pats if sum(k) != n + 1]
        if bad:
            verdict = "inconsistent"
        elif cyc in pats and transp in pats:
            verdict = "proves-contains"
        else:
            verdict = "consistent-with"
        return GaloisEvidence("f_t", str(parse_t(t)), used, dict(pats), verdict, bad)
    if poly == "Q_t":
        coeffs = Q_t_full(t)
        used, pats = _sample_patterns(coeffs, _primes_from(3), prime_budget,
                                      lambda p: p % 5 in (1, 4))
        bad = [k for k in pats if k not in D10_PATTERNS]
        return GaloisEvidence("Q_t", str(parse_t(t)), used, dict(pats),
                              "inconsistent" if bad else "consistent-with", bad)
    if poly == "Psi":
        coeffs = psi_coeffs(t)
        allowed = s8_pair_patterns()
        used, pats = _sample_patterns(coeffs, _primes_from(3), prime_budget)
        bad = [k for k in pats if k not in allowed]
        return GaloisEvidence("Psi", str(parse_t(t)), used, dict(pats),
                              "inconsistent" if bad else "consistent-with", bad)
    raise ValueError(f"unknown polynomial {poly!r}")


# -- theta image --------------------------------------------------------


def check_theta_image(n: int, seed: int = 0) -> CongruenceReport:
    """<A, B> over F_2 (N = n+1) is conjugate into theta_k(S_k) and has
    order k!, with k = n+1 (n = 4, 8) or k = n+2 (n = 6)."""
    from .dwork import DworkParams, dwork_generators, perm_of_type, theta_conjugator, theta_standard
    from .grp import MatGroup

    k = {4: 5, 8: 9, 6: 8}.get(n)
    if k is None:
        raise ValueError("theta-image is checked for n in {4, 6, 8}")
    ctx, (A, B) = dwork_generators(DworkParams(n, n + 1, 2))
    conj = theta_conjugator(A, B, k)
    order = math.factorial(k)
    if conj is None:
        return CongruenceReport("theta-image", n, None, 2, None, order, 0, False, None)
    T, Ti = conj.T, conj.T.inv()
    image = MatGroup([theta_standard(k, perm_of_type((2,) + (1,) * (k - 2)), n),
                      theta_standard(k, perm_of_type((k,)), n)])
    image.order(bound=order, seed=seed)
    member = image.contains(T @ A @ Ti) and image.contains(T @ B @ Ti)
    got = MatGroup([A, B]).order(bound=order, seed=seed)
    return CongruenceReport("theta-image", n, None, 2, got, order, 0, member and got == order)
