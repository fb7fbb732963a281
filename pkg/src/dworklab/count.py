"""Exact point counts over finite fields.

Every counter works on element codes with numpy and returns a
``CountResult``; reduction hypotheses that fail at the given prime give a
result with ``good=False`` and a reason instead of a number.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import fpoly
from .ff import FieldCtx, field_make, field_of_order

QUINTIC_MAX_Q = 37


class BadReduction(ValueError):
    """A hypothesis for good reduction fails at this prime."""


# -- parameters and results -------------------------------------------


def parse_t(t) -> Fraction:
    """Rational parameter from an int, Fraction or 'a/b' string."""
    if isinstance(t, str):
        return Fraction(t.strip())
    return Fraction(t)


def t_str(t: Fraction) -> str:
    return str(t)


def reduce_t(t, ctx: FieldCtx) -> int:
    t = parse_t(t)
    if t.denominator % ctx.p == 0:
        raise BadReduction(f"t={t} is not {ctx.p}-integral")
    return ctx.from_rational(t)


@dataclass(frozen=True)
class CountResult:
    variety: str
    n: int | None
    t: str | None
    q: int
    count: int | None
    good: bool = True
    skip_reason: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _skip(variety, n, t, q, reason) -> CountResult:
    return CountResult(variety, n, None if t is None else t_str(parse_t(t)), q, None, False, reason)


# -- field helpers ----------------------------------------------------


def _elements(ctx: FieldCtx) -> np.ndarray:
    return np.arange(ctx.q, dtype=np.int64)


def _poly_eval(ctx: FieldCtx, coeffs: Sequence[int], x: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x)
    for c in reversed(list(coeffs)):
        acc = ctx.vadd(ctx.vmul(acc, x), int(c))
    return acc


def _chi(ctx: FieldCtx, a: np.ndarray) -> np.ndarray:
    """Quadratic character on odd q, with chi(0) = 0."""
    a = np.asarray(a, dtype=np.int64)
    lg = ctx.log_np[a]
    return np.where(a == 0, 0, np.where(lg % 2 == 0, 1, -1))


def quad_roots(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Number of roots in F_q of Y^2 + a Y + b, elementwise."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if ctx.p != 2:
        four_b = ctx.vmul(b, ctx.from_int(4))
        return 1 + _chi(ctx, ctx.vsub(ctx.vmul(a, a), four_b))
    # Y = a Z turns it into Z^2 + Z = b / a^2
    safe = np.where(a == 0, 1, a)
    w = ctx.vmul(b, ctx.vinv(ctx.vmul(safe, safe)))
    tr = ctx.trace_table[w]
    return np.where(a == 0, 1, np.where(tr == 0, 2, 0))


# -- the trinomial and Z_t --------------------------------------------


def trinomial_coeffs(n: int, t) -> list[Fraction]:
    """f_t = n x^{n+1} - (n+1) t x^n + 1, low to high."""
    t = parse_t(t)
    c = [Fraction(0)] * (n + 2)
    c[0] = Fraction(1)
    c[n] = -(n + 1) * t
    c[n + 1] = Fraction(n)
    return c


def trinomial_root_count(n: int, t, ctx: FieldCtx) -> int:
    """Distinct roots of f_t in F_q."""
    if n % ctx.p == 0:
        raise BadReduction(f"leading coefficient {n} vanishes mod {ctx.p}")
    coeffs = [reduce_t(c, ctx) for c in trinomial_coeffs(n, t)]
    return int(np.count_nonzero(_poly_eval(ctx, coeffs, _elements(ctx)) == 0))


def count_trinomial(n: int, t, ctx: FieldCtx) -> CountResult:
    try:
        return CountResult("trinomial", n, t_str(parse_t(t)), ctx.q, trinomial_root_count(n, t, ctx))
    except BadReduction as e:
        return _skip("trinomial", n, t, ctx.q, str(e))


def zt_gate(n: int, t, ctx: FieldCtx) -> int:
    """Reduced c = (n+1) t after checking the hypotheses on Z_t."""
    if (n + 1) % ctx.p == 0:
        raise BadReduction(f"p={ctx.p} divides n+1={n + 1}")
    tt = reduce_t(t, ctx)
    if ctx.pow(tt, n + 1) == 1:
        raise BadReduction(f"t^{n + 1} = 1 mod {ctx.p}")
    return ctx.mul(ctx.from_int(n + 1), tt)


@lru_cache(maxsize=64)
def _sum_product_histogram(n_minus_1: int, ctx: FieldCtx) -> np.ndarray:
    """H[u, l]: number of (x_1..x_m) in (F_q^x)^m with sum u and
    product g^l."""
    q = ctx.q
    Q = q - 1
    H = np.zeros((q, Q), dtype=np.int64)
    H[0, 0] = 1  # empty tuple
    exp = ctx.exp
    us = _elements(ctx)
    for _ in range(n_minus_1):
        new = np.zeros_like(H)
        for lx in range(Q):
            # u -> u + x is a permutation of F_q, so plain fancy indexing is safe
            new[ctx.vadd(us, exp[lx])] += np.roll(H, lx, axis=1)
        H = new
    H.setflags(write=False)
    return H


def count_Zt_value(n: int, t, ctx: FieldCtx) -> int:
    c = zt_gate(n, t, ctx)
    q = ctx.q
    H = _sum_product_histogram(n - 1, ctx)
    u = _elements(ctx)[:, None]
    P = np.array(ctx.exp, dtype=np.int64)[None, :]
    Pb = np.broadcast_to(P, H.shape)
    b = ctx.vmul(Pb, ctx.vsub(np.broadcast_to(u, H.shape), c))
    # P y^2 + b y + 1 = 0  <=>  y^2 + (b/P) y + 1/P = 0
    Pinv = ctx.vinv(Pb)
    roots = quad_roots(ctx, ctx.vmul(b, Pinv), Pinv)
    return int((H * roots).sum())


def count_Zt(n: int, t, ctx: FieldCtx) -> CountResult:
    """#Z_t(F_q) for x_1 + ... + x_n + 1/(x_1...x_n) = (n+1) t."""
    try:
        return CountResult("zt", n, t_str(parse_t(t)), ctx.q, count_Zt_value(n, t, ctx))
    except BadReduction as e:
        return _skip("zt", n, t, ctx.q, str(e))


def count_Zt_naive(n: int, t, ctx: FieldCtx) -> int:
    """Full sweep over (F_q^x)^n (oracle)."""
    c = zt_gate(n, t, ctx)
    units = np.arange(1, ctx.q, dtype=np.int64)
    grids = np.meshgrid(*([units] * n), indexing="ij")
    s = np.zeros(grids[0].shape, dtype=np.int64)
    pr = np.ones(grids[0].shape, dtype=np.int64)
    for g in grids:
        s = ctx.vadd(s, g)
        pr = ctx.vmul(pr, g)
    lhs = ctx.vadd(s, ctx.vinv(pr))
    return int(np.count_nonzero(lhs == c))


def mirror_main_term(n: int, q: int) -> int:
    """sum_{i=n}^{2n-2} (-1)^i C(n, i+2-n) q^{i+1-n}."""
    return sum((-1) ** i * math.comb(n, i + 2 - n) * q ** (i + 1 - n) for i in range(n, 2 * n - 1))


def mirror_trace(n: int, t, ctx: FieldCtx) -> int:
    """Frobenius trace on the mirror from #Z_t."""
    return mirror_main_term(n, ctx.q) - n - count_Zt_value(n, t, ctx)


# -- hyperelliptic curves y^2 + h y = f --------------------------------


def _rdeg(coeffs: Sequence) -> int:
    c = list(coeffs)
    while c and Fraction(c[-1]) == 0:
        c.pop()
    return len(c) - 1


def hyper_genus(h: Sequence, f: Sequence) -> int:
    d = max(2 * _rdeg(h), _rdeg(f))
    return (d - 1) // 2


def _reversed(coeffs: list[int], d: int) -> list[int]:
    c = list(coeffs) + [0] * (d + 1 - len(coeffs))
    return fpoly.trim(list(reversed(c[: d + 1])))


def _hyper_smooth_affine(h: list[int], f: list[int], p: int) -> bool:
    if p != 2:
        F = fpoly.add(fpoly.mul(h, h, p), fpoly.scale(f, 4, p), p)
        return bool(F) and (fpoly.deg(F) == 0 or fpoly.is_squarefree(F, p))
    if not h:
        return False
    dh, df = fpoly.deriv(h, p), fpoly.deriv(f, p)
    g = fpoly.add(fpoly.mul(df, df, p), fpoly.mul(f, fpoly.mul(dh, dh, p), p), p)
    return fpoly.deg(fpoly.gcd(h, g, p)) == 0


def hyper_is_smooth(h: list[int], f: list[int], g: int, p: int) -> bool:
    """Smoothness of the genus-g model over F_p-bar, in both charts."""
    if p != 2:
        F = fpoly.add(fpoly.mul(h, h, p), fpoly.scale(f, 4, p), p)
        return fpoly.deg(F) >= 2 * g + 1 and fpoly.is_squarefree(F, p)
    hr, fr = _reversed(h, g + 1), _reversed(f, 2 * g + 2)
    return _hyper_smooth_affine(h, f, p) and _hyper_smooth_affine(hr, fr, p)


def count_hyperelliptic_value(h: Sequence, f: Sequence, ctx: FieldCtx) -> int:
    """#C(F_q) for the smooth projective model of y^2 + h y = f, with
    rational coefficients (low to high)."""
    g = hyper_genus(h, f)
    p = ctx.p
    try:
        hp = fpoly.from_rationals(h, p)
        fp = fpoly.from_rationals(f, p)
    except ZeroDivisionError as e:
        raise BadReduction(str(e)) from None
    if not hyper_is_smooth(hp, fp, g, p):
        raise BadReduction(f"singular reduction mod {p}")
    xs = _elements(ctx)
    hx = _poly_eval(ctx, hp, xs)
    fx = _poly_eval(ctx, fp, xs)
    affine = int(quad_roots(ctx, hx, ctx.vneg(fx)).sum())
    d = 2 * g + 2
    if max(2 * fpoly.deg(hp), fpoly.deg(fp)) < d:
        inf = 1
    else:
        ht = hp[g + 1] if len(hp) > g + 1 else 0
        ft = fp[d] if len(fp) > d else 0
        inf = int(quad_roots(ctx, np.array([ht]), ctx.vneg(np.array([ft])))[0])
    return affine + inf


def count_hyperelliptic_naive(h: Sequence, f: Sequence, ctx: FieldCtx) -> int:
    """Double loop over (x, y) plus the same points at infinity (oracle)."""
    g = hyper_genus(h, f)
    p = ctx.p
    hp = fpoly.from_rationals(h, p)
    fp = fpoly.from_rationals(f, p)
    xs = _elements(ctx)
    hx = _poly_eval(ctx, hp, xs)[:, None]
    fx = _poly_eval(ctx, fp, xs)[:, None]
    y = xs[None, :]
    lhs = ctx.vadd(ctx.vmul(y, y), ctx.vmul(hx, y))
    affine = int(np.count_nonzero(lhs == fx))
    d = 2 * g + 2
    if max(2 * fpoly.deg(hp), fpoly.deg(fp)) < d:
        return affine + 1
    ht = hp[g + 1] if len(hp) > g + 1 else 0
    ft = fp[d] if len(fp) > d else 0
    Y = xs
    val = ctx.vsub(ctx.vadd(ctx.vmul(Y, Y), ctx.vmul(Y, ht)), ft)
    return affine + int(np.count_nonzero(val == 0))


def count_hyperelliptic(h: Sequence, f: Sequence, ctx: FieldCtx, tag: str = "hyper",
                        t=None) -> CountResult:
    g = hyper_genus(h, f)
    try:
        return CountResult(tag, g, None if t is None else t_str(parse_t(t)), ctx.q,
                           count_hyperelliptic_value(h, f, ctx))
    except BadReduction as e:
        return _skip(tag, g, t, ctx.q, str(e))


def curve_D(t) -> tuple[list[Fraction], list[Fraction]]:
    """D_t: y^2 + (3 + 5 t x) y = x^5."""
    t = parse_t(t)
    return [Fraction(3), 5 * t], [Fraction(0)] * 5 + [Fraction(1)]


def P_t_coeffs(t) -> list[Fraction]:
    """4(t^5-1)x^5 + 25t^6x^4 + 50t^7x^3 + 35t^8x^2 + 10t^9x + t^10."""
    t = parse_t(t)
    return [t ** 10, 10 * t ** 9, 35 * t ** 8, 50 * t ** 7, 25 * t ** 6, 4 * (t ** 5 - 1)]


def Q_t_coeffs() -> list[int]:
    """x^5 + 10x^4 + 35x^3 + 50x^2 + 25x + 4, the t-free part of Q_t
    (the full polynomial is ``verify.Q_t_full``)."""
    return [4, 25, 50, 35, 10, 1]


def curve_C(t) -> tuple[list[Fraction], list[Fraction]]:
    """C_t: y^2 = P_t(x)."""
    return [], P_t_coeffs(t)


def count_D(t, ctx: FieldCtx) -> CountResult:
    h, f = curve_D(t)
    return count_hyperelliptic(h, f, ctx, "hyperD", t)


def count_C(t, ctx: FieldCtx) -> CountResult:
    h, f = curve_C(t)
    return count_hyperelliptic(h, f, ctx, "hyperC", t)


# -- superelliptic curves y^5 = c prod (x - r)^m ----------------------


@dataclass(frozen=True)
class Superelliptic:
    lead: Fraction
    factors: tuple[tuple[Fraction, int], ...]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.factors)


def curve_A(t, variant: str = "t5") -> Superelliptic:
    """y^5 = x^2 (1-x)^3 (x - t^e)^2 with e = 5 (or 3 for the literal
    variant)."""
    t = parse_t(t)
    e = {"t5": 5, "t3": 3}[variant]
    return Superelliptic(Fraction(-1), ((Fraction(0), 2), (Fraction(1), 3), (t ** e, 2)))


def curve_B(t) -> Superelliptic:
    """y^5 = x^2 (1-x)^4 (x - t^5)."""
    t = parse_t(t)
    return Superelliptic(Fraction(1), ((Fraction(0), 2), (Fraction(1), 4), (t ** 5, 1)))


def _super_gate(curve: Superelliptic, ctx: FieldCtx, ell: int = 5):
    p = ctx.p
    if p == ell:
        raise BadReduction(f"p = {ell}")
    if curve.degree % ell == 0 or any(m % ell == 0 for _, m in curve.factors):
        raise BadReduction("multiplicities must be prime to the exponent")
    try:
        lead = ctx.from_rational(curve.lead)
        roots = [ctx.from_rational(r) for r, _ in curve.factors]
    except ZeroDivisionError as e:
        raise BadReduction(str(e)) from None
    if lead == 0:
        raise BadReduction("leading constant vanishes")
    if len(set(roots)) < len(roots):
        raise BadReduction(f"branch points collide mod {p}")
    return lead, roots


def _super_values(curve: Superelliptic, ctx: FieldCtx, lead, roots) -> np.ndarray:
    xs = _elements(ctx)
    val = np.full(ctx.q, lead, dtype=np.int64)
    for r, (_, m) in zip(roots, curve.factors):
        val = ctx.vmul(val, ctx.vpow(ctx.vsub(xs, r), m))
    return val


def count_superelliptic_value(curve: Superelliptic, ctx: FieldCtx, ell: int = 5) -> int:
    lead, roots = _super_gate(curve, ctx, ell)
    v = _super_values(curve, ctx, lead, roots)
    q = ctx.q
    if (q - 1) % ell:
        per = np.ones_like(v)
    else:
        lg = ctx.log_np[v]
        per = np.where(v == 0, 1, np.where(lg % ell == 0, ell, 0))
    # degree prime to ell: a single branch over infinity
    return int(per.sum()) + 1


def count_superelliptic_naive(curve: Superelliptic, ctx: FieldCtx, ell: int = 5) -> int:
    lead, roots = _super_gate(curve, ctx, ell)
    v = _super_values(curve, ctx, lead, roots)
    ys = ctx.vpow(_elements(ctx), ell)
    return int(np.count_nonzero(ys[None, :] == v[:, None])) + 1


def count_superelliptic(curve: Superelliptic, ctx: FieldCtx, tag: str = "super", t=None) -> CountResult:
    try:
        return CountResult(tag, None, None if t is None else t_str(parse_t(t)), ctx.q,
                           count_superelliptic_value(curve, ctx))
    except BadReduction as e:
        return _skip(tag, None, t, ctx.q, str(e))


def superelliptic_genus(curve: Superelliptic, ell: int = 5) -> int:
    # every finite branch point and infinity is totally ramified
    branch = len(curve.factors) + 1
    return ((ell - 1) * branch - 2 * ell + 2) // 2


# -- plane quartic ------------------------------------------------------


def _quartic_gate(t, ctx: FieldCtx) -> int:
    if 14 % ctx.p == 0:
        raise BadReduction(f"p={ctx.p} divides 14")
    tt = reduce_t(t, ctx)
    if ctx.pow(tt, 7) == 1:
        raise BadReduction(f"t^7 = 1 mod {ctx.p}")
    return tt


def _quartic_values(ctx: FieldCtx, tt: int, x, y, z):
    v = ctx.vmul
    four, seven, two = (ctx.from_int(k) for k in (4, 7, 2))
    a = v(v(x, v(y, v(y, y))), four)
    b = v(v(x, v(x, x)), z)
    c = v(v(v(x, v(y, y)), z), ctx.mul(seven, tt))
    d = v(v(y, v(z, v(z, z))), two)
    return ctx.vadd(ctx.vsub(ctx.vadd(a, b), c), d)


def count_plane_quartic_value(t, ctx: FieldCtx) -> int:
    """Points of 4xy^3 + x^3z - 7txy^2z + 2yz^3 = 0 in P^2(F_q)."""
    tt = _quartic_gate(t, ctx)
    xs = _elements(ctx)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    total = int(np.count_nonzero(_quartic_values(ctx, tt, X, Y, np.ones_like(X)) == 0))
    zero = np.zeros_like(xs)
    total += int(np.count_nonzero(_quartic_values(ctx, tt, xs, np.ones_like(xs), zero) == 0))
    total += int(_quartic_values(ctx, tt, np.array([1]), np.array([0]), np.array([0]))[0] == 0)
    return total


def count_plane_quartic(t, ctx: FieldCtx) -> CountResult:
    try:
        return CountResult("quartic", 3, t_str(parse_t(t)), ctx.q, count_plane_quartic_value(t, ctx))
    except BadReduction as e:
        return _skip("quartic", 3, t, ctx.q, str(e))


# -- the quintic threefold ---------------------------------------------


class BudgetExceeded(RuntimeError):
    pass


def count_quintic_value(t, ctx: FieldCtx) -> int:
    """Points of X1^5 + ... + X5^5 - 5t X1...X5 = 0 in P^4(F_q)."""
    if ctx.q > QUINTIC_MAX_Q:
        raise BudgetExceeded(f"q={ctx.q} above the sweep budget {QUINTIC_MAX_Q}")
    if 10 % ctx.p == 0:
        raise BadReduction(f"p={ctx.p} divides 10")
    tt = reduce_t(t, ctx)
    if ctx.pow(tt, 5) == 1:
        raise BadReduction(f"t^5 = 1 mod {ctx.p}")
    c = ctx.mul(ctx.from_int(5), tt)
    xs = _elements(ctx)
    p5 = ctx.vpow(xs, 5)
    total = 0
    # chart k: X_1 = ... = X_k = 0, X_{k+1} = 1, the rest free
    for k in range(5):
        free = 4 - k
        if free == 0:
            total += int(ctx.add(1, 0) == 0)
            continue
        grids = np.meshgrid(*([xs] * free), indexing="ij")
        s = np.ones(grids[0].shape, dtype=np.int64)
        for g in grids:
            s = ctx.vadd(s, p5[g])
        if k == 0:
            pr = np.ones_like(s)
            for g in grids:
                pr = ctx.vmul(pr, g)
            s = ctx.vsub(s, ctx.vmul(pr, c))
        total += int(np.count_nonzero(s == 0))
    return total


def count_quintic_threefold(t, ctx: FieldCtx) -> CountResult:
    try:
        return CountResult("quintic", 3, t_str(parse_t(t)), ctx.q, count_quintic_value(t, ctx))
    except BadReduction as e:
        return _skip("quintic", 3, t, ctx.q, str(e))


# -- genus 2 L-polynomials ---------------------------------------------


@dataclass(frozen=True)
class LPoly:
    genus: int
    coeffs: tuple[int, ...]  # 1 + c1 T + c2 T^2 + q c1 T^3 + q^2 T^4
    q: int

    def reciprocal_roots(self) -> np.ndarray:
        return np.roots(list(self.coeffs))  # roots of X^4 + c1 X^3 + ...

    def is_pure(self, tol: float = 1e-6) -> bool:
        r = np.abs(self.reciprocal_roots())
        return bool(np.all(np.abs(r - math.sqrt(self.q)) < tol * max(1.0, math.sqrt(self.q))))

    def count(self, k: int) -> int:
        """#C(F_{q^k}) recovered from the reciprocal roots."""
        a = np.sum(self.reciprocal_roots() ** k)
        return int(round(self.q ** k + 1 - a.real))


def genus2_lpoly(n1: int, n2: int, q: int) -> LPoly:
    c1 = n1 - q - 1
    s2 = q * q + 1 - n2
    if (c1 * c1 - s2) % 2:
        raise ValueError("counts are inconsistent (odd second coefficient)")
    c2 = (c1 * c1 - s2) // 2
    if abs(c1) > 4 * math.sqrt(q) + 1e-9:
        raise ValueError("first coefficient violates the Weil bound")
    L = LPoly(2, (1, c1, c2, q * c1, q * q), q)
    if not L.is_pure():
        raise ValueError("reciprocal roots off the circle |alpha| = sqrt(q)")
    return L


def lpoly_of_curve(h, f, q: int) -> LPoly:
    k1 = field_of_order(q)
    k2 = field_of_order(q * q)
    return genus2_lpoly(count_hyperelliptic_value(h, f, k1), count_hyperelliptic_value(h, f, k2), q)
