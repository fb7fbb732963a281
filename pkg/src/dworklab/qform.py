"""Quadratic maps on k^n, mainly in characteristic 2.

F(x) = sum_{i<=j} c_ij x_i x_j with the coefficients kept in an upper
triangular array.  Vectors here are column vectors and a matrix g acts by
x -> g x, so F is g-invariant when F(g x) = F(x).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ff import FieldCtx, abs_trace, FieldElem
from .linalg import Mat, kernel_rows, rank

ENUM_LIMIT = 10 ** 7


@dataclass(frozen=True, eq=False)
class QuadForm:
    ctx: FieldCtx
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.int64)
        if c.size == 0:
            c = c.reshape(0, 0)
        c = np.triu(c) if c.ndim == 2 else c
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("coefficients must form a square array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    def __eq__(self, other):
        return isinstance(other, QuadForm) and self.ctx == other.ctx and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        terms = []
        for i in range(self.n):
            for j in range(i, self.n):
                c = int(self.coeffs[i, j])
                if c:
                    mono = f"x{i + 1}^2" if i == j else f"x{i + 1}x{j + 1}"
                    terms.append(mono if c == 1 else f"{c}*{mono}")
        return f"QuadForm({self.ctx!r}: {' + '.join(terms) or '0'})"

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __call__(self, x: Sequence[int]) -> int:
        ctx = self.ctx
        acc = 0
        for i in range(self.n):
            if not x[i]:
                continue
            for j in range(i, self.n):
                c = int(self.coeffs[i, j])
                if c and x[j]:
                    acc = ctx.add(acc, ctx.mul(c, ctx.mul(x[i], x[j])))
        return acc

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        """F on each row of an (m, n) array of coordinate codes."""
        ctx = self.ctx
        X = np.asarray(X, dtype=np.int64)
        out = np.zeros(len(X), dtype=np.int64)
        for i, j in zip(*np.nonzero(self.coeffs)):
            term = ctx.vmul(ctx.vmul(X[:, i], X[:, j]), int(self.coeffs[i, j]))
            out = ctx.vadd(out, term)
        return out

    def polar_matrix(self) -> Mat:
        """Gram matrix of B(x, y) = F(x+y) - F(x) - F(y), i.e. U + U^T."""
        ctx = self.ctx
        return Mat(ctx, ctx.vadd(self.coeffs, self.coeffs.T))

    def polar(self, x: Sequence[int], y: Sequence[int]) -> int:
        ctx = self.ctx
        return ctx.sub(ctx.sub(self([ctx.add(a, b) for a, b in zip(x, y)]), self(x)), self(y))

    def polar_rank(self) -> int:
        return rank(self.polar_matrix())

    def is_nondegenerate(self) -> bool:
        return self.polar_rank() == self.n

    def pullback(self, g: Mat) -> "QuadForm":
        """The form x -> F(g x)."""
        ctx = self.ctx
        n = self.n
        ga = g.a
        out = np.zeros((n, n), dtype=np.int64)
        for i, j in zip(*np.nonzero(self.coeffs)):
            c = int(self.coeffs[i, j])
            # c * (sum_k g_ik x_k)(sum_l g_jl x_l)
            outer = ctx.vmul(ctx.vmul(ga[i][:, None], ga[j][None, :]), c)
            up = np.triu(ctx.vadd(outer, np.triu(outer.T, 1)))
            diag = np.diag(np.diag(outer))
            up = np.where(np.eye(n, dtype=bool), diag, up)
            out = ctx.vadd(out, up)
        return QuadForm(ctx, out)

    def restrict(self, basis: Sequence[Sequence[int]]) -> "QuadForm":
        """Form in coordinates y -> F(sum_a y_a v_a) for the given vectors."""
        ctx = self.ctx
        k = len(basis)
        out = np.zeros((k, k), dtype=np.int64)
        for a in range(k):
            out[a, a] = self(basis[a])
            for b in range(a + 1, k):
                out[a, b] = self.polar(basis[a], basis[b])
        return QuadForm(ctx, out)

    def all_values(self) -> np.ndarray:
        ctx, n = self.ctx, self.n
        total = ctx.q ** n
        codes = np.arange(total, dtype=np.int64)
        qpow = ctx.q ** np.arange(n, dtype=np.int64)
        return self.evaluate_many((codes[:, None] // qpow) % ctx.q)


def standard_form(sign: str, n: int, ctx: FieldCtx) -> QuadForm:
    """F^+ = sum_{i<=m} x_i x_{n+1-i}; F^- replaces the middle term by
    x_m^2 + x_m x_{m+1} + mu x_{m+1}^2."""
    if n % 2 or n < 2:
        raise ValueError("standard forms need even n >= 2")
    if sign not in ("plus", "minus"):
        raise ValueError(f"unknown sign {sign!r}")
    m = n // 2
    c = np.zeros((n, n), dtype=np.int64)
    for i in range(m):
        c[i, n - 1 - i] = 1
    if sign == "minus":
        c[m - 1, m - 1] = 1
        c[m, m] = minus_mu(ctx)
    return QuadForm(ctx, c)


def minus_mu(ctx: FieldCtx) -> int:
    """Least code mu making x^2 + x + mu irreducible over ctx."""
    for mu in range(1, ctx.q):
        if ctx.p == 2:
            if abs_trace(FieldElem(ctx, mu)) == 1:
                return mu
        else:
            # discriminant 1 - 4 mu is a non-square
            d = ctx.sub(1, ctx.mul(ctx.from_int(4), mu))
            if d and ctx.log[d] % 2 == 1:
                return mu
    raise AssertionError("no suitable mu")  # pragma: no cover


def plus_zeros(n: int, q: int) -> int:
    return q ** (n - 1) + q ** (n // 2) - q ** (n // 2 - 1)


def minus_zeros(n: int, q: int) -> int:
    return q ** (n - 1) - q ** (n // 2) + q ** (n // 2 - 1)


def value_distribution(F: QuadForm) -> dict[int, int]:
    """Number of x in k^n with F(x) = c, for every c.

    Enumerates when q^n is small; for a form with nondegenerate polar form
    in characteristic 2 it splits off hyperbolic planes recursively."""
    ctx, n = F.ctx, F.n
    if n == 0:
        return {0: 1}
    if ctx.q ** n <= ENUM_LIMIT or n <= 2:
        return dict(Counter(F.all_values().tolist()))
    if ctx.p != 2 or not F.is_nondegenerate():
        raise ValueError("form too large to enumerate and not splittable")
    v, w = _hyperbolic_pair(F)
    plane = F.restrict([v, w])
    comp = _orth_complement(F, v, w)
    rest = F.restrict(comp)
    return _convolve(ctx, value_distribution(plane), value_distribution(rest))


def _convolve(ctx, a: dict, b: dict) -> dict:
    out: Counter = Counter()
    for x, cx in a.items():
        for y, cy in b.items():
            out[ctx.add(x, y)] += cx * cy
    return dict(out)


def _hyperbolic_pair(F: QuadForm):
    ctx, n = F.ctx, F.n
    G = F.polar_matrix().a
    e = [[1 if k == i else 0 for k in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            b = int(G[i, j])
            if b:
                w = [ctx.div(x, b) for x in e[j]]
                return e[i], w
    raise ValueError("polar form is zero")


def _orth_complement(F: QuadForm, v, w):
    """Basis of {v, w}^perp for the polar form, where B(v, w) = 1."""
    ctx, n = F.ctx, F.n
    rows = []
    for i in range(n):
        u = [1 if k == i else 0 for k in range(n)]
        bw, bv = F.polar(u, w), F.polar(u, v)
        # u + B(u,w) v - B(u,v) w is orthogonal to both
        up = [ctx.sub(ctx.add(u[k], ctx.mul(bw, v[k])), ctx.mul(bv, w[k])) for k in range(n)]
        rows.append(up)
    basis: list = []
    for r in rows:
        if len(basis) == n - 2:
            break
        if rank(Mat(ctx, basis + [r])) > len(basis):
            basis.append(r)
    return basis


def zero_count(F: QuadForm) -> int:
    return value_distribution(F).get(0, 0)


@dataclass(frozen=True)
class FormType:
    kind: str  # "plus", "minus" or "degenerate"
    zeros: int | None


def classify_type(F: QuadForm) -> FormType:
    ctx, n = F.ctx, F.n
    if n % 2 or not F.is_nondegenerate():
        zeros = zero_count(F) if ctx.q ** n <= ENUM_LIMIT else None
        return FormType("degenerate", zeros)
    z = zero_count(F)
    if z == plus_zeros(n, ctx.q):
        return FormType("plus", z)
    if z == minus_zeros(n, ctx.q):
        return FormType("minus", z)
    return FormType("degenerate", z)


# -- invariant forms --------------------------------------------------


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def invariant_forms(gens: Sequence[Mat]) -> list[QuadForm]:
    """Basis of the quadratic maps F with F(g x) = F(x) for all generators,
    found by matching polynomial coefficients."""
    if not gens:
        raise ValueError("need at least one generator")
    ctx = gens[0].ctx
    n = gens[0].n
    pairs = _pairs(n)
    rows = []
    for g in gens:
        a = g.a
        for (k, l) in pairs:
            row = []
            for (i, j) in pairs:
                if k == l:
                    v = ctx.mul(int(a[i, k]), int(a[j, k]))
                else:
                    v = ctx.add(ctx.mul(int(a[i, k]), int(a[j, l])), ctx.mul(int(a[i, l]), int(a[j, k])))
                if (i, j) == (k, l):
                    v = ctx.sub(v, 1)
                row.append(v)
            rows.append(row)
    out = []
    for vec in kernel_rows(ctx, rows, len(pairs)):
        c = np.zeros((n, n), dtype=np.int64)
        for (i, j), x in zip(pairs, vec):
            c[i, j] = x
        out.append(QuadForm(ctx, c))
    return out


def invariant_alternating_forms(gens: Sequence[Mat]) -> list[Mat]:
    """Basis of alternating Gram matrices G with g^T G g = G for all
    generators."""
    ctx = gens[0].ctx
    n = gens[0].n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rows = []
    for g in gens:
        a = g.a
        for (k, l) in pairs:
            row = []
            for (i, j) in pairs:
                v = ctx.sub(ctx.mul(int(a[i, k]), int(a[j, l])), ctx.mul(int(a[j, k]), int(a[i, l])))
                if (i, j) == (k, l):
                    v = ctx.sub(v, 1)
                row.append(v)
            rows.append(row)
    out = []
    for vec in kernel_rows(ctx, rows, len(pairs)):
        G = np.zeros((n, n), dtype=np.int64)
        for (i, j), x in zip(pairs, vec):
            G[i, j] = x
            G[j, i] = ctx.neg(x)
        out.append(Mat(ctx, G))
    return out


def preserves(F: QuadForm, g: Mat) -> bool:
    return F.pullback(g) == F
