"""Dense matrices and polynomials over a finite field.

``Mat`` stores element codes in a read-only numpy array.  Over F_2 the
product, inverse and rank go through the bit-packed routines in
:mod:`dworklab.gf2`; everything else uses generic Gaussian elimination on
codes.  Integer helpers at the bottom serve the exact checks on the
conjugator P.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import gf2
from .ff import FieldCtx, FieldElem


class Mat:
    __slots__ = ("ctx", "a", "_packed")

    def __init__(self, ctx: FieldCtx, entries):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        if a.size and (a.min() < 0 or a.max() >= ctx.q):
            raise ValueError(f"entries out of range for {ctx!r}")
        a.setflags(write=False)
        self.ctx = ctx
        self.a = a
        self._packed = None

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Mat":
        return cls(ctx, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int | None = None) -> "Mat":
        return cls(ctx, np.zeros((rows, rows if cols is None else cols), dtype=np.int64))

    @classmethod
    def from_ints(cls, ctx: FieldCtx, entries) -> "Mat":
        """Reduce integer (or rational) entries into the prime field of ctx."""
        return cls(ctx, [[ctx.from_rational(x) for x in row] for row in entries])

    @classmethod
    def from_packed(cls, rows: gf2.Rows, n: int) -> "Mat":
        from .ff import field_make

        m = cls(field_make(2, 1), gf2.unpack(rows, n))
        m._packed = tuple(rows)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def is_f2(self) -> bool:
        return self.ctx.q == 2

    @property
    def packed(self) -> gf2.Rows:
        if not self.is_f2:
            raise ValueError("bit packing is only defined over F_2")
        if self._packed is None:
            self._packed = gf2.pack(self.a)
        return self._packed

    def key(self) -> bytes:
        return self.a.tobytes()

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.ctx == other.ctx and self.a.shape == other.a.shape and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Mat({self.ctx!r}, {self.a.tolist()})"

    def __getitem__(self, ij) -> FieldElem:
        return FieldElem(self.ctx, int(self.a[ij]))

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    @property
    def T(self) -> "Mat":
        return Mat(self.ctx, self.a.T)

    def __add__(self, other: "Mat") -> "Mat":
        return Mat(self.ctx, self.ctx.vadd(self.a, other.a))

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat(self.ctx, self.ctx.vsub(self.a, other.a))

    def scale(self, c: int) -> "Mat":
        return Mat(self.ctx, self.ctx.vmul(self.a, c))

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def __pow__(self, e: int) -> "Mat":
        return mat_pow(self, e)

    def inv(self) -> "Mat":
        return mat_inv(self)

    def is_identity(self) -> bool:
        return self.a.shape[0] == self.a.shape[1] and np.array_equal(self.a, np.eye(self.n, dtype=np.int64))

    def rank(self) -> int:
        return rank(self)


def _matmul_codes(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if ctx.r == 1:
        return (a @ b) % ctx.p
    prods = ctx.vmul(a[:, :, None], b[None, :, :])
    return ctx.vsum(prods, axis=1)


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.ctx != b.ctx:
        raise ValueError("matrices over different fields")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"incompatible shapes {a.shape} and {b.shape}")
    if a.is_f2 and a.shape[0] == a.shape[1] == b.shape[1]:
        return Mat.from_packed(gf2.mul(a.packed, b.packed), a.n)
    return Mat(a.ctx, _matmul_codes(a.ctx, a.a, b.a))


def _rref(ctx: FieldCtx, rows: list[list[int]], ncols: int | None = None):
    """Reduced row echelon form in place; pivots limited to the first
    ``ncols`` columns.  Returns the list of pivot columns."""
    if not rows:
        return []
    width = len(rows[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ctx.inv(rows[r][c])
        rows[r] = [ctx.mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def mat_inv(a: Mat) -> Mat:
    n = a.n
    if a.shape[1] != n:
        raise ValueError("only square matrices are invertible")
    if a.is_f2:
        return Mat.from_packed(gf2.inv(a.packed), n)
    ctx = a.ctx
    rows = [list(map(int, a.a[i])) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    pivots = _rref(ctx, rows, n)
    if len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return Mat(ctx, [row[n:] for row in rows])


def mat_pow(a: Mat, e: int) -> Mat:
    if e < 0:
        a, e = mat_inv(a), -e
    out = Mat.identity(a.ctx, a.n)
    while e:
        if e & 1:
            out = out @ a
        e >>= 1
        if e:
            a = a @ a
    return out


def rank(a: Mat) -> int:
    if a.is_f2:
        return gf2.rank(gf2.pack(a.a))
    rows = [list(map(int, r)) for r in a.a]
    return len(_rref(a.ctx, rows))


def det(a: Mat) -> int:
    ctx = a.ctx
    rows = [list(map(int, r)) for r in a.a]
    n = len(rows)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = ctx.neg(d)
        d = ctx.mul(d, rows[c][c])
        inv = ctx.inv(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c]:
                f = ctx.mul(rows[i][c], inv)
                rows[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return d


# -- polynomials over a field ---------------------------------------


class Poly:
    """Polynomial over ctx, coefficient codes low to high."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[int]):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)

    @classmethod
    def from_ints(cls, ctx: FieldCtx, coeffs) -> "Poly":
        return cls(ctx, [ctx.from_rational(x) for x in coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.ctx!r}, {list(self.coeffs)})"

    def __add__(self, other: "Poly") -> "Poly":
        ctx = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(ctx, [ctx.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "Poly":
        return Poly(self.ctx, [self.ctx.neg(x) for x in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        ctx = self.ctx
        if not self.coeffs or not other.coeffs:
            return Poly(ctx, [])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
        return Poly(ctx, out)

    def scale(self, c: int) -> "Poly":
        return Poly(self.ctx, [self.ctx.mul(c, x) for x in self.coeffs])

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.ctx.add(self.ctx.mul(acc, x), c)
        return acc


def charpoly(g: Mat) -> Poly:
    """det(xI - g) via reduction to upper Hessenberg form."""
    ctx = g.ctx
    n = g.n
    h = [list(map(int, r)) for r in g.a]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if h[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            h[i], h[m] = h[m], h[i]
            for row in h:
                row[i], row[m] = row[m], row[i]
        inv = ctx.inv(h[m][m - 1])
        for j in range(m + 1, n):
            u = ctx.mul(h[j][m - 1], inv)
            if not u:
                continue
            h[j] = [ctx.sub(x, ctx.mul(u, y)) for x, y in zip(h[j], h[m])]
            for row in h:
                row[m] = ctx.add(row[m], ctx.mul(u, row[j]))
    x = Poly(ctx, [0, 1])
    polys = [Poly(ctx, [1])]
    for m in range(1, n + 1):
        pm = (x - Poly(ctx, [h[m - 1][m - 1]])) * polys[m - 1]
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = ctx.mul(prod, h[i][i - 1])
            coef = ctx.mul(h[i - 1][m - 1], prod)
            if coef:
                pm = pm - polys[i - 1].scale(coef)
        polys.append(pm)
    return polys[n]


def companion(ctx: FieldCtx, monic_low_to_high: Sequence[int]) -> Mat:
    """Companion matrix with ones on the subdiagonal and last column
    (-c_0, ..., -c_{n-1}) for x^n + c_{n-1}x^{n-1} + ... + c_0."""
    c = list(monic_low_to_high)
    n = len(c) - 1
    if c[-1] != 1:
        raise ValueError("polynomial must be monic")
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n):
        a[i, i - 1] = 1
    for i in range(n):
        a[i, n - 1] = ctx.neg(c[i])
    return Mat(ctx, a)


# -- forms and special elements --------------------------------------


def symplectic_gram(ctx: FieldCtx, n: int) -> Mat:
    """[[0, s], [-s, 0]] with s the m x m anti-identity, n = 2m."""
    if n % 2:
        raise ValueError("symplectic forms need even dimension")
    m = n // 2
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(m):
        a[i, n - 1 - i] = 1
        a[n - 1 - i, i] = ctx.neg(1)
    return Mat(ctx, a)


def is_symplectic(g: Mat, J: Mat) -> tuple[bool, int | None]:
    """Whether g^T J g = mu J for a scalar mu; returns (flag, mu)."""
    if J.n % 2:
        raise ValueError("symplectic forms need even dimension")
    gjg = g.T @ J @ g
    nz = np.argwhere(J.a != 0)
    if not len(nz):
        raise ValueError("zero Gram matrix")
    i, j = map(int, nz[0])
    ctx = g.ctx
    mu = ctx.div(int(gjg.a[i, j]), int(J.a[i, j]))
    if not mu:
        return False, None
    ok = np.array_equal(gjg.a, ctx.vmul(J.a, mu))
    return ok, (mu if ok else None)


def is_transvection(g: Mat) -> bool:
    d = g - Mat.identity(g.ctx, g.n)
    return rank(d) == 1 and not np.any((d @ d).a)


# -- linear systems ---------------------------------------------------


@dataclass(frozen=True)
class SolutionSet:
    particular: tuple[int, ...] | None
    kernel: tuple[tuple[int, ...], ...]

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def kernel_rows(ctx: FieldCtx, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of {x : M x = 0} for M given by code rows."""
    if ctx.q == 2 and rows:
        packed = [sum(1 << j for j, b in enumerate(r) if b) for r in rows]
        return [[(v >> j) & 1 for j in range(ncols)] for v in gf2.nullspace(packed, ncols)]
    rows = [list(r) for r in rows]
    pivots = _rref(ctx, rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for r, pc in enumerate(pivots):
            x[pc] = ctx.neg(rows[r][fc])
        basis.append(x)
    return basis


def solve_linear(M: Mat, b: Sequence[int]) -> SolutionSet:
    """Solutions of M x = b: one particular solution (or None) and a kernel
    basis of M."""
    ctx = M.ctx
    m, k = M.shape
    if len(b) != m:
        raise ValueError("right-hand side has the wrong length")
    rows = [list(map(int, M.a[i])) + [int(b[i])] for i in range(m)]
    pivots = _rref(ctx, rows, k)
    kernel = kernel_rows(ctx, [list(map(int, r)) for r in M.a], k)
    inconsistent = any(all(v == 0 for v in row[:k]) and row[k] for row in rows)
    if inconsistent:
        return SolutionSet(None, tuple(map(tuple, kernel)))
    x = [0] * k
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][k]
    return SolutionSet(tuple(x), tuple(map(tuple, kernel)))


# -- exact integer matrices -------------------------------------------


def int_matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def int_det(a) -> int:
    """Determinant of an integer matrix (fraction-free Bareiss)."""
    m = [list(map(int, row)) for row in a]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_det(a) -> Fraction:
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d
