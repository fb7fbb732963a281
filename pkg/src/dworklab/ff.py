"""Finite fields F_{p^r} with q <= 2**16.

Elements are encoded as ints in [0, q): the code of the residue
sum(c_i x^i) mod the field modulus is sum(c_i p^i).  Prime-field elements
therefore coincide with their residues, and in characteristic 2 addition is
XOR on codes.  Multiplication goes through exp/log tables built from a
canonical generator; odd extension fields add through Zech logarithms.

Hot loops work on raw codes through the ``FieldCtx`` methods (scalar and
numpy-vectorized variants).  ``FieldElem`` is the convenient wrapper for
everything else.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import fpoly

MAX_Q = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, r) with q = p^r, or None."""
    if q < 2:
        return None
    for p in prime_factors(q)[:1]:
        r = 0
        while q % p == 0:
            q //= p
            r += 1
        return (p, r) if q == 1 else None
    return None


def mult_order(a: int, N: int) -> int:
    """Multiplicative order of a modulo N."""
    if math.gcd(a, N) != 1:
        raise ValueError(f"{a} is not a unit mod {N}")
    d, x = 1, a % N
    while x != 1 % N:
        x = x * a % N
        d += 1
    return d


@dataclass(frozen=True)
class FieldCtx:
    p: int
    r: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.r

    def __repr__(self):
        return f"F_{self.q}"

    # -- tables -------------------------------------------------------

    @cached_property
    def _tables(self):
        q, p = self.q, self.p
        mulmod = self._mulmod_code
        gen = self._find_generator()
        exp = [0] * (q - 1)
        log = [-1] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = mulmod(x, gen)
        assert x == 1
        return gen, exp, log

    @property
    def generator(self) -> int:
        """Canonical generator of F_q^x: least code of full order."""
        return self._tables[0]

    @property
    def exp(self) -> list[int]:
        return self._tables[1]

    @property
    def log(self) -> list[int]:
        return self._tables[2]

    @cached_property
    def exp_np(self) -> np.ndarray:
        # doubled so that log a + log b indexes without a modulo
        e = np.array(self.exp, dtype=np.int64)
        return np.concatenate([e, e])

    @cached_property
    def log_np(self) -> np.ndarray:
        return np.array(self.log, dtype=np.int64)

    @cached_property
    def zech(self) -> list[int]:
        """zech[k] = log(1 + g^k), -1 when 1 + g^k = 0."""
        p = self.p
        out = []
        for c in self.exp:
            one_plus = c + 1 if c % p != p - 1 else c - (p - 1)
            out.append(self.log[one_plus])
        return out

    @cached_property
    def zech_np(self) -> np.ndarray:
        return np.array(self.zech, dtype=np.int64)

    @cached_property
    def minus_one(self) -> int:
        return self.p - 1  # the constant polynomial p-1

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Absolute trace Tr_{F_q/F_p} of every code, as an int array."""
        codes = np.arange(self.q, dtype=np.int64)
        acc = codes.copy()
        cur = codes
        for _ in range(self.r - 1):
            cur = self.vpow(cur, self.p)
            acc = self.vadd(acc, cur)
        assert int(acc.max()) < self.p
        return acc

    @cached_property
    def square_table(self) -> np.ndarray:
        """Boolean mask of nonzero squares (odd q); every element in char 2."""
        if self.p == 2:
            return np.ones(self.q, dtype=bool)
        lg = self.log_np
        return (lg >= 0) & (lg % 2 == 0)

    # -- construction helpers ----------------------------------------

    def _mulmod_code(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        if self.p == 2:
            m = fpoly.poly_to_code(self.modulus, 2)
            out = 0
            while b:
                if b & 1:
                    out ^= a
                b >>= 1
                a <<= 1
                if a >> self.r & 1:
                    a ^= m
            return out
        p = self.p
        prod = fpoly.mulmod(fpoly.code_to_poly(a, p), fpoly.code_to_poly(b, p), list(self.modulus), p)
        return fpoly.poly_to_code(prod, p)

    def _powmod_code(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._mulmod_code(out, a)
            a = self._mulmod_code(a, a)
            e >>= 1
        return out

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        ells = prime_factors(q - 1)
        for g in range(2 if q > 2 else 1, q):
            if all(self._powmod_code(g, (q - 1) // ell) != 1 for ell in ells):
                return g
        raise AssertionError("no generator found")  # pragma: no cover

    # -- scalar arithmetic on codes ----------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.r == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self.exp[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.r == 1:
            return self.p - a
        return self.exp[(self.log[a] + (self.q - 1) // 2) % (self.q - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.r == 1:
            return pow(a, -1, self.p)
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def from_int(self, x: int) -> int:
        return x % self.p

    def from_rational(self, x: int | Fraction) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} is not {self.p}-integral")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def elem(self, code: int) -> "FieldElem":
        return FieldElem(self, code)

    # -- vectorized arithmetic on numpy code arrays ------------------

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.r == 1:
            return (a + b) % self.p
        a, b = np.broadcast_arrays(a, b)
        out = np.where(a == 0, b, a).astype(np.int64)
        both = (a != 0) & (b != 0)
        la = self.log_np[a[both]]
        k = (self.log_np[b[both]] - la) % (self.q - 1)
        z = self.zech_np[k]
        res = np.where(z < 0, 0, self.exp_np[(la + np.maximum(z, 0)) % (self.q - 1)])
        out[both] = res
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        if self.r == 1:
            return (-a) % self.p
        la = self.log_np[a]
        return np.where(a == 0, 0, self.exp_np[(la + (self.q - 1) // 2) % (self.q - 1)])

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.r == 1:
            return a * b % self.p
        la = self.log_np[a]
        lb = self.log_np[b]
        return np.where((la < 0) | (lb < 0), 0, self.exp_np[np.maximum(la, 0) + np.maximum(lb, 0)])

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.exp_np[(-self.log_np[a]) % (self.q - 1)]

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        la = self.log_np[a]
        res = self.exp_np[(np.maximum(la, 0) * e) % (self.q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(la < 0, 0, res)

    def vsum(self, arr, axis=0):
        """Sum an array of codes along ``axis``."""
        arr = np.asarray(arr, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(arr, axis=axis)
        if self.r == 1:
            return arr.sum(axis=axis) % self.p
        arr = np.moveaxis(arr, axis, 0)
        acc = arr[0]
        for part in arr[1:]:
            acc = self.vadd(acc, part)
        return acc


class FieldTooLarge(ValueError):
    """Table-based arithmetic is capped at MAX_Q elements."""


@functools.lru_cache(maxsize=None)
def field_make(p: int, r: int = 1) -> FieldCtx:
    """The field F_{p^r} with the irreducible modulus of least code."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if r < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** r > MAX_Q:
        raise FieldTooLarge(f"q = {p}^{r} exceeds {MAX_Q}")
    if r == 1:
        return FieldCtx(p, 1, (0, 1))
    for code in range(p ** r, 2 * p ** r):
        cand = fpoly.code_to_poly(code, p)
        if fpoly.is_irreducible(cand, p):
            return FieldCtx(p, r, tuple(cand))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def field_of_order(q: int) -> FieldCtx:
    pr = prime_power(q)
    if pr is None:
        raise ValueError(f"{q} is not a prime power")
    return field_make(*pr)


class FieldElem:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        if not 0 <= code < ctx.q:
            raise ValueError(f"code {code} out of range for {ctx!r}")
        self.ctx = ctx
        self.code = int(code)

    @property
    def rep(self) -> tuple[int, ...]:
        """Coefficients of the residue polynomial, low to high, length r."""
        digits = fpoly.code_to_poly(self.code, self.ctx.p)
        return tuple(digits + [0] * (self.ctx.r - len(digits)))

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ValueError("elements of different fields")
            return other.code
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._other(other), self.code))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.code, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self._other(other), self.code))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.code, e))

    def inverse(self):
        return FieldElem(self.ctx, self.ctx.inv(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.code == other.code
        if isinstance(other, int):
            return self.code == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.q, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"{self.ctx!r}({self.code})"


def elem_order(a: FieldElem) -> int:
    """Multiplicative order of a nonzero element."""
    if a.code == 0:
        raise ValueError("zero has no multiplicative order")
    q = a.ctx.q
    return (q - 1) // math.gcd(q - 1, a.ctx.log[a.code])


def abs_trace(a: FieldElem) -> int:
    """Tr_{F_q/F_p}(a) as an element of F_p (an int in [0, p))."""
    ctx = a.ctx
    acc, cur = 0, a.code
    for _ in range(ctx.r):
        acc = ctx.add(acc, cur)
        cur = ctx.pow(cur, ctx.p)
    return acc


def residue_degree(N: int, p: int) -> int:
    """Degree over F_p of the residue field of Z[zeta_N]^+ at a prime above p:
    the order of p in (Z/N)^x / {+-1}."""
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and >= 3")
    if N % p == 0:
        raise ValueError(f"p={p} divides N={N}")
    f, x = 1, p % N
    while x != 1 and x != N - 1:
        x = x * p % N
        f += 1
    return f


def cyclotomic_element(N: int, ctx: FieldCtx) -> FieldElem:
    """g^((q-1)/N) for the canonical generator g: an element of order N."""
    if (ctx.q - 1) % N:
        raise ValueError(f"{ctx!r} has no element of order {N}")
    return FieldElem(ctx, ctx.exp[(ctx.q - 1) // N])


def in_subfield(a: FieldElem, s: int) -> bool:
    """Whether a lies in F_{p^s} (s must divide r)."""
    if a.ctx.r % s:
        raise ValueError(f"F_{a.ctx.p}^{s} is not a subfield of {a.ctx!r}")
    return a.ctx.pow(a.code, a.ctx.p ** s) == a.code


@functools.lru_cache(maxsize=None)
def subfield_embedding(small: FieldCtx, big: FieldCtx) -> tuple[int, ...]:
    """Codes in ``big`` of the elements of ``small`` under the embedding that
    sends x to the least-code root of small's modulus."""
    if small.p != big.p or big.r % small.r:
        raise ValueError(f"{small!r} does not embed in {big!r}")
    root = None
    for c in range(big.q):
        acc = 0
        for coef in reversed(small.modulus):
            acc = big.add(big.mul(acc, c), coef)
        if acc == 0:
            root = c
            break
    assert root is not None
    powers = [big.pow(root, i) for i in range(small.r)]
    out = []
    for code in range(small.q):
        acc = 0
        for i, d in enumerate(fpoly.code_to_poly(code, small.p)):
            acc = big.add(acc, big.mul(d, powers[i]))
        out.append(acc)
    return tuple(out)
