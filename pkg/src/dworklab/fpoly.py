"""Dense polynomials over a prime field F_p.

Polynomials are plain lists of ints, lowest degree first, with trailing
zeros stripped (the zero polynomial is ``[]``).  Used for choosing field
moduli, smoothness tests of curve models and degree-pattern sampling.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Sequence[int]) -> int:
    return len(a) - 1


def from_rationals(coeffs: Sequence[int | Fraction], p: int) -> list[int]:
    """Reduce rational coefficients mod p; raises ZeroDivisionError if a
    denominator is divisible by p."""
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ZeroDivisionError(f"denominator {c.denominator} not invertible mod {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return trim(out)


def add(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def sub(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def scale(a, c, p):
    return trim([x * c % p for x in a])


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([x % p for x in out])


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(a) - 1 < db:
        return [], trim(a)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return trim(q), trim(a[:db])


def mod(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if not a:
        return []
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a, b, p):
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def deriv(a, p):
    return trim([i * a[i] % p for i in range(1, len(a))])


def mulmod(a, b, m, p):
    return mod(mul(a, b, p), m, p)


def powmod(a, e, m, p):
    result = [1]
    base = mod(a, m, p)
    while e:
        if e & 1:
            result = mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = mulmod(base, base, m, p)
    return result


def evaluate(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def is_squarefree(a, p) -> bool:
    d = deriv(a, p)
    if not d:
        return False
    return deg(gcd(a, d, p)) == 0


def is_irreducible(a, p) -> bool:
    """Rabin-style test: gcd(a, x^(p^i) - x) = 1 for i <= deg/2, and
    a | x^(p^d) - x."""
    d = deg(a)
    if d < 1:
        return False
    if d == 1:
        return True
    a = monic(a, p)
    x = [0, 1]
    h = x
    for _ in range(d // 2):
        h = powmod(h, p, a, p)
        if deg(gcd(a, sub(h, x, p), p)) > 0:
            return False
    for _ in range(d - d // 2):
        h = powmod(h, p, a, p)
    return sub(h, x, p) == []


def degree_pattern(a, p) -> tuple[int, ...]:
    """Sorted degrees of the irreducible factors of a squarefree polynomial,
    by distinct-degree factorization."""
    f = monic(a, p)
    if deg(f) < 1:
        return ()
    x = [0, 1]
    pattern: list[int] = []
    h = x
    i = 0
    while deg(f) >= 2 * (i + 1):
        i += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, x, p), p)
        if deg(g) > 0:
            pattern.extend([i] * (deg(g) // i))
            f = divmod_(f, g, p)[0]
            h = mod(h, f, p)
    if deg(f) > 0:
        pattern.append(deg(f))
    return tuple(sorted(pattern))


def code_to_poly(code: int, p: int) -> list[int]:
    out = []
    while code:
        code, r = divmod(code, p)
        out.append(r)
    return out


def poly_to_code(a: Sequence[int], p: int) -> int:
    code = 0
    for c in reversed(a):
        code = code * p + c
    return code
