"""Bit-packed linear algebra over F_2.

A matrix is a tuple of row words; bit j of row i is entry (i, j).  A vector
is a single int with bit j holding coordinate j.  All routines are pure.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

Rows = tuple[int, ...]


def pack(a) -> Rows:
    return tuple(sum(1 << j for j, bit in enumerate(row) if int(bit) & 1) for row in np.asarray(a))


def unpack(rows: Rows, n: int) -> np.ndarray:
    out = np.zeros((len(rows), n), dtype=np.int64)
    for i, r in enumerate(rows):
        for j in range(n):
            out[i, j] = (r >> j) & 1
    return out


def identity(n: int) -> Rows:
    return tuple(1 << i for i in range(n))


def vecmat(v: int, a: Rows) -> int:
    """Row vector times matrix: XOR of the rows selected by v."""
    out = 0
    j = 0
    while v:
        if v & 1:
            out ^= a[j]
        v >>= 1
        j += 1
    return out


def mul(a: Rows, b: Rows) -> Rows:
    return tuple(vecmat(r, b) for r in a)


def transpose(a: Rows, n: int) -> Rows:
    return tuple(sum(((r >> j) & 1) << i for i, r in enumerate(a)) for j in range(n))


def rank(a: Sequence[int]) -> int:
    rows = [r for r in a if r]
    rk = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rk += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rk


def inv(a: Rows) -> Rows:
    n = len(a)
    rows = [(a[i], 1 << i) for i in range(n)]
    for col in range(n):
        bit = 1 << col
        piv = next((k for k in range(col, n) if rows[k][0] & bit), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix over F_2")
        rows[col], rows[piv] = rows[piv], rows[col]
        pr, pi = rows[col]
        for k in range(n):
            if k != col and rows[k][0] & bit:
                rows[k] = (rows[k][0] ^ pr, rows[k][1] ^ pi)
    return tuple(r[1] for r in rows)


def matpow(a: Rows, e: int) -> Rows:
    if e < 0:
        a, e = inv(a), -e
    out = identity(len(a))
    while e:
        if e & 1:
            out = mul(out, a)
        a = mul(a, a)
        e >>= 1
    return out


def nullspace(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of {x : row . x = 0 for every row}, x packed as an int."""
    red: list[int] = []
    pivots: list[int] = []
    for r in rows:
        for pr, pc in zip(red, pivots):
            if r >> pc & 1:
                r ^= pr
        if r:
            pc = (r & -r).bit_length() - 1
            # keep the basis fully reduced
            red = [x ^ r if x >> pc & 1 else x for x in red]
            red.append(r)
            pivots.append(pc)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = 1 << fc
        for pr, pc in zip(red, pivots):
            if pr >> fc & 1:
                x |= 1 << pc
        basis.append(x)
    return basis
