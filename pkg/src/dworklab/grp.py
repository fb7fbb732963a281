"""Finitely generated matrix groups over a finite field.

Groups act on the right of row vectors, v -> v g, and the Schreier-Sims
machinery works with the induced permutation action on nonzero vectors.
A vector is encoded as an int: over F_2 bit j is coordinate j, otherwise
the code is sum_j v_j q^j with v_j an element code.  For q = 2^r this is
plain bit concatenation, so vector addition is XOR.

Orbits are kept as dense Schreier vectors indexed by vector code, which
keeps the inner loops in numpy even for q^n in the tens of millions.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import gf2
from .ff import FieldCtx
from .linalg import Mat, _matmul_codes

DEGREE_BOUND = 2 ** 24
BFS_CAP_MAX = 10 ** 7
_CHUNK = 1 << 20


class DegreeBoundExceeded(RuntimeError):
    """The permutation degree q^n - 1 is above DEGREE_BOUND."""


class BoundViolated(RuntimeError):
    """A claimed upper bound for the order was exceeded."""


# -- order formulas ---------------------------------------------------


def gl_order(n: int, q: int) -> int:
    return math.prod(q ** n - q ** i for i in range(n))


def sp_order(n: int, q: int) -> int:
    if n % 2:
        raise ValueError("symplectic groups need even n")
    m = n // 2
    return q ** (m * m) * math.prod(q ** (2 * i) - 1 for i in range(1, m + 1))


def o_order(n: int, q: int, sign: int) -> int:
    """|O^+-_n(q)| for even n (full isometry group of a nondegenerate
    quadratic form)."""
    if n % 2 or sign not in (1, -1):
        raise ValueError("need even n and sign +-1")
    m = n // 2
    return 2 * q ** (m * (m - 1)) * (q ** m - sign) * math.prod(q ** (2 * i) - 1 for i in range(1, m))


def symmetric_order(k: int) -> int:
    return math.factorial(k)


# -- element backends -------------------------------------------------


class _GF2:
    """Elements are packed row tuples."""

    def __init__(self, n: int):
        self.n = n
        self.q = 2
        self.one = gf2.identity(n)
        self.degree = 2 ** n

    def from_mat(self, m: Mat):
        return m.packed

    def to_mat(self, e) -> Mat:
        return Mat.from_packed(e, self.n)

    def mul(self, a, b):
        return gf2.mul(a, b)

    def inv(self, a):
        return gf2.inv(a)

    def key(self, a):
        return a

    def is_one(self, a) -> bool:
        return a == self.one

    def act(self, e, v: int) -> int:
        return gf2.vecmat(v, e)

    def table(self, e):
        return np.array(e, dtype=np.int64)

    def act_many(self, rows: np.ndarray, v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        for j, r in enumerate(rows):
            out ^= np.where((v >> j) & 1, r, 0)
        return out


class _Generic:
    """Elements are read-only numpy code arrays."""

    def __init__(self, ctx: FieldCtx, n: int):
        self.ctx = ctx
        self.n = n
        self.q = ctx.q
        one = np.eye(n, dtype=np.int64)
        one.setflags(write=False)
        self.one = one
        self.degree = ctx.q ** n
        self.qpow = np.array([ctx.q ** j for j in range(n)], dtype=np.int64)
        self._char2 = ctx.p == 2

    def from_mat(self, m: Mat):
        return m.a

    def to_mat(self, e) -> Mat:
        return Mat(self.ctx, e)

    def mul(self, a, b):
        out = _matmul_codes(self.ctx, a, b)
        out.setflags(write=False)
        return out

    def inv(self, a):
        out = Mat(self.ctx, a).inv().a
        return out

    def key(self, a):
        return a.tobytes()

    def is_one(self, a) -> bool:
        return np.array_equal(a, self.one)

    def digits(self, v):
        v = np.asarray(v, dtype=np.int64)
        return (v[..., None] // self.qpow) % self.q

    def act(self, e, v: int) -> int:
        d = self.digits(v)
        w = self.ctx.vsum(self.ctx.vmul(d[:, None], e), axis=0)
        return int(w @ self.qpow)

    def table(self, e):
        if self._char2:
            # per-coordinate lookup: c -> code of c * (row j)
            ctx = self.ctx
            cs = np.arange(self.q, dtype=np.int64)
            return np.stack([ctx.vmul(cs[:, None], e[j][None, :]) @ self.qpow for j in range(self.n)])
        return e

    def act_many(self, tab, v: np.ndarray) -> np.ndarray:
        if self._char2:
            r = self.ctx.r
            mask = self.q - 1
            out = np.zeros_like(v)
            for j in range(self.n):
                out ^= tab[j][(v >> (r * j)) & mask]
            return out
        out = np.empty_like(v)
        for s in range(0, len(v), _CHUNK):
            d = self.digits(v[s:s + _CHUNK])
            if self.ctx.r == 1:
                w = (d @ tab) % self.ctx.p
            else:
                w = self.ctx.vsum(self.ctx.vmul(d[:, :, None], tab[None, :, :]), axis=1)
            out[s:s + _CHUNK] = w @ self.qpow
        return out


def _backend(ctx: FieldCtx, n: int):
    return _GF2(n) if ctx.q == 2 else _Generic(ctx, n)


# -- Schreier-Sims ----------------------------------------------------


class _Level:
    """One level of the stabilizer chain: base point, strong generators
    fixing the earlier base points, and a Schreier vector for the orbit."""

    def __init__(self, be, point: int):
        self.be = be
        self.point = point
        self.gens: list = []
        self.inv: list = []
        self.tabs: list = []
        self.labels = np.full(be.degree, -1, dtype=np.int8)
        self.labels[point] = 127  # root marker
        self.orbit = np.array([point], dtype=np.int64)
        self.checked: set[tuple[int, int]] = set()

    @property
    def size(self) -> int:
        return len(self.orbit)

    def add_gen(self, g) -> None:
        be = self.be
        if len(self.gens) >= 126:
            if self.labels.dtype == np.int8:
                lab = self.labels.astype(np.int16)
                lab[lab == 127] = 32767
                self.labels = lab
        self.gens.append(g)
        self.inv.append(be.inv(g))
        self.tabs.append(be.table(g))
        self._extend(self.orbit, only=len(self.gens) - 1)

    def _root(self) -> int:
        return 127 if self.labels.dtype == np.int8 else 32767

    def _extend(self, frontier: np.ndarray, only: int | None = None) -> None:
        be = self.be
        pending = frontier
        first = True
        while len(pending):
            fresh = []
            idxs = [only] if (first and only is not None) else range(len(self.gens))
            for s in idxs:
                img = be.act_many(self.tabs[s], pending)
                new = img[self.labels[img] == -1]
                if len(new):
                    new = np.unique(new)
                    self.labels[new] = s
                    fresh.append(new)
            first = False
            pending = np.concatenate(fresh) if fresh else np.empty(0, dtype=np.int64)
            if len(pending):
                self.orbit = np.concatenate([self.orbit, pending])

    def contains(self, y: int) -> bool:
        return self.labels[y] != -1

    def strip(self, g, y: int):
        """Multiply g on the right by u_y^{-1}, where u_y maps the base point
        to y; the result fixes the base point."""
        be = self.be
        root = self._root()
        lab = int(self.labels[y])
        while lab != root:
            si = self.inv[lab]
            g = be.mul(g, si)
            y = be.act(si, y)
            lab = int(self.labels[y])
        return g

    def transversal(self, y: int):
        """u_y with base point . u_y = y."""
        be = self.be
        root = self._root()
        word = []
        lab = int(self.labels[y])
        while lab != root:
            word.append(lab)
            y = be.act(self.inv[lab], y)
            lab = int(self.labels[y])
        u = be.one
        for s in reversed(word):
            u = be.mul(u, self.gens[s])
        return u


@dataclass
class BSGS:
    levels: list = field(default_factory=list)
    complete: bool = False

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    @property
    def orbit_lengths(self) -> list[int]:
        return [lv.size for lv in self.levels]

    @property
    def order(self) -> int:
        return math.prod(self.orbit_lengths)


class MatGroup:
    """Group generated by invertible matrices over one field."""

    def __init__(self, gens: Sequence[Mat], ctx: FieldCtx | None = None, n: int | None = None):
        gens = list(gens)
        if not gens and (ctx is None or n is None):
            raise ValueError("an empty generating set needs ctx and n")
        self.ctx = gens[0].ctx if gens else ctx
        self.n = gens[0].n if gens else n
        for g in gens:
            if g.ctx != self.ctx or g.shape != (self.n, self.n):
                raise ValueError("generators must share field and dimension")
            if g.rank() < self.n:
                raise ValueError("generator is not invertible")
        self.gens = gens
        self.be = _backend(self.ctx, self.n)
        self._egens = [self.be.from_mat(g) for g in gens]
        self._bsgs: BSGS | None = None
        self._order: int | None = None

    @property
    def degree(self) -> int:
        return self.be.degree - 1

    def __repr__(self):
        return f"MatGroup(n={self.n}, field={self.ctx!r}, ngens={len(self.gens)})"

    # -- BSGS construction --

    def _check_degree(self):
        if self.degree > DEGREE_BOUND:
            raise DegreeBoundExceeded(f"action degree {self.degree} > {DEGREE_BOUND}")

    def _sift(self, bsgs: BSGS, g, start: int = 0):
        """Strip g through levels >= start; returns (residue, level) where
        level is the first level whose orbit misses the image, or
        len(levels) if g survived every level."""
        be = self.be
        for i in range(start, len(bsgs.levels)):
            lv = bsgs.levels[i]
            y = be.act(g, lv.point)
            if not lv.contains(y):
                return g, i
            g = lv.strip(g, y)
        return g, len(bsgs.levels)

    def _moved_point(self, g) -> int:
        be = self.be
        for j in range(self.n):
            v = be.q ** j if be.q > 2 else 1 << j
            if be.act(g, v) != v:
                return v
        # g is the identity on a basis, hence trivial
        raise AssertionError("identity has no moved basis vector")

    def _add_strong(self, bsgs: BSGS, g, upto: int) -> None:
        """Add g as strong generator at levels 1..upto, opening a new level
        when g fixes every base point."""
        if upto == len(bsgs.levels):
            bsgs.levels.append(_Level(self.be, self._moved_point(g)))
        for i in range(upto + 1):
            bsgs.levels[i].add_gen(g)

    def _new_bsgs(self) -> BSGS:
        bsgs = BSGS()
        for g in self._egens:
            if self.be.is_one(g):
                continue
            h, j = self._sift(bsgs, g)
            if not self.be.is_one(h):
                self._add_strong(bsgs, h, j)
        return bsgs

    def _random_phase(self, bsgs: BSGS, bound: int, seed: int, patience: int) -> None:
        be = self.be
        rng = random.Random(seed)
        pool = [g for g in self._egens if not be.is_one(g)]
        if not pool:
            return
        while len(pool) < 10:
            pool.append(pool[rng.randrange(len(pool))])
        acc = be.one
        for _ in range(50):
            i, j = rng.sample(range(len(pool)), 2)
            pool[i] = be.mul(pool[i], pool[j])
        quiet = 0
        while bsgs.order < bound and quiet < patience:
            i, j = rng.sample(range(len(pool)), 2)
            if rng.random() < 0.5:
                pool[i] = be.mul(pool[i], pool[j])
            else:
                pool[i] = be.mul(pool[j], pool[i])
            acc = be.mul(acc, pool[i])
            h, lv = self._sift(bsgs, acc)
            if be.is_one(h):
                quiet += 1
                continue
            quiet = 0
            self._add_strong(bsgs, h, lv)
        if bsgs.order > bound:
            raise BoundViolated(f"orbit product {bsgs.order} exceeds claimed bound {bound}")

    def _deterministic_phase(self, bsgs: BSGS) -> None:
        be = self.be
        i = len(bsgs.levels) - 1
        while i >= 0:
            lv = bsgs.levels[i]
            restart = None
            for y in lv.orbit.tolist():
                uy = None
                for s in range(len(lv.gens)):
                    if (y, s) in lv.checked:
                        continue
                    lv.checked.add((y, s))
                    if uy is None:
                        uy = lv.transversal(y)
                    g = be.mul(uy, lv.gens[s])
                    h, j = self._sift(bsgs, g, start=i)
                    if not be.is_one(h):
                        self._add_strong(bsgs, h, j)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = min(restart, len(bsgs.levels) - 1)
            else:
                i -= 1

    def build_bsgs(self, bound: int | None = None, seed: int = 0, patience: int = 40) -> BSGS:
        """Stabilizer chain for the vector action.

        With ``bound`` (a proven upper bound on the order) a seeded random
        Schreier-Sims runs first and stops as soon as the product of orbit
        lengths, a lower bound for the order, meets it.  Otherwise, or if
        the bound is not reached, every Schreier generator is sifted.
        """
        if self._bsgs is not None and self._bsgs.complete:
            return self._bsgs
        self._check_degree()
        bsgs = self._new_bsgs()
        if bound is not None:
            self._random_phase(bsgs, bound, seed, patience)
        if bound is None or bsgs.order < bound:
            self._deterministic_phase(bsgs)
            if bound is not None and bsgs.order > bound:
                raise BoundViolated(f"order {bsgs.order} exceeds claimed bound {bound}")
        bsgs.complete = True
        self._bsgs = bsgs
        self._order = bsgs.order
        return bsgs

    def order(self, bound: int | None = None, seed: int = 0) -> int:
        if self._order is None:
            self.build_bsgs(bound=bound, seed=seed)
        return self._order

    def contains(self, g: Mat) -> bool:
        if g.ctx != self.ctx or g.shape != (self.n, self.n):
            return False
        bsgs = self.build_bsgs()
        h, j = self._sift(bsgs, self.be.from_mat(g))
        return j == len(bsgs.levels) and self.be.is_one(h)

    # -- random elements --

    def random_elements(self, count: int, seed: int = 0) -> Iterator[Mat]:
        """Product-replacement random elements (seeded)."""
        be = self.be
        rng = random.Random(seed)
        pool = list(self._egens) or [be.one]
        while len(pool) < 10:
            pool.append(pool[rng.randrange(len(pool))])
        acc = be.one
        for _ in range(60):
            i, j = rng.sample(range(len(pool)), 2)
            pool[i] = be.mul(pool[i], pool[j])
        for _ in range(count):
            i, j = rng.sample(range(len(pool)), 2)
            pool[i] = be.mul(pool[i], pool[j])
            acc = be.mul(acc, pool[i])
            yield be.to_mat(acc)


def bsgs_order(g: MatGroup, bound: int | None = None, seed: int = 0) -> int:
    return g.order(bound=bound, seed=seed)


# -- enumeration ------------------------------------------------------


@dataclass
class ElementSet:
    """Result of a BFS closure: backend elements keyed for hashing."""

    backend: object
    elements: dict

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[Mat]:
        for e in self.elements.values():
            yield self.backend.to_mat(e)

    def raw(self):
        return self.elements.values()


def generate_bfs(gens: Sequence[Mat], cap: int = 10 ** 6, ctx: FieldCtx | None = None,
                 n: int | None = None) -> ElementSet | None:
    """Closure of gens by breadth-first search, or None once more than
    ``cap`` elements have been seen."""
    if cap > BFS_CAP_MAX:
        raise ValueError(f"cap above {BFS_CAP_MAX}")
    grp = MatGroup(gens, ctx=ctx, n=n)
    be = grp.be
    one = be.one
    seen = {be.key(one): one}
    frontier = [one]
    egens = grp._egens
    while frontier:
        nxt = []
        for x in frontier:
            for s in egens:
                y = be.mul(x, s)
                k = be.key(y)
                if k not in seen:
                    seen[k] = y
                    nxt.append(y)
                    if len(seen) > cap:
                        return None
        frontier = nxt
    return ElementSet(be, seen)


def element_order(g: Mat, cap: int = 10 ** 6) -> int:
    be = _backend(g.ctx, g.n)
    x = be.from_mat(g)
    acc = x
    k = 1
    while not be.is_one(acc):
        acc = be.mul(acc, x)
        k += 1
        if k > cap:
            raise RuntimeError("element order above cap")
    return k


def _raw_order(be, x, cap: int = 10 ** 6) -> int:
    acc, k = x, 1
    while not be.is_one(acc):
        acc = be.mul(acc, x)
        k += 1
        if k > cap:
            raise RuntimeError("element order above cap")
    return k


@dataclass(frozen=True)
class OrderHistogram:
    counts: dict
    exact: bool
    sample_size: int


def element_order_histogram(g: MatGroup, sample: int | None = None, seed: int = 0,
                            cap: int = 10 ** 6) -> OrderHistogram:
    """Orders of elements: exact over a BFS enumeration when the group has
    at most ``cap`` elements and no sample size is forced, else sampled."""
    if sample is None:
        es = generate_bfs(g.gens, cap, ctx=g.ctx, n=g.n)
        if es is not None:
            counts = Counter(_raw_order(es.backend, e) for e in es.raw())
            return OrderHistogram(dict(sorted(counts.items())), True, es.size)
        sample = 2000
    counts = Counter(element_order(m) for m in g.random_elements(sample, seed=seed))
    return OrderHistogram(dict(sorted(counts.items())), False, sample)
