"""Monodromy data of the Dwork family and the MD_n(k) classifier.

A is the companion matrix of (X-1)^n, B the companion matrix of
prod_j (X - z^j) over the symmetric window of exponents around N/2, with z
a primitive N-th root of unity in the residue field.  The classifier
builds <A, B>, descends it to the field generated by its entries, and
decides which group of the candidate list it is, each time with a proven
upper bound for the order so that the Schreier-Sims lower bound pins the
order down exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import gf2
from .ff import (FieldCtx, FieldElem, cyclotomic_element, field_make, mult_order,
                 residue_degree, subfield_embedding)
from .grp import (MatGroup, element_order_histogram, o_order, sp_order, symmetric_order)
from .linalg import (Mat, Poly, charpoly, companion, int_det, int_matmul, is_transvection,
                     kernel_rows, rank)
from .qform import QuadForm, classify_type, invariant_alternating_forms, invariant_forms


@dataclass(frozen=True)
class DworkParams:
    n: int
    N: int
    p: int

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError("n must be even and >= 2")
        if self.N % 2 == 0 or self.N < self.n + 1:
            raise ValueError("N must be odd with N >= n + 1")
        if self.N % self.p == 0:
            raise ValueError("p must not divide N")

    @property
    def f(self) -> int:
        return residue_degree(self.N, self.p)

    @property
    def ctx(self) -> FieldCtx:
        """The residue field k_lambda."""
        return field_make(self.p, self.f)

    @property
    def split_ctx(self) -> FieldCtx:
        """Smallest field containing the N-th roots of unity."""
        return field_make(self.p, mult_order(self.p, self.N))


# -- the matrices -----------------------------------------------------


def a_coefficients(n: int) -> list[int]:
    """A_i = (-1)^i C(n, i), so (X-1)^n = X^n + A_1 X^{n-1} + ... + A_n."""
    return [(-1) ** i * math.comb(n, i) for i in range(n + 1)]


def dwork_A_int(n: int) -> list[list[int]]:
    A = a_coefficients(n)
    m = [[0] * n for _ in range(n)]
    for i in range(1, n):
        m[i][i - 1] = 1
    for i in range(n):
        m[i][n - 1] = -A[n - i]
    return m


def dwork_A(n: int, ctx: FieldCtx) -> Mat:
    if n < 2:
        raise ValueError("n must be >= 2")
    return Mat.from_ints(ctx, dwork_A_int(n))


def b_polynomial(n: int, N: int, ctx: FieldCtx) -> list[int]:
    """Coefficient codes (low to high) of prod (X - z^j) for
    (N-n+1)/2 <= j <= (N+n-1)/2."""
    if N == n + 1:
        return [1] * (n + 1)
    z = cyclotomic_element(N, ctx)
    poly = Poly(ctx, [1])
    for j in range((N - n + 1) // 2, (N + n - 1) // 2 + 1):
        poly = poly * Poly(ctx, [ctx.neg((z ** j).code), 1])
    return list(poly.coeffs)


def dwork_B(n: int, N: int, ctx: FieldCtx) -> Mat:
    if N != n + 1 and (ctx.q - 1) % N:
        raise ValueError(f"{ctx!r} lacks the {N}-th roots of unity and N != n+1")
    return companion(ctx, b_polynomial(n, N, ctx))


def conjugator_P(n: int) -> list[list[int]]:
    """p_ij = (-1)^{i+j} C(n-j, i-1) when i+j-1 <= n (1-based), else 0."""
    return [[(-1) ** (i + j) * math.comb(n - j, i - 1) if i + j - 1 <= n else 0
             for j in range(1, n + 1)] for i in range(1, n + 1)]


def jordan_block(n: int) -> list[list[int]]:
    return [[1 if j == i or j == i + 1 else 0 for j in range(n)] for i in range(n)]


def check_conjugator(n: int) -> tuple[bool, int]:
    """Whether A P = P J over Z, and det P."""
    P = conjugator_P(n)
    A = dwork_A_int(n)
    return int_matmul(A, P) == int_matmul(P, jordan_block(n)), int_det(P)


def expected_order_A(n: int) -> int:
    if n & (n - 1) == 0:
        return n
    return 2 ** (n.bit_length())


# -- descent to the coefficient field ---------------------------------


def coefficient_subfield(mats: Sequence[Mat]) -> tuple[FieldCtx, list[Mat]]:
    """Rewrite matrices over the smallest subfield containing all their
    entries."""
    big = mats[0].ctx
    entries = sorted(set(int(x) for m in mats for x in np.unique(m.a)))
    for s in sorted(d for d in range(1, big.r + 1) if big.r % d == 0):
        if all(big.pow(e, big.p ** s) == e for e in entries):
            break
    if s == big.r:
        return big, list(mats)
    small = field_make(big.p, s)
    emb = subfield_embedding(small, big)
    back = {b: a for a, b in enumerate(emb)}
    lut = np.zeros(big.q, dtype=np.int64)
    for b, a in back.items():
        lut[b] = a
    return small, [Mat(small, lut[m.a]) for m in mats]


def dwork_generators(params: DworkParams) -> tuple[FieldCtx, list[Mat]]:
    """A and B mod lambda, over the field their entries generate."""
    n, N, p = params.n, params.N, params.p
    if N == n + 1:
        ctx = field_make(p, 1)
        return ctx, [dwork_A(n, ctx), dwork_B(n, N, ctx)]
    big = params.split_ctx
    return coefficient_subfield([dwork_A(n, big), dwork_B(n, N, big)])


# -- the standard representations theta_{n+1}, theta_{n+2} -----------


def _theta_dim(k: int) -> int:
    return k - 1 if k % 2 else k - 2


def theta_standard(k: int, perm: Sequence[int], n: int | None = None) -> Mat:
    """Matrix of a permutation of k letters on W/L in the basis
    b_i = e_i + e_{i+1}, i = 1..n.

    ``perm`` lists the images of 0..k-1.  For k = n+2 the vector
    b_{n+1} is rewritten as b_1 + b_3 + ... + b_{n-1} (mod L); for
    k = n+1 the last letter of the ambient n+2 letters stays fixed.
    Columns are images of basis vectors, so theta(s t) = theta(s) theta(t)
    with (s t)(i) = s(t(i)).
    """
    perm = list(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("not a permutation")
    if len(perm) != k:
        raise ValueError(f"permutation of {len(perm)} letters, expected {k}")
    if n is None:
        n = _theta_dim(k)
    if n % 2 or k not in (n + 1, n + 2):
        raise ValueError("need n even and k in {n+1, n+2}")
    full = perm + list(range(k, n + 2))
    cols = []
    for i in range(n):
        w = [0] * (n + 2)
        w[full[i]] ^= 1
        w[full[i + 1]] ^= 1
        cols.append(_w_coords(w, n))
    return Mat(field_make(2, 1), np.array(cols, dtype=np.int64).T)


def _w_coords(w: Sequence[int], n: int) -> list[int]:
    """Coordinates in b_1..b_n of a vector of W modulo L."""
    c = list(itertools.accumulate(w, lambda a, b: a ^ b))[: n + 1]
    last = c[n]
    out = c[:n]
    if last:
        for i in range(0, n - 1, 2):
            out[i] ^= 1
    return out


def s_embedding_form(k: int, n: int) -> QuadForm:
    """sum_{i<=j} x_i x_j transported to b-coordinates on W/L (k = n+2,
    n = 2 mod 4) or on W_1 (k = n+1, n = 0 mod 4)."""
    if k == n + 2 and n % 4 != 2:
        raise ValueError("the construction on W/L needs n = 2 mod 4")
    if k == n + 1 and n % 4 != 0:
        raise ValueError("the construction on W_1 needs n = 0 mod 4")
    if k not in (n + 1, n + 2):
        raise ValueError("k must be n+1 or n+2")
    F2 = field_make(2, 1)
    m = n + 2

    def F(x):
        # for a 0/1 vector of weight w the sum is w + C(w, 2) = w(w+1)/2
        w = sum(x)
        return (w * (w + 1) // 2) % 2

    basis = []
    for i in range(n):
        v = [0] * m
        v[i] = v[i + 1] = 1
        basis.append(v)
    c = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        c[a, a] = F(basis[a])
        for b in range(a + 1, n):
            s = [x ^ y for x, y in zip(basis[a], basis[b])]
            c[a, b] = F(s) ^ F(basis[a]) ^ F(basis[b])
    return QuadForm(F2, c)


# -- conjugacy classes of S_k ------------------------------------------


def partitions(k: int, maxpart: int | None = None):
    if maxpart is None:
        maxpart = k
    if k == 0:
        yield ()
        return
    for first in range(min(k, maxpart), 0, -1):
        for rest in partitions(k - first, first):
            yield (first,) + rest


def perm_of_type(shape: Sequence[int]) -> tuple[int, ...]:
    perm = []
    start = 0
    for ln in shape:
        perm.extend(list(range(start + 1, start + ln)) + [start])
        start += ln
    return tuple(perm)


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            ln, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            out.append(ln)
    return tuple(sorted(out, reverse=True))


def compose(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """(s t)(i) = s(t(i))."""
    return tuple(s[t[i]] for i in range(len(t)))


def perm_inverse(s: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(s)
    for i, x in enumerate(s):
        out[x] = i
    return tuple(out)


def class_elements(shape: Sequence[int], k: int):
    """All permutations of k letters with the given cycle type (only for
    small classes)."""
    rep = perm_of_type(shape)
    seen = set()
    for pi in itertools.permutations(range(k)):
        c = compose(compose(pi, rep), perm_inverse(pi))
        if c not in seen:
            seen.add(c)
            yield c


def _transposition_like(k: int, n: int):
    """Elements of S_k whose theta image is a transvection."""
    out = []
    for shape in partitions(k):
        if is_transvection(theta_standard(k, perm_of_type(shape), n)):
            if shape[:1] == (2,) and all(x == 1 for x in shape[1:]):
                out.extend(tuple(_swap(k, i, j)) for i in range(k) for j in range(i + 1, k))
            else:
                out.extend(_small_class(shape, k))
    return out


def _swap(k, i, j):
    s = list(range(k))
    s[i], s[j] = j, i
    return s


def _small_class(shape, k):
    size = math.factorial(k)
    for c in set(shape):
        m = shape.count(c)
        size //= c ** m * math.factorial(m)
    if size > 5000:
        raise ValueError(f"class {shape} of S_{k} too large to enumerate")
    return list(class_elements(shape, k))


@dataclass(frozen=True)
class ThetaConjugation:
    k: int
    sigma_A: tuple[int, ...]
    sigma_B: tuple[int, ...]
    T: Mat


def theta_conjugator(A: Mat, B: Mat, k: int) -> ThetaConjugation | None:
    """Search T in GL_n(F_2) and permutations s_A, s_B with
    T A = theta(s_A) T and T B = theta(s_B) T.

    s_B runs over class representatives with matching characteristic
    polynomial (conjugating T absorbs the choice inside a class); since
    B A^{-1} is a transvection, s_A = s_t^{-1} s_B with theta(s_t) a
    transvection."""
    n = A.n
    if A.ctx.q != 2 or k not in (n + 1, n + 2):
        return None
    cpB = charpoly(B)
    t = B @ A.inv()
    if not is_transvection(t):
        return None
    reps = [perm_of_type(s) for s in partitions(k)]
    cand_B = [r for r in reps if charpoly(theta_standard(k, r, n)) == cpB]
    if not cand_B:
        return None
    cpA = charpoly(A)
    tl = _transposition_like(k, n)
    for sB in cand_B:
        thB = theta_standard(k, sB, n)
        for st in tl:
            sA = compose(perm_inverse(st), sB)
            thA = theta_standard(k, sA, n)
            if charpoly(thA) != cpA:
                continue
            T = _intertwiner(A, thA, B, thB)
            if T is not None:
                return ThetaConjugation(k, sA, sB, T)
    return None


def _intertwiner(A: Mat, X: Mat, B: Mat, Y: Mat) -> Mat | None:
    """Invertible T with T A = X T and T B = Y T, if one exists in a small
    solution space."""
    n = A.n
    rows = []
    for M, Z in ((A, X), (B, Y)):
        m, z = M.a, Z.a
        # (T M - Z T)_{ij} = sum_l T_il M_lj - sum_l Z_il T_lj
        for i in range(n):
            for j in range(n):
                r = 0
                for l in range(n):
                    if m[l, j]:
                        r ^= 1 << (i * n + l)
                    if z[i, l]:
                        r ^= 1 << (l * n + j)
                rows.append(r)
    basis = gf2.nullspace(rows, n * n)
    if not basis or len(basis) > 12:
        return None
    for mask in range(1, 1 << len(basis)):
        v = 0
        for b in range(len(basis)):
            if mask >> b & 1:
                v ^= basis[b]
        T = np.array([[(v >> (i * n + j)) & 1 for j in range(n)] for i in range(n)])
        if gf2.rank(gf2.pack(T)) == n:
            return Mat(field_make(2, 1), T)
    return None


# -- classification ---------------------------------------------------


@dataclass
class MDClass:
    n: int
    N: int
    p: int
    verdict: str
    order: int
    inv_form_dim: int
    form_type: str
    coefficient_subfield_degree: int
    field_q: int
    evidence: dict = field(default_factory=dict)

    @property
    def resolved(self) -> bool:
        return self.verdict != "unresolved"

    def as_dict(self) -> dict:
        return {
            "n": self.n, "N": self.N, "p": self.p, "verdict": self.verdict,
            "order": str(self.order), "inv_form_dim": self.inv_form_dim,
            "form_type": self.form_type,
            "coefficient_subfield_degree": self.coefficient_subfield_degree,
            "field_q": self.field_q,
        }


def _fname(q: int) -> str:
    return f"F{q}"


def dihedral_relations(A: Mat, B: Mat, N: int) -> dict:
    from .grp import element_order

    Ai = A.inv()
    return {
        "conj": A @ B @ Ai == B.inv(),
        "ord_A": element_order(A),
        "ord_B": element_order(B),
    }


def classify_md(params: DworkParams, seed: int = 0) -> MDClass:
    n, N, p = params.n, params.N, params.p
    ctx, (A, B) = dwork_generators(params)
    G = MatGroup([A, B])
    base = dict(n=n, N=N, p=p, coefficient_subfield_degree=ctx.r, field_q=ctx.q)

    if n == 2 and p == 2:
        # the relations make <A, B> a quotient of D_{2N}, so 2N bounds the order
        rel = dihedral_relations(A, B, N)
        order = G.order(bound=2 * N, seed=seed)
        ok = rel["conj"] and rel["ord_A"] == 2 and rel["ord_B"] == N and order == 2 * N
        return MDClass(verdict=f"D{2 * N}" if ok else "unresolved", order=order,
                       inv_form_dim=len(invariant_forms([A, B])),
                       form_type="none", evidence=rel, **base)

    evidence: dict = {}
    forms = invariant_forms([A, B]) if p == 2 else []
    form_type = "none"
    if len(forms) == 1:
        form_type = classify_type(forms[0]).kind
    elif len(forms) > 1:
        form_type = "multiple"

    alt = [G0 for G0 in invariant_alternating_forms([A, B]) if G0.rank() == n]
    bounds = []  # (order bound, label)
    conj = None
    if ctx.q == 2:
        for k in (n + 1, n + 2):
            conj = theta_conjugator(A, B, k)
            if conj is not None:
                evidence["theta_k"] = k
                evidence["sigma_A"] = conj.sigma_A
                evidence["sigma_B"] = conj.sigma_B
                bounds.append((symmetric_order(k), f"S{k}"))
                break
    if form_type in ("plus", "minus"):
        sign = 1 if form_type == "plus" else -1
        sym = "+" if sign == 1 else "-"
        bounds.append((o_order(n, ctx.q, sign), f"O{sym}{n}({_fname(ctx.q)})"))
    if alt:
        bounds.append((sp_order(n, ctx.q), f"Sp{n}({_fname(ctx.q)})"))
    # bounds are listed S, O, Sp: on equal orders the first label wins
    bound = min(b for b, _ in bounds) if bounds else None
    order = G.order(bound=bound, seed=seed)
    evidence["bounds"] = [(str(b), lab) for b, lab in bounds]

    verdict = "unresolved"
    for b, lab in bounds:
        if order == b:
            verdict = lab
            break
    if verdict == "unresolved" and ctx.q == 2 and conj is None:
        # no conjugation found: fall back to order plus histogram fingerprint
        for k in (n + 1, n + 2):
            if order == symmetric_order(k):
                if _histogram_matches(G, k, n, seed):
                    verdict = f"S{k}"
                    evidence["histogram"] = True
    if verdict.startswith("Sp") and forms:
        verdict = "unresolved"  # an invariant quadratic form rules out Sp
    return MDClass(verdict=verdict, order=order, inv_form_dim=len(forms), form_type=form_type,
                   evidence=evidence, **base)


def _histogram_matches(G: MatGroup, k: int, n: int, seed: int) -> bool:
    H = MatGroup([theta_standard(k, perm_of_type((2,) + (1,) * (k - 2)), n),
                  theta_standard(k, perm_of_type((k,)), n)])
    h1 = element_order_histogram(G, seed=seed)
    h2 = element_order_histogram(H, seed=seed)
    if h1.exact and h2.exact:
        return h1.counts == h2.counts
    return set(h1.counts) <= set(h2.counts)


def expected_md_verdict(n: int) -> str:
    """Verdict predicted for N = n+1 over F_2."""
    if n & (n - 1) == 0:
        return f"S{n + 1}"
    if (n + 2) & (n + 1) == 0:
        return f"S{n + 2}"
    return f"O+{n}(F2)" if n % 8 in (0, 6) else f"O-{n}(F2)"
