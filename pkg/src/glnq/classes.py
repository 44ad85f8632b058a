"""Conjugacy classes of GL(n, q): irreducible polynomials, class labels
(maps from irreducibles to partitions), canonical representatives, Jordan types
of arbitrary elements, class sizes, and the type map.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _batch
from .config import check_budget
from .errors import FormatError, OutOfRange, Singular
from .gfq import (
    FieldSpec,
    FqMatrix,
    block_diagonal,
    field_of_order,
    gl_generators,
    gl_order,
    enumerate_gl,
    mat_mul,
    mat_rank,
)
from .qcombinat import conjugate, format_partition, parse_partition, partition, partitions

# ---------------------------------------------------------------------------
# polynomials over F_q: ascending coefficient tuples, trimmed


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_mul(F: FieldSpec, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            mx = mul[x]
            for j, y in enumerate(b):
                out[i + j] = add[out[i + j]][mx[y]]
    return _trim(out)


def poly_divmod(F: FieldSpec, a, b):
    """Division by a monic b."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), _trim(a)
    quo = [0] * (len(a) - db)
    sub, mul = F.sub, F.mul
    for s in range(len(a) - 1 - db, -1, -1):
        c = a[s + db]
        if c:
            quo[s] = c
            mc = mul[c]
            for i, y in enumerate(b):
                a[s + i] = sub[a[s + i]][mc[y]]
    return _trim(quo), _trim(a[:db])


@dataclass(frozen=True)
class IrredPoly:
    """Monic irreducible polynomial over F_q, distinct from X.  Coefficients ascending."""

    q: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def field(self) -> FieldSpec:
        return field_of_order(self.q)

    def code(self) -> int:
        return sum(c * self.q**i for i, c in enumerate(self.coeffs))

    def is_x_minus_one(self) -> bool:
        F = self.field
        return self.coeffs == (F.neg[1], 1)

    def sort_key(self):
        # X - 1 first, then by degree and integer code
        return (not self.is_x_minus_one(), self.degree, self.code())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def digits(self) -> str:
        """Coefficient digits from the leading term down, e.g. X^2+X+1 over F_2 -> '111'."""
        from .gfq import DIGITS

        return "".join(DIGITS[c] for c in reversed(self.coeffs))

    def __str__(self):
        terms = []
        for d in range(self.degree, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            mon = "" if d == 0 else ("X" if d == 1 else f"X^{d}")
            if d == 0:
                terms.append(str(c))
            else:
                terms.append(mon if c == 1 else f"{c}{mon}")
        return "+".join(terms)


def _monic_polys(q: int, d: int):
    for code in range(q**d):
        yield tuple((code // q**i) % q for i in range(d)) + (1,)


@lru_cache(maxsize=None)
def _irreducibles_of_degree(q: int, d: int) -> tuple[IrredPoly, ...]:
    """All monic irreducibles of degree d over F_q, including X when d = 1; sorted by code."""
    F = field_of_order(q)
    check_budget(q**d, None, f"monic polynomials of degree {d} over F_{q}")
    reducible = set()
    for a in range(1, d // 2 + 1):
        for f in _irreducibles_of_degree(q, a):
            for g in _monic_polys(q, d - a):
                reducible.add(poly_mul(F, f.coeffs, g))
    return tuple(IrredPoly(q, f) for f in _monic_polys(q, d) if f not in reducible)


def irreducibles(q: int, max_degree: int) -> list[IrredPoly]:
    """Monic irreducibles other than X with degree at most max_degree, in the canonical order."""
    if max_degree < 1:
        raise OutOfRange("max_degree must be positive")
    out = []
    for d in range(1, max_degree + 1):
        out.extend(f for f in _irreducibles_of_degree(q, d) if f.coeffs != (0, 1))
    return sorted(out, key=IrredPoly.sort_key)


def x_minus_one(q: int) -> IrredPoly:
    return IrredPoly(q, (field_of_order(q).neg[1], 1))


def factor(F: FieldSpec, poly) -> list[tuple[IrredPoly, int]]:
    """Factor a monic polynomial with nonzero constant term by trial division."""
    rem = _trim(poly)
    out = []
    d = 1
    while 2 * d <= len(rem) - 1:
        for f in _irreducibles_of_degree(F.q, d):
            m = 0
            while True:
                quo, r = poly_divmod(F, rem, f.coeffs)
                if r:
                    break
                rem, m = quo, m + 1
            if m:
                out.append((f, m))
        d += 1
    if len(rem) > 1:
        out.append((IrredPoly(F.q, rem), 1))
    merged = Counter()
    for f, m in out:
        merged[f] += m
    return sorted(merged.items(), key=lambda fm: fm[0].sort_key())


# ---------------------------------------------------------------------------
# class labels


@dataclass(frozen=True)
class LambdaMap:
    """Finite map from irreducibles to nonempty partitions, stored as sorted pairs."""

    entries: tuple[tuple[IrredPoly, tuple[int, ...]], ...]

    @classmethod
    def from_dict(cls, d: dict) -> "LambdaMap":
        items = [(f, partition(lam)) for f, lam in d.items() if lam]
        for f, _ in items:
            if f.coeffs == (0, 1):
                raise OutOfRange("X is not allowed in a class label")
        return cls(tuple(sorted(items, key=lambda t: t[0].sort_key())))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __getitem__(self, f: IrredPoly) -> tuple:
        for g, lam in self.entries:
            if g == f:
                return lam
        return ()

    @property
    def q(self) -> int:
        return self.entries[0][0].q if self.entries else 0

    def norm(self) -> int:
        return sum(sum(lam) * f.degree for f, lam in self.entries)

    def unipotent_part(self) -> tuple:
        for f, lam in self.entries:
            if f.is_x_minus_one():
                return lam
        return ()

    def is_identity(self) -> bool:
        return len(self.entries) == 1 and self.entries[0][0].is_x_minus_one() and set(self.entries[0][1]) == {1}

    def __str__(self):
        return format_lambda(self)


def format_lambda(lm: LambdaMap) -> str:
    return ";".join(f"{f.digits()}:{format_partition(lam)}" for f, lam in lm.entries)


def parse_lambda(text: str, q: int) -> LambdaMap:
    from .gfq import DIGITS

    d = {}
    for item in text.strip().split(";"):
        if not item:
            continue
        try:
            poly, lam = item.split(":")
            coeffs = tuple(DIGITS.index(ch) for ch in reversed(poly.strip().lower()))
        except ValueError:
            raise FormatError(f"bad class label entry {item!r}") from None
        f = IrredPoly(q, coeffs)
        if coeffs[-1] != 1 or f not in _irreducibles_of_degree(q, f.degree):
            raise FormatError(f"{poly} is not a monic irreducible over F_{q}")
        d[f] = parse_partition(lam)
    return LambdaMap.from_dict(d)


def lambda_sort_key(lm: LambdaMap, polys: Sequence[IrredPoly]):
    """Order on Λ_n: walk the polynomials in order; a larger partition size first,
    then partitions lexicographically.  The identity class comes first."""
    d = lm.as_dict()
    return tuple((-sum(d.get(f, ())), d.get(f, ())) for f in polys)


@lru_cache(maxsize=None)
def enumerate_lambda(n: int, q: int) -> tuple[LambdaMap, ...]:
    polys = irreducibles(q, n)

    def rec(i, remaining):
        if remaining == 0:
            yield {}
            return
        if i == len(polys):
            return
        f = polys[i]
        for s in range(remaining // f.degree, -1, -1):
            for lam in partitions(s) if s else [()]:
                for rest in rec(i + 1, remaining - s * f.degree):
                    out = dict(rest)
                    if lam:
                        out[f] = lam
                    yield out

    maps = [LambdaMap.from_dict(d) for d in rec(0, n)]
    check_budget(len(maps), None, f"class labels of GL({n},{q})")
    return tuple(sorted(maps, key=lambda lm: lambda_sort_key(lm, polys)))


# ---------------------------------------------------------------------------
# representatives and Jordan types


def companion(F: FieldSpec, f: IrredPoly) -> FqMatrix:
    d = f.degree
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = F.neg[f.coeffs[i]]
    return FqMatrix.from_rows(F, rows)


def companion_chain(F: FieldSpec, f: IrredPoly, k: int) -> FqMatrix:
    """C(f, k): k diagonal copies of C(f) with identity blocks on the block superdiagonal."""
    d = f.degree
    C = companion(F, f)
    n = d * k
    rows = [[0] * n for _ in range(n)]
    for b in range(k):
        for i in range(d):
            for j in range(d):
                rows[b * d + i][b * d + j] = C[i, j]
            if b + 1 < k:
                rows[b * d + i][(b + 1) * d + i] = 1
    return FqMatrix.from_rows(F, rows)


def class_representative(lm: LambdaMap) -> FqMatrix:
    F = field_of_order(lm.q)
    blocks = [companion_chain(F, f, k) for f, lam in lm.entries for k in lam]
    return block_diagonal(F, blocks)


def _hessenberg_charpoly(m: FqMatrix):
    """Characteristic polynomial via reduction to upper Hessenberg form."""
    F = m.field
    n = m.rows
    add, sub, mul, inv = F.add, F.sub, F.mul, F.inv
    H = m.to_rows()
    for c in range(n - 2):
        piv = next((i for i in range(c + 1, n) if H[i][c]), None)
        if piv is None:
            continue
        if piv != c + 1:
            H[piv], H[c + 1] = H[c + 1], H[piv]
            for row in H:
                row[piv], row[c + 1] = row[c + 1], row[piv]
        t_inv = inv[H[c + 1][c]]
        for i in range(c + 2, n):
            u = mul[H[i][c]][t_inv]
            if u:
                mu = mul[u]
                H[i] = [sub[x][mu[y]] for x, y in zip(H[i], H[c + 1])]
                for row in H:
                    row[c + 1] = add[row[c + 1]][mu[row[i]]]
    polys = [(1,)]
    for k in range(n):
        pk = poly_mul(F, (F.neg[H[k][k]], 1), polys[k])
        t = 1
        for i in range(1, k + 1):
            t = mul[t][H[k - i + 1][k - i]]
            c = mul[t][H[k - i][k]]
            if c:
                term = poly_mul(F, (c,), polys[k - i])
                pk = _poly_sub(F, pk, term)
        polys.append(pk)
    return polys[n]


def _poly_sub(F, a, b):
    n = max(len(a), len(b))
    return _trim([F.sub[a[i] if i < len(a) else 0][b[i] if i < len(b) else 0] for i in range(n)])


def charpoly(m: FqMatrix):
    return _hessenberg_charpoly(m)


def _poly_at_matrix(F: FieldSpec, coeffs, m: FqMatrix) -> FqMatrix:
    n = m.rows
    acc = FqMatrix.zeros(F, n, n)
    ident = FqMatrix.identity(F, n)
    for c in reversed(coeffs):
        acc = mat_mul(acc, m) + ident.scale(c)
    return acc


def jordan_type(g: FqMatrix) -> LambdaMap:
    F = g.field
    n = g.rows
    chi = charpoly(g)
    if chi[0] == 0:
        raise Singular("matrix is not invertible")
    out = {}
    for f, mult in factor(F, chi):
        d = f.degree
        if mult == 1:
            out[f] = (1,)
            continue
        A = _poly_at_matrix(F, f.coeffs, g)
        ranks = [n]
        P = A
        while n - ranks[-1] < mult * d:
            ranks.append(mat_rank(P))
            P = mat_mul(P, A)
        dual = tuple((ranks[j - 1] - ranks[j]) // d for j in range(1, len(ranks)))
        out[f] = conjugate(dual)
    return LambdaMap.from_dict(out)


def conjugate_lambda(lm: LambdaMap) -> LambdaMap:
    return LambdaMap(tuple((f, conjugate(lam)) for f, lam in lm.entries))


def type_of_lambda(lm: LambdaMap) -> tuple:
    """(κ, λ): λ is the partition at X - 1; κ has |λ̲(f)| parts equal to deg f for the other f."""
    kappa = []
    lam = ()
    for f, part in lm.entries:
        if f.is_x_minus_one():
            lam = part
        else:
            kappa.extend([f.degree] * sum(part))
    return (partition(kappa), lam)


# ---------------------------------------------------------------------------
# class sizes


def centralizer_order(lm: LambdaMap) -> int:
    """|C_GL(g)| for g in the class: product over f of Q^{Σ λ'_i²} ∏_i ∏_{k≤m_i} (1 - Q^{-k}), Q = q^deg f."""
    out = 1
    for f, lam in lm.entries:
        Q = f.q**f.degree
        dual = conjugate(lam)
        expo = sum(x * x for x in dual)
        for _, m in Counter(lam).items():
            expo -= m * (m + 1) // 2
            for k in range(1, m + 1):
                out *= Q**k - 1
        out *= Q**expo
    return out


def class_sizes_closed_form(n: int, q: int) -> dict:
    G = gl_order(n, q)
    return {lm: G // centralizer_order(lm) for lm in enumerate_lambda(n, q)}


def class_sizes(n: int, q: int, mode: str = "auto", budget: int | None = None) -> dict:
    """Map from class label to class size.

    ``mode="enumerate"`` tallies Jordan types over the whole group; ``"closed"``
    uses centralizer orders; ``"auto"`` enumerates when the group fits the budget.
    """
    if mode == "closed":
        return class_sizes_closed_form(n, q)
    if mode == "auto":
        try:
            check_budget(gl_order(n, q), budget)
        except Exception:
            return class_sizes_closed_form(n, q)
    lookup = ClassLookup.get(n, q)
    counts = Counter()
    if lookup.table is not None:
        idx = lookup.table[lookup.table >= 0]
        tally = np.bincount(idx, minlength=len(lookup.labels))
        return {lm: int(c) for lm, c in zip(lookup.labels, tally)}
    for g in enumerate_gl(n, q, budget):
        counts[jordan_type(g)] += 1
    return {lm: counts[lm] for lm in enumerate_lambda(n, q)}


# ---------------------------------------------------------------------------
# fast class lookup

TABLE_LIMIT = 1 << 20
LARGE_TABLE_LIMIT = 1 << 26


class ClassLookup:
    """Maps group elements to indices into enumerate_lambda(n, q).

    When q^(n²) is at most TABLE_LIMIT a full table over matrix codes is built
    by conjugation orbits of the representatives.  Up to LARGE_TABLE_LIMIT the
    table is built only on request (``ensure_table``); otherwise Jordan types are
    computed one element at a time.
    """

    _cache: dict = {}

    @classmethod
    def get(cls, n: int, q: int) -> "ClassLookup":
        if (n, q) not in cls._cache:
            cls._cache[(n, q)] = cls(n, q)
        return cls._cache[(n, q)]

    def __init__(self, n: int, q: int):
        self.n, self.q = n, q
        self.F = field_of_order(q)
        self.labels = enumerate_lambda(n, q)
        self.index = {lm: i for i, lm in enumerate(self.labels)}
        self.reps = [class_representative(lm) for lm in self.labels]
        self.table = self._build_table() if q ** (n * n) <= TABLE_LIMIT else None

    def ensure_table(self) -> bool:
        """Build the code table if it fits under LARGE_TABLE_LIMIT; report whether it exists."""
        if self.table is None and self.q ** (self.n * self.n) <= LARGE_TABLE_LIMIT:
            self.table = self._build_table()
        return self.table is not None

    def _conjugators(self):
        """For each generator a, a function mapping a code array to the codes of a·X·a⁻¹."""
        n, q, F = self.n, self.q, self.F
        gens = gl_generators(n, q)
        out = []
        if F.e == 1:
            pw = _batch.powers(q, n * n)
            for a in gens:
                A = np.array(a.to_rows(), dtype=np.float64)
                B = np.array(a.inverse().to_rows(), dtype=np.float64)
                L = np.einsum("ik,lj->klij", A, B).reshape(n * n, n * n)

                def conj(codes, L=L):
                    digits = (codes[:, None] // pw[None, :]) % q
                    img = (digits.astype(np.float64) @ L).astype(np.int64) % q
                    return img @ pw

                out.append(conj)
            return out
        T = _batch.Tables(F)
        for a in gens:
            A = _batch.stack([a])
            B = _batch.stack([a.inverse()])

            def conj(codes, A=A, B=B):
                M = _batch.decode(codes, n, q)
                return _batch.encode(_batch.matmul(_batch.matmul(A, M, T), B, T), q)

            out.append(conj)
        return out

    def _build_table(self) -> np.ndarray:
        q, n = self.q, self.n
        conjs = self._conjugators()
        dtype = np.int8 if len(self.labels) < 128 else np.int32
        table = np.full(q ** (n * n), -1, dtype=dtype)
        for idx, rep in enumerate(self.reps):
            code = rep.code()
            table[code] = idx
            frontier = np.array([code], dtype=np.int64)
            while len(frontier):
                found = []
                for conj in conjs:
                    for s in range(0, len(frontier), 1 << 18):
                        img = conj(frontier[s : s + (1 << 18)])
                        found.append(img[table[img] < 0])
                cand = np.unique(np.concatenate(found))
                table[cand] = idx
                frontier = cand
        return table

    def of(self, g: FqMatrix) -> int:
        if self.table is not None:
            return int(self.table[g.code()])
        return self.index[jordan_type(g)]

    def of_stack(self, A: np.ndarray) -> np.ndarray:
        """Class indices for a stack of invertible matrices."""
        if self.table is not None:
            out = self.table[_batch.encode(A, self.q)].astype(np.int64)
            if (out < 0).any():
                raise Singular("stack contains a singular matrix")
            return out
        return np.array([self.of(m) for m in _batch.unstack(self.F, A)], dtype=np.int64)

    def inverse_map(self) -> list[int]:
        """Index of the class of g^-1 for each class."""
        return [self.of(r.inverse()) for r in self.reps]

    def power_map(self, k: int) -> list[int]:
        from .gfq import mat_pow

        return [self.of(mat_pow(r, k)) for r in self.reps]

    @property
    def identity_index(self) -> int:
        return next(i for i, lm in enumerate(self.labels) if lm.is_identity())


def conjugacy_classes_bruteforce(n: int, q: int, budget: int | None = None) -> list[set]:
    """Partition GL(n, q) into conjugacy classes by orbit search under generators (oracle)."""
    elements = list(enumerate_gl(n, q, budget))
    gens = gl_generators(n, q)
    pairs = [(g, g.inverse()) for g in gens]
    seen = set()
    classes = []
    for x in elements:
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g, gi in pairs:
                    z = mat_mul(mat_mul(g, y), gi)
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        seen |= orbit
        classes.append(orbit)
    return classes
