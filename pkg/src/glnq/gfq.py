"""Exact arithmetic over F_q and matrix / subspace linear algebra.

Field elements are integers in ``range(q)``.  For q = p^e with e > 1 an element
encodes the polynomial whose coefficients are its base-p digits (constant term
least significant), reduced modulo the field's defining polynomial.

Vectors are tuples of field elements.  A vector's *code* is
``sum(v[j] * q**j)``, i.e. the first coordinate is the least significant digit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .config import MAX_N, MAX_Q, check_budget
from .errors import FormatError, MixedDimensions, NotPrime, OutOfRange, Singular

DIGITS = "0123456789abcdef"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^e; raises NotPrime if q is not a prime power."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1 or not is_prime(p):
                raise NotPrime(f"{q} is not a prime power")
            return p, e
    raise NotPrime(f"{q} is not a prime power")


# ---------------------------------------------------------------------------
# polynomials over the prime field, used only to pick the defining polynomial

def _fp_polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = a[:]
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_is_irreducible(f: Sequence[int], p: int) -> bool:
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            if not _fp_polymod(list(f), g, p):
                return False
    return True


def _poly_code(coeffs: Sequence[int], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e over F_p with the smallest integer code."""
    for code in range(p**e):
        tail = [(code // p**i) % p for i in range(e)]
        f = tail + [1]
        if e == 1 or _fp_is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("irreducible polynomials exist in every degree")


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]
    add: tuple = field(default=(), compare=False, repr=False)
    sub: tuple = field(default=(), compare=False, repr=False)
    mul: tuple = field(default=(), compare=False, repr=False)
    neg: tuple = field(default=(), compare=False, repr=False)
    inv: tuple = field(default=(), compare=False, repr=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def __str__(self):
        return f"F_{self.q}"


def _element_tables(p, e, modulus):
    q = p**e

    def digits(a):
        return [(a // p**i) % p for i in range(e)]

    def undigits(ds):
        return sum(d * p**i for i, d in enumerate(ds))

    add = [[undigits([(x + y) % p for x, y in zip(digits(a), digits(b))]) for b in range(q)] for a in range(q)]
    neg = [undigits([(-x) % p for x in digits(a)]) for a in range(q)]
    sub = [[add[a][neg[b]] for b in range(q)] for a in range(q)]
    if e == 1:
        mul = [[a * b % p for b in range(q)] for a in range(q)]
    else:
        # log/antilog tables from a generator of the multiplicative group
        def pmul(a, b):
            da, db = digits(a), digits(b)
            prod = [0] * (2 * e - 1)
            for i, x in enumerate(da):
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
            r = _fp_polymod(prod, list(modulus), p)
            return undigits(r + [0] * (e - len(r)))

        for g in range(2, q):
            antilog, x = [], 1
            for _ in range(q - 1):
                antilog.append(x)
                x = pmul(x, g)
            if len(set(antilog)) == q - 1:
                break
        log = {a: i for i, a in enumerate(antilog)}
        mul = [
            [0 if a == 0 or b == 0 else antilog[(log[a] + log[b]) % (q - 1)] for b in range(q)]
            for a in range(q)
        ]
    inv = [0] * q
    for a in range(1, q):
        inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
    freeze = lambda t: tuple(tuple(r) for r in t)
    return freeze(add), freeze(sub), freeze(mul), tuple(neg), tuple(inv)


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> FieldSpec:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise OutOfRange("exponent must be positive")
    if p**e > MAX_Q:
        raise OutOfRange(f"q = {p**e} exceeds the configured bound {MAX_Q}")
    modulus = least_irreducible(p, e) if e > 1 else (0, 1)
    add, sub, mul, neg, inv = _element_tables(p, e, modulus)
    return FieldSpec(p, e, modulus, add, sub, mul, neg, inv)


def field_of_order(q: int) -> FieldSpec:
    p, e = prime_power(q)
    return field_make(p, e)


# ---------------------------------------------------------------------------
# row operations (lists of lists); shared by matrices and subspaces


def _rref(rows: list[list[int]], F: FieldSpec) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form, zero rows dropped.  Works on a copy."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    mul, sub, inv = F.mul, F.sub, F.inv
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        s = inv[pr[c]]
        if s != 1:
            ms = mul[s]
            pr = rows[r] = [ms[x] for x in pr]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                mf = mul[rows[i][c]]
                ri = rows[i]
                rows[i] = [sub[x][mf[y]] for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _f2_rank(bits: list[int]) -> int:
    """Rank of F_2 rows packed as integers."""
    rows = [b for b in bits if b]
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def _rank_rows(rows: list[list[int]], F: FieldSpec) -> int:
    if F.q == 2:
        return _f2_rank([sum(b << j for j, b in enumerate(r)) for r in rows])
    return len(_rref(rows, F)[0])


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class FqMatrix:
    field: FieldSpec
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise MixedDimensions("entry count does not match shape")

    @classmethod
    def from_rows(cls, F: FieldSpec, rows: Sequence[Sequence[int]]) -> "FqMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        q = F.q
        flat = tuple(int(x) % q if F.e == 1 else int(x) for x in itertools.chain.from_iterable(rows))
        return cls(F, len(rows), ncols, flat)

    @classmethod
    def identity(cls, F: FieldSpec, n: int) -> "FqMatrix":
        return cls(F, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, F: FieldSpec, rows: int, cols: int) -> "FqMatrix":
        return cls(F, rows, cols, (0,) * (rows * cols))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "FqMatrix":
        e, r, c = self.entries, self.rows, self.cols
        return FqMatrix(self.field, c, r, tuple(e[i * c + j] for j in range(c) for i in range(r)))

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        _same_shape(self, other)
        add = self.field.add
        return FqMatrix(self.field, self.rows, self.cols, tuple(add[a][b] for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        _same_shape(self, other)
        sub = self.field.sub
        return FqMatrix(self.field, self.rows, self.cols, tuple(sub[a][b] for a, b in zip(self.entries, other.entries)))

    def scale(self, c: int) -> "FqMatrix":
        mc = self.field.mul[c]
        return FqMatrix(self.field, self.rows, self.cols, tuple(mc[a] for a in self.entries))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        F = self.field
        if F.e == 1:
            p = F.p
            return tuple(sum(a * b for a, b in zip(self.row(i), v)) % p for i in range(self.rows))
        out = []
        for i in range(self.rows):
            acc = 0
            for a, b in zip(self.row(i), v):
                acc = F.add[acc][F.mul[a][b]]
            out.append(acc)
        return tuple(out)

    def inverse(self) -> "FqMatrix":
        return mat_inverse(self)

    def rank(self) -> int:
        return mat_rank(self)

    def is_identity(self) -> bool:
        n = self.rows
        return self.rows == self.cols and all(
            x == (1 if i % (n + 1) == 0 else 0) for i, x in enumerate(self.entries)
        )

    def code(self) -> int:
        """Integer code: entry (i, j) is the base-q digit of weight q**(i*cols + j)."""
        q = self.field.q
        c = 0
        for x in reversed(self.entries):
            c = c * q + x
        return c

    def digits(self) -> str:
        return "".join(DIGITS[x] for x in self.entries)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


def _same_shape(a: FqMatrix, b: FqMatrix):
    if a.field != b.field or a.rows != b.rows or a.cols != b.cols:
        raise MixedDimensions("matrices differ in field or shape")


def mat_mul(a: FqMatrix, b: FqMatrix) -> FqMatrix:
    if a.field != b.field or a.cols != b.rows:
        raise MixedDimensions("incompatible shapes for multiplication")
    F = a.field
    n, m, k = a.rows, a.cols, b.cols
    A, B = a.entries, b.entries
    bcols = [B[j::k] for j in range(k)]
    if F.e == 1:
        p = F.p
        out = tuple(
            sum(x * y for x, y in zip(A[i * m : (i + 1) * m], bcols[j])) % p for i in range(n) for j in range(k)
        )
    else:
        add, mul = F.add, F.mul
        out = []
        for i in range(n):
            arow = A[i * m : (i + 1) * m]
            for j in range(k):
                acc = 0
                for x, y in zip(arow, bcols[j]):
                    acc = add[acc][mul[x][y]]
                out.append(acc)
        out = tuple(out)
    return FqMatrix(F, n, k, out)


def mat_pow(a: FqMatrix, e: int) -> FqMatrix:
    if e < 0:
        return mat_pow(mat_inverse(a), -e)
    result = FqMatrix.identity(a.field, a.rows)
    base = a
    while e:
        if e & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        e >>= 1
    return result


def mat_rank(m: FqMatrix) -> int:
    return _rank_rows(m.to_rows(), m.field)


def rank_distance(x: FqMatrix, y: FqMatrix) -> int:
    return mat_rank(x - y)


def mat_inverse(m: FqMatrix) -> FqMatrix:
    if m.rows != m.cols:
        raise Singular("non-square matrix")
    n = m.rows
    F = m.field
    aug = [list(m.row(i)) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    red, pivots = _rref(aug, F)
    if len(red) < n or pivots[n - 1] != n - 1:
        raise Singular("matrix is not invertible")
    return FqMatrix(F, n, n, tuple(x for r in red for x in r[n:]))


def mat_order(m: FqMatrix, limit: int | None = None) -> int:
    """Multiplicative order of an invertible matrix."""
    ident = FqMatrix.identity(m.field, m.rows)
    limit = limit or gl_order(m.rows, m.field.q)
    x, k = m, 1
    while x != ident:
        x = mat_mul(x, m)
        k += 1
        if k > limit:
            raise Singular("matrix has no finite order in GL")
    return k


def block_diagonal(F: FieldSpec, blocks: Sequence[FqMatrix]) -> FqMatrix:
    n = sum(b.rows for b in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                rows[off + i][off + j] = b[i, j]
        off += b.rows
    return FqMatrix.from_rows(F, rows)


# ---------------------------------------------------------------------------
# GL(n, q)


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def vec_code(v: Sequence[int], q: int) -> int:
    c = 0
    for x in reversed(v):
        c = c * q + x
    return c


def code_vec(c: int, n: int, q: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        out.append(c % q)
        c //= q
    return tuple(out)


def all_vectors(n: int, q: int) -> list[tuple[int, ...]]:
    """All of F_q^n, ordered by code."""
    return [code_vec(c, n, q) for c in range(q**n)]


def enumerate_gl(n: int, q: int, budget: int | None = None) -> Iterator[FqMatrix]:
    """Every element of GL(n, q) exactly once.

    Order: rows are compared by their vector code (first coordinate least
    significant) and matrices lexicographically by (row 0, row 1, ...).  The
    identity is therefore the first element.
    """
    check_budget(gl_order(n, q), budget, f"|GL({n},{q})|")
    F = field_of_order(q)
    vectors = all_vectors(n, q)

    def extend(prefix, echelon):
        depth = len(prefix)
        if depth == n:
            yield FqMatrix(F, n, n, tuple(x for r in prefix for x in r))
            return
        for v in vectors[1:]:
            red, _ = _rref(echelon + [list(v)], F)
            if len(red) == depth + 1:
                yield from extend(prefix + [v], red)

    yield from extend([], [])


def gl_generators(n: int, q: int) -> list[FqMatrix]:
    """A generating set of GL(n, q): elementary transvections and one diagonal matrix."""
    F = field_of_order(q)
    gens = []
    prim = next(a for a in range(1, q) if len({_pow_el(F, a, k) for k in range(q - 1)}) == q - 1) if q > 2 else 1
    basis = [F.p**i for i in range(F.e)]  # an F_p-basis of F_q
    for i in range(n - 1):
        for a in basis:
            for (r, c) in ((i, i + 1), (i + 1, i)):
                rows = [[1 if x == y else 0 for y in range(n)] for x in range(n)]
                rows[r][c] = a
                gens.append(FqMatrix.from_rows(F, rows))
    if q > 2:
        rows = [[1 if x == y else 0 for y in range(n)] for x in range(n)]
        rows[0][0] = prim
        gens.append(FqMatrix.from_rows(F, rows))
    if n == 1 and q == 2:
        gens.append(FqMatrix.identity(F, 1))
    return gens


def _pow_el(F: FieldSpec, a: int, k: int) -> int:
    x = 1
    for _ in range(k):
        x = F.mul[x][a]
    return x


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    field: FieldSpec
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    def __contains__(self, v) -> bool:
        return subspace_membership(v, self)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of the coset v + self (pivot coordinates cleared)."""
        F = self.field
        v = list(v)
        for r, c in zip(self.basis, self.pivots):
            if v[c]:
                mf = F.mul[v[c]]
                v = [F.sub[x][mf[y]] for x, y in zip(v, r)]
        return tuple(v)

    def vectors(self) -> list[tuple[int, ...]]:
        F, n = self.field, self.ambient_dim
        out = []
        for coeffs in itertools.product(range(F.q), repeat=self.dim):
            v = [0] * n
            for c, r in zip(coeffs, self.basis):
                if c:
                    mc = F.mul[c]
                    v = [F.add[x][mc[y]] for x, y in zip(v, r)]
            out.append(tuple(v))
        return out

    def matrix(self) -> FqMatrix:
        return FqMatrix(self.field, self.dim, self.ambient_dim, tuple(x for r in self.basis for x in r))

    def image(self, g: FqMatrix) -> "Subspace":
        return subspace_from_rows(self.field, self.ambient_dim, [g.apply(r) for r in self.basis])

    def digits(self) -> str:
        return "".join(DIGITS[x] for r in self.basis for x in r)


def subspace_from_rows(F: FieldSpec, n: int, rows: Iterable[Sequence[int]]) -> Subspace:
    rows = [list(r) for r in rows]
    for r in rows:
        if len(r) != n:
            raise MixedDimensions("row length differs from ambient dimension")
    red, _ = _rref(rows, F) if rows else ([], [])
    return Subspace(F, n, tuple(tuple(r) for r in red))


def subspace_membership(v: Sequence[int], S: Subspace) -> bool:
    return not any(S.reduce(v))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return subspace_from_rows(a.field, a.ambient_dim, list(a.basis) + list(b.basis))


def trivially_intersecting(a: Subspace, b: Subspace) -> bool:
    return subspace_sum(a, b).dim == a.dim + b.dim


def enumerate_subspaces(n: int, k: int, q: int) -> Iterator[Subspace]:
    """All k-spaces of F_q^n as reduced echelon bases (pivot sets in lex order)."""
    if not 0 <= k <= n:
        raise OutOfRange("need 0 <= k <= n")
    F = field_of_order(q)
    for pivots in itertools.combinations(range(n), k):
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), x in zip(free, vals):
                rows[i][j] = x
            yield Subspace(F, n, tuple(tuple(r) for r in rows))


def enumerate_complements(B: Subspace) -> Iterator[Subspace]:
    """All C with B + C = F^n and B ∩ C = 0; there are q^(k(n-k)) of them."""
    F, n, k = B.field, B.ambient_dim, B.dim
    free_cols = [j for j in range(n) if j not in B.pivots]
    q = F.q
    for coeffs in itertools.product(range(q), repeat=k * (n - k)):
        rows = []
        for a, j in enumerate(free_cols):
            v = [1 if x == j else 0 for x in range(n)]
            for i, r in enumerate(B.basis):
                c = coeffs[a * k + i]
                if c:
                    mc = F.mul[c]
                    v = [F.add[x][mc[y]] for x, y in zip(v, r)]
            rows.append(v)
        yield subspace_from_rows(F, n, rows)


# ---------------------------------------------------------------------------
# file formats


def _digit(ch: str) -> int:
    try:
        return DIGITS.index(ch.lower())
    except ValueError:
        raise FormatError(f"bad digit {ch!r}") from None


def write_matrix_set(path, mats: Sequence[FqMatrix]) -> None:
    mats = list(mats)
    if not mats:
        raise FormatError("empty matrix set")
    n, q = mats[0].rows, mats[0].field.q
    with open(path, "w") as fh:
        fh.write(f"glnq {n} {q} {len(mats)}\n")
        for m in mats:
            if m.rows != n or m.field.q != q:
                raise MixedDimensions("matrix set mixes (n, q)")
            fh.write(m.digits() + "\n")


def parse_matrix_set(text: str) -> tuple[int, int, list[FqMatrix]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "glnq":
        raise FormatError(f"bad header {lines[0]!r}")
    n, q, count = map(int, head[1:])
    if n > MAX_N:
        raise OutOfRange(f"n = {n} exceeds bound {MAX_N}")
    F = field_of_order(q)
    body = lines[1:]
    if len(body) != count:
        raise FormatError(f"header says {count} matrices, found {len(body)}")
    mats = []
    for ln in body:
        if len(ln) != n * n:
            raise FormatError(f"line {ln!r} does not have {n * n} digits")
        vals = tuple(_digit(ch) for ch in ln)
        if any(v >= q for v in vals):
            raise FormatError(f"digit out of range in {ln!r}")
        mats.append(FqMatrix(F, n, n, vals))
    return n, q, mats


def read_matrix_set(path) -> tuple[int, int, list[FqMatrix]]:
    with open(path) as fh:
        return parse_matrix_set(fh.read())


def write_subspace_set(path, spaces: Sequence[Subspace]) -> None:
    spaces = list(spaces)
    if not spaces:
        raise FormatError("empty subspace set")
    n, k, q = spaces[0].ambient_dim, spaces[0].dim, spaces[0].field.q
    with open(path, "w") as fh:
        fh.write(f"grass {n} {k} {q} {len(spaces)}\n")
        for s in spaces:
            fh.write(s.digits() + "\n")


def parse_subspace_set(text: str) -> tuple[int, int, int, list[Subspace]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    head = lines[0].split() if lines else []
    if len(head) != 5 or head[0] != "grass":
        raise FormatError("bad subspace-set header")
    n, k, q, count = map(int, head[1:])
    F = field_of_order(q)
    body = lines[1:]
    if len(body) != count:
        raise FormatError(f"header says {count} subspaces, found {len(body)}")
    out = []
    for ln in body:
        if len(ln) != n * k:
            raise FormatError(f"line {ln!r} does not have {n * k} digits")
        vals = [_digit(ch) for ch in ln]
        S = subspace_from_rows(F, n, [vals[i * n : (i + 1) * n] for i in range(k)])
        if S.dim != k:
            raise FormatError(f"rows of {ln!r} are dependent")
        out.append(S)
    return n, k, q, out


def read_subspace_set(path) -> tuple[int, int, int, list[Subspace]]:
    with open(path) as fh:
        return parse_subspace_set(fh.read())
