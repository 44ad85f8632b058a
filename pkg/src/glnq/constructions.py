"""Explicit transitive sets and codes in GL(n, q).

Singer cycles, the semilinear groups ΓL(1, q^n) written over F_q, designs in the
Grassmannian, the recursive t-design construction, and d-codes from linear
maximum rank distance (Gabidulin) codes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _batch
from .classes import IrredPoly, _irreducibles_of_degree, companion
from .config import check_budget
from .errors import BudgetExceeded, MixedDimensions, NotADesign, OutOfRange, StrengthExceeded
from .gfq import (
    FqMatrix,
    Subspace,
    enumerate_complements,
    enumerate_gl,
    enumerate_subspaces,
    field_of_order,
    mat_mul,
    mat_pow,
    parse_matrix_set,
    read_subspace_set,
    subspace_from_rows,
    trivially_intersecting,
)
from .qcombinat import q_binomial

# ---------------------------------------------------------------------------
# Singer cycles and ΓL(1, q^n)


def primitive_polynomial(n: int, q: int) -> IrredPoly:
    """Least irreducible of degree n (by integer code) whose companion matrix has order q^n - 1."""
    F = field_of_order(q)
    for f in _irreducibles_of_degree(q, n):
        if f.coeffs == (0, 1):
            continue
        C = companion(F, f)
        if _order_is(C, q**n - 1):
            return f
    raise AssertionError("primitive polynomials exist in every degree")


def _order_is(g: FqMatrix, m: int) -> bool:
    if not mat_pow(g, m).is_identity():
        return False
    for p in _prime_factors(m):
        if mat_pow(g, m // p).is_identity():
            return False
    return True


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def singer_generator(n: int, q: int) -> FqMatrix:
    return companion(field_of_order(q), primitive_polynomial(n, q))


def singer_cycle(n: int, q: int, budget: int | None = None) -> list[FqMatrix]:
    """C, C^2, ..., C^(q^n - 1) = I for the Singer generator C."""
    check_budget(q**n - 1, budget, "Singer cycle")
    C = singer_generator(n, q)
    out, x = [], C
    for _ in range(q**n - 1):
        out.append(x)
        x = mat_mul(x, C)
    return out


def singer_subgroup(n: int, q: int) -> list[FqMatrix]:
    """The cyclic subgroup of order (q^n - 1)/(q - 1), generated by C^(q-1)."""
    C = mat_pow(singer_generator(n, q), q - 1)
    out, x = [], C
    for _ in range((q**n - 1) // (q - 1)):
        out.append(x)
        x = mat_mul(x, C)
    return out


def frobenius_matrix(n: int, q: int) -> FqMatrix:
    """Matrix of x -> x^q on F_{q^n} in the basis 1, a, ..., a^(n-1), a a root of the primitive polynomial."""
    F = field_of_order(q)
    C = singer_generator(n, q)
    e0 = tuple([1] + [0] * (n - 1))
    cols = [mat_pow(C, q * j).apply(e0) for j in range(n)]
    return FqMatrix.from_rows(F, [[cols[j][i] for j in range(n)] for i in range(n)])


def gamma_l1(n: int, q: int, budget: int | None = None) -> list[FqMatrix]:
    """ΓL(1, q^n) as the set of products Φ^b C^a; order n(q^n - 1)."""
    check_budget(n * (q**n - 1), budget, "ΓL(1, q^n)")
    singer = singer_cycle(n, q)
    phi = frobenius_matrix(n, q)
    out, seen = [], set()
    P = FqMatrix.identity(phi.field, n)
    for _ in range(n):
        for c in singer:
            m = mat_mul(P, c)
            if m not in seen:
                seen.add(m)
                out.append(m)
        P = mat_mul(P, phi)
    return out


def is_closed(Y: Sequence[FqMatrix]) -> bool:
    """Closed under products and inverses (finite sets: products suffice)."""
    Y = list(Y)
    if not Y:
        return True
    n, F = Y[0].rows, Y[0].field
    if not _batch.code_fits(n, F.q):
        S = set(Y)
        return all(mat_mul(a, b) in S for a in Y for b in Y)
    T = _batch.Tables(F)
    A = _batch.stack(Y)
    codes = np.unique(_batch.encode(A, F.q))
    rows = max(1, (1 << 16) // len(Y))
    for s in range(0, len(Y), rows):
        P = _batch.matmul(A[s : s + rows, None], A[None], T).reshape(-1, n, n)
        if not np.isin(_batch.encode(P, F.q), codes).all():
            return False
    return True


def closure(gens: Sequence[FqMatrix], limit: int | None = None) -> list[FqMatrix] | None:
    """The group generated by gens, or None once it exceeds limit elements."""
    n, F = gens[0].rows, gens[0].field
    q = F.q
    T = _batch.Tables(F)
    G = _batch.stack(gens)
    ident = FqMatrix.identity(F, n)
    if _batch.code_fits(n, q):
        seen = {ident.code()}
        frontier = _batch.stack([ident])
        while len(frontier):
            prods = _batch.matmul(frontier[:, None], G[None], T).reshape(-1, n, n)
            codes, first = np.unique(_batch.encode(prods, q), return_index=True)
            fresh = np.array([c not in seen for c in codes.tolist()], dtype=bool)
            seen.update(codes[fresh].tolist())
            if limit is not None and len(seen) > limit:
                return None
            frontier = prods[first[fresh]]
        arr = _batch.decode(np.array(sorted(seen), dtype=np.int64), n, q)
        return _batch.unstack(F, arr)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if limit is not None and len(seen) > limit:
            return None
        frontier = nxt
    return list(seen)


def enumeration_key(m: FqMatrix):
    """Sort key matching the order of enumerate_gl."""
    from .gfq import vec_code

    return tuple(vec_code(m.row(i), m.field.q) for i in range(m.rows))


# ---------------------------------------------------------------------------
# the A_7 fixture in GL(4, 2)

A7_ORDER = 2520


def search_a7(seed: int = 1, max_tries: int = 2000) -> list[FqMatrix]:
    """Closure of two random elements of GL(4, 2), repeated until a subgroup of order 2520 appears."""
    rng = random.Random(seed)
    G = list(enumerate_gl(4, 2))
    for _ in range(max_tries):
        a, b = rng.choice(G), rng.choice(G)
        H = closure([a, b], limit=A7_ORDER)
        if H is not None and len(H) == A7_ORDER:
            return sorted(H, key=enumeration_key)
    raise BudgetExceeded("no subgroup of order 2520 found")


def a7_fixture() -> list[FqMatrix]:
    text = resources.files("glnq").joinpath("data/a7_gl42.glnq").read_text()
    return parse_matrix_set(text)[2]


# ---------------------------------------------------------------------------
# designs in the Grassmannian


@dataclass(frozen=True)
class SubspaceDesign:
    n: int
    k: int
    q: int
    blocks: tuple
    declared_t: int = 0

    def __post_init__(self):
        if len(set(self.blocks)) != len(self.blocks):
            raise NotADesign("blocks are not distinct")
        for B in self.blocks:
            if B.dim != self.k or B.ambient_dim != self.n:
                raise MixedDimensions("block has the wrong dimension")

    def verify(self) -> "SubspaceDesign":
        if grassmannian_design_check(self, self.declared_t) is None:
            raise NotADesign(f"not a {self.declared_t}-design")
        return self

    def __len__(self):
        return len(self.blocks)


def load_design(path, t: int) -> SubspaceDesign:
    """Read a subspace-set file and verify the claimed strength."""
    n, k, q, blocks = read_subspace_set(path)
    return SubspaceDesign(n, k, q, tuple(blocks), t).verify()


def full_grassmannian(n: int, k: int, q: int) -> SubspaceDesign:
    return SubspaceDesign(n, k, q, tuple(enumerate_subspaces(n, k, q)), k)


def desarguesian_spread(m: int, q: int) -> SubspaceDesign:
    """Spread of F_q^(2m) by m-spaces: row spaces of [I | A] for A in F_q[C] plus [0 | I]."""
    F = field_of_order(q)
    n = 2 * m
    field_elems = [FqMatrix.zeros(F, m, m)] + singer_cycle(m, q)
    blocks = []
    for A in field_elems:
        rows = [[1 if i == j else 0 for j in range(m)] + list(A.row(i)) for i in range(m)]
        blocks.append(subspace_from_rows(F, n, rows))
    blocks.append(subspace_from_rows(F, n, [[0] * m + [1 if i == j else 0 for j in range(m)] for i in range(m)]))
    return SubspaceDesign(n, m, q, tuple(blocks), 1)


def _subspaces_of(B: Subspace, t: int) -> Iterable[Subspace]:
    F = B.field
    for S in enumerate_subspaces(B.dim, t, F.q):
        rows = []
        for coeffs in S.basis:
            v = [0] * B.ambient_dim
            for c, b in zip(coeffs, B.basis):
                if c:
                    v = [F.add[x][F.mul[c][y]] for x, y in zip(v, b)]
            rows.append(v)
        yield subspace_from_rows(F, B.ambient_dim, rows)


def grassmannian_design_check(D: SubspaceDesign, t: int, budget: int | None = None) -> int | None:
    """Number of blocks through each t-space if that number is constant, else None."""
    if t == 0:
        return len(D.blocks)
    if t > D.k:
        raise StrengthExceeded("t exceeds block dimension")
    check_budget(len(D.blocks) * q_binomial(D.k, t, D.q), budget, "block t-subspaces")
    counts: dict = {}
    for B in D.blocks:
        for S in _subspaces_of(B, t):
            counts[S] = counts.get(S, 0) + 1
    if len(counts) != q_binomial(D.n, t, D.q):
        return None
    values = set(counts.values())
    return values.pop() if len(values) == 1 else None


def intersection_number_formula(D: SubspaceDesign, i: int, j: int) -> int:
    """m_{i,j} = |D| q^{j(k-i)} [n-i-j, k-i]_q [k, t]_q / ([n-t, k-t]_q [n, t]_q)."""
    n, k, q, t = D.n, D.k, D.q, D.declared_t
    if i + j > t:
        raise StrengthExceeded("need i + j <= declared strength")
    if i > k or n - i - j < k - i:
        return 0
    val = Fraction(
        len(D.blocks) * q ** (j * (k - i)) * q_binomial(n - i - j, k - i, q) * q_binomial(k, t, q),
        q_binomial(n - t, k - t, q) * q_binomial(n, t, q),
    )
    if val.denominator != 1:
        raise NotADesign("intersection number is not an integer")
    return int(val)


def intersection_number_empirical(D: SubspaceDesign, i: int, j: int, I: Subspace | None = None,
                                  J: Subspace | None = None) -> int:
    """#{B in D : I <= B and B ∩ J = 0}; defaults I = <e_1..e_i>, J = <e_{i+1}..e_{i+j}>."""
    if i + j > D.declared_t:
        raise StrengthExceeded("need i + j <= declared strength")
    F = field_of_order(D.q)
    n = D.n
    unit = lambda a: [1 if x == a else 0 for x in range(n)]
    I = I or subspace_from_rows(F, n, [unit(a) for a in range(i)])
    J = J or subspace_from_rows(F, n, [unit(a) for a in range(i, i + j)])
    return sum(1 for B in D.blocks if all(b in B for b in I.basis) and trivially_intersecting(B, J))


# ---------------------------------------------------------------------------
# recursive t-designs


def _columns(F, vecs: Sequence[Sequence[int]]) -> FqMatrix:
    """Matrix whose columns are the given vectors."""
    return FqMatrix.from_rows(F, [[v[i] for v in vecs] for i in range(len(vecs[0]))])


def _hstack(F, a: FqMatrix, b: FqMatrix) -> FqMatrix:
    return FqMatrix.from_rows(F, [list(a.row(i)) + list(b.row(i)) for i in range(a.rows)])


def recursive_design(Y: Sequence[FqMatrix], Z: Sequence[FqMatrix], D: SubspaceDesign, t: int,
                     verify: bool = True, basis_choice: Callable | None = None,
                     budget: int | None = None) -> list[FqMatrix]:
    """{(g_B∘y, h_{B,C}∘z)} over y in Y, z in Z, B in D and complements C of B.

    U = <e_1..e_k>, W = <e_{k+1}..e_n>.  g_B sends the standard basis of U to a
    basis of B, h_{B,C} the standard basis of W to a basis of C; by default the
    reduced echelon bases, otherwise ``basis_choice(S)`` returns a list of basis
    vectors of S.  The element sending u + w to g_B(y u) + h_{B,C}(z w) has
    matrix [B^T y | C^T z].
    """
    Y, Z = list(Y), list(Z)
    n, k, q = D.n, D.k, D.q
    F = field_of_order(q)
    if Y and Y[0].rows != k or Z and Z[0].rows != n - k:
        raise MixedDimensions("Y must act on a k-space and Z on an (n-k)-space")
    check_budget(len(Y) * len(Z) * len(D.blocks) * q ** (k * (n - k)), budget, "recursive design")
    if verify and t > 0:
        from .distributions import is_t_design

        if t <= k and not is_t_design(Y, t):
            raise NotADesign(f"Y is not a {t}-design")
        if t <= n - k and not is_t_design(Z, t):
            raise NotADesign(f"Z is not a {t}-design")
        if grassmannian_design_check(D, min(t, k)) is None:
            raise NotADesign(f"D is not a {t}-design")
    pick = basis_choice or (lambda S: list(S.basis))
    T = _batch.Tables(F)
    Ys, Zs = _batch.stack(Y), _batch.stack(Z)
    out = []
    for B in D.blocks:
        Bt = _batch.stack([_columns(F, pick(B))])[0]  # n x k
        left = _batch.matmul(Bt[None], Ys, T)  # |Y| x n x k
        for C in enumerate_complements(B):
            Ct = _batch.stack([_columns(F, pick(C))])[0]
            right = _batch.matmul(Ct[None], Zs, T)  # |Z| x n x (n-k)
            L = np.broadcast_to(left[:, None], (len(Y), len(Z), n, k))
            R = np.broadcast_to(right[None, :], (len(Y), len(Z), n, n - k))
            M = np.concatenate([L, R], axis=3).reshape(-1, n, n)
            out.extend(_batch.unstack(F, M))
    return out


def extension_counts(Y: Sequence[FqMatrix], vecs: Sequence[Sequence[int]], targets: Sequence[Sequence[int]]) -> int:
    """#{y in Y : y v_l = v'_l for all l}; used for the r_i recursion checks."""
    return sum(1 for y in Y if all(y.apply(v) == tuple(w) for v, w in zip(vecs, targets)))


# ---------------------------------------------------------------------------
# MRD codes


@dataclass(frozen=True)
class LinearRankCode:
    n: int
    q: int
    d: int
    generators: tuple

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def members(self, budget: int | None = None) -> np.ndarray:
        """All q^dim codewords as an (N, n, n) array."""
        N = self.q**self.dimension
        check_budget(N, budget, "codewords")
        F = field_of_order(self.q)
        T = _batch.Tables(F)
        G = _batch.stack(self.generators).reshape(self.dimension, -1)
        coeffs = np.array(list(itertools.product(range(self.q), repeat=self.dimension)), dtype=np.int64)
        if F.e == 1:
            flat = (coeffs @ G) % F.p
        else:
            flat = np.zeros((N, G.shape[1]), dtype=np.int64)
            for i in range(self.dimension):
                flat = T.add[flat, T.mul[coeffs[:, i, None], G[i][None, :]]]
        return flat.reshape(N, self.n, self.n)


def mrd_code(n: int, d: int, q: int) -> LinearRankCode:
    """Gabidulin code: the maps x -> Σ_{i<=n-d} a_i x^(q^i) on F_{q^n}, as matrices over F_q."""
    if not 1 <= d <= n:
        raise OutOfRange("need 1 <= d <= n")
    C = singer_generator(n, q)
    phi = frobenius_matrix(n, q)
    gens = []
    for i in range(n - d + 1):
        P = mat_pow(phi, i)
        for l in range(n):
            gens.append(mat_mul(mat_pow(C, l), P))
    return LinearRankCode(n, q, d, tuple(gens))


def invertible_subcode(Z: LinearRankCode, budget: int | None = None) -> list[FqMatrix]:
    F = field_of_order(Z.q)
    M = Z.members(budget)
    ranks = _batch.rank(M, _batch.Tables(F))
    return _batch.unstack(F, M[ranks == Z.n])


def code_rank_profile(Z: LinearRankCode, budget: int | None = None) -> list[int]:
    """Number of codewords of each rank 0..n."""
    M = Z.members(budget)
    ranks = _batch.rank(M, _batch.Tables(field_of_order(Z.q)))
    return [int(c) for c in np.bincount(ranks, minlength=Z.n + 1)]


def mrd_invertible_count(n: int, d: int, q: int) -> int:
    """N = Σ_{j<=n-d} (-1)^j C_j with C_j = q^C(j,2) [n, j]_q (q^{n(n-d+1-j)} - 1)."""
    return sum((-1) ** j * mrd_weight_term(n, d, q, j) for j in range(n - d + 1))


def mrd_weight_term(n: int, d: int, q: int, j: int) -> int:
    return q ** comb(j, 2) * q_binomial(n, j, q) * (q ** (n * (n - d + 1 - j)) - 1)


def mrd_size_bounds(n: int, d: int, q: int) -> tuple[Fraction, int | None]:
    """(1 - 1/(q-1)) q^{n(n-d+1)} and, for q = 2, q^{n(n-d)}."""
    general = (1 - Fraction(1, q - 1)) * q ** (n * (n - d + 1))
    return general, (q ** (n * (n - d)) if q == 2 else None)
