"""Dixon–Schneider computation of the character table of GL(n, q).

Class multiplication coefficients a_{jik} = #{x in C_j : x⁻¹ z_k in C_i} are
tallied over the elements of a few small classes C_j.  Common eigenvectors of
the matrices (a_{jik})_{ik} modulo a prime p ≡ 1 (mod exponent) give the
central characters; degrees follow from the class-size normalization and values
are lifted to Z[ζ] by counting eigenvalue multiplicities through power maps.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from . import _batch
from .classes import ClassLookup, class_sizes
from .config import TABLE_BUDGET, check_budget
from .errors import GlnqError
from .gfq import FqMatrix, gl_order, is_prime, mat_order

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# arithmetic mod p


def dixon_prime(exponent: int, order: int) -> int:
    """Least prime p ≡ 1 (mod exponent) with p > 2·sqrt(order)."""
    p = exponent + 1
    while not (is_prime(p) and p * p > 4 * order):
        p += exponent
    return p


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


def primitive_root_of_unity(e: int, p: int) -> int:
    """A primitive e-th root of unity mod p, from the least generator of F_p^*."""
    fac = _prime_factors(p - 1)
    g = next(g for g in range(2, p) if all(pow(g, (p - 1) // r, p) != 1 for r in fac)) if p > 2 else 1
    return pow(g, (p - 1) // e, p)


def _echelon(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p of an int64 matrix."""
    A = A.copy() % p
    rows, cols = A.shape
    pivots, r = [], 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if not len(nz):
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        f = A[:, c].copy()
        f[r] = 0
        A = (A - f[:, None] * A[r][None, :]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {v : A v = 0} mod p."""
    R, piv = _echelon(A, p)
    n = A.shape[1]
    free = [c for c in range(n) if c not in piv]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        N[f, k] = 1
        for i, c in enumerate(piv):
            N[c, k] = (-R[i, f]) % p
    return N


def _charpoly(M: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial mod p, ascending coefficients (Hessenberg reduction)."""
    H = [[int(x) % p for x in row] for row in M]
    n = len(H)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        inv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = H[i][m - 1] * inv % p
            if u:
                H[i] = [(a - u * b) % p for a, b in zip(H[i], H[m])]
                for row in H:
                    row[m] = (row[m] + u * row[i]) % p
    polys = [[1]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        nxt = [0] + prev  # x·p_{k-1}
        for i in range(len(prev)):
            nxt[i] = (nxt[i] - H[k - 1][k - 1] * prev[i]) % p
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = prod * H[i][i - 1] % p
            c = H[i - 1][k - 1] * prod % p
            for j, v in enumerate(polys[i - 1]):
                nxt[j] = (nxt[j] - c * v) % p
        polys.append(nxt)
    return polys[n]


def _roots(poly: list[int], p: int) -> list[int]:
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * xs + c) % p
    return [int(r) for r in np.nonzero(acc == 0)[0]]


# ---------------------------------------------------------------------------
# class data


def class_elements(look: ClassLookup, idx: int, size: int) -> np.ndarray:
    """Codes of all elements of class idx, by conjugation BFS."""
    conjs = look._conjugators()
    start = np.array([look.reps[idx].code()], dtype=np.int64)
    seen = start
    frontier = start
    while len(frontier):
        cand = np.unique(np.concatenate([conj(frontier) for conj in conjs]))
        frontier = np.setdiff1d(cand, seen, assume_unique=True)
        seen = np.union1d(seen, frontier)
    if len(seen) != size:
        raise GlnqError(f"class {idx}: found {len(seen)} elements, expected {size}")
    return seen


def class_matrix(look: ClassLookup, j: int, codes_inv: np.ndarray) -> np.ndarray:
    """(a_{jik})_{i,k}: codes_inv must list the inverses of the elements of C_j."""
    n, q, F = look.n, look.q, look.F
    K = len(look.labels)
    M = np.zeros((K, K), dtype=np.int64)
    pw = _batch.powers(q, n * n)
    if F.e == 1 and look.table is not None:
        D = ((codes_inv[:, None] // pw[None, :]) % q).astype(np.float64)
        for k, z in enumerate(look.reps):
            L = np.kron(np.eye(n), np.array(z.to_rows(), dtype=np.float64))
            img = (D @ L).astype(np.int64) % q
            cls = look.table[img @ pw].astype(np.int64)
            M[:, k] = np.bincount(cls, minlength=K)
        return M
    T = _batch.Tables(F)
    X = _batch.decode(codes_inv, n, q)
    for k, z in enumerate(look.reps):
        cls = look.of_stack(_batch.matmul(X, _batch.stack([z]), T))
        M[:, k] = np.bincount(cls, minlength=K)
    return M


# ---------------------------------------------------------------------------
# the algorithm


def compute(n: int, q: int, budget: int | None = None) -> dict:
    """Return labels, sizes, orders, exponent, prime and rows of local multiplicities.

    rows[r][i] is an int array m of length orders[i] with χ_r(z_i) = Σ_k m[k] ζ_{o_i}^k.
    """
    look = ClassLookup.get(n, q)
    look.ensure_table()
    labels = look.labels
    K = len(labels)
    order = gl_order(n, q)
    sizes = [class_sizes(n, q)[lm] for lm in labels]
    orders = [mat_order(r) for r in look.reps]
    exponent = math.lcm(*orders)
    p = dixon_prime(exponent, order)
    ident = look.identity_index
    inv = look.inverse_map()
    log.info("character table GL(%d,%d): %d classes, exponent %d, prime %d", n, q, K, exponent, p)

    # splitting by class matrices, smallest noncentral classes first
    schedule = sorted(range(K), key=lambda i: (sizes[i] == 1, sizes[i], i))
    spaces = [np.eye(K, dtype=np.int64)]
    done: list[np.ndarray] = []
    work = 0
    for j in schedule:
        if not spaces:
            break
        work += sizes[j]
        check_budget(work, TABLE_BUDGET if budget is None else budget, "class elements enumerated")
        elems = class_elements(look, inv[j], sizes[j])
        M = class_matrix(look, j, elems) % p
        nxt = []
        for W in spaces:
            R, piv = _echelon(W.T, p)
            W = R.T  # W[piv] = identity
            MW = M @ W % p
            Rj = MW[piv]
            assert ((W @ Rj - MW) % p == 0).all(), "subspace not invariant"
            roots = _roots(_charpoly(Rj, p), p)
            parts = []
            for lam in roots:
                N = _nullspace((Rj - lam * np.eye(len(piv), dtype=np.int64)) % p, p)
                parts.append(W @ N % p)
            if sum(P.shape[1] for P in parts) != W.shape[1]:
                raise GlnqError("class matrix is not diagonalizable mod p")
            for P in parts:
                (done if P.shape[1] == 1 else nxt).append(P)
        spaces = nxt
    if spaces:
        raise GlnqError("class matrices failed to separate the characters")
    if len(done) != K:
        raise GlnqError(f"found {len(done)} characters for {K} classes")

    z = primitive_root_of_unity(exponent, p)
    powmaps = _power_maps(look, orders)
    degrees, chis = [], []
    for v in done:
        v = v[:, 0] % p
        v = v * pow(int(v[ident]), -1, p) % p
        s = sum(int(v[i]) * int(v[inv[i]]) * pow(sizes[i], -1, p) for i in range(K)) % p
        target = order * pow(s, -1, p) % p
        deg = _degree_from_square(target, order, p)
        degrees.append(deg)
        chis.append([int(v[i]) * deg * pow(sizes[i], -1, p) % p for i in range(K)])
    lifted = _lift(np.array(chis, dtype=np.int64), degrees, orders, powmaps, exponent, z, p)
    rows = list(zip(degrees, lifted))
    rows.sort(key=lambda r: (r[0], [-int(x) for m in r[1] for x in m]))
    return {
        "labels": labels,
        "sizes": sizes,
        "orders": orders,
        "exponent": exponent,
        "prime": p,
        "degrees": [d for d, _ in rows],
        "rows": [m for _, m in rows],
    }


def _power_maps(look: ClassLookup, orders: list[int]) -> list[list[int]]:
    """pm[i][l] = class of z_i^l for 0 <= l < o_i."""
    out = []
    for rep, o in zip(look.reps, orders):
        seq = []
        cur = FqMatrix.identity(look.F, look.n)
        for _ in range(o):
            seq.append(look.of(cur))
            cur = cur @ rep
        out.append(seq)
    return out


def _degree_from_square(target: int, order: int, p: int) -> int:
    for d in range(1, math.isqrt(order) + 1):
        if order % d == 0 and d * d % p == target:
            return d
    raise GlnqError("no divisor of |G| squares to the normalization value")


def _lift(chi: np.ndarray, degrees, orders, powmaps, exponent, z, p) -> list[list[np.ndarray]]:
    """Eigenvalue multiplicities m_k = (1/o) Σ_l χ(g^l) ζ^{-kl}, for all rows at once."""
    R = len(degrees)
    out = [[None] * len(orders) for _ in range(R)]
    deg = np.array(degrees, dtype=np.int64)
    for i, o in enumerate(orders):
        zo = pow(z, exponent // o, p)
        W = np.array([[pow(zo, (-k * l) % o, p) for l in range(o)] for k in range(o)], dtype=np.int64)
        vals = chi[:, powmaps[i]]
        m = (vals @ W.T) % p * pow(o, -1, p) % p
        if (m > deg[:, None]).any():
            raise GlnqError("eigenvalue multiplicity exceeds the degree; prime too small")
        if (m.sum(axis=1) != deg).any():
            raise GlnqError("eigenvalue multiplicities do not sum to the degree")
        for r in range(R):
            out[r][i] = m[r]
    return out
