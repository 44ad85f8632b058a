"""Flag specifications (ρ, I), their types, flag enumeration, the group action on
flags, and direct transitivity testing.

A flag for (ρ, I) is a chain V_1 < ... < V_l = F_q^n with dim V_i/V_{i-1} = ρ_i,
together with an ordered basis of V_i/V_{i-1} for every i in I.  Basis vectors are
stored as coset representatives with the pivot coordinates of V_{i-1} cleared,
which makes equality of flags structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import _batch
from .config import check_budget
from .errors import InvalidType, MixedDimensions
from .gfq import (
    FqMatrix,
    Subspace,
    all_vectors,
    enumerate_subspaces,
    field_of_order,
    gl_order,
    subspace_from_rows,
    vec_code,
)
from .qcombinat import format_partition, is_valid_pair, partition, q_factorial


@dataclass(frozen=True)
class FlagSpec:
    rho: tuple[int, ...]
    selected: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(int(r) for r in self.rho))
        object.__setattr__(self, "selected", frozenset(int(i) for i in self.selected))
        if any(r <= 0 for r in self.rho):
            raise InvalidType("parts of rho must be positive")
        if not self.selected <= set(range(1, len(self.rho) + 1)):
            raise InvalidType("I must be a subset of {1..len(rho)}")

    @property
    def n(self) -> int:
        return sum(self.rho)

    def validate(self, q: int, strict: bool = False) -> "FlagSpec":
        """With strict=True also enforce the F_2 rule that unselected parts exceed 1.

        Over F_2 an unselected part of size 1 gives the same flags as selecting it,
        so the relaxed form is still a well-defined flag set.
        """
        if strict and q == 2:
            for i, r in enumerate(self.rho, 1):
                if i not in self.selected and r == 1:
                    raise InvalidType("over F_2 every unselected part of rho must exceed 1")
        return self

    def __str__(self):
        rho = ",".join(map(str, self.rho))
        sel = ",".join(map(str, sorted(self.selected)))
        return f"rho={rho} I={sel}"


def parse_flagspec(text: str) -> FlagSpec:
    """Parse ``rho=2,5,1 I=2,3`` (I may be empty: ``I=``)."""
    rho, sel = None, ()
    for tok in text.split():
        key, _, val = tok.partition("=")
        if key == "rho":
            rho = tuple(int(x) for x in val.split(",") if x)
        elif key == "I":
            sel = tuple(int(x) for x in val.split(",") if x)
        else:
            raise InvalidType(f"unknown flag spec field {key!r}")
    if not rho:
        raise InvalidType("flag spec needs rho=...")
    return FlagSpec(rho, frozenset(sel))


def type_of_spec(alpha: FlagSpec) -> tuple:
    sigma = [r for i, r in enumerate(alpha.rho, 1) if i in alpha.selected]
    tau = [r for i, r in enumerate(alpha.rho, 1) if i not in alpha.selected]
    return (partition(sigma), partition(tau))


def spec_for_type(sigma, tau) -> FlagSpec:
    """Canonical spec of a type: the parts of σ first (selected), then those of τ."""
    sigma, tau = partition(sigma), partition(tau)
    rho = tuple(sigma) + tuple(tau)
    return FlagSpec(rho, frozenset(range(1, len(sigma) + 1)))


def normalize_type(sigma, tau, q: int) -> tuple:
    """Over F_2 a part 1 of τ carries the same flags as a part 1 of σ; move it there."""
    sigma, tau = partition(sigma), partition(tau)
    if q == 2 and 1 in tau:
        ones = tau.count(1)
        sigma = partition(sigma + (1,) * ones)
        tau = tuple(t for t in tau if t != 1)
    return sigma, tau


def validate_pair(sigma, tau, n: int, q: int, strict: bool = True):
    ok = is_valid_pair(sigma, tau, n, q) if strict else sum(sigma) + sum(tau) == n
    if not ok:
        raise InvalidType(
            f"({format_partition(sigma)};{format_partition(tau)}) is not a valid type for n={n}, q={q}"
        )


def flag_count(sigma, tau, n: int, q: int) -> int:
    """|GL(n,q)| / |H|: [n]_q! / ∏[τ_i]_q! · (q-1)^|σ| · q^{Σ σ_i(σ_i-1)/2}."""
    sigma, tau = partition(sigma), partition(tau)
    validate_pair(sigma, tau, n, q, strict=False)
    den = 1
    for t in tau:
        den *= q_factorial(t, q)
    num = q_factorial(n, q) * (q - 1) ** sum(sigma) * q ** sum(s * (s - 1) // 2 for s in sigma)
    value = num // den
    assert value * den == num
    assert value == gl_order(n, q) // stabilizer_order(spec_for_type(sigma, tau), q)
    return value


def stabilizer_order(alpha: FlagSpec, q: int) -> int:
    """Order of the stabilizer of one α-flag: q^{(n²-Σρ_i²)/2} ∏_{i∉I} |GL(ρ_i, q)|."""
    n = alpha.n
    out = q ** ((n * n - sum(r * r for r in alpha.rho)) // 2)
    for i, r in enumerate(alpha.rho, 1):
        if i not in alpha.selected:
            out *= gl_order(r, q)
    return out


@dataclass(frozen=True)
class Flag:
    chain: tuple[Subspace, ...]
    bases: tuple[tuple[tuple[int, ...], ...], ...]  # one tuple per selected index, in increasing order


def _canonical_flag(alpha: FlagSpec, chain: Sequence[Subspace], raw_bases: dict) -> Flag:
    bases = []
    for i in sorted(alpha.selected):
        lower = chain[i - 2] if i >= 2 else None
        vecs = raw_bases[i]
        if lower is not None:
            vecs = [lower.reduce(v) for v in vecs]
        bases.append(tuple(tuple(v) for v in vecs))
    return Flag(tuple(chain), tuple(bases))


def enumerate_flags(alpha: FlagSpec, q: int, budget: int | None = None) -> Iterator[Flag]:
    alpha.validate(q)
    sigma, tau = type_of_spec(alpha)
    check_budget(gl_order(alpha.n, q) // stabilizer_order(alpha, q), budget, f"flags of {alpha}")
    F = field_of_order(q)
    n = alpha.n
    zero = Subspace(F, n, ())

    def ordered_bases(rows, dim):
        # rows span a complement of the lower space, so independence there is independence mod it
        span = [v for v in subspace_from_rows(F, n, rows).vectors() if any(v)]

        def rec(chosen, cur):
            if len(chosen) == dim:
                yield tuple(chosen)
                return
            for v in span:
                if any(cur.reduce(v)):
                    yield from rec(chosen + [v], subspace_from_rows(F, n, list(cur.basis) + [v]))

        yield from rec([], zero)

    def rec(i, lower: Subspace, chain, bases):
        if i == len(alpha.rho):
            yield _canonical_flag(alpha, chain, bases)
            return
        r = alpha.rho[i]
        free = [j for j in range(n) if j not in lower.pivots]
        for W in enumerate_subspaces(len(free), r, q):
            rows = []
            for w in W.basis:
                v = [0] * n
                for j, x in zip(free, w):
                    v[j] = x
                rows.append(v)
            upper = subspace_from_rows(F, n, list(lower.basis) + rows)
            if (i + 1) in alpha.selected:
                for B in ordered_bases(rows, r):
                    yield from rec(i + 1, upper, chain + [upper], {**bases, i + 1: B})
            else:
                yield from rec(i + 1, upper, chain + [upper], bases)

    yield from rec(0, zero, [], {})


def apply(g: FqMatrix, flag: Flag, alpha: FlagSpec) -> Flag:
    if g.rows != flag.chain[-1].ambient_dim:
        raise MixedDimensions("matrix and flag dimensions differ")
    chain = [V.image(g) for V in flag.chain]
    raw = {i: [g.apply(v) for v in B] for i, B in zip(sorted(alpha.selected), flag.bases)}
    return _canonical_flag(alpha, chain, raw)


# ---------------------------------------------------------------------------
# vectorized action: flags as tuples of bitmasks over vector codes

MASK_LIMIT = 64


class FlagAction:
    """All α-flags with a fast permutation action of matrix stacks.

    Each flag is described by its components: the subspaces V_1..V_{l-1} and,
    for each selected index, the cosets b + V_{i-1} of its basis vectors.  A
    component is a set of vectors, stored as a bitmask over vector codes.
    """

    def __init__(self, alpha: FlagSpec, q: int, budget: int | None = None):
        self.alpha, self.q, self.n = alpha, q, alpha.n
        self.F = field_of_order(q)
        self.T = _batch.Tables(self.F)
        self.flags = list(enumerate_flags(alpha, q, budget))
        self.vectorized = q**self.n <= MASK_LIMIT
        if self.vectorized:
            self._build_masks()
        else:
            self.position = {f: i for i, f in enumerate(self.flags)}

    def __len__(self):
        return len(self.flags)

    def _components(self, flag: Flag) -> list[frozenset]:
        q = self.q
        comps = [frozenset(vec_code(v, q) for v in V.vectors()) for V in flag.chain[:-1]]
        for i, B in zip(sorted(self.alpha.selected), flag.bases):
            lower = flag.chain[i - 2].vectors() if i >= 2 else [tuple([0] * self.n)]
            for b in B:
                comps.append(frozenset(vec_code(tuple(self.F.add[x][y] for x, y in zip(b, w)), q) for w in lower))
        return comps

    def _build_masks(self):
        q, n = self.q, self.n
        comp_lists = [self._components(f) for f in self.flags]
        masks = [[sum(1 << c for c in comp) for comp in cl] for cl in comp_lists]
        if not masks or not masks[0]:
            # a single-part spec with nothing selected: one flag, no components
            self.components = np.zeros(0, dtype=np.uint64)
            self.comp_index = np.zeros((len(self.flags), 0), dtype=np.int64)
            self.members = np.zeros((0, 1), dtype=np.int64)
            self.keys = np.zeros(len(self.flags), dtype=np.int64)
            self.radix = []
            return
        uniq = sorted({m for row in masks for m in row})
        self.components = np.array(uniq, dtype=np.uint64)
        rank = {m: i for i, m in enumerate(uniq)}
        self.comp_index = np.array([[rank[m] for m in row] for row in masks], dtype=np.int64)
        width = max(bin(m).count("1") for m in uniq)
        members = []
        for m in uniq:
            bits = [b for b in range(q**n) if m >> b & 1]
            members.append(bits + [bits[0]] * (width - len(bits)))
        self.members = np.array(members, dtype=np.int64)
        self.radix = [len(uniq)] * self.comp_index.shape[1]
        total = 1
        for r in self.radix:
            total *= r
        if total >= 2**62:
            self.vectorized = False
            self.position = {f: i for i, f in enumerate(self.flags)}
            return
        self.keys = self._key(self.comp_index)
        self.order = np.argsort(self.keys)
        self.sorted_keys = self.keys[self.order]
        self.vectors = np.array(all_vectors(n, q), dtype=np.int64)  # (Q, n)

    def _key(self, comp_idx: np.ndarray) -> np.ndarray:
        key = np.zeros(comp_idx.shape[:-1], dtype=np.int64)
        for j, r in enumerate(self.radix):
            key = key * r + comp_idx[..., j]
        return key

    def vector_perms(self, G: np.ndarray) -> np.ndarray:
        """For each matrix, the permutation of vector codes v -> code(g v)."""
        imgs = _batch.matmul(G, self.vectors.T[None], self.T)  # (N, n, Q)
        return np.einsum("niq,i->nq", imgs, _batch.powers(self.q, self.n))

    def perms(self, G: np.ndarray) -> np.ndarray:
        """Flag permutations (N, #flags): entry [k, a] is the index of g_k · a."""
        if not self.vectorized:
            mats = _batch.unstack(self.F, G)
            return np.array(
                [[self.position[apply(g, f, self.alpha)] for f in self.flags] for g in mats], dtype=np.int64
            )
        N = G.shape[0]
        if self.comp_index.shape[1] == 0:
            return np.zeros((N, len(self.flags)), dtype=np.int64)
        vp = self.vector_perms(G)  # (N, Q)
        one = np.uint64(1)
        bits = np.left_shift(one, vp[:, self.members].astype(np.uint64))  # (N, C, width)
        img = np.bitwise_or.reduce(bits, axis=2)  # (N, C)
        img_rank = np.searchsorted(self.components, img)
        flag_comp = img_rank[:, self.comp_index]  # (N, #flags, L)
        keys = self._key(flag_comp)
        pos = np.searchsorted(self.sorted_keys, keys)
        return self.order[pos]

    def perm_chunks(self, mats: Sequence[FqMatrix], chunk: int | None = None):
        if chunk is None:
            width = self.members.shape[1] if self.vectorized else 1
            per = max(1, len(self.flags) * max(1, self.comp_index.shape[1] if self.vectorized else 1) + width * 64)
            chunk = max(1, min(4096, (1 << 22) // per))
        for s in range(0, len(mats), chunk):
            yield self.perms(_batch.stack(mats[s : s + chunk]))

    def tally(self, mats: Sequence[FqMatrix]) -> np.ndarray:
        """N(a, b) = #{g : g a = b} as a dense (#flags, #flags) array."""
        F = len(self.flags)
        counts = np.zeros(F * F, dtype=np.int64)
        base = np.arange(F, dtype=np.int64) * F
        for P in self.perm_chunks(mats):
            counts += np.bincount((base[None, :] + P).ravel(), minlength=F * F)
        return counts.reshape(F, F)

    def fixed_flags(self, g: FqMatrix) -> np.ndarray:
        P = self.perms(_batch.stack([g]))[0]
        return np.nonzero(P == np.arange(len(self.flags)))[0]


@lru_cache(maxsize=64)
def flag_action(alpha: FlagSpec, q: int) -> FlagAction:
    return FlagAction(alpha, q)


DENSE_LIMIT = 1 << 24


def transitivity_constant(Y: Sequence[FqMatrix], alpha: FlagSpec, q: int | None = None,
                          budget: int | None = None) -> int | None:
    """r if every α-flag is sent to every α-flag by exactly r elements of Y, else None."""
    Y = list(Y)
    if not Y:
        return None
    q = q or Y[0].field.q
    if Y[0].rows != alpha.n:
        raise MixedDimensions("matrix size differs from the flag dimension")
    check_budget(len(Y), budget, "|Y|")
    action = flag_action(alpha, q) if budget is None else FlagAction(alpha, q, budget)
    nflags = len(action)
    if nflags == 1:
        return len(Y)
    if len(Y) % nflags:
        return None
    r = len(Y) // nflags
    if nflags * nflags <= DENSE_LIMIT:
        N = action.tally(Y)
        return r if bool((N == r).all()) else None
    # large flag sets: every row of N must be constant; check rows in blocks
    for start in range(0, nflags, 256):
        stop = min(nflags, start + 256)
        width = stop - start
        counts = np.zeros(width * nflags, dtype=np.int64)
        base = np.arange(width, dtype=np.int64) * nflags
        for P in action.perm_chunks(Y):
            counts += np.bincount((base[None, :] + P[:, start:stop]).ravel(), minlength=width * nflags)
        if not (counts == r).all():
            return None
    return r


def fixes_some_flag(g: FqMatrix, pair, budget: int | None = None) -> bool:
    sigma, tau = partition(pair[0]), partition(pair[1])
    q = g.field.q
    validate_pair(sigma, tau, g.rows, q)
    alpha = spec_for_type(sigma, tau)
    action = flag_action(alpha, q) if budget is None else FlagAction(alpha, q, budget)
    return len(action.fixed_flags(g)) > 0
