"""Inner, distance and dual distance distributions of subsets of GL(n, q),
and the design / code / clique predicates built on them.

All arithmetic here is exact (ints and Fractions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import _batch
from .classes import ClassLookup, conjugate_lambda, enumerate_lambda, format_lambda, type_of_lambda
from .errors import EmptySet, InvalidType, MixedDimensions, OutOfRange, Singular
from .flags import FlagSpec, flag_action, flag_count, normalize_type, spec_for_type, transitivity_constant, validate_pair
from .gfq import FqMatrix, gl_order
from .qcombinat import asc_eval, pair_precedes, partition, q_binomial

PAIR_CHUNK = 1 << 16


@dataclass(frozen=True)
class InnerDistribution:
    values: dict  # LambdaMap -> Fraction, every class of GL(n,q) present
    subset_size: int

    def nonzero(self) -> dict:
        return {k: v for k, v in self.values.items() if v}

    def report(self) -> str:
        return "\n".join(f"{format_lambda(k)}\t{v}" for k, v in self.values.items())


@dataclass(frozen=True)
class DistanceDistribution:
    A: tuple
    Aprime: tuple

    def report(self) -> str:
        lines = [f"A{i}\t{a}" for i, a in enumerate(self.A)]
        lines += [f"A'{k}\t{a}" for k, a in enumerate(self.Aprime)]
        return "\n".join(lines)


def _check_set(Y: Sequence[FqMatrix]) -> tuple[list, int, int]:
    Y = list(Y)
    if not Y:
        raise EmptySet("subset is empty")
    n, F = Y[0].rows, Y[0].field
    for y in Y:
        if y.rows != n or y.cols != n or y.field != F:
            raise MixedDimensions("elements of Y differ in size or field")
    return Y, n, F.q


def _is_whole_group(Y: list, n: int, q: int) -> bool:
    return len(Y) == gl_order(n, q) and len(set(Y)) == len(Y)


def quotient_class_tally(Y: Sequence[FqMatrix], group: bool = False) -> np.ndarray:
    """counts[c] = #{(x, y) in Y² : x⁻¹y in class c}, classes in enumerate_lambda order.

    With group=True, Y is taken to be a subgroup and the tally is |Y| times the
    class distribution of its elements.
    """
    Y, n, q = _check_set(Y)
    look = ClassLookup.get(n, q)
    k = len(look.labels)
    if group or _is_whole_group(Y, n, q):
        return len(Y) * np.bincount(look.of_stack(_batch.stack(Y)), minlength=k)
    T = _batch.Tables(Y[0].field)
    try:
        Yinv = _batch.stack([y.inverse() for y in Y])
    except Singular:
        raise Singular("Y contains a singular matrix") from None
    S = _batch.stack(Y)
    counts = np.zeros(k, dtype=np.int64)
    m = len(Y)
    if look.table is not None:
        rows = max(1, PAIR_CHUNK // m)
        for s in range(0, m, rows):
            P = _batch.matmul(Yinv[s : s + rows, None], S[None], T).reshape(-1, n, n)
            counts += np.bincount(look.of_stack(P), minlength=k)
        return counts
    # slow path: unordered pairs, the class of y⁻¹x is the inverse class of x⁻¹y
    inv = look.inverse_map()
    counts[look.identity_index] += m
    for i in range(m):
        if i + 1 == m:
            break
        P = _batch.matmul(Yinv[i][None], S[i + 1 :], T)
        for c in look.of_stack(P):
            counts[c] += 1
            counts[inv[c]] += 1
    return counts


def inner_distribution(Y: Sequence[FqMatrix], group: bool = False) -> InnerDistribution:
    Y, n, q = _check_set(Y)
    counts = quotient_class_tally(Y, group)
    labels = enumerate_lambda(n, q)
    return InnerDistribution({lm: Fraction(int(c), len(Y)) for lm, c in zip(labels, counts)}, len(Y))


def rank_distance_tally(Y: Sequence[FqMatrix], group: bool = False) -> list[int]:
    """counts[i] = #{(x, y) in Y² : rk(x - y) = i}."""
    Y, n, q = _check_set(Y)
    T = _batch.Tables(Y[0].field)
    S = _batch.stack(Y)
    if group or _is_whole_group(Y, n, q):
        ident = _batch.stack([FqMatrix.identity(Y[0].field, n)])
        ranks = _batch.rank(_batch.subtract(S, ident, T), T)
        return [len(Y) * int(c) for c in np.bincount(ranks, minlength=n + 1)]
    m = len(Y)
    counts = np.zeros(n + 1, dtype=np.int64)
    counts[0] = m
    rows = max(1, PAIR_CHUNK // m)
    idx = np.arange(m)
    for s in range(0, m, rows):
        e = min(m, s + rows)
        D = _batch.subtract(S[s:e, None], S[None, s:], T)  # columns start at s
        upper = idx[None, s:] > idx[s:e, None]
        ranks = _batch.rank(D[upper], T)
        counts += 2 * np.bincount(ranks, minlength=n + 1)
    return [int(c) for c in counts]


def dual_transform(A: Sequence, n: int, q: int) -> tuple:
    """A'_k = Σ_i U_k(q^{n-i}) A_i."""
    return tuple(sum((asc_eval(k, q, q ** (n - i)) * A[i] for i in range(n + 1)), Fraction(0)) for k in range(n + 1))


def distance_distribution(Y: Sequence[FqMatrix], group: bool = False) -> DistanceDistribution:
    Y, n, q = _check_set(Y)
    counts = rank_distance_tally(Y, group)
    A = tuple(Fraction(c, len(Y)) for c in counts)
    return DistanceDistribution(A, dual_transform(A, n, q))


# ---------------------------------------------------------------------------
# designs, codes, cliques


def _design_spec(n: int, t: int) -> FlagSpec:
    return FlagSpec((t, n - t), frozenset({1})) if t < n else FlagSpec((n,), frozenset({1}))


def is_t_design_direct(Y: Sequence[FqMatrix], t: int) -> bool:
    Y, n, q = _check_set(Y)
    if not 1 <= t <= n:
        raise OutOfRange("need 1 <= t <= n")
    return transitivity_constant(Y, _design_spec(n, t), q) is not None


def is_t_design_dual(Y: Sequence[FqMatrix], t: int, group: bool = False) -> bool:
    """A'_1 = ... = A'_t = 0.  Necessary for every t; sufficient when 2t <= n."""
    Y, n, q = _check_set(Y)
    if not 1 <= t <= n:
        raise OutOfRange("need 1 <= t <= n")
    Ap = distance_distribution(Y, group).Aprime
    return all(Ap[k] == 0 for k in range(1, t + 1))


def is_t_design(Y: Sequence[FqMatrix], t: int, group: bool = False) -> bool:
    Y, n, q = _check_set(Y)
    if not 1 <= t <= n:
        raise OutOfRange("need 1 <= t <= n")
    if 2 * t <= n:
        return is_t_design_dual(Y, t, group)
    return is_t_design_direct(Y, t)


def clique_zero_set(n: int, q: int, sigma, tau) -> list[int]:
    """Indices of classes μ̲ with (τ, σ) ⪯ type(μ̲') ≺ (∅, (n))."""
    sigma, tau = partition(sigma), partition(tau)
    validate_pair(sigma, tau, n, q)
    top = ((), (n,))
    out = []
    for i, lm in enumerate(enumerate_lambda(n, q)):
        ty = type_of_lambda(conjugate_lambda(lm))
        if ty != top and pair_precedes((tau, sigma), ty) and pair_precedes(ty, top):
            out.append(i)
    return out


def is_clique(Y: Sequence[FqMatrix], sigma, tau, route: str = "inner", group: bool = False) -> bool:
    Y, n, q = _check_set(Y)
    sigma, tau = partition(sigma), partition(tau)
    validate_pair(sigma, tau, n, q)
    if route == "inner":
        counts = quotient_class_tally(Y, group)
        return all(counts[i] == 0 for i in clique_zero_set(n, q, sigma, tau))
    if route == "direct":
        return _clique_direct(Y, n, q, sigma, tau)
    raise ValueError(f"unknown route {route!r}")


def _clique_direct(Y, n, q, sigma, tau) -> bool:
    """No quotient of distinct elements fixes a flag of type (σ, τ)."""
    action = flag_action(spec_for_type(sigma, tau), q)
    T = _batch.Tables(Y[0].field)
    S = _batch.stack(Y)
    Yinv = _batch.stack([y.inverse() for y in Y])
    ident = np.arange(len(action))
    m = len(Y)
    for i in range(m - 1):
        P = _batch.matmul(Yinv[i][None], S[i + 1 :], T)
        for s in range(0, len(P), 1024):
            perms = action.perms(P[s : s + 1024])
            if (perms == ident[None, :]).any():
                return False
    return True


def is_d_code(Y: Sequence[FqMatrix], d: int, route: str = "rank", group: bool = False) -> bool:
    """Every two distinct elements are at rank distance at least d.

    route="clique" instead tests the ((n-d+1), (d-1)) clique condition on the
    inner distribution.
    """
    Y, n, q = _check_set(Y)
    if not 1 <= d <= n:
        raise InvalidType("need 1 <= d <= n")
    if route == "clique":
        sigma, tau = normalize_type((n - d + 1,), (d - 1,), q)
        return is_clique(Y, sigma, tau, group=group)
    if route == "inner-rank":
        # d-code iff a vanishes on classes with n-d+1 <= μ̲(X-1)'_1 < n
        counts = quotient_class_tally(Y, group)
        for c, lm in zip(counts, enumerate_lambda(n, q)):
            fixed_dim = len(lm.unipotent_part())  # μ̲(X-1)'_1
            if c and n - d + 1 <= fixed_dim < n:
                return False
        return True
    tally = rank_distance_tally(Y, group)
    return all(tally[i] == 0 for i in range(1, d))


def clique_design_bounds(sigma, tau, n: int, q: int) -> tuple[int, int]:
    sigma, tau = partition(sigma), partition(tau)
    validate_pair(sigma, tau, n, q)
    b = flag_count(sigma, tau, n, q)
    return b, b


# ---------------------------------------------------------------------------
# forced distance distribution


def _falling(n: int, j: int, q: int) -> int:
    out = 1
    for k in range(j):
        out *= q**n - q**k
    return out


def predicted_distance_distribution(n: int, q: int, size: int, t: int) -> DistanceDistribution:
    """Distance distribution forced on a t-design that is also an (n-t)-code of the given size."""
    if not 1 <= t <= n:
        raise OutOfRange("need 1 <= t <= n")
    A = [Fraction(0)] * (n + 1)
    for i in range(n):
        total = Fraction(0)
        for j in range(i, t + 1):
            total += (
                (-1) ** (j - i)
                * q ** comb(j - i, 2)
                * q_binomial(j, i, q)
                * q_binomial(n, j, q)
                * (Fraction(size, _falling(n, j, q)) - 1)
            )
        A[n - i] = total
    A[0] = Fraction(1)
    return DistanceDistribution(tuple(A), dual_transform(A, n, q))


def w_vector(n: int, q: int) -> tuple[int, ...]:
    """w_i = #{g in GL(n,q) : dim ker(g - I) = i}, from the closed-form alternating sum."""
    G = gl_order(n, q)
    out = []
    for i in range(n + 1):
        s = sum(
            (Fraction((-1) ** k * q ** comb(k, 2), q ** (k * i) * gl_order(k, q)) for k in range(n - i + 1)),
            Fraction(0),
        )
        w = Fraction(G, gl_order(i, q)) * s
        assert w.denominator == 1
        out.append(int(w))
    return tuple(out)


def fixed_space_tally(n: int, q: int, budget: int | None = None) -> tuple[int, ...]:
    """Enumeration oracle for w_vector: tally n - rk(g - I) over every g in GL(n, q)."""
    from .gfq import enumerate_gl, field_of_order

    F = field_of_order(q)
    T = _batch.Tables(F)
    ident = _batch.stack([FqMatrix.identity(F, n)])
    out = np.zeros(n + 1, dtype=np.int64)
    block = []
    for g in enumerate_gl(n, q, budget):
        block.append(g)
        if len(block) == PAIR_CHUNK:
            out += np.bincount(n - _batch.rank(_batch.subtract(_batch.stack(block), ident, T), T), minlength=n + 1)
            block = []
    if block:
        out += np.bincount(n - _batch.rank(_batch.subtract(_batch.stack(block), ident, T), T), minlength=n + 1)
    return tuple(int(x) for x in out)
