"""Partitions, the partial orders on them, q-analog counts, tableau coefficients,
and the Al-Salam-Carlitz polynomials U_k.

Partitions are plain tuples of positive ints in weakly decreasing order; ``()``
is the empty partition.  A pair type (σ, τ) is a 2-tuple of partitions.
Integer polynomials are tuples of coefficients in ascending degree.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .errors import OutOfRange, SizeMismatch

Partition = tuple
PairType = tuple


def partition(parts: Sequence[int]) -> Partition:
    """Normalize: drop zeros, sort decreasingly.  Rejects negative parts."""
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise OutOfRange("partition parts must be nonnegative")
    return tuple(sorted((int(p) for p in parts if p), reverse=True))


def size(lam: Partition) -> int:
    return sum(lam)


def format_partition(lam: Partition) -> str:
    return ",".join(map(str, lam)) if lam else "-"


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if text in ("-", "", "∅"):
        return ()
    return partition(int(x) for x in text.split(","))


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order ((n) first)."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def multiplicities(lam: Partition) -> Counter:
    return Counter(lam)


def dominates(lam: Partition, mu: Partition) -> bool:
    """mu ⊴ lam: every prefix sum of mu is at most the matching prefix sum of lam."""
    length = max(len(lam), len(mu))
    a = b = 0
    for k in range(length):
        a += lam[k] if k < len(lam) else 0
        b += mu[k] if k < len(mu) else 0
        if b > a:
            return False
    return True


def refines(mu: Partition, lam: Partition) -> bool:
    """True if mu padded with ones to |lam| splits into groups summing to the parts of lam."""
    mu, lam = partition(mu), partition(lam)
    if sum(mu) > sum(lam):
        return False
    pieces = mu + (1,) * (sum(lam) - sum(mu))
    return _can_group(pieces, lam)


@lru_cache(maxsize=None)
def _can_group(pieces: tuple, targets: tuple) -> bool:
    # pieces and targets sorted decreasingly; place the largest piece first
    if not pieces:
        return not targets
    if not targets:
        return False
    first, rest = pieces[0], pieces[1:]
    tried = set()
    for i, t in enumerate(targets):
        if t < first or t in tried:
            continue
        tried.add(t)
        remaining = t - first
        others = targets[:i] + targets[i + 1 :]
        new_targets = partition(others + ((remaining,) if remaining else ()))
        # a leftover capacity must still be filled by later pieces
        if _can_group(rest, new_targets):
            return True
    return False


def pair_precedes(a: PairType, b: PairType) -> bool:
    """(ν, μ) ⪯ (κ, λ): κ refines ν and μ ⊴ λ."""
    nu, mu = a
    kappa, lam = b
    return refines(kappa, nu) and dominates(lam, mu)


def pair_strictly_precedes(a: PairType, b: PairType) -> bool:
    return normalize_pair(a) != normalize_pair(b) and pair_precedes(a, b)


def normalize_pair(a: PairType) -> PairType:
    return (partition(a[0]), partition(a[1]))


def format_pair(a: PairType) -> str:
    return f"({format_partition(a[0])};{format_partition(a[1])})"


def is_valid_pair(sigma: Partition, tau: Partition, n: int, q: int) -> bool:
    """(σ, τ) ∈ Θ_{n,q}: sizes add to n, and for q = 2 no part of τ equals 1."""
    if sum(sigma) + sum(tau) != n:
        return False
    if q == 2 and any(t == 1 for t in tau):
        return False
    return True


# ---------------------------------------------------------------------------
# q-analogs


def q_integer(m: int, q: int) -> int:
    return sum(q**i for i in range(m))


def q_factorial(m: int, q: int) -> int:
    if m < 0:
        raise OutOfRange("negative q-factorial")
    out = 1
    for i in range(1, m + 1):
        out *= q_integer(i, q)
    return out


def q_binomial(n: int, k: int, q: int) -> int:
    if not 0 <= k <= n:
        raise OutOfRange(f"q_binomial needs 0 <= k <= n, got n={n}, k={k}")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def gl_size(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


# ---------------------------------------------------------------------------
# tableaux


def kostka(lam: Partition, mu: Partition) -> int:
    """Number of semistandard tableaux of shape lam and content mu."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise SizeMismatch("kostka needs |lam| = |mu|")
    return _skew_ssyt_count((), lam, mu)


def _horizontal_strips(inner: tuple, outer_bound: tuple, m: int) -> Iterator[tuple]:
    """Shapes nu ⊆ outer_bound with nu/inner a horizontal strip of m boxes."""
    rows = len(outer_bound)
    inner = tuple(inner) + (0,) * (rows - len(inner))

    def rec(i, left, acc):
        if i == rows:
            if left == 0:
                yield tuple(x for x in acc if x)
            return
        hi = outer_bound[i]
        if i > 0:
            hi = min(hi, inner[i - 1])  # strip condition: no two boxes in a column
        for extra in range(min(left, hi - inner[i]), -1, -1):
            yield from rec(i + 1, left - extra, acc + [inner[i] + extra])

    yield from rec(0, m, [])


@lru_cache(maxsize=None)
def _skew_ssyt_count(inner: tuple, outer: tuple, content: tuple) -> int:
    if not content:
        return int(tuple(x for x in inner if x) == tuple(x for x in outer if x))
    total = 0
    for nu in _horizontal_strips(inner, outer, content[0]):
        total += _skew_ssyt_count(nu, outer, content[1:])
    return total


def _contains(big: Partition, small: Partition) -> bool:
    return len(small) <= len(big) and all(s <= b for s, b in zip(small, big))


def lr_coefficient(lam: Partition, nu: Partition, mu: Partition) -> int:
    """c^mu_{lam,nu}: LR fillings of mu/lam with content nu whose reversed reading word is a lattice word."""
    lam, nu, mu = partition(lam), partition(nu), partition(mu)
    if sum(mu) != sum(lam) + sum(nu) or not _contains(mu, lam):
        return 0
    rows = len(mu)
    lam_p = lam + (0,) * (rows - len(lam))
    # cells of the skew shape, filled row by row, each row right to left
    cells = [(i, j) for i in range(rows) for j in range(mu[i] - 1, lam_p[i] - 1, -1)]
    filling: dict = {}
    counts = [0] * (len(nu) + 1)

    def rec(idx):
        if idx == len(cells):
            return 1
        i, j = cells[idx]
        total = 0
        for v in range(1, len(nu) + 1):
            if counts[v] >= nu[v - 1]:
                continue
            # lattice condition on the reading word so far
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            # rows weakly increase left to right; we fill right to left
            right = filling.get((i, j + 1))
            if right is not None and v > right:
                continue
            # columns strictly increase downward
            above = filling.get((i - 1, j))
            if above is not None and v <= above:
                continue
            filling[(i, j)] = v
            counts[v] += 1
            total += rec(idx + 1)
            counts[v] -= 1
            del filling[(i, j)]
        return total

    return rec(0)


def is_horizontal_strip(mu: Partition, nu: Partition) -> bool:
    """mu/nu is a horizontal strip (interlacing)."""
    mu, nu = partition(mu), partition(nu)
    if not _contains(mu, nu):
        return False
    nu_p = nu + (0,) * (len(mu) - len(nu))
    return all(mu[i + 1] <= nu_p[i] for i in range(len(mu) - 1))


# ---------------------------------------------------------------------------
# integer polynomials (ascending coefficient tuples)


def poly_trim(c: Sequence[int]) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a, b) -> tuple:
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_scale(a, c) -> tuple:
    return poly_trim([c * x for x in a])


def poly_mul(a, b) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out)


def poly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def format_poly(a, var="x") -> str:
    if not a:
        return "0"
    terms = []
    for d in range(len(a) - 1, -1, -1):
        c = a[d]
        if c == 0:
            continue
        mag = abs(c)
        if d == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + (var if d == 1 else f"{var}^{d}")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------------------
# Al-Salam-Carlitz polynomials


@lru_cache(maxsize=None)
def asc_poly(k: int, q: int) -> tuple:
    """U_k via U_{k+1} = (x - 2q^k) U_k + q^(k-1)(1 - q^k) U_{k-1}, U_{-1} = 0, U_0 = 1."""
    if k < 0:
        return ()
    if k == 0:
        return (1,)
    j = k - 1
    prev, prev2 = asc_poly(j, q), asc_poly(j - 1, q)
    term = poly_mul((-2 * q**j, 1), prev)
    if j >= 1:
        term = poly_add(term, poly_scale(prev2, q ** (j - 1) * (1 - q**j)))
    return term


def asc_eval(k: int, q: int, x: int) -> int:
    return poly_eval(asc_poly(k, q), x)


def falling_q_product(j: int, q: int) -> tuple:
    """∏_{i<j} (x - q^i) as a polynomial."""
    out = (1,)
    for i in range(j):
        out = poly_mul(out, (-(q**i), 1))
    return out


def asc_moment_identity(j: int, q: int) -> bool:
    """Σ_k [j,k]_q U_k(x) equals ∏_{i<j}(x - q^i) coefficientwise."""
    lhs: tuple = ()
    for k in range(j + 1):
        lhs = poly_add(lhs, poly_scale(asc_poly(k, q), q_binomial(j, k, q)))
    return lhs == falling_q_product(j, q)


def asc_inversion(j: int, l: int, q: int) -> int:
    return sum(
        (-1) ** (k - j) * q ** comb(k - j, 2) * q_binomial(k, j, q) * q_binomial(l, k, q) for k in range(j, l + 1)
    )


def u_from_falling(k: int, q: int) -> tuple:
    """U_k = Σ_j (-1)^{k-j} q^{C(k-j,2)} [k,j]_q ∏_{i<j}(x - q^i); the inverse of the moment identity."""
    out: tuple = ()
    for j in range(k + 1):
        c = (-1) ** (k - j) * q ** comb(k - j, 2) * q_binomial(k, j, q)
        out = poly_add(out, poly_scale(falling_q_product(j, q), c))
    return out
