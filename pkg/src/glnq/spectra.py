"""Class functions, character tables and spectral bounds for GL(n, q).

Character values are stored per class as eigenvalue multiplicities: for a
class of element order o, an integer vector m of length o with
χ(z) = Σ_k m[k]·ζ_o^k.  Exact comparisons go through ``cyclotomic.canonical``
at the group exponent; the LP uses rational enclosures of real and imaginary
parts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np
from mpmath import iv

from . import _dixon, cyclotomic
from .classes import ClassLookup, enumerate_lambda, format_lambda, parse_lambda
from .config import cache_dir
from .distributions import _check_set, clique_design_bounds, clique_zero_set, quotient_class_tally
from .errors import FormatError, GlnqError, KeyMismatch, OutOfRange, TableMissing
from .gfq import FqMatrix, gl_order, mat_rank
from .lp import simplex_max
from .qcombinat import q_binomial

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
ENCLOSURE_BITS = 128


# ---------------------------------------------------------------------------
# class functions


@dataclass(frozen=True)
class ClassFunction:
    n: int
    q: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(enumerate_lambda(self.n, self.q)):
            raise GlnqError("class function length differs from the class count")

    @property
    def key(self) -> tuple[int, int]:
        return (self.n, self.q)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def _combine(self, other, op):
        if isinstance(other, ClassFunction):
            if other.key != self.key:
                raise KeyMismatch(f"class functions of GL{self.key} and GL{other.key}")
            return ClassFunction(self.n, self.q, tuple(op(a, b) for a, b in zip(self.values, other.values)))
        return ClassFunction(self.n, self.q, tuple(op(a, other) for a in self.values))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__
    __radd__ = __add__


def constant_function(n: int, q: int, c=1) -> ClassFunction:
    return ClassFunction(n, q, (c,) * len(enumerate_lambda(n, q)))


@lru_cache(maxsize=None)
def theta_function(n: int, q: int) -> ClassFunction:
    """θ(g) = q^(n - rk(g - I)) on class representatives."""
    look = ClassLookup.get(n, q)
    vals = []
    for rep in look.reps:
        ident = FqMatrix.identity(rep.field, n)
        vals.append(q ** (n - mat_rank(rep - ident)))
    return ClassFunction(n, q, tuple(vals))


def xi_function(n: int, q: int, j: int) -> ClassFunction:
    """Permutation character on ordered j-tuples of independent vectors: ∏_{i<j}(θ - q^i)."""
    if not 0 <= j <= n:
        raise OutOfRange("need 0 <= j <= n")
    out = constant_function(n, q)
    theta = theta_function(n, q)
    for i in range(j):
        out = out * (theta - q**i)
    return out


def u_theta(n: int, q: int, k: int) -> ClassFunction:
    """U_k(θ) as the alternating q-binomial combination of ξ_0..ξ_k."""
    if not 0 <= k <= n:
        raise OutOfRange("need 0 <= k <= n")
    out = constant_function(n, q, 0)
    for j in range(k + 1):
        c = (-1) ** (k - j) * q ** math.comb(k - j, 2) * q_binomial(k, j, q)
        out = out + xi_function(n, q, j) * c
    return out


def class_inner_product(phi: ClassFunction, psi: ClassFunction) -> Fraction:
    """(1/|G|) Σ |C|·φ·conj(ψ) for rational-valued class functions."""
    if phi.key != psi.key:
        raise KeyMismatch(f"class functions of GL{phi.key} and GL{psi.key}")
    n, q = phi.key
    sizes = _sizes(n, q)
    total = sum(Fraction(s) * Fraction(a) * Fraction(b) for s, a, b in zip(sizes, phi.values, psi.values))
    return total / gl_order(n, q)


def _sizes(n: int, q: int) -> list[int]:
    from .classes import class_sizes

    cs = class_sizes(n, q)
    return [cs[lm] for lm in enumerate_lambda(n, q)]


# ---------------------------------------------------------------------------
# character tables


@lru_cache(maxsize=None)
def _angle(k: int, o: int):
    """Midpoints and common radius of cos, sin of 2πk/o, exact Fractions."""
    saved = iv.prec
    iv.prec = ENCLOSURE_BITS + 64
    try:
        x = 2 * iv.pi * iv.mpf(k) / o
        c, s = iv.cos(x), iv.sin(x)
        lo_c, hi_c = _frac(c.a), _frac(c.b)
        lo_s, hi_s = _frac(s.a), _frac(s.b)
    finally:
        iv.prec = saved
    return (lo_c + hi_c) / 2, (lo_s + hi_s) / 2, max(hi_c - lo_c, hi_s - lo_s) / 2


def _frac(x) -> Fraction:
    sign, man, exp, _ = x._mpi_[0]
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def _cos_sin(k: int, o: int):
    """Enclosures with exact symmetry: values for -k are conjugate to those for k."""
    k %= o
    if 2 * k > o:
        c, s, r = _cos_sin(o - k, o)
        return c, -s, r
    g = math.gcd(k, o)
    return _angle(k // g, o // g)


@dataclass
class CharacterTable:
    n: int
    q: int
    labels: tuple
    sizes: tuple
    orders: tuple
    exponent: int
    prime: int
    degrees: tuple
    rows: tuple  # rows[r][i] : int64 array of length orders[i]

    @property
    def key(self) -> tuple[int, int]:
        return (self.n, self.q)

    @property
    def order(self) -> int:
        return gl_order(self.n, self.q)

    def __len__(self):
        return len(self.rows)

    def value(self, r: int, i: int) -> np.ndarray:
        """χ_r at class i as a dense coefficient vector over ζ_e."""
        e, o = self.exponent, self.orders[i]
        out = np.zeros(e, dtype=np.int64)
        out[np.arange(o) * (e // o)] = self.rows[r][i]
        return out

    def weighted_sum(self, r: int, weights: Sequence[int], conjugate: bool = False) -> np.ndarray:
        """Σ_i w_i·χ_r(z_i) (or its conjugate) as a dense vector over ζ_e."""
        e = self.exponent
        big = max((abs(int(w)) for w in weights), default=0) * self.degrees[r] * len(weights) >= 2**62
        out = np.zeros(e, dtype=object if big else np.int64)
        for i, w in enumerate(weights):
            w = int(w)
            if not w:
                continue
            o = self.orders[i]
            idx = np.arange(o) * (e // o)
            if conjugate:
                idx = (-idx) % e
            m = self.rows[r][i].astype(object) if big else self.rows[r][i]
            np.add.at(out, idx, m * w)
        return out

    def multiplicity(self, phi: ClassFunction, r: int) -> Fraction:
        """⟨φ, χ_r⟩ for a rational-valued class function φ; exact."""
        if phi.key != self.key:
            raise KeyMismatch(f"class function of GL{phi.key} against table of GL{self.key}")
        den = 1
        for v in phi.values:
            den = math.lcm(den, Fraction(v).denominator)
        w = [int(Fraction(v) * den) * s for v, s in zip(phi.values, self.sizes)]
        val = cyclotomic.rational_value(self.weighted_sum(r, w, conjugate=True), self.exponent)
        if val is None:
            raise GlnqError("inner product with a rational class function is not rational")
        return Fraction(val, den * self.order)

    def check_orthogonality(self, block: int = 4) -> bool:
        """Exact row orthogonality (1/|G|) Σ |C| χ_r conj(χ_s) = δ_rs."""
        R, e = len(self.rows), self.exponent
        G = self.order
        mats = [np.array([self.rows[r][i] for r in range(R)]) for i in range(len(self.orders))]
        for b0 in range(0, R, block):
            rs = range(b0, min(R, b0 + block))
            acc = np.zeros((len(rs), R, e), dtype=np.int64)
            for i, X in enumerate(mats):
                o = self.orders[i]
                # circ[s, d, k] = X[s, k - d]
                shift = (np.arange(o)[None, :] - np.arange(o)[:, None]) % o
                circ = X[:, shift]
                corr = np.einsum("rk,sdk->rsd", X[b0 : b0 + len(rs)], circ)
                acc[:, :, np.arange(o) * (e // o)] += self.sizes[i] * corr
            canon = cyclotomic.canonical(acc, e)
            expect = np.zeros_like(canon)
            for a, r in enumerate(rs):
                expect[a, r, 0] = G
            if not (canon == expect).all():
                return False
        return True

    def enclosures(self) -> tuple[list, list, Fraction]:
        """Rational midpoints re[r][i], im[r][i] and a radius bounding every error.

        Real parts that are rational and imaginary parts that vanish are detected
        in the cyclotomic normal form and returned exactly.
        """
        re, im, rad = [], [], Fraction(0)
        for r in range(len(self.rows)):
            rr, ii = [], []
            for i, o in enumerate(self.orders):
                m = self.rows[r][i]
                mbar = cyclotomic.conj(m)
                re_exact = cyclotomic.rational_value(m + mbar, o)
                im_zero = bool(cyclotomic.is_zero(m - mbar, o))
                cr, ci, er = Fraction(0), Fraction(0), Fraction(0)
                for k in np.nonzero(m)[0]:
                    c, s, d = _cos_sin(int(k), o)
                    cr += int(m[k]) * c
                    ci += int(m[k]) * s
                    er += int(m[k]) * d
                if re_exact is not None:
                    cr = Fraction(re_exact, 2)
                if im_zero:
                    ci = Fraction(0)
                rr.append(cr)
                ii.append(ci)
                if re_exact is None or not im_zero:
                    rad = max(rad, er)
            re.append(rr)
            im.append(ii)
        if rad > Fraction(1, 2**ENCLOSURE_BITS):
            raise GlnqError("enclosure radius exceeds the certified bound")
        return re, im, rad


# --- cache file -------------------------------------------------------------


def _cache_path(n: int, q: int, cache=None) -> Path:
    return cache_dir(cache) / f"chartab_{n}_{q}.txt"


def format_table(T: CharacterTable) -> str:
    e = T.exponent
    lines = [f"chartab {T.n} {T.q} {len(T.labels)} {e} {T.prime}", f"version {FORMAT_VERSION}"]
    for lm, s, o in zip(T.labels, T.sizes, T.orders):
        lines.append(f"class {s} {o} {format_lambda(lm)}")
    for deg, row in zip(T.degrees, T.rows):
        fields = []
        for i, m in enumerate(row):
            step = e // T.orders[i]
            terms = [f"{int(k) * step}:{int(m[k])}" for k in np.nonzero(m)[0]]
            fields.append(",".join(terms) if terms else "0")
        lines.append(f"row {deg} " + " ".join(fields))
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> CharacterTable:
    lines = text.splitlines()
    try:
        head = lines[0].split()
        if head[0] != "chartab" or len(head) != 6:
            raise FormatError("missing chartab header")
        n, q, K, e, p = map(int, head[1:])
        if lines[1].split() != ["version", str(FORMAT_VERSION)]:
            raise FormatError(f"unsupported table format {lines[1]!r}")
        labels, sizes, orders = [], [], []
        for line in lines[2 : 2 + K]:
            tag, s, o, lab = line.split(" ", 3)
            if tag != "class":
                raise FormatError("expected a class line")
            labels.append(parse_lambda(lab, q))
            sizes.append(int(s))
            orders.append(int(o))
        degrees, rows = [], []
        for line in lines[2 + K :]:
            if not line.strip():
                continue
            parts = line.split()
            if parts[0] != "row" or len(parts) != K + 2:
                raise FormatError("malformed row line")
            degrees.append(int(parts[1]))
            row = []
            for i, field in enumerate(parts[2:]):
                o = orders[i]
                m = np.zeros(o, dtype=np.int64)
                if field != "0":
                    for term in field.split(","):
                        k, c = term.split(":")
                        k = int(k)
                        if k % (e // o):
                            raise FormatError("exponent not a multiple of e/o")
                        m[k // (e // o)] = int(c)
                row.append(m)
            rows.append(tuple(row))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad character table file: {exc}") from None
    if len(rows) != K:
        raise FormatError(f"expected {K} rows, found {len(rows)}")
    return CharacterTable(n, q, tuple(labels), tuple(sizes), tuple(orders), e, p, tuple(degrees), tuple(rows))


def _trivial_table(q: int) -> CharacterTable:
    """GL(0, q): the trivial group."""
    return CharacterTable(0, q, (), (), (), 1, 0, (1,), ((),))


_memory: dict = {}


def load_character_table(n: int, q: int, cache=None) -> CharacterTable:
    """Read a cached table; TableMissing if none exists."""
    path = _cache_path(n, q, cache)
    key = (n, q, str(path.resolve()))
    if key in _memory:
        return _memory[key]
    if not path.exists():
        raise TableMissing(f"no cached character table for GL({n},{q}) at {path}")
    T = parse_table(path.read_text())
    if (T.n, T.q) != (n, q) or T.labels != enumerate_lambda(n, q):
        raise FormatError(f"cached table at {path} does not match GL({n},{q})")
    _memory[key] = T
    return T


def character_table(n: int, q: int, cache=None, compute: bool = True, budget: int | None = None,
                    write: bool = True) -> CharacterTable:
    """The character table of GL(n, q), from cache or by the Dixon–Schneider method."""
    if n == 0:
        return _trivial_table(q)
    try:
        return load_character_table(n, q, cache)
    except TableMissing:
        if not compute:
            raise
    log.warning("computing character table of GL(%d,%d); this may take a while", n, q)
    d = _dixon.compute(n, q, budget)
    T = CharacterTable(n, q, tuple(d["labels"]), tuple(d["sizes"]), tuple(d["orders"]), d["exponent"],
                       d["prime"], tuple(d["degrees"]), tuple(tuple(r) for r in d["rows"]))
    if sum(x * x for x in T.degrees) != T.order:
        raise GlnqError("degrees do not satisfy Σ deg² = |G|")
    if write:
        path = _cache_path(n, q, cache)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(format_table(T))
        tmp.replace(path)
    _memory[(n, q, str(_cache_path(n, q, cache).resolve()))] = T
    return T


# ---------------------------------------------------------------------------
# decomposition of U_k(θ)


def asc_multiplicities(T: CharacterTable, k: int) -> list[Fraction]:
    return [T.multiplicity(u_theta(T.n, T.q, k), r) for r in range(len(T))]


def verify_asc_decomposition(n: int, q: int, k: int, cache=None, budget: int | None = None) -> bool:
    """Nonzero multiplicities of U_k(θ) equal the degrees of GL(k, q); ξ_k splits to match."""
    if not 0 <= 2 * k <= n:
        raise OutOfRange("need 0 <= 2k <= n")
    T = character_table(n, q, cache, budget=budget)
    mult = {kk: asc_multiplicities(T, kk) for kk in range(k + 1)}
    small = {kk: sorted(character_table(kk, q, cache, budget=budget).degrees) for kk in range(k + 1)}
    for kk in range(k + 1):
        nonzero = sorted(int(m) for m in mult[kk] if m != 0)
        if any(m.denominator != 1 or m < 0 for m in mult[kk]) or nonzero != small[kk]:
            return False
    # ξ_k: multiplicity [k, kk]_q·f on the rows belonging to U_kk, each row in one U only
    xi = xi_function(n, q, k)
    for r in range(len(T)):
        owners = [kk for kk in range(k + 1) if mult[kk][r] != 0]
        if len(owners) > 1:
            return False
        expect = q_binomial(k, owners[0], q) * mult[owners[0]][r] if owners else 0
        if T.multiplicity(xi, r) != expect:
            return False
    expected = sorted(q_binomial(k, kk, q) * f for kk in range(k + 1) for f in small[kk])
    got = sorted(int(T.multiplicity(xi, r)) for r in range(len(T)) if T.multiplicity(xi, r) != 0)
    return got == expected


# ---------------------------------------------------------------------------
# dual distribution


@dataclass(frozen=True)
class DualValue:
    """An entry a'_χ: exact when rational, else a certified interval [lo, hi]."""

    exact: Fraction | None
    lo: Fraction
    hi: Fraction

    def __float__(self):
        return float(self.exact) if self.exact is not None else float((self.lo + self.hi) / 2)


def dual_distribution(Y: Sequence[FqMatrix], group: bool = False, table: CharacterTable | None = None,
                      compute: bool = False, cache=None) -> list[DualValue]:
    """a'_χ = (χ(1)/|Y|)·Σ_{x,y∈Y} χ(x⁻¹y) for every table row."""
    Y, n, q = _check_set(Y)
    T = table if table is not None else character_table(n, q, cache, compute=compute)
    counts = [int(c) for c in quotient_class_tally(Y, group)]
    re, im, rad = T.enclosures()
    out = []
    for r in range(len(T)):
        total = T.weighted_sum(r, counts)
        scale = Fraction(T.degrees[r], len(Y))
        val = cyclotomic.rational_value(total, T.exponent)
        if val is not None:
            v = scale * val
            out.append(DualValue(v, v, v))
            continue
        mid = sum(c * x for c, x in zip(counts, re[r]))
        imag = sum(c * x for c, x in zip(counts, im[r]))
        err = rad * sum(counts)
        if abs(imag) > err:
            raise GlnqError("dual distribution entry is not real")
        out.append(DualValue(None, scale * (mid - err), scale * (mid + err)))
    for v in out:
        if v.hi < 0:
            raise GlnqError("negative dual distribution entry")
    return out


# ---------------------------------------------------------------------------
# linear programming bound for cliques


@dataclass(frozen=True)
class LPBound:
    value: Fraction  # optimum of the LP over the rational enclosures
    error: Fraction  # certified: the exact LP optimum is at most value + error
    solution: dict  # class index -> a value (identity included)
    zero_set: tuple

    def rounded(self) -> int:
        return round(self.value)


def lp_clique_bound(n: int, q: int, sigma, tau, table: CharacterTable | None = None,
                    compute: bool = False, cache=None) -> LPBound:
    """Delsarte bound: max Σ a subject to a ≥ 0, a_id = 1, a = 0 on the clique zero set,
    and Σ χ·a real and nonnegative for every irreducible χ."""
    zeros = set(clique_zero_set(n, q, sigma, tau))
    T = table if table is not None else character_table(n, q, cache, compute=compute)
    look = ClassLookup.get(n, q)
    ident = look.identity_index
    free = [i for i in range(len(T.labels)) if i != ident and i not in zeros]
    re, im, rad = T.enclosures()

    A_ub, b_ub, A_eq = [], [], []
    seen_ub, seen_eq = set(), set()
    for r in range(len(T)):
        row = tuple(-re[r][i] for i in free)
        if row not in seen_ub:
            seen_ub.add(row)
            A_ub.append(list(row))
            b_ub.append(re[r][ident])
        irow = tuple(im[r][i] for i in free)
        neg = tuple(-x for x in irow)
        if any(irow) and irow not in seen_eq and neg not in seen_eq:
            seen_eq.add(irow)
            A_eq.append(list(irow))
    res = simplex_max([1] * len(free), A_ub, b_ub, A_eq, [0] * len(A_eq))
    value = 1 + res.value
    # weak duality over perturbed coefficients; Σ a ≤ |G| for any feasible a
    error = rad * (sum(abs(y) for y in res.y_ub) + sum(abs(y) for y in res.y_eq)) * T.order
    solution = {ident: Fraction(1)}
    solution.update({i: x for i, x in zip(free, res.x) if x})
    upper, _ = clique_design_bounds(sigma, tau, n, q)
    if value > upper + error:
        raise GlnqError("LP bound exceeds the design bound")
    return LPBound(value, error, solution, tuple(sorted(zeros)))
