import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from glnq import qcombinat as qc
from glnq.errors import OutOfRange, SizeMismatch
from glnq.gfq import enumerate_subspaces, gl_order


# ---------------------------------------------------------------- partitions


def test_partition_counts():
    assert [sum(1 for _ in qc.partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert next(iter(qc.partitions(4))) == (4,)


def test_partition_normalizes_generators():
    assert qc.partition(x for x in (1, 3, 2)) == (3, 2, 1)
    assert qc.parse_partition(qc.format_partition((3, 1, 1))) == (3, 1, 1)


@given(st.integers(0, 9).flatmap(lambda n: st.sampled_from(list(qc.partitions(n)))))
def test_conjugate_involution(lam):
    assert qc.conjugate(qc.conjugate(lam)) == lam
    assert sum(qc.conjugate(lam)) == sum(lam)


def _pairs(n):
    ps = list(qc.partitions(n))
    return [(a, b) for a in ps for b in ps]


@pytest.mark.parametrize("n", range(1, 8))
def test_dominance_reverses_under_conjugation(n):
    for lam, mu in _pairs(n):
        assert qc.dominates(lam, mu) == qc.dominates(qc.conjugate(mu), qc.conjugate(lam))


def _refines_oracle(mu, lam):
    # assign every piece to a part of lam and compare loads
    pieces = list(mu) + [1] * (sum(lam) - sum(mu))
    if sum(mu) > sum(lam):
        return False
    for assign in itertools.product(range(len(lam)), repeat=len(pieces)):
        load = [0] * len(lam)
        for p, a in zip(pieces, assign):
            load[a] += p
        if load == list(lam):
            return True
    return False


@pytest.mark.parametrize("n", range(1, 7))
def test_refines_matches_oracle(n):
    for lam, mu in _pairs(n):
        assert qc.refines(mu, lam) == _refines_oracle(mu, lam), (mu, lam)
    # shorter mu is padded with ones
    for lam in qc.partitions(n):
        for m in range(n):
            for mu in qc.partitions(m):
                assert qc.refines(mu, lam) == _refines_oracle(mu, lam)


def test_pair_order_examples():
    assert qc.pair_precedes(((2,), (1,)), ((1, 1), (1,)))
    assert not qc.pair_precedes(((1, 1), ()), ((2,), ()))
    assert qc.pair_strictly_precedes(((2,), ()), ((1, 1), ()))
    assert not qc.pair_strictly_precedes(((2,), ()), ((2,), ()))


def test_valid_pairs():
    assert qc.is_valid_pair((1,), (2,), 3, 2)
    assert not qc.is_valid_pair((2,), (1,), 3, 2)
    assert qc.is_valid_pair((2,), (1,), 3, 3)
    assert not qc.is_valid_pair((2,), (1,), 4, 3)


# ---------------------------------------------------------------- q-analogs


@pytest.mark.parametrize("n,q", [(3, 2), (4, 2), (3, 3), (2, 4), (2, 5)])
def test_q_binomial_counts_subspaces(n, q):
    for k in range(n + 1):
        assert qc.q_binomial(n, k, q) == sum(1 for _ in enumerate_subspaces(n, k, q))


@given(st.integers(0, 12), st.integers(0, 12), st.sampled_from([2, 3, 4, 5, 7]))
def test_q_binomial_pascal(n, k, q):
    if not 0 < k < n:
        return
    lhs = qc.q_binomial(n, k, q)
    assert lhs == qc.q_binomial(n - 1, k - 1, q) + q**k * qc.q_binomial(n - 1, k, q)
    assert lhs == qc.q_binomial(n, n - k, q)


def test_q_binomial_range():
    with pytest.raises(OutOfRange):
        qc.q_binomial(3, 4, 2)
    with pytest.raises(OutOfRange):
        qc.q_factorial(-1, 2)


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4)])
def test_gl_size(n, q):
    assert qc.gl_size(n, q) == gl_order(n, q)
    assert qc.gl_size(n, q) == q ** comb(n, 2) * (q - 1) ** n * qc.q_factorial(n, q)


# ---------------------------------------------------------------- tableaux


def _ssyt_oracle(outer, inner, content):
    cells = [(i, j) for i in range(len(outer)) for j in range(inner[i] if i < len(inner) else 0, outer[i])]
    k = len(content)
    count = 0
    for vals in itertools.product(range(1, k + 1), repeat=len(cells)):
        f = dict(zip(cells, vals))
        if [vals.count(v) for v in range(1, k + 1)] != list(content):
            continue
        ok = all(
            (f.get((i, j + 1)) is None or f[(i, j + 1)] >= v) and (f.get((i + 1, j)) is None or f[(i + 1, j)] > v)
            for (i, j), v in f.items()
        )
        count += ok
    return count


@pytest.mark.parametrize("n", range(1, 6))
def test_kostka_matches_oracle(n):
    for lam, mu in _pairs(n):
        assert qc.kostka(lam, mu) == _ssyt_oracle(lam, (), mu)
        # triangularity
        assert (qc.kostka(lam, mu) > 0) == qc.dominates(lam, mu)


def test_kostka_size_mismatch():
    with pytest.raises(SizeMismatch):
        qc.kostka((2,), (1,))


def test_lr_known_values():
    assert qc.lr_coefficient((2, 1), (2, 1), (3, 2, 1)) == 2
    assert qc.lr_coefficient((1,), (1, 1), (2, 1)) == 1
    assert qc.lr_coefficient((2,), (2,), (2, 2)) == 1
    assert qc.lr_coefficient((2,), (2,), (3, 1)) == 1
    assert qc.lr_coefficient((2,), (1,), (1, 1, 1)) == 0


@pytest.mark.parametrize("a,b", [(1, 2), (2, 2), (2, 3), (1, 4), (3, 2)])
def test_lr_skew_kostka_expansion(a, b):
    # K_{mu/lam, c} = Σ_nu c^mu_{lam,nu} K_{nu,c}
    for lam in qc.partitions(a):
        for mu in qc.partitions(a + b):
            if not all(x <= (mu[i] if i < len(mu) else 0) for i, x in enumerate(lam)):
                continue
            for content in qc.partitions(b):
                direct = _ssyt_oracle(mu, lam, content)
                via = sum(qc.lr_coefficient(lam, nu, mu) * qc.kostka(nu, content) for nu in qc.partitions(b))
                assert direct == via, (lam, mu, content)


@pytest.mark.parametrize("a,b", [(2, 2), (1, 3), (3, 2)])
def test_lr_symmetric(a, b):
    for lam in qc.partitions(a):
        for nu in qc.partitions(b):
            for mu in qc.partitions(a + b):
                assert qc.lr_coefficient(lam, nu, mu) == qc.lr_coefficient(nu, lam, mu)


def test_horizontal_strip():
    assert qc.is_horizontal_strip((3, 1), (2,))
    assert qc.is_horizontal_strip((2, 2), (2,))
    assert not qc.is_horizontal_strip((2, 2), (1,))
    assert not qc.is_horizontal_strip((2,), (3,))


# ---------------------------------------------------------------- ASC polynomials


def _display(k, q):
    # the three displayed polynomials, ascending coefficients
    if k == 1:
        return (-2, 1)
    if k == 2:
        return (3 * q + 1, -2 * (q + 1), 1)
    if k == 3:
        return (-2 * q * (2 * q * q + q + 1), 3 * q**3 + 4 * q * q + 4 * q + 1, -2 * (q * q + q + 1), 1)
    raise ValueError(k)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_asc_displays(k, q):
    assert qc.asc_poly(k, q) == _display(k, q)


def test_asc_q2_u3():
    assert qc.format_poly(qc.asc_poly(3, 2)) == "x^3 - 14x^2 + 49x - 44"
    assert qc.asc_poly(0, 2) == (1,)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("j", range(9))
def test_asc_moment_identity(j, q):
    assert qc.asc_moment_identity(j, q)


@pytest.mark.parametrize("q", [2, 3])
def test_asc_inversion_is_delta(q):
    for j in range(9):
        for l in range(9):
            expected = 1 if j == l else 0
            assert qc.asc_inversion(j, l, q) == expected


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("k", range(9))
def test_u_from_falling_matches_recurrence(k, q):
    assert qc.u_from_falling(k, q) == qc.asc_poly(k, q)


@given(st.integers(0, 6), st.sampled_from([2, 3, 4]), st.integers(-50, 50))
@settings(max_examples=60)
def test_asc_eval_consistent(k, q, x):
    assert qc.asc_eval(k, q, x) == qc.poly_eval(qc.u_from_falling(k, q), x)
