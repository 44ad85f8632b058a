import itertools

import pytest
from hypothesis import given, settings, strategies as st

from glnq.errors import FormatError, MixedDimensions, NotPrime, Singular
from glnq.gfq import (
    FqMatrix,
    code_vec,
    enumerate_complements,
    enumerate_gl,
    enumerate_subspaces,
    field_make,
    field_of_order,
    gl_order,
    least_irreducible,
    mat_inverse,
    mat_mul,
    mat_order,
    mat_rank,
    parse_matrix_set,
    parse_subspace_set,
    prime_power,
    rank_distance,
    subspace_from_rows,
    trivially_intersecting,
    vec_code,
    write_matrix_set,
    write_subspace_set,
)
from glnq.qcombinat import q_binomial

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16]


def test_prime_power_rejects_composites():
    assert prime_power(9) == (3, 2)
    with pytest.raises(NotPrime):
        prime_power(6)


def test_least_irreducible_moduli():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    els = range(q)
    for a, b in itertools.product(els, els):
        assert F.add[a][b] == F.add[b][a]
        assert F.mul[a][b] == F.mul[b][a]
        assert F.add[F.sub[a][b]][b] == a
    for a in range(1, q):
        assert F.mul[a][F.inv[a]] == 1
    # distributivity on a sample of triples
    for a, b, c in itertools.islice(itertools.product(els, els, els), 2000):
        assert F.mul[a][F.add[b][c]] == F.add[F.mul[a][b]][F.mul[a][c]]


def test_field_multiplicative_group_cyclic():
    for q in ORDERS:
        F = field_of_order(q)
        orders = []
        for a in range(1, q):
            x, k = a, 1
            while x != 1:
                x, k = F.mul[x][a], k + 1
            orders.append(k)
        assert max(orders) == q - 1


def _mat(q, n, draw_entries):
    return FqMatrix.from_rows(field_of_order(q), [draw_entries[i * n:(i + 1) * n] for i in range(n)])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(1, 4), st.data())
def test_inverse_and_rank_properties(q, n, data):
    e = data.draw(st.lists(st.integers(0, q - 1), min_size=n * n, max_size=n * n))
    m = _mat(q, n, e)
    r = mat_rank(m)
    assert r == mat_rank(m.transpose())
    ident = FqMatrix.identity(m.field, n)
    if r == n:
        inv = mat_inverse(m)
        assert mat_mul(m, inv) == ident and mat_mul(inv, m) == ident
    else:
        with pytest.raises(Singular):
            mat_inverse(m)
    assert rank_distance(m, m) == 0


def test_rank_matches_span_size_oracle():
    # rank = log_q of the number of distinct row combinations
    F = field_of_order(3)
    for code in range(0, 3**6, 7):
        m = FqMatrix(F, 2, 3, tuple(code_vec(code, 6, 3)))
        span = {tuple((a * x + b * y) % 3 for x, y in zip(m.row(0), m.row(1))) for a in range(3) for b in range(3)}
        assert 3 ** mat_rank(m) == len(span)


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (2, 3), (3, 2), (2, 4)])
def test_enumerate_gl_counts_and_order(n, q):
    mats = list(enumerate_gl(n, q))
    assert len(mats) == len(set(mats)) == gl_order(n, q)
    assert mats[0].is_identity()


def test_vector_codes_round_trip():
    for c in range(81):
        assert vec_code(code_vec(c, 4, 3), 3) == c


def test_mat_order_of_singer_like_element():
    F = field_of_order(2)
    C = FqMatrix.from_rows(F, [[0, 0, 1], [1, 0, 1], [0, 1, 0]])
    assert mat_order(C) == 7


@pytest.mark.parametrize("n,k,q", [(3, 1, 2), (4, 2, 2), (3, 2, 3), (4, 1, 3), (2, 1, 4)])
def test_subspace_enumeration_count(n, k, q):
    spaces = list(enumerate_subspaces(n, k, q))
    assert len(spaces) == len(set(spaces)) == q_binomial(n, k, q)


def test_complements_count_and_property():
    F = field_of_order(2)
    B = subspace_from_rows(F, 4, [[1, 0, 0, 0], [0, 1, 1, 0]])
    comps = list(enumerate_complements(B))
    assert len(set(comps)) == 2 ** 4
    assert all(trivially_intersecting(B, C) for C in comps)


def test_matrix_set_round_trip(tmp_path):
    mats = list(enumerate_gl(2, 3))[:10]
    path = tmp_path / "m.glnq"
    write_matrix_set(path, mats)
    n, q, back = parse_matrix_set(path.read_text())
    assert (n, q, back) == (2, 3, mats)


def test_matrix_set_format_errors():
    with pytest.raises(FormatError):
        parse_matrix_set("glnq 2 2 2\n1001\n")
    with pytest.raises(FormatError):
        parse_matrix_set("glnq 2 2 1\n1002\n")
    with pytest.raises(FormatError):
        parse_matrix_set("nope\n")


def test_subspace_set_round_trip(tmp_path):
    spaces = list(enumerate_subspaces(4, 2, 2))
    path = tmp_path / "s.grass"
    write_subspace_set(path, spaces)
    n, k, q, back = parse_subspace_set(path.read_text())
    assert (n, k, q, back) == (4, 2, 2, spaces)


def test_mixed_dimensions():
    F = field_of_order(2)
    with pytest.raises(MixedDimensions):
        FqMatrix.identity(F, 2) + FqMatrix.identity(F, 3)


def test_field_make_caches():
    assert field_make(2, 3) is field_make(2, 3)
