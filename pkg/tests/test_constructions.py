import random
from collections import Counter

import pytest

from glnq.constructions import (
    a7_fixture,
    closure,
    code_rank_profile,
    desarguesian_spread,
    enumeration_key,
    extension_counts,
    frobenius_matrix,
    full_grassmannian,
    gamma_l1,
    grassmannian_design_check,
    intersection_number_empirical,
    intersection_number_formula,
    invertible_subcode,
    is_closed,
    mrd_code,
    mrd_invertible_count,
    mrd_size_bounds,
    primitive_polynomial,
    recursive_design,
    search_a7,
    singer_cycle,
    singer_generator,
    singer_subgroup,
    SubspaceDesign,
)
from glnq.distributions import is_d_code, is_t_design
from glnq.errors import MixedDimensions, NotADesign, OutOfRange, StrengthExceeded
from glnq.flags import FlagSpec, transitivity_constant
from glnq.gfq import (
    FqMatrix,
    enumerate_gl,
    enumerate_subspaces,
    field_of_order,
    gl_order,
    mat_inverse,
    mat_mul,
    mat_order,
    mat_pow,
    mat_rank,
    trivially_intersecting,
)
from glnq.qcombinat import q_binomial


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4), (5, 2)])
def test_singer_cycle(n, q):
    C = singer_generator(n, q)
    assert mat_order(C) == q**n - 1
    Y = singer_cycle(n, q)
    assert len(set(Y)) == q**n - 1 and Y[-1].is_identity()
    assert primitive_polynomial(n, q).degree == n
    # sharply transitive on nonzero vectors
    e = tuple([1] + [0] * (n - 1))
    images = Counter(y.apply(e) for y in Y)
    assert len(images) == q**n - 1 and set(images.values()) == {1}
    S = singer_subgroup(n, q)
    assert len(set(S)) == (q**n - 1) // (q - 1) and is_closed(S)


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3)])
def test_gamma_l1_is_a_group(n, q):
    G = gamma_l1(n, q)
    assert len(G) == n * (q**n - 1)
    assert is_closed(G)
    phi, C = frobenius_matrix(n, q), singer_generator(n, q)
    assert mat_pow(phi, n).is_identity()
    assert mat_mul(mat_mul(phi, C), mat_inverse(phi)) == mat_pow(C, q)


def test_gamma_l1_sharply_transitive_on_full_flags():
    Y = gamma_l1(3, 2)
    assert transitivity_constant(Y, FlagSpec((1, 1, 1), frozenset({1, 2, 3}))) == 1


def test_gamma_l1_on_ordered_bases_gl23():
    Y = gamma_l1(2, 3)
    assert len(Y) == 16
    assert transitivity_constant(Y, FlagSpec((1, 1), frozenset({1, 2}))) == 1


def test_closure_and_enumeration_key():
    C = singer_generator(3, 2)
    assert len(closure([C])) == 7
    assert closure([C], limit=3) is None
    G = list(enumerate_gl(3, 2))
    assert sorted(G, key=enumeration_key) == G


def test_a7_fixture():
    Y = a7_fixture()
    assert len(Y) == 2520 and len(set(Y)) == 2520
    assert is_closed(Y)
    assert is_d_code(Y, 2)
    assert transitivity_constant(Y, FlagSpec((3, 1), frozenset({1, 2}))) == 1
    # element orders of A_7
    assert {mat_order(y) for y in Y[::7]} <= {1, 2, 3, 4, 5, 6, 7}


def test_search_a7_finds_an_order_2520_subgroup():
    H = search_a7(seed=1)
    assert len(H) == 2520 and is_closed(H)


@pytest.mark.parametrize("n,k,q", [(4, 2, 2), (3, 1, 2), (4, 1, 3), (5, 2, 2)])
def test_full_grassmannian_is_a_design(n, k, q):
    D = full_grassmannian(n, k, q)
    assert len(D) == q_binomial(n, k, q)
    for t in range(k + 1):
        assert grassmannian_design_check(D, t) == q_binomial(n - t, k - t, q)


@pytest.mark.parametrize("m,q", [(2, 2), (2, 3), (3, 2)])
def test_spread_partitions_nonzero_vectors(m, q):
    D = desarguesian_spread(m, q)
    assert len(D) == q**m + 1
    assert grassmannian_design_check(D, 1) == 1
    for a, b in zip(D.blocks, D.blocks[1:]):
        assert trivially_intersecting(a, b)
    if m == 2 and q == 2:
        assert grassmannian_design_check(D, 2) is None


def test_intersection_numbers_formula_vs_brute_force():
    D = full_grassmannian(4, 2, 2)
    rng = random.Random(5)
    spaces = {d: list(enumerate_subspaces(4, d, 2)) for d in range(3)}
    for i in range(3):
        for j in range(3 - i):
            expected = intersection_number_formula(D, i, j)
            assert intersection_number_empirical(D, i, j) == expected
            for _ in range(5):
                I, J = rng.choice(spaces[i]), rng.choice(spaces[j])
                if trivially_intersecting(I, J) if i and j else True:
                    assert intersection_number_empirical(D, i, j, I, J) == expected
    with pytest.raises(StrengthExceeded):
        intersection_number_formula(D, 2, 1)


def test_recursive_design_with_full_grassmannian_is_whole_group():
    G2 = list(enumerate_gl(2, 2))
    out = recursive_design(G2, G2, full_grassmannian(4, 2, 2), 2)
    assert len(out) == gl_order(4, 2)
    assert set(out) == set(enumerate_gl(4, 2))


def test_recursive_design_with_spread():
    G2 = list(enumerate_gl(2, 2))
    out = recursive_design(G2, G2, desarguesian_spread(2, 2), 1)
    assert len(out) == len(set(out)) == 2880
    assert is_t_design(out, 1)
    assert not is_t_design(out, 2)


def test_recursive_design_rejects_bad_inputs():
    G2 = list(enumerate_gl(2, 2))
    D = full_grassmannian(4, 2, 2)
    with pytest.raises(NotADesign):
        recursive_design(G2[:2], G2, D, 1)
    with pytest.raises(MixedDimensions):
        recursive_design(list(enumerate_gl(3, 2))[:5], G2, D, 1)
    with pytest.raises(NotADesign):
        SubspaceDesign(4, 2, 2, (D.blocks[0], D.blocks[0]))


def test_extension_counts_on_whole_group():
    G = list(enumerate_gl(3, 2))
    e1, e2 = (1, 0, 0), (0, 1, 0)
    assert extension_counts(G, [e1], [(0, 0, 1)]) == gl_order(3, 2) // 7
    assert extension_counts(G, [e1, e2], [(0, 0, 1), (1, 0, 0)]) == gl_order(3, 2) // 42


def _rank_profile_oracle(Z):
    F = field_of_order(Z.q)
    M = Z.members()
    tally = Counter(mat_rank(FqMatrix.from_rows(F, m.tolist())) for m in M)
    return [tally[i] for i in range(Z.n + 1)]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_mrd_codes_n3_q2(d):
    Z = mrd_code(3, d, 2)
    assert Z.dimension == 3 * (3 - d + 1)
    profile = code_rank_profile(Z)
    assert profile == _rank_profile_oracle(Z)
    assert profile[0] == 1 and all(profile[i] == 0 for i in range(1, d))
    inv = invertible_subcode(Z)
    assert len(inv) == mrd_invertible_count(3, d, 2) == profile[3]
    assert is_d_code(inv, d)
    general, binary = mrd_size_bounds(3, d, 2)
    assert len(inv) >= general and len(inv) >= binary


@pytest.mark.parametrize("n,d,q", [(2, 1, 3), (2, 2, 3), (3, 2, 3), (4, 3, 2)])
def test_mrd_counts_other_parameters(n, d, q):
    Z = mrd_code(n, d, q)
    profile = code_rank_profile(Z)
    assert all(profile[i] == 0 for i in range(1, d))
    assert profile[n] == mrd_invertible_count(n, d, q)
    general, binary = mrd_size_bounds(n, d, q)
    assert profile[n] >= general
    assert binary is None or profile[n] >= binary


def test_mrd_range():
    with pytest.raises(OutOfRange):
        mrd_code(3, 0, 2)
