import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from glnq import _batch
from glnq.classes import (
    ClassLookup,
    centralizer_order,
    class_representative,
    class_sizes,
    conjugacy_classes_bruteforce,
    enumerate_lambda,
    format_lambda,
    irreducibles,
    jordan_type,
    parse_lambda,
    type_of_lambda,
)
from glnq.constructions import closure
from glnq.errors import FormatError, OutOfRange, Singular
from glnq.gfq import FqMatrix, enumerate_gl, field_of_order, gl_generators, gl_order, mat_inverse, mat_mul

COUNTS = {(2, 2): 3, (3, 2): 6, (4, 2): 14, (2, 3): 8, (3, 3): 24, (2, 4): 15, (2, 5): 24}


def _random_invertible(n, q, rng):
    F = field_of_order(q)
    while True:
        m = FqMatrix.from_rows(F, [[rng.randrange(q) for _ in range(n)] for _ in range(n)])
        if m.rank() == n:
            return m


def _classes_by_full_conjugation(n, q):
    # every element conjugated by every element
    G = list(enumerate_gl(n, q))
    inv = [mat_inverse(g) for g in G]
    seen, out = set(), []
    for x in G:
        if x in seen:
            continue
        orbit = {mat_mul(mat_mul(g, x), gi) for g, gi in zip(G, inv)}
        seen |= orbit
        out.append(orbit)
    return out


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_class_count_full_conjugation(n, q):
    classes = _classes_by_full_conjugation(n, q)
    assert len(classes) == len(enumerate_lambda(n, q)) == COUNTS[(n, q)]
    sizes = class_sizes(n, q, mode="closed")
    for orbit in classes:
        types = {jordan_type(g) for g in orbit}
        assert len(types) == 1
        assert len(orbit) == sizes[types.pop()]


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (4, 2), (2, 3)])
def test_generators_generate(n, q):
    assert len(closure(gl_generators(n, q))) == gl_order(n, q)


def test_class_count_generator_orbits_gl42():
    classes = conjugacy_classes_bruteforce(4, 2)
    assert len(classes) == 14 == len(enumerate_lambda(4, 2))
    assert sum(len(c) for c in classes) == gl_order(4, 2)
    labels = sorted((format_lambda(jordan_type(next(iter(c)))), len(c)) for c in classes)
    sizes = class_sizes(4, 2, mode="closed")
    assert labels == sorted((format_lambda(lm), s) for lm, s in sizes.items())


@pytest.mark.parametrize("n,q", sorted(COUNTS))
def test_class_counts_and_sizes(n, q):
    labels = enumerate_lambda(n, q)
    assert len(labels) == COUNTS[(n, q)]
    sizes = class_sizes(n, q, mode="closed")
    assert sum(sizes.values()) == gl_order(n, q)
    assert labels[0].is_identity()
    assert labels[0].entries[0][0].is_x_minus_one()


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4)])
def test_closed_form_matches_enumeration(n, q):
    assert class_sizes(n, q, mode="closed") == class_sizes(n, q, mode="enumerate")


@pytest.mark.parametrize("n,q", [(4, 2), (3, 2), (2, 3), (3, 3), (2, 4), (2, 5), (3, 4)])
def test_jordan_round_trip(n, q):
    for lm in enumerate_lambda(n, q):
        rep = class_representative(lm)
        assert rep.rows == n and rep.rank() == n
        assert jordan_type(rep) == lm
        assert parse_lambda(format_lambda(lm), q) == lm
        assert gl_order(n, q) % centralizer_order(lm) == 0


@given(st.sampled_from([(3, 2), (4, 2), (2, 3), (3, 3), (2, 4), (5, 2)]), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_jordan_type_is_conjugation_invariant(nq, seed):
    n, q = nq
    rng = random.Random(seed)
    g = _random_invertible(n, q, rng)
    a = _random_invertible(n, q, rng)
    assert jordan_type(mat_mul(mat_mul(a, g), a.inverse())) == jordan_type(g)
    assert jordan_type(g).norm() == n


@pytest.mark.parametrize("n,q", [(3, 2), (4, 2), (2, 3), (3, 3)])
def test_lookup_table_agrees_with_jordan_type(n, q):
    look = ClassLookup.get(n, q)
    assert look.table is not None
    rng = random.Random(n * 100 + q)
    mats = [_random_invertible(n, q, rng) for _ in range(200)]
    expected = [look.index[jordan_type(m)] for m in mats]
    assert [look.of(m) for m in mats] == expected
    assert list(look.of_stack(_batch.stack(mats))) == expected


def test_lookup_inverse_and_power_maps():
    look = ClassLookup.get(3, 2)
    inv = look.inverse_map()
    assert sorted(inv) == list(range(len(inv)))
    assert inv[look.identity_index] == look.identity_index
    sq = look.power_map(84)  # the exponent of GL(3,2)
    assert set(sq) == {look.identity_index}


def test_lookup_rejects_singular():
    look = ClassLookup.get(2, 2)
    F = field_of_order(2)
    with pytest.raises(Singular):
        look.of_stack(_batch.stack([FqMatrix.from_rows(F, [[1, 1], [1, 1]])]))
    with pytest.raises(Singular):
        jordan_type(FqMatrix.from_rows(F, [[0, 0], [0, 1]]))


def test_types_of_labels():
    # a type is (κ, λ) with |κ| + |λ| = n
    for lm in enumerate_lambda(4, 3):
        kappa, lam = type_of_lambda(lm)
        assert sum(kappa) + sum(lam) == 4


def test_irreducible_counts():
    # necklace counts of monic irreducibles, X excluded
    polys = irreducibles(2, 4)
    assert [sum(1 for f in polys if f.degree == d) for d in (1, 2, 3, 4)] == [1, 1, 2, 3]
    polys = irreducibles(3, 2)
    assert [sum(1 for f in polys if f.degree == d) for d in (1, 2)] == [2, 3]


def test_parse_lambda_errors():
    with pytest.raises(FormatError):
        parse_lambda("11:1;bad", 2)
    with pytest.raises(FormatError):
        parse_lambda("101:1", 2)  # X^2+1 is reducible over F_2
    with pytest.raises(OutOfRange):
        parse_lambda("10:1", 2)


def test_table_covers_only_invertibles():
    look = ClassLookup.get(3, 2)
    valid = np.count_nonzero(look.table >= 0)
    assert valid == gl_order(3, 2)
