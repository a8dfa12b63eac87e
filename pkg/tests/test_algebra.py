from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlocality.algebra import (algebra_from_document, boolean2, builtin_algebra, goedel_chain,
                               heyting_from_order, lukasiewicz_chain, product_algebra,
                               validate_algebra)
from rlocality.errors import (AlgebraError, LatticeViolation, MonoidViolation, ResiduationViolation,
                              SizeTooSmall, TrivialCarrier)


def _value(A, i):
    return Fraction(A.label(i))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_lukasiewicz_operations_match_arithmetic(n):
    A = lukasiewicz_chain(n)
    for a, b in itertools.product(A.elements, repeat=2):
        x, y = _value(A, a), _value(A, b)
        assert _value(A, A.fuse(a, b)) == max(Fraction(0), x + y - 1)
        assert _value(A, A.lres(a, b)) == min(Fraction(1), 1 - x + y)
        assert _value(A, A.rres(b, a)) == min(Fraction(1), 1 - x + y)
        assert _value(A, A.meet(a, b)) == min(x, y)
        assert _value(A, A.join(a, b)) == max(x, y)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_goedel_operations_match_definition(n):
    A = goedel_chain(n)
    for a, b in itertools.product(A.elements, repeat=2):
        x, y = _value(A, a), _value(A, b)
        assert _value(A, A.fuse(a, b)) == min(x, y)
        assert _value(A, A.lres(a, b)) == (1 if x <= y else y)


def test_labels_and_lookup():
    A = goedel_chain(5)
    assert A.labels == ("0", "1/4", "1/2", "3/4", "1")
    assert A.index("3/4") == 3 and A.index(3) == 3
    assert A.label(A.unit) == "1"
    assert A.is_designated(A.unit) and not A.is_designated(A.index("3/4"))
    with pytest.raises(AlgebraError):
        A.index("2/3")


def test_boolean_flags():
    B = boolean2()
    fl = B.flags
    assert (fl.bot, fl.top, fl.co_atom, fl.is_chain, fl.well_connected) == (0, 1, 0, True, True)


def test_zero_divisors():
    assert lukasiewicz_chain(3).flags.has_zero_divisors
    assert not goedel_chain(3).flags.has_zero_divisors


def test_product_is_not_well_connected_and_has_no_co_atom():
    P = product_algebra(boolean2(), boolean2())
    fl = P.flags
    assert P.carrier_size == 4
    assert not fl.is_chain
    assert not fl.well_connected
    assert fl.co_atom is None
    assert fl.bounded


def test_heyting_from_distributive_order():
    # the four-element Boolean lattice as a Heyting algebra
    order = {(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)}
    H = heyting_from_order(["0", "a", "b", "1"], lambda i, j: i == j or (i, j) in order)
    assert H.lres(1, 2) == 2  # a -> b = b in the Boolean lattice
    assert H.lres(1, 0) == 2


def test_heyting_rejects_non_distributive_lattice():
    # the diamond M3
    order = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)}
    with pytest.raises(AlgebraError):
        heyting_from_order(["0", "a", "b", "c", "1"], lambda i, j: i == j or (i, j) in order)


def test_small_carriers_rejected():
    with pytest.raises(SizeTooSmall):
        lukasiewicz_chain(1)
    with pytest.raises(TrivialCarrier):
        validate_algebra(["0"], 0, [[0]], [[0]], [[0]], [[0]], [[0]])


def _tables(A):
    return [[list(r) for r in t] for t in (A.meet_table, A.join_table, A.fuse_table,
                                           A.lres_table, A.rres_table)]


def test_violation_kinds():
    A = goedel_chain(3)
    t = _tables(A)
    t[0][0][1] = 1  # meet no longer commutative
    with pytest.raises(LatticeViolation) as info:
        validate_algebra(A.labels, A.unit, *t)
    assert set(info.value.witness) <= {0, 1, 2}
    with pytest.raises(MonoidViolation):
        validate_algebra(A.labels, 1, *_tables(A))
    t = _tables(A)
    t[3][2][0] = 1
    with pytest.raises(ResiduationViolation):
        validate_algebra(A.labels, A.unit, *t)


def test_document_round_trip():
    for A in (lukasiewicz_chain(4), goedel_chain(3), boolean2()):
        assert algebra_from_document(A.to_document()) == A
    assert algebra_from_document({"builtin": "goedel", "n": 3}) == goedel_chain(3)
    assert builtin_algebra("L", 4) == lukasiewicz_chain(4)
    assert builtin_algebra("boolean") == boolean2()
    with pytest.raises(AlgebraError):
        algebra_from_document({"labels": ["0", "1"]})


def test_custom_labels():
    A = lukasiewicz_chain(3, labels=["lo", "mid", "hi"])
    assert A.index("mid") == 1 and A.label(A.flags.co_atom) == "mid"


ALGEBRAS = [lukasiewicz_chain(4), goedel_chain(4), product_algebra(boolean2(), lukasiewicz_chain(3))]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(ALGEBRAS), st.data())
def test_residuation_and_monoid_laws(A, data):
    el = st.integers(0, A.carrier_size - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert A.leq(A.fuse(a, b), c) == A.leq(b, A.lres(a, c)) == A.leq(a, A.rres(c, b))
    assert A.fuse(A.fuse(a, b), c) == A.fuse(a, A.fuse(b, c))
    assert A.fuse(a, A.unit) == a == A.fuse(A.unit, a)
    assert A.meet(a, A.join(a, b)) == a
    # fusion is monotone and distributes over joins
    assert A.fuse(a, A.join(b, c)) == A.join(A.fuse(a, b), A.fuse(a, c))


def test_meet_all_and_join_all_on_empty():
    A = lukasiewicz_chain(3)
    assert A.meet_all([]) == A.flags.top
    assert A.join_all([]) == A.flags.bot
