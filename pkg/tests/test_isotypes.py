from __future__ import annotations

import itertools
import random

import pytest

from rlocality.algebra import goedel_chain, lukasiewicz_chain
from rlocality.errors import AnchorOutOfRange, ArityMismatch, BudgetExceeded
from rlocality.games import k_equivalent
from rlocality.generators import random_model
from rlocality.isotypes import atomic_diagram, build_isotype, realizes
from rlocality.semantics import make_model, models, standard_expansion
from rlocality.syntax import Signature

SIG = Signature.of(E=2, P=1)


def test_every_model_realizes_its_own_type():
    A = lukasiewicz_chain(3)
    rng = random.Random(1)
    for _ in range(20):
        m = random_model(rng, A, SIG, rng.randint(1, 3), 0.5, None)
        for k in range(3):
            t = build_isotype(m, (), k)
            assert realizes(m, (), t)
        for d in m.domain:
            assert realizes(m, (d,), build_isotype(m, (d,), 1))


def test_realization_coincides_with_the_game():
    A = goedel_chain(3)
    rng = random.Random(2)
    pool = [random_model(rng, A, SIG, rng.randint(1, 3), 0.5, None) for _ in range(25)]
    for m, n in itertools.combinations(pool, 2):
        for k in range(3):
            game = k_equivalent(m, n, k).result
            assert realizes(n, (), build_isotype(m, (), k)) == game
            assert realizes(m, (), build_isotype(n, (), k)) == game


def test_anchored_types_match_anchored_game():
    A = lukasiewicz_chain(3)
    rng = random.Random(4)
    for _ in range(15):
        m = random_model(rng, A, SIG, 3, 0.6, None)
        n = random_model(rng, A, SIG, 3, 0.6, None)
        t = build_isotype(m, (0,), 1)
        for b in n.domain:
            assert realizes(n, (b,), t) == k_equivalent(m, n, 1, ((0,), (b,))).result


def test_equivalent_models_share_the_interned_formula():
    A = goedel_chain(3)
    sig = Signature.of(E=2)
    m = make_model(A, sig, 2, {"E": {(0, 1): "1"}})
    n = make_model(A, sig, 2, {"E": {(1, 0): "1"}})
    assert build_isotype(m, (), 2).formula is build_isotype(n, (), 2).formula


def test_atomic_diagram_pins_values():
    A = lukasiewicz_chain(3)
    m = make_model(A, Signature.of(P=1), 2, {"P": ["1/2", "1"]})
    diag = atomic_diagram(m, (0,))
    assert models(standard_expansion(m), diag, {"v1": 0})
    assert not models(standard_expansion(m), diag, {"v1": 1})


def test_isotype_errors():
    A = goedel_chain(3)
    m = make_model(A, SIG, 3)
    with pytest.raises(AnchorOutOfRange):
        build_isotype(m, (3,), 1)
    with pytest.raises(ArityMismatch):
        realizes(m, (0, 1), build_isotype(m, (0,), 1))
    with pytest.raises(BudgetExceeded):
        build_isotype(m, (), 3, node_cap=100)
