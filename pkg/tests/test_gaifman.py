from __future__ import annotations

import itertools
import random

import pytest

from rlocality import catalog
from rlocality.algebra import boolean2, goedel_chain, lukasiewicz_chain, product_algebra
from rlocality.errors import FreeVarMismatch, NotAChain
from rlocality.gaifman import (basic_local_sentence, distinguish, encode_distance, is_prenex, prenex,
                               relativize, theta)
from rlocality.generators import cycle_model, random_model
from rlocality.metric import (ball, distance, induced_submodel, modelling, strict_bottom,
                              threshold_ge, threshold_gt)
from rlocality.semantics import Evaluator, eval_formula, make_model, relabel, standard_expansion
from rlocality.syntax import Signature, atom, parse, to_text

GRAPH = Signature.of(E=2)


def test_theta_base_cases():
    assert to_text(theta(GRAPH, 0)) == "x = y"
    assert theta(Signature.of(Q=0), 1) is None
    assert theta(GRAPH, 2).free == frozenset({"x", "y"})
    with pytest.raises(ValueError):
        theta(GRAPH, -1)


@pytest.mark.parametrize("metric_name", ["models", "ge", "gt"])
def test_near_and_far_on_a_path(metric_name):
    A = lukasiewicz_chain(3)
    half = A.index("1/2")
    metric = {"models": modelling(), "ge": threshold_ge(half), "gt": threshold_gt(A.flags.bot)}[metric_name]
    m = make_model(A, GRAPH, 5, {"E": {(0, 1): "1", (1, 2): "1", (3, 2): "1", (3, 4): "1/2"}})
    ev = Evaluator(standard_expansion(m))
    enc = encode_distance(A, metric, GRAPH)
    for r in range(4):
        near, far = enc.near("x", "y", r), enc.far("x", "y", r)
        for x, y in itertools.product(m.domain, repeat=2):
            within = distance(m, metric, x, y) <= r
            assert ev.models(near, {"x": x, "y": y}) == within
            assert ev.models(far, {"x": x, "y": y}) != within


def test_tau_complements_satisfaction():
    A = lukasiewicz_chain(4)
    enc = encode_distance(A, modelling(), Signature.of(P=1))
    m = standard_expansion(make_model(A, Signature.of(P=1), 4, {"P": [0, 1, 2, 3]}))
    f = atom("P", "x")
    for d in m.domain:
        assert Evaluator(m).models(enc.tau(f), {"x": d}) != Evaluator(m).models(f, {"x": d})


def test_encoding_requires_a_chain():
    with pytest.raises(NotAChain):
        encode_distance(product_algebra(boolean2(), boolean2()), modelling(), GRAPH)


@pytest.mark.parametrize("text", [
    "exists x P(x) \\ forall y P(y)",
    "(forall x P(x)) * exists x (P(x) & Q)",
    "exists y P(y) / P(x)",
    "forall x (P(x) | exists x (P(x) \\ Q))",
])
def test_prenex_is_prenex_and_preserves_values(text):
    sig = Signature.of(P=1, Q=0)
    A = goedel_chain(4)
    f = parse(text, sig)
    g = prenex(f)
    assert is_prenex(g)
    assert g.free == f.free
    rng = random.Random(0)
    for _ in range(30):
        m = random_model(rng, A, sig, rng.randint(1, 3), 0.7, None)
        for d in m.domain:
            env = {v: d for v in f.free}
            assert eval_formula(m, f, env) == eval_formula(m, g, env)


def test_relativization_limits_quantifiers():
    A = goedel_chain(3)
    m = cycle_model(A, 8, directed=True)
    enc = encode_distance(A, strict_bottom(A), GRAPH)
    f = parse("forall y exists z E(y, z)", GRAPH)
    ev = Evaluator(standard_expansion(m))
    # the successor of the last element of the ball lies outside it
    rel = relativize(f, 1, ["x"], enc)
    assert not ev.models(rel, {"x": 0})
    assert ev.models(relativize(f, 4, ["x"], enc), {"x": 0})


def _scattered(m, metric, psi_holds, r, s):
    """Brute force: s points pairwise more than 2r apart, each satisfying psi locally."""
    good = [d for d in m.domain if psi_holds(d)]
    for pts in itertools.product(good, repeat=s):
        if all(distance(m, metric, a, b) > 2 * r for a, b in itertools.permutations(pts, 2)):
            return True
    return False


def test_basic_local_sentence_against_brute_force():
    A = lukasiewicz_chain(3)
    metric = strict_bottom(A)
    enc = encode_distance(A, metric, GRAPH)
    psi = parse("exists y (E(x, y) & E(y, x))", GRAPH)
    rng = random.Random(8)
    for _ in range(25):
        m = random_model(rng, A, GRAPH, rng.randint(1, 5), 0.35, None)
        ev = Evaluator(standard_expansion(m))
        for r, s in [(0, 1), (1, 1), (1, 2), (0, 2)]:
            local = relativize(psi, r, ["x"], enc)
            sent = basic_local_sentence(psi, r, s, enc)
            expect = _scattered(m, metric, lambda d: ev.models(local, {"x": d}), r, s)
            assert ev.models(sent) == expect


def test_basic_local_sentence_needs_one_free_variable():
    A = goedel_chain(3)
    enc = encode_distance(A, strict_bottom(A), GRAPH)
    with pytest.raises(FreeVarMismatch):
        basic_local_sentence(parse("E(x, y)", GRAPH), 1, 1, enc)


def test_relativized_formula_is_local():
    # relativized values depend only on the ball around the anchor
    A = goedel_chain(3)
    metric = strict_bottom(A)
    enc = encode_distance(A, metric, GRAPH)
    f = parse("exists y (E(x, y) & forall z (E(y, z) \\ E(z, y)))", GRAPH)
    rel = relativize(f, 1, ["x"], enc)
    rng = random.Random(2)
    for _ in range(20):
        m = random_model(rng, A, GRAPH, 5, 0.3, None)
        b = sorted(ball(m, metric, (0,), 1))
        sub = induced_submodel(m, b)
        assert Evaluator(standard_expansion(m)).models(rel, {"x": 0}) == \
            Evaluator(standard_expansion(sub)).models(f, {"x": b.index(0)})


def test_distinguish_two_point_pair():
    pair = catalog.two_point_asymmetry()
    res = distinguish(pair.m, pair.n, radius=1, rank=1)
    assert res.found is not None
    d = res.found
    assert d.holds_in_first != d.holds_in_second
    assert (d.radius, d.rank) <= (1, 1)
    assert res.to_document()["found"]["sentence"] == str(d.sentence)


def test_distinguish_finds_nothing_between_isomorphic_models():
    A = goedel_chain(3)
    rng = random.Random(6)
    m = random_model(rng, A, GRAPH, 3, 0.5, None)
    n = relabel(m, [2, 0, 1])
    assert distinguish(m, n, radius=1, rank=1).found is None
    assert distinguish(m, n, radius=1, rank=1, vocabulary="plain", plain_depth=1).found is None


def test_distinguish_rejects_unknown_vocabulary():
    pair = catalog.two_point_asymmetry()
    with pytest.raises(ValueError):
        distinguish(pair.m, pair.n, 1, 1, vocabulary="other")
