from __future__ import annotations

import itertools
import json

import pytest

from rlocality.algebra import goedel_chain, lukasiewicz_chain
from rlocality.documents import dumps, load_model, model_from_document, resolve_algebra
from rlocality.errors import ModelError
from rlocality.games import k_equivalent
from rlocality.generators import (GRAPH, block_shuffle_pair, cycle_model, disjoint_union, hanf_pairs,
                                  necklace, necklace_pair, random_models, swap_pairs, threshold_pair)
from rlocality.hanf import hanf_check, swap_check
from rlocality.semantics import find_isomorphism, make_model
from rlocality.syntax import Signature


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_resolve_algebra_forms(tmp_path):
    assert resolve_algebra("goedel:3") == goedel_chain(3)
    assert resolve_algebra({"builtin": "lukasiewicz", "n": 4}) == lukasiewicz_chain(4)
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(goedel_chain(4).to_document()))
    assert resolve_algebra(str(path)) == goedel_chain(4)
    with pytest.raises(ModelError):
        resolve_algebra(3)


def test_model_round_trip(tmp_path):
    A = lukasiewicz_chain(3)
    sig = Signature.of(constants=["c"], E=2, P=1)
    m = make_model(A, sig, 3, {"E": {(0, 1): "1/2"}, "P": ["1", "0", "1/2"]}, {"c": 2},
                   names=["a", "b", "d"])
    path = tmp_path / "m.json"
    path.write_text(dumps(m.to_document()))
    back = load_model(path)
    assert back.relations == m.relations and back.constants == m.constants
    assert back.names == m.names and back.algebra == A


def test_sparse_relations_with_names():
    doc = {
        "algebra": "goedel:3",
        "signature": {"relations": {"E": 2}, "constants": ["c"]},
        "names": ["s", "t"],
        "relations": {"E": {"default": "1/2", "tuples": [["s", "t", "1"]]}},
        "constants": {"c": "t"},
    }
    m = model_from_document(doc)
    A = m.algebra
    assert [A.label(v) for v in m.relations["E"]] == ["1/2", "1", "1/2", "1/2"]
    assert m.constants == {"c": 1}


def test_bad_model_documents():
    with pytest.raises(ModelError):
        model_from_document({"algebra": "goedel:3", "signature": {"relations": {"E": 2}}})
    with pytest.raises(ModelError):
        model_from_document({"algebra": "goedel:3", "signature": {"relations": {"E": 2}},
                             "domain_size": 1, "relations": {"E": {"tuples": [["zz", 0, "1"]]}}})


# -- generators ----------------------------------------------------------------


def test_disjoint_union_and_necklace():
    A = goedel_chain(3)
    u = disjoint_union([cycle_model(A, 3), cycle_model(A, 2)])
    assert u.domain_size == 5 and u.value("E", (0, 3)) == A.flags.bot
    n = necklace(A, [2, 3], [A.unit])
    assert n.value("E", (2, 3)) == A.unit and n.value("E", (4, 2)) == A.unit


def test_block_shuffle_pairs_are_isomorphic_with_mapped_anchor():
    A = lukasiewicz_chain(3)
    for seed in range(30):
        p = block_shuffle_pair(A, seed)
        (a,), (b,) = p.anchor
        assert find_isomorphism(p.m, p.n, [(a, b)]) is not None


def test_threshold_pairs_meet_the_premise():
    A = lukasiewicz_chain(3)
    for seed in range(10):
        p = threshold_pair(A, seed, 1)
        assert hanf_check(p.m, p.n, 1).premise


def test_anchored_necklaces_are_swap_related():
    A = goedel_chain(3)
    for seed in range(6):
        p = necklace_pair(A, seed, 3, anchored=True)
        assert swap_check(p.m, p.n, 3, p.anchor)
        assert k_equivalent(p.m, p.n, 1, p.anchor).result


def test_generators_replay_from_seeds():
    A = lukasiewicz_chain(3)
    a = [p.m.to_document() for p in itertools.islice(hanf_pairs(A, 9, 1), 6)]
    b = [p.m.to_document() for p in itertools.islice(hanf_pairs(A, 9, 1), 6)]
    assert a == b
    labels = [p.label for p in itertools.islice(swap_pairs(A, 0, 1, necklace_every=2), 4)]
    assert labels == ["block-shuffle", "necklace", "block-shuffle", "necklace"]
    seeds = [g.seed for g in itertools.islice(random_models(A, 40), 3)]
    assert seeds == [40, 41, 42]
    assert all(g.model.sig == GRAPH for g in itertools.islice(random_models(A, 40), 3))
