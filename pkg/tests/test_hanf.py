from __future__ import annotations

import itertools

import pytest

from rlocality import catalog
from rlocality.algebra import goedel_chain, lukasiewicz_chain, product_algebra, boolean2
from rlocality.errors import GeneratorExhausted, MetricContractError
from rlocality.generators import block_shuffle_pair, cycle_model, disjoint_union, swap_pairs
from rlocality.hanf import (GeneratedPair, hanf_check, hanf_radii, name_anchor, swap_check,
                            verify_hanf_theorem)
from rlocality.metric import modelling
from rlocality.semantics import make_model
from rlocality.syntax import Signature


def test_radii():
    assert hanf_radii(3) == [0, 1, 4, 13]
    assert hanf_radii(0) == [0]
    with pytest.raises(ValueError):
        hanf_radii(-1)


def test_disjoint_cycles_satisfy_the_premise():
    A = lukasiewicz_chain(3)
    m = disjoint_union([cycle_model(A, 6), cycle_model(A, 6)])
    n = cycle_model(A, 12)
    report = hanf_check(m, n, 1)
    assert report.premise and report.in_contract
    assert report.e == 3
    assert {row.verdict for row in report.rows} == {"equal-counts"}


def test_counts_differ_below_threshold():
    A = lukasiewicz_chain(3)
    m = cycle_model(A, 3)
    n = cycle_model(A, 4)
    report = hanf_check(m, n, 1)
    assert not report.premise
    assert any(row.verdict == "fail" for row in report.rows)
    doc = report.to_document()
    assert doc["k"] == 1 and doc["radii"] == [0, 1]


def test_contract_is_enforced():
    pair = catalog.two_point_asymmetry()
    with pytest.raises(MetricContractError):
        hanf_check(pair.m, pair.n, 2, modelling())
    with pytest.warns(UserWarning):
        report = hanf_check(pair.m, pair.n, 2, modelling(), override=True)
    assert report.premise and not report.in_contract
    P = product_algebra(boolean2(), boolean2())
    m = make_model(P, Signature.of(E=2), 1)
    with pytest.raises(MetricContractError):
        hanf_check(m, m, 1)


def test_strict_bottom_metric_rejects_the_asymmetric_pair():
    pair = catalog.two_point_asymmetry()
    assert not hanf_check(pair.m, pair.n, 2).premise


def test_swap_check_with_anchors():
    A = goedel_chain(3)
    m = cycle_model(A, 8)
    assert swap_check(m, m, 2, ((0,), (3,)))
    n = disjoint_union([cycle_model(A, 4), cycle_model(A, 4)])
    assert not swap_check(m, n, 2)
    assert swap_check(m, n, 1)


def test_name_anchor_adds_fresh_constants():
    A = goedel_chain(3)
    m = name_anchor(cycle_model(A, 3), (1, 2))
    assert m.sig.constants == ("c1", "c2")
    assert m.constants == {"c1": 1, "c2": 2}


def test_harness_reports_seeds_and_no_violations():
    A = lukasiewicz_chain(3)
    pairs = (block_shuffle_pair(A, s) for s in itertools.count(100))
    report = verify_hanf_theorem(pairs, 1, 10)
    assert report.ok and report.seeds == list(range(100, 110))
    assert report.premise_true == 10
    swap = verify_hanf_theorem(swap_pairs(A, 3, 0), 0, 5, mode="swap")
    assert swap.ok and swap.in_contract


def test_harness_records_violations():
    # the asymmetric pair satisfies the premise under the modelling metric
    pair = catalog.two_point_asymmetry()
    gp = GeneratedPair(pair.m, pair.n, 42, "asymmetry")
    report = verify_hanf_theorem(iter([gp]), 2, 1, metric=modelling(), override=True)
    assert not report.ok and not report.in_contract
    (v,) = report.violations
    assert v["seed"] == 42 and v["m"]["domain_size"] == 2


def test_harness_rejects_short_generators():
    with pytest.raises(GeneratorExhausted):
        verify_hanf_theorem(iter([]), 1, 1)
    with pytest.raises(ValueError):
        verify_hanf_theorem(iter([]), 1, 1, mode="other")
