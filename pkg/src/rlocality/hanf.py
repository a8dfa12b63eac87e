"""Hanf-condition checking and empirical harnesses for the Hanf theorem."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import GeneratorExhausted, MetricContractError
from .games import k_equivalent
from .metric import GaifmanMetric, ball, center_constant_names, sphere_type_index, strict_bottom
from .semantics import Model, check_compatible


def hanf_radii(k: int) -> list[int]:
    if k < 0:
        raise ValueError("k must be non-negative")
    return [(3 ** j - 1) // 2 for j in range(k + 1)]


@dataclass
class HanfRow:
    radius: int
    type_id: int
    sphere_size: int
    counts: tuple[int, int]
    verdict: str  # "equal-counts", "both-large" or "fail"


@dataclass
class HanfReport:
    k: int
    radii: list[int]
    e: int
    metric: str
    rows: list[HanfRow]
    premise: bool
    in_contract: bool = True
    notes: list[str] = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "k": self.k, "radii": self.radii, "e": self.e, "metric": self.metric,
            "premise": self.premise, "in_contract": self.in_contract, "notes": self.notes,
            "rows": [{"radius": r.radius, "type": r.type_id, "sphere_size": r.sphere_size,
                      "counts": list(r.counts), "verdict": r.verdict} for r in self.rows],
        }


def _contract(m: Model, metric: GaifmanMetric | None, override: bool) -> tuple[GaifmanMetric, list[str]]:
    """Resolve the metric; anything but the strict bottom metric over a
    well-connected algebra needs ``override``."""
    notes = []
    if metric is None:
        metric = strict_bottom(m.algebra)
    elif m.algebra.flags.bot is None or metric != strict_bottom(m.algebra):
        notes.append(f"metric {metric.describe(m.algebra)} is not the strict bottom metric")
    if not m.algebra.flags.well_connected:
        notes.append("the algebra is not well-connected")
    if notes and not override:
        raise MetricContractError("; ".join(notes) + " (pass override=True to proceed)")
    for note in notes:
        warnings.warn(f"out of contract: {note}", stacklevel=3)
    return metric, notes


def hanf_check(m: Model, n: Model, k: int, metric: GaifmanMetric | None = None,
               override: bool = False) -> HanfReport:
    check_compatible(m, n)
    metric, notes = _contract(m, metric, override)
    radii = hanf_radii(k)
    rk = radii[-1]
    e = max(len(ball(x, metric, (d,), rk)) for x in (m, n) for d in x.domain)
    rows = []
    for r in range(rk + 1):
        idx = sphere_type_index([m, n], metric, r, 1)
        for cid, (cm, cn) in enumerate(idx.counts):
            if cm == cn:
                verdict = "equal-counts"
            elif cm > k * e and cn > k * e:
                verdict = "both-large"
            else:
                verdict = "fail"
            rows.append(HanfRow(r, cid, idx.sizes[cid], (cm, cn), verdict))
    premise = all(row.verdict != "fail" for row in rows)
    return HanfReport(k, radii, e, metric.describe(m.algebra), rows, premise, not notes, notes)


def name_anchor(m: Model, anchor: Sequence[int]) -> Model:
    """Expansion of ``m`` by fresh constants naming ``anchor``."""
    names = center_constant_names(m.sig, len(anchor))
    consts = dict(m.constants)
    consts.update(zip(names, anchor))
    return m.replace(sig=m.sig.with_constants(names), constants=consts)


def swap_check(m: Model, n: Model, r: int, anchor: tuple[Sequence[int], Sequence[int]] | None = None,
               metric: GaifmanMetric | None = None, override: bool = False) -> bool:
    """Equal counts of every radius-``r`` sphere type (anchors become constants)."""
    check_compatible(m, n)
    metric, _ = _contract(m, metric, override)
    if anchor is not None:
        if len(anchor[0]) != len(anchor[1]):
            raise ValueError("anchor tuples must have equal length")
        m, n = name_anchor(m, anchor[0]), name_anchor(n, anchor[1])
    if m.domain_size != n.domain_size:
        return False
    idx = sphere_type_index([m, n], metric, r, 1)
    return all(cm == cn for cm, cn in idx.counts)


@dataclass
class GeneratedPair:
    m: Model
    n: Model
    seed: int
    label: str = ""
    anchor: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())


@dataclass
class HarnessReport:
    mode: str
    k: int
    trials: int
    premise_true: int = 0
    violations: list[dict] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    in_contract: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        return {"mode": self.mode, "k": self.k, "trials": self.trials,
                "premise_true": self.premise_true, "violations": self.violations,
                "seeds": self.seeds, "in_contract": self.in_contract, "notes": self.notes}


def verify_hanf_theorem(pairs: Iterable[GeneratedPair], k: int, trials: int,
                        mode: str = "hanf", metric: GaifmanMetric | None = None,
                        override: bool = False) -> HarnessReport:
    """Check the theorem's conclusion on every generated pair whose premise holds.

    ``mode="hanf"`` uses the full premise; ``mode="swap"`` uses equal sphere
    type counts at radius ``3**k`` around the generated anchors.  Each
    violation records the seed and both models.
    """
    if mode not in ("hanf", "swap"):
        raise ValueError("mode must be 'hanf' or 'swap'")
    report = HarnessReport(mode, k, trials)
    it: Iterator[GeneratedPair] = iter(pairs)
    for _ in range(trials):
        try:
            pair = next(it)
        except StopIteration:
            raise GeneratorExhausted(f"generator stopped after {len(report.seeds)} pairs") from None
        report.seeds.append(pair.seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if mode == "hanf":
                hr = hanf_check(pair.m, pair.n, k, metric, override)
                premise, contract, notes = hr.premise, hr.in_contract, hr.notes
            else:
                _, notes = _contract(pair.m, metric, override)
                premise = swap_check(pair.m, pair.n, 3 ** k, pair.anchor, metric, override)
                contract = not notes
        if not contract:
            report.in_contract = False
            for note in notes:
                if note not in report.notes:
                    report.notes.append(note)
        if not premise:
            continue
        report.premise_true += 1
        anchor = pair.anchor if mode == "swap" else None
        if not k_equivalent(pair.m, pair.n, k, anchor).result:
            report.violations.append({
                "seed": pair.seed, "label": pair.label, "anchor": [list(a) for a in pair.anchor],
                "m": pair.m.to_document(), "n": pair.n.to_document(),
            })
    return report
