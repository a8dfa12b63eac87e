"""Queries, their definability modes and locality tests."""

from __future__ import annotations

import itertools
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import FreeVarMismatch, UnboundedAlgebra
from .hanf import GeneratedPair, swap_check
from .metric import GaifmanMetric, gaifman_graph, sphere_type_index, strict_bottom
from .semantics import Evaluator, Model, check_compatible, standard_expansion
from .syntax import Formula


@dataclass(frozen=True)
class Query:
    name: str
    arity: int
    evaluator: Callable[[Model, tuple], bool] = field(repr=False)

    def holds(self, m: Model, tup: Sequence[int] = ()) -> bool:
        tup = tuple(tup)
        if len(tup) != self.arity:
            raise ValueError(f"{self.name} expects {self.arity}-tuples")
        return self.evaluator(m, tup)

    def answers(self, m: Model) -> frozenset[tuple[int, ...]]:
        """All tuples in the query; for arity 0 this is ``{()}`` (true) or empty."""
        return frozenset(t for t in itertools.product(m.domain, repeat=self.arity)
                         if self.evaluator(m, t))

    def value(self, m: Model) -> int:
        """0-ary queries as 1 or 0."""
        if self.arity != 0:
            raise ValueError("only 0-ary queries have a truth value")
        return 1 if self.evaluator(m, ()) else 0


def _resolve_mode(mode, m: Model) -> tuple[str, int | None]:
    if isinstance(mode, str):
        if mode == "models":
            return "models", None
        kind, sep, label = mode.partition(":")
        if not sep:
            raise ValueError(f"cannot read query mode {mode!r}")
        return kind, m.algebra.index(label)
    kind, a = mode
    return kind, m.algebra.index(a)


def definable_query(f: Formula, mode="models", variables: Sequence[str] | None = None,
                    name: str | None = None) -> Query:
    """Query defined by ``f`` on standard expansions.

    ``mode`` is ``"models"`` (value above the unit), ``"ge:LABEL"`` or
    ``"gt:LABEL"`` (or a ``(kind, element)`` pair).  Answer tuples list the
    free variables in ``variables`` order (sorted by default).
    """
    if variables is None:
        variables = list(f.free_order)
    variables = list(variables)
    if set(variables) != set(f.free) or len(set(variables)) != len(variables):
        raise FreeVarMismatch(f"variables {variables} do not match free variables {sorted(f.free)}")
    if isinstance(mode, str) and mode != "models" and not mode.startswith(("ge:", "gt:")):
        raise ValueError(f"cannot read query mode {mode!r}")
    if not isinstance(mode, str) and mode[0] not in ("ge", "gt"):
        raise ValueError(f"cannot read query mode {mode!r}")

    def evaluate(m: Model, tup: tuple) -> bool:
        kind, a = _resolve_mode(mode, m)
        v = Evaluator(standard_expansion(m)).value(f, dict(zip(variables, tup)))
        A = m.algebra
        if kind == "models":
            return A.is_designated(v)
        if kind == "ge":
            return A.leq(a, v)
        return A.lt(a, v)

    label = name or f"{mode}: {f}"
    return Query(label, len(variables), evaluate)


def _bot_connected(m: Model, _: tuple) -> bool:
    if m.algebra.flags.bot is None:
        raise UnboundedAlgebra("bottom connectivity needs a bottom element")
    graph = gaifman_graph(m, strict_bottom(m.algebra))
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in graph[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == m.domain_size


def transitive_closure_query(t) -> Query:
    """Pairs ``(m, n)`` joined by a directed path (possibly empty) whose
    edges, in some binary relation, all have value at least ``t``."""

    def evaluate(m: Model, tup: tuple) -> bool:
        A = m.algebra
        thr = A.index(t)
        src, dst = tup
        binary = [r for r, a in m.sig.relations if a == 2]
        succ = [[b for b in m.domain if any(A.leq(thr, m.value(r, (a, b))) for r in binary)]
                for a in m.domain]
        seen = {src}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return dst in seen

    return Query(f"t_transitive_closure({t})", 2, evaluate)


def builtin_query(name: str, t=None) -> Query:
    if name == "bot_connectivity":
        return Query("bot_connectivity", 0, _bot_connected)
    if name == "t_transitive_closure":
        if t is None:
            raise ValueError("t_transitive_closure needs a threshold")
        return transitive_closure_query(t)
    raise ValueError(f"unknown built-in query {name!r}")


def constant_query(value: bool = True, arity: int = 0) -> Query:
    return Query(f"constant({value})", arity, lambda m, tup: value)


# -- locality tests --------------------------------------------------------------


@dataclass
class LocalityReport:
    query: str
    radius: int
    trials: int
    seeds: list[int] = field(default_factory=list)
    comparisons: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        return {"query": self.query, "radius": self.radius, "trials": self.trials,
                "seeds": self.seeds, "comparisons": self.comparisons,
                "violations": self.violations}


def test_hanf_local(q: Query, r: int, pairs: Iterable[GeneratedPair], trials: int,
                    metric: GaifmanMetric | None = None) -> LocalityReport:
    """Compare query answers on every anchored pair related by equal sphere
    type counts at radius ``r`` (anchors are named by fresh constants)."""
    report = LocalityReport(q.name, r, trials)
    it = iter(pairs)
    for _ in range(trials):
        pair = next(it)
        m, n = pair.m, pair.n
        check_compatible(m, n)
        if metric is None:
            if m.algebra.flags.bot is None:
                raise UnboundedAlgebra("the strict bottom metric needs a bottom element")
        report.seeds.append(pair.seed)
        for mt in itertools.product(m.domain, repeat=q.arity):
            for nt in itertools.product(n.domain, repeat=q.arity):
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    related = swap_check(m, n, r, (mt, nt), metric, override=metric is not None)
                if not related:
                    continue
                report.comparisons += 1
                a, b = q.holds(m, mt), q.holds(n, nt)
                if a != b:
                    report.violations.append({
                        "seed": pair.seed, "label": pair.label,
                        "tuples": [list(mt), list(nt)], "verdicts": [a, b],
                        "m": m.to_document(), "n": n.to_document(),
                    })
    return report


test_hanf_local.__test__ = False


@dataclass
class GeneratedModel:
    model: Model
    seed: int
    label: str = ""


def test_gaifman_local(q: Query, r: int, models: Iterable[GeneratedModel], trials: int,
                       metric: GaifmanMetric | None = None) -> LocalityReport:
    """Within each model, compare answers on tuples with isomorphic pointed
    radius-``r`` spheres."""
    if q.arity < 1:
        raise ValueError("Gaifman locality concerns queries of positive arity")
    report = LocalityReport(q.name, r, trials)
    it = iter(models)
    for _ in range(trials):
        gm = next(it)
        m = gm.model
        met = metric if metric is not None else strict_bottom(m.algebra)
        report.seeds.append(gm.seed)
        idx = sphere_type_index([m], met, r, q.arity)
        by_class: dict[int, list[tuple[int, ...]]] = {}
        for (_, tup), cid in idx.members.items():
            by_class.setdefault(cid, []).append(tup)
        for cid, tups in sorted(by_class.items()):
            verdicts = {t: q.holds(m, t) for t in tups}
            base = tups[0]
            for t in tups[1:]:
                report.comparisons += 1
                if verdicts[t] != verdicts[base]:
                    report.violations.append({
                        "seed": gm.seed, "label": gm.label, "tuples": [list(base), list(t)],
                        "verdicts": [verdicts[base], verdicts[t]], "model": m.to_document(),
                    })
    return report


test_gaifman_local.__test__ = False
