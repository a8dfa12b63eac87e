"""k-isomorphism-type formulas over the standard-expansion language."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import AnchorOutOfRange, ArityMismatch, BudgetExceeded, ModelError
from .semantics import Evaluator, Model, standard_expansion
from .syntax import Const, Formula, Var, atom, eq, exists, forall, join, lres, meet, rres, truth

DEFAULT_NODE_CAP = 2_000_000


def anchor_variables(count: int) -> list[str]:
    return [f"v{i}" for i in range(1, count + 1)]


@dataclass(frozen=True, eq=False)
class IsotypeFormula:
    formula: Formula
    model: Model
    anchor: tuple[int, ...]
    k: int

    @property
    def variables(self) -> list[str]:
        return anchor_variables(len(self.anchor))

    def __str__(self) -> str:
        return str(self.formula)


def _pin(f_atom: Formula, value: int, labels) -> Formula:
    c = truth(value, labels[value])
    return meet(lres(f_atom, c), rres(f_atom, c))


def atomic_diagram(m: Model, anchor: Sequence[int]) -> Formula:
    """Rank-0 type: pins the value of every atomic formula whose terms are
    anchor variables or constant symbols."""
    labels = m.algebra.labels
    names = anchor_variables(len(anchor))
    terms = [(Var(v), a) for v, a in zip(names, anchor)]
    terms += [(Const(c), m.constants[c]) for c in m.sig.constants]
    parts = []
    for rel, arity in m.sig.relations:
        for combo in itertools.product(terms, repeat=arity):
            args = [t for t, _ in combo]
            parts.append(_pin(atom(rel, *args), m.value(rel, [d for _, d in combo]), labels))
    for (t1, d1), (t2, d2) in itertools.combinations(terms, 2):
        val = m.algebra.unit if d1 == d2 else m.eq_gap
        parts.append(_pin(eq(t1, t2), val, labels))
    return meet(*parts)


def _estimate_nodes(m: Model, s: int, k: int) -> int:
    n = m.domain_size
    width = s + k + len(m.sig.constants)
    atoms = sum(width ** a for _, a in m.sig.relations) + width * width
    total = 0
    for j in range(k + 1):
        count = n ** (s + k - j)
        total += count * (3 * atoms if j == 0 else 2 * n + 4)
    return total


def build_isotype(m: Model, anchor: Sequence[int], k: int, node_cap: int = DEFAULT_NODE_CAP) -> IsotypeFormula:
    anchor = tuple(anchor)
    for a in anchor:
        if not 0 <= a < m.domain_size:
            raise AnchorOutOfRange(f"anchor element {a} lies outside the model")
    if k < 0:
        raise ValueError("rank must be non-negative")
    clash = set(anchor_variables(len(anchor) + k)) & set(m.sig.constants)
    if clash:
        raise ModelError(f"constant symbols clash with type variables: {sorted(clash)}")
    est = _estimate_nodes(m, len(anchor), k)
    if est > node_cap:
        raise BudgetExceeded(f"estimated {est} formula nodes exceeds the cap of {node_cap}")
    memo: dict[tuple[tuple[int, ...], int], Formula] = {}

    def phi(tup: tuple[int, ...], rank: int) -> Formula:
        key = (tup, rank)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if rank == 0:
            out = atomic_diagram(m, tup)
        else:
            v = f"v{len(tup) + 1}"
            lower = [phi(tup + (d,), rank - 1) for d in m.domain]
            out = meet(meet(*(exists(v, f) for f in lower)), forall(v, join(*lower)))
        memo[key] = out
        return out

    return IsotypeFormula(phi(anchor, k), m, anchor, k)


def realizes(n: Model, candidate: Sequence[int], t: IsotypeFormula,
             evaluator: Evaluator | None = None) -> bool:
    """Does the standard expansion of ``n`` satisfy ``t`` at ``candidate``?"""
    candidate = tuple(candidate)
    if len(candidate) != len(t.anchor):
        raise ArityMismatch(f"type has {len(t.anchor)} variables, candidate has {len(candidate)}")
    if evaluator is None:
        evaluator = Evaluator(standard_expansion(n))
    env = dict(zip(t.variables, candidate))
    return evaluator.models(t.formula, env)
