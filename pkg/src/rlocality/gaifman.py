"""Distance formulas, prenex form, relativization, basic local sentences
and a search for separating local sentences."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import FiniteResiduatedLattice
from .errors import BudgetExceeded, FreeVarMismatch, NoCoAtom, NotAChain
from .isotypes import build_isotype
from .metric import GaifmanMetric, induced_submodel, sphere, strict_bottom
from .semantics import Evaluator, Model, check_compatible, enumerate_formulas, standard_expansion
from .syntax import (
    Const,
    Formula,
    Signature,
    Var,
    atom,
    eq,
    exists,
    forall,
    fresh_var,
    join,
    lres,
    meet,
    rebuild,
    substitute,
    truth,
)

# -- distance formulas -----------------------------------------------------------

_THETA_CACHE: dict[tuple[Signature, int], Formula] = {}


def theta(sig: Signature, r: int) -> Formula | None:
    """The radius-``r`` path formula in free variables ``x`` and ``y``.

    ``theta_0`` is ``x = y``; ``theta_1`` joins, over every relation of
    positive arity, the existential closure of "the tuple holds and contains
    x and y"; ``theta_{r+1}(x, y) = exists z_r (theta_r(x, z_r) & theta_1(z_r, y))``.
    Returns ``None`` for ``r >= 1`` when the signature has no relation of
    positive arity (the join would be empty).
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    key = (sig, r)
    if key in _THETA_CACHE:
        return _THETA_CACHE[key]
    if r == 0:
        out = eq("x", "y")
    elif r == 1:
        parts = []
        for rel, arity in sig.relations:
            if arity == 0:
                continue
            us = [f"u{i}" for i in range(1, arity + 1)]
            hit = join(*(meet(eq(us[i], "x"), eq(us[j], "y"))
                         for i in range(arity) for j in range(arity)))
            body = meet(atom(rel, *us), hit)
            for u in reversed(us):
                body = exists(u, body)
            parts.append(body)
        out = join(*parts) if parts else None
    else:
        prev, one = theta(sig, r - 1), theta(sig, 1)
        if one is None:
            out = None
        else:
            z = f"z{r - 1}"
            out = exists(z, meet(substitute(prev, {"y": Var(z)}), substitute(one, {"x": Var(z)})))
    _THETA_CACHE[key] = out
    return out


def theta_upto(sig: Signature, r: int) -> Formula | None:
    """Join of ``theta_1 .. theta_r`` (``None`` when empty)."""
    parts = [theta(sig, i) for i in range(1, r + 1)]
    parts = [p for p in parts if p is not None]
    return join(*parts) if parts else None


def _bind(f: Formula, x, y) -> Formula:
    return substitute(f, {"x": x if isinstance(x, (Var, Const)) else Var(x),
                          "y": y if isinstance(y, (Var, Const)) else Var(y)})


@dataclass(frozen=True)
class DistanceEncoding:
    """Near/far formulas for one metric over one algebra and signature.

    ``near(x, y, r)`` is satisfied in a standard expansion exactly when the
    hop distance is at most ``r``; ``far`` exactly when it exceeds ``r``.
    """

    algebra: FiniteResiduatedLattice
    metric: GaifmanMetric
    sig: Signature
    co_atom: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def tau(self, f: Formula) -> Formula:
        """Co-atom negation: satisfied exactly when ``f`` is not."""
        return lres(f, truth(self.co_atom, self.algebra.labels[self.co_atom]))

    def _const(self, t: int) -> Formula:
        return truth(t, self.algebra.labels[t])

    def _pair(self, r: int) -> tuple[Formula, Formula]:
        hit = self._cache.get(r)
        if hit is not None:
            return hit
        same = eq("x", "y")
        paths = theta_upto(self.sig, r)
        v = self.metric.variant
        if v == "models":
            near = same if paths is None else join(same, paths)
            far = self.tau(near)
        elif v == "ge":
            t = self._const(self.metric.threshold)
            near = same if paths is None else join(same, lres(t, paths))
            far = self.tau(near)
        else:
            t = self._const(self.metric.threshold)
            far = self.tau(same) if paths is None else meet(self.tau(same), lres(paths, t))
            near = self.tau(far)
        self._cache[r] = (near, far)
        return near, far

    def near(self, x, y, r: int) -> Formula:
        return _bind(self._pair(r)[0], x, y)

    def far(self, x, y, r: int) -> Formula:
        return _bind(self._pair(r)[1], x, y)

    def near_tuple(self, xs: Sequence[str], z: str, r: int) -> Formula:
        """Near some anchor variable or some constant symbol."""
        sources = [Var(x) for x in xs] + [Const(c) for c in self.sig.constants]
        if not sources:
            return self._const(self.co_atom)
        return join(*(self.near(s, Var(z), r) for s in sources))

    def far_tuple(self, xs: Sequence[str], z: str, r: int) -> Formula:
        sources = [Var(x) for x in xs] + [Const(c) for c in self.sig.constants]
        return meet(*(self.far(s, Var(z), r) for s in sources))


def encode_distance(algebra: FiniteResiduatedLattice, metric: GaifmanMetric,
                    sig: Signature) -> DistanceEncoding:
    if not algebra.flags.is_chain:
        raise NotAChain("distance formulas need a residuated chain")
    if algebra.flags.co_atom is None:
        raise NoCoAtom("distance formulas need a co-atom")
    metric.check(algebra)
    return DistanceEncoding(algebra, metric, sig, algebra.flags.co_atom)


# -- prenex form ---------------------------------------------------------------

_DUAL = {"exists": "forall", "forall": "exists"}


def _positions(kind: str, n: int) -> list[bool]:
    """Monotonicity of each argument position (True = monotone)."""
    if kind == "lres":
        return [False, True]
    if kind == "rres":
        return [True, False]
    return [True] * n


def prenex_parts(f: Formula, avoid: Iterable[str] = ()) -> tuple[list[tuple[str, str]], Formula]:
    """Quantifier prefix and quantifier-free matrix of an equivalent prenex form.

    Bound variables are renamed apart (keeping their names when possible) so
    that no quantifier captures a variable of a sibling subformula.
    """
    taken = set(f.free) | set(avoid)
    pool = set(f.bound_and_free) | set(avoid)

    def claim(v: str) -> str:
        if v not in taken:
            taken.add(v)
            pool.add(v)
            return v
        nv = fresh_var(pool | taken, v)
        taken.add(nv)
        pool.add(nv)
        return nv

    def go(g: Formula) -> tuple[list[tuple[str, str]], Formula]:
        if g.qd == 0:
            return [], g
        k = g.kind
        if k in ("forall", "exists"):
            v = g.payload
            body = g.children[0]
            nv = claim(v)
            if nv != v:
                body = substitute(body, {v: Var(nv)})
            prefix, matrix = go(body)
            return [(k, nv)] + prefix, matrix
        prefix: list[tuple[str, str]] = []
        mats = []
        for child, mono in zip(g.children, _positions(k, len(g.children))):
            p, mtx = go(child)
            prefix.extend(p if mono else [(_DUAL[q], v) for q, v in p])
            mats.append(mtx)
        return prefix, rebuild(g, mats)

    return go(f)


def prenex(f: Formula, avoid: Iterable[str] = ()) -> Formula:
    prefix, matrix = prenex_parts(f, avoid)
    for q, v in reversed(prefix):
        matrix = exists(v, matrix) if q == "exists" else forall(v, matrix)
    return matrix


def is_prenex(f: Formula) -> bool:
    while f.kind in ("forall", "exists"):
        f = f.children[0]
    return f.qd == 0


# -- relativization and local sentences -------------------------------------------


def _distance_names(enc: DistanceEncoding, r: int) -> set[str]:
    near, far = enc._pair(r)
    return set(near.bound_and_free) | set(far.bound_and_free)


def relativize(f: Formula, r: int, anchor: Sequence[str], enc: DistanceEncoding) -> Formula:
    """Bound every quantifier of the prenex form of ``f`` to the radius-``r``
    neighbourhood of ``anchor`` (and of the constants)."""
    anchor = list(anchor)
    avoid = set(anchor) | _distance_names(enc, r)
    prefix, matrix = prenex_parts(f, avoid)
    out = matrix
    for q, z in reversed(prefix):
        if q == "exists":
            out = exists(z, meet(enc.near_tuple(anchor, z, r), out))
        else:
            out = forall(z, join(enc.far_tuple(anchor, z, r), out))
    return out


def basic_local_sentence(psi: Formula, r: int, n_scatter: int, enc: DistanceEncoding) -> Formula:
    """``exists x1..xn`` of pairwise ``2r``-far points each satisfying the
    radius-``r`` relativization of ``psi``."""
    if len(psi.free) != 1:
        raise FreeVarMismatch(f"a local formula needs exactly one free variable, got {sorted(psi.free)}")
    if n_scatter < 1:
        raise ValueError("n_scatter must be at least 1")
    (v,) = psi.free
    local = relativize(psi, r, [v], enc)
    taken = set(local.bound_and_free) | _distance_names(enc, 2 * r)
    xs = []
    for _ in range(n_scatter):
        x = fresh_var(taken, "x")
        taken.add(x)
        xs.append(x)
    parts = [enc.far(Var(a), Var(b), 2 * r) for a, b in itertools.permutations(xs, 2)]
    parts += [substitute(local, {v: Var(x)}) for x in xs]
    body = meet(*parts)
    for x in reversed(xs):
        body = exists(x, body)
    return body


# -- separating sentence search ----------------------------------------------------


@dataclass
class Distinction:
    sentence: Formula
    holds_in_first: bool
    holds_in_second: bool
    radius: int
    rank: int
    scatter: int
    source: str

    def to_document(self, algebra: FiniteResiduatedLattice | None = None) -> dict:
        return {"sentence": str(self.sentence), "first": self.holds_in_first,
                "second": self.holds_in_second, "radius": self.radius, "rank": self.rank,
                "scatter": self.scatter, "source": self.source}


@dataclass
class DistinguishResult:
    found: Distinction | None
    candidates_tried: int
    sentences_checked: int
    vocabulary: str

    def __bool__(self) -> bool:
        return self.found is not None

    def to_document(self) -> dict:
        return {"found": self.found.to_document() if self.found else None,
                "candidates_tried": self.candidates_tried,
                "sentences_checked": self.sentences_checked,
                "vocabulary": self.vocabulary}


def _type_candidates(models: Sequence[Model], metric: GaifmanMetric, r: int, q: int):
    names = ("first", "second")
    for mi, m in enumerate(models):
        for d in m.domain:
            s = sphere(m, metric, (d,), r)
            sub = induced_submodel(m, s.elements)
            t = build_isotype(sub, (s.elements.index(d),), q)
            yield t.formula, f"type of element {m.element_name(d)} of the {names[mi]} model"


def _plain_candidates(sig: Signature, algebra: FiniteResiduatedLattice, q: int, depth: int,
                      max_count: int):
    for f in enumerate_formulas(sig, algebra, q, depth, ("x", "y"), False, max_count):
        if f.free == {"x"}:
            yield f, "enumerated formula"


def distinguish(m: Model, n: Model, radius: int, rank: int, scatter_max: int = 2,
                metric: GaifmanMetric | None = None, vocabulary: str = "types",
                plain_depth: int = 2, max_formulas: int = 20_000,
                cost_cap: int = 2_000_000) -> DistinguishResult:
    """Search for a basic local sentence true in one standard expansion and
    false in the other.

    Radii ``0..radius``, ranks ``0..rank`` and scatter counts
    ``1..scatter_max`` are tried in that nesting order.  With
    ``vocabulary="types"`` the local formulas are the rank-``q``
    isomorphism types of the radius-``r`` spheres of all elements of both
    models; with ``vocabulary="plain"`` they are the enumerated formulas in
    one free variable without truth constants.  The search is sound but not
    complete.
    """
    check_compatible(m, n)
    if vocabulary not in ("types", "plain"):
        raise ValueError("vocabulary must be 'types' or 'plain'")
    if metric is None:
        metric = strict_bottom(m.algebra)
    enc = encode_distance(m.algebra, metric, m.sig)
    ev_m = Evaluator(standard_expansion(m))
    ev_n = Evaluator(standard_expansion(n))
    domain = max(m.domain_size, n.domain_size)
    tried = checked = 0
    seen: set[int] = set()
    keep: list[Formula] = []
    for r in range(radius + 1):
        seen.clear()
        for q in range(rank + 1):
            if vocabulary == "types":
                cands = _type_candidates((m, n), metric, r, q)
            else:
                cands = _plain_candidates(m.sig, m.algebra, q, plain_depth, max_formulas)
            pool = []
            for psi, source in cands:
                if id(psi) in seen:
                    continue
                seen.add(id(psi))
                keep.append(psi)
                pool.append((psi, source))
            for s in range(1, scatter_max + 1):
                for psi, source in pool:
                    tried += 1
                    sent = basic_local_sentence(psi, r, s, enc)
                    cost = domain ** sent.qd
                    if cost > cost_cap:
                        raise BudgetExceeded(f"sentence needs about {cost} assignments (cap {cost_cap})")
                    checked += 1
                    a, b = ev_m.models(sent), ev_n.models(sent)
                    if a != b:
                        # independent re-check with fresh evaluators
                        a2 = Evaluator(standard_expansion(m)).models(sent)
                        b2 = Evaluator(standard_expansion(n)).models(sent)
                        assert (a2, b2) == (a, b)
                        return DistinguishResult(Distinction(sent, a, b, r, q, s, source),
                                                 tried, checked, vocabulary)
    return DistinguishResult(None, tried, checked, vocabulary)
