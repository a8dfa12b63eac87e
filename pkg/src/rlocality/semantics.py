"""Finite models, the valuation function, satisfaction and isomorphisms."""

from __future__ import annotations

import functools
import itertools
import sys
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import FiniteResiduatedLattice
from .errors import (
    AlgebraMismatch,
    BudgetExceeded,
    ModelError,
    SignatureMismatch,
    UnboundVariable,
)
from .syntax import (
    ONE,
    Const,
    Formula,
    Signature,
    Var,
    atom,
    eq,
    exists,
    forall,
    fuse,
    join,
    lres,
    meet,
    rres,
    truth,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass(frozen=True, eq=False)
class Model:
    """A finite structure whose relations take values in ``algebra``.

    ``relations`` maps each relation symbol to a flat row-major tuple of
    ``domain_size ** arity`` element indices.  ``expanded`` marks the
    standard expansion, the only kind of model that interprets truth
    constants.
    """

    algebra: FiniteResiduatedLattice
    sig: Signature
    domain_size: int
    relations: Mapping[str, tuple[int, ...]]
    constants: Mapping[str, int]
    eq_gap: int
    expanded: bool = False
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        A, n = self.algebra, self.domain_size
        if n < 1:
            raise ModelError("a model needs a non-empty domain")
        rels = {}
        for name, arity in self.sig.relations:
            if name not in self.relations:
                raise ModelError(f"relation {name} has no interpretation")
            vals = tuple(int(v) for v in self.relations[name])
            if len(vals) != n ** arity:
                raise ModelError(f"relation {name} needs {n ** arity} values, got {len(vals)}")
            if any(not 0 <= v < A.carrier_size for v in vals):
                raise ModelError(f"relation {name} has a value outside the algebra")
            rels[name] = vals
        extra = set(self.relations) - set(rels)
        if extra:
            raise ModelError(f"relations not in the signature: {sorted(extra)}")
        consts = {}
        for c in self.sig.constants:
            if c not in self.constants:
                raise ModelError(f"constant {c} has no interpretation")
            v = int(self.constants[c])
            if not 0 <= v < n:
                raise ModelError(f"constant {c} denotes {v}, outside the domain")
            consts[c] = v
        if set(self.constants) - set(consts):
            raise ModelError("constants not in the signature")
        if not 0 <= self.eq_gap < A.carrier_size:
            raise ModelError("eq_gap is not an algebra element")
        if A.is_designated(self.eq_gap):
            # distinct elements must never satisfy x = y
            raise ModelError("eq_gap must not lie above the unit")
        if self.names is not None and len(self.names) != n:
            raise ModelError("one name per domain element is required")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", consts)

    # -- access ----------------------------------------------------------------

    @property
    def domain(self) -> range:
        return range(self.domain_size)

    def value(self, relation: str, args: Sequence[int]) -> int:
        n = self.domain_size
        idx = 0
        for a in args:
            idx = idx * n + a
        return self.relations[relation][idx]

    def tuples(self, relation: str) -> Iterator[tuple[tuple[int, ...], int]]:
        arity = self.sig.arity(relation)
        for args, v in zip(itertools.product(self.domain, repeat=arity), self.relations[relation]):
            yield args, v

    def element_name(self, d: int) -> str:
        return self.names[d] if self.names else str(d)

    def replace(self, **changes) -> Model:
        fields = dict(algebra=self.algebra, sig=self.sig, domain_size=self.domain_size,
                      relations=self.relations, constants=self.constants,
                      eq_gap=self.eq_gap, expanded=self.expanded, names=self.names)
        fields.update(changes)
        return Model(**fields)

    def structure_key(self) -> tuple:
        """Hashable key identifying the model up to equality of all data."""
        return (id(self.algebra), self.sig, self.domain_size,
                tuple(self.relations[r] for r, _ in self.sig.relations),
                tuple(self.constants[c] for c in self.sig.constants), self.eq_gap)

    def to_document(self) -> dict:
        lab = self.algebra.labels
        doc = {
            "algebra": self.algebra.to_document(),
            "signature": self.sig.to_document(),
            "domain_size": self.domain_size,
            "eq_gap": lab[self.eq_gap],
            "relations": {r: [lab[v] for v in vals] for r, vals in self.relations.items()},
            "constants": dict(self.constants),
        }
        if self.names:
            doc["names"] = list(self.names)
        return doc


def make_model(algebra: FiniteResiduatedLattice, sig: Signature, domain_size: int,
               relations: Mapping[str, object] | None = None,
               constants: Mapping[str, int] | None = None,
               eq_gap: int | str | None = None, default: int | str | None = None,
               names: Sequence[str] | None = None) -> Model:
    """Build a model from convenient relation descriptions.

    A relation may be given as a flat sequence, a dict from argument tuples
    to values (missing tuples get ``default``, which is bottom unless set),
    or a callable on argument tuples.  Values may be indices or labels.
    """
    A = algebra
    relations = dict(relations or {})
    if default is None:
        default_idx = A.flags.bot
    else:
        default_idx = A.index(default)
    if eq_gap is None:
        if A.flags.bot is None:
            raise ModelError("the algebra has no bottom; eq_gap must be given")
        gap = A.flags.bot
    else:
        gap = A.index(eq_gap)
    flat = {}
    for name, arity in sig.relations:
        spec = relations.pop(name, None)
        cells = list(itertools.product(range(domain_size), repeat=arity))
        if spec is None or isinstance(spec, dict):
            spec = spec or {}
            if default_idx is None and len(spec) < len(cells):
                raise ModelError(f"relation {name} is partial and the algebra has no bottom")
            vals = [A.index(spec[c]) if c in spec else default_idx for c in cells]
            bad = set(spec) - set(cells)
            if bad:
                raise ModelError(f"relation {name} has tuples outside the domain: {sorted(bad)}")
        elif callable(spec):
            vals = [A.index(spec(c)) for c in cells]
        else:
            vals = [A.index(v) for v in spec]
        flat[name] = tuple(vals)
    if relations:
        raise ModelError(f"relations not in the signature: {sorted(relations)}")
    return Model(A, sig, domain_size, flat, dict(constants or {}), gap,
                 names=tuple(names) if names else None)


def standard_expansion(m: Model) -> Model:
    """The same structure, now also interpreting every ``@label`` as itself."""
    return m if m.expanded else m.replace(expanded=True)


def reduct(m: Model) -> Model:
    return m.replace(expanded=False) if m.expanded else m


# -- evaluation ----------------------------------------------------------------


class Evaluator:
    """Valuation on one model with a memo shared across calls.

    Values are cached per (node, values of its free variables), so repeated
    subformulas (as in isomorphism-type formulas) are computed once.
    """

    def __init__(self, m: Model):
        self.model = m
        self.A = m.algebra
        self.memo: dict = {}
        self.sat_memo: dict = {}
        self.bot = self.A.flags.bot
        self.top = self.A.flags.top

    def value(self, f: Formula, env: Mapping[str, int] | None = None) -> int:
        env = dict(env or {})
        for v in f.free:
            if v not in env:
                raise UnboundVariable(f"variable {v!r} is not assigned")
            if not 0 <= env[v] < self.model.domain_size:
                raise UnboundVariable(f"variable {v!r} is assigned {env[v]}, outside the domain")
        return self._ev(f, env)

    def _term(self, t, env) -> int:
        if isinstance(t, Var):
            return env[t.name]
        try:
            return self.model.constants[t.name]
        except KeyError:
            raise SignatureMismatch(f"constant {t.name!r} is not in the signature") from None

    def _ev(self, f: Formula, env: dict) -> int:
        key = (f, tuple([env[v] for v in f.free_order]))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        A = self.A
        k = f.kind
        if k == "atom":
            rel, terms = f.payload
            if rel not in self.model.relations:
                raise SignatureMismatch(f"relation {rel!r} is not in the signature")
            out = self.model.value(rel, [self._term(t, env) for t in terms])
        elif k == "eq":
            a, b = (self._term(t, env) for t in f.payload)
            out = A.unit if a == b else self.model.eq_gap
        elif k == "one":
            out = A.unit
        elif k == "const":
            if not self.model.expanded:
                raise SignatureMismatch("truth constants need the standard expansion")
            out = f.payload[0]
            if not 0 <= out < A.carrier_size or A.labels[out] != f.payload[1]:
                raise AlgebraMismatch(f"@{f.payload[1]} is not an element of this algebra")
        elif k == "meet":
            out = None
            mt = A.meet_table
            for c in f.children:
                v = self._ev(c, env)
                out = v if out is None else mt[out][v]
                if out == self.bot:
                    break
        elif k == "join":
            out = None
            jt = A.join_table
            for c in f.children:
                v = self._ev(c, env)
                out = v if out is None else jt[out][v]
                if out == self.top:
                    break
        elif k == "fuse":
            out = A.fuse_table[self._ev(f.children[0], env)][self._ev(f.children[1], env)]
        elif k == "lres":
            out = A.lres_table[self._ev(f.children[0], env)][self._ev(f.children[1], env)]
        elif k == "rres":
            out = A.rres_table[self._ev(f.children[0], env)][self._ev(f.children[1], env)]
        else:
            var, body = f.payload, f.children[0]
            inner = dict(env)
            table = A.meet_table if k == "forall" else A.join_table
            stop = self.bot if k == "forall" else self.top
            out = None
            for d in range(self.model.domain_size):
                inner[var] = d
                v = self._ev(body, inner)
                out = v if out is None else table[out][v]
                if out == stop:
                    break
        self.memo[key] = out
        return out

    def models(self, f: Formula, env: Mapping[str, int] | None = None) -> bool:
        env = dict(env or {})
        for v in f.free:
            if v not in env:
                raise UnboundVariable(f"variable {v!r} is not assigned")
            if not 0 <= env[v] < self.model.domain_size:
                raise UnboundVariable(f"variable {v!r} is assigned {env[v]}, outside the domain")
        return self._sat(f, env)

    def _sat(self, f: Formula, env: dict) -> bool:
        # 1 <= a meet (or infimum) iff 1 <= every part; 1 <= a\\b iff a <= b;
        # on well-connected algebras 1 <= a join iff 1 <= some part.  So
        # satisfaction can stop early and skip most intermediate values.
        key = (f, tuple([env[v] for v in f.free_order]))
        hit = self.sat_memo.get(key)
        if hit is not None:
            return hit
        val = self.memo.get(key)
        k = f.kind
        if val is not None:
            out = self.A.is_designated(val)
        elif k == "meet" or (k == "join" and self.A.flags.well_connected):
            test = all if k == "meet" else any
            out = test(self._sat(c, env) for c in f.children)
        elif k == "lres" or k == "rres":
            lo, hi = f.children if k == "lres" else reversed(f.children)
            out = self.A.leq(self._ev(lo, env), self._ev(hi, env))
        elif k == "forall" or (k == "exists" and self.A.flags.well_connected):
            var, body = f.payload, f.children[0]
            inner = dict(env)
            want = k == "exists"
            out = not want
            for d in range(self.model.domain_size):
                inner[var] = d
                if self._sat(body, inner) == want:
                    out = want
                    break
        else:
            out = self.A.is_designated(self._ev(f, env))
        self.sat_memo[key] = out
        return out


def eval_formula(m: Model, f: Formula, env: Mapping[str, int] | None = None) -> int:
    """Truth value of ``f`` in ``m`` under ``env`` (an algebra element index)."""
    return Evaluator(m).value(f, env)


def models(m: Model, f: Formula, env: Mapping[str, int] | None = None) -> bool:
    """``m`` satisfies ``f``: its value lies above the unit."""
    return m.algebra.is_designated(eval_formula(m, f, env))


# -- isomorphisms --------------------------------------------------------------


def check_compatible(m: Model, n: Model) -> None:
    if m.algebra is not n.algebra and m.algebra != n.algebra:
        raise AlgebraMismatch("models are valued in different algebras")
    if m.sig is not n.sig and m.sig != n.sig:
        raise SignatureMismatch("models have different signatures")


def tuples_through(new: int, old: Sequence[int], arity: int) -> Iterator[tuple[int, ...]]:
    """Position patterns over ``old + [new]`` that use ``new`` at least once.

    Yields index tuples into the list ``old + [new]`` (``len(old)`` denotes
    the new element).
    """
    k = len(old)
    for pat in itertools.product(range(k + 1), repeat=arity):
        if k in pat:
            yield pat


@functools.lru_cache(maxsize=None)
def _patterns(old: int, arity: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuples_through(old, range(old), arity))


def extension_consistent(m: Model, n: Model, dom: Sequence[int], img: Sequence[int],
                         x: int, y: int) -> bool:
    """Would adding ``x -> y`` to the injective map ``dom -> img`` keep every
    relation value on the enlarged domain equal?"""
    if x in dom:
        return img[dom.index(x)] == y
    if y in img:
        return False
    ms = (*dom, x)
    ns = (*img, y)
    szm, szn = m.domain_size, n.domain_size
    for rel, arity in m.sig.relations:
        if arity == 0:
            continue
        mv, nv = m.relations[rel], n.relations[rel]
        for pat in _patterns(len(dom), arity):
            im = inn = 0
            for p in pat:
                im = im * szm + ms[p]
                inn = inn * szn + ns[p]
            if mv[im] != nv[inn]:
                return False
    return True


def extension_types(m: Model, dom: tuple[int, ...]) -> tuple[tuple, ...]:
    """Per element ``x``, the atomic type of ``dom + (x,)``.

    An element already in ``dom`` gets ``("old", position)``; any other
    element gets the relation values on the tuples through it.  Adding
    ``x -> y`` to an injective map ``dom -> img`` preserves every value
    exactly when ``extension_types(m, dom)[x] == extension_types(n, img)[y]``.
    """
    short = len(dom) <= 1
    if short:
        cache = m.__dict__.get("_short_types")
        if cache is None:
            cache = {}
            object.__setattr__(m, "_short_types", cache)
        hit = cache.get(dom)
        if hit is not None:
            return hit
    rels = [(m.relations[r], a) for r, a in m.sig.relations if a > 0]
    sz, k = m.domain_size, len(dom)
    out = []
    for x in range(sz):
        if x in dom:
            out.append(("old", dom.index(x)))
            continue
        ms = (*dom, x)
        key = []
        for vals, arity in rels:
            for pat in _patterns(k, arity):
                i = 0
                for p in pat:
                    i = i * sz + ms[p]
                key.append(vals[i])
        out.append(tuple(key))
    res = tuple(out)
    if short:
        cache[dom] = res
    return res


def nullary_agree(m: Model, n: Model) -> bool:
    return all(m.relations[r] == n.relations[r] for r, a in m.sig.relations if a == 0)


def element_invariant(m: Model, d: int) -> tuple:
    """Isomorphism-invariant fingerprint of an element."""
    parts = []
    for rel, arity in m.sig.relations:
        if arity == 0:
            continue
        vals = m.relations[rel]
        per_pos = []
        for pos in range(arity):
            c = Counter()
            for args in itertools.product(m.domain, repeat=arity - 1):
                full = args[:pos] + (d,) + args[pos:]
                idx = 0
                for a in full:
                    idx = idx * m.domain_size + a
                c[vals[idx]] += 1
            per_pos.append(tuple(sorted(c.items())))
        diag = 0
        for _ in range(arity):
            diag = diag * m.domain_size + d
        parts.append((vals[diag], tuple(per_pos)))
    consts = tuple(sorted(c for c, v in m.constants.items() if v == d))
    return (consts, tuple(parts))


def find_isomorphism(m: Model, n: Model, pinned: Iterable[tuple[int, int]] = ()) -> dict[int, int] | None:
    """A bijection preserving every relation value and constant, extending
    ``pinned``; ``None`` when there is none."""
    check_compatible(m, n)
    if m.domain_size != n.domain_size or m.eq_gap != n.eq_gap or not nullary_agree(m, n):
        return None
    forced = list(pinned) + [(m.constants[c], n.constants[c]) for c in m.sig.constants]
    inv_m = [element_invariant(m, d) for d in m.domain]
    inv_n = [element_invariant(n, d) for d in n.domain]
    if Counter(inv_m) != Counter(inv_n):
        return None
    dom: list[int] = []
    img: list[int] = []
    for x, y in forced:
        if inv_m[x] != inv_n[y] or not extension_consistent(m, n, dom, img, x, y):
            return None
        if x not in dom:
            dom.append(x)
            img.append(y)
    adj_m, adj_n = _linked(m), _linked(n)
    order, parent = _search_order(m, adj_m, dom, inv_m)
    by_inv: dict = {}
    for e in n.domain:
        by_inv.setdefault(inv_n[e], []).append(e)
    where = {x: y for x, y in zip(dom, img)}

    def candidates(x: int) -> list[int]:
        p = parent[x]
        if p is None:
            return by_inv[inv_m[x]]
        return [e for e in adj_n[where[p]] if inv_n[e] == inv_m[x]]

    def search(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in candidates(x):
            if y in img:
                continue
            if extension_consistent(m, n, dom, img, x, y):
                dom.append(x)
                img.append(y)
                where[x] = y
                if search(i + 1):
                    return True
                dom.pop()
                img.pop()
                del where[x]
        return False

    if not search(0):
        return None
    return dict(zip(dom, img))


def _linked(m: Model) -> list[set[int]]:
    """Elements sharing a tuple whose value differs from element 0 of the
    algebra; any isomorphism maps these neighbourhoods onto each other."""
    adj: list[set[int]] = [set() for _ in m.domain]
    for rel, arity in m.sig.relations:
        if arity < 2:
            continue
        for args, v in m.tuples(rel):
            if v != 0:
                members = set(args)
                for a in members:
                    adj[a].update(members - {a})
    return adj


def _search_order(m: Model, adj: list[set[int]], placed: Sequence[int],
                  inv: list) -> tuple[list[int], dict[int, int | None]]:
    """Breadth-first order from the placed elements, so that almost every
    element is tried only among the neighbours of its parent's image.
    Components without a placed element start at their rarest invariant."""
    sizes = Counter(inv)
    seen = set(placed)
    order: list[int] = []
    parent: dict[int, int | None] = {}
    queue = deque(placed)
    rest = sorted((d for d in m.domain if d not in seen), key=lambda d: (sizes[inv[d]], d))
    while True:
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    order.append(y)
                    queue.append(y)
        start = next((d for d in rest if d not in seen), None)
        if start is None:
            return order, parent
        seen.add(start)
        parent[start] = None
        order.append(start)
        queue.append(start)


def relabel(m: Model, perm: Sequence[int]) -> Model:
    """The copy of ``m`` in which element ``d`` is renamed ``perm[d]``."""
    n = m.domain_size
    inv = [0] * n
    for d, p in enumerate(perm):
        inv[p] = d
    rels = {}
    for rel, arity in m.sig.relations:
        rels[rel] = tuple(m.value(rel, [inv[a] for a in args])
                          for args in itertools.product(range(n), repeat=arity))
    names = None
    if m.names:
        names = tuple(m.names[inv[p]] for p in range(n))
    return m.replace(relations=rels, constants={c: perm[v] for c, v in m.constants.items()},
                     names=names)


# -- formula enumeration -------------------------------------------------------


def atomic_formulas(sig: Signature, algebra: FiniteResiduatedLattice | None,
                    variables: Sequence[str], truth_constants: bool = False) -> list[Formula]:
    terms = [Var(v) for v in variables] + [Const(c) for c in sig.constants]
    out = [ONE]
    for rel, arity in sig.relations:
        for args in itertools.product(terms, repeat=arity):
            out.append(atom(rel, *args))
    for a, b in itertools.product(terms, repeat=2):
        out.append(eq(a, b))
    if truth_constants and algebra is not None:
        out.extend(truth(i, lab) for i, lab in enumerate(algebra.labels))
    return sorted(set(out), key=lambda f: f.key)


_BINARY = (meet, join, fuse, lres, rres)


def enumerate_formulas(sig: Signature, algebra: FiniteResiduatedLattice | None, qd_bound: int,
                       connective_depth_bound: int, variables: Sequence[str] = ("x",),
                       truth_constants: bool = False, max_count: int = 100_000) -> Iterator[Formula]:
    """Deterministic stream of distinct formulas within the given bounds.

    Formulas are built level by level.  Level 0 holds the atomic formulas
    over ``variables`` and the signature's constants (plus ``@label`` when
    ``truth_constants`` is set).  Level ``d`` adds every quantifier
    ``forall v`` / ``exists v`` over a level ``d-1`` formula whose quantifier
    depth is below ``qd_bound``, and every binary connective combining a
    level ``d-1`` formula with an atomic one (on either side).  Requiring one
    atomic argument keeps the growth per level linear:

        |L_d| <= (10 * |L_0| + 2 * |variables|) * |L_{d-1}|

    ``BudgetExceeded`` is raised as soon as more than ``max_count`` distinct
    formulas would be produced.
    """
    base = atomic_formulas(sig, algebra, variables, truth_constants)
    seen: set[int] = set()
    keep: list[Formula] = []  # keep interned nodes alive while ids are in ``seen``

    def emit(f: Formula) -> bool:
        if id(f) in seen:
            return False
        if len(seen) >= max_count:
            raise BudgetExceeded(f"more than {max_count} formulas within the requested bounds")
        seen.add(id(f))
        keep.append(f)
        return True

    level = []
    for f in base:
        if emit(f):
            level.append(f)
            yield f
    for _ in range(connective_depth_bound):
        nxt = []
        for g in level:
            if g.qd < qd_bound:
                for v in variables:
                    for q in (exists, forall):
                        f = q(v, g)
                        if emit(f):
                            nxt.append(f)
                            yield f
            for a in base:
                for op in _BINARY:
                    for f in (op(g, a), op(a, g)):
                        if emit(f):
                            nxt.append(f)
                            yield f
        level = nxt


def close_formula(f: Formula, quantifier=exists) -> Formula:
    """Bind every free variable (in sorted order) with ``quantifier``."""
    for v in reversed(f.free_order):
        f = quantifier(v, f)
    return f


def sentence_sample(sig: Signature, algebra: FiniteResiduatedLattice | None, qd_bound: int,
                    connective_depth_bound: int, variables: Sequence[str] = ("x", "y"),
                    truth_constants: bool = False, max_count: int = 100_000) -> list[Formula]:
    """Sentences of quantifier depth at most ``qd_bound`` obtained by closing
    enumerated formulas existentially and universally."""
    out: dict[int, Formula] = {}
    for f in enumerate_formulas(sig, algebra, qd_bound, connective_depth_bound, variables,
                                truth_constants, max_count):
        if f.qd + len(f.free) > qd_bound:
            continue
        for q in (exists, forall):
            s = close_formula(f, q)
            out.setdefault(id(s), s)
    return sorted(out.values(), key=lambda f: f.key)
