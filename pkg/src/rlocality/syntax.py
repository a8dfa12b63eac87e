"""Signatures, hash-consed formulas, the concrete grammar and its printer.

Grammar (lowest binding first)::

    formula  := lattice [ ("\\" | "/") lattice ]      -- residuals, non-associative
    lattice  := meetexp { "|" meetexp }
    meetexp  := fuseexp { "&" fuseexp }
    fuseexp  := unary { "*" unary }                  -- left-associative
    unary    := ("forall" | "exists") IDENT unary | primary
    primary  := "(" formula ")" | "1" | "@" LABEL
              | term "=" term | IDENT "(" [ term { "," term } ] ")" | IDENT

A bare ``IDENT`` is a nullary relation.  ``@LABEL`` names an algebra element
(standard-expansion constant); labels are matched longest-first so that
labels such as ``1/2`` are not split at the slash.
"""

from __future__ import annotations

import itertools
import re
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ArityMismatch, FormulaSyntaxError, UnknownSymbol

KEYWORDS = frozenset({"forall", "exists"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


# -- signatures --------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()
    _arity: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rels = tuple((str(n), int(a)) for n, a in self.relations)
        consts = tuple(str(c) for c in self.constants)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", consts)
        names = [n for n, _ in rels] + list(consts)
        if len(set(names)) != len(names):
            raise ValueError("symbol names must be unique")
        for name in names:
            if not _IDENT.fullmatch(name) or name in KEYWORDS:
                raise ValueError(f"invalid symbol name {name!r}")
        for name, arity in rels:
            if arity < 0:
                raise ValueError(f"relation {name} has negative arity")
        object.__setattr__(self, "_arity", dict(rels))

    @classmethod
    def of(cls, *, constants: Iterable[str] = (), **relations: int) -> Signature:
        return cls(tuple(relations.items()), tuple(constants))

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise UnknownSymbol(f"unknown relation symbol {name!r}") from None

    def has_relation(self, name: str) -> bool:
        return name in self._arity

    def with_constants(self, extra: Iterable[str]) -> Signature:
        return Signature(self.relations, self.constants + tuple(extra))

    def to_document(self) -> dict:
        return {"relations": {n: a for n, a in self.relations}, "constants": list(self.constants)}

    @classmethod
    def from_document(cls, doc: dict) -> Signature:
        rels = doc.get("relations", {})
        if isinstance(rels, dict):
            rels = list(rels.items())
        return cls(tuple((n, a) for n, a in rels), tuple(doc.get("constants", ())))


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


Term = "Var | Const"


def _term(t) -> Var | Const:
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, str):
        return Var(t)
    raise TypeError(f"not a term: {t!r}")


def _term_key(t: Var | Const) -> tuple:
    return (0 if isinstance(t, Var) else 1, t.name)


# -- formulas ----------------------------------------------------------------

# kind ranks fix the canonical order used for n-ary meet/join children
_RANK = {"one": 0, "const": 1, "eq": 2, "atom": 3, "fuse": 4, "lres": 5, "rres": 6,
         "meet": 7, "join": 8, "exists": 9, "forall": 10}

_INTERN: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()


class Formula:
    """An interned formula node.  Structurally equal formulas are identical.

    ``payload`` depends on ``kind``: relation name and term tuple for atoms,
    the two terms for equality, ``(index, label)`` for truth constants and
    the bound variable name for quantifiers.
    """

    __slots__ = ("kind", "payload", "children", "qd", "free", "free_order",
                 "bound_and_free", "has_truth_constants", "key", "__weakref__")

    kind: str
    payload: object
    children: tuple

    def __new__(cls, kind: str, payload=None, children: tuple = ()):
        ikey = (kind, payload, tuple(id(c) for c in children))
        node = _INTERN.get(ikey)
        if node is not None:
            return node
        node = object.__new__(cls)
        node.kind = kind
        node.payload = payload
        node.children = children
        node._measure()
        _INTERN[ikey] = node
        return node

    def _measure(self) -> None:
        kind, ch = self.kind, self.children
        if kind == "atom":
            terms = self.payload[1]
            self.free = frozenset(t.name for t in terms if isinstance(t, Var))
            self.qd = 0
            self.has_truth_constants = False
            self.bound_and_free = self.free
            self.key = (_RANK[kind], self.payload[0], tuple(_term_key(t) for t in terms))
        elif kind == "eq":
            self.free = frozenset(t.name for t in self.payload if isinstance(t, Var))
            self.qd = 0
            self.has_truth_constants = False
            self.bound_and_free = self.free
            self.key = (_RANK[kind], tuple(_term_key(t) for t in self.payload))
        elif kind == "one":
            self.free = frozenset()
            self.qd = 0
            self.has_truth_constants = False
            self.bound_and_free = self.free
            self.key = (_RANK[kind],)
        elif kind == "const":
            self.free = frozenset()
            self.qd = 0
            self.has_truth_constants = True
            self.bound_and_free = self.free
            self.key = (_RANK[kind], self.payload[0])
        elif kind in ("forall", "exists"):
            body = ch[0]
            self.free = body.free - {self.payload}
            self.qd = body.qd + 1
            self.has_truth_constants = body.has_truth_constants
            self.bound_and_free = body.bound_and_free | {self.payload}
            self.key = (_RANK[kind], self.payload, body.key)
        else:
            self.free = frozenset().union(*(c.free for c in ch))
            self.qd = max(c.qd for c in ch)
            self.has_truth_constants = any(c.has_truth_constants for c in ch)
            self.bound_and_free = frozenset().union(*(c.bound_and_free for c in ch))
            self.key = (_RANK[kind], len(ch)) + tuple(c.key for c in ch)
        self.free_order = tuple(sorted(self.free))

    def __reduce__(self):
        return (Formula, (self.kind, self.payload, self.children))

    def __lt__(self, other: Formula) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"Formula({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    @property
    def is_sentence(self) -> bool:
        return not self.free


def atom(relation: str, *terms) -> Formula:
    return Formula("atom", (relation, tuple(_term(t) for t in terms)))


def eq(left, right) -> Formula:
    return Formula("eq", (_term(left), _term(right)))


ONE = Formula("one")


def truth(index: int, label: str) -> Formula:
    """Standard-expansion constant denoting algebra element ``index``."""
    return Formula("const", (int(index), str(label)))


def _lattice(kind: str, parts: Iterable[Formula]) -> list[Formula]:
    out: dict[int, Formula] = {}
    for p in parts:
        if p.kind == kind:
            for c in p.children:
                out[id(c)] = c
        else:
            out[id(p)] = p
    return sorted(out.values(), key=lambda f: f.key)


def meet(*parts: Formula) -> Formula:
    """n-ary meet; flattened, deduplicated, canonically ordered.  ``meet()`` is One."""
    if len(parts) == 1 and not isinstance(parts[0], Formula):
        parts = tuple(parts[0])
    kids = [k for k in _lattice("meet", parts) if k is not ONE]
    if not kids:
        return ONE
    if len(kids) == 1:
        return kids[0]
    return Formula("meet", None, tuple(kids))


def join(*parts: Formula) -> Formula:
    """n-ary join; the empty join is rejected."""
    if len(parts) == 1 and not isinstance(parts[0], Formula):
        parts = tuple(parts[0])
    kids = _lattice("join", parts)
    if not kids:
        raise ValueError("the empty join has no denotation in general")
    if len(kids) == 1:
        return kids[0]
    return Formula("join", None, tuple(kids))


def fuse(left: Formula, right: Formula) -> Formula:
    return Formula("fuse", None, (left, right))


def lres(left: Formula, right: Formula) -> Formula:
    """``left \\ right``"""
    return Formula("lres", None, (left, right))


def rres(left: Formula, right: Formula) -> Formula:
    """``left / right``"""
    return Formula("rres", None, (left, right))


def forall(var: str | Var, body: Formula) -> Formula:
    return Formula("forall", var.name if isinstance(var, Var) else str(var), (body,))


def exists(var: str | Var, body: Formula) -> Formula:
    return Formula("exists", var.name if isinstance(var, Var) else str(var), (body,))


def rebuild(f: Formula, children: Sequence[Formula]) -> Formula:
    """Same node kind and payload over new children (re-canonicalized)."""
    k = f.kind
    if k == "meet":
        return meet(*children)
    if k == "join":
        return join(*children)
    if k in ("forall", "exists"):
        return Formula(k, f.payload, (children[0],))
    if k in ("fuse", "lres", "rres"):
        return Formula(k, None, (children[0], children[1]))
    return f


# -- structural measures -------------------------------------------------------


def qd(f: Formula) -> int:
    return f.qd


def free_vars(f: Formula) -> frozenset[str]:
    return f.free


def iter_dag(f: Formula) -> Iterator[Formula]:
    """Every distinct node reachable from ``f`` (children before parents)."""
    seen: set[int] = set()
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            yield node
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for c in node.children:
            if id(c) not in seen:
                stack.append((c, False))


def dag_size(f: Formula) -> int:
    return sum(1 for _ in iter_dag(f))


def tree_size(f: Formula) -> int:
    sizes: dict[int, int] = {}
    for node in iter_dag(f):
        sizes[id(node)] = 1 + sum(sizes[id(c)] for c in node.children)
    return sizes[id(f)]


def connective_depth(f: Formula) -> int:
    """Height of the syntax tree counting connectives and quantifiers."""
    depth: dict[int, int] = {}
    for node in iter_dag(f):
        depth[id(node)] = 0 if not node.children else 1 + max(depth[id(c)] for c in node.children)
    return depth[id(f)]


def fresh_var(avoid: Iterable[str], base: str = "z") -> str:
    avoid = set(avoid)
    for i in itertools.count(1):
        name = f"{base}{i}"
        if name not in avoid:
            return name
    raise AssertionError  # pragma: no cover


def substitute(f: Formula, mapping: Mapping[str, Var | Const]) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    mapping = {k: _term(v) for k, v in mapping.items()}
    cache: dict[tuple, Formula] = {}

    def sub(g: Formula, m: dict) -> Formula:
        m = {k: v for k, v in m.items() if k in g.free}
        if not m:
            return g
        ck = (id(g), tuple(sorted(m.items())))
        hit = cache.get(ck)
        if hit is not None:
            return hit
        k = g.kind
        if k == "atom":
            rel, terms = g.payload
            out = atom(rel, *(m.get(t.name, t) if isinstance(t, Var) else t for t in terms))
        elif k == "eq":
            a, b = (m.get(t.name, t) if isinstance(t, Var) else t for t in g.payload)
            out = eq(a, b)
        elif k in ("forall", "exists"):
            v = g.payload
            incoming = {t.name for t in m.values() if isinstance(t, Var)}
            body = g.children[0]
            if v in incoming:
                nv = fresh_var(incoming | body.bound_and_free | set(m), v)
                body = sub(body, {v: Var(nv)})
                v = nv
            out = Formula(k, v, (sub(body, m),))
        else:
            out = rebuild(g, [sub(c, m) for c in g.children])
        cache[ck] = out
        return out

    return sub(f, mapping)


# -- printing ----------------------------------------------------------------

_LEVEL = {"lres": 0, "rres": 0, "join": 1, "meet": 2, "fuse": 3}
_ATOMIC = 5


def _level(f: Formula) -> int:
    if f.kind in _LEVEL:
        return _LEVEL[f.kind]
    if f.kind in ("forall", "exists"):
        return 4
    return _ATOMIC


def to_text(f: Formula) -> str:
    """Parseable text with minimal parentheses."""
    memo: dict[int, str] = {}

    def wrap(g: Formula, need: int) -> str:
        s = show(g)
        return f"({s})" if _level(g) < need else s

    def show(g: Formula) -> str:
        hit = memo.get(id(g))
        if hit is not None:
            return hit
        k = g.kind
        if k == "atom":
            rel, terms = g.payload
            s = f"{rel}({','.join(t.name for t in terms)})" if terms else rel
        elif k == "eq":
            s = f"{g.payload[0].name} = {g.payload[1].name}"
        elif k == "one":
            s = "1"
        elif k == "const":
            s = "@" + g.payload[1]
        elif k in ("forall", "exists"):
            s = f"{k} {g.payload} {wrap(g.children[0], 4)}"
        elif k == "fuse":
            s = f"{wrap(g.children[0], 3)} * {wrap(g.children[1], 4)}"
        elif k in ("meet", "join"):
            op = " & " if k == "meet" else " | "
            s = op.join(wrap(c, _LEVEL[k] + 1) for c in g.children)
        else:
            op = " \\ " if k == "lres" else " / "
            s = f"{wrap(g.children[0], 1)}{op}{wrap(g.children[1], 1)}"
        memo[id(g)] = s
        return s

    return show(f)


# -- parsing -----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, sig: Signature, algebra=None):
        self.text = text
        self.pos = 0
        self.sig = sig
        self.algebra = algebra
        self.labels = sorted(algebra.labels, key=len, reverse=True) if algebra is not None else []

    # lexical helpers
    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str) -> None:
        if not self.accept(s):
            self.fail(f"expected {s!r}")

    def fail(self, msg: str):
        self.skip()
        found = self.text[self.pos:self.pos + 10] or "end of input"
        raise FormulaSyntaxError(f"{msg}, found {found!r}", self.pos)

    def ident(self) -> str | None:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def peek_ident(self) -> str | None:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        return m.group() if m else None

    # grammar
    def parse(self) -> Formula:
        f = self.formula()
        self.skip()
        if self.pos != len(self.text):
            self.fail("unexpected trailing input")
        return f

    def formula(self) -> Formula:
        left = self.lattice()
        if self.accept("\\"):
            return lres(left, self.lattice())
        if self.accept("/"):
            return rres(left, self.lattice())
        return left

    def lattice(self) -> Formula:
        parts = [self.meetexp()]
        while self.accept("|"):
            parts.append(self.meetexp())
        return join(*parts) if len(parts) > 1 else parts[0]

    def meetexp(self) -> Formula:
        parts = [self.fuseexp()]
        while self.accept("&"):
            parts.append(self.fuseexp())
        return meet(*parts) if len(parts) > 1 else parts[0]

    def fuseexp(self) -> Formula:
        f = self.unary()
        while self.accept("*"):
            f = fuse(f, self.unary())
        return f

    def unary(self) -> Formula:
        word = self.peek_ident()
        if word in KEYWORDS:
            self.ident()
            start = self.pos
            v = self.ident()
            if v is None or v in KEYWORDS:
                self.pos = start
                self.fail("expected a variable after quantifier")
            if v in self.sig.constants:
                raise UnknownSymbol(f"cannot quantify over constant symbol {v!r}")
            body = self.unary()
            return forall(v, body) if word == "forall" else exists(v, body)
        return self.primary()

    def term(self) -> Var | Const:
        start = self.pos
        name = self.ident()
        if name is None or name in KEYWORDS:
            self.pos = start
            self.fail("expected a term")
        return Const(name) if name in self.sig.constants else Var(name)

    def primary(self) -> Formula:
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.peek("@"):
            at = self.pos
            self.pos += 1
            for lab in self.labels:
                if lab and self.text.startswith(lab, self.pos):
                    self.pos += len(lab)
                    return truth(self.algebra.index(lab), lab)
            if self.algebra is None:
                raise UnknownSymbol(f"truth constant at offset {at} needs an algebra")
            raise UnknownSymbol(f"unknown algebra element after '@' at offset {at}")
        self.skip()
        if self.text.startswith("1", self.pos):
            self.pos += 1
            return ONE
        start = self.pos
        name = self.ident()
        if name is None:
            self.fail("expected a formula")
        if self.peek("="):
            self.pos = start
            left = self.term()
            self.expect("=")
            return eq(left, self.term())
        if self.accept("("):
            terms = []
            if not self.accept(")"):
                terms.append(self.term())
                while self.accept(","):
                    terms.append(self.term())
                self.expect(")")
            return self._atom(name, terms, start)
        return self._atom(name, [], start)

    def _atom(self, name: str, terms: list, start: int) -> Formula:
        if not self.sig.has_relation(name):
            raise UnknownSymbol(f"unknown relation symbol {name!r} at offset {start}")
        arity = self.sig.arity(name)
        if arity != len(terms):
            raise ArityMismatch(f"{name} expects {arity} arguments, got {len(terms)} (at offset {start})")
        return atom(name, *terms)


def parse(text: str, sig: Signature, algebra=None) -> Formula:
    """Parse ``text``; ``algebra`` is needed only for ``@label`` constants."""
    return _Parser(text, sig, algebra).parse()
