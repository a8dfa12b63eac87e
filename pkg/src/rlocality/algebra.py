"""Finite residuated lattices given by explicit operation tables.

Elements are the integers ``0 .. n-1``; labels are for display only.  The
lattice order is always derived from the meet table.  Tables follow the
argument order of the connectives: ``lres[a][c]`` is ``a \\ c`` and
``rres[c][b]`` is ``c / b``, so the residuation law reads

    a <= c/b   iff   a*b <= c   iff   b <= a\\c
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    AlgebraError,
    LatticeViolation,
    MonoidViolation,
    ResiduationViolation,
    SizeTooSmall,
    TrivialCarrier,
)

Table = tuple[tuple[int, ...], ...]

TABLE_NAMES = ("meet", "join", "fuse", "lres", "rres")


@dataclass(frozen=True)
class AlgebraFlags:
    well_connected: bool
    bot: int | None
    top: int | None
    co_atom: int | None
    is_chain: bool
    has_zero_divisors: bool | None
    up_set_of_unit: frozenset[int]

    @property
    def bounded(self) -> bool:
        return self.bot is not None and self.top is not None


class FiniteResiduatedLattice:
    """A validated finite residuated lattice.

    Instances are produced by :func:`validate_algebra` (or the builders that
    call it) and are immutable afterwards.
    """

    __slots__ = ("labels", "unit", "meet_table", "join_table", "fuse_table",
                 "lres_table", "rres_table", "leq_table", "flags", "_index", "_key")

    def __init__(self, labels, unit, meet, join, fuse, lres, rres, leq, flags):
        self.labels: tuple[str, ...] = labels
        self.unit: int = unit
        self.meet_table: Table = meet
        self.join_table: Table = join
        self.fuse_table: Table = fuse
        self.lres_table: Table = lres
        self.rres_table: Table = rres
        self.leq_table: Table = leq
        self.flags: AlgebraFlags = flags
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._key = (labels, unit, meet, join, fuse, lres, rres)

    # -- basic access ------------------------------------------------------

    @property
    def carrier_size(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    def label(self, a: int) -> str:
        return self.labels[a]

    def index(self, label: str | int) -> int:
        """Element index for a display label (ints are passed through)."""
        if isinstance(label, int):
            if 0 <= label < len(self.labels):
                return label
            raise AlgebraError(f"element index {label} out of range")
        try:
            return self._index[label]
        except KeyError:
            raise AlgebraError(f"unknown algebra element {label!r}") from None

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def fuse(self, a: int, b: int) -> int:
        return self.fuse_table[a][b]

    def lres(self, a: int, b: int) -> int:
        """``a \\ b``"""
        return self.lres_table[a][b]

    def rres(self, a: int, b: int) -> int:
        """``a / b``"""
        return self.rres_table[a][b]

    def leq(self, a: int, b: int) -> bool:
        return self.leq_table[a][b] == 1

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq_table[a][b] == 1

    def is_designated(self, a: int) -> bool:
        """True iff ``1 <= a``."""
        return self.leq_table[self.unit][a] == 1

    def meet_all(self, values: Iterable[int]) -> int:
        it = iter(values)
        try:
            acc = next(it)
        except StopIteration:
            if self.flags.top is None:
                raise AlgebraError("empty meet in an algebra without top") from None
            return self.flags.top
        m = self.meet_table
        for v in it:
            acc = m[acc][v]
        return acc

    def join_all(self, values: Iterable[int]) -> int:
        it = iter(values)
        try:
            acc = next(it)
        except StopIteration:
            if self.flags.bot is None:
                raise AlgebraError("empty join in an algebra without bottom") from None
            return self.flags.bot
        j = self.join_table
        for v in it:
            acc = j[acc][v]
        return acc

    # -- identity ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteResiduatedLattice):
            return NotImplemented
        return self is other or self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FiniteResiduatedLattice({list(self.labels)})"

    def to_document(self) -> dict:
        return {
            "labels": list(self.labels),
            "unit": self.unit,
            "meet": [list(r) for r in self.meet_table],
            "join": [list(r) for r in self.join_table],
            "fuse": [list(r) for r in self.fuse_table],
            "lres": [list(r) for r in self.lres_table],
            "rres": [list(r) for r in self.rres_table],
        }


# -- validation ------------------------------------------------------------


def _freeze(name: str, table, n: int) -> Table:
    rows = tuple(tuple(int(v) for v in row) for row in table)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise AlgebraError(f"{name} table is not {n}x{n}")
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise AlgebraError(f"{name}[{i}][{j}] = {v} is outside the carrier")
    return rows


def _check_lattice(meet: Table, join: Table, n: int) -> None:
    E = range(n)
    for a in E:
        if meet[a][a] != a:
            raise LatticeViolation(f"meet is not idempotent at {a}", (a,))
        if join[a][a] != a:
            raise LatticeViolation(f"join is not idempotent at {a}", (a,))
    for a, b in itertools.product(E, E):
        if meet[a][b] != meet[b][a]:
            raise LatticeViolation(f"meet is not commutative at ({a}, {b})", (a, b))
        if join[a][b] != join[b][a]:
            raise LatticeViolation(f"join is not commutative at ({a}, {b})", (a, b))
        if meet[a][join[a][b]] != a:
            raise LatticeViolation(f"absorption a&(a|b)=a fails at ({a}, {b})", (a, b))
        if join[a][meet[a][b]] != a:
            raise LatticeViolation(f"absorption a|(a&b)=a fails at ({a}, {b})", (a, b))
    for a, b, c in itertools.product(E, E, E):
        if meet[meet[a][b]][c] != meet[a][meet[b][c]]:
            raise LatticeViolation(f"meet is not associative at ({a}, {b}, {c})", (a, b, c))
        if join[join[a][b]][c] != join[a][join[b][c]]:
            raise LatticeViolation(f"join is not associative at ({a}, {b}, {c})", (a, b, c))


def _check_monoid(fuse: Table, unit: int, n: int) -> None:
    E = range(n)
    for a in E:
        if fuse[unit][a] != a or fuse[a][unit] != a:
            raise MonoidViolation(f"{unit} is not a two-sided unit at {a}", (unit, a))
    for a, b, c in itertools.product(E, E, E):
        if fuse[fuse[a][b]][c] != fuse[a][fuse[b][c]]:
            raise MonoidViolation(f"fusion is not associative at ({a}, {b}, {c})", (a, b, c))


def _check_residuation(fuse: Table, lres: Table, rres: Table, leq: Table, n: int) -> None:
    E = range(n)
    for a, b, c in itertools.product(E, E, E):
        left = leq[a][rres[c][b]]
        mid = leq[fuse[a][b]][c]
        right = leq[b][lres[a][c]]
        if not left == mid == right:
            raise ResiduationViolation(
                f"residuation fails at a={a}, b={b}, c={c}: "
                f"a<=c/b is {bool(left)}, a*b<=c is {bool(mid)}, b<=a\\c is {bool(right)}",
                (a, b, c),
            )


def compute_flags(meet: Table, join: Table, fuse: Table, leq: Table, unit: int, n: int) -> AlgebraFlags:
    """Brute-force computation of every structural flag."""
    E = range(n)
    bot = next((b for b in E if all(leq[b][a] for a in E)), None)
    top = next((t for t in E if all(leq[a][t] for a in E)), None)
    is_chain = all(leq[a][b] or leq[b][a] for a in E for b in E)
    up = frozenset(a for a in E if leq[unit][a])
    well_connected = all(
        (a in up) or (b in up) for a in E for b in E if join[a][b] in up
    )
    co_atom = None
    for c in E:
        if c != unit and all(bool(leq[a][c]) == (a not in up) for a in E):
            co_atom = c
            break
    zero_div = None
    if bot is not None:
        zero_div = any(fuse[a][b] == bot for a in E for b in E if a != bot and b != bot)
    return AlgebraFlags(
        well_connected=well_connected,
        bot=bot,
        top=top,
        co_atom=co_atom,
        is_chain=is_chain,
        has_zero_divisors=zero_div,
        up_set_of_unit=up,
    )


def validate_algebra(labels: Sequence[str], unit: int, meet, join, fuse, lres, rres) -> FiniteResiduatedLattice:
    """Check every law exhaustively and return the algebra with its flags.

    Raises LatticeViolation, MonoidViolation or ResiduationViolation with the
    witnessing elements, or TrivialCarrier for a one-element carrier.
    """
    labels = tuple(str(lab) for lab in labels)
    n = len(labels)
    if n < 2:
        raise TrivialCarrier("a residuated lattice needs at least two elements")
    if len(set(labels)) != n:
        raise AlgebraError("element labels must be unique")
    if not 0 <= unit < n:
        raise AlgebraError(f"unit {unit} is outside the carrier")
    tables = {name: _freeze(name, t, n) for name, t in
              zip(TABLE_NAMES, (meet, join, fuse, lres, rres))}
    meet_t, join_t, fuse_t = tables["meet"], tables["join"], tables["fuse"]
    _check_lattice(meet_t, join_t, n)
    leq = tuple(tuple(1 if meet_t[a][b] == a else 0 for b in range(n)) for a in range(n))
    _check_monoid(fuse_t, unit, n)
    _check_residuation(fuse_t, tables["lres"], tables["rres"], leq, n)
    flags = compute_flags(meet_t, join_t, fuse_t, leq, unit, n)
    return FiniteResiduatedLattice(labels, unit, meet_t, join_t, fuse_t,
                                   tables["lres"], tables["rres"], leq, flags)


def algebra_from_document(doc: dict) -> FiniteResiduatedLattice:
    if "builtin" in doc:
        return builtin_algebra(doc["builtin"], doc.get("n", 2), labels=doc.get("labels"))
    try:
        return validate_algebra(doc["labels"], doc["unit"], *(doc[k] for k in TABLE_NAMES))
    except KeyError as exc:
        raise AlgebraError(f"algebra document is missing key {exc.args[0]!r}") from None


# -- built-in chains ---------------------------------------------------------


def _chain_labels(n: int) -> list[str]:
    return [str(Fraction(k, n - 1)) for k in range(n)]


def _chain_tables(n: int, fuse, impl):
    E = range(n)
    meet = [[min(a, b) for b in E] for a in E]
    join = [[max(a, b) for b in E] for a in E]
    fus = [[fuse(a, b) for b in E] for a in E]
    res = [[impl(a, b) for b in E] for a in E]
    # commutative: a\c = a->c and c/b = b->c
    rres = [[res[b][c] for b in E] for c in E]
    return meet, join, fus, res, rres


def lukasiewicz_chain(n: int, labels: Sequence[str] | None = None) -> FiniteResiduatedLattice:
    """The n-element MV-chain on {k/(n-1)}; ``x*y = max(0, x+y-1)``."""
    if n < 2:
        raise SizeTooSmall("a chain needs n >= 2")
    top = n - 1
    tables = _chain_tables(n, lambda a, b: max(0, a + b - top), lambda a, b: min(top, top - a + b))
    return validate_algebra(labels or _chain_labels(n), top, *tables)


def goedel_chain(n: int, labels: Sequence[str] | None = None) -> FiniteResiduatedLattice:
    """The n-element Goedel chain; ``x*y = min(x, y)``, ``x->y = 1 if x<=y else y``."""
    if n < 2:
        raise SizeTooSmall("a chain needs n >= 2")
    top = n - 1
    tables = _chain_tables(n, min, lambda a, b: top if a <= b else b)
    return validate_algebra(labels or _chain_labels(n), top, *tables)


def boolean2() -> FiniteResiduatedLattice:
    return lukasiewicz_chain(2)


_BUILTINS = {
    "lukasiewicz_n": lukasiewicz_chain,
    "goedel_n": goedel_chain,
}


def builtin_algebra(name: str, n: int = 2, labels: Sequence[str] | None = None) -> FiniteResiduatedLattice:
    """Construct one of ``lukasiewicz_n``, ``goedel_n`` or ``boolean2``.

    Short aliases ``L``/``G`` and ``lukasiewicz``/``goedel`` are accepted.
    """
    key = name.lower()
    aliases = {"l": "lukasiewicz_n", "lukasiewicz": "lukasiewicz_n",
               "g": "goedel_n", "goedel": "goedel_n", "godel": "goedel_n"}
    key = aliases.get(key, key)
    if key in ("boolean2", "boolean", "b2"):
        return boolean2()
    if key not in _BUILTINS:
        raise AlgebraError(f"unknown built-in algebra {name!r}")
    return _BUILTINS[key](n, labels)


# -- further constructions (non-chains, used for property tests) -------------


def product_algebra(a: FiniteResiduatedLattice, b: FiniteResiduatedLattice) -> FiniteResiduatedLattice:
    """Direct product with componentwise operations."""
    pairs = [(x, y) for x in a.elements for y in b.elements]
    idx = {p: i for i, p in enumerate(pairs)}

    def lift(fa, fb):
        return [[idx[(fa[p[0]][q[0]], fb[p[1]][q[1]])] for q in pairs] for p in pairs]

    labels = [f"({a.label(x)},{b.label(y)})" for x, y in pairs]
    return validate_algebra(
        labels, idx[(a.unit, b.unit)],
        lift(a.meet_table, b.meet_table), lift(a.join_table, b.join_table),
        lift(a.fuse_table, b.fuse_table), lift(a.lres_table, b.lres_table),
        lift(a.rres_table, b.rres_table),
    )


def heyting_from_order(labels: Sequence[str], leq) -> FiniteResiduatedLattice:
    """Heyting algebra (fusion = meet) on a finite distributive lattice.

    ``leq(i, j)`` decides the order on indices.  Non-lattices and
    non-distributive lattices are rejected by validation.
    """
    n = len(labels)
    E = range(n)
    le = [[bool(leq(i, j)) for j in E] for i in E]

    def bound(cands, better):
        for c in cands:
            if all(better(c, d) for d in cands):
                return c
        raise LatticeViolation("order is not a lattice", tuple(cands))

    meet = [[bound([c for c in E if le[c][a] and le[c][b]], lambda c, d: le[d][c]) for b in E] for a in E]
    join = [[bound([c for c in E if le[a][c] and le[b][c]], lambda c, d: le[c][d]) for b in E] for a in E]
    top = bound(list(E), lambda c, d: le[d][c])
    impl = [[bound([c for c in E if le[meet[c][a]][b]], lambda c, d: le[d][c]) for b in E] for a in E]
    rres = [[impl[b][c] for b in E] for c in E]
    return validate_algebra(labels, top, meet, join, meet, impl, rres)
