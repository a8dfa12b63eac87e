"""Partial isomorphisms and the k-round back-and-forth game."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import AnchorOutOfRange, ModelError
from .semantics import Model, check_compatible, extension_consistent, extension_types, nullary_agree


@dataclass(frozen=True)
class PartialIso:
    pairs: tuple[tuple[int, int], ...]

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.pairs)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def _check_game_inputs(m: Model, n: Model) -> None:
    check_compatible(m, n)
    if m.eq_gap != n.eq_gap:
        raise ModelError("models interpret failed equality by different elements")


def _extend(m: Model, n: Model, dom: tuple, img: tuple, pairs) -> tuple[tuple, tuple] | None:
    """Add ``pairs`` one at a time; ``None`` once the map stops being a p.iso."""
    d, i = list(dom), list(img)
    for a, b in pairs:
        if a in d:
            if i[d.index(a)] != b:
                return None
            continue
        if not extension_consistent(m, n, d, i, a, b):
            return None
        d.append(a)
        i.append(b)
    return tuple(d), tuple(i)


def is_partial_iso(m: Model, n: Model, pairs: Iterable[tuple[int, int]]) -> bool:
    """Injective, defined on every constant, and value-preserving on all
    tuples drawn from its domain."""
    check_compatible(m, n)
    pairs = list(pairs)
    for a, b in pairs:
        if not (0 <= a < m.domain_size and 0 <= b < n.domain_size):
            raise AnchorOutOfRange(f"pair ({a}, {b}) lies outside the domains")
    if m.eq_gap != n.eq_gap and len({a for a, _ in pairs}) > 1:
        return False
    if not nullary_agree(m, n):
        return False
    consts = [(m.constants[c], n.constants[c]) for c in m.sig.constants]
    return _extend(m, n, (), (), consts + pairs) is not None


@dataclass
class GameVerdict:
    k: int
    result: bool
    anchor: tuple[tuple[int, ...], tuple[int, ...]]
    memo: dict = field(repr=False, default_factory=dict)
    m: Model | None = field(repr=False, default=None)
    n: Model | None = field(repr=False, default=None)
    start: tuple = field(repr=False, default=((), ()))

    def __bool__(self) -> bool:
        return self.result

    def system(self) -> list[list[list[tuple[int, int]]]]:
        """Back-and-forth system explored by the search: entry ``j`` lists
        the partial isomorphisms known to survive ``j`` more rounds."""
        if not self.result:
            return []
        won = {(d, i, r) for (d, i, r), ok in self.memo.items() if ok}
        # positions with no rounds left are not memoised: rebuild them as the
        # one-point extensions of the positions that survive one more round
        for d, i, r in list(won):
            if r == 1:
                tm, tn = extension_types(self.m, d), extension_types(self.n, i)
                won.add((d, i, 0))
                for a, ta in enumerate(tm):
                    for b, tb in enumerate(tn):
                        if ta == tb and not (ta and ta[0] == "old"):
                            won.add(((*d, a), (*i, b), 0))
        if self.k == 0:
            won.add((*self.start, 0))
        levels = []
        for j in range(self.k + 1):
            states = sorted({(d, i) for d, i, r in won if r >= j})
            levels.append([list(zip(d, i)) for d, i in states])
        return levels

    def to_document(self) -> dict:
        doc = {"k": self.k, "result": self.result,
               "anchor": [list(self.anchor[0]), list(self.anchor[1])]}
        if self.result:
            doc["system"] = [[[list(p) for p in iso] for iso in level] for level in self.system()]
        return doc


def _survives(m: Model, n: Model, dom: tuple, img: tuple, j: int, memo: dict) -> bool:
    if j == 0:
        return True
    key = (dom, img, j)
    hit = memo.get(key)
    if hit is not None:
        return hit
    tm, tn = extension_types(m, dom), extension_types(n, img)
    # one more round survives iff both sides offer the same extension types
    ok = set(tm) == set(tn)
    if ok and j > 1:
        step: dict = {}

        def child(a: int, b: int) -> bool:
            c = step.get((a, b))
            if c is None:
                if a in dom:
                    c = _survives(m, n, dom, img, j - 1, memo)
                else:
                    c = _survives(m, n, (*dom, a), (*img, b), j - 1, memo)
                step[(a, b)] = c
            return c

        ok = all(any(child(a, b) for b, t in enumerate(tn) if t == ta) for a, ta in enumerate(tm)) \
            and all(any(child(a, b) for a, t in enumerate(tm) if t == tb) for b, tb in enumerate(tn))
    memo[key] = ok
    return ok


def k_equivalent(m: Model, n: Model, k: int,
                 anchor: tuple[Sequence[int], Sequence[int]] | None = None) -> GameVerdict:
    """Decide whether the duplicator survives ``k`` rounds from ``anchor``.

    The constants of both models are added to the anchor before play.
    """
    _check_game_inputs(m, n)
    if k < 0:
        raise ValueError("k must be non-negative")
    if anchor is None:
        ma = na = ()
    else:
        ma, na = tuple(anchor[0]), tuple(anchor[1])
        if len(ma) != len(na):
            raise ValueError("anchor tuples must have equal length")
        for a in ma:
            if not 0 <= a < m.domain_size:
                raise AnchorOutOfRange(f"anchor element {a} lies outside the first model")
        for b in na:
            if not 0 <= b < n.domain_size:
                raise AnchorOutOfRange(f"anchor element {b} lies outside the second model")
    memo: dict = {}
    verdict = GameVerdict(k, False, (ma, na), memo, m, n)
    if not nullary_agree(m, n):
        return verdict
    pinned = [(m.constants[c], n.constants[c]) for c in m.sig.constants] + list(zip(ma, na))
    start = _extend(m, n, (), (), pinned) if pinned else ((), ())
    if start is None:
        return verdict
    verdict.start = start
    verdict.result = _survives(m, n, start[0], start[1], k, memo)
    return verdict
