"""Gaifman graphs, hop distance, spheres and sphere-type classification."""

from __future__ import annotations

import itertools
import math
import weakref
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import FiniteResiduatedLattice
from .errors import InvalidThreshold, RadiusMismatch, UnboundedAlgebra
from .semantics import Model, check_compatible, element_invariant, find_isomorphism
from .syntax import Signature

INF = math.inf


@dataclass(frozen=True)
class GaifmanMetric:
    """Adjacency test applied to relation values.

    ``variant`` is ``"models"`` (value lies above the unit), ``"ge"``
    (value >= threshold) or ``"gt"`` (value > threshold).
    """

    variant: str
    threshold: int | None = None

    def __post_init__(self):
        if self.variant not in ("models", "ge", "gt"):
            raise InvalidThreshold(f"unknown metric variant {self.variant!r}")
        if self.variant == "models" and self.threshold is not None:
            raise InvalidThreshold("the modelling metric takes no threshold")
        if self.variant != "models" and self.threshold is None:
            raise InvalidThreshold("threshold metrics need an element")

    def check(self, algebra: FiniteResiduatedLattice) -> None:
        if self.threshold is not None and not 0 <= self.threshold < algebra.carrier_size:
            raise InvalidThreshold(f"threshold {self.threshold} is not an algebra element")

    def passes(self, algebra: FiniteResiduatedLattice, value: int) -> bool:
        if self.variant == "models":
            return algebra.is_designated(value)
        if self.variant == "ge":
            return algebra.leq(self.threshold, value)
        return algebra.lt(self.threshold, value)

    def describe(self, algebra: FiniteResiduatedLattice | None = None) -> str:
        if self.variant == "models":
            return "models"
        lab = algebra.label(self.threshold) if algebra is not None else str(self.threshold)
        return f"{self.variant}:{lab}"


def modelling() -> GaifmanMetric:
    return GaifmanMetric("models")


def threshold_ge(t: int) -> GaifmanMetric:
    return GaifmanMetric("ge", t)


def threshold_gt(t: int) -> GaifmanMetric:
    return GaifmanMetric("gt", t)


def strict_bottom(algebra: FiniteResiduatedLattice) -> GaifmanMetric:
    """The strict threshold metric at the bottom element."""
    if algebra.flags.bot is None:
        raise UnboundedAlgebra("the algebra has no bottom element")
    return GaifmanMetric("gt", algebra.flags.bot)


def parse_metric(text: str, algebra: FiniteResiduatedLattice) -> GaifmanMetric:
    """``models``, ``ge:LABEL``, ``gt:LABEL`` or plain ``gt`` (strict bottom)."""
    text = text.strip()
    if text == "models":
        return modelling()
    if text == "gt":
        return strict_bottom(algebra)
    variant, sep, label = text.partition(":")
    if not sep or variant not in ("ge", "gt"):
        raise InvalidThreshold(f"cannot read metric {text!r}")
    try:
        t = algebra.index(label)
    except Exception:
        raise InvalidThreshold(f"unknown threshold element {label!r}") from None
    return GaifmanMetric(variant, t)


# -- graphs and distances ------------------------------------------------------

_CACHE: "weakref.WeakKeyDictionary[Model, dict]" = weakref.WeakKeyDictionary()


def _cache(m: Model) -> dict:
    c = _CACHE.get(m)
    if c is None:
        c = {}
        _CACHE[m] = c
    return c


def gaifman_graph(m: Model, metric: GaifmanMetric) -> tuple[frozenset[int], ...]:
    """Neighbour sets; ``x in graph[x]`` records a passing tuple through x."""
    metric.check(m.algebra)
    key = ("graph", metric)
    c = _cache(m)
    if key in c:
        return c[key]
    adj = [set() for _ in m.domain]
    A = m.algebra
    for rel, arity in m.sig.relations:
        if arity == 0:
            continue
        for args, v in m.tuples(rel):
            if metric.passes(A, v):
                members = set(args)
                for a in members:
                    adj[a].update(members)
    out = tuple(frozenset(s) for s in adj)
    c[key] = out
    return out


def distances_from(m: Model, metric: GaifmanMetric, source: int) -> list[float]:
    key = ("dist", metric, source)
    c = _cache(m)
    if key in c:
        return c[key]
    graph = gaifman_graph(m, metric)
    dist: list[float] = [INF] * m.domain_size
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in graph[x]:
            if dist[y] == INF:
                dist[y] = dist[x] + 1
                queue.append(y)
    c[key] = dist
    return dist


def distance(m: Model, metric: GaifmanMetric, x: int, y: int) -> float:
    return distances_from(m, metric, x)[y]


def ball(m: Model, metric: GaifmanMetric, centers: Sequence[int], r: int) -> frozenset[int]:
    """Elements within ``r`` of a center or of a constant."""
    sources = list(centers) + list(m.constants.values())
    out = set()
    for s in sources:
        dist = distances_from(m, metric, s)
        out.update(d for d in m.domain if dist[d] <= r)
    return frozenset(out)


def gaifman_matrix(m: Model) -> list[list[int | None]]:
    """Join of relation values over tuples containing both elements;
    ``None`` where no tuple contains the pair."""
    A = m.algebra
    out: list[list[int | None]] = [[None] * m.domain_size for _ in m.domain]
    for rel, arity in m.sig.relations:
        if arity == 0:
            continue
        for args, v in m.tuples(rel):
            members = set(args)
            for a in members:
                row = out[a]
                for b in members:
                    row[b] = v if row[b] is None else A.join(row[b], v)
    return out


# -- spheres -------------------------------------------------------------------


def center_constant_names(sig: Signature, count: int) -> list[str]:
    taken = set(sig.constants) | {n for n, _ in sig.relations}
    prefix = "c"
    while any(f"{prefix}{i}" in taken for i in range(1, count + 1)):
        prefix += "c"
    return [f"{prefix}{i}" for i in range(1, count + 1)]


def induced_submodel(m: Model, elements: Sequence[int], pointed: Sequence[int] = ()) -> Model:
    """Restriction of ``m`` to ``elements`` (in the given order), with fresh
    constants naming ``pointed``.  Every parent constant must be included."""
    elements = list(elements)
    pos = {d: i for i, d in enumerate(elements)}
    names = center_constant_names(m.sig, len(pointed))
    sig = m.sig.with_constants(names)
    rels = {}
    for rel, arity in m.sig.relations:
        rels[rel] = tuple(m.value(rel, args)
                          for args in itertools.product(elements, repeat=arity))
    consts = {c: pos[v] for c, v in m.constants.items()}
    consts.update({nm: pos[d] for nm, d in zip(names, pointed)})
    el_names = tuple(m.element_name(d) for d in elements) if m.names else None
    return Model(m.algebra, sig, len(elements), rels, consts, m.eq_gap, m.expanded, el_names)


@dataclass(frozen=True, eq=False)
class Sphere:
    parent: Model
    metric: GaifmanMetric
    center: tuple[int, ...]
    radius: int
    elements: tuple[int, ...]
    model: Model

    @property
    def size(self) -> int:
        return len(self.elements)

    def invariant(self) -> tuple:
        m = self.model
        return (m.domain_size, tuple(sorted(Counter(element_invariant(m, d) for d in m.domain).items())))


def sphere(m: Model, metric: GaifmanMetric, center: Sequence[int], r: int) -> Sphere:
    if r < 0:
        raise ValueError("radius must be non-negative")
    center = tuple(center)
    elements = tuple(sorted(ball(m, metric, center, r)))
    key = ("sphere", metric, center, r)
    c = _cache(m)
    if key not in c:
        c[key] = Sphere(m, metric, center, r, elements, induced_submodel(m, elements, center))
    return c[key]


def same_sphere_type(s1: Sphere, s2: Sphere) -> bool:
    if s1.radius != s2.radius:
        raise RadiusMismatch(f"radii {s1.radius} and {s2.radius} differ")
    if s1.metric != s2.metric:
        raise RadiusMismatch("spheres were built with different metrics")
    if len(s1.center) != len(s2.center):
        raise RadiusMismatch("centers have different lengths")
    return find_isomorphism(s1.model, s2.model) is not None


@dataclass
class SphereTypeIndex:
    """Partition of all ``arity``-tuples of several models by sphere type."""

    radius: int
    metric: GaifmanMetric
    arity: int
    representatives: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)
    members: dict[tuple[int, tuple[int, ...]], int] = field(default_factory=dict)
    counts: list[list[int]] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)

    def class_of(self, model_index: int, tup: Sequence[int]) -> int:
        return self.members[(model_index, tuple(tup))]

    def to_document(self) -> dict:
        return {
            "radius": self.radius,
            "arity": self.arity,
            "classes": [
                {"id": i, "representative": {"model": mi, "center": list(t)},
                 "sphere_size": self.sizes[i], "counts": self.counts[i]}
                for i, (mi, t) in enumerate(self.representatives)
            ],
        }


def sphere_type_index(models: Sequence[Model], metric: GaifmanMetric, r: int,
                      arity: int = 1) -> SphereTypeIndex:
    for other in models[1:]:
        check_compatible(models[0], other)
    idx = SphereTypeIndex(r, metric, arity)
    buckets: dict[tuple, list[int]] = {}
    spheres: list[Sphere] = []
    for mi, m in enumerate(models):
        for tup in itertools.product(m.domain, repeat=arity):
            s = sphere(m, metric, tup, r)
            inv = s.invariant()
            found = None
            for cid in buckets.get(inv, ()):
                if find_isomorphism(spheres[cid].model, s.model) is not None:
                    found = cid
                    break
            if found is None:
                found = len(spheres)
                spheres.append(s)
                buckets.setdefault(inv, []).append(found)
                idx.representatives.append((mi, tup))
                idx.counts.append([0] * len(models))
                idx.sizes.append(s.size)
            idx.members[(mi, tup)] = found
            idx.counts[found][mi] += 1
    return idx
