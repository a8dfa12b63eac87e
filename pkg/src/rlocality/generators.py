"""Seeded model builders and pair generators for the locality harnesses.

Every generator derives the randomness of its ``i``-th item from
``seed + i`` alone, so any item can be rebuilt from the seed recorded in a
report.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .algebra import FiniteResiduatedLattice
from .hanf import GeneratedPair, hanf_radii
from .queries import GeneratedModel
from .semantics import Model, make_model, relabel
from .syntax import Signature

GRAPH = Signature.of(E=2)


def random_model(rng: random.Random, algebra: FiniteResiduatedLattice, sig: Signature,
                 size: int, density: float = 0.5, values: Sequence[int] | None = None) -> Model:
    """Each tuple is bottom with probability ``1 - density`` and otherwise
    takes a uniformly chosen value from ``values`` (default: every non-bottom
    element).  Constant symbols denote uniformly chosen elements."""
    bot = algebra.flags.bot
    if values is None:
        values = [a for a in algebra.elements if a != bot]
    rels = {}
    for rel, arity in sig.relations:
        rels[rel] = [rng.choice(values) if rng.random() < density else bot
                     for _ in range(size ** arity)]
    consts = {c: rng.randrange(size) for c in sig.constants}
    return make_model(algebra, sig, size, rels, consts)


def random_models(algebra: FiniteResiduatedLattice, seed: int, sizes: Sequence[int] = (1, 2, 3, 4),
                  sig: Signature = GRAPH, density: float = 0.5) -> Iterator[GeneratedModel]:
    for i in itertools.count():
        rng = random.Random(seed + i)
        yield GeneratedModel(random_model(rng, algebra, sig, rng.choice(list(sizes)), density),
                             seed + i, "random")


def disjoint_union(models: Sequence[Model]) -> Model:
    """Disjoint union of constant-free models (bottom between blocks)."""
    if not models:
        raise ValueError("need at least one model")
    first = models[0]
    if any(m.constants for m in models):
        raise ValueError("disjoint unions of models with constants are not defined")
    offsets = list(itertools.accumulate([0] + [m.domain_size for m in models]))
    total = offsets[-1]
    rels = {}
    for rel, arity in first.sig.relations:
        table = {}
        for m, off in zip(models, offsets):
            for args, v in m.tuples(rel):
                table[tuple(a + off for a in args)] = v
        if arity == 0:
            rels[rel] = {(): first.value(rel, ())}
        else:
            rels[rel] = table
    return make_model(first.algebra, first.sig, total, rels, eq_gap=first.eq_gap)


def cycle_model(algebra: FiniteResiduatedLattice, length: int, weight=None,
                directed: bool = False) -> Model:
    """Cycle on ``length`` elements; edges carry ``weight`` (default unit)."""
    w = algebra.unit if weight is None else algebra.index(weight)
    table = {}
    for i in range(length):
        j = (i + 1) % length
        table[(i, j)] = w
        if not directed:
            table[(j, i)] = w
    return make_model(algebra, GRAPH, length, {"E": table})


def directed_chain(algebra: FiniteResiduatedLattice, length: int, weight) -> Model:
    """Directed path ``0 -> 1 -> ... -> length-1``; all other edges bottom."""
    w = algebra.index(weight)
    return make_model(algebra, GRAPH, length, {"E": {(i, i + 1): w for i in range(length - 1)}})


def necklace(algebra: FiniteResiduatedLattice, lengths: Sequence[int], weights: Sequence[int]) -> Model:
    """Disjoint directed cycles where edge ``i -> i+1`` of each cycle carries
    ``weights[i % len(weights)]``."""
    table = {}
    off = 0
    for n in lengths:
        for i in range(n):
            table[(off + i, off + (i + 1) % n)] = weights[i % len(weights)]
        off += n
    return make_model(algebra, GRAPH, off, {"E": table})


def _shuffled_copy(rng: random.Random, m: Model) -> tuple[Model, list[int]]:
    perm = list(m.domain)
    rng.shuffle(perm)
    return relabel(m, perm), perm


def _blocks(rng: random.Random, algebra: FiniteResiduatedLattice, count: int,
            max_size: int) -> list[Model]:
    return [random_model(rng, algebra, GRAPH, rng.randint(1, max_size), 0.6) for _ in range(count)]


def block_shuffle_pair(algebra: FiniteResiduatedLattice, seed: int, max_blocks: int = 3,
                       max_block_size: int = 3) -> GeneratedPair:
    """``N`` is ``M`` with its blocks reordered and its elements renamed;
    the anchor is a random element and its image."""
    rng = random.Random(seed)
    blocks = _blocks(rng, algebra, rng.randint(1, max_blocks), max_block_size)
    copies = [rng.randint(1, 2) for _ in blocks]
    m_parts = [b for b, c in zip(blocks, copies) for _ in range(c)]
    n_parts = list(m_parts)
    rng.shuffle(n_parts)
    m = disjoint_union(m_parts)
    n0 = disjoint_union(n_parts)
    n, perm = _shuffled_copy(rng, n0)
    # locate the image of a random M element: match block instances in order
    m_offsets = list(itertools.accumulate([0] + [p.domain_size for p in m_parts]))
    n_offsets = list(itertools.accumulate([0] + [p.domain_size for p in n_parts]))
    used = set()
    mapping = {}
    for i, part in enumerate(m_parts):
        j = next(j for j, q in enumerate(n_parts) if q is part and j not in used)
        used.add(j)
        for d in part.domain:
            mapping[m_offsets[i] + d] = perm[n_offsets[j] + d]
    a = rng.randrange(m.domain_size)
    return GeneratedPair(m, n, seed, "block-shuffle", ((a,), (mapping[a],)))


def threshold_pair(algebra: FiniteResiduatedLattice, seed: int, k: int,
                   max_block_size: int = 2) -> GeneratedPair:
    """Blocks repeated a different number of times in ``M`` and ``N``, with
    every repeated block occurring more than ``k * e`` times in both."""
    rng = random.Random(seed)
    blocks = _blocks(rng, algebra, rng.randint(1, 2), max_block_size)
    e = max(b.domain_size for b in blocks)
    base = k * e + 1
    m_copies = [base + rng.randint(0, 1) for _ in blocks]
    n_copies = [c + rng.randint(0, 1) for c in m_copies]
    m = disjoint_union([b for b, c in zip(blocks, m_copies) for _ in range(c)])
    n0 = disjoint_union([b for b, c in zip(blocks, n_copies) for _ in range(c)])
    n, _ = _shuffled_copy(rng, n0)
    return GeneratedPair(m, n, seed, "multiplicity-threshold")


def necklace_pair(algebra: FiniteResiduatedLattice, seed: int, radius: int,
                  anchored: bool = False) -> GeneratedPair:
    """Two periodic directed cycles against their concatenation.

    Each cycle is long enough that radius-``radius`` spheres (and, when
    ``anchored``, spheres together with the anchor's sphere) look alike in
    both models.
    """
    rng = random.Random(seed)
    period = rng.randint(1, 2)
    weights = [rng.choice([a for a in algebra.elements if a != algebra.flags.bot])
               for _ in range(period)]
    need = (4 * radius + 3) if anchored else (2 * radius + 2)
    reps = -(-need // period)
    a_len = period * (reps + rng.randint(0, 1))
    b_len = period * (reps + rng.randint(0, 1))
    m = necklace(algebra, [a_len, b_len], weights)
    n0 = necklace(algebra, [a_len + b_len], weights)
    n, perm = _shuffled_copy(rng, n0)
    anchor = ((0,), (perm[0],)) if anchored else ((), ())
    return GeneratedPair(m, n, seed, "necklace", anchor)


def hanf_pairs(algebra: FiniteResiduatedLattice, seed: int, k: int,
               include_necklaces: bool = True) -> Iterator[GeneratedPair]:
    """Cycle through block shuffles, multiplicity thresholds and necklaces."""
    rk = hanf_radii(k)[-1]
    for i in itertools.count():
        s = seed + i
        kind = i % 3 if include_necklaces else i % 2
        if kind == 0:
            yield block_shuffle_pair(algebra, s)
        elif kind == 1:
            yield threshold_pair(algebra, s, k)
        else:
            yield necklace_pair(algebra, s, rk)


def swap_pairs(algebra: FiniteResiduatedLattice, seed: int, k: int,
               necklace_every: int = 2) -> Iterator[GeneratedPair]:
    """Anchored pairs for the radius ``3**k`` swap condition; every
    ``necklace_every``-th pair is a necklace (0 disables them)."""
    for i in itertools.count():
        s = seed + i
        if necklace_every and i % necklace_every == necklace_every - 1:
            yield necklace_pair(algebra, s, 3 ** k, anchored=True)
        else:
            yield block_shuffle_pair(algebra, s)
