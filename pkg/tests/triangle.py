"""Exhaustive comparison of isomorphism types, games and sentence values.

Models are enumerated up to isomorphism.  Every quantity compared here is
isomorphism invariant, so checking one representative per class covers all
models.  Work is spread over a fork-based process pool; the shared state is
set in module globals before the pool is created. On a single core
the work runs in-process.
"""

from __future__ import annotations

import gc
import itertools
import multiprocessing as mp
import os
from dataclasses import dataclass, field

from rlocality.games import k_equivalent
from rlocality.isotypes import build_isotype
from rlocality.semantics import Evaluator, Model, make_model, sentence_sample, standard_expansion
from rlocality.syntax import Signature

GRAPH = Signature.of(E=2)

_STATE: dict = {}


def canonical_graphs(algebra, max_size: int) -> list[Model]:
    """One model per isomorphism class of one-binary-relation models,
    chosen as the lexicographically least relabelled value table."""
    out = []
    for n in range(1, max_size + 1):
        cells = list(itertools.product(range(n), repeat=2))
        perms = list(itertools.permutations(range(n)))
        for vals in itertools.product(range(algebra.carrier_size), repeat=n * n):
            table = dict(zip(cells, vals))
            least = min(tuple(table[(p[a], p[b])] for a, b in cells) for p in perms)
            if least == vals:
                out.append(make_model(algebra, GRAPH, n, {"E": list(vals)}))
    return out


def _rows(indices):
    reps, types, sentences = _STATE["reps"], _STATE["types"], _STATE["sentences"]
    out = []
    for i in indices:
        ev = Evaluator(standard_expansion(reps[i]))
        # bit c of realized[k] says whether the model realises the c-th distinct k-type
        realized = [sum(1 << c for c, phi in enumerate(distinct) if ev.models(phi)) for distinct in types]
        values = tuple(ev.value(s) for s in sentences)
        out.append((i, realized, values))
    return out


def _pairs(indices):
    reps, cols, real, vals = _STATE["reps"], _STATE["cols"], _STATE["real"], _STATE["vals"]
    kmax = _STATE["kmax"]
    bad = []
    count = 0
    for i in indices:
        for j in range(i, len(reps)):
            for k in range(kmax + 1):
                count += 1
                game = k_equivalent(reps[i], reps[j], k).result
                fwd = bool(real[j][k] >> cols[k][i] & 1)
                bwd = bool(real[i][k] >> cols[k][j] & 1)
                if not game == fwd == bwd:
                    bad.append(("type", k, i, j, game, fwd, bwd))
                if game and vals[k][i] != vals[k][j]:
                    bad.append(("value", k, i, j))
    return count, bad


@dataclass
class TriangleResult:
    representatives: int
    classes: dict[int, int]
    pair_checks: int
    sentences: int
    discrepancies: list = field(default_factory=list)


def _chunks(n: int, parts: int) -> list[list[int]]:
    # interleave so that the longer early rows are spread evenly
    return [list(range(s, n, parts)) for s in range(parts)]


def _run(fn, chunks, procs: int):
    if procs == 1:
        return [fn(c) for c in chunks]
    with mp.get_context("fork").Pool(procs) as pool:
        return pool.map(fn, chunks)


def run_triangle(algebra, kmax: int = 2, max_size: int = 3, depth: int = 1,
                 processes: int | None = None) -> TriangleResult:
    # millions of small long-lived objects: cyclic collection only costs time here
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        return _triangle(algebra, kmax, max_size, depth, processes)
    finally:
        if was_enabled:
            gc.enable()


def _triangle(algebra, kmax: int, max_size: int, depth: int, processes: int | None) -> TriangleResult:
    reps = canonical_graphs(algebra, max_size)
    sentences = sentence_sample(GRAPH, algebra, kmax, depth)
    types, cols = [], []
    for k in range(kmax + 1):
        formulas = [build_isotype(m, (), k).formula for m in reps]
        distinct = list(dict.fromkeys(formulas))
        index = {id(f): c for c, f in enumerate(distinct)}
        types.append(distinct)
        cols.append([index[id(f)] for f in formulas])
    procs = processes or min(4, os.cpu_count() or 1)
    _STATE.update(reps=reps, types=types, sentences=sentences, cols=cols, kmax=kmax)
    real: list = [None] * len(reps)
    vals: list = [None] * len(reps)
    for chunk in _run(_rows, _chunks(len(reps), procs * 8), procs):
        for i, r, v in chunk:
            real[i], vals[i] = r, v
    masks = [[s for s, f in enumerate(sentences) if f.qd <= k] for k in range(kmax + 1)]
    # values of the sentences of depth <= k, compared whenever the game says k-equivalent
    _STATE.update(real=real, vals=[[tuple(v[s] for s in mk) for v in vals] for mk in masks])
    result = TriangleResult(len(reps), {k: len(t) for k, t in enumerate(types)}, 0, len(sentences))
    for count, bad in _run(_pairs, _chunks(len(reps), procs * 16), procs):
        result.pair_checks += count
        result.discrepancies += bad
    _STATE.clear()
    return result
