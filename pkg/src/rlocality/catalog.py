"""Named example models used by the reproduction commands and tests."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FiniteResiduatedLattice, goedel_chain, lukasiewicz_chain
from .generators import GRAPH, cycle_model, directed_chain, disjoint_union
from .semantics import Model, make_model
from .syntax import Formula, Signature, parse


@dataclass(frozen=True)
class ExamplePair:
    algebra: FiniteResiduatedLattice
    m: Model
    n: Model
    sentence: Formula | None = None


def two_point_asymmetry(algebra: FiniteResiduatedLattice | None = None, a="0", b="1/2") -> ExamplePair:
    """Two-element weighted graphs with unit loops whose cross edges are
    ``(a, a)`` in ``M`` and ``(b, a)`` in ``N``; the sentence asks every edge
    to be bounded by its reverse."""
    A = algebra or goedel_chain(3)
    u = A.unit
    m = make_model(A, GRAPH, 2, {"E": {(0, 0): u, (1, 1): u, (0, 1): a, (1, 0): a}}, names=["s", "t"])
    n = make_model(A, GRAPH, 2, {"E": {(0, 0): u, (1, 1): u, (0, 1): b, (1, 0): a}}, names=["s", "t"])
    phi = parse(r"forall x forall y (E(x, y) \ E(y, x))", GRAPH)
    return ExamplePair(A, m, n, phi)


MONADIC = Signature.of(P=1)


def single_point_pair(algebra: FiniteResiduatedLattice | None = None) -> ExamplePair:
    """One-element models with ``P`` at 3/4 and at 1/2 over the five-element
    Goedel chain."""
    A = algebra or goedel_chain(5)
    m = make_model(A, MONADIC, 1, {"P": ["3/4"]}, names=["s"])
    n = make_model(A, MONADIC, 1, {"P": ["1/2"]}, names=["s"])
    return ExamplePair(A, m, n, parse("exists x P(x)", MONADIC))


def cycle_pair(half: int = 4, algebra: FiniteResiduatedLattice | None = None) -> ExamplePair:
    """A cycle of length ``2 * half`` against two cycles of length ``half``
    (unit weights, both directions)."""
    A = algebra or lukasiewicz_chain(3)
    m = cycle_model(A, 2 * half)
    n = disjoint_union([cycle_model(A, half), cycle_model(A, half)])
    return ExamplePair(A, m, n)


def threshold_chain(radius: int = 1, algebra: FiniteResiduatedLattice | None = None,
                    t: str = "1/2") -> tuple[Model, tuple[int, int]]:
    """Directed chain of length ``4 * radius + 4`` with edges at ``t`` and the
    two zero-based positions ``radius`` and ``3 * radius + 2``."""
    A = algebra or lukasiewicz_chain(3)
    m = directed_chain(A, 4 * radius + 4, t)
    return m, (radius, 3 * radius + 2)
