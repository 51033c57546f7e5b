"""Reference semantics by exhaustive enumeration.

Worlds are enumerated by binary counting over the probabilistic axioms (the
lowest-indexed probabilistic axiom is the most significant bit).  Entailment
in each world is decided by the plain tableau with annotations ignored.  All
of this is exponential on purpose: it only exists to check the compiled
pipeline on small knowledge bases.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Mapping, Optional, Tuple

from .errors import CapExceeded
from .formula import MonotoneFormula, evaluate
from .kb import AnnotatedAxiom, KnowledgeBase, Query, choice_probability, world_of
from .tableau import DEFAULT_BUDGET, is_entailed

WORLD_CAP = 20
VALUATION_CAP = 16


@dataclass(frozen=True)
class World:
    selection: Mapping[int, int]
    axioms: Tuple[AnnotatedAxiom, ...]
    prob: float

    @property
    def indices(self) -> frozenset:
        return frozenset(a.index for a in self.axioms)

    def bits(self) -> str:
        return "".join(str(self.selection[i]) for i in sorted(self.selection))


def enumerate_worlds(kb: KnowledgeBase, cap: int = WORLD_CAP) -> Iterator[World]:
    """All 2^n selections with their worlds and probabilities."""
    free = [a.index for a in kb.probabilistic]
    if len(free) > cap:
        raise CapExceeded("probabilistic axioms", len(free), cap)
    return _worlds(kb, free)


def _worlds(kb, free):
    n = len(free)
    for code in range(2 ** n):
        sigma = {i: (code >> (n - 1 - pos)) & 1 for pos, i in enumerate(free)}
        yield World(sigma, world_of(sigma, kb), choice_probability(sigma, kb))


def world_table(kb: KnowledgeBase, q: Query, *, cap: int = WORLD_CAP,
                budget: int = DEFAULT_BUDGET) -> List[Tuple[World, bool]]:
    return [(w, is_entailed(kb, q, axioms=w.indices, budget=budget))
            for w in enumerate_worlds(kb, cap)]


def exact_probability(kb: KnowledgeBase, q: Query, *, cap: int = WORLD_CAP,
                      budget: int = DEFAULT_BUDGET) -> float:
    """Sum of the probabilities of the worlds that entail ``q``."""
    total = 0.0
    for w in enumerate_worlds(kb, cap):
        if is_entailed(kb, q, axioms=w.indices, budget=budget):
            total += w.prob
    return total


def pinpointing_counterexample(kb: KnowledgeBase, q: Query, phi: MonotoneFormula, *,
                               cap: int = VALUATION_CAP,
                               budget: int = DEFAULT_BUDGET) -> Optional[frozenset]:
    """First valuation on which ``phi`` and entailment disagree, or None."""
    n = len(kb)
    if n > cap:
        raise CapExceeded("axioms", n, cap)
    for size in range(n + 1):
        for nu in combinations(kb.indices, size):
            nu = frozenset(nu)
            if is_entailed(kb, q, axioms=nu, budget=budget) != evaluate(phi, nu):
                return nu
    return None


def check_pinpointing(kb: KnowledgeBase, q: Query, phi: MonotoneFormula, *,
                      cap: int = VALUATION_CAP, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``phi`` holds on exactly the valuations whose sub-KB entails ``q``."""
    return pinpointing_counterexample(kb, q, phi, cap=cap, budget=budget) is None
