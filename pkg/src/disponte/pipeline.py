"""Explanations -> formula -> BDD -> probability, for either explanation mode."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from . import bdd as bddlib
from .errors import PreconditionError
from .formula import MonotoneFormula, evaluate
from .kb import KnowledgeBase, Query
from .pinpoint import MinA, all_minas, formula_to_minas, minas_to_dnf, pinpointing_formula
from .tableau import DEFAULT_BUDGET, MODES


@dataclass
class Answer:
    query: Query
    mode: str
    entailed: bool
    minas: List[MinA]
    formula: MonotoneFormula
    probability: float
    bdd: bddlib.Bdd
    rule_firings: int


def variable_order(kb: KnowledgeBase, indices: Optional[Sequence[int]] = None) -> bddlib.VarOrder:
    if indices is None:
        return bddlib.VarOrder(kb.indices)
    if sorted(indices) != list(kb.indices):
        raise PreconditionError(
            f"variable order must be a permutation of the axiom indices 1..{len(kb)}")
    return bddlib.VarOrder(indices)


def formula_probability(phi: MonotoneFormula, kb: KnowledgeBase,
                        order: Optional[bddlib.VarOrder] = None):
    """Compile ``phi``, fix certain axioms to true, evaluate; returns (p, diagram)."""
    order = order or variable_order(kb)
    diagram = bddlib.build(phi, order)
    for a in kb.certain:
        diagram = bddlib.condition(diagram, a.index, 1)
    return bddlib.probability(diagram, kb.probabilities), diagram


def answer(kb: KnowledgeBase, q: Query, mode: str = "pinpoint", *,
           order: Optional[Sequence[int]] = None, budget: int = DEFAULT_BUDGET) -> Answer:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    var_order = variable_order(kb, order)
    stats: dict = {}
    if mode == "pinpoint":
        phi = pinpointing_formula(kb, q, budget=budget, stats=stats)
        minas = formula_to_minas(phi)
    else:
        minas = all_minas(kb, q, budget=budget, stats=stats)
        phi = minas_to_dnf(minas, kb)
    p, diagram = formula_probability(phi, kb, var_order)
    return Answer(q, mode, evaluate(phi, frozenset(kb.indices)), minas, phi, p, diagram,
                  stats.get("rule_firings", 0))
