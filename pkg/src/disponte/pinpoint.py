"""Explanations for an entailment: all MinAs, or one pinpointing formula.

A MinA is returned as a ``frozenset`` of axiom indices.  Lists of MinAs are
always ordered by (cardinality, sorted indices).
"""
from __future__ import annotations

from typing import FrozenSet, Iterable, List, Optional

from .errors import DnfTooLarge, PreconditionError
from .formula import (
    DNF_LIMIT,
    FALSE,
    MonotoneFormula,
    Var,
    conj,
    disj,
    dnf,
    minimal_sets,
    set_key,
    variables,
)
from .kb import KnowledgeBase, Query
from .tableau import DEFAULT_BUDGET, Expansion, is_entailed, query_tableau

MinA = FrozenSet[int]


def _leaves(kb, q, mode, budget, stats):
    """Explanation leaves of the traced tableau; empty when q is not entailed at all."""
    if not is_entailed(kb, q, budget=budget, stats=stats):
        return []
    t = query_tableau(kb, q)
    exp = Expansion(kb, mode, budget=budget)
    try:
        return exp.explanation_leaves(t)
    finally:
        if stats is not None:
            stats["rule_firings"] = stats.get("rule_firings", 0) + exp.firings


def pinpointing_formula(kb: KnowledgeBase, q: Query, *, budget: int = DEFAULT_BUDGET,
                        stats: Optional[dict] = None) -> MonotoneFormula:
    """Conjunction over saturated branches of the disjunction of their clash formulas."""
    leaves = _leaves(kb, q, "pinpoint", budget, stats)
    if not leaves:
        return FALSE
    return conj(disj(c.formula for c in b.clashes) for b in leaves)


def minimize(candidate: Iterable[int], kb: KnowledgeBase, q: Query, *,
             budget: int = DEFAULT_BUDGET) -> MinA:
    """Deletion pass in ascending index order; every kept index is necessary."""
    current = set(candidate)
    if not is_entailed(kb, q, axioms=current, budget=budget):
        raise PreconditionError(f"candidate {sorted(current)} does not entail the query")
    for i in sorted(current):
        trial = current - {i}
        if is_entailed(kb, q, axioms=trial, budget=budget):
            current = trial
    return frozenset(current)


def _combine(per_branch: List[List[FrozenSet[int]]], limit: int) -> List[FrozenSet[int]]:
    # one clash per branch, unioned; supersets absorbed as we go
    acc = [frozenset()]
    for options in per_branch:
        if len(acc) * len(options) > limit:
            raise DnfTooLarge(len(acc) * len(options), limit)
        acc = minimal_sets(a | o for a in acc for o in options)
    return acc


def all_minas(kb: KnowledgeBase, q: Query, *, budget: int = DEFAULT_BUDGET,
              stats: Optional[dict] = None, limit: int = DNF_LIMIT) -> List[MinA]:
    leaves = _leaves(kb, q, "minas", budget, stats)
    if not leaves:
        return []
    per_branch = []
    for b in leaves:
        if not b.clashes:
            return []
        per_branch.append(minimal_sets(variables(c.formula) for c in b.clashes))
    found = {minimize(c, kb, q, budget=budget) for c in _combine(per_branch, limit)}
    return minimal_sets(found)


def formula_to_minas(phi: MonotoneFormula, limit: int = DNF_LIMIT) -> List[MinA]:
    return dnf(phi, limit)


def minas_to_dnf(minas: Iterable[Iterable[int]], kb: Optional[KnowledgeBase] = None) -> MonotoneFormula:
    minas = [frozenset(m) for m in minas]
    if kb is not None:
        for m in minas:
            bad = [i for i in m if not 1 <= i <= len(kb)]
            if bad:
                raise PreconditionError(f"MinA mentions unknown axiom indices {bad}")
    if not minas:
        return FALSE
    return disj(conj(Var(i) for i in sorted(m)) for m in sorted(set(minas), key=set_key))
