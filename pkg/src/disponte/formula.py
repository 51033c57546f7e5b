"""Negation-free propositional formulas over axiom variables.

Two representations live here:

* ``MonotoneFormula`` trees (TrueF, FalseF, Var, AndF, OrF) are the public
  currency: pinpointing formulas, explanation DNFs and clash formulas.
* ``Trace`` is a minimal antichain of axiom-index sets, i.e. a monotone DNF
  with absorption already applied.  The tableau keeps its labels in this form
  because conjunction, disjunction and implication are cheap set operations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import AbstractSet, FrozenSet, Iterable, List, Tuple, Union

from .errors import DnfTooLarge

DNF_LIMIT = 10 ** 5


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class AndF:
    parts: Tuple["MonotoneFormula", ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class OrF:
    parts: Tuple["MonotoneFormula", ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


MonotoneFormula = Union[TrueF, FalseF, Var, AndF, OrF]

TRUE = TrueF()
FALSE = FalseF()


def _dedup(parts):
    seen = {}
    for p in parts:
        seen.setdefault(p, None)
    return list(seen)


def conj(parts: Iterable[MonotoneFormula]) -> MonotoneFormula:
    """Conjunction with constant folding, flattening and duplicate removal."""
    flat = []
    for p in parts:
        if isinstance(p, FalseF):
            return FALSE
        if isinstance(p, TrueF):
            continue
        flat.extend(p.parts if isinstance(p, AndF) else (p,))
    flat = _dedup(flat)
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else AndF(tuple(flat))


def disj(parts: Iterable[MonotoneFormula]) -> MonotoneFormula:
    flat = []
    for p in parts:
        if isinstance(p, TrueF):
            return TRUE
        if isinstance(p, FalseF):
            continue
        flat.extend(p.parts if isinstance(p, OrF) else (p,))
    flat = _dedup(flat)
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else OrF(tuple(flat))


def variables(phi: MonotoneFormula) -> FrozenSet[int]:
    if isinstance(phi, Var):
        return frozenset((phi.index,))
    if isinstance(phi, (AndF, OrF)):
        out = set()
        for p in phi.parts:
            out |= variables(p)
        return frozenset(out)
    return frozenset()


def evaluate(phi: MonotoneFormula, valuation: AbstractSet[int]) -> bool:
    """Truth of ``phi`` when exactly the variables in ``valuation`` are true."""
    if isinstance(phi, TrueF):
        return True
    if isinstance(phi, FalseF):
        return False
    if isinstance(phi, Var):
        return phi.index in valuation
    if isinstance(phi, AndF):
        return all(evaluate(p, valuation) for p in phi.parts)
    if isinstance(phi, OrF):
        return any(evaluate(p, valuation) for p in phi.parts)
    raise TypeError(f"not a monotone formula: {phi!r}")


def to_text(phi: MonotoneFormula) -> str:
    """Render with ``F<i>`` variables, ``&``, ``|`` and ``true``/``false``."""
    if isinstance(phi, TrueF):
        return "true"
    if isinstance(phi, FalseF):
        return "false"
    if isinstance(phi, Var):
        return f"F{phi.index}"
    op = " & " if isinstance(phi, AndF) else " | "
    inner = []
    for p in phi.parts:
        s = to_text(p)
        if isinstance(p, (AndF, OrF)):
            s = f"({s})"
        inner.append(s)
    return op.join(inner)


# ---------------------------------------------------------------------------
# Antichain traces
# ---------------------------------------------------------------------------

Trace = FrozenSet[FrozenSet[int]]

T_TRUE: Trace = frozenset((frozenset(),))
T_FALSE: Trace = frozenset()


def t_var(index: int) -> Trace:
    return frozenset((frozenset((index,)),))


def minimal_sets(sets: Iterable[AbstractSet[int]]) -> List[FrozenSet[int]]:
    """Drop every set that is a superset of another; order by (size, sorted indices)."""
    ordered = sorted({frozenset(s) for s in sets}, key=set_key)
    kept: List[FrozenSet[int]] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def set_key(s: AbstractSet[int]):
    return (len(s), sorted(s))


def _antichain(sets) -> Trace:
    kept: List[FrozenSet[int]] = []
    for s in sorted(set(sets), key=len):
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


# The tableau applies these to the same few traces over and over.
@lru_cache(maxsize=1 << 16)
def t_or(a: Trace, b: Trace) -> Trace:
    if not a or t_implies(a, b):
        return b
    if not b or t_implies(b, a):
        return a
    return _antichain(a | b)


@lru_cache(maxsize=1 << 16)
def t_and(a: Trace, b: Trace) -> Trace:
    if a == T_TRUE:
        return b
    if b == T_TRUE:
        return a
    return _antichain(x | y for x in a for y in b)


@lru_cache(maxsize=1 << 16)
def t_implies(a: Trace, b: Trace) -> bool:
    """Whether ``a`` entails ``b`` (every disjunct of a contains one of b)."""
    if a == b or b == T_TRUE:
        return True
    return all(any(y <= x for y in b) for x in a)


def trace_formula(t: Trace) -> MonotoneFormula:
    return disj(conj(Var(i) for i in sorted(s)) for s in minimal_sets(t))


def dnf(phi: MonotoneFormula, limit: int = DNF_LIMIT) -> List[FrozenSet[int]]:
    """Expand to DNF and apply absorption; returns the minimal disjuncts.

    Raises DnfTooLarge when an intermediate product would exceed ``limit``
    disjuncts.
    """
    if isinstance(phi, TrueF):
        return [frozenset()]
    if isinstance(phi, FalseF):
        return []
    if isinstance(phi, Var):
        return [frozenset((phi.index,))]
    if isinstance(phi, OrF):
        acc = []
        for p in phi.parts:
            acc.extend(dnf(p, limit))
            if len(acc) > limit:
                raise DnfTooLarge(len(acc), limit)
        return minimal_sets(acc)
    if isinstance(phi, AndF):
        acc = [frozenset()]
        for p in phi.parts:
            terms = dnf(p, limit)
            if len(acc) * len(terms) > limit:
                raise DnfTooLarge(len(acc) * len(terms), limit)
            acc = minimal_sets(x | y for x in acc for y in terms)
            if not acc:
                return []
        return acc
    raise TypeError(f"not a monotone formula: {phi!r}")
