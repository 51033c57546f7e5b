"""Seeded random knowledge bases with entailed queries, for cross-checking."""
from __future__ import annotations

import random

from disponte.kb import (
    And,
    Atomic,
    BOTTOM,
    ClassAssertion,
    Exists,
    ForAll,
    IsInstance,
    IsSubClass,
    KnowledgeBase,
    Not,
    Or,
    PropertyAssertion,
    SubClassOf,
    TOP,
)
from disponte.tableau import is_entailed

CONCEPTS = ("A", "B", "C", "D")
ROLES = ("r", "s")
INDIVIDUALS = ("a", "b", "c")


def random_concept(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.45:
        roll = rng.random()
        if roll < 0.01:
            return TOP
        if roll < 0.02:
            return BOTTOM
        return Atomic(rng.choice(CONCEPTS))
    kind = rng.choice(("not", "and", "or", "some", "all", "some"))
    if kind == "not":
        return Not(random_concept(rng, depth - 1))
    if kind in ("and", "or"):
        parts = tuple(random_concept(rng, depth - 1) for _ in range(2))
        return And(parts) if kind == "and" else Or(parts)
    role = rng.choice(ROLES)
    filler = random_concept(rng, depth - 1)
    return Exists(role, filler) if kind == "some" else ForAll(role, filler)


def random_axiom(rng: random.Random, depth: int, gci: bool = True):
    roll = rng.random()
    if roll < 0.35 or (not gci and roll >= 0.65):
        return ClassAssertion(random_concept(rng, depth), rng.choice(INDIVIDUALS))
    if roll < 0.65:
        return PropertyAssertion(rng.choice(ROLES), rng.choice(INDIVIDUALS), rng.choice(INDIVIDUALS))
    return SubClassOf(random_concept(rng, depth), random_concept(rng, depth))


def random_kb(rng: random.Random, *, max_axioms=12, max_prob=8, depth=3, min_axioms=2,
              max_gcis=4):
    """Every GCI applies at every tableau node, so their number is capped;
    glass-box pinpointing is exponential in it."""
    n = rng.randint(min_axioms, max_axioms)
    entries = []
    n_prob = n_gci = 0
    for _ in range(n):
        ax = random_axiom(rng, rng.randint(0, depth), gci=n_gci < max_gcis)
        n_gci += isinstance(ax, SubClassOf)
        if n_prob < max_prob and rng.random() < 0.6:
            n_prob += 1
            entries.append((round(rng.uniform(0.05, 1.0), 2), ax))
        else:
            entries.append(ax)
    return KnowledgeBase.of(*entries)


def candidate_queries(rng: random.Random):
    qs = [IsInstance(Atomic(c), i) for c in CONCEPTS for i in INDIVIDUALS]
    qs += [IsInstance(Exists(r, Atomic(c)), i) for r in ROLES for c in CONCEPTS for i in INDIVIDUALS]
    qs += [IsSubClass(Atomic(c), Atomic(d)) for c in CONCEPTS for d in CONCEPTS if c != d]
    qs += [IsSubClass(Atomic(c), Exists(r, Atomic(d))) for c in CONCEPTS for d in CONCEPTS for r in ROLES]
    rng.shuffle(qs)
    return qs


def entailed_corpus(seed: int, count: int, **kw):
    """``count`` pairs (kb, query) with the query entailed by the full KB."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        kb = random_kb(rng, **kw)
        for q in candidate_queries(rng)[:12]:
            if is_entailed(kb, q):
                out.append((kb, q))
                break
    return out
