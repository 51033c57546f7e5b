import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disponte.errors import BudgetExceeded
from disponte.formula import TRUE, Var, variables
from disponte.kb import (
    And,
    Atomic,
    ClassAssertion,
    Exists,
    ForAll,
    IsInstance,
    KnowledgeBase,
    Not,
    Or,
    PropertyAssertion,
    SubClassOf,
    is_nnf,
    negated_query_assertions,
)
from disponte.oracle import world_table
from disponte.tableau import Expansion, init_tableau, is_entailed, query_tableau, saturate
from kbgen import candidate_queries, random_axiom, random_kb

A, B, C = Atomic("A"), Atomic("B"), Atomic("C")
seeds = st.integers(0, 2 ** 32 - 1)


def test_init_example1(example1, nature_lover):
    extra, _ = negated_query_assertions(nature_lover)
    t = init_tableau(example1, extra)
    assert sorted(t.nodes) == ["fluffy", "kevin", "tom"]
    edges = sorted((x, y, r) for x, y, r, _ in t.edge_list())
    assert edges == [("kevin", "fluffy", "hasAnimal"), ("kevin", "tom", "hasAnimal")]
    assert t.label_formulas("kevin") == {Not(Atomic("NatureLover")): TRUE}
    assert t.label_formulas("tom") == {Atomic("Cat"): Var(5)}


def test_init_empty_kb():
    t = init_tableau(KnowledgeBase(), [ClassAssertion(A, "x0")])
    assert t.nodes == ["x0"]
    assert t.label_formulas("x0") == {A: TRUE}


def test_init_tbox_only():
    kb = KnowledgeBase.of(SubClassOf(A, B))
    t = init_tableau(kb, [ClassAssertion(C, "x0")])
    assert t.nodes == ["x0"]


def _single(concept):
    kb = KnowledgeBase.of(ClassAssertion(concept, "a"))
    return kb, init_tableau(kb, [])


def test_and_rule():
    kb, t = _single(And((A, B)))
    [leaf] = saturate(t, kb)
    assert leaf.label_formulas("a") == {And((A, B)): Var(1), A: Var(1), B: Var(1)}


def test_or_rule_splits():
    kb, t = _single(Or((A, B)))
    leaves = saturate(t, kb)
    assert len(leaves) == 2
    assert [A in leaf.labels["a"] for leaf in leaves] == [True, False]
    assert all(leaf.is_clash_free() for leaf in leaves)


def test_clash_recorded():
    kb = KnowledgeBase.of(ClassAssertion(A, "a"), ClassAssertion(Not(A), "a"))
    [leaf] = saturate(init_tableau(kb, []), kb)
    [clash] = leaf.clashes
    assert (clash.node, clash.concept) == ("a", A)
    assert variables(clash.formula) == {1, 2}


def test_saturation_keeps_nnf(example1, nature_lover):
    for mode in ("minas", "pinpoint"):
        for leaf in saturate(query_tableau(example1, nature_lover), example1, mode):
            assert all(is_nnf(c) for lab in leaf.labels.values() for c in lab)
            for x, y, _, _ in leaf.edge_list():
                assert x in leaf.labels and y in leaf.labels


def test_cyclic_tbox_terminates():
    # every A has an r-successor that is A again; blocking stops the chain
    kb = KnowledgeBase.of(SubClassOf(A, Exists("r", A)), ClassAssertion(A, "a"))
    assert not is_entailed(kb, IsInstance(B, "a"))
    kb2 = KnowledgeBase.of(SubClassOf(A, Exists("r", A)), SubClassOf(A, ForAll("r", B)),
                           ClassAssertion(A, "a"))
    assert is_entailed(kb2, IsInstance(Exists("r", B), "a"))


def test_budget_is_explicit():
    kb = KnowledgeBase.of(*[ClassAssertion(Or((Atomic(f"P{i}"), Atomic(f"Q{i}"))), "a")
                            for i in range(6)])
    with pytest.raises(BudgetExceeded):
        is_entailed(kb, IsInstance(A, "a"), budget=5)


@pytest.mark.parametrize("kb, query, expected", [
    (None, IsInstance(Atomic("NatureLover"), "kevin"), True),
    (KnowledgeBase(), IsInstance(A, "a"), False),
    (KnowledgeBase.of(SubClassOf(A, B), ClassAssertion(A, "a")), IsInstance(B, "a"), True),
])
def test_is_entailed_examples(example1, kb, query, expected):
    assert is_entailed(example1 if kb is None else kb, query) is expected


def test_clash_formulas_mention_known_axioms(example1, nature_lover):
    for leaf in saturate(query_tableau(example1, nature_lover), example1):
        for clash in leaf.clashes:
            assert variables(clash.formula) <= set(example1.indices)


def _corpus_pair(seed, **kw):
    rng = random.Random(seed)
    kb = random_kb(rng, max_axioms=kw.get("max_axioms", 8), max_prob=4)
    return rng, kb, candidate_queries(rng)[0]


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_full_world_agrees_with_oracle(seed):
    _, kb, q = _corpus_pair(seed)
    table = world_table(kb, q)
    assert table[-1][1] == is_entailed(kb, q)


def _rename_concept(c, m):
    if isinstance(c, Atomic):
        return Atomic(m[c.name])
    if isinstance(c, Not):
        return Not(_rename_concept(c.inner, m))
    if isinstance(c, (And, Or)):
        return type(c)(tuple(_rename_concept(p, m) for p in c.parts))
    if isinstance(c, (Exists, ForAll)):
        return type(c)(m[c.role], _rename_concept(c.filler, m))
    return c


def _rename_axiom(ax, m):
    if isinstance(ax, SubClassOf):
        return SubClassOf(_rename_concept(ax.sub, m), _rename_concept(ax.sup, m))
    if isinstance(ax, ClassAssertion):
        return ClassAssertion(_rename_concept(ax.concept, m), m[ax.individual])
    return PropertyAssertion(m[ax.role], m[ax.subject], m[ax.object])


class _Renaming(dict):
    def __missing__(self, key):
        return f"z{key[::-1]}"


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_renaming_invariance(seed):
    _, kb, q = _corpus_pair(seed)
    m = _Renaming()
    renamed = KnowledgeBase.of(*[(a.prob, _rename_axiom(a.axiom, m)) if a.prob else
                                 _rename_axiom(a.axiom, m) for a in kb])
    rq = type(q)(*(_rename_concept(v, m) if not isinstance(v, str) else m[v]
                   for v in vars(q).values()))
    assert is_entailed(kb, q) == is_entailed(renamed, rq)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_adding_an_axiom_is_monotone(seed):
    rng, kb, q = _corpus_pair(seed)
    bigger = KnowledgeBase.of(*[a.axiom for a in kb], random_axiom(rng, 2))
    if is_entailed(kb, q):
        assert is_entailed(bigger, q)


def test_anywhere_blocking_keeps_graphs_small():
    kb = KnowledgeBase.of(SubClassOf(A, Exists("r", A)), ClassAssertion(A, "a"))
    exp = Expansion(kb, "pinpoint")
    # a holds A under F2 but the successor under F1, so a cannot block it;
    # the second successor is blocked by the first
    [leaf] = [t for t in exp.saturate(init_tableau(kb, [])) if t.is_clash_free()]
    assert leaf.nodes == ["a", "_:x0", "_:x1"]
    assert exp.blocked_nodes(leaf) == {"_:x1"}
    # without traces a covers its successor at once
    plain = init_tableau(kb, [], traced=False)
    assert exp.satisfiable(plain)
    [leaf] = [t for t in exp.saturate(init_tableau(kb, [], traced=False)) if not t.closed]
    assert leaf.nodes == ["a", "_:x0"]
