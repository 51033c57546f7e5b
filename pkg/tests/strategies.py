"""Hypothesis strategies for concepts, knowledge bases and monotone formulas."""
from hypothesis import strategies as st

from disponte.formula import FALSE, TRUE, Var, conj, disj
from disponte.kb import (
    BOTTOM,
    TOP,
    And,
    AnnotatedAxiom,
    Atomic,
    ClassAssertion,
    Exists,
    ForAll,
    KnowledgeBase,
    Not,
    Or,
    PropertyAssertion,
    SubClassOf,
)

# avoid the reserved words Thing / Nothing and the constructor names
names = st.sampled_from(["A", "B", "C", "Cat", "Pet", "x_1", "_tmp"])
roles = st.sampled_from(["r", "s", "hasAnimal"])
individuals = st.sampled_from(["a", "b", "kevin", "i0"])

concepts = st.recursive(
    st.one_of(names.map(Atomic), st.just(TOP), st.just(BOTTOM)),
    lambda inner: st.one_of(
        inner.map(Not),
        st.lists(inner, min_size=2, max_size=3).map(lambda ps: And(tuple(ps))),
        st.lists(inner, min_size=2, max_size=3).map(lambda ps: Or(tuple(ps))),
        st.builds(Exists, roles, inner),
        st.builds(ForAll, roles, inner),
    ),
    max_leaves=8,
)

axioms = st.one_of(
    st.builds(SubClassOf, concepts, concepts),
    st.builds(ClassAssertion, concepts, individuals),
    st.builds(PropertyAssertion, roles, individuals, individuals),
)

# decimals that round-trip, including ones that need many digits
probabilities = st.one_of(
    st.none(),
    st.integers(1, 1000).map(lambda k: k / 1000),
    st.floats(min_value=1e-6, max_value=1.0, allow_nan=False, exclude_min=True),
)


@st.composite
def knowledge_bases(draw, max_size=8):
    entries = draw(st.lists(st.tuples(axioms, probabilities), max_size=max_size))
    return KnowledgeBase(tuple(AnnotatedAxiom(i, ax, p) for i, (ax, p) in enumerate(entries, start=1)))


def formulas(max_var=5):
    return st.recursive(
        st.one_of(st.integers(1, max_var).map(Var), st.just(TRUE), st.just(FALSE)),
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(conj),
            st.lists(inner, min_size=2, max_size=3).map(disj),
        ),
        max_leaves=10,
    )
