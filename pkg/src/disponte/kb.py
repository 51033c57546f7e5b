"""ALC terms, probabilistic knowledge bases and the world semantics over them.

Every value here is immutable.  Axiom identity is the 1-based
position in the knowledge base, never the axiom content: two syntactically
equal probabilistic axioms are two independent random variables.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Tuple, Union

from .errors import InvariantError, PreconditionError


# ---------------------------------------------------------------------------
# Concepts
# ---------------------------------------------------------------------------

_TERMS: dict = {}


class _Term:
    """Hash-consed concept node: structurally equal concepts are one object.

    Equality and hashing are therefore by identity, which keeps the label
    dictionaries of the tableau cheap.
    """

    __slots__ = ()
    _fields: Tuple[str, ...] = ()

    def __new__(cls, *args, **kwargs):
        if kwargs:
            args = args + tuple(kwargs.pop(f) for f in cls._fields[len(args):])
            if kwargs:
                raise TypeError(f"unexpected arguments {sorted(kwargs)}")
        if len(args) != len(cls._fields):
            raise TypeError(f"{cls.__name__} takes {len(cls._fields)} arguments")
        args = cls._normalize(args)
        key = (cls, args)
        obj = _TERMS.get(key)
        if obj is None:
            obj = object.__new__(cls)
            for f, v in zip(cls._fields, args):
                object.__setattr__(obj, f, v)
            _TERMS[key] = obj
        return obj

    @staticmethod
    def _normalize(args):
        return args

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return type(self), tuple(getattr(self, f) for f in self._fields)

    def __repr__(self):
        inner = ", ".join(repr(getattr(self, f)) for f in self._fields)
        return f"{type(self).__name__}({inner})"

    def __str__(self):
        return render(self)


class Top(_Term):
    __slots__ = ()


class Bottom(_Term):
    __slots__ = ()


class Atomic(_Term):
    __slots__ = ("name",)
    _fields = ("name",)

    def __str__(self):
        return self.name


class Not(_Term):
    __slots__ = ("inner",)
    _fields = ("inner",)


class _Nary(_Term):
    __slots__ = ("parts",)
    _fields = ("parts",)

    @classmethod
    def _normalize(cls, args):
        parts = tuple(args[0])
        if len(parts) < 2:
            raise PreconditionError(f"{cls.__name__} needs at least two parts")
        return (parts,)


class And(_Nary):
    __slots__ = ()


class Or(_Nary):
    __slots__ = ()


class Exists(_Term):
    __slots__ = ("role", "filler")
    _fields = ("role", "filler")


class ForAll(_Term):
    __slots__ = ("role", "filler")
    _fields = ("role", "filler")


Concept = Union[Top, Bottom, Atomic, Not, And, Or, Exists, ForAll]

TOP = Top()
BOTTOM = Bottom()


@lru_cache(maxsize=65536)
def render(c: Concept) -> str:
    """Functional-syntax text of a concept (the same text the parser reads)."""
    if isinstance(c, Atomic):
        return c.name
    if isinstance(c, Top):
        return "Thing"
    if isinstance(c, Bottom):
        return "Nothing"
    if isinstance(c, Not):
        return f"ObjectComplementOf({render(c.inner)})"
    if isinstance(c, And):
        return "ObjectIntersectionOf(" + ", ".join(render(p) for p in c.parts) + ")"
    if isinstance(c, Or):
        return "ObjectUnionOf(" + ", ".join(render(p) for p in c.parts) + ")"
    if isinstance(c, Exists):
        return f"ObjectSomeValuesFrom({c.role}, {render(c.filler)})"
    if isinstance(c, ForAll):
        return f"ObjectAllValuesFrom({c.role}, {render(c.filler)})"
    raise TypeError(f"not a concept: {c!r}")


@lru_cache(maxsize=65536)
def nnf(c: Concept) -> Concept:
    """Negation normal form: Not only ever wraps an Atomic."""
    if isinstance(c, (Atomic, Top, Bottom)):
        return c
    if isinstance(c, And):
        return And(tuple(nnf(p) for p in c.parts))
    if isinstance(c, Or):
        return Or(tuple(nnf(p) for p in c.parts))
    if isinstance(c, Exists):
        return Exists(c.role, nnf(c.filler))
    if isinstance(c, ForAll):
        return ForAll(c.role, nnf(c.filler))
    if isinstance(c, Not):
        return _negated_nnf(c.inner)
    raise TypeError(f"not a concept: {c!r}")


def _negated_nnf(c: Concept) -> Concept:
    # nnf(Not(c))
    if isinstance(c, Atomic):
        return Not(c)
    if isinstance(c, Top):
        return BOTTOM
    if isinstance(c, Bottom):
        return TOP
    if isinstance(c, Not):
        return nnf(c.inner)
    if isinstance(c, And):
        return Or(tuple(_negated_nnf(p) for p in c.parts))
    if isinstance(c, Or):
        return And(tuple(_negated_nnf(p) for p in c.parts))
    if isinstance(c, Exists):
        return ForAll(c.role, _negated_nnf(c.filler))
    if isinstance(c, ForAll):
        return Exists(c.role, _negated_nnf(c.filler))
    raise TypeError(f"not a concept: {c!r}")


def is_nnf(c: Concept) -> bool:
    if isinstance(c, Not):
        return isinstance(c.inner, Atomic)
    if isinstance(c, (And, Or)):
        return all(is_nnf(p) for p in c.parts)
    if isinstance(c, (Exists, ForAll)):
        return is_nnf(c.filler)
    return True


def concept_depth(c: Concept) -> int:
    if isinstance(c, (Atomic, Top, Bottom)):
        return 0
    if isinstance(c, Not):
        return 1 + concept_depth(c.inner)
    if isinstance(c, (And, Or)):
        return 1 + max(concept_depth(p) for p in c.parts)
    return 1 + concept_depth(c.filler)


# ---------------------------------------------------------------------------
# Axioms and knowledge bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubClassOf:
    sub: Concept
    sup: Concept


@dataclass(frozen=True)
class ClassAssertion:
    concept: Concept
    individual: str


@dataclass(frozen=True)
class PropertyAssertion:
    role: str
    subject: str
    object: str


Axiom = Union[SubClassOf, ClassAssertion, PropertyAssertion]


@dataclass(frozen=True)
class AnnotatedAxiom:
    """An axiom at a fixed KB position; ``prob`` is None for certain axioms."""

    index: int
    axiom: Axiom
    prob: Optional[float] = None

    def __post_init__(self):
        if self.prob is not None:
            if isinstance(self.prob, bool) or not 0.0 < float(self.prob) <= 1.0:
                raise PreconditionError(
                    f"axiom {self.index}: probability must lie in (0, 1], got {self.prob!r}")
            object.__setattr__(self, "prob", float(self.prob))

    @property
    def is_certain(self) -> bool:
        return self.prob is None


@dataclass(frozen=True)
class KnowledgeBase:
    axioms: Tuple[AnnotatedAxiom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        for pos, ax in enumerate(self.axioms, start=1):
            if ax.index != pos:
                raise PreconditionError(
                    f"axiom indices must be contiguous from 1; position {pos} holds {ax.index}")

    @classmethod
    def of(cls, *entries: Union[Axiom, Tuple[float, Axiom]]) -> "KnowledgeBase":
        """Build from bare axioms or ``(p, axiom)`` pairs, indexing in order."""
        out = []
        for i, entry in enumerate(entries, start=1):
            if isinstance(entry, tuple):
                p, ax = entry
                out.append(AnnotatedAxiom(i, ax, p))
            else:
                out.append(AnnotatedAxiom(i, entry))
        return cls(tuple(out))

    def __len__(self):
        return len(self.axioms)

    def __iter__(self):
        return iter(self.axioms)

    def __getitem__(self, index: int) -> AnnotatedAxiom:
        if not 1 <= index <= len(self.axioms):
            raise PreconditionError(f"no axiom with index {index}")
        return self.axioms[index - 1]

    @property
    def indices(self) -> range:
        return range(1, len(self.axioms) + 1)

    @property
    def certain(self) -> Tuple[AnnotatedAxiom, ...]:
        return tuple(a for a in self.axioms if a.is_certain)

    @property
    def probabilistic(self) -> Tuple[AnnotatedAxiom, ...]:
        return tuple(a for a in self.axioms if not a.is_certain)

    @property
    def probabilities(self) -> dict:
        return {a.index: a.prob for a in self.axioms if a.prob is not None}

    def individuals(self) -> list:
        """Named individuals in order of first occurrence."""
        seen: dict = {}
        for a in self.axioms:
            ax = a.axiom
            if isinstance(ax, ClassAssertion):
                seen.setdefault(ax.individual, None)
            elif isinstance(ax, PropertyAssertion):
                seen.setdefault(ax.subject, None)
                seen.setdefault(ax.object, None)
        return list(seen)


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsInstance:
    concept: Concept
    individual: str


@dataclass(frozen=True)
class IsSubClass:
    sub: Concept
    sup: Concept


Query = Union[IsInstance, IsSubClass]

# Fresh node names contain ':' so they can never be produced by the parser.
FRESH_PREFIX = "_:x"


def fresh_name(n: int) -> str:
    return f"{FRESH_PREFIX}{n}"


def negated_query_assertions(q: Query, kb: Optional[KnowledgeBase] = None):
    """Assertions whose addition to ``kb`` is inconsistent iff ``q`` is entailed.

    Returns ``(assertions, fresh)`` where assertions is a list of
    ``ClassAssertion`` and ``fresh`` is the fresh individual introduced for a
    subsumption query (None for instance queries).
    """
    if isinstance(q, IsInstance):
        return [ClassAssertion(nnf(Not(q.concept)), q.individual)], None
    if isinstance(q, IsSubClass):
        x0 = fresh_name(0)
        if kb is not None and x0 in kb.individuals():
            raise InvariantError(f"fresh individual {x0!r} collides with a KB individual")
        return [ClassAssertion(nnf(And((q.sub, Not(q.sup)))), x0)], x0
    raise TypeError(f"not a query: {q!r}")


# ---------------------------------------------------------------------------
# Choices, selections and worlds
# ---------------------------------------------------------------------------

CompositeChoice = Mapping[int, int]


def _check_choice(kappa: CompositeChoice, kb: KnowledgeBase) -> None:
    for i, k in kappa.items():
        if k not in (0, 1):
            raise PreconditionError(f"decision for axiom {i} must be 0 or 1, got {k!r}")
        if kb[i].is_certain:
            raise PreconditionError(f"axiom {i} is certain and carries no choice")


def choice_probability(kappa: CompositeChoice, kb: KnowledgeBase) -> float:
    _check_choice(kappa, kb)
    p = 1.0
    for i, k in sorted(kappa.items()):
        pi = kb[i].prob
        p *= pi if k == 1 else 1.0 - pi
    return p


def world_of(sigma: CompositeChoice, kb: KnowledgeBase) -> Tuple[AnnotatedAxiom, ...]:
    """Certain axioms plus the probabilistic axioms selected with 1, in index order."""
    _check_choice(sigma, kb)
    missing = [a.index for a in kb.probabilistic if a.index not in sigma]
    if missing:
        raise PreconditionError(f"selection is not total; undecided axioms {missing}")
    return tuple(a for a in kb.axioms if a.is_certain or sigma[a.index] == 1)
