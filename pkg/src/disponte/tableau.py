"""Trace-carrying ALC tableau with general TBoxes and subset blocking.

Every label element (a concept at a node, a role on an edge) carries a trace:
the monotone condition on axiom variables under which it was derived.  A
rule instance fires only if the trace it would contribute is not already
implied by the element's current trace; re-derivation with a new trace widens
the existing one by disjunction.  Clashes do not stop a traced branch unless
their formula is valid, since the branch must stay complete for every
sub-knowledge-base at once.

Untraced tableaux decide plain entailment.  Their labels carry dependency
sets (the disjunction branch points an element rests on) instead of traces;
every clash closes its branch and the search backjumps to the most recent
branch point the clash depends on.

Rule order inside a branch: clash detection on insertion, then the
deterministic rules (GCI, conjunction, universal) to a fixpoint.  Traced
branches then generate existential successors before splitting a
disjunction; untraced ones split first.  Generation takes the first
unblocked node and its smallest existential by concept text.  A split takes
the most constrained disjunction (fewest disjuncts that would not clash at
once), then the lowest node, then the smallest concept text.

Blocking is subset blocking against any earlier unblocked node, with traces:
the blocker must hold every concept of the blocked node under a trace at
least as weak.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from .errors import BudgetExceeded
from .formula import (
    T_FALSE,
    T_TRUE,
    TRUE,
    MonotoneFormula,
    Trace,
    Var,
    conj,
    minimal_sets,
    t_and,
    t_implies,
    t_or,
    t_var,
    trace_formula,
)
from .kb import (
    BOTTOM,
    And,
    Atomic,
    Bottom,
    ClassAssertion,
    Concept,
    Exists,
    ForAll,
    KnowledgeBase,
    Not,
    Or,
    Query,
    SubClassOf,
    Top,
    fresh_name,
    negated_query_assertions,
    nnf,
    render,
)

DEFAULT_BUDGET = 10 ** 6
MODES = ("minas", "pinpoint")

NO_DEPS: FrozenSet[int] = frozenset()


class _TraceAlgebra:
    unit = T_TRUE
    conj = staticmethod(t_and)
    disj = staticmethod(t_or)
    implies = staticmethod(t_implies)
    var = staticmethod(t_var)

    @staticmethod
    def valid(tr) -> bool:
        return tr == T_TRUE


class _DepAlgebra:
    # presence is all that matters; the value records branch points relied on
    unit = NO_DEPS

    @staticmethod
    def conj(a, b):
        return a | b if b else a

    @staticmethod
    def disj(a, b):
        return a

    @staticmethod
    def implies(a, b) -> bool:
        return True

    @staticmethod
    def var(index):
        return NO_DEPS

    @staticmethod
    def valid(tr) -> bool:
        return True


@dataclass(frozen=True)
class Clash:
    node: str
    concept: Concept
    formula: MonotoneFormula


class Tableau:
    """One completion graph.

    ``labels[x][C]`` and ``edges[x][y][R]`` hold traces (dependency sets when
    untraced); ``parent`` maps each generated node to the node whose
    existential created it.  ``axioms`` restricts the KB to a subset of
    indices (None for all of it).
    """

    def __init__(self, traced: bool = True, axioms: Optional[FrozenSet[int]] = None):
        self.traced = traced
        self.alg = _TraceAlgebra if traced else _DepAlgebra
        self.axioms = axioms
        self.nodes: List[str] = []
        self.labels: Dict[str, Dict[Concept, object]] = {}
        self.edges: Dict[str, Dict[str, Dict[str, object]]] = {}
        self.parent: Dict[str, str] = {}
        self.clashes: List[Clash] = []
        self.fresh = 0
        self.closed = False
        self.clash_deps = NO_DEPS
        # (node, Atomic or Bottom) for every clash seen so far, and the
        # disjunction of their traces; both only grow along a branch
        self.clash_at: Dict[Tuple[str, Concept], None] = {}
        self.clash_acc: Trace = T_FALSE
        # valuations this branch still has to answer for; see Expansion._split
        self.scope: Trace = T_TRUE
        self.pruned = False
        self.pending: deque = deque()

    def copy(self) -> "Tableau":
        t = Tableau(self.traced, self.axioms)
        t.nodes = list(self.nodes)
        t.labels = {x: dict(lab) for x, lab in self.labels.items()}
        t.edges = {x: {y: dict(r) for y, r in out.items()} for x, out in self.edges.items()}
        t.parent = dict(self.parent)
        t.clashes = list(self.clashes)
        t.fresh = self.fresh
        t.closed = self.closed
        t.clash_deps = self.clash_deps
        t.clash_at = dict(self.clash_at)
        t.clash_acc = self.clash_acc
        t.scope = self.scope
        t.pending = deque(self.pending)
        return t

    def add_node(self, x: str, parent: Optional[str] = None, deps=None) -> None:
        if x in self.labels:
            return
        self.nodes.append(x)
        self.labels[x] = {}
        self.edges[x] = {}
        if parent is not None:
            self.parent[x] = parent
        self.pending.append(("node", x, self.alg.unit if deps is None else deps))

    def edge_list(self):
        """``(x, y, role, trace)`` for every edge, in node order."""
        for x in self.nodes:
            for y, roles in self.edges[x].items():
                for role, tr in roles.items():
                    yield x, y, role, tr

    def label_formulas(self, x: str) -> Dict[Concept, MonotoneFormula]:
        if not self.traced:
            return {c: TRUE for c in self.labels[x]}
        return {c: trace_formula(tr) for c, tr in self.labels[x].items()}

    def is_clash_free(self) -> bool:
        return not self.clashes

    def clash_trace(self) -> Trace:
        """Disjunction of the current clash conditions (traced tableaux only)."""
        return self.clash_acc


def _included(kb: KnowledgeBase, axioms):
    return [a for a in kb.axioms if axioms is None or a.index in axioms]


def init_tableau(kb: KnowledgeBase, extra, *, axioms=None, traced: bool = True) -> Tableau:
    """Initial graph for ``kb`` (restricted to ``axioms`` when given) plus ``extra``.

    ``extra`` is a list of ``ClassAssertion`` from negated_query_assertions;
    those carry the unconditional trace.
    """
    axioms = None if axioms is None else frozenset(axioms)
    t = Tableau(traced, axioms)
    abox = [a for a in _included(kb, axioms) if not isinstance(a.axiom, SubClassOf)]
    for a in abox:
        ax = a.axiom
        if isinstance(ax, ClassAssertion):
            t.add_node(ax.individual)
        else:
            t.add_node(ax.subject)
            t.add_node(ax.object)
    for ax in extra:
        t.add_node(ax.individual)
    if fresh_name(0) in t.labels:
        t.fresh = 1
    ins = _Inserter(t)
    for a in abox:
        ax = a.axiom
        tr = t.alg.var(a.index)
        if isinstance(ax, ClassAssertion):
            ins.insert(ax.individual, nnf(ax.concept), tr)
        else:
            ins.add_edge(ax.subject, ax.object, ax.role, tr)
    for ax in extra:
        ins.insert(ax.individual, nnf(ax.concept), t.alg.unit)
    return t


class _Inserter:
    """Label updates with clash detection; optionally counts rule firings."""

    def __init__(self, t: Tableau, expansion: Optional["Expansion"] = None):
        self.t = t
        self.alg = t.alg
        self.expansion = expansion

    def _fire(self):
        if self.expansion is not None:
            self.expansion.fire()

    def insert(self, x: str, c: Concept, tr) -> bool:
        t = self.t
        lab = t.labels[x]
        old = lab.get(c)
        if old is not None:
            if self.alg.implies(tr, old):
                return False
            tr = self.alg.disj(old, tr)
        lab[c] = tr
        self._fire()
        t.pending.append(("concept", x, c))
        if isinstance(c, Bottom):
            other, key = self.alg.unit, c
        elif isinstance(c, Atomic):
            other, key = lab.get(Not(c)), c
        elif isinstance(c, Not):
            other, key = lab.get(c.inner), c.inner
        else:
            return True
        if other is not None:
            ct = self.alg.conj(tr, other)
            t.clash_at[(x, key)] = None
            if t.traced:
                t.clash_acc = t_or(t.clash_acc, ct)
            if self.alg.valid(ct):
                if not t.closed:
                    t.clash_deps = ct if not t.traced else NO_DEPS
                t.closed = True
        return True

    def add_edge(self, x: str, y: str, role: str, tr) -> bool:
        t = self.t
        roles = t.edges[x].setdefault(y, {})
        old = roles.get(role)
        if old is not None:
            if self.alg.implies(tr, old):
                return False
            tr = self.alg.disj(old, tr)
        roles[role] = tr
        self._fire()
        t.pending.append(("edge", x, y, role))
        return True


def _gci_concept(sub: Concept, sup: Concept) -> Optional[Concept]:
    # nnf(not sub or sup) with Bottom disjuncts dropped; None when trivially true
    parts = []
    for p in (nnf(Not(sub)), nnf(sup)):
        for q in (p.parts if isinstance(p, Or) else (p,)):
            if isinstance(q, Top):
                return None
            if not isinstance(q, Bottom) and q not in parts:
                parts.append(q)
    if not parts:
        return BOTTOM
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


class Expansion:
    """Saturates tableaux for one knowledge base under a shared firing budget.

    ``mode`` only affects how clashes of traced branches are reported:
    ``pinpoint`` gives one clash per concept pair with formula
    trace(C) & trace(not C); ``minas`` splits that into one pure conjunction
    per minimal axiom set.
    """

    def __init__(self, kb: KnowledgeBase, mode: str = "pinpoint", *,
                 axioms=None, budget: int = DEFAULT_BUDGET):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.kb = kb
        self.mode = mode
        self.budget = budget
        self.firings = 0
        self.branch_points = 0
        self.bound: Optional[Trace] = None
        self.gcis = []
        for a in _included(kb, axioms):
            if isinstance(a.axiom, SubClassOf):
                c = _gci_concept(a.axiom.sub, a.axiom.sup)
                if c is not None:
                    self.gcis.append((a.index, c))

    def fire(self) -> None:
        self.firings += 1
        if self.firings > self.budget:
            raise BudgetExceeded(self.budget)

    # -- deterministic rules -------------------------------------------------

    def _propagate(self, t: Tableau, ins: _Inserter) -> None:
        alg = t.alg
        while t.pending and not t.closed:
            item = t.pending.popleft()
            kind, x = item[0], item[1]
            if kind == "node":
                base = item[2]
                for i, c in self.gcis:
                    ins.insert(x, c, alg.conj(alg.var(i), base))
            elif kind == "concept":
                c = item[2]
                tr = t.labels[x][c]
                if isinstance(c, And):
                    for p in c.parts:
                        ins.insert(x, p, tr)
                elif isinstance(c, ForAll):
                    for y, roles in list(t.edges[x].items()):
                        e = roles.get(c.role)
                        if e is not None:
                            ins.insert(y, c.filler, alg.conj(tr, e))
            else:
                y, role = item[2], item[3]
                e = t.edges[x][y][role]
                for c, tr in list(t.labels[x].items()):
                    if isinstance(c, ForAll) and c.role == role:
                        ins.insert(y, c.filler, alg.conj(tr, e))

    def _moot(self, t: Tableau, tr) -> bool:
        """Whether an element with trace ``tr`` can no longer affect the result.

        The branch will report at least its current clash disjunction c, and
        only valuations satisfying the bound still matter.  Under any such
        valuation where c fails, an element with bound & tr -> c is absent,
        so expanding it cannot change the branch's contribution.
        """
        acc = t.clash_acc
        if not t.traced or not acc:
            return False
        if t_implies(tr, acc):
            return True
        return self.bound is not None and t_implies(t_and(self.bound, tr), acc)

    # -- disjunction -----------------------------------------------------------

    @staticmethod
    def _clashes_with(lab, p) -> bool:
        if type(p) is Bottom:
            return True
        if type(p) is Atomic:
            return Not(p) in lab
        return type(p) is Not and p.inner in lab

    def _split(self, t: Tableau) -> Optional[Tuple[int, List[Tableau]]]:
        """Split the most constrained open disjunction.

        Preference: fewest disjuncts that would not clash on insertion, then
        lowest node, then smallest concept text.
        """
        alg = t.alg
        best = None
        for rank, x in enumerate(t.nodes):
            lab = t.labels[x]
            for c in lab:
                if type(c) is not Or:
                    continue
                tr = lab[c]
                if any(p in lab and alg.implies(tr, lab[p]) for p in c.parts):
                    continue
                if self._moot(t, tr):
                    continue
                free = sum(1 for p in set(c.parts) if not self._clashes_with(lab, p))
                key = (free, rank, render(c))
                if best is None or key < best[0]:
                    best = (key, x, c)
        if best is None:
            return None
        _, x, c = best
        tr = t.labels[x][c]
        bid = self.branch_points
        self.branch_points += 1
        if not t.traced:
            tr = tr | {bid}
        # disjuncts that clash on insertion go last: clash-poor leaves first
        # tighten the bound sooner
        lab = t.labels[x]
        parts = sorted(dict.fromkeys(c.parts), key=lambda p: self._clashes_with(lab, p))
        children = []
        for k, p in enumerate(parts):
            child = t.copy()
            if k and t.traced:
                # where tr fails every child looks like the first one, so the
                # others only answer for valuations satisfying tr
                child.scope = t_and(t.scope, tr)
            _Inserter(child, self).insert(x, p, tr)
            children.append(child)
        return bid, children

    # -- existential -----------------------------------------------------------

    @staticmethod
    def _covers(alg, outer, inner) -> bool:
        for c, tr in inner.items():
            o = outer.get(c)
            if o is None or not alg.implies(tr, o):
                return False
        return True

    def blocked_nodes(self, t: Tableau) -> set:
        """Generated nodes that get no existential expansion.

        A node is blocked when its parent is, or when some earlier unblocked
        node covers its label (every concept present with a trace at least
        as strong).  Looking at any earlier node rather than only ancestors
        is sound without inverse roles: the model unravels the blocked node
        into a copy of its blocker.  Creation order rules out cycles.
        """
        blocked = set()
        for x in t.nodes:
            if self._blocked_here(t, x, blocked):
                blocked.add(x)
        return blocked

    def _blocked_here(self, t: Tableau, x: str, blocked: set) -> bool:
        # status of x given the statuses of all earlier nodes
        p = t.parent.get(x)
        if p is None:
            return False
        if p in blocked:
            return True
        lab = t.labels[x]
        n = len(lab)
        for y in t.nodes:
            if y == x:
                return False
            if y in blocked:
                continue
            other = t.labels[y]
            if len(other) >= n and self._covers(t.alg, other, lab):
                return True
        return False

    @staticmethod
    def _witnessed(t: Tableau, x: str, c: Exists, tr) -> bool:
        alg = t.alg
        for y, roles in t.edges[x].items():
            e = roles.get(c.role)
            if e is None:
                continue
            ty = t.labels[y].get(c.filler)
            if ty is not None and (not t.traced or alg.implies(tr, alg.conj(e, ty))):
                return True
        return False

    def _generate(self, t: Tableau, ins: _Inserter) -> bool:
        blocked: set = set()
        for x in t.nodes:
            if self._blocked_here(t, x, blocked):
                blocked.add(x)
                continue
            lab = t.labels[x]
            todo = [c for c in sorted((c for c in lab if type(c) is Exists), key=render)
                    if not self._witnessed(t, x, c, lab[c]) and not self._moot(t, lab[c])]
            if not todo:
                continue
            c = todo[0]
            tr = lab[c]
            y = fresh_name(t.fresh)
            t.fresh += 1
            t.add_node(y, parent=x, deps=tr)
            ins.add_edge(x, y, c.role, tr)
            ins.insert(y, c.filler, tr)
            return True
        return False

    # -- driver --------------------------------------------------------------

    def _run(self, t: Tableau):
        """Expand until saturated, closed, pruned, or split."""
        ins = _Inserter(t, self)
        limit = None if self.bound is None else t_and(self.bound, t.scope)
        while True:
            self._propagate(t, ins)
            if t.closed:
                return None
            if limit is not None and t_implies(limit, t.clash_trace()):
                t.pruned = True
                return None
            if not t.traced:
                # plain satisfiability: choose before growing the graph, so
                # each backtrack copies and rescans fewer nodes
                split = self._split(t)
                if split is not None:
                    return split
                if self._generate(t, ins):
                    continue
                return None
            if self._generate(t, ins):
                continue
            return self._split(t)

    def _record_clashes(self, t: Tableau) -> None:
        clashes = []
        rank = {x: k for k, x in enumerate(t.nodes)}
        for x, c in sorted(t.clash_at, key=lambda xc: (rank[xc[0]], render(xc[1]))):
            lab = t.labels[x]
            pieces = [lab[c]] if isinstance(c, Bottom) else [lab[c], lab[Not(c)]]
            if not t.traced:
                clashes.append(Clash(x, c, TRUE))
            elif self.mode == "pinpoint":
                clashes.append(Clash(x, c, conj(trace_formula(p) for p in pieces)))
            else:
                combined = pieces[0] if len(pieces) == 1 else t_and(*pieces)
                for s in minimal_sets(combined):
                    clashes.append(Clash(x, c, conj(Var(i) for i in sorted(s))))
        t.clashes = clashes

    def saturate_iter(self, t: Tableau) -> Iterator[Tableau]:
        """Yield saturated descendants of ``t`` depth-first, left disjunct first.

        Untraced branches stop at their first clash.
        """
        stack = [t]
        while stack:
            cur = stack.pop()
            split = self._run(cur)
            if split is None:
                if cur.pruned:
                    continue
                self._record_clashes(cur)
                yield cur
            else:
                stack.extend(reversed(split[1]))

    def saturate(self, t: Tableau) -> List[Tableau]:
        return list(self.saturate_iter(t))

    def explanation_leaves(self, t: Tableau) -> List[Tableau]:
        """Leaves whose clash formulas determine the pinpointing formula.

        Like ``saturate`` on a traced tableau, except that a branch is
        dropped as soon as the conjunction of the leaves already finished,
        restricted to the branch's scope, implies its current clash
        disjunction.  Traces only widen, so no descendant could then decide a
        valuation in scope differently from the leaves already kept.  Stops
        after the first clash-free leaf, which makes the whole conjunction
        false.
        """
        if not t.traced:
            raise ValueError("explanation_leaves needs a traced tableau")
        self.bound = None
        leaves = []
        try:
            for leaf in self.saturate_iter(t):
                leaves.append(leaf)
                psi = leaf.clash_trace()
                self.bound = psi if self.bound is None else t_and(self.bound, psi)
                if not psi:
                    break
        finally:
            self.bound = None
        return leaves

    def satisfiable(self, t: Tableau) -> bool:
        """Clash-free completion exists (untraced tableau, with backjumping)."""
        if t.traced:
            raise ValueError("satisfiable needs an untraced tableau")
        frames = []  # [branch id, children, next child, accumulated deps]
        cur = t
        while True:
            split = self._run(cur)
            if split is not None:
                bid, children = split
                frames.append([bid, children, 1, NO_DEPS])
                cur = children[0]
                continue
            if not cur.closed:
                return True
            deps = cur.clash_deps
            cur = None
            while frames:
                frame = frames[-1]
                bid, children, nxt, acc = frame
                if bid not in deps:
                    frames.pop()
                    continue
                frame[3] = acc | (deps - {bid})
                if nxt < len(children):
                    frame[2] = nxt + 1
                    cur = children[nxt]
                    break
                deps = frame[3]
                frames.pop()
            if cur is None:
                return False


def saturate(t: Tableau, kb: KnowledgeBase, mode: str = "pinpoint", *,
             budget: int = DEFAULT_BUDGET) -> List[Tableau]:
    return Expansion(kb, mode, axioms=t.axioms, budget=budget).saturate(t)


def query_tableau(kb: KnowledgeBase, q: Query, *, axioms=None, traced=True) -> Tableau:
    extra, _ = negated_query_assertions(q, kb)
    return init_tableau(kb, extra, axioms=axioms, traced=traced)


def is_entailed(kb: KnowledgeBase, q: Query, *, axioms=None, budget: int = DEFAULT_BUDGET,
                stats: Optional[dict] = None) -> bool:
    """Refutation test treating every axiom (or just ``axioms``) as present."""
    t = query_tableau(kb, q, axioms=axioms, traced=False)
    exp = Expansion(kb, axioms=t.axioms, budget=budget)
    try:
        return not exp.satisfiable(t)
    finally:
        if stats is not None:
            stats["rule_firings"] = stats.get("rule_firings", 0) + exp.firings
