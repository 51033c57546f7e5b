"""Reduced ordered BDDs for monotone formulas, and exact probability on them.

No complement edges.  Node 0 is the false terminal, node 1 the true terminal;
decision nodes are ``(rank, low, high)`` triples.  A finished ``Bdd`` stores
only the nodes reachable from its root, numbered in a fixed post-order, so
two diagrams for the same function under the same order are equal tuples.
"""
from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import PreconditionError
from .formula import AndF, FalseF, MonotoneFormula, OrF, TrueF, Var, variables

FALSE_ID = 0
TRUE_ID = 1


class VarOrder:
    """Bijection between axiom indices and ranks 0..m-1 (rank 0 on top)."""

    def __init__(self, indices: Iterable[int]):
        self.indices = tuple(indices)
        self.rank = {i: r for r, i in enumerate(self.indices)}
        if len(self.rank) != len(self.indices):
            raise PreconditionError(f"variable order repeats an index: {self.indices}")

    @classmethod
    def ascending(cls, indices: Iterable[int]) -> "VarOrder":
        return cls(sorted(set(indices)))

    def __eq__(self, other):
        return isinstance(other, VarOrder) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return f"VarOrder({list(self.indices)})"


class Bdd:
    __slots__ = ("nodes", "root", "order")

    def __init__(self, nodes: Tuple, root: int, order: VarOrder):
        self.nodes = nodes
        self.root = root
        self.order = order

    def __eq__(self, other):
        return (isinstance(other, Bdd) and self.order == other.order
                and self.root == other.root and self.nodes == other.nodes)

    def __hash__(self):
        return hash((self.nodes, self.root, self.order))

    @property
    def size(self) -> int:
        """Number of decision nodes."""
        return len(self.nodes) - 2

    def is_terminal(self) -> bool:
        return self.root in (FALSE_ID, TRUE_ID)

    def to_text(self) -> str:
        """One line per decision node: ``id variable low high`` (variables as F<i>)."""
        lines = [f"root {self.root}"]
        for nid in range(2, len(self.nodes)):
            rank, lo, hi = self.nodes[nid]
            lines.append(f"{nid} F{self.order.indices[rank]} {lo} {hi}")
        return "\n".join(lines) + "\n"


class _Builder:
    def __init__(self, order: VarOrder):
        self.order = order
        self.nodes = [None, None]
        self.unique: Dict[Tuple[int, int, int], int] = {}

    def mk(self, rank: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (rank, low, high)
        nid = self.unique.get(key)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(key)
            self.unique[key] = nid
        return nid

    def rank(self, u: int) -> int:
        return self.nodes[u][0] if u > 1 else len(self.order.indices)

    def apply(self, op: str, u: int, v: int, memo: dict) -> int:
        if op == "and":
            if u == FALSE_ID or v == FALSE_ID:
                return FALSE_ID
            if u == TRUE_ID:
                return v
            if v == TRUE_ID or u == v:
                return u
        else:
            if u == TRUE_ID or v == TRUE_ID:
                return TRUE_ID
            if u == FALSE_ID:
                return v
            if v == FALSE_ID or u == v:
                return u
        key = (u, v) if u < v else (v, u)
        hit = memo.get(key)
        if hit is not None:
            return hit
        ru, rv = self.rank(u), self.rank(v)
        r = min(ru, rv)
        u0, u1 = (self.nodes[u][1], self.nodes[u][2]) if ru == r else (u, u)
        v0, v1 = (self.nodes[v][1], self.nodes[v][2]) if rv == r else (v, v)
        res = self.mk(r, self.apply(op, u0, v0, memo), self.apply(op, u1, v1, memo))
        memo[key] = res
        return res

    def compile(self, phi: MonotoneFormula) -> int:
        if isinstance(phi, TrueF):
            return TRUE_ID
        if isinstance(phi, FalseF):
            return FALSE_ID
        if isinstance(phi, Var):
            return self.mk(self.order.rank[phi.index], FALSE_ID, TRUE_ID)
        op = "and" if isinstance(phi, AndF) else "or"
        if not isinstance(phi, (AndF, OrF)):
            raise TypeError(f"not a monotone formula: {phi!r}")
        acc = TRUE_ID if op == "and" else FALSE_ID
        memo: dict = {}
        for p in phi.parts:
            acc = self.apply(op, acc, self.compile(p), memo)
        return acc

    def freeze(self, root: int) -> Bdd:
        # renumber reachable nodes in post-order (low before high)
        out = [None, None]
        ids = {FALSE_ID: FALSE_ID, TRUE_ID: TRUE_ID}
        stack = [(root, False)]
        while stack:
            u, expanded = stack.pop()
            if u in ids:
                continue
            rank, lo, hi = self.nodes[u]
            if expanded:
                ids[u] = len(out)
                out.append((rank, ids[lo], ids[hi]))
            else:
                stack.append((u, True))
                stack.append((hi, False))
                stack.append((lo, False))
        return Bdd(tuple(out), ids[root], self.order)


def build(phi: MonotoneFormula, order: VarOrder) -> Bdd:
    missing = sorted(variables(phi) - set(order.indices))
    if missing:
        raise PreconditionError(f"variable order does not cover axioms {missing}")
    b = _Builder(order)
    return b.freeze(b.compile(phi))


def condition(b: Bdd, index: int, value: int) -> Bdd:
    """Restrict variable ``index`` to ``value``; identity when it is not ordered."""
    if index not in b.order.rank:
        return b
    r = b.order.rank[index]
    builder = _Builder(b.order)
    memo: Dict[int, int] = {FALSE_ID: FALSE_ID, TRUE_ID: TRUE_ID}

    def go(u: int) -> int:
        if u in memo:
            return memo[u]
        rank, lo, hi = b.nodes[u]
        if rank == r:
            res = go(hi if value else lo)
        else:
            res = builder.mk(rank, go(lo), go(hi))
        memo[u] = res
        return res

    return builder.freeze(go(b.root))


def probability(b: Bdd, probs: Mapping[int, float]) -> float:
    """Exact probability of the function, each node visited once."""
    pi: Dict[int, float] = {FALSE_ID: 0.0, TRUE_ID: 1.0}
    # children always carry smaller ids than parents (post-order numbering)
    for nid in range(2, len(b.nodes)):
        rank, lo, hi = b.nodes[nid]
        index = b.order.indices[rank]
        if index not in probs:
            raise PreconditionError(f"no probability given for axiom {index}")
        p = probs[index]
        pi[nid] = p * pi[hi] + (1.0 - p) * pi[lo]
    return pi[b.root]


def equivalent(a: Bdd, b: Bdd) -> bool:
    if a.order != b.order:
        raise PreconditionError("diagrams built under different variable orders")
    return a.root == b.root and a.nodes == b.nodes


def terminal(value: bool, order: Optional[VarOrder] = None) -> Bdd:
    return Bdd((None, None), TRUE_ID if value else FALSE_ID, order or VarOrder(()))


def evaluate(b: Bdd, valuation) -> bool:
    u = b.root
    while u > 1:
        rank, lo, hi = b.nodes[u]
        u = hi if b.order.indices[rank] in valuation else lo
    return u == TRUE_ID
