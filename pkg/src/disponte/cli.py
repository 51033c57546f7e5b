"""Command-line front end.

    disponte (prob|explain|check|oracle) --kb PATH --query AXIOM [options]

Exit codes: 0 success, 1 unreadable or malformed input (parse errors report
line and column on stderr), 2 budget or cap exceeded, 3 internal invariant
violation or cross-check disagreement.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from .errors import InvariantError, PreconditionError, ResourceLimitError
from .formula import to_text
from .kb import KnowledgeBase
from .oracle import VALUATION_CAP, WORLD_CAP, pinpointing_counterexample, world_table
from .parser import ParseError, parse_kb, parse_query, render_annotated, render_query
from .pipeline import answer, variable_order
from .tableau import DEFAULT_BUDGET, MODES, is_entailed

EXIT_OK, EXIT_INPUT, EXIT_LIMIT, EXIT_INVARIANT = 0, 1, 2, 3
TOLERANCE = 1e-9
TABLE_LIMIT = 64
COMMANDS = ("prob", "explain", "check", "oracle")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which this tool reserves for resource limits
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="disponte", description="Probabilistic ALC query answering.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--kb", required=True, help="knowledge base file")
    p.add_argument("--query", required=True, help="query axiom in functional syntax")
    p.add_argument("--mode", choices=MODES, default="pinpoint")
    p.add_argument("--json", action="store_true", help="JSON on stdout")
    p.add_argument("--cross-check", action="store_true",
                   help="compare with brute-force semantics (prob, explain)")
    p.add_argument("--var-order", help="comma-separated permutation of axiom indices")
    p.add_argument("--emit-bdd", metavar="PATH", help="write the diagram (prob, explain)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="tableau rule-firing budget")
    p.add_argument("--oracle-cap", type=int, default=None,
                   help="cap on enumerated axioms (worlds or valuations)")
    return p


def fmt_prob(p: float) -> str:
    return f"{p:#.10g}"


def _json_prob(p: Optional[float]):
    return None if p is None else float(f"{p:.10g}")


def _parse_order(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise _UsageError(f"--var-order must be comma-separated integers, got {text!r}")


def _report(query, mode, *, entailed, probability=None, minas=None, formula=None,
            rule_firings=0, bdd_nodes=0, worlds=None) -> dict:
    return {
        "query": query,
        "entailed": entailed,
        "probability": _json_prob(probability),
        "minas": None if minas is None else [sorted(m) for m in minas],
        "pinpointing_formula": formula,
        "mode": mode,
        "stats": {"rule_firings": rule_firings, "bdd_nodes": bdd_nodes, "worlds": worlds},
    }


class _Run:
    def __init__(self, args, kb: KnowledgeBase, q, out):
        self.args = args
        self.kb = kb
        self.q = q
        self.qtext = render_query(q)
        self.out = out
        self.lines: List[str] = []

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def finish(self, report: dict) -> None:
        if self.args.json:
            self.out.write(json.dumps(report, indent=2) + "\n")
        else:
            self.out.write("\n".join(self.lines) + "\n")

    def _world_cap(self):
        return WORLD_CAP if self.args.oracle_cap is None else self.args.oracle_cap

    def _valuation_cap(self):
        return VALUATION_CAP if self.args.oracle_cap is None else self.args.oracle_cap

    def _emit(self, diagram) -> None:
        if self.args.emit_bdd:
            with open(self.args.emit_bdd, "w", encoding="utf-8") as fh:
                fh.write(diagram.to_text())

    # -- commands ---------------------------------------------------------------

    def prob(self) -> int:
        a = self._answer()
        self.say(f"query: {self.qtext}")
        self.say(f"mode: {a.mode}")
        self.say(f"entailed: {'yes' if a.entailed else 'no'}")
        self.say(f"probability: {fmt_prob(a.probability)}")
        worlds = None
        status = EXIT_OK
        if self.args.cross_check:
            table = world_table(self.kb, self.q, cap=self._world_cap(), budget=self.args.budget)
            worlds = len(table)
            exact = sum(w.prob for w, ok in table if ok)
            self.say(f"oracle probability: {fmt_prob(exact)} ({worlds} worlds)")
            if abs(exact - a.probability) > TOLERANCE:
                self.say("cross-check: DISAGREE")
                print(f"cross-check failed: pipeline {a.probability!r} vs oracle {exact!r}",
                      file=sys.stderr)
                status = EXIT_INVARIANT
            else:
                self.say("cross-check: agree")
        self._emit(a.bdd)
        self.finish(self._answer_report(a, worlds))
        return status

    def explain(self) -> int:
        a = self._answer()
        self.say(f"query: {self.qtext}")
        self.say(f"mode: {a.mode}")
        if not a.entailed:
            self.say("not entailed")
        self.say(f"MinAs: {len(a.minas)}")
        for m in a.minas:
            self.say("{" + ", ".join(str(i) for i in sorted(m)) + "}")
            for i in sorted(m):
                self.say(f"  {i}: {render_annotated(self.kb[i])}")
        if a.mode == "pinpoint":
            self.say(f"pinpointing formula: {to_text(a.formula)}")
        status = EXIT_OK
        if self.args.cross_check:
            bad = pinpointing_counterexample(self.kb, self.q, a.formula,
                                             cap=self._valuation_cap(), budget=self.args.budget)
            if bad is None:
                self.say(f"cross-check: agree on all {2 ** len(self.kb)} valuations")
            else:
                self.say("cross-check: DISAGREE")
                print(f"cross-check failed on valuation {sorted(bad)}", file=sys.stderr)
                status = EXIT_INVARIANT
        self._emit(a.bdd)
        self.finish(self._answer_report(a, None))
        return status

    def check(self) -> int:
        stats: dict = {}
        ok = is_entailed(self.kb, self.q, budget=self.args.budget, stats=stats)
        self.say("entailed" if ok else "not entailed")
        self.finish(_report(self.qtext, self.args.mode, entailed=ok,
                            rule_firings=stats.get("rule_firings", 0)))
        return EXIT_OK

    def oracle(self) -> int:
        table = world_table(self.kb, self.q, cap=self._world_cap(), budget=self.args.budget)
        exact = sum(w.prob for w, ok in table if ok)
        free = [a.index for a in self.kb.probabilistic]
        self.say(f"query: {self.qtext}")
        self.say(f"worlds: {len(table)}")
        self.say(f"entailing worlds: {sum(1 for _, ok in table if ok)}")
        self.say(f"probability: {fmt_prob(exact)}")
        if len(table) <= TABLE_LIMIT:
            head = "selection" if not free else "selection (" + ",".join(f"F{i}" for i in free) + ")"
            self.say(f"{head}\tprobability\tentails")
            for w, ok in table:
                self.say(f"{w.bits() or '-'}\t{fmt_prob(w.prob)}\t{'yes' if ok else 'no'}")
        full = table[-1][1]  # the last selection keeps every probabilistic axiom
        self.finish(_report(self.qtext, self.args.mode, entailed=full, probability=exact,
                            worlds=len(table)))
        return EXIT_OK

    # -- helpers ------------------------------------------------------------------

    def _answer(self):
        order = _parse_order(self.args.var_order)
        if order is not None:
            variable_order(self.kb, order)  # validates before any reasoning
        return answer(self.kb, self.q, self.args.mode, order=order, budget=self.args.budget)

    def _answer_report(self, a, worlds) -> dict:
        return _report(self.qtext, a.mode, entailed=a.entailed, probability=a.probability,
                       minas=a.minas,
                       formula=to_text(a.formula) if a.mode == "pinpoint" else None,
                       rule_firings=a.rule_firings, bdd_nodes=a.bdd.size, worlds=worlds)


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.emit_bdd and args.command not in ("prob", "explain"):
            raise _UsageError("--emit-bdd applies to prob and explain only")
        if args.cross_check and args.command not in ("prob", "explain"):
            raise _UsageError("--cross-check applies to prob and explain only")
        if args.budget < 1:
            raise _UsageError("--budget must be positive")
    except _UsageError as e:
        print(f"disponte: {e}", file=sys.stderr)
        return EXIT_INPUT
    try:
        with open(args.kb, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"disponte: cannot read {args.kb}: {e.strerror}", file=sys.stderr)
        return EXIT_INPUT
    try:
        kb = parse_kb(text)
    except ParseError as e:
        print(f"{args.kb}:{e.line}:{e.column}: {e.kind}: {e.message}", file=sys.stderr)
        return EXIT_INPUT
    try:
        q = parse_query(args.query)
    except ParseError as e:
        print(f"query:{e.line}:{e.column}: {e.kind}: {e.message}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return getattr(_Run(args, kb, q, out), args.command)()
    except (_UsageError, PreconditionError) as e:
        print(f"disponte: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as e:
        print(f"disponte: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except InvariantError as e:
        print(f"disponte: internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
