"""Command-line front end.

Exit status: 0 proved, 1 not proved, 2 parse or semantic error, 3 resource
limit. With several files the worst status wins.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from katcheck.equiv import DEFAULT_MAX_STATES, StateLimitExceeded, Verdict, equivalent
from katcheck.hyp import prepare
from katcheck.semantics import OracleTooLarge, bounded_language
from katcheck.syntax import DEFAULT_ATOM_LIMIT, Equation, Signature
from katcheck.textual import (
    GoalFile,
    ParseError,
    ProgEquiv,
    format_equation,
    parse_assumption,
    parse_goal,
    print_guarded_string,
)
from katcheck.whilelang import HoareTriple, embed, hoare_encode

PROVED, NOT_PROVED, ERROR, RESOURCE = 0, 1, 2, 3


@dataclass
class Report:
    status: int
    lines: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def goal_equation(goal) -> Equation:
    if isinstance(goal, Equation):
        return goal
    if isinstance(goal, ProgEquiv):
        return Equation(embed(goal.left), embed(goal.right))
    if isinstance(goal, HoareTriple):
        return hoare_encode(goal)
    raise TypeError(f"unknown goal {goal!r}")


def _oracle_verdict(eq: Equation, sig: Signature, bound: int) -> Verdict:
    left = bounded_language(eq.lhs, sig, bound)
    right = bounded_language(eq.rhs, sig, bound)
    w = left.shortest_difference(right)
    if w is None:
        return Verdict(True)
    return Verdict.not_equal(w, "left" if w in left else "right")


def run(
    gf: GoalFile,
    extra_hyps: Sequence[str] = (),
    max_states: int = DEFAULT_MAX_STATES,
    oracle_bound: Optional[int] = None,
) -> Report:
    """Check one parsed goal file and describe the outcome."""
    sig = gf.signature
    hyps: list[Equation] = []
    for a in list(gf.assumptions) + [parse_assumption(h, sig) for h in extra_hyps]:
        hyps.append(hoare_encode(a) if isinstance(a, HoareTriple) else a)
    goal = goal_equation(gf.goal)

    prep = prepare(goal, hyps, sig)
    report = Report(PROVED)
    for u in prep.unsupported:
        report.warnings.append(
            "hypothesis not of a supported shape, ignored: "
            + format_equation(u.original, sig)
        )
    try:
        if oracle_bound is not None:
            verdict = _oracle_verdict(prep.checked, sig, oracle_bound)
        else:
            verdict = equivalent(prep.checked.lhs, prep.checked.rhs, sig, max_states)
    except (StateLimitExceeded, OracleTooLarge) as exc:
        report.status = RESOURCE
        report.lines.append(f"resource limit: {exc}")
        return report

    if verdict.equal:
        if oracle_bound is not None:
            report.lines.append(f"proved up to {oracle_bound} letters (oracle)")
        else:
            n = verdict.states
            report.lines.append(f"proved ({n} derivative pair{'' if n == 1 else 's'})")
        return report

    report.status = NOT_PROVED
    if prep.eliminated:
        report.lines.append("not provable from the supported hypotheses")
        report.lines.append(
            "  (counterexample suppressed: it refers to the goal after hypothesis elimination)"
        )
    else:
        report.lines.append("not proved")
        report.lines.append(f"  counterexample: {print_guarded_string(verdict.witness, sig)}")
        side = "left-hand side" if verdict.side == "left" else "right-hand side"
        report.lines.append(f"  accepted only by the {side}")
    return report


def _files(paths: Sequence[str]) -> list[Path]:
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(p.glob("*.kat")))
        else:
            out.append(p)
    return out


def check_file(path: Path, args) -> Report:
    try:
        text = sys.stdin.read() if str(path) == "-" else path.read_text(encoding="utf-8")
        gf = parse_goal(text, atom_limit=args.atoms_limit)
        return run(gf, args.hyp, args.max_states, args.oracle_bound)
    except ParseError as exc:
        return Report(ERROR, warnings=[f"parse error at {exc}"])
    except OSError as exc:
        return Report(ERROR, warnings=[str(exc)])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="katcheck", description="Decide KAT (in)equations, program equivalences and Hoare triples."
    )
    ap.add_argument("files", nargs="+", help="goal files, directories of *.kat files, or -")
    ap.add_argument("-H", "--hyp", action="append", default=[], metavar="EQUATION",
                    help="extra hypothesis, same as an 'assume' line")
    ap.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES,
                    help="ceiling on explored derivative pairs (default %(default)s)")
    ap.add_argument("--atoms-limit", type=int, default=DEFAULT_ATOM_LIMIT,
                    help="maximum number of primitive tests (default %(default)s)")
    ap.add_argument("--oracle-bound", type=int, default=None, metavar="K",
                    help="compare bounded languages up to K letters instead of deciding")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    files = _files(args.files)
    if not files:
        print("katcheck: no goal files found", file=sys.stderr)
        return ERROR
    worst = PROVED
    for path in files:
        report = check_file(path, args)
        prefix = f"{path}: " if len(files) > 1 or str(path) != "-" else ""
        for w in report.warnings:
            print(f"{prefix}{'warning: ' if report.status != ERROR else ''}{w}", file=sys.stderr)
        for i, line in enumerate(report.lines):
            print((prefix if i == 0 else "") + line)
        worst = max(worst, report.status)
    return worst


if __name__ == "__main__":
    sys.exit(main())
