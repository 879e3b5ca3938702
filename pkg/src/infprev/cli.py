"""Command-line front end.

Exit codes: 0 coherent / accepted, 1 incoherent / rejected / no witness,
2 usage or problem-file errors.  Reports are ``key: value`` lines.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, TextIO

from .coherence import SureLossWitness, check_coherence1, check_extended_coherence
from .extension import (
    ExtensionRejected,
    coherent_interval,
    conditional_from_marginals,
    extend_marginal,
)
from .extreal import format_rational
from .problem import Problem, ProblemError, format_value, load_problem, parse_value, serialize
from .scoring import Rival, ScoringMeasure, check_coherence3_dominance, construct_rival_witness

__all__ = ["main", "format_witness"]


class UsageError(Exception):
    pass


def _yes(flag: Optional[bool]) -> str:
    return "unknown" if flag is None else ("yes" if flag else "no")


def _label(prob: Problem, pair: int) -> str:
    var, event, _ = prob.previsions[pair]
    return var if event is None else f"{var}|{event}"


def format_witness(prob: Problem, w: SureLossWitness) -> List[str]:
    lines = [f"epsilon: {format_rational(w.margin)}"]
    for t in w.terms:
        if t.pair < 0:
            target = f"{t.state[0]}@{t.state[1]}"
        else:
            target = _label(prob, t.pair)
        lines.append(
            f"term: {target} alpha={format_rational(t.alpha)} price={format_rational(t.price)}"
        )
    return lines


def _emit(out: TextIO, lines: List[str]) -> None:
    for line in lines:
        print(line, file=out)


def cmd_check(prob: Problem, out: TextIO, extended: bool = False) -> int:
    a = prob.assignment()
    verdict = check_extended_coherence(a) if extended else check_coherence1(a)
    _emit(out, [f"verdict: {verdict.tag}"])
    if verdict.witness is not None:
        _emit(out, format_witness(prob, verdict.witness))
    return 0 if verdict.coherent else 1


def _incoherent_base(prob: Problem, out: TextIO) -> bool:
    v = check_coherence1(prob.assignment())
    if v.coherent:
        return False
    _emit(out, ["verdict: incoherent"])
    if v.witness is not None:
        _emit(out, format_witness(prob, v.witness))
    return True


def cmd_interval(prob: Problem, out: TextIO, var: str, event: Optional[str] = None) -> int:
    x = prob.variable(var)
    if _incoherent_base(prob, out):
        return 1
    a = prob.assignment()
    if event is None:
        iv = coherent_interval(a, x, check_input=False)
    else:
        b = prob.variable(event)
        if not b.is_nonempty_event():
            raise UsageError(f"{event} is not a nonempty event")
        try:
            iv = conditional_from_marginals(a, x, b)
        except KeyError as e:
            raise UsageError(str(e).strip("'\"")) from None
    _emit(
        out,
        [
            f"interval: [{format_value(iv.lower)}, {format_value(iv.upper)}]",
            f"lower_attained: {_yes(iv.lower_attained)}",
            f"upper_attained: {_yes(iv.upper_attained)}",
        ],
    )
    return 0


def cmd_extend(prob: Problem, out: TextIO, var: str, value: str) -> int:
    x = prob.variable(var)
    p = parse_value(value)
    if _incoherent_base(prob, out):
        return 1
    try:
        extend_marginal(prob.assignment(), x, p)
    except ExtensionRejected as e:
        iv = e.interval
        _emit(out, ["result: rejected", f"interval: [{format_value(iv.lower)}, {format_value(iv.upper)}]"])
        return 1
    prob.previsions.append((var, None, p))
    _emit(out, ["result: accepted"])
    return 0


def cmd_witness(prob: Problem, out: TextIO, measure: ScoringMeasure) -> int:
    a = prob.assignment()
    v = check_coherence1(a)
    if v.coherent:
        _emit(out, ["verdict: coherent", "witness: none (coherent assignments admit no dominating rivals)"])
        return 1
    if v.witness is None:
        _emit(out, ["verdict: incoherent", "witness: too large to write out"])
        return 1
    rw = construct_rival_witness(a, v.witness, measure)
    lines = [
        "verdict: incoherent",
        f"measure: {measure.spec()}",
        f"z: {format_rational(rw.z)}",
        f"epsilon: {format_rational(rw.epsilon)}",
        f"margin: {format_rational(rw.margin)}",
    ]
    for r in rw.rivals:
        target = f"{r.target[0]}@{r.target[1]}" if isinstance(r.target, tuple) else _label(prob, r.target)
        c = "" if r.c is None else f" c={format_rational(r.c)}"
        lines.append(f"rival: {target} q={format_rational(r.q)}{c}")
    lines.append(f"dominance: {check_coherence3_dominance(a, rw.rivals)}")
    _emit(out, lines)
    return 0


def _parse_rivals(prob: Problem, text: str, measure: ScoringMeasure) -> List[Rival]:
    """``X=q``, ``X|B=q``, ``X=q:c`` (reference for infinite previsions), ``tail@k=q``."""
    rivals = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"malformed rival {item!r}")
        q_text, _, c_text = val.partition(":")
        q = parse_value(q_text)
        if not q.is_finite:
            raise UsageError("rival forecasts must be finite")
        c = parse_value(c_text).value if c_text else None
        if "@" in key:
            tail, _, k = key.partition("@")
            target = (tail, int(k))
        else:
            var, _, event = key.partition("|")
            try:
                target = prob.pair_index(var, event or None)
            except KeyError as e:
                raise UsageError(str(e).strip("'\"")) from None
        rivals.append(Rival(target, q.value, measure, c))
    if not rivals:
        raise UsageError("no rivals given")
    return rivals


def cmd_score(prob: Problem, out: TextIO, rule: ScoringMeasure, rivals: str) -> int:
    a = prob.assignment()
    try:
        inf = check_coherence3_dominance(a, _parse_rivals(prob, rivals, rule))
    except (KeyError, ValueError) as e:
        raise UsageError(str(e).strip("'\"")) from None
    _emit(out, [f"infimum: {format_value(inf)}", f"dominates: {'yes' if inf > 0 else 'no'}"])
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="infprev", description="Coherence of infinite previsions.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="decide coherence, printing a sure-loss witness if any")
    c.add_argument("file")
    c.add_argument("--extended", action="store_true", help="use the inequality test on linear combinations")
    i = sub.add_parser("interval", help="coherent values for a new prevision")
    i.add_argument("file")
    i.add_argument("var")
    i.add_argument("event", nargs="?")
    e = sub.add_parser("extend", help="try to add a marginal prevision")
    e.add_argument("file")
    e.add_argument("var")
    e.add_argument("value")
    e.add_argument("--write", metavar="PATH", help="save the extended problem")
    w = sub.add_parser("witness", help="rival forecasts that beat an incoherent assignment")
    w.add_argument("file")
    w.add_argument("--measure", default="lebesgue", help="'lebesgue' or 'd0|b1|d1|...' (default lebesgue)")
    s = sub.add_parser("score", help="score advantage of given rival forecasts")
    s.add_argument("file")
    s.add_argument("--rule", default="lebesgue", help="scoring measure, same syntax as --measure")
    s.add_argument("--rivals", required=True, help="comma-separated X=q, X|B=q, X=q:c or tail@k=q")
    s2 = sub.add_parser("format", help="print the canonical form of a problem file")
    s2.add_argument("file")
    return p


def main(argv: Optional[List[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        prob = load_problem(args.file)
        if args.command == "check":
            return cmd_check(prob, out, args.extended)
        if args.command == "interval":
            return cmd_interval(prob, out, args.var, args.event)
        if args.command == "extend":
            code = cmd_extend(prob, out, args.var, args.value)
            if code == 0 and args.write:
                with open(args.write, "w", encoding="utf-8") as fh:
                    fh.write(serialize(prob))
            return code
        if args.command == "witness":
            return cmd_witness(prob, out, ScoringMeasure.parse(args.measure))
        if args.command == "score":
            return cmd_score(prob, out, ScoringMeasure.parse(args.rule), args.rivals)
        if args.command == "format":
            out.write(serialize(prob))
            return 0
    except ProblemError as e:
        print(f"error: {args.file}: {e}", file=err)
        return 2
    except OSError as e:
        print(f"error: {e}", file=err)
        return 2
    except (UsageError, KeyError, ValueError) as e:
        print(f"error: {str(e).strip(chr(39))}", file=err)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
