"""Line-oriented text format for coherence problems.

    # comments and blank lines are ignored
    atom zero
    tail pos start=1 orient=+
    var X pos=0/1,1/1,0/1
    var B zero=1/1 pos@3=1/1
    family pos weight=1/1 ratio=1/2
    prev X = 2/1
    prev X | B = 1/2
    query interval X

In a ``var`` line ``atom=v`` sets an atom value, ``tail=one,n,exp2`` sets
the growth combination ``one + n*k + exp2*2**k`` on a tail and
``tail@k=v`` sets a single tail point.  Everything omitted is 0.  Only
exact rationals (``p/q`` or integers) and ``+inf``/``-inf`` are accepted.
:func:`serialize` writes the canonical form, which parses back to the
same text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .assignment import PrevisionAssignment, SingletonFamily
from .extreal import NEG_INF, POS_INF, ExtendedReal, format_rational, parse_rational
from .gambles import GrowthCombo, RandomVariable, StateSpace, TailAtom

__all__ = ["ProblemError", "Problem", "parse_problem", "serialize", "load_problem"]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class ProblemError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass
class Problem:
    space: StateSpace
    variables: Dict[str, RandomVariable]
    previsions: List[Tuple[str, Optional[str], ExtendedReal]] = field(default_factory=list)
    families: List[SingletonFamily] = field(default_factory=list)
    queries: List[List[str]] = field(default_factory=list)

    def assignment(self) -> PrevisionAssignment:
        a = PrevisionAssignment(self.space, families=tuple(self.families))
        for var, event, value in self.previsions:
            ev = None if event is None else self.variables[event]
            a = a.with_pair(self.variables[var], value, event=ev, name=var)
        return a

    def pair_index(self, var: str, event: Optional[str] = None) -> int:
        for i, (v, e, _) in enumerate(self.previsions):
            if v == var and e == event:
                return i
        raise KeyError(f"no prevision assigned to {var}" + (f" | {event}" if event else ""))

    def variable(self, name: str) -> RandomVariable:
        try:
            return self.variables[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None


def parse_value(text: str) -> ExtendedReal:
    if text == "+inf":
        return POS_INF
    if text == "-inf":
        return NEG_INF
    return ExtendedReal(parse_rational(text))


def format_value(v: ExtendedReal) -> str:
    return str(v) if not v.is_finite else format_rational(v.value)


def _check_name(n: int, name: str, used: set) -> None:
    if not _NAME.match(name):
        raise ProblemError(n, f"invalid name {name!r}")
    if name in used:
        raise ProblemError(n, f"duplicate name {name!r}")
    used.add(name)


def _options(n: int, tokens: List[str], allowed: Tuple[str, ...]) -> Dict[str, str]:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in allowed or key in out:
            raise ProblemError(n, f"unexpected option {tok!r}")
        out[key] = val
    return out


def parse_problem(text: str) -> Problem:
    atoms: List[str] = []
    tails: List[TailAtom] = []
    raw_vars: List[Tuple[int, str, List[str]]] = []
    prevs, fams, queries = [], [], []
    used: set = set()
    space: Optional[StateSpace] = None
    for n, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()
        if not tokens:
            continue
        kind, rest = tokens[0], tokens[1:]
        try:
            if kind in ("atom", "tail"):
                if raw_vars or prevs or fams:
                    raise ProblemError(n, "states must be declared before variables")
                if not rest:
                    raise ProblemError(n, f"{kind} needs a name")
                _check_name(n, rest[0], used)
                if kind == "atom":
                    if len(rest) != 1:
                        raise ProblemError(n, "atom takes only a name")
                    atoms.append(rest[0])
                else:
                    opts = _options(n, rest[1:], ("start", "orient"))
                    start = int(opts.get("start", "1"))
                    orient = {"+": 1, "-": -1}.get(opts.get("orient", "+"))
                    if orient is None:
                        raise ProblemError(n, "orient must be + or -")
                    tails.append(TailAtom(rest[0], start, orient))
            elif kind == "var":
                if not rest:
                    raise ProblemError(n, "var needs a name")
                _check_name(n, rest[0], used)
                raw_vars.append((n, rest[0], rest[1:]))
            elif kind == "family":
                if len(rest) < 1:
                    raise ProblemError(n, "family needs a tail name")
                opts = _options(n, rest[1:], ("weight", "ratio"))
                if set(opts) != {"weight", "ratio"}:
                    raise ProblemError(n, "family needs weight= and ratio=")
                fams.append((n, rest[0], parse_rational(opts["weight"]), parse_rational(opts["ratio"])))
            elif kind == "prev":
                prevs.append((n, _parse_prev(n, rest)))
            elif kind == "query":
                if not rest:
                    raise ProblemError(n, "empty query")
                queries.append(rest)
            else:
                raise ProblemError(n, f"unknown directive {kind!r}")
        except ProblemError:
            raise
        except (ValueError, TypeError, KeyError) as e:
            raise ProblemError(n, str(e)) from None
    try:
        space = StateSpace(tuple(atoms), tuple(tails))
    except ValueError as e:
        raise ProblemError(0, str(e)) from None
    variables = {}
    for n, name, toks in raw_vars:
        try:
            variables[name] = _parse_var(space, toks)
        except ProblemError:
            raise
        except (ValueError, TypeError, KeyError) as e:
            raise ProblemError(n, str(e)) from None
    families = []
    for n, tail, w, r in fams:
        if tail not in [t.name for t in tails]:
            raise ProblemError(n, f"unknown tail {tail!r}")
        try:
            families.append(SingletonFamily(tail, w, r))
        except ValueError as e:
            raise ProblemError(n, str(e)) from None
    previsions = []
    for n, (var, event, value) in prevs:
        for ref in (var, event):
            if ref is not None and ref not in variables:
                raise ProblemError(n, f"unknown variable {ref!r}")
        if event is not None and not variables[event].is_nonempty_event():
            raise ProblemError(n, f"{event} is not a nonempty event")
        previsions.append((var, event, value))
    prob = Problem(space, variables, previsions, families, queries)
    try:
        prob.assignment()
    except ValueError as e:
        raise ProblemError(0, str(e)) from None
    return prob


def _parse_prev(n: int, rest: List[str]) -> Tuple[str, Optional[str], ExtendedReal]:
    if len(rest) == 3 and rest[1] == "=":
        return rest[0], None, parse_value(rest[2])
    if len(rest) == 5 and rest[1] == "|" and rest[3] == "=":
        return rest[0], rest[2], parse_value(rest[4])
    raise ProblemError(n, "expected 'prev X = v' or 'prev X | B = v'")


def _parse_var(space: StateSpace, toks: List[str]) -> RandomVariable:
    atoms, combos, points = {}, {}, {}
    for tok in toks:
        key, sep, val = tok.partition("=")
        if not sep:
            raise ValueError(f"expected state=value, got {tok!r}")
        if "@" in key:
            tail, _, k = key.partition("@")
            space.tail_index(tail)
            if (tail, int(k)) in points:
                raise ValueError(f"{key} given twice")
            points[(tail, int(k))] = parse_rational(val)
        elif key in space.atoms:
            if key in atoms:
                raise ValueError(f"{key} given twice")
            atoms[key] = parse_rational(val)
        else:
            space.tail_index(key)
            parts = val.split(",")
            if len(parts) != 3 or key in combos:
                raise ValueError(f"tail {key} needs one,n,exp2 exactly once")
            combos[key] = GrowthCombo(*(parse_rational(p) for p in parts))
    return space.variable(atoms=atoms, tails=combos, points=points)


def _var_tokens(rv: RandomVariable) -> List[str]:
    sp = rv.space
    out = []
    for name, v in zip(sp.atoms, rv.atom_values):
        if v:
            out.append(f"{name}={format_rational(v)}")
    for t, combo, ov in zip(sp.tails, rv.combos, rv.overrides):
        if not combo.is_zero():
            out.append(f"{t.name}=" + ",".join(format_rational(c) for c in combo.as_tuple()))
        for k, v in ov:
            out.append(f"{t.name}@{k}={format_rational(v)}")
    return out


def serialize(prob: Problem) -> str:
    lines = [f"atom {a}" for a in prob.space.atoms]
    for t in prob.space.tails:
        lines.append(f"tail {t.name} start={t.start_index} orient={'+' if t.orientation > 0 else '-'}")
    for name, rv in prob.variables.items():
        lines.append(" ".join(["var", name] + _var_tokens(rv)))
    for f in prob.families:
        lines.append(f"family {f.tail} weight={format_rational(f.weight)} ratio={format_rational(f.ratio)}")
    for var, event, value in prob.previsions:
        cond = f" | {event}" if event is not None else ""
        lines.append(f"prev {var}{cond} = {format_value(value)}")
    for q in prob.queries:
        lines.append(" ".join(["query"] + q))
    return "\n".join(lines) + "\n"


def load_problem(path: str) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())
