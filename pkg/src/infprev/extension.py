"""Coherent extension of prevision assignments.

``coherent_interval`` computes the set of coherent values for a new
marginal prevision as ``[sup A, inf B]`` with

    A = {f : Y + f <= X for some acceptable Y}
    B = {f : -Y + f >= X for some acceptable Y}

each obtained from the cone LP of :mod:`infprev._cone`.  Infinite
endpoints come from empty sets or unbounded LPs and are then checked as
actual choices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from . import _cone
from .assignment import PrevisionAssignment
from .coherence import SureLossWitness, check_coherence1
from .extreal import NEG_INF, POS_INF, ExtendedReal, UndefinedArithmetic, ext
from .gambles import (
    RandomVariable,
    StateSpace,
    TailAtom,
    linear_combination,
    multiply_by_event,
)

__all__ = [
    "CoherentInterval",
    "IncoherentAssignment",
    "ExtensionRejected",
    "NotInSpan",
    "coherent_interval",
    "extend_marginal",
    "extend_sequentially",
    "conditional_from_marginals",
    "extend_linear_span",
    "build_conditional_expectation",
    "restrict_to_event",
    "default_choice",
]


class IncoherentAssignment(ValueError):
    def __init__(self, witness: Optional[SureLossWitness]):
        super().__init__("input assignment is incoherent")
        self.witness = witness


class NotInSpan(ValueError):
    """The combination of previsions is inf - inf, so it has no defined value."""


@dataclass(frozen=True)
class CoherentInterval:
    lower: ExtendedReal
    upper: ExtendedReal
    lower_attained: Optional[bool] = None
    upper_attained: Optional[bool] = None

    def __contains__(self, p) -> bool:
        p = ext(p)
        if p < self.lower or p > self.upper:
            return False
        if p == self.lower and self.lower_attained is False:
            return False
        if p == self.upper and self.upper_attained is False:
            return False
        return True

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


class ExtensionRejected(ValueError):
    def __init__(self, value: ExtendedReal, interval: CoherentInterval):
        super().__init__(f"{value} lies outside the coherent interval {interval}")
        self.value = value
        self.interval = interval


def _require_coherent(a: PrevisionAssignment) -> None:
    v = check_coherence1(a)
    if not v.coherent:
        raise IncoherentAssignment(v.witness)


def coherent_interval(
    a: PrevisionAssignment,
    x: RandomVariable,
    check_input: bool = True,
    check_endpoints: bool = True,
) -> CoherentInterval:
    """Interval of coherent values for a new marginal prevision ``P(X)``."""
    if check_input:
        _require_coherent(a)
    lower = _cone.ConeProgram(a, target=-x).sup_offset()
    upper = -_cone.ConeProgram(a, target=x).sup_offset()
    if upper < lower:
        raise AssertionError(f"empty coherent interval [{lower}, {upper}]")
    lo_ok = hi_ok = None
    if check_endpoints:
        lo_ok = check_coherence1(a.with_pair(x, lower)).coherent
        hi_ok = lo_ok if upper == lower else check_coherence1(a.with_pair(x, upper)).coherent
    return CoherentInterval(lower, upper, lo_ok, hi_ok)


def default_choice(interval: CoherentInterval) -> ExtendedReal:
    """Deterministic pick: midpoint of finite endpoints, else a finite endpoint, else 0."""
    lo, hi = interval.lower, interval.upper
    if lo.is_finite and hi.is_finite:
        return ExtendedReal((lo.value + hi.value) / 2)
    if lo.is_finite:
        return lo
    if hi.is_finite:
        return hi
    if lo == hi:
        return lo
    return ExtendedReal(0)


def extend_marginal(
    a: PrevisionAssignment, x: RandomVariable, p, name: str = ""
) -> PrevisionAssignment:
    """Add ``P(X) = p`` if that keeps the assignment coherent."""
    p = ext(p)
    interval = coherent_interval(a, x, check_endpoints=False)
    if p < interval.lower or p > interval.upper:
        raise ExtensionRejected(p, interval)
    out = a.with_pair(x, p, name=name)
    if not p.is_finite or p in (interval.lower, interval.upper):
        if not check_coherence1(out).coherent:
            raise ExtensionRejected(p, interval)
    return out


def extend_sequentially(
    a: PrevisionAssignment,
    items: Iterable[Tuple[RandomVariable, Optional[RandomVariable]]],
    choose=default_choice,
) -> PrevisionAssignment:
    """Extend to each ``(X, B)`` in turn: first ``P(B)``, then ``P(XB)``,
    then ``P(X|B)`` from those two (finite version of the general
    extension theorem).  ``choose`` picks a value inside each interval."""
    _require_coherent(a)
    for x, b in items:
        if b is None or b == a.omega:
            a = _ensure_marginal(a, x, choose)
            continue
        a = _ensure_marginal(a, b, choose)
        a = _ensure_marginal(a, multiply_by_event(x, b), choose)
        if a.lookup(x, b) is None:
            cond = conditional_from_marginals(a, x, b)
            a = a.with_pair(x, choose(cond), event=b)
    return a


def conditional_from_marginals(
    a: PrevisionAssignment, x: RandomVariable, b: RandomVariable
) -> CoherentInterval:
    """Coherent values of ``P(X|B)`` implied by ``P(B)`` and ``P(XB)``."""
    pb = _known(a, b)
    pxb = _known(a, multiply_by_event(x, b))
    if pb is None or pxb is None:
        raise KeyError("P(B) and P(XB) must both be assigned")
    if pb < 0:
        raise ValueError("P(B) < 0: input is incoherent")
    if pb > 0:
        if not pb.is_finite:
            raise ValueError("P(B) = +inf: input is incoherent")
        v = pxb / pb.value
        return CoherentInterval(v, v, True, True)
    if pxb != 0:
        v = POS_INF if pxb > 0 else NEG_INF
        return CoherentInterval(v, v, True, True)
    return CoherentInterval(NEG_INF, POS_INF, True, True)


def _span_value(a: PrevisionAssignment, terms) -> Tuple[ExtendedReal, RandomVariable]:
    total = ExtendedReal(0)
    parts = []
    for coef, var in terms:
        coef = Fraction(coef)
        prev = _known(a, var)
        if prev is None:
            raise KeyError("variable in the representation has no marginal prevision")
        try:
            total = total + prev * coef
        except UndefinedArithmetic:
            raise NotInSpan("inf - inf in the representation") from None
        parts.append((coef, var))
    return total, linear_combination(parts)


def extend_linear_span(
    a: PrevisionAssignment,
    terms: Sequence[Tuple[object, RandomVariable]],
    other: Optional[Sequence[Tuple[object, RandomVariable]]] = None,
) -> ExtendedReal:
    """``sum alpha_j P(X_j)`` for ``Y = sum alpha_j X_j``.

    With a second representation of the same ``Y``, both sums must agree;
    disagreement means the input was incoherent.
    """
    value, y = _span_value(a, terms)
    if other is not None:
        value2, y2 = _span_value(a, other)
        if y2 != y:
            raise ValueError("the two representations describe different variables")
        if value2 != value:
            raise IncoherentAssignment(None)
    return value


def restrict_to_event(
    space: StateSpace, b: RandomVariable
) -> Tuple[StateSpace, Callable[[RandomVariable], RandomVariable]]:
    """The event ``b`` as a state space of its own, and a map restricting variables to it.

    Atoms in ``b`` stay atoms; isolated tail points in ``b`` become atoms
    named ``tail@k``; a tail inside ``b`` apart from finitely many holes
    becomes atoms up to the last hole plus a tail starting after it.
    """
    if not b.is_nonempty_event():
        raise ValueError("restriction needs a nonempty event")
    atoms: List[str] = []
    atom_refs = []  # ("atom", i, 0) or ("tail", tail index, k)
    for i, name in enumerate(space.atoms):
        if b.atom_values[i] == 1:
            atoms.append(name)
            atom_refs.append(("atom", i, 0))
    tails = []
    tail_refs = []
    for ti, t in enumerate(space.tails):
        pts = dict(b.overrides[ti])
        if b.combos[ti].one == 1:
            holes = [k for k, v in pts.items() if v == 0]
            new_start = max(holes) + 1 if holes else t.start_index
            for k in range(t.start_index, new_start):
                if k not in holes:
                    atoms.append(f"{t.name}@{k}")
                    atom_refs.append(("tail", ti, k))
            tails.append(TailAtom(t.name, new_start, t.orientation))
            tail_refs.append(ti)
        else:
            for k in sorted(k for k, v in pts.items() if v == 1):
                atoms.append(f"{t.name}@{k}")
                atom_refs.append(("tail", ti, k))
    sub = StateSpace(tuple(atoms), tuple(tails))

    def restrict(x: RandomVariable) -> RandomVariable:
        av = tuple(
            x.atom_values[i] if kind == "atom" else x.value_at(i, k) for kind, i, k in atom_refs
        )
        combos, over = [], []
        for new_ti, ti in enumerate(tail_refs):
            combos.append(x.combos[ti])
            start = sub.tails[new_ti].start_index
            over.append({k: v for k, v in x.overrides[ti] if k >= start})
        return RandomVariable(sub, av, tuple(combos), tuple(over))

    return sub, restrict


def build_conditional_expectation(
    a: PrevisionAssignment,
    variables: Sequence[RandomVariable],
    events: Sequence[RandomVariable],
    choose=default_choice,
) -> PrevisionAssignment:
    """Assign ``P(X|B)`` for every listed variable and nonempty event.

    Forced values come from ``P(XB)/P(B)`` or the sign of ``P(XB)`` when
    ``P(B) = 0``.  Free values (``P(B) = P(XB) = 0``) are chosen inside the
    coherent interval of the restricted problem on ``B``, whose assessed
    previsions are the forced infinite conditionals given ``B``.  Missing
    marginals ``P(B)``, ``P(XB)`` are first added by sequential extension.
    """
    _require_coherent(a)
    for b in events:
        if not b.is_nonempty_event():
            raise ValueError("conditioning events must be nonempty")
        for x in variables:
            a = _ensure_marginal(a, b, choose)
            a = _ensure_marginal(a, multiply_by_event(x, b), choose)
        forced, free = [], []
        for x in variables:
            if a.lookup(x, b) is not None:
                continue
            cond = conditional_from_marginals(a, x, b)
            if cond.is_point:
                forced.append((x, cond.lower))
            else:
                free.append(x)
        for x, v in forced:
            a = a.with_pair(x, v, event=b)
        if not free:
            continue
        sub, restrict = restrict_to_event(a.space, b)
        local = PrevisionAssignment(sub)
        for x, v in forced:
            if not v.is_finite:
                local = local.with_pair(restrict(x), v)
        for x in free:
            xb = restrict(x)
            known = local.lookup(xb)
            if known is None:
                known = choose(coherent_interval(local, xb, check_input=False, check_endpoints=False))
                local = local.with_pair(xb, known)
            a = a.with_pair(x, known, event=b)
    return a


def _known(a: PrevisionAssignment, v: RandomVariable) -> Optional[ExtendedReal]:
    """Assigned marginal prevision, with constants priced at their value."""
    p = a.lookup(v)
    if p is None:
        c = v.is_constant()
        if c is not None:
            return ExtendedReal(c)
    return p


def _ensure_marginal(a: PrevisionAssignment, v: RandomVariable, choose) -> PrevisionAssignment:
    if _known(a, v) is not None:
        return a
    return a.with_pair(v, choose(coherent_interval(a, v, check_input=False, check_endpoints=False)))
