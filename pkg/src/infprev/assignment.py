"""Prevision assignments: finitely many (variable, event, prevision) pairs
plus optional countable families of singleton probabilities on tails.

A :class:`SingletonFamily` assigns ``P({k}) = weight * ratio**k`` to every
state ``k`` of one tail.  It is how an assignment such as
``P({omega=k}) = 2**-k for all k >= 1`` is written down without listing
infinitely many pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .extreal import ExtendedReal, _as_fraction, ext
from .gambles import RandomVariable, StateSpace

__all__ = ["PrevisionPair", "SingletonFamily", "PrevisionAssignment"]


@dataclass(frozen=True)
class PrevisionPair:
    variable: RandomVariable
    event: RandomVariable
    prevision: ExtendedReal
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "prevision", ext(self.prevision))
        if self.variable.space != self.event.space:
            raise ValueError("variable and event live on different state spaces")
        if not self.event.is_nonempty_event():
            raise ValueError("conditioning event must be a nonempty event")

    @property
    def is_marginal(self) -> bool:
        return self.event == self.event.space.constant(1)

    @property
    def is_finite(self) -> bool:
        return self.prevision.is_finite


@dataclass(frozen=True)
class SingletonFamily:
    """``P({(tail, k)}) = weight * ratio**k`` for every index ``k`` of ``tail``."""

    tail: str
    weight: Fraction
    ratio: Fraction

    def __post_init__(self):
        w = _as_fraction(self.weight)
        r = _as_fraction(self.ratio)
        if w < 0:
            raise ValueError("family weight must be nonnegative")
        if not 0 < r < 1:
            raise ValueError("family ratio must lie strictly between 0 and 1")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "ratio", r)

    def price(self, k: int) -> Fraction:
        return self.weight * self.ratio**k

    def mass_from(self, start: int) -> Fraction:
        """Total probability of indices ``>= start``."""
        return self.weight * self.ratio**start / (1 - self.ratio)

    def first_moment(self, start: int) -> Fraction:
        """``sum_{k >= start} k * P({k})``."""
        w, r = self.weight, self.ratio
        return w * (start * r**start / (1 - r) + r ** (start + 1) / (1 - r) ** 2)

    def exp2_moment(self, start: int) -> Optional[Fraction]:
        """``sum_{k >= start} 2**k * P({k})``; None when the series diverges."""
        if self.weight == 0:
            return Fraction(0)
        q = 2 * self.ratio
        if q >= 1:
            return None
        return self.weight * q**start / (1 - q)


@dataclass(frozen=True)
class PrevisionAssignment:
    space: StateSpace
    pairs: Tuple[PrevisionPair, ...] = ()
    families: Tuple[SingletonFamily, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "families", tuple(self.families))
        for p in self.pairs:
            if p.variable.space != self.space:
                raise ValueError("pair lives on a different state space")
        seen = set()
        for f in self.families:
            self.space.tail_index(f.tail)
            if f.tail in seen:
                raise ValueError(f"two singleton families on tail {f.tail!r}")
            seen.add(f.tail)

    @property
    def omega(self) -> RandomVariable:
        return self.space.constant(1)

    def with_pair(
        self, variable: RandomVariable, prevision, event: Optional[RandomVariable] = None, name: str = ""
    ) -> PrevisionAssignment:
        event = self.omega if event is None else event
        pair = PrevisionPair(variable, event, ext(prevision), name)
        return PrevisionAssignment(self.space, self.pairs + (pair,), self.families)

    def without(self, index: int) -> PrevisionAssignment:
        pairs = self.pairs[:index] + self.pairs[index + 1 :]
        return PrevisionAssignment(self.space, pairs, self.families)

    def replace_prevision(self, index: int, prevision) -> PrevisionAssignment:
        old = self.pairs[index]
        new = PrevisionPair(old.variable, old.event, ext(prevision), old.name)
        pairs = self.pairs[:index] + (new,) + self.pairs[index + 1 :]
        return PrevisionAssignment(self.space, pairs, self.families)

    def family_on(self, tail: str) -> Optional[SingletonFamily]:
        return next((f for f in self.families if f.tail == tail), None)

    def lookup(self, variable: RandomVariable, event: Optional[RandomVariable] = None) -> Optional[ExtendedReal]:
        """Assigned prevision of ``variable`` given ``event`` (default: marginal).

        Singletons of a family tail are found too.  Returns None when
        nothing is assigned.
        """
        event = self.omega if event is None else event
        for p in self.pairs:
            if p.variable == variable and p.event == event:
                return p.prevision
        if event == self.omega:
            for f in self.families:
                ti = self.space.tail_index(f.tail)
                k = _singleton_index(variable, ti)
                if k is not None:
                    return ExtendedReal(f.price(k))
        return None


def _singleton_index(rv: RandomVariable, ti: int) -> Optional[int]:
    if any(rv.atom_values) or any(not c.is_zero() for c in rv.combos):
        return None
    for j, ov in enumerate(rv.overrides):
        if j != ti and ov:
            return None
    ov = rv.overrides[ti]
    if len(ov) == 1 and ov[0][1] == 1:
        return ov[0][0]
    return None
