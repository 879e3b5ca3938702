"""Savage-form scoring rules and the rival-forecast construction.

A scoring measure ``lam`` with a piecewise-constant positive density
gives the loss

    g(x, q) = integral from x to q of (v - x) dlam(v)

(limits in the wrong order flip the sign, so ``g >= 0``).  With the
antiderivatives ``Lam(v) = lam((0, v))`` and ``Mom(v) = int_0^v u dlam(u)``
everything is a closed form in rationals.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .assignment import PrevisionAssignment
from .coherence import SureLossWitness
from .extreal import POS_INF, ExtendedReal, _as_fraction
from .gambles import RandomVariable, State, exact_inf, linear_combination, multiply_by_event

__all__ = [
    "ScoringMeasure",
    "LEBESGUE",
    "score",
    "mean_value_r",
    "Rival",
    "RivalWitness",
    "construct_rival_witness",
    "dominance_gamble",
    "check_coherence3_dominance",
]


@dataclass(frozen=True)
class ScoringMeasure:
    """Density ``densities[j]`` on the j-th piece cut out by ``breakpoints``.

    There is one more density than breakpoints; the first and last pieces
    extend to -inf and +inf.
    """

    breakpoints: Tuple[Fraction, ...] = ()
    densities: Tuple[Fraction, ...] = (Fraction(1),)

    def __post_init__(self):
        bp = tuple(_as_fraction(b) for b in self.breakpoints)
        ds = tuple(_as_fraction(d) for d in self.densities)
        if len(ds) != len(bp) + 1:
            raise ValueError("need exactly one more density than breakpoints")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(d <= 0 for d in ds):
            raise ValueError("densities must be strictly positive")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "densities", ds)
        # antiderivative values at the breakpoints, anchored at 0
        object.__setattr__(self, "_lam_at", tuple(self.Lam(b) for b in bp))

    @classmethod
    def lebesgue(cls, density=1) -> ScoringMeasure:
        return cls((), (density,))

    def density(self, v) -> Fraction:
        return self.densities[bisect.bisect_right(self.breakpoints, _as_fraction(v))]

    def _pieces(self, lo: Fraction, hi: Fraction):
        """(start, end, density) covering ``[lo, hi]`` with ``lo <= hi``."""
        cuts = [b for b in self.breakpoints if lo < b < hi]
        edges = [lo] + cuts + [hi]
        for s, e in zip(edges, edges[1:]):
            yield s, e, self.density(s)

    def _signed(self, a: Fraction, b: Fraction) -> Tuple[Fraction, Fraction]:
        lo, hi, sign = (a, b, 1) if a <= b else (b, a, -1)
        mass = mom = Fraction(0)
        for s, e, d in self._pieces(lo, hi):
            mass += d * (e - s)
            mom += d * (e * e - s * s) / 2
        return sign * mass, sign * mom

    def Lam(self, v) -> Fraction:
        return self._signed(Fraction(0), _as_fraction(v))[0]

    def Mom(self, v) -> Fraction:
        return self._signed(Fraction(0), _as_fraction(v))[1]

    def mass(self, a, b) -> Fraction:
        """Signed ``lam((a, b))``: negative when ``b < a``."""
        return self._signed(_as_fraction(a), _as_fraction(b))[0]

    def moment(self, a, b) -> Fraction:
        return self._signed(_as_fraction(a), _as_fraction(b))[1]

    def solve_mass(self, c, m) -> Fraction:
        """The unique ``q`` with ``lam((c, q)) = m`` (signed)."""
        target = self.Lam(c) + _as_fraction(m)
        j = bisect.bisect_right(self._lam_at, target)
        if j == 0:
            anchor = self.breakpoints[0] if self.breakpoints else Fraction(0)
            base = self._lam_at[0] if self.breakpoints else Fraction(0)
        else:
            anchor, base = self.breakpoints[j - 1], self._lam_at[j - 1]
        return anchor + (target - base) / self.densities[j]

    def spec(self) -> str:
        if not self.breakpoints and self.densities == (1,):
            return "lebesgue"
        parts = [f"{d.numerator}/{d.denominator}" for d in self.densities]
        cuts = [f"{b.numerator}/{b.denominator}" for b in self.breakpoints]
        out = parts[0]
        for b, d in zip(cuts, parts[1:]):
            out += f"|{b}|{d}"
        return out

    @classmethod
    def parse(cls, text: str) -> ScoringMeasure:
        """``lebesgue`` or ``d0|b1|d1|b2|d2...`` with rationals ``p/q``."""
        from .extreal import parse_rational

        text = text.strip()
        if text == "lebesgue":
            return cls()
        items = text.split("|")
        if len(items) % 2 == 0:
            raise ValueError(f"malformed measure spec {text!r}")
        vals = [parse_rational(s) for s in items]
        return cls(tuple(vals[1::2]), tuple(vals[0::2]))


LEBESGUE = ScoringMeasure()


def score(m: ScoringMeasure, x, q) -> Fraction:
    """``g(x, q)``: loss of forecast ``q`` when the outcome is ``x``."""
    x, q = _as_fraction(x), _as_fraction(q)
    mass, mom = m._signed(x, q)
    return mom - x * mass


def mean_value_r(m: ScoringMeasure, a, b) -> Fraction:
    """``lam``-average of ``v`` over the interval between ``a`` and ``b``."""
    a, b = _as_fraction(a), _as_fraction(b)
    if a == b:
        raise ValueError("r(a, a) is 0/0")
    mass, mom = m._signed(a, b)
    return mom / mass


Target = Union[int, State]


@dataclass(frozen=True)
class Rival:
    """A rival forecast ``q`` against reference ``c`` for one assessed pair.

    ``target`` is a pair index, or a ``(tail, k)`` state for a family
    singleton.  ``c`` defaults to the assessed prevision and must be given
    when that prevision is infinite.
    """

    target: Target
    q: Fraction
    measure: ScoringMeasure = LEBESGUE
    c: Optional[Fraction] = None


@dataclass(frozen=True)
class RivalWitness:
    z: Fraction
    z0: ExtendedReal
    epsilon: Fraction
    rivals: Tuple[Rival, ...]
    alphas: Tuple[Fraction, ...]

    @property
    def margin(self) -> Fraction:
        return self.z * self.epsilon / 2


def _parts(a: PrevisionAssignment, target: Target) -> Tuple[RandomVariable, RandomVariable, ExtendedReal]:
    sp = a.space
    if isinstance(target, int):
        p = a.pairs[target]
        return p.variable, p.event, p.prevision
    fam = a.family_on(target[0])
    if fam is None:
        raise KeyError(f"no singleton family on tail {target[0]!r}")
    return sp.indicator([target]), sp.constant(1), ExtendedReal(fam.price(target[1]))


def _reference(rival: Rival, prev: ExtendedReal) -> Fraction:
    if prev.is_finite:
        if rival.c is not None and rival.c != prev.value:
            raise ValueError("reference forecast must equal a finite prevision")
        return prev.value
    if rival.c is None:
        raise ValueError("infinite prevision needs a finite reference forecast c")
    c, q = _as_fraction(rival.c), _as_fraction(rival.q)
    if prev.sign > 0 and not q <= c or prev.sign < 0 and not q >= c:
        raise ValueError("c must lie between q and the infinite prevision")
    return c


def dominance_gamble(a: PrevisionAssignment, rivals: Sequence[Rival]) -> RandomVariable:
    """``sum B_j (g(X_j, c_j) - g(X_j, q_j))`` as a linear gamble."""
    terms = [(Fraction(0), a.space.zero())]
    for rv in rivals:
        x, b, prev = _parts(a, rv.target)
        c, q = _reference(rv, prev), _as_fraction(rv.q)
        if c == q:
            continue
        m = rv.measure
        r = mean_value_r(m, c, q)
        terms.append((m.mass(c, q), multiply_by_event(x - a.space.constant(r), b)))
    return linear_combination(terms)


def check_coherence3_dominance(a: PrevisionAssignment, rivals: Sequence) -> ExtendedReal:
    """Exact infimum over states of the score advantage of the rivals.

    ``rivals`` holds :class:`Rival` objects or ``(target, q, measure[, c])``
    tuples.  A positive result means the rivals score strictly better in
    every state by a uniform margin.
    """
    rivals = [r if isinstance(r, Rival) else Rival(*r) for r in rivals]
    return exact_inf(dominance_gamble(a, rivals))


def construct_rival_witness(
    a: PrevisionAssignment, w: SureLossWitness, m: ScoringMeasure = LEBESGUE
) -> RivalWitness:
    """Rival forecasts beating ``a`` in every state, built from a sure-loss witness.

    After scaling so that ``max |alpha| = 1``, each ``q_i`` solves
    ``lam((c_i, q_i)) = -z alpha_i``.  ``z`` starts at ``min(z0, 1)/2`` and
    is halved until ``sum |alpha_i| |c_i - q_i| < eps/2``, which forces a
    dominance margin of at least ``z eps / 2``.
    """
    if not w.verify(a):
        raise ValueError("not a valid sure-loss witness for this assignment")
    terms = [t for t in w.terms if t.alpha != 0]
    top = max(abs(t.alpha) for t in terms)
    w = w.scaled(1 / top)
    terms = [t for t in w.terms if t.alpha != 0]
    eps = w.margin

    # z0 is the least lam-mass of the half-line beyond some c_i; a density
    # that stays positive at both ends makes every such mass infinite
    z0 = POS_INF
    z = (Fraction(1) if z0 > 1 else z0.value) / 2
    while True:
        qs = [m.solve_mass(t.price, -z * t.alpha) for t in terms]
        spread = sum(abs(t.alpha) * abs(t.price - q) for t, q in zip(terms, qs))
        if spread < eps / 2:
            break
        z /= 2
    rivals = []
    for t, q in zip(terms, qs):
        target = t.state if t.pair < 0 else t.pair
        prev = _parts(a, target)[2]
        rivals.append(Rival(target, q, m, None if prev.is_finite else t.price))
    return RivalWitness(z, z0, eps, tuple(rivals), tuple(t.alpha for t in terms))
