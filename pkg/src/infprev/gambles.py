"""State spaces, random variables, events and exact suprema.

A state space is a finite list of named atoms plus a finite list of
integer-indexed tails.  On a tail starting at ``N`` a random variable is
``one + n*k + exp2*2**k`` at index ``k >= N`` except at finitely many
indices where an explicit value overrides the growth combination.  That
is enough to write down indicator functions of single tail states as well
as unbounded variables such as ``k`` and ``2**k``.

Everything is exact (``fractions.Fraction``) and immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

from .extreal import NEG_INF, POS_INF, ExtendedReal, _as_fraction

__all__ = [
    "TailAtom",
    "StateSpace",
    "GrowthCombo",
    "RandomVariable",
    "State",
    "evaluate",
    "linear_combination",
    "multiply_by_event",
    "exact_sup",
    "exact_inf",
    "tail_sup",
    "restricted_sup",
]

State = Union[str, Tuple[str, int]]


@dataclass(frozen=True)
class TailAtom:
    """States ``start_index, start_index+1, ...``.

    ``orientation`` only affects how an index is labelled: with
    orientation -1 index ``k`` stands for the conceptual state ``-k``.
    """

    name: str
    start_index: int = 1
    orientation: int = 1

    def __post_init__(self):
        if not isinstance(self.start_index, int) or isinstance(self.start_index, bool):
            raise TypeError("start_index must be an int")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def label(self, index: int) -> int:
        return self.orientation * index


@dataclass(frozen=True)
class StateSpace:
    atoms: Tuple[str, ...] = ()
    tails: Tuple[TailAtom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "tails", tuple(self.tails))
        if not self.atoms and not self.tails:
            raise ValueError("state space must be nonempty")
        names = list(self.atoms) + [t.name for t in self.tails]
        if len(set(names)) != len(names):
            raise ValueError("atom and tail names must be unique")

    def atom_index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise KeyError(f"unknown atom {name!r}") from None

    def tail_index(self, name: str) -> int:
        for i, t in enumerate(self.tails):
            if t.name == name:
                return i
        raise KeyError(f"unknown tail {name!r}")

    # convenience constructors -------------------------------------------

    def constant(self, c) -> RandomVariable:
        c = _as_fraction(c)
        return RandomVariable(
            self,
            tuple(c for _ in self.atoms),
            tuple(GrowthCombo(c) for _ in self.tails),
        )

    def zero(self) -> RandomVariable:
        return self.constant(0)

    def variable(
        self,
        atoms: Optional[Mapping[str, object]] = None,
        tails: Optional[Mapping[str, object]] = None,
        points: Optional[Mapping[Tuple[str, int], object]] = None,
    ) -> RandomVariable:
        """Build a variable from name-keyed values; anything omitted is 0.

        ``tails`` maps a tail name to a GrowthCombo or a ``(one, n, exp2)``
        triple; ``points`` maps ``(tail, index)`` to an explicit value.
        """
        atoms = dict(atoms or {})
        tails = dict(tails or {})
        for name in list(atoms) + list(tails):
            if name not in self.atoms and name not in [t.name for t in self.tails]:
                raise KeyError(f"unknown state {name!r}")
        av = tuple(_as_fraction(atoms.get(a, 0)) for a in self.atoms)
        combos = []
        for t in self.tails:
            spec = tails.get(t.name, GrowthCombo())
            if not isinstance(spec, GrowthCombo):
                spec = GrowthCombo(*spec)
            combos.append(spec)
        over: list = [dict() for _ in self.tails]
        for (tname, k), v in (points or {}).items():
            ti = self.tail_index(tname)
            if k < self.tails[ti].start_index:
                raise ValueError(f"index {k} below start of tail {tname!r}")
            over[ti][k] = _as_fraction(v)
        return RandomVariable(self, av, tuple(combos), tuple(over))

    def indicator(self, states: Iterable[State]) -> RandomVariable:
        """Indicator of a finite set of states (atoms and/or tail points)."""
        atoms, points = {}, {}
        for s in states:
            if isinstance(s, str):
                self.atom_index(s)
                atoms[s] = 1
            else:
                points[(s[0], s[1])] = 1
        return self.variable(atoms=atoms, points=points)

    def tail_indicator(self, tail: str) -> RandomVariable:
        """Indicator of a whole tail."""
        return self.variable(tails={tail: (1, 0, 0)})


@dataclass(frozen=True)
class GrowthCombo:
    """``one + n*k + exp2*2**k`` as a function of the tail index ``k``."""

    one: Fraction = Fraction(0)
    n: Fraction = Fraction(0)
    exp2: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "one", _as_fraction(self.one))
        object.__setattr__(self, "n", _as_fraction(self.n))
        object.__setattr__(self, "exp2", _as_fraction(self.exp2))

    def value(self, k: int) -> Fraction:
        return self.one + self.n * k + self.exp2 * Fraction(2) ** k

    def __add__(self, other: GrowthCombo) -> GrowthCombo:
        return GrowthCombo(self.one + other.one, self.n + other.n, self.exp2 + other.exp2)

    def scale(self, c) -> GrowthCombo:
        c = _as_fraction(c)
        return GrowthCombo(self.one * c, self.n * c, self.exp2 * c)

    def is_zero(self) -> bool:
        return not (self.one or self.n or self.exp2)

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.one, self.n, self.exp2)


_Overrides = Tuple[Tuple[Tuple[int, Fraction], ...], ...]


@dataclass(frozen=True, eq=True)
class RandomVariable:
    """Exact real function on a :class:`StateSpace`.

    ``overrides[i]`` holds ``(index, value)`` pairs for tail ``i`` where the
    value differs from the growth combination.  The representation is
    canonical, so ``==`` is equality of functions.
    """

    space: StateSpace
    atom_values: Tuple[Fraction, ...]
    combos: Tuple[GrowthCombo, ...]
    overrides: _Overrides = field(default=())

    def __post_init__(self):
        sp = self.space
        av = tuple(_as_fraction(v) for v in self.atom_values)
        if len(av) != len(sp.atoms) or len(self.combos) != len(sp.tails):
            raise ValueError("random variable does not cover its state space")
        over = self.overrides or tuple(() for _ in sp.tails)
        if len(over) != len(sp.tails):
            raise ValueError("overrides do not match the tails")
        canon = []
        for tail, combo, ov in zip(sp.tails, self.combos, over):
            items = ov.items() if isinstance(ov, Mapping) else ov
            kept = {}
            for k, v in items:
                if k < tail.start_index:
                    raise ValueError(f"override index {k} below start of tail {tail.name!r}")
                v = _as_fraction(v)
                if v != combo.value(k):
                    kept[k] = v
            canon.append(tuple(sorted(kept.items())))
        object.__setattr__(self, "atom_values", av)
        object.__setattr__(self, "overrides", tuple(canon))

    def points(self, tail: int) -> dict:
        return dict(self.overrides[tail])

    def value_at(self, tail: int, k: int) -> Fraction:
        for idx, v in self.overrides[tail]:
            if idx == k:
                return v
        return self.combos[tail].value(k)

    def is_event(self) -> bool:
        if any(v not in (0, 1) for v in self.atom_values):
            return False
        for combo, ov in zip(self.combos, self.overrides):
            if combo.as_tuple() not in ((0, 0, 0), (1, 0, 0)):
                return False
            if any(v not in (0, 1) for _, v in ov):
                return False
        return True

    def is_nonempty_event(self) -> bool:
        if not self.is_event():
            return False
        if any(self.atom_values) or any(c.one for c in self.combos):
            return True
        return any(v for ov in self.overrides for _, v in ov)

    def is_constant(self) -> Optional[Fraction]:
        """The constant value if the variable is constant, else None."""
        values = set(self.atom_values)
        for combo, ov in zip(self.combos, self.overrides):
            if combo.n or combo.exp2 or ov:
                return None
            values.add(combo.one)
        return values.pop() if len(values) == 1 else None

    def __add__(self, other: RandomVariable) -> RandomVariable:
        return linear_combination([(1, self), (1, other)])

    def __sub__(self, other: RandomVariable) -> RandomVariable:
        return linear_combination([(1, self), (-1, other)])

    def __neg__(self) -> RandomVariable:
        return linear_combination([(-1, self)])

    def __mul__(self, c) -> RandomVariable:
        return linear_combination([(c, self)])

    __rmul__ = __mul__

    def __le__(self, other: RandomVariable) -> bool:
        """Pointwise ``<=`` on the whole space."""
        return exact_sup(self - other) <= 0


def _resolve(space: StateSpace, state: State) -> Tuple[str, int, int]:
    if isinstance(state, str):
        return ("atom", space.atom_index(state), 0)
    tname, k = state
    ti = space.tail_index(tname)
    if k < space.tails[ti].start_index:
        raise ValueError(f"index {k} below start of tail {tname!r}")
    return ("tail", ti, k)


def evaluate(rv: RandomVariable, state: State) -> Fraction:
    """Exact value of ``rv`` at an atom name or a ``(tail, index)`` pair."""
    kind, i, k = _resolve(rv.space, state)
    if kind == "atom":
        return rv.atom_values[i]
    return rv.value_at(i, k)


def linear_combination(terms: Sequence[Tuple[object, RandomVariable]]) -> RandomVariable:
    terms = [(_as_fraction(c), rv) for c, rv in terms]
    if not terms:
        raise ValueError("empty linear combination")
    space = terms[0][1].space
    if any(rv.space != space for _, rv in terms):
        raise ValueError("random variables live on different state spaces")
    atoms = [Fraction(0)] * len(space.atoms)
    combos = [GrowthCombo() for _ in space.tails]
    for c, rv in terms:
        if not c:
            continue
        for i, v in enumerate(rv.atom_values):
            atoms[i] += c * v
        for i, combo in enumerate(rv.combos):
            combos[i] = combos[i] + combo.scale(c)
    # an override contributes its deviation from its own combination
    over = []
    for ti in range(len(space.tails)):
        dev: dict = {}
        for c, rv in terms:
            if not c:
                continue
            combo = rv.combos[ti]
            for k, v in rv.overrides[ti]:
                dev[k] = dev.get(k, Fraction(0)) + c * (v - combo.value(k))
        over.append({k: combos[ti].value(k) + d for k, d in dev.items()})
    return RandomVariable(space, tuple(atoms), tuple(combos), tuple(over))


def multiply_by_event(rv: RandomVariable, b: RandomVariable) -> RandomVariable:
    """Pointwise product ``rv * b`` for an event ``b``."""
    if rv.space != b.space:
        raise ValueError("random variables live on different state spaces")
    if not b.is_event():
        raise ValueError("second argument is not an event (found a non-0/1 value)")
    atoms = tuple(v * w for v, w in zip(rv.atom_values, b.atom_values))
    combos, over = [], []
    for ti, (c, bc) in enumerate(zip(rv.combos, b.combos)):
        combos.append(c if bc.one == 1 else GrowthCombo())
        idx = {k for k, _ in rv.overrides[ti]} | {k for k, _ in b.overrides[ti]}
        over.append({k: rv.value_at(ti, k) * b.value_at(ti, k) for k in idx})
    return RandomVariable(rv.space, atoms, tuple(combos), tuple(over))


# -- suprema --------------------------------------------------------------


def _first_free(k: int, skip) -> int:
    while k in skip:
        k += 1
    return k


def _last_free(k: int, lo: int, skip) -> Optional[int]:
    while k >= lo and k in skip:
        k -= 1
    return k if k >= lo else None


def turning_index(combo: GrowthCombo, start: int) -> int:
    """Smallest ``k >= start`` from which a combo with ``exp2 < 0`` strictly decreases.

    The increment ``combo(k+1) - combo(k)`` is ``n + exp2*2**k``; it is
    negative for all ``k >= start`` once it is negative at ``start``,
    because ``exp2*2**k`` only decreases.
    """
    if combo.exp2 >= 0:
        raise ValueError("turning index needs exp2 < 0")
    k = start
    if combo.n > 0:
        ratio = combo.n / -combo.exp2
        whole = ratio.numerator // ratio.denominator
        if whole > 0:
            k = max(start, whole.bit_length() - 1)
    two = Fraction(2)
    while combo.n + combo.exp2 * two**k >= 0:
        k += 1
    return k


def tail_sup(
    combo: GrowthCombo, start: int, skip: Iterable[int] = ()
) -> Tuple[ExtendedReal, Optional[int]]:
    """Sup of ``combo(k)`` over ``k >= start`` with ``k`` not in ``skip``.

    Returns ``(sup, argmax)``; argmax is None when the sup is infinite.
    """
    skip = set(skip)
    if combo.exp2 > 0 or (combo.exp2 == 0 and combo.n > 0):
        return POS_INF, None
    if combo.exp2 == 0:
        k = _first_free(start, skip)
        return ExtendedReal(combo.value(k)), k
    turn = turning_index(combo, start)
    cands = [_first_free(turn + 1, skip)]
    before = _last_free(turn, start, skip)
    if before is not None:
        cands.insert(0, before)
    best = max(cands, key=lambda k: (combo.value(k), -k))
    return ExtendedReal(combo.value(best)), best


def restricted_sup(
    rv: RandomVariable, tail_from: Optional[Mapping[int, int]] = None
) -> Tuple[ExtendedReal, Optional[State]]:
    """Sup of ``rv``, optionally starting some tails (by position) at a later index.

    Returns ``(sup, argmax_state)``; the argmax is None when the sup is
    infinite or the restricted domain is empty of finite atoms and tails.
    """
    tail_from = tail_from or {}
    best: ExtendedReal = NEG_INF
    where: Optional[State] = None
    for name, v in zip(rv.space.atoms, rv.atom_values):
        if v > best:
            best, where = ExtendedReal(v), name
    for ti, tail in enumerate(rv.space.tails):
        lo = max(tail.start_index, tail_from.get(ti, tail.start_index))
        ov = dict(rv.overrides[ti])
        for k, v in ov.items():
            if k >= lo and v > best:
                best, where = ExtendedReal(v), (tail.name, k)
        s, arg = tail_sup(rv.combos[ti], lo, ov)
        if s > best:
            best = s
            where = (tail.name, arg) if arg is not None else None
    return best, where


def exact_sup(rv: RandomVariable) -> ExtendedReal:
    """Supremum of ``rv`` over every state, exactly."""
    return restricted_sup(rv)[0]


def exact_inf(rv: RandomVariable) -> ExtendedReal:
    return -exact_sup(-rv)
