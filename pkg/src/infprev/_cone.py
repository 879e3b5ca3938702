"""Linear programs over the cone of acceptable gambles.

Shared machinery for sure-loss search (coherence) and for the endpoints
of coherent extension intervals.

A gamble is ``U = target + sum_j theta_j * column_j`` where the columns
are the finite-prevision gambles ``B(X - p)`` and, for each *active*
infinite prevision, the pair ``B*X`` / ``B`` with linked coefficients
``a`` (sign fixed, nonzero) and ``k`` (free, so the price ``-k/a`` is
arbitrary).

Singleton families on tails are not columns.  Eliminating their
(infinitely many) coefficients turns "``U`` plus finitely many family
gambles is ``<= -1`` everywhere" into a condition on ``U`` alone::

    sum_f E_f[U] + r * S(U) <= -1

where ``E_f`` is expectation under family ``f``, ``r`` is one minus the
total family mass and ``S`` is the sup of ``U`` off the family points
(including the limsup along family tails).  Finite truncations of the
families approach that value monotonically, which is what makes finite
sure-loss witnesses extractable (see :func:`family_witness`).

Unboundedness of ``U`` on each tail is split into cases: ``flat``
(``exp2 = 0, n <= 0``), ``const`` (``exp2 = n = 0``), ``lin``
(``exp2 = 0, n < 0``) and ``exp`` (``exp2 < 0``).  Strict inequalities
(``a > 0``, ``n < 0``, ``exp2 < 0``) share one slack ``t`` that is
maximised.  Pointwise bounds ``U(k) <= s`` on tails in the ``exp`` case
are imposed lazily by cutting planes checked with exact suprema.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .assignment import PrevisionAssignment, SingletonFamily
from .extreal import POS_INF, ExtendedReal
from .gambles import GrowthCombo, RandomVariable, multiply_by_event, restricted_sup, tail_sup
from .lp import LPOutcome, LPProblem, solve

Form = Dict[Optional[str], Fraction]  # variable -> coefficient; None -> constant

MAX_CUT_ROUNDS = 400
MAX_TRUNCATION = 1 << 14


class WitnessTooLarge(RuntimeError):
    """The sure loss is certain but its explicit form exceeds the truncation cap."""


class CuttingPlaneLimit(RuntimeError):
    """Constraint generation did not settle within MAX_CUT_ROUNDS."""


def _add(*parts: Tuple[Fraction, Form]) -> Form:
    out: Form = {}
    for c, form in parts:
        if not c:
            continue
        for k, v in form.items():
            out[k] = out.get(k, Fraction(0)) + c * v
    return {k: v for k, v in out.items() if v}


def _value(form: Form, x: Dict[str, Fraction], with_const: bool = True) -> Fraction:
    total = Fraction(0)
    for k, v in form.items():
        if k is None:
            if with_const:
                total += v
        else:
            total += v * x.get(k, 0)
    return total


@dataclass(frozen=True)
class CaseSpec:
    active: Tuple[int, ...]  # indices (into pairs) of active infinite previsions
    tails: Tuple[str, ...]  # case label per tail


@dataclass
class CaseResult:
    spec: CaseSpec
    outcome: LPOutcome
    problem: LPProblem
    divergent: bool


class ConeProgram:
    def __init__(self, assignment: PrevisionAssignment, target: Optional[RandomVariable] = None):
        self.a = assignment
        sp = self.space = assignment.space
        self.target = sp.zero() if target is None else target
        self.columns: Dict[str, RandomVariable] = {}
        self.finite: List[int] = []
        self.infinite: List[int] = []
        for i, p in enumerate(assignment.pairs):
            if p.is_finite:
                g = multiply_by_event(p.variable - sp.constant(p.prevision.value), p.event)
                self.columns[f"b{i}"] = g
                self.finite.append(i)
            else:
                self.columns[f"a{i}"] = multiply_by_event(p.variable, p.event)
                self.columns[f"k{i}"] = p.event
                self.infinite.append(i)
        self.fam: Dict[int, SingletonFamily] = {
            sp.tail_index(f.tail): f for f in assignment.families
        }
        self.r = 1 - sum(
            (f.mass_from(sp.tails[ti].start_index) for ti, f in self.fam.items()), Fraction(0)
        )
        rvs = list(self.columns.values()) + [self.target]
        self.skip: List[List[int]] = [
            sorted({k for rv in rvs for k, _ in rv.overrides[ti]}) for ti in range(len(sp.tails))
        ]

    # -- forms ------------------------------------------------------------

    def _form(self, fn, names: Sequence[str]) -> Form:
        out: Form = {None: fn(self.target)}
        for n in names:
            out[n] = fn(self.columns[n])
        return {k: v for k, v in out.items() if v}

    def names(self, active: Sequence[int]) -> List[str]:
        out = [f"b{i}" for i in self.finite]
        for i in active:
            out += [f"a{i}", f"k{i}"]
        return out

    def combo_forms(self, ti: int, names) -> Tuple[Form, Form, Form]:
        return (
            self._form(lambda rv: rv.combos[ti].one, names),
            self._form(lambda rv: rv.combos[ti].n, names),
            self._form(lambda rv: rv.combos[ti].exp2, names),
        )

    def point_form(self, ti: int, k: int, names) -> Form:
        return self._form(lambda rv: rv.value_at(ti, k), names)

    def combo_at(self, forms, k: int) -> Form:
        c1, cn, ce = forms
        return _add((Fraction(1), c1), (Fraction(k), cn), (Fraction(2) ** k, ce))

    def first_free(self, ti: int, lo: Optional[int] = None) -> int:
        k = self.space.tails[ti].start_index if lo is None else lo
        skip = self.skip[ti]
        while k in skip:
            k += 1
        return k

    # -- case enumeration ---------------------------------------------------

    def tail_options(self, ti: int, names) -> List[str]:
        c1, cn, ce = self.combo_forms(ti, names)
        has_e = bool(ce)
        has_n = bool(cn)
        if ti in self.fam and self.r > 0:
            opts = ["const"]
            if has_n:
                opts.append("lin")
        else:
            opts = ["flat"]
        if has_e:
            opts.append("exp")
        return opts

    def cases(self, activations: Optional[Sequence[Tuple[int, ...]]] = None) -> Iterator[CaseSpec]:
        if activations is None:
            activations = [
                sub
                for size in range(len(self.infinite) + 1)
                for sub in itertools.combinations(self.infinite, size)
            ]
        for active in activations:
            names = self.names(active)
            options = [self.tail_options(ti, names) for ti in range(len(self.space.tails))]
            for combo in itertools.product(*options):
                yield CaseSpec(tuple(active), tuple(combo))

    def needs_s(self) -> bool:
        return self.r > 0

    def divergent(self, spec: CaseSpec) -> bool:
        for ti, f in self.fam.items():
            if spec.tails[ti] == "exp" and f.exp2_moment(self.space.tails[ti].start_index) is None:
                return True
        return False

    # -- LP construction ----------------------------------------------------

    def phi_form(self, spec: CaseSpec, names) -> Form:
        """``sum_f E_f[U] + r*s`` as a form (caller checks divergence first)."""
        parts: List[Tuple[Fraction, Form]] = []
        for ti, f in self.fam.items():
            start = self.space.tails[ti].start_index
            forms = self.combo_forms(ti, names)
            c1, cn, ce = forms
            parts.append((f.mass_from(start), c1))
            parts.append((f.first_moment(start), cn))
            if spec.tails[ti] == "exp":
                parts.append((f.exp2_moment(start), ce))
            for k in self.skip[ti]:
                pk = f.price(k)
                parts.append((pk, self.point_form(ti, k, names)))
                parts.append((-pk, self.combo_at(forms, k)))
        if self.needs_s():
            parts.append((self.r, {"s": Fraction(1)}))
        return _add(*parts)

    def build(
        self,
        spec: CaseSpec,
        mode: str,
        objective: str,
        cuts: Dict[int, set],
    ) -> LPProblem:
        names = self.names(spec.active)
        p = LPProblem()
        for n in names:
            p.add_variable(n)
        p.add_variable("t", "nonneg")
        p.add({"t": 1}, "<=", 1)
        use_s = self.needs_s()
        if use_s:
            p.add_variable("s")
        if mode == "sup":
            p.add_variable("f")

        def add(form: Form, rel: str, extra: Optional[Form] = None):
            form = _add((Fraction(1), form), (Fraction(1), extra or {}))
            const = form.pop(None, Fraction(0))
            p.add(form, rel, -const)

        minus_s = {"s": Fraction(-1)}
        for i in spec.active:
            sign = self.a.pairs[i].prevision.sign
            add({f"a{i}": Fraction(sign)}, ">=", {"t": Fraction(-1)})
        if use_s:
            for ai in range(len(self.space.atoms)):
                add(self._form(lambda rv: rv.atom_values[ai], names), "<=", minus_s)
            for ti in range(len(self.space.tails)):
                if ti in self.fam:
                    continue
                for k in self.skip[ti]:
                    add(self.point_form(ti, k, names), "<=", minus_s)
        for ti, case in enumerate(spec.tails):
            forms = self.combo_forms(ti, names)
            c1, cn, ce = forms
            fam = ti in self.fam
            if case in ("flat", "const", "lin"):
                add(ce, "=")
            if case == "flat":
                add(cn, "<=")
                if use_s and not fam:
                    add(self.combo_at(forms, self.first_free(ti)), "<=", minus_s)
            elif case == "const":
                add(cn, "=")
                add(c1, "<=", minus_s)
            elif case == "lin":
                add(cn, "<=", {"t": Fraction(1)})
            elif case == "exp":
                add(ce, "<=", {"t": Fraction(1)})
                if use_s and not fam:
                    for k in sorted(cuts.get(ti, ())):
                        add(self.combo_at(forms, k), "<=", minus_s)
        if not self.divergent(spec):
            phi = self.phi_form(spec, names)
            if mode == "loss":
                add(phi, "<=", {None: Fraction(1)})
            else:
                add(phi, "<=", {"f": Fraction(1)})
        p.objective = ("max", {objective: Fraction(1)})
        return p

    # -- cutting planes -----------------------------------------------------

    def _cut_tails(self, spec: CaseSpec) -> List[int]:
        if not self.needs_s():
            return []
        return [ti for ti, c in enumerate(spec.tails) if c == "exp" and ti not in self.fam]

    def violations(self, spec: CaseSpec, x: Dict[str, Fraction], homogeneous: bool) -> Dict[int, int]:
        """Tail index -> state index where ``U(k) <= s`` fails at ``x``."""
        names = self.names(spec.active)
        out = {}
        for ti in self._cut_tails(spec):
            c1, cn, ce = (_value(f, x, not homogeneous) for f in self.combo_forms(ti, names))
            combo = GrowthCombo(c1 - x.get("s", 0), cn, ce)
            start = self.space.tails[ti].start_index
            sup, arg = tail_sup(combo, start, self.skip[ti])
            if sup <= 0:
                continue
            if arg is None:
                # exp2 == 0 and n > 0: first index where the line turns positive
                lo = -combo.one / combo.n
                k = max(start, int(lo // 1) + 1)
                arg = self.first_free(ti, k)
            out[ti] = arg
        return out

    def solve_case(self, spec: CaseSpec, mode: str, objective: str) -> CaseResult:
        cuts: Dict[int, set] = {ti: {self.first_free(ti)} for ti in self._cut_tails(spec)}
        for _ in range(MAX_CUT_ROUNDS):
            p = self.build(spec, mode, objective, cuts)
            out = solve(p)
            if out.status == "infeasible":
                return CaseResult(spec, out, p, self.divergent(spec))
            if out.status == "unbounded":
                new = self.violations(spec, out.ray, homogeneous=True)
            else:
                new = self.violations(spec, out.witness, homogeneous=False)
            if not new:
                return CaseResult(spec, out, p, self.divergent(spec))
            for ti, k in new.items():
                if k in cuts[ti]:
                    raise AssertionError("cutting plane repeated an index")
                cuts[ti].add(k)
        raise CuttingPlaneLimit(f"no convergence after {MAX_CUT_ROUNDS} cuts in case {spec}")

    # -- results --------------------------------------------------------------

    def gamble(self, spec: CaseSpec, x: Dict[str, Fraction]) -> RandomVariable:
        """``U`` at the LP point ``x`` (target included)."""
        from .gambles import linear_combination

        terms = [(Fraction(1), self.target)]
        for n in self.names(spec.active):
            if x.get(n):
                terms.append((x[n], self.columns[n]))
        return linear_combination(terms)

    def strict_sure_loss(self, activations=None) -> Optional[Tuple[CaseSpec, Dict[str, Fraction]]]:
        """First case admitting ``U`` with a sure loss; returns the LP point."""
        for spec in self.cases(activations):
            res = self.solve_case(spec, "loss", "t")
            if res.outcome.optimal and res.outcome.value > 0:
                return spec, res.outcome.witness
        return None

    def sup_offset(self) -> ExtendedReal:
        """``sup {f : U + f is dominated by an acceptable gamble}`` over all cases.

        With target ``-X`` this is the lower end of the coherent interval
        for ``X``.  Returns -inf when no case is feasible.
        """
        best: ExtendedReal = -POS_INF
        for spec in self.cases():
            strict = self.solve_case(spec, "sup", "t")
            if not (strict.outcome.optimal and strict.outcome.value > 0):
                continue
            if strict.divergent:
                return POS_INF
            res = self.solve_case(spec, "sup", "f")
            if res.outcome.status == "unbounded":
                return POS_INF
            if res.outcome.optimal:
                v = ExtendedReal(res.outcome.value)
                if v > best:
                    best = v
        return best


def family_truncation_value(
    program: ConeProgram, U: RandomVariable, depth: int
) -> Tuple[Fraction, Fraction, Fraction, Dict[int, range]]:
    """``(p_K, sum_K p*U, S_off)`` for the first ``depth`` points of every family."""
    sp = program.space
    p_k = Fraction(0)
    s_k = Fraction(0)
    ranges: Dict[int, range] = {}
    tail_from = {}
    for ti, f in program.fam.items():
        start = sp.tails[ti].start_index
        ranges[ti] = range(start, start + depth)
        tail_from[ti] = start + depth
        for k in ranges[ti]:
            pk = f.price(k)
            p_k += pk
            s_k += pk * U.value_at(ti, k)
    s_off, _ = restricted_sup(U, tail_from)
    return p_k, s_k, s_off, ranges


def family_witness(program: ConeProgram, U: RandomVariable):
    """Finite family coefficients turning ``U`` into an explicit sure loss.

    Returns ``(margin, [(tail_index, k, coefficient, price), ...])`` such
    that ``U + sum coefficient*({k} - price)`` has supremum ``-margin``.
    """
    if not program.fam:
        sup, _ = restricted_sup(U)
        if not sup.is_finite or sup.value >= 0:
            raise AssertionError("LP point is not a sure loss")
        return -sup.value, []
    depth = 1
    while depth <= MAX_TRUNCATION:
        p_k, s_k, s_off, ranges = family_truncation_value(program, U, depth)
        if s_off.is_finite:
            s_off = s_off.value
            eps = None
            if p_k < 1:
                val = s_k + (1 - p_k) * s_off
                if val < 0:
                    eps = -val
                    c = (-eps * p_k - s_k) / (1 - p_k)
            elif p_k > 1:
                eps = max(Fraction(1), (p_k - 1) * s_off - s_k)
                c = (eps * p_k + s_k) / (p_k - 1)
            if eps is not None:
                terms = []
                for ti, rng in ranges.items():
                    f = program.fam[ti]
                    for k in rng:
                        d = c - eps - U.value_at(ti, k)
                        if d:
                            terms.append((ti, k, d, f.price(k)))
                return eps, terms
        depth *= 2
    raise WitnessTooLarge(f"an explicit witness needs more than {MAX_TRUNCATION} singletons per family")
