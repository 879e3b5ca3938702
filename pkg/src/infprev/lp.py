"""Exact rational linear programming.

Dense two-phase tableau simplex over :class:`fractions.Fraction` with
Bland's rule.  Every outcome carries something checkable: a primal
witness, a Farkas certificate, or an improving ray.

Certificates refer to the constraints rewritten in ``<=`` form (a ``>=``
row ``a.x >= b`` becomes ``-a.x <= -b``); weights on inequality rows are
nonnegative, weights on equality rows are free, and the weighted sum is a
row ``c.x <= d`` with ``d < 0`` whose left side cannot be negative under
the variable sign bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .extreal import _as_fraction

__all__ = [
    "LinearConstraint",
    "LPProblem",
    "LPOutcome",
    "solve",
    "add_constraint_and_resolve",
    "check_witness",
    "check_certificate",
    "check_ray",
]

_RELATIONS = ("<=", "=", ">=")
_BOUNDS = ("free", "nonneg", "nonpos")


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: Mapping[str, Fraction]
    relation: str
    rhs: Fraction = Fraction(0)

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"relation must be one of {_RELATIONS}")
        object.__setattr__(
            self,
            "coeffs",
            {k: _as_fraction(v) for k, v in self.coeffs.items() if _as_fraction(v) != 0},
        )
        object.__setattr__(self, "rhs", _as_fraction(self.rhs))

    def lhs(self, x: Mapping[str, Fraction]) -> Fraction:
        return sum((c * x.get(k, 0) for k, c in self.coeffs.items()), Fraction(0))

    def holds(self, x: Mapping[str, Fraction]) -> bool:
        v = self.lhs(x)
        if self.relation == "<=":
            return v <= self.rhs
        if self.relation == ">=":
            return v >= self.rhs
        return v == self.rhs


@dataclass
class LPProblem:
    """Variables with sign bounds, constraints and an optional objective.

    ``objective`` is ``("max" | "min", {var: coeff})``; without one the
    problem is a pure feasibility question.
    """

    variables: Dict[str, str] = field(default_factory=dict)
    constraints: List[LinearConstraint] = field(default_factory=list)
    objective: Optional[Tuple[str, Mapping[str, Fraction]]] = None

    def add_variable(self, name: str, bound: str = "free") -> str:
        if bound not in _BOUNDS:
            raise ValueError(f"bound must be one of {_BOUNDS}")
        if name in self.variables:
            raise ValueError(f"duplicate variable {name!r}")
        self.variables[name] = bound
        return name

    def add(self, coeffs: Mapping[str, object], relation: str, rhs=0) -> LinearConstraint:
        c = LinearConstraint(dict(coeffs), relation, rhs)
        self._check_refs(c)
        self.constraints.append(c)
        return c

    def _check_refs(self, c: LinearConstraint) -> None:
        for k in c.coeffs:
            if k not in self.variables:
                raise KeyError(f"unknown variable {k!r}")

    def copy(self) -> LPProblem:
        return LPProblem(dict(self.variables), list(self.constraints), self.objective)


@dataclass(frozen=True)
class LPOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    witness: Optional[Dict[str, Fraction]] = None
    certificate: Optional[Tuple[Fraction, ...]] = None
    ray: Optional[Dict[str, Fraction]] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


# -- tableau machinery ----------------------------------------------------


def _pivot(T: List[List[Fraction]], obj: List[Fraction], r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p != 1:
        inv = 1 / p
        row[:] = [v * inv for v in row]
    nz = [j for j, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
    f = obj[c]
    if f:
        for j in nz:
            obj[j] -= f * row[j]


def _run(T, obj, basis, allowed) -> Optional[int]:
    """Minimise with Bland's rule; returns an unbounded entering column or None.

    ``obj`` holds reduced costs with the negated objective value in the
    last slot.
    """
    while True:
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            return None
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return enter
        r = best[1]
        _pivot(T, obj, r, enter)
        basis[r] = enter


def _reduced(cost: List[Fraction], T, basis, ncols: int) -> List[Fraction]:
    obj = list(cost) + [Fraction(0)]
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb:
            row = T[i]
            for j in range(ncols + 1):
                if row[j]:
                    obj[j] -= cb * row[j]
    return obj


def solve(p: LPProblem) -> LPOutcome:
    """Solve ``p`` exactly.  Feasibility problems report value 0 when feasible."""
    names = list(p.variables)
    # structural columns: (variable, sign) pairs
    cols: List[Tuple[str, int]] = []
    for v in names:
        b = p.variables[v]
        if b in ("free", "nonneg"):
            cols.append((v, 1))
        if b in ("free", "nonpos"):
            cols.append((v, -1))
    colpos: Dict[str, List[Tuple[int, int]]] = {v: [] for v in names}
    for j, (v, s) in enumerate(cols):
        colpos[v].append((j, s))
    m = len(p.constraints)
    nstruct = len(cols)
    # slack columns for inequality rows
    slack_of: Dict[int, int] = {}
    slack_sign: Dict[int, int] = {}
    ncols = nstruct
    for i, c in enumerate(p.constraints):
        if c.relation != "=":
            slack_of[i] = ncols
            slack_sign[i] = 1 if c.relation == "<=" else -1
            ncols += 1
    rows: List[List[Fraction]] = []
    flips: List[int] = []
    for i, c in enumerate(p.constraints):
        row = [Fraction(0)] * ncols
        for v, a in c.coeffs.items():
            for j, s in colpos[v]:
                row[j] += a * s
        if i in slack_of:
            row[slack_of[i]] = Fraction(slack_sign[i])
        rhs = c.rhs
        flip = -1 if rhs < 0 else 1
        if flip < 0:
            row = [-v for v in row]
            rhs = -rhs
        flips.append(flip)
        rows.append(row + [rhs])
    # initial basis: slack where it already forms a unit column, else artificial
    basis: List[int] = []
    init_col: List[int] = []
    art_cols: List[int] = []
    for i in range(m):
        if i in slack_of and rows[i][slack_of[i]] == 1:
            basis.append(slack_of[i])
            init_col.append(slack_of[i])
        else:
            basis.append(-1)
            init_col.append(-1)
    total = ncols
    for i in range(m):
        if basis[i] == -1:
            basis[i] = total
            init_col[i] = total
            art_cols.append(total)
            total += 1
    T: List[List[Fraction]] = []
    for i, row in enumerate(rows):
        full = row[:-1] + [Fraction(0)] * (total - ncols) + [row[-1]]
        if init_col[i] >= ncols:
            full[init_col[i]] = Fraction(1)
        T.append(full)
    art_set = set(art_cols)

    if art_cols:
        cost1 = [Fraction(1) if j in art_set else Fraction(0) for j in range(total)]
        obj1 = _reduced(cost1, T, basis, total)
        _run(T, obj1, basis, range(total))
        phase1 = -obj1[-1]
        if phase1 > 0:
            return LPOutcome("infeasible", certificate=_certificate(p, obj1, init_col, cost1, flips))
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] in art_set:
                j = next((j for j in range(ncols) if T[i][j] != 0), None)
                if j is not None:
                    _pivot(T, obj1, i, j)
                    basis[i] = j

    cost2 = [Fraction(0)] * total
    sense = None
    if p.objective is not None:
        sense, coeffs = p.objective
        if sense not in ("max", "min"):
            raise ValueError("objective sense must be 'max' or 'min'")
        sgn = -1 if sense == "max" else 1
        for v, a in coeffs.items():
            if v not in colpos:
                raise KeyError(f"unknown variable {v!r}")
            for j, s in colpos[v]:
                cost2[j] += sgn * _as_fraction(a) * s
    obj2 = _reduced(cost2, T, basis, total)
    enter = _run(T, obj2, basis, range(ncols))

    def to_vars(std: Dict[int, Fraction]) -> Dict[str, Fraction]:
        x = {v: Fraction(0) for v in names}
        for j, val in std.items():
            if j < nstruct:
                v, s = cols[j]
                x[v] += s * val
        return x

    if enter is not None:
        d = {enter: Fraction(1)}
        for i, b in enumerate(basis):
            if T[i][enter]:
                d[b] = d.get(b, Fraction(0)) - T[i][enter]
        return LPOutcome("unbounded", ray=to_vars(d))
    x = to_vars({b: T[i][-1] for i, b in enumerate(basis)})
    value = Fraction(0)
    if p.objective is not None:
        value = sum((_as_fraction(a) * x[v] for v, a in p.objective[1].items()), Fraction(0))
    return LPOutcome("optimal", value=value, witness=x)


def _certificate(p: LPProblem, obj1, init_col, cost1, flips) -> Tuple[Fraction, ...]:
    # phase-one duals: y_i = cost(initial column) - reduced cost(initial column)
    y = [cost1[c] - obj1[c] for c in init_col]
    weights = []
    for i, c in enumerate(p.constraints):
        u = -y[i] * flips[i]
        weights.append(-u if c.relation == ">=" else u)
    # scale so the combined right-hand side is -1
    rhs = sum(
        (w * (-c.rhs if c.relation == ">=" else c.rhs) for w, c in zip(weights, p.constraints)),
        Fraction(0),
    )
    scale = -1 / rhs
    return tuple(w * scale for w in weights)


# -- checking -------------------------------------------------------------


def check_witness(p: LPProblem, x: Mapping[str, Fraction]) -> bool:
    for v, b in p.variables.items():
        val = x.get(v, Fraction(0))
        if (b == "nonneg" and val < 0) or (b == "nonpos" and val > 0):
            return False
    return all(c.holds(x) for c in p.constraints)


def check_certificate(p: LPProblem, weights) -> bool:
    """True iff ``weights`` combine the constraints into ``0 <= negative``."""
    if len(weights) != len(p.constraints):
        return False
    combo: Dict[str, Fraction] = {v: Fraction(0) for v in p.variables}
    rhs = Fraction(0)
    for w, c in zip(weights, p.constraints):
        w = _as_fraction(w)
        if c.relation != "=" and w < 0:
            return False
        s = -1 if c.relation == ">=" else 1
        for v, a in c.coeffs.items():
            combo[v] += w * s * a
        rhs += w * s * c.rhs
    if rhs >= 0:
        return False
    for v, b in p.variables.items():
        a = combo[v]
        if (b == "free" and a != 0) or (b == "nonneg" and a < 0) or (b == "nonpos" and a > 0):
            return False
    return True


def check_ray(p: LPProblem, d: Mapping[str, Fraction]) -> bool:
    """True iff ``d`` is a recession direction improving the objective."""
    if p.objective is None:
        return False
    for v, b in p.variables.items():
        val = d.get(v, Fraction(0))
        if (b == "nonneg" and val < 0) or (b == "nonpos" and val > 0):
            return False
    for c in p.constraints:
        v = c.lhs(d)
        if (c.relation == "<=" and v > 0) or (c.relation == ">=" and v < 0) or (
            c.relation == "=" and v != 0
        ):
            return False
    sense, coeffs = p.objective
    gain = sum((_as_fraction(a) * d.get(v, 0) for v, a in coeffs.items()), Fraction(0))
    return gain > 0 if sense == "max" else gain < 0


def add_constraint_and_resolve(
    p: LPProblem, c: LinearConstraint, previous: Optional[LPOutcome] = None
) -> Tuple[LPProblem, LPOutcome]:
    """Return the augmented problem and its outcome.

    If ``previous`` was optimal for ``p`` and its witness already satisfies
    ``c``, it is still optimal for the augmented problem and is reused.
    """
    q = p.copy()
    q._check_refs(c)
    q.constraints.append(c)
    if previous is not None and previous.optimal and c.holds(previous.witness):
        return q, replace(previous)
    return q, solve(q)
