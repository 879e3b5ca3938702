"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <n> ... PASS/FAIL`` line (also
repeated in the terminal summary) and then asserts.
"""

import random
import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES, Ex31
from infprev import (
    NEG_INF,
    POS_INF,
    ExtendedReal,
    NotInSpan,
    PrevisionAssignment,
    Rival,
    ScoringMeasure,
    SingletonFamily,
    StateSpace,
    TailAtom,
    check_coherence1,
    check_coherence3_dominance,
    check_extended_coherence,
    coherent_interval,
    conditional_from_marginals,
    construct_rival_witness,
    evaluate,
    exact_inf,
    exact_sup,
    extend_linear_span,
    linear_combination,
    mean_value_r,
    multiply_by_event,
    score,
)
from oracles import finite_coherent

SEED = 20261015


def record(n, title, ok, detail=""):
    line = f"ACCEPTANCE {n} {title}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_1_example_reproduction():
    t0 = time.perf_counter()
    ex = Ex31()
    coherent = all(
        check_coherence1(ex.full(pv=pv)).coherent
        for pv in (Fraction(5), POS_INF, NEG_INF, Fraction(0), Fraction(-7, 3))
    )
    lows = [Fraction(3, 2), Fraction(1999, 1000), 2 - Fraction(1, 10**6), Fraction(0), Fraction(-3), Fraction(1, 3)]
    rejected = 0
    for px in lows:
        a = ex.full(px=px)
        v = check_coherence1(a)
        if not v.coherent and v.witness is not None and v.witness.verify(a):
            rejected += 1
    elapsed = time.perf_counter() - t0
    ok = coherent and rejected == len(lows) and elapsed < 5
    record(1, "example reproduction", ok, f"{rejected}/{len(lows)} lower values rejected, {elapsed:.2f}s")


def test_2_interval_two_to_infinity():
    t0 = time.perf_counter()
    ex = Ex31()
    iv = coherent_interval(ex.base, ex.X)
    both = check_coherence1(ex.base.with_pair(ex.X, 2)).coherent and check_coherence1(
        ex.base.with_pair(ex.X, POS_INF)
    ).coherent
    elapsed = time.perf_counter() - t0
    ok = iv.lower == 2 and iv.upper == POS_INF and iv.lower_attained and iv.upper_attained and both and elapsed < 5
    record(2, "coherent interval [2, +inf]", ok, f"got {iv}, {elapsed:.2f}s")


def test_3_y_forced_infinite():
    t0 = time.perf_counter()
    ex = Ex31()
    iv = coherent_interval(ex.base, ex.Y)
    probes = [Fraction(-5), Fraction(0), Fraction(2), Fraction(17, 3), Fraction(100), Fraction(1000)]
    rejected = sum(not check_coherence1(ex.base.with_pair(ex.Y, p)).coherent for p in probes)
    inf_ok = check_coherence1(ex.base.with_pair(ex.Y, POS_INF)).coherent
    elapsed = time.perf_counter() - t0
    ok = iv.lower == iv.upper == POS_INF and rejected == len(probes) and inf_ok and elapsed < 10
    record(3, "only +inf for Y", ok, f"got {iv}, {rejected}/{len(probes)} finite probes rejected, {elapsed:.2f}s")


def _random_marginal(rng):
    na = rng.randint(0, 4)
    nt = rng.randint(0 if na else 1, 1)
    sp = StateSpace(tuple(f"a{i}" for i in range(na)), tuple(TailAtom("t", rng.randint(0, 2), 1) for _ in range(nt)))
    states = list(sp.atoms) + ([("t", sp.tails[0].start_index + j) for j in range(3)] if nt else [])
    w = [rng.randint(0, 3) for _ in states]
    if not any(w):
        w[0] = 1
    a = PrevisionAssignment(sp)
    for _ in range(rng.randint(1, 3)):
        x = sp.variable(
            atoms={n: rng.randint(-3, 3) for n in sp.atoms},
            tails={"t": (rng.randint(-2, 2), rng.choice([-1, 0, 0, 1]), rng.choice([-1, 0, 0, 0, 1]))} if nt else {},
        )
        u = rng.random()
        if u < 0.5:
            p = ExtendedReal(sum(Fraction(wi, sum(w)) * evaluate(x, s) for wi, s in zip(w, states)))
            if rng.random() < 0.3:
                p = p + Fraction(rng.choice([-1, 1]), rng.randint(1, 4))
        elif u < 0.8:
            sides = [POS_INF] if not exact_sup(x).is_finite else []
            sides += [NEG_INF] if not exact_inf(x).is_finite else []
            p = rng.choice(sides or [POS_INF, NEG_INF])
        else:
            p = rng.choice([ExtendedReal(Fraction(rng.randint(-6, 6), rng.randint(1, 3))), POS_INF, NEG_INF])
        a = a.with_pair(x, p)
    return a


def test_4_extended_coherence_equivalence():
    rng = random.Random(SEED)
    n = 500
    agree = coherent = 0
    for _ in range(n):
        a = _random_marginal(rng)
        c1 = check_coherence1(a).coherent
        agree += c1 == check_extended_coherence(a).coherent
        coherent += c1
    record(4, "two coherence tests agree", agree == n, f"{agree}/{n} agree, {coherent} coherent")


def test_5_brute_force_oracle():
    rng = random.Random(SEED + 5)
    grid = [Fraction(k, d) for d in (1, 2, 4, 8) for k in range(-8, 9)]
    n = 400
    agree = coherent = 0
    for _ in range(n):
        ns = rng.randint(1, 5)
        m = rng.randint(1, 4)
        values = [[rng.choice(grid) for _ in range(ns)] for _ in range(m)]
        if rng.random() < 0.5:
            w = [rng.randint(0, 4) for _ in range(ns)]
            w[rng.randrange(ns)] += 1
            prices = [sum(Fraction(wi, sum(w)) * v for wi, v in zip(w, row)) for row in values]
            prices = [p if rng.random() < 0.7 else p + Fraction(rng.randint(-2, 2), 8) for p in prices]
        else:
            prices = [rng.choice(grid) for _ in range(m)]
        sp = StateSpace(tuple(f"s{i}" for i in range(ns)))
        a = PrevisionAssignment(sp)
        for row, p in zip(values, prices):
            a = a.with_pair(sp.variable(atoms=dict(zip(sp.atoms, row))), p)
        verdict = check_coherence1(a).coherent
        agree += verdict == finite_coherent(values, prices)
        coherent += verdict
    record(5, "vertex-enumeration oracle", agree == n, f"{agree}/{n} agree, {coherent} coherent")


def _example_zero_block():
    sp = StateSpace((), (TailAtom("w", 1, 1),))
    a = PrevisionAssignment(sp, families=(SingletonFamily("w", 0, Fraction(1, 2)),))
    x = sp.variable(points={("w", k): k for k in range(1, 5)})
    b = sp.indicator([("w", k) for k in range(1, 5)])
    return a.with_pair(b, 0).with_pair(x, 0), x, b


def test_6_conditional_calculus():
    rng = random.Random(SEED + 6)
    n = 200
    good = 0
    for _ in range(n):
        ns = rng.randint(2, 4)
        sp = StateSpace(tuple(f"s{i}" for i in range(ns)))
        w = [rng.randint(0, 4) for _ in range(ns)]
        inside = rng.sample(range(ns), rng.randint(1, ns))
        w[inside[0]] += 1
        tot = sum(w)
        x = sp.variable(atoms={s: Fraction(rng.randint(-8, 8), rng.randint(1, 3)) for s in sp.atoms})
        b = sp.indicator([sp.atoms[i] for i in inside])
        xb = multiply_by_event(x, b)

        def exp(v):
            return sum(Fraction(wi, tot) * evaluate(v, s) for wi, s in zip(w, sp.atoms))

        a = PrevisionAssignment(sp).with_pair(b, exp(b)).with_pair(xb, exp(xb))
        if rng.random() < 0.5:
            a = a.with_pair(x, exp(x))
        iv = conditional_from_marginals(a, x, b)
        want = exp(xb) / exp(b)
        ok = iv.lower == iv.upper == want and check_coherence1(a.with_pair(x, want, event=b)).coherent
        for delta in (Fraction(1, 7), Fraction(-1, 3), Fraction(rng.randint(1, 9), rng.randint(1, 9))):
            ok = ok and not check_coherence1(a.with_pair(x, want + delta, event=b)).coherent
        good += ok
    a0, x0, b0 = _example_zero_block()
    free = conditional_from_marginals(a0, x0, b0)
    probes = [-10, 0, 1, 4, 10]
    accepted = sum(check_coherence1(a0.with_pair(x0, p, event=b0)).coherent for p in probes)
    ok = good == n and (free.lower, free.upper) == (NEG_INF, POS_INF) and accepted == len(probes)
    record(6, "conditional calculus", ok, f"{good}/{n} forced ratios unique, {accepted}/{len(probes)} free probes accepted")


def _random_measure(rng):
    cuts = sorted({Fraction(rng.randint(-20, 20), rng.choice([1, 2, 3, 4])) for _ in range(rng.randint(0, 4))})
    return ScoringMeasure(tuple(cuts), tuple(Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(len(cuts) + 1)))


def test_7_scoring_identities():
    rng = random.Random(SEED + 7)

    def q():
        return Fraction(rng.randint(-40, 40), rng.randint(1, 6))

    n = 1000
    diff_ok = nonneg_ok = 0
    for _ in range(n):
        m = _random_measure(rng)
        x, a, b = q(), q(), q()
        while b == a:
            b = q()
        diff_ok += score(m, x, a) - score(m, x, b) == m.mass(a, b) * (x - mean_value_r(m, a, b))
        s1, s2 = score(m, x, a), score(m, x, x)
        nonneg_ok += s1 >= 0 and (s1 == 0) == (x == a) and s2 == 0
    prop_ok = 0
    trials = 100
    for _ in range(trials):
        m = _random_measure(rng)
        x1, x2 = q(), q()
        p = Fraction(rng.randint(1, 9), 10)
        mean = p * x1 + (1 - p) * x2

        def expected(f):
            return p * score(m, x1, f) + (1 - p) * score(m, x2, f)

        best = expected(mean)
        grid = [mean + Fraction(j, 12) for j in range(-36, 37) if j]
        tiny = Fraction(1, 10**6)
        prop_ok += all(expected(g) > best for g in grid) and expected(mean - tiny) > best < expected(mean + tiny)
    ok = diff_ok == n and nonneg_ok == n and prop_ok == trials
    record(7, "scoring identities", ok, f"difference {diff_ok}/{n}, sign {nonneg_ok}/{n}, propriety {prop_ok}/{trials}")


def _rival_case(rng):
    """Random assignment mixing atoms, a tail and (sometimes) a singleton family."""
    na = rng.randint(1, 3)
    sp = StateSpace(tuple(f"a{i}" for i in range(na)), (TailAtom("t", 1, 1),))
    fams = ()
    if rng.random() < 0.3:
        fams = (SingletonFamily("t", Fraction(rng.randint(0, 2), 4), Fraction(1, 2)),)
    a = PrevisionAssignment(sp, families=fams)
    for _ in range(rng.randint(1, 3)):
        x = sp.variable(
            atoms={s: rng.randint(-3, 3) for s in sp.atoms},
            tails={"t": (rng.randint(-2, 2), rng.choice([-1, 0, 1]), 0)},
        )
        p = rng.choice(
            [ExtendedReal(Fraction(rng.randint(-6, 6), rng.randint(1, 2)))] * 4
            + [POS_INF if not exact_sup(x).is_finite else NEG_INF if not exact_inf(x).is_finite else POS_INF]
        )
        a = a.with_pair(x, p)
    return a


def test_8_scoring_round_trip():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 8)
    incoherent, coherent = [], []
    while len(incoherent) < 100 or len(coherent) < 100:
        a = _rival_case(rng)
        v = check_coherence1(a)
        if v.coherent and len(coherent) < 100:
            coherent.append(a)
        elif not v.coherent and v.witness is not None and len(incoherent) < 100:
            incoherent.append((a, v.witness))
    dominated = 0
    for a, w in incoherent:
        m = _random_measure(rng) if rng.random() < 0.5 else ScoringMeasure()
        rw = construct_rival_witness(a, w, m)
        dominated += check_coherence3_dominance(a, rw.rivals) >= rw.margin > 0
    undominated = 0
    for a in coherent:
        fine = True
        for _ in range(50):
            m = _random_measure(rng)
            rivals = []
            for i, p in enumerate(a.pairs):
                q = Fraction(rng.randint(-30, 30), rng.randint(1, 4))
                c = None if p.prevision.is_finite else q + p.prevision.sign * Fraction(rng.randint(0, 8), 2)
                rivals.append(Rival(i, q, m, c))
            for f in a.families:
                k = rng.randint(1, 6)
                rivals.append(Rival((f.tail, k), Fraction(rng.randint(-4, 4), 8), m))
            if check_coherence3_dominance(a, rivals) > 0:
                fine = False
        undominated += fine
    elapsed = time.perf_counter() - t0
    ok = dominated == 100 and undominated == 100 and elapsed < 600
    record(8, "rival forecasts round trip", ok, f"{dominated}/100 dominated, {undominated}/100 never dominated, {elapsed:.1f}s")


class _Span:
    """Coherent base with atoms, a summable family and two infinite previsions."""

    def __init__(self):
        sp = StateSpace(("a", "b", "c"), (TailAtom("pos", 1, 1), TailAtom("neg", 1, -1)))
        self.space = sp
        a = PrevisionAssignment(sp, families=(SingletonFamily("pos", Fraction(1, 2), Fraction(1, 2)),))
        for s, p in (("a", Fraction(1, 4)), ("b", Fraction(1, 4)), ("c", Fraction(0))):
            a = a.with_pair(sp.indicator([s]), p)
        self.X = sp.variable(tails={"pos": (0, 1, 0)})
        self.Y = sp.variable(tails={"pos": (0, 0, 1)})
        self.Z = sp.variable(tails={"neg": (0, -1, 0)})
        a = a.with_pair(self.X, Fraction(1)).with_pair(self.Y, POS_INF).with_pair(self.Z, NEG_INF)
        self.a = a

    def simple(self, rng):
        sp = self.space
        return sp.variable(
            atoms={s: Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for s in sp.atoms},
            tails={t.name: (Fraction(rng.randint(-3, 3), 2), 0, 0) for t in sp.tails},
            points={("pos", k): rng.randint(-4, 4) for k in rng.sample(range(1, 6), rng.randint(0, 2))},
        )

    def value(self, v):
        iv = coherent_interval(self.a, v, check_input=False, check_endpoints=False)
        return iv.lower if iv.is_point else None


def test_9_expectation_laws():
    rng = random.Random(SEED + 9)
    S = _Span()
    a, sp = S.a, S.space
    checks = {"normalised": 0, "monotone": 0, "linear": 0, "additive": 0, "simple": 0, "continuous": 0}
    totals = dict.fromkeys(checks, 0)

    def tally(key, ok):
        totals[key] += 1
        checks[key] += bool(ok)

    assert check_coherence1(a).coherent
    tally("normalised", S.value(sp.constant(1)) == 1)
    basis = [S.X, S.Y, S.Z]
    for _ in range(25):
        # extended linearity: representation value equals the unique coherent value
        coefs = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in basis]
        s = S.simple(rng)
        terms = list(zip(coefs, basis))
        try:
            rep = extend_linear_span(a, terms) + S.value(s)
        except NotInSpan:
            rep = None
        if rep is not None:
            tally("linear", S.value(linear_combination(terms + [(1, s)])) == rep)
        # monotonicity: adding a nonnegative simple function never lowers the value
        v = linear_combination(terms + [(1, s)])
        bump = sp.variable(atoms={q: rng.randint(0, 3) for q in sp.atoms}, tails={"pos": (rng.randint(0, 2), 0, 0)})
        lo, hi = S.value(v), S.value(v + bump)
        if lo is not None and hi is not None:
            tally("monotone", lo <= hi)
        # uniform continuity: a sup-norm-eps perturbation moves the value by at most eps
        eps = Fraction(rng.randint(1, 8), 8)
        noise = sp.variable(
            atoms={q: Fraction(rng.randint(-8, 8), 8) * eps for q in sp.atoms},
            tails={t.name: (Fraction(rng.randint(-8, 8), 8) * eps, 0, 0) for t in sp.tails},
        )
        assert exact_sup(noise) <= eps and exact_inf(noise) >= -eps
        v1, v2 = S.value(v), S.value(v + noise)
        if v1 is not None:
            if v1.is_finite:
                tally("continuous", v2.is_finite and abs(v1.value - v2.value) <= eps)
            else:
                tally("continuous", v2 == v1)
    states = list(sp.atoms) + [("pos", k) for k in range(1, 6)]
    for _ in range(25):
        # event additivity on disjoint finite events
        pick = rng.sample(states, rng.randint(2, len(states)))
        cut = rng.randint(1, len(pick) - 1)
        e1, e2 = sp.indicator(pick[:cut]), sp.indicator(pick[cut:])
        tally("additive", S.value(e1 + e2) == S.value(e1) + S.value(e2))
        # simple-function integral: sum of value times probability over a partition
        tails = [sp.tail_indicator("neg"), sp.tail_indicator("pos") - sp.indicator([("pos", k) for k in range(1, 6)])]
        blocks = [sp.indicator([s]) for s in states] + tails
        vals = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in blocks]
        f = linear_combination(list(zip(vals, blocks)))
        want = sum((c * S.value(blk).value for c, blk in zip(vals, blocks)), Fraction(0))
        tally("simple", S.value(f) == want)
    ok = all(checks[k] == totals[k] and totals[k] > 0 for k in checks)
    detail = ", ".join(f"{k} {checks[k]}/{totals[k]}" for k in checks)
    record(9, "expectation laws", ok, detail)
