"""Forecasts judged by a proper scoring rule.

A forecaster announces 2 for a quantity that is always 1.  A rival who
announces 7/4 scores strictly better in every state.  The rival is not
guessed: it is built from the sure-loss witness, and the same recipe
works for any incoherent assignment and any piecewise-constant scoring
density.
"""

from fractions import Fraction

from infprev import (
    PrevisionAssignment,
    ScoringMeasure,
    StateSpace,
    TailAtom,
    POS_INF,
    check_coherence1,
    check_coherence3_dominance,
    construct_rival_witness,
    score,
)

space = StateSpace(("w",))
one = space.constant(1)
forecast = PrevisionAssignment(space).with_pair(one, 2)

rw = construct_rival_witness(forecast, check_coherence1(forecast).witness)
q = rw.rivals[0].q
print(f"rival forecast {q}: quadratic loss {score(ScoringMeasure(), 1, q)} vs {score(ScoringMeasure(), 1, 2)}")
print("guaranteed advantage:", check_coherence3_dominance(forecast, rw.rivals), ">=", rw.margin)

# two quantities, each unbounded above, whose sum is 0 cannot both be +inf
space = StateSpace((), (TailAtom("s", 1, 1), TailAtom("t", 1, 1)))
up = space.variable(tails={"s": (0, 1, 0), "t": (0, -1, 0)})
down = -up
greedy = PrevisionAssignment(space).with_pair(up, POS_INF).with_pair(down, POS_INF)

skewed = ScoringMeasure((Fraction(0),), (Fraction(3), Fraction(1, 2)))
rw = construct_rival_witness(greedy, check_coherence1(greedy).witness, skewed)
print("\nagainst two +inf forecasts, with an asymmetric scoring density:")
for r in rw.rivals:
    print(f"  pair {r.target}: reference {r.c}, rival {r.q}")
print("guaranteed advantage:", check_coherence3_dominance(greedy, rw.rivals), ">=", rw.margin)
