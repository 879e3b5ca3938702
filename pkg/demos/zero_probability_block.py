"""Conditioning on a block of states that all have probability zero.

Every positive integer has probability zero.  X equals omega on
B = {1, 2, 3, 4} and 0 elsewhere, so P(B) = P(X) = 0.  Nothing forces a
value for P(X|B): any real number, not only those in [1, 4], can be
added without a sure loss.  The default construction still picks a value
inside [1, 4].
"""

from fractions import Fraction

from infprev import (
    PrevisionAssignment,
    SingletonFamily,
    StateSpace,
    TailAtom,
    build_conditional_expectation,
    check_coherence1,
    conditional_from_marginals,
)

space = StateSpace((), (TailAtom("n", 1, 1),))
block = space.indicator([("n", k) for k in range(1, 5)])
x = space.variable(points={("n", k): k for k in range(1, 5)})

base = PrevisionAssignment(space, families=(SingletonFamily("n", 0, Fraction(1, 2)),))
base = base.with_pair(block, 0).with_pair(x, 0)

print("allowed range for P(X|B):", conditional_from_marginals(base, x, block))
for p in (-10, 0, 1, 4, 10):
    print(f"  P(X|B) = {p:>3}: {check_coherence1(base.with_pair(x, p, event=block)).tag}")

filled = build_conditional_expectation(base, [x], [block])
print("default choice:", filled.lookup(x, block))
