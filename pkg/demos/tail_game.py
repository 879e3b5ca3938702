"""A coin is tossed until it lands heads; omega = k means k tosses.

P({k}) = 2^-k on the positive integers.  A ticket paying k has every
price from 2 upward available, including +inf.  A ticket paying 2^k can
only be priced at +inf.  The negative integers carry probability zero,
so a ticket paying -k there can be priced at -inf, and the sum of the
two unbounded tickets may then get any price at all.
"""

from fractions import Fraction

from infprev import (
    NEG_INF,
    POS_INF,
    PrevisionAssignment,
    SingletonFamily,
    StateSpace,
    TailAtom,
    check_coherence1,
    coherent_interval,
    exact_sup,
)

space = StateSpace(("zero",), (TailAtom("pos", 1, 1), TailAtom("neg", 1, -1)))
tosses = space.variable(tails={"pos": (0, 1, 0)})
doubling = space.variable(tails={"pos": (0, 0, 1)})
debt = space.variable(tails={"neg": (0, -1, 0)})

coin = PrevisionAssignment(space, families=(SingletonFamily("pos", 1, Fraction(1, 2)),))

print("price range for the toss count:  ", coherent_interval(coin, tosses))
print("price range for the doubling bet:", coherent_interval(coin, doubling))

book = coin.with_pair(tosses, 2).with_pair(doubling, POS_INF).with_pair(debt, NEG_INF)
for v in (Fraction(5), POS_INF, NEG_INF):
    verdict = check_coherence1(book.with_pair(doubling + debt, v))
    print(f"sum of the unbounded bets priced at {v}: {verdict.tag}")

# a toss-count price below 2 is exploitable; the witness lists the bets
cheap = coin.with_pair(tosses, Fraction(3, 2))
w = check_coherence1(cheap).witness
print("\nselling the toss-count ticket at 3/2 loses surely:")
for t in w.terms:
    what = f"{{k={t.state[1]}}}" if t.pair < 0 else "toss count"
    print(f"  {str(t.alpha):>4} x ({what} - {t.price})")
print("  worst-case payoff of the combination:", exact_sup(w.gamble(cheap)))
