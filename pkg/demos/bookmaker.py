"""A bookmaker quotes prices on a three-horse race.

Win tickets on A, B and C sell at 1/2, 1/3 and 1/4.  They add up to more
than 1, so a bettor who sells all three tickets wins 1/12 whatever
happens.  After the quotes are repaired, the range of fair prices for an
exotic ticket follows from the LP.
"""

from fractions import Fraction

from infprev import PrevisionAssignment, StateSpace, check_coherence1, coherent_interval

race = StateSpace(("A", "B", "C"))
quotes = {"A": Fraction(1, 2), "B": Fraction(1, 3), "C": Fraction(1, 4)}

book = PrevisionAssignment(race)
for horse, price in quotes.items():
    book = book.with_pair(race.indicator([horse]), price, name=horse)

verdict = check_coherence1(book)
print("quoted book:", verdict.tag)
for t in verdict.witness.terms:
    side = "buy" if t.alpha > 0 else "sell"
    print(f"  bookmaker is forced to {side} {abs(t.alpha)} ticket(s) on {book.pairs[t.pair].name} at {t.price}")
print("  bookmaker loses at least", verdict.witness.margin)

fixed = PrevisionAssignment(race).with_pair(race.indicator(["A"]), Fraction(1, 2))
fixed = fixed.with_pair(race.indicator(["B"]), Fraction(1, 3))
print("\nrepaired book (C left open):", check_coherence1(fixed).tag)
print("C must be priced in", coherent_interval(fixed, race.indicator(["C"])))

# a ticket paying 6 on A, 0 on B and -3 on C
exotic = race.variable(atoms={"A": 6, "C": -3})
print("exotic ticket must be priced in", coherent_interval(fixed, exotic))
