from fractions import Fraction

import pytest

from infprev import PrevisionAssignment, SingletonFamily, StateSpace, TailAtom


class Ex31:
    """Atom 0 plus positive and negative integer tails; P({k}) = 2^-k on k >= 1."""

    def __init__(self):
        sp = StateSpace(("zero",), (TailAtom("pos", 1, 1), TailAtom("neg", 1, -1)))
        self.space = sp
        self.X = sp.variable(tails={"pos": (0, 1, 0)})
        self.Y = sp.variable(tails={"pos": (0, 0, 1)})
        self.Z = sp.variable(tails={"neg": (0, -1, 0)})
        self.V = self.Y + self.Z
        self.base = PrevisionAssignment(sp, families=(SingletonFamily("pos", 1, Fraction(1, 2)),))

    def full(self, px=2, pv=5):
        from infprev import NEG_INF, POS_INF

        a = self.base.with_pair(self.X, px).with_pair(self.Y, POS_INF).with_pair(self.Z, NEG_INF)
        return a.with_pair(self.V, pv)


@pytest.fixture
def ex31():
    return Ex31()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
