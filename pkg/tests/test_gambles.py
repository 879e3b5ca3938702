from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infprev.extreal import NEG_INF, POS_INF
from infprev.gambles import (
    GrowthCombo,
    StateSpace,
    TailAtom,
    evaluate,
    exact_inf,
    exact_sup,
    linear_combination,
    multiply_by_event,
    tail_sup,
    turning_index,
)
from oracles import brute_inf, brute_sup
from strategies import spaces, variables


@pytest.fixture
def space31():
    return StateSpace(("zero",), (TailAtom("pos", 1, 1), TailAtom("neg", 1, -1)))


class TestStateSpace:
    def test_needs_states(self):
        with pytest.raises(ValueError):
            StateSpace((), ())

    def test_unique_names(self):
        with pytest.raises(ValueError):
            StateSpace(("a",), (TailAtom("a"),))

    def test_orientation_labels(self):
        assert TailAtom("neg", 1, -1).label(3) == -3

    def test_index_below_start_rejected(self, space31):
        with pytest.raises(ValueError):
            space31.variable(points={("pos", 0): 1})
        with pytest.raises(ValueError):
            evaluate(space31.constant(1), ("pos", 0))


class TestRandomVariable:
    def test_evaluate_growth(self, space31):
        x = space31.variable(atoms={"zero": 5}, tails={"pos": (1, 2, 3)})
        assert evaluate(x, "zero") == 5
        assert evaluate(x, ("pos", 4)) == 1 + 8 + 3 * 16
        assert evaluate(x, ("neg", 9)) == 0

    def test_overrides_are_canonical(self, space31):
        a = space31.variable(tails={"pos": (0, 1, 0)}, points={("pos", 3): 3})
        b = space31.variable(tails={"pos": (0, 1, 0)})
        assert a == b
        assert a.overrides == ((), ())

    def test_event_checks(self, space31):
        b = space31.indicator(["zero", ("pos", 2)])
        assert b.is_event() and b.is_nonempty_event()
        assert not space31.zero().is_nonempty_event()
        assert not space31.constant(2).is_event()
        assert space31.tail_indicator("neg").is_nonempty_event()

    def test_multiply_by_event(self, space31):
        x = space31.variable(atoms={"zero": 7}, tails={"pos": (0, 1, 0)})
        b = space31.indicator([("pos", 3), ("pos", 4)])
        xb = multiply_by_event(x, b)
        assert [evaluate(xb, ("pos", k)) for k in range(1, 7)] == [0, 0, 3, 4, 0, 0]
        assert evaluate(xb, "zero") == 0
        with pytest.raises(ValueError):
            multiply_by_event(x, x)

    def test_constant_detection(self, space31):
        assert space31.constant(Fraction(3, 2)).is_constant() == Fraction(3, 2)
        assert space31.indicator(["zero"]).is_constant() is None

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_linear_combination_pointwise(self, data):
        sp = data.draw(spaces())
        x = data.draw(variables(sp))
        y = data.draw(variables(sp))
        a, b = Fraction(3, 2), Fraction(-2)
        z = linear_combination([(a, x), (b, y)])
        states = list(sp.atoms) + [(t.name, t.start_index + j) for t in sp.tails for j in range(15)]
        for s in states:
            assert evaluate(z, s) == a * evaluate(x, s) + b * evaluate(y, s)


class TestSuprema:
    def test_unbounded(self, space31):
        assert exact_sup(space31.variable(tails={"pos": (0, 1, 0)})) == POS_INF
        assert exact_inf(space31.variable(tails={"neg": (0, -1, 0)})) == NEG_INF
        assert exact_sup(space31.variable(tails={"pos": (0, -100, 1)})) == POS_INF

    def test_decreasing_growth(self, space31):
        # 10k - 2^k peaks at k = 3, 4: 30 - 8 = 22 and 40 - 16 = 24; k=5: 50-32=18
        x = space31.variable(tails={"pos": (0, 10, -1)})
        assert exact_sup(x) == 24

    def test_limit_not_attained(self, space31):
        # 1 - 2^-k is not expressible, but a constant tail with overrides is
        x = space31.variable(tails={"pos": (1, 0, 0)}, points={("pos", 1): 5})
        assert exact_sup(x) == 5
        assert exact_inf(x) == 0  # neg tail and atom are 0

    def test_turning_index(self):
        c = GrowthCombo(0, 10, -1)
        k = turning_index(c, 1)
        assert 10 - 2**k < 0 and 10 - 2 ** (k - 1) >= 0
        assert turning_index(GrowthCombo(0, 1, -1), 5) == 5
        with pytest.raises(ValueError):
            turning_index(GrowthCombo(0, 1, 0), 1)

    def test_tail_sup_respects_skip(self):
        s, k = tail_sup(GrowthCombo(0, 0, -1), 1, skip={1, 2})
        assert (s, k) == (-8, 3)

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_sup_matches_brute_scan(self, data):
        sp = data.draw(spaces())
        x = data.draw(variables(sp))
        s = exact_sup(x)
        if s.is_finite:
            assert s.value == brute_sup(x, 200)
        else:
            # unbounded: the scan keeps growing
            assert brute_sup(x, 200) > brute_sup(x, 40)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_inf_matches_brute_scan(self, data):
        sp = data.draw(spaces(max_tails=1))
        x = data.draw(variables(sp))
        i = exact_inf(x)
        if i.is_finite:
            assert i.value == brute_inf(x, 1000)
