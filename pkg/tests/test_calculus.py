import numpy as np
import pytest

from ctdt.calculus import (
    Rule,
    TestSignal,
    backward_difference,
    backward_difference_weights,
    error_order,
    rect_integrate,
    running_rect,
    running_trap,
    trap_integrate,
)
from ctdt.dt import Sequence
from ctdt.errors import BadRange, DegenerateSignal, SequenceTooShort

TS = [0.1, 0.05, 0.025, 0.0125]


class TestDifferences:
    def test_weights(self):
        assert np.array_equal(backward_difference_weights(3), [1.0, -3.0, 3.0, -1.0])

    def test_first_difference_of_ramp(self):
        x = Sequence(np.arange(6, dtype=float) * 0.5, fs=2.0)
        d = backward_difference(x, 1)
        assert np.allclose(d.samples, 1.0)
        assert d.n0 == 1

    def test_second_difference_of_square(self):
        n = np.arange(8, dtype=float)
        d = backward_difference(Sequence(n**2), 2, divided=False)
        assert np.array_equal(d.samples, np.full(6, 2.0))

    def test_too_short(self):
        with pytest.raises(SequenceTooShort):
            backward_difference(Sequence([1.0, 2.0]), 2)


class TestIntegration:
    def test_rect_and_trap_on_line(self):
        x = Sequence(np.arange(5, dtype=float), fs=1.0)  # t = 0..4
        assert rect_integrate(x, 0, 4) == 6.0
        assert trap_integrate(x, 0, 4) == 8.0

    def test_running_sums_end(self):
        x = Sequence(np.arange(5, dtype=float))
        assert running_rect(x)[-1] == rect_integrate(x, 0, 4)
        assert running_trap(x)[-1] == trap_integrate(x, 0, 4)

    @pytest.mark.parametrize("p,q", [(2, 2), (3, 1), (-1, 2), (0, 5)])
    def test_bad_range(self, p, q):
        with pytest.raises(BadRange):
            rect_integrate(Sequence(np.ones(5)), p, q)


class TestErrorOrder:
    @pytest.mark.parametrize("rule,expected", [(Rule.RECT, 1.0), (Rule.TRAP, 2.0), (Rule.BDIFF, 1.0)])
    def test_sin(self, rule, expected):
        rep = error_order(rule, TestSignal.sin(), TS)
        assert abs(rep.fitted_slope - expected) <= 0.2

    def test_second_difference_order_one(self):
        rep = error_order(Rule.BDIFF, TestSignal.exp(), TS, interval=(0.0, 1.0), order=2)
        assert abs(rep.fitted_slope - 1.0) <= 0.2

    def test_exact_rule_is_degenerate(self):
        with pytest.raises(DegenerateSignal):
            error_order(Rule.TRAP, TestSignal.poly([1.0, 2.0]), TS)

    def test_steps_must_halve(self):
        with pytest.raises(ValueError):
            error_order(Rule.RECT, TestSignal.sin(), [0.1, 0.07, 0.02])
