import numpy as np
import pytest

from ctdt.blocks import (
    Arch,
    BlockGraph,
    Edge,
    Node,
    NodeKind,
    canonical,
    compose,
    flatten,
    from_difference_equation,
    gain_graph,
    identity_graph,
    parse_netlist,
    simulate_graph,
    to_netlist,
)
from ctdt.discretize import dt_lpf_from_pole
from ctdt.dt import DifferenceEquation, Sequence, dt_freq_response, simulate
from ctdt.errors import BadParameter, DelayFreeLoop, NetlistError, UnsupportedTopology
from ctdt.rational import poly_roots, to_pzg

ACC_NETLIST = """\
# accumulator with pole 0.6
node in input
node s sum
node d delay
node g gain 0.6
node out output
edge in s +
edge g s +
edge s d
edge d g
edge s out
"""


def _db(de, f):
    return float(dt_freq_response(de, 1.0, [f]).magnitude_db[0])


class TestCanonical:
    @pytest.mark.parametrize(
        "arch,b,a",
        [("fir_differentiator", (1.0, -0.3), (1.0,)), ("moving_sum", (1.0, 0.3), (1.0,)),
         ("accumulator", (1.0,), (1.0, -0.3)), ("oscillator", (1.0,), (1.0, 0.3))],
    )
    def test_flatten(self, arch, b, a):
        de = flatten(canonical(arch, 0.3))
        assert de.b == b and de.a == a

    def test_parameter_range(self):
        with pytest.raises(BadParameter):
            canonical("accumulator", 1.5)

    def test_figure_gains(self):
        assert _db(flatten(canonical(Arch.FIR_DIFFERENTIATOR, 1.0)), 0.5) == pytest.approx(6.0206, abs=1e-4)
        assert _db(flatten(canonical(Arch.MOVING_SUM, 1.0)), 0.0) == pytest.approx(6.0206, abs=1e-4)
        assert _db(flatten(canonical(Arch.ACCUMULATOR, 1.0)), 0.5) == pytest.approx(-6.0206, abs=1e-4)

    @pytest.mark.parametrize(
        "arch,expected",
        [("accumulator", [1.0] * 6), ("moving_sum", [1.0, 1.0, 0, 0, 0, 0]),
         ("oscillator", [1.0, -1.0] * 3), ("fir_differentiator", [1.0, -1.0, 0, 0, 0, 0])],
    )
    def test_impulse(self, arch, expected):
        y = simulate_graph(canonical(arch, 1.0), Sequence.impulse(6))
        assert np.array_equal(y.samples, expected)

    def test_equivalence_random(self, rng):
        for arch in Arch:
            for _ in range(25):
                g = canonical(arch, float(rng.uniform(0, 1)))
                x = Sequence(rng.standard_normal(64))
                assert np.array_equal(simulate_graph(g, x).samples, simulate(flatten(g), x).samples)

    def test_zero_input(self):
        for arch in Arch:
            assert not np.any(simulate_graph(canonical(arch, 0.7), Sequence(np.zeros(10))).samples)


class TestValidation:
    def test_delay_free_loop(self):
        nodes = (Node("i", NodeKind.INPUT), Node("s", NodeKind.SUM), Node("g", NodeKind.GAIN, 0.5),
                 Node("o", NodeKind.OUTPUT))
        edges = (Edge("i", "s"), Edge("s", "g"), Edge("g", "s"), Edge("s", "o"))
        with pytest.raises(DelayFreeLoop):
            BlockGraph(nodes, edges)

    def test_two_inputs(self):
        nodes = (Node("i", NodeKind.INPUT), Node("j", NodeKind.INPUT), Node("o", NodeKind.OUTPUT))
        with pytest.raises(UnsupportedTopology):
            BlockGraph(nodes, (Edge("i", "o"),))

    def test_unreachable_output(self):
        nodes = (Node("i", NodeKind.INPUT), Node("s", NodeKind.SUM), Node("d", NodeKind.DELAY),
                 Node("o", NodeKind.OUTPUT))
        edges = (Edge("d", "s"), Edge("s", "d"), Edge("s", "o"))
        with pytest.raises(UnsupportedTopology):
            BlockGraph(nodes, edges)

    def test_negative_sign_needs_sum(self):
        nodes = (Node("i", NodeKind.INPUT), Node("o", NodeKind.OUTPUT))
        with pytest.raises(BadParameter):
            BlockGraph(nodes, (Edge("i", "o", -1),))


class TestFlatten:
    def test_gain(self):
        assert flatten(gain_graph(2.5)) == DifferenceEquation([2.5])

    def test_direct_form_exact(self, rng):
        for _ in range(50):
            de = DifferenceEquation(rng.standard_normal(3), [1.0, *(0.4 * rng.standard_normal(2))])
            g = from_difference_equation(de)
            assert flatten(g) == de
            x = Sequence(rng.standard_normal(64))
            assert np.array_equal(simulate_graph(g, x).samples, simulate(de, x).samples)


class TestCompose:
    def test_series_hpf(self):
        g = compose([canonical("fir_differentiator", 1.0), canonical("accumulator", 0.6)])
        de = flatten(g)
        assert de.b == (1.0, -1.0) and de.a == (1.0, -0.6)

    def test_double_accumulator(self):
        g = compose([canonical("accumulator", 1.0), canonical("accumulator", 1.0)])
        y = simulate_graph(g, Sequence.step(8)).samples
        assert np.array_equal(y, [1, 3, 6, 10, 15, 21, 28, 36])
        (pole,) = to_pzg(flatten(g).to_tf()).poles
        assert pole.multiplicity == 2 and pole.value == pytest.approx(1.0)

    def test_parallel_identity_minus_lpf(self):
        lp = from_difference_equation(dt_lpf_from_pole(0.6))
        de = flatten(compose([identity_graph(), lp], "parallel", [1, -1]))
        assert de.b == pytest.approx((1.0, -1.0)) and de.a == (1.0, -0.6)
        assert de(1.0) == 0.0

    def test_series_singleton(self):
        g = canonical("oscillator", 0.2)
        assert compose([g]) is g

    def test_series_roots_union(self):
        parts = [canonical("moving_sum", 0.5), canonical("accumulator", 0.3), canonical("fir_differentiator", 0.8)]
        whole = flatten(compose(parts))

        def roots(coeffs_list):
            return sorted(r.real for c in coeffs_list for r, m in poly_roots(c) for _ in range(m))

        assert roots([whole.b]) == pytest.approx(roots([flatten(p).b for p in parts]))
        assert roots([whole.a]) == pytest.approx(roots([flatten(p).a for p in parts]))


class TestNetlist:
    def test_parse(self):
        de = flatten(parse_netlist(ACC_NETLIST))
        assert de.b == (1.0,) and de.a == (1.0, -0.6)

    def test_round_trip(self):
        g = compose([canonical("fir_differentiator", 1.0), canonical("oscillator", 0.25)])
        assert parse_netlist(to_netlist(g)) == g

    @pytest.mark.parametrize("text", ["node a blob", "edge a", "wire a b", "node g gain x"])
    def test_errors(self, text):
        with pytest.raises(NetlistError):
            parse_netlist(text)
