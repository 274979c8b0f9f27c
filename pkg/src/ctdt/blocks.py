"""Block diagrams of unit delays, gains and signed sums.

A :class:`BlockGraph` is validated on construction: one input, one output,
one driver per non-sum node, and no loop without a delay in it. Graphs can be
simulated sample by sample or flattened into a :class:`DifferenceEquation`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence as Seq

import networkx as nx
import numpy as np

from .dt import DifferenceEquation, Sequence
from .errors import BadParameter, DelayFreeLoop, NetlistError, UnsupportedTopology


class NodeKind(enum.Enum):
    INPUT = "input"
    OUTPUT = "output"
    DELAY = "delay"
    GAIN = "gain"
    SUM = "sum"


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    factor: float = 1.0


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    sign: int = 1


@dataclass(frozen=True)
class BlockGraph:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        self._validate()

    # -- structure ---------------------------------------------------------

    @property
    def by_id(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    def inputs_of(self, node_id: str) -> list[Edge]:
        return [e for e in self.edges if e.dst == node_id]

    @property
    def input_id(self) -> str:
        return next(n.id for n in self.nodes if n.kind is NodeKind.INPUT)

    @property
    def output_id(self) -> str:
        return next(n.id for n in self.nodes if n.kind is NodeKind.OUTPUT)

    @property
    def delays(self) -> list[str]:
        return [n.id for n in self.nodes if n.kind is NodeKind.DELAY]

    def _validate(self) -> None:
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise UnsupportedTopology("duplicate node ids")
        nodes = self.by_id
        for kind in (NodeKind.INPUT, NodeKind.OUTPUT):
            count = sum(n.kind is kind for n in self.nodes)
            if count != 1:
                raise UnsupportedTopology(f"need exactly one {kind.value} node, found {count}")
        for e in self.edges:
            if e.src not in nodes or e.dst not in nodes:
                raise UnsupportedTopology(f"edge {e.src}->{e.dst} references an unknown node")
            if e.sign not in (1, -1):
                raise BadParameter(f"edge sign must be +1 or -1, got {e.sign}")
            if e.sign == -1 and nodes[e.dst].kind is not NodeKind.SUM:
                raise BadParameter("negative signs are only allowed on sum ports")
            if nodes[e.src].kind is NodeKind.OUTPUT:
                raise UnsupportedTopology("the output node cannot drive other nodes")
        for n in self.nodes:
            fan_in = len(self.inputs_of(n.id))
            if n.kind is NodeKind.INPUT and fan_in:
                raise UnsupportedTopology("the input node cannot be driven")
            if n.kind in (NodeKind.OUTPUT, NodeKind.DELAY, NodeKind.GAIN) and fan_in != 1:
                raise UnsupportedTopology(f"{n.kind.value} node {n.id!r} needs exactly one driver")
            if n.kind is NodeKind.SUM and fan_in < 1:
                raise UnsupportedTopology(f"sum node {n.id!r} has no inputs")
        object.__setattr__(self, "_order", self._topological_order())
        if self.output_id not in self._reachable(self.input_id):
            raise UnsupportedTopology("output is not reachable from input")

    def _reachable(self, start: str) -> set[str]:
        seen, stack = {start}, [start]
        while stack:
            cur = stack.pop()
            for e in self.edges:
                if e.src == cur and e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        return seen

    def _topological_order(self) -> list[str]:
        # Delay outputs are state, so edges leaving a delay impose no ordering.
        kinds = {n.id: n.kind for n in self.nodes}
        deps = {n.id: set() for n in self.nodes}
        for e in self.edges:
            if kinds[e.src] is not NodeKind.DELAY and kinds[e.dst] is not NodeKind.DELAY:
                deps[e.dst].add(e.src)
        order, done = [], set()
        pending = [n.id for n in self.nodes]
        while pending:
            ready = [i for i in pending if deps[i] <= done]
            if not ready:
                raise DelayFreeLoop(f"loop without a delay through {sorted(pending)}")
            for i in ready:
                order.append(i)
                done.add(i)
            pending = [i for i in pending if i not in done]
        return order

    def evaluation_order(self) -> list[str]:
        return list(self._order)


# --------------------------------------------------------------------------
# Simulation and flattening
# --------------------------------------------------------------------------

def _combine(node: Node, incoming: list[Edge], value) -> object:
    if node.kind is NodeKind.GAIN:
        return node.factor * value(incoming[0].src)
    if node.kind is NodeKind.OUTPUT:
        return value(incoming[0].src)
    acc = None
    for e in incoming:
        v = value(e.src)
        if acc is None:
            acc = v if e.sign == 1 else -v
        else:
            acc = acc + v if e.sign == 1 else acc - v
    return acc


def simulate_graph(g: BlockGraph, input: Sequence, n: int | None = None) -> Sequence:
    """Run the graph sample by sample from zero delay state."""
    n = len(input) if n is None else int(n)
    nodes = g.by_id
    drivers = {i: g.inputs_of(i) for i in nodes}
    order = g.evaluation_order()
    state = {d: 0.0 for d in g.delays}
    x = input.samples
    out = np.zeros(n)
    for k in range(n):
        vals: dict[str, float] = {}
        for nid in order:
            node = nodes[nid]
            if node.kind is NodeKind.INPUT:
                vals[nid] = float(x[k]) if k < len(x) else 0.0
            elif node.kind is NodeKind.DELAY:
                vals[nid] = state[nid]
            else:
                vals[nid] = _combine(node, drivers[nid], vals.__getitem__)
        out[k] = vals[g.output_id]
        state = {d: vals[drivers[d][0].src] for d in state}
    return Sequence(out, input.fs, input.n0)


MAX_LOOPS = 256
MAX_LOOP_SETS = 100_000

# A monomial c * w**k in the unit delay w = z**-1.
_Mono = tuple[float, int]


def _signal_flow(g: BlockGraph) -> nx.DiGraph:
    """Edge transmittances: the source node's operator times the summed port signs."""
    nodes = g.by_id
    sf = nx.DiGraph()
    sf.add_nodes_from(nodes)
    signs: dict[tuple[str, str], int] = {}
    for e in g.edges:
        signs[(e.src, e.dst)] = signs.get((e.src, e.dst), 0) + e.sign
    for (src, dst), sign in signs.items():
        if sign == 0:
            continue
        kind = nodes[src].kind
        coef = nodes[src].factor if kind is NodeKind.GAIN else 1.0
        sf.add_edge(src, dst, mono=(sign * coef, 1 if kind is NodeKind.DELAY else 0))
    return sf


def _path_gain(sf: nx.DiGraph, path: list[str], closed: bool) -> _Mono:
    coef, power = 1.0, 0
    hops = list(zip(path, path[1:] + path[:1])) if closed else list(zip(path, path[1:]))
    for u, v in hops:
        c, k = sf.edges[u, v]["mono"]
        coef, power = coef * c, power + k
    return coef, power


def _add(poly: list[float], coef: float, power: int) -> None:
    while len(poly) <= power:
        poly.append(0.0)
    poly[power] += coef


def _cofactor(loops: list[tuple[_Mono, frozenset]], exclude: frozenset) -> list[float]:
    """Mason determinant over the loops that avoid ``exclude``."""
    usable = [lp for lp in loops if not (lp[1] & exclude)]
    delta = [1.0]
    count = 0

    def extend(start: int, coef: float, power: int, used: frozenset, size: int):
        nonlocal count
        for i in range(start, len(usable)):
            (c, k), members = usable[i]
            if members & used:
                continue
            count += 1
            if count > MAX_LOOP_SETS:
                raise UnsupportedTopology("too many non-touching loop combinations")
            term_c, term_k = coef * c, power + k
            sign = -1.0 if size % 2 == 0 else 1.0
            _add(delta, sign * term_c, term_k)
            extend(i + 1, term_c, term_k, used | members, size + 1)

    extend(0, 1.0, 0, frozenset(), 0)
    return delta


def flatten(g: BlockGraph) -> DifferenceEquation:
    """Collapse a graph to its difference equation with Mason's gain formula.

    Gains are monomials in the unit delay, so loops with a single gain
    reproduce their coefficients exactly and ``simulate`` of the result
    matches ``simulate_graph`` sample for sample.

    Raises
    ------
    UnsupportedTopology
        If the graph has more feedback loops than can be enumerated cheaply.
    """
    sf = _signal_flow(g)
    loops = []
    for cycle in nx.simple_cycles(sf):
        loops.append((_path_gain(sf, cycle, closed=True), frozenset(cycle)))
        if len(loops) > MAX_LOOPS:
            raise UnsupportedTopology(f"more than {MAX_LOOPS} feedback loops")
    den = _cofactor(loops, frozenset())
    num = [0.0]
    for path in nx.all_simple_paths(sf, g.input_id, g.output_id):
        c, k = _path_gain(sf, path, closed=False)
        for j, d in enumerate(_cofactor(loops, frozenset(path))):
            if d != 0.0:
                _add(num, c * d, k + j)
    return DifferenceEquation(num, den)


# --------------------------------------------------------------------------
# Construction
# --------------------------------------------------------------------------

class Arch(enum.Enum):
    FIR_DIFFERENTIATOR = "fir_differentiator"
    MOVING_SUM = "moving_sum"
    ACCUMULATOR = "accumulator"
    OSCILLATOR = "oscillator"


def canonical(arch: Arch | str, param: float = 1.0) -> BlockGraph:
    """The four first-order structures built from one delay, one gain and one sum.

    ==================  ===========================
    fir_differentiator  ``1 - z_z z**-1``
    moving_sum          ``1 + z_z z**-1``
    accumulator         ``1 / (1 - z_p z**-1)``
    oscillator          ``1 / (1 + z_p z**-1)``
    ==================  ===========================
    """
    arch = Arch(arch)
    if not 0.0 <= param <= 1.0:
        raise BadParameter(f"parameter must lie in [0, 1], got {param}")
    N = Node
    common = [N("in", NodeKind.INPUT), N("sum", NodeKind.SUM), N("d", NodeKind.DELAY),
              N("g", NodeKind.GAIN, float(param)), N("out", NodeKind.OUTPUT)]
    sign = -1 if arch in (Arch.FIR_DIFFERENTIATOR, Arch.OSCILLATOR) else 1
    if arch in (Arch.FIR_DIFFERENTIATOR, Arch.MOVING_SUM):
        # feedforward: the delay taps the input
        edges = [Edge("in", "sum"), Edge("in", "d"), Edge("d", "g"), Edge("g", "sum", sign),
                 Edge("sum", "out")]
    else:
        # feedback: the delay taps the output
        edges = [Edge("in", "sum"), Edge("g", "sum", sign), Edge("sum", "d"), Edge("d", "g"),
                 Edge("sum", "out")]
    return BlockGraph(tuple(common), tuple(edges))


def gain_graph(k: float) -> BlockGraph:
    return BlockGraph(
        (Node("in", NodeKind.INPUT), Node("g", NodeKind.GAIN, float(k)), Node("out", NodeKind.OUTPUT)),
        (Edge("in", "g"), Edge("g", "out")),
    )


def identity_graph() -> BlockGraph:
    return gain_graph(1.0)


def from_difference_equation(de: DifferenceEquation) -> BlockGraph:
    """Direct-form-I realization (feedforward delay line, feedback delay line)."""
    nodes = [Node("in", NodeKind.INPUT), Node("sum", NodeKind.SUM), Node("out", NodeKind.OUTPUT)]
    edges = []
    prev = "in"
    for j, bj in enumerate(de.b):
        if j:
            nodes.append(Node(f"xd{j}", NodeKind.DELAY))
            edges.append(Edge(prev, f"xd{j}"))
            prev = f"xd{j}"
        nodes.append(Node(f"b{j}", NodeKind.GAIN, bj))
        edges.append(Edge(prev, f"b{j}"))
        edges.append(Edge(f"b{j}", "sum"))
    prev = "sum"
    for k, ak in enumerate(de.a[1:], start=1):
        nodes.append(Node(f"yd{k}", NodeKind.DELAY))
        edges.append(Edge(prev, f"yd{k}"))
        prev = f"yd{k}"
        nodes.append(Node(f"a{k}", NodeKind.GAIN, ak))
        edges.append(Edge(prev, f"a{k}"))
        edges.append(Edge(f"a{k}", "sum", -1))
    edges.append(Edge("sum", "out"))
    return BlockGraph(tuple(nodes), tuple(edges))


def _embed(g: BlockGraph, prefix: str) -> tuple[list[Node], list[Edge], str, str]:
    """Copy ``g`` with prefixed ids; its input/output become unity pass-throughs."""
    nodes, edges = [], []
    for n in g.nodes:
        kind = NodeKind.GAIN if n.kind in (NodeKind.INPUT, NodeKind.OUTPUT) else n.kind
        factor = 1.0 if kind is not n.kind else n.factor
        nodes.append(Node(prefix + n.id, kind, factor))
    for e in g.edges:
        edges.append(Edge(prefix + e.src, prefix + e.dst, e.sign))
    return nodes, edges, prefix + g.input_id, prefix + g.output_id


def compose(graphs: Iterable[BlockGraph], mode: str = "series",
            signs: Seq[int] | None = None) -> BlockGraph:
    """Series (product) or signed parallel (sum) combination of graphs."""
    graphs = list(graphs)
    if not graphs:
        raise ValueError("nothing to compose")
    if mode == "series" and len(graphs) == 1:
        return graphs[0]
    nodes = [Node("in", NodeKind.INPUT), Node("out", NodeKind.OUTPUT)]
    edges: list[Edge] = []
    ports = []
    for i, g in enumerate(graphs):
        n, e, gin, gout = _embed(g, f"g{i}.")
        nodes += n
        edges += e
        ports.append((gin, gout))
    if mode == "series":
        edges.append(Edge("in", ports[0][0]))
        for (_, a_out), (b_in, _) in zip(ports, ports[1:]):
            edges.append(Edge(a_out, b_in))
        edges.append(Edge(ports[-1][1], "out"))
    elif mode == "parallel":
        signs = [1] * len(graphs) if signs is None else list(signs)
        if len(signs) != len(graphs):
            raise BadParameter("one sign per parallel branch")
        nodes.append(Node("psum", NodeKind.SUM))
        for (gin, gout), sg in zip(ports, signs):
            edges.append(Edge("in", gin))
            edges.append(Edge(gout, "psum", int(sg)))
        edges.append(Edge("psum", "out"))
    else:
        raise ValueError(f"unknown composition mode {mode!r}")
    return BlockGraph(tuple(nodes), tuple(edges))


# --------------------------------------------------------------------------
# Netlist text format
# --------------------------------------------------------------------------

_SIGNS = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}


def parse_netlist(text: str) -> BlockGraph:
    """Parse ``node <id> <kind> [param]`` / ``edge <from> <to> [sign]`` lines.

    Blank lines and ``#`` comments are ignored.
    """
    nodes, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "node":
                if len(tok) not in (3, 4):
                    raise NetlistError("expected: node <id> <kind> [param]")
                kind = NodeKind(tok[2])
                if kind is NodeKind.GAIN:
                    if len(tok) != 4:
                        raise NetlistError("gain nodes need a factor")
                    nodes.append(Node(tok[1], kind, float(tok[3])))
                else:
                    if len(tok) != 3:
                        raise NetlistError(f"{kind.value} nodes take no parameter")
                    nodes.append(Node(tok[1], kind))
            elif tok[0] == "edge":
                if len(tok) not in (3, 4):
                    raise NetlistError("expected: edge <from> <to> [sign]")
                sign = _SIGNS[tok[3]] if len(tok) == 4 else 1
                edges.append(Edge(tok[1], tok[2], sign))
            else:
                raise NetlistError(f"unknown statement {tok[0]!r}")
        except (KeyError, ValueError) as exc:
            if isinstance(exc, NetlistError):
                raise NetlistError(f"line {lineno}: {exc}") from None
            raise NetlistError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    return BlockGraph(tuple(nodes), tuple(edges))


def to_netlist(g: BlockGraph) -> str:
    lines = []
    for n in g.nodes:
        if n.kind is NodeKind.GAIN:
            lines.append(f"node {n.id} gain {n.factor!r}")
        else:
            lines.append(f"node {n.id} {n.kind.value}")
    for e in g.edges:
        lines.append(f"edge {e.src} {e.dst} {'+' if e.sign == 1 else '-'}")
    return "\n".join(lines) + "\n"
