"""Fan labellings and the proof-net to sharing-graph translation.

A labelling assigns each contraction node a fan index. It must be
compatible with depths: equal indices force equal box depths. The level
translation uses the depths themselves, the distinct translation gives
every contraction its own index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .proofnets import ProofNet, StepReport
from .sharegraphs import SharingGraph

__all__ = [
    "Labelling", "IncompatibleLabelling",
    "labelling_lt", "labelling_dlt", "check_compatible",
    "translate", "induced_labelling",
]


class IncompatibleLabelling(Exception):
    pass


@dataclass
class Labelling:
    mapping: dict[int, int] = field(default_factory=dict)
    k: int = 0  # number of fan indices (exponential stacks per context)

    def image_size(self) -> int:
        return len(set(self.mapping.values()))


def labelling_lt(net: ProofNet) -> Labelling:
    """Index each contraction by its box depth, packed to 0..k-1."""
    xs = net.contraction_nodes()
    depths = sorted({net.node_depth(x) for x in xs})
    dense = {d: i for i, d in enumerate(depths)}
    return Labelling({x: dense[net.node_depth(x)] for x in xs}, k=len(depths))


def labelling_dlt(net: ProofNet) -> Labelling:
    """A distinct index for every contraction node, in stable node order."""
    xs = net.contraction_nodes()
    return Labelling({x: i for i, x in enumerate(xs)}, k=len(xs))


def check_compatible(net: ProofNet, lab: Labelling) -> bool:
    xs = net.contraction_nodes()
    if any(x not in lab.mapping for x in xs):
        return False
    by_index: dict[int, int] = {}
    for x in xs:
        d = net.node_depth(x)
        i = lab.mapping[x]
        if by_index.setdefault(i, d) != d:
            return False
    return True


def translate(net: ProofNet, lab: Labelling) -> SharingGraph:
    """Node-for-node translation: lambda/app survive, contractions become
    fans, weakenings become erasers, boxes and unary nodes dissolve."""
    if not check_compatible(net, lab):
        raise IncompatibleLabelling("labelling not compatible with depths")
    g = SharingGraph()
    g.k = lab.k
    node_map: dict[int, int] = {}
    for nid in sorted(net.nodes):
        kind = net.nodes[nid]
        if kind == "RLolli":
            node_map[nid] = g.add_node("lam")
        elif kind == "LLolli":
            node_map[nid] = g.add_node("app")
        elif kind == "X":
            node_map[nid] = g.add_node("fan", lab.mapping[nid])
        elif kind == "W":
            node_map[nid] = g.add_node("era")

    port_map = {
        "RLolli": {"pr": "pr", "var": "var", "bod": "bod"},
        "LLolli": {"pr": "pr", "arg": "arg", "res": "res"},
        "X": {"pr": "pr", "p": "p", "q": "q"},
        "W": {"e": "pr"},
    }

    def resolve(end) -> tuple:
        """Follow wires through dissolved unary nodes to a surviving end."""
        seen = 0
        while True:
            seen += 1
            if seen > len(net.nodes) + len(net.wires) + 4:
                raise IncompatibleLabelling("dissolved-node chain does not terminate")
            if end[0] == "c":
                return ("c", end[1])
            nid, port = end[1], end[2]
            kind = net.nodes[nid]
            if kind in port_map:
                return ("n", node_map[nid], port_map[kind][port])
            other = "in" if port == "out" else "out"
            end = net.wires[("n", nid, other)]

    done: set[tuple] = set()
    for a, b in net.edges():
        for end in (a, b):
            if end[0] == "c" or net.nodes[end[1]] in port_map:
                src = resolve(end)
                if src in done:
                    continue
                if end[0] == "c":
                    other_end = net.wires[end]
                else:
                    other_end = net.wires[end]
                dst = resolve(other_end)
                if src == dst:
                    raise IncompatibleLabelling("degenerate loop through dissolved nodes")
                done.add(src)
                done.add(dst)
                g.link(src, dst)
    g.free_ports = list(net.conclusions)
    return g


def induced_labelling(net: ProofNet, lab: Labelling, step: StepReport) -> Labelling:
    """Carry a labelling across one proof-net step: surviving contractions
    keep their index, box copies inherit from the node they copy, and the
    contractions introduced at the copied doors take the resolved node's
    index. Depth compatibility is preserved."""
    mapping = {x: i for x, i in lab.mapping.items() if x in net.nodes}
    for old, (c1, c2) in step.copied.items():
        if old in lab.mapping:
            mapping[c1] = lab.mapping[old]
            mapping[c2] = lab.mapping[old]
    if step.resolved_contraction is not None:
        idx = lab.mapping[step.resolved_contraction]
        for xj in step.fresh_contractions:
            mapping[xj] = idx
    return Labelling(mapping, k=lab.k)
