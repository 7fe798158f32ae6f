"""Proof-nets for EAL/LAL: construction, boxes, cuts, and reduction.

Nets are port graphs. A wiring maps each occupied port-end to its
partner; ends are either node ports `("n", id, port)` or named
conclusions `("c", label)`. Boxes are explicit node sets with door
lists, so the contraction step can copy exactly a box's contents.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .derivations import Derivation, check_annotated

__all__ = [
    "ProofNet", "Box", "StepReport", "MalformedNet",
    "build_proofnet", "find_cuts", "reduce_step_pn", "normalize_mlbl",
    "is_special_box", "net_depth", "edge_depth", "check_lal_boxes",
    "proofnet_dot", "direct_paths",
]

# kind -> ports (first is principal; None marks no principal port)
PN_PORTS: dict[str, tuple[str, ...]] = {
    "RLolli": ("pr", "var", "bod"),
    "LLolli": ("pr", "arg", "res"),
    "X": ("pr", "p", "q"),
    "W": ("e",),
    "RBang": ("out", "in"),
    "LBang": ("out", "in"),
    "RPara": ("out", "in"),
    "LPara": ("out", "in"),
    "RForall": ("out", "in"),
    "LForall": ("out", "in"),
    "RMu": ("out", "in"),
    "LMu": ("out", "in"),
}

_NO_PRINCIPAL = {"W"}

DOOR_KINDS = {"RBang", "LBang", "RPara", "LPara"}

End = tuple  # ("n", node_id, port) | ("c", label)


class MalformedNet(Exception):
    pass


def _new_box_id(net: "ProofNet") -> int:
    bid = 0
    while bid in net.boxes:
        bid += 1
    return bid


@dataclass
class Box:
    principal_door: int
    aux_doors: list[int]
    members: set[int]  # every node inside, door nodes included


@dataclass
class StepReport:
    """What a single reduction step did, for labelling bookkeeping."""
    kind: str                                   # lolli | forall | mu | merge | contract
    removed: list[int] = field(default_factory=list)
    copied: dict[int, tuple[int, int]] = field(default_factory=dict)
    fresh_contractions: list[int] = field(default_factory=list)
    resolved_contraction: int | None = None


class ProofNet:
    def __init__(self) -> None:
        self.nodes: dict[int, str] = {}
        self.wires: dict[End, End] = {}
        self.boxes: dict[int, Box] = {}
        self.conclusions: list[str] = []
        self._next = itertools.count()

    # -- construction -------------------------------------------------------

    def add_node(self, kind: str) -> int:
        nid = next(self._next)
        self.nodes[nid] = kind
        return nid

    def link(self, a: End, b: End) -> None:
        assert a not in self.wires and b not in self.wires, "port already wired"
        self.wires[a] = b
        self.wires[b] = a

    def unlink(self, a: End) -> End:
        b = self.wires.pop(a)
        del self.wires[b]
        return b

    def attach(self, node_end: End, old_end: End) -> None:
        """Rewire whatever old_end pointed at onto node_end, dropping old_end."""
        partner = self.unlink(old_end)
        self.link(node_end, partner)

    def splice(self, a: End, b: End) -> None:
        """Remove the two ends a and b, joining their partners directly."""
        pa = self.unlink(a)
        if pa == b:
            raise MalformedNet("splice would create a closed loop")
        pb = self.unlink(b)
        self.link(pa, pb)

    # -- queries ------------------------------------------------------------

    def ports(self, nid: int) -> tuple[str, ...]:
        return PN_PORTS[self.nodes[nid]]

    def principal(self, nid: int) -> str | None:
        kind = self.nodes[nid]
        return None if kind in _NO_PRINCIPAL else PN_PORTS[kind][0]

    def is_principal_end(self, end: End) -> bool:
        if end[0] != "n":
            return False
        return self.principal(end[1]) == end[2]

    def edges(self) -> list[tuple[End, End]]:
        seen = set()
        out = []
        for a, b in self.wires.items():
            key = (a, b) if a <= b else (b, a)
            if key not in seen:
                seen.add(key)
                out.append(key)
        return sorted(out)

    def node_depth(self, nid: int) -> int:
        return sum(1 for b in self.boxes.values() if nid in b.members)

    def end_depth(self, end: End) -> int:
        if end[0] == "c":
            return 0
        nid, port = end[1], end[2]
        if self.nodes[nid] in DOOR_KINDS and port == "out":
            return self.node_depth(nid) - 1
        return self.node_depth(nid)

    def size(self) -> int:
        return len(self.nodes)

    # -- token-machine interface -------------------------------------------

    def machine_role(self, nid: int) -> tuple:
        kind = self.nodes[nid]
        if kind in ("RLolli", "LLolli"):
            p, q = ("var", "bod") if kind == "RLolli" else ("arg", "res")
            return ("mult", "pr", p, q)
        if kind == "X":
            return ("exp", "pr", "p", "q")
        if kind == "W":
            return ("none",)
        return ("id", "out", "in")

    def conclusion_end(self, label: str) -> End:
        return ("c", label)

    def contraction_nodes(self) -> list[int]:
        return sorted(n for n, k in self.nodes.items() if k == "X")


def edge_depth(net: ProofNet, edge: tuple[End, End]) -> int:
    da, db = net.end_depth(edge[0]), net.end_depth(edge[1])
    if da != db:
        raise MalformedNet(f"edge {edge} spans depths {da} and {db}")
    return da


def net_depth(net: ProofNet) -> int:
    return max((edge_depth(net, e) for e in net.edges()), default=0)


# ---------------------------------------------------------------------------
# construction from a checked derivation

def build_proofnet(d: Derivation, mode: str = "eal") -> ProofNet:
    """Translate a derivation, rule by rule, into its proof-net."""
    judgements = check_annotated(d, mode)
    net = ProofNet()
    sentinels = itertools.count()

    def new_sent() -> End:
        return ("s", next(sentinels))

    def go(node: Derivation, path: tuple) -> tuple[End, dict[str, End]]:
        """Returns (main sentinel, hypothesis sentinels) for the subnet."""
        rule = node.rule

        if rule == "A":
            m, h = new_sent(), new_sent()
            net.link(m, h)
            return m, {node.get("var"): h}  # type: ignore[dict-item]

        if rule == "U":
            m1, h1 = go(node.premises[0], path + (0,))
            m2, h2 = go(node.premises[1], path + (1,))
            x = node.get("var")
            net.splice(m1, h2.pop(x))  # type: ignore[arg-type]
            return m2, {**h1, **h2}

        if rule == "W":
            m, h = go(node.premises[0], path + (0,))
            w = net.add_node("W")
            s = new_sent()
            net.link(("n", w, "e"), s)
            h[node.get("var")] = s  # type: ignore[index]
            return m, h

        if rule == "X":
            m, h = go(node.premises[0], path + (0,))
            a, b, z = node.get("a"), node.get("b"), node.get("z")
            x = net.add_node("X")
            net.attach(("n", x, "p"), h.pop(a))  # type: ignore[arg-type]
            net.attach(("n", x, "q"), h.pop(b))  # type: ignore[arg-type]
            s = new_sent()
            net.link(("n", x, "pr"), s)
            h[z] = s  # type: ignore[index]
            return m, h

        if rule == "RLolli":
            m, h = go(node.premises[0], path + (0,))
            x = node.get("var")
            lam = net.add_node("RLolli")
            net.attach(("n", lam, "bod"), m)
            net.attach(("n", lam, "var"), h.pop(x))  # type: ignore[arg-type]
            m2 = new_sent()
            net.link(("n", lam, "pr"), m2)
            return m2, h

        if rule == "LLolli":
            m1, h1 = go(node.premises[0], path + (0,))
            m2, h2 = go(node.premises[1], path + (1,))
            y, x = node.get("fun"), node.get("var")
            app = net.add_node("LLolli")
            net.attach(("n", app, "arg"), m1)
            net.attach(("n", app, "res"), h2.pop(x))  # type: ignore[arg-type]
            s = new_sent()
            net.link(("n", app, "pr"), s)
            hyps = {**h1, **h2}
            hyps[y] = s  # type: ignore[index]
            return m2, hyps

        if rule in ("PBang", "PBang1", "PBang2", "PPara"):
            before = set(net.nodes)
            m, h = go(node.premises[0], path + (0,))
            inner_nodes = set(net.nodes) - before
            banged: tuple[str, ...] = ()
            if rule == "PPara":
                banged = node.get("bang")  # type: ignore[assignment]
            rkind = "RPara" if rule == "PPara" else "RBang"
            r = net.add_node(rkind)
            net.attach(("n", r, "in"), m)
            m2 = new_sent()
            net.link(("n", r, "out"), m2)
            doors = [r]
            new_h: dict[str, End] = {}
            for name in judgements[path + (0,)].ctx_names():
                lkind = "LBang" if rule != "PPara" or name in banged else "LPara"
                l = net.add_node(lkind)
                net.attach(("n", l, "in"), h[name])
                s = new_sent()
                net.link(("n", l, "out"), s)
                new_h[name] = s
                doors.append(l)
            net.boxes[_new_box_id(net)] = Box(principal_door=r, aux_doors=doors[1:],
                                              members=inner_nodes | set(doors))
            return m2, new_h

        if rule in ("RForall", "RMu"):
            m, h = go(node.premises[0], path + (0,))
            n = net.add_node(rule)
            net.attach(("n", n, "in"), m)
            m2 = new_sent()
            net.link(("n", n, "out"), m2)
            return m2, h

        if rule in ("LForall", "LMu"):
            m, h = go(node.premises[0], path + (0,))
            x = node.get("var")
            n = net.add_node(rule)
            net.attach(("n", n, "in"), h[x])  # type: ignore[index]
            s = new_sent()
            net.link(("n", n, "out"), s)
            h[x] = s  # type: ignore[index]
            return m, h

        raise MalformedNet(f"unhandled rule {rule}")

    main, hyps = go(d, ())
    final = judgements[()]

    def relabel(old: End, new: End) -> None:
        partner = net.unlink(old)
        net.link(new, partner)

    relabel(main, ("c", "main"))
    net.conclusions = ["main"]
    for name in final.ctx_names():
        relabel(hyps[name], ("c", name))
        net.conclusions.append(name)
    return net


# ---------------------------------------------------------------------------
# cuts and reduction

def find_cuts(net: ProofNet) -> list[tuple[End, End]]:
    """Edges principal for both endpoints, ordered by depth then node ids."""
    cuts = [e for e in net.edges()
            if net.is_principal_end(e[0]) and net.is_principal_end(e[1])]
    return sorted(cuts, key=lambda e: (edge_depth(net, e), e))


def _cut_kind(net: ProofNet, cut: tuple[End, End]) -> tuple[str, int, int]:
    """Classify a cut; returns (kind, node_a, node_b) in rule orientation."""
    (_, na, _), (_, nb, _) = cut
    ka, kb = net.nodes[na], net.nodes[nb]
    pairs = {
        ("RLolli", "LLolli"): "lolli",
        ("RForall", "LForall"): "forall",
        ("RMu", "LMu"): "mu",
    }
    for (k1, k2), kind in pairs.items():
        if (ka, kb) == (k1, k2):
            return kind, na, nb
        if (ka, kb) == (k2, k1):
            return kind, nb, na
    # contraction only meets !-boxes, and box modalities must agree with
    # the absorbing door's
    if ka == "X" and kb == "RBang":
        return "contract", na, nb
    if kb == "X" and ka == "RBang":
        return "contract", nb, na
    for (k1, k2) in (("RBang", "LBang"), ("RPara", "LPara")):
        if (ka, kb) == (k1, k2):
            return "merge", na, nb
        if (ka, kb) == (k2, k1):
            return "merge", nb, na
    raise MalformedNet(f"unmatched cut pair {ka}/{kb}")


def _remove_node(net: ProofNet, nid: int) -> None:
    del net.nodes[nid]
    for b in net.boxes.values():
        b.members.discard(nid)


def _boxes_strictly_containing(net: ProofNet, box: Box) -> list[Box]:
    return [b for b in net.boxes.values()
            if b is not box and box.principal_door in b.members]


def _box_with_principal(net: ProofNet, nid: int) -> tuple[int, Box]:
    for bid, b in net.boxes.items():
        if b.principal_door == nid:
            return bid, b
    raise MalformedNet(f"node {nid} is not a principal door")


def _box_with_aux(net: ProofNet, nid: int) -> tuple[int, Box]:
    for bid, b in net.boxes.items():
        if nid in b.aux_doors:
            return bid, b
    raise MalformedNet(f"node {nid} is not an auxiliary door")


def reduce_step_pn(net: ProofNet, cut: tuple[End, End]) -> StepReport:
    """Fire one cut in place. Depths of surviving edges are unchanged."""
    if cut not in find_cuts(net):
        raise MalformedNet(f"not a cut: {cut}")
    kind, na, nb = _cut_kind(net, cut)

    if kind == "lolli":
        net.splice(("n", na, "bod"), ("n", nb, "res"))
        net.splice(("n", na, "var"), ("n", nb, "arg"))
        net.unlink(("n", na, "pr"))
        _remove_node(net, na)
        _remove_node(net, nb)
        return StepReport("lolli", removed=[na, nb])

    if kind in ("forall", "mu"):
        net.unlink(("n", na, "out"))
        net.splice(("n", na, "in"), ("n", nb, "in"))
        _remove_node(net, na)
        _remove_node(net, nb)
        return StepReport(kind, removed=[na, nb])

    if kind == "merge":
        # box of na enters the box owning aux door nb
        _, inner_box = _box_with_principal(net, na)
        host_id, host_box = _box_with_aux(net, nb)
        net.unlink(("n", na, "out"))
        net.splice(("n", na, "in"), ("n", nb, "in"))
        inner_box.members.discard(na)
        host_box.members |= inner_box.members
        host_box.aux_doors = [x for x in host_box.aux_doors if x != nb] + inner_box.aux_doors
        for bid, b in list(net.boxes.items()):
            if b is inner_box:
                del net.boxes[bid]
                break
        _remove_node(net, na)
        _remove_node(net, nb)
        return StepReport("merge", removed=[na, nb])

    assert kind == "contract"
    x, r = na, nb
    _, box = _box_with_principal(net, r)
    outer_boxes = _boxes_strictly_containing(net, box)
    x_boxes = [b for b in net.boxes.values() if x in b.members]

    copies: list[dict[int, int]] = []
    for _i in range(2):
        m = {old: net.add_node(net.nodes[old]) for old in sorted(box.members)}
        copies.append(m)
        # duplicate the boxes living inside (including this box itself)
        for bid, b in list(net.boxes.items()):
            if b.principal_door in box.members:
                net.boxes[_new_box_id(net)] = Box(
                    principal_door=m[b.principal_door],
                    aux_doors=[m[a] for a in b.aux_doors],
                    members={m[n] for n in b.members})
        for b in outer_boxes:
            b.members |= set(m.values())
        # internal wires
        for a, bnd in net.edges():
            a_in = a[0] == "n" and a[1] in box.members
            b_in = bnd[0] == "n" and bnd[1] in box.members
            if a_in and b_in:
                net.link(("n", m[a[1]], a[2]), ("n", m[bnd[1]], bnd[2]))
            elif a_in or b_in:
                inner = a if a_in else bnd
                if not (net.nodes[inner[1]] in DOOR_KINDS and inner[2] == "out"):
                    raise MalformedNet("edge crosses a box boundary away from a door")

    # X premises meet the copied principal doors
    p_target = net.unlink(("n", x, "p"))
    q_target = net.unlink(("n", x, "q"))
    net.link(p_target, ("n", copies[0][r], "out"))
    net.link(q_target, ("n", copies[1][r], "out"))

    fresh: list[int] = []
    for door in box.aux_doors:
        target = net.unlink(("n", door, "out"))
        xj = net.add_node("X")
        net.link(("n", xj, "p"), ("n", copies[0][door], "out"))
        net.link(("n", xj, "q"), ("n", copies[1][door], "out"))
        net.link(("n", xj, "pr"), target)
        for b in x_boxes:
            b.members.add(xj)
        fresh.append(xj)

    net.unlink(("n", x, "pr"))
    removed = [x] + sorted(box.members)
    for end in [e for e in net.wires if e[0] == "n" and e[1] in box.members]:
        if end in net.wires:
            net.unlink(end)
    for bid, b in list(net.boxes.items()):
        if b is box or b.principal_door in box.members:
            del net.boxes[bid]
    for old in sorted(box.members):
        _remove_node(net, old)
    _remove_node(net, x)
    return StepReport("contract", removed=removed,
                      copied={old: (copies[0][old], copies[1][old]) for old in copies[0]},
                      fresh_contractions=fresh, resolved_contraction=x)


# ---------------------------------------------------------------------------
# paths, special boxes, strategies

def direct_paths(net: ProofNet, start_end: End, max_len: int = 64) -> list[list[tuple[End, End]]]:
    """All maximal direct paths leaving through start_end (an edge end).

    A path is a sequence of edges; consecutive edges share a node and at
    least one of the two is principal for it.
    """
    paths: list[list[tuple[End, End]]] = []

    def edge_of(end: End) -> tuple[End, End]:
        other = net.wires[end]
        return (end, other) if end <= other else (other, end)

    def walk(cur_end: End, trail: list[tuple[End, End]]) -> None:
        if len(trail) >= max_len:
            paths.append(trail)
            return
        if cur_end[0] != "n":
            paths.append(trail)
            return
        nid = cur_end[1]
        exts = []
        for port in net.ports(nid):
            e = ("n", nid, port)
            if e == cur_end or e not in net.wires:
                continue
            if net.is_principal_end(cur_end) or net.is_principal_end(e):
                exts.append(e)
        if not exts:
            paths.append(trail)
            return
        for e in sorted(exts):
            walk(net.wires[e], trail + [edge_of(e)])

    walk(net.wires[start_end], [edge_of(start_end)])
    return paths


def is_special_box(net: ProofNet, box: Box, fuel: int = 10 ** 4) -> bool:
    """A box is special when every direct path leaving one of its premises
    is simple: after the first hop the path only ever exits through
    principal ports, which fails exactly when it runs into a cut."""
    for door in box.aux_doors:
        end = ("n", door, "out")
        cur = net.wires[end]
        steps = 0
        while True:
            steps += 1
            if steps > fuel:
                raise MalformedNet("special-box walk did not terminate")
            if cur[0] != "n":
                break  # reached a conclusion
            nid = cur[1]
            if net.is_principal_end(cur):
                # entered through a principal port: any continuation is
                # non-simple, so the box is not special unless there is
                # no continuation at all
                if len(net.ports(nid)) > 1:
                    return False
                break
            pp = net.principal(nid)
            if pp is None:
                break  # weakening node, path ends
            cur = net.wires[("n", nid, pp)]
    return True


def normalize_mlbl(net: ProofNet, fuel: int = 10 ** 5,
                   labelling=None) -> tuple[ProofNet, int]:
    """Level-by-level normalization; a box is only copied when special.

    Mutates the net in place; when a labelling is given, its mapping is
    updated step by step to the induced one.
    """
    steps = 0
    while True:
        cuts = find_cuts(net)
        if not cuts:
            return net, steps
        level = edge_depth(net, cuts[0])
        chosen = None
        for cut in cuts:
            if edge_depth(net, cut) != level:
                break
            kind, _na, nb = _cut_kind(net, cut)
            if kind == "contract":
                _, box = _box_with_principal(net, nb)
                if not is_special_box(net, box):
                    continue
            chosen = cut
            break
        if chosen is None:
            raise MalformedNet("no reducible cut at the minimal level")
        report = reduce_step_pn(net, chosen)
        if labelling is not None:
            from .translate import induced_labelling
            updated = induced_labelling(net, labelling, report)
            labelling.mapping.clear()
            labelling.mapping.update(updated.mapping)
        steps += 1
        if steps > fuel:
            raise MalformedNet(f"normalization exceeded {fuel} steps")


def check_lal_boxes(net: ProofNet) -> None:
    """Door-count discipline: !-boxes have at most one auxiliary door and
    it must be a !-door; paragraph boxes allow any mix of ! and paragraph
    doors."""
    for b in net.boxes.values():
        pk = net.nodes[b.principal_door]
        aux_kinds = [net.nodes[a] for a in b.aux_doors]
        if pk == "RBang":
            if len(b.aux_doors) > 1 or any(k != "LBang" for k in aux_kinds):
                raise MalformedNet("!-box with illegal doors in LAL mode")
        elif pk == "RPara":
            if any(k not in ("LBang", "LPara") for k in aux_kinds):
                raise MalformedNet("paragraph box with illegal doors")
        else:
            raise MalformedNet(f"box with principal door of kind {pk}")


# ---------------------------------------------------------------------------
# export

def proofnet_dot(net: ProofNet) -> str:
    lines = ["graph proofnet {", "  node [shape=box];"]
    for nid in sorted(net.nodes):
        lines.append(f'  n{nid} [label="{net.nodes[nid]}{nid}"];')
    for label in net.conclusions:
        lines.append(f'  c_{label} [label="{label}" shape=plaintext];')
    for a, b in net.edges():
        def fmt(end: End) -> tuple[str, str]:
            if end[0] == "c":
                return f"c_{end[1]}", ""
            mark = "*" if net.is_principal_end(end) else ""
            return f"n{end[1]}", f"{end[2]}{mark}"
        na, pa = fmt(a)
        nb, pb = fmt(b)
        lines.append(f'  {na} -- {nb} [taillabel="{pa}" headlabel="{pb}"];')
    for bid in sorted(net.boxes):
        members = " ".join(f"n{m}" for m in sorted(net.boxes[bid].members))
        lines.append(f'  subgraph cluster_{bid} {{ {members} }}')
    lines.append("}")
    return "\n".join(lines)
