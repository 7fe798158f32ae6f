import copy

import pytest

from lamping.derivations import ax, cut, lam, llolli
from lamping.formulas import Atom
from lamping.pipeline import prepared_graph
from lamping.sharegraphs import (
    EraserCut, SharingGraph, canonical_form, count_maximal_paths, find_cuts_sg,
    graph_dot, graph_dump, normalize_sg, reduce_step_sg,
)

A = Atom("a")


def _single_lambda():
    g = SharingGraph()
    n = g.add_node("lam")
    for port, name in (("pr", "root"), ("var", "v"), ("bod", "b")):
        g.link(("n", n, port), ("c", name))
    g.free_ports = ["root", "v", "b"]
    return g


def _fig9a_expected():
    """The running example's graph, wired by hand."""
    g = SharingGraph()
    g.k = 1
    a1 = g.add_node("app")   # outer application of f's spine
    a2 = g.add_node("app")   # inner application (function side reaches f)
    fan = g.add_node("fan", 0)
    l1 = g.add_node("lam")   # \x.f x x
    a3 = g.add_node("app")   # g z
    l2 = g.add_node("lam")   # \z.g z
    a4 = g.add_node("app")   # the top application
    g.link(("n", a1, "pr"), ("n", a2, "res"))
    g.link(("n", a1, "arg"), ("n", fan, "q"))
    g.link(("n", a1, "res"), ("n", l1, "bod"))
    g.link(("n", a2, "pr"), ("c", "f"))
    g.link(("n", a2, "arg"), ("n", fan, "p"))
    g.link(("n", fan, "pr"), ("n", l1, "var"))
    g.link(("n", l1, "pr"), ("n", a4, "pr"))
    g.link(("n", a3, "pr"), ("c", "g"))
    g.link(("n", a3, "arg"), ("n", l2, "var"))
    g.link(("n", a3, "res"), ("n", l2, "bod"))
    g.link(("n", l2, "pr"), ("n", a4, "arg"))
    g.link(("n", a4, "res"), ("c", "main"))
    g.free_ports = ["main", "f", "g"]
    return g


def _fig9b_expected():
    """Normal form of the running example: one shared g-application."""
    g = SharingGraph()
    g.k = 1
    a1 = g.add_node("app")
    a2 = g.add_node("app")
    a3 = g.add_node("app")   # the shared g z
    l1 = g.add_node("lam")
    l2 = g.add_node("lam")
    fv = g.add_node("fan", 0)  # shares the variable side
    fb = g.add_node("fan", 0)  # shares the body side
    g.link(("n", a2, "res"), ("c", "main"))
    g.link(("n", a2, "pr"), ("n", a1, "res"))
    g.link(("n", a2, "arg"), ("n", l2, "pr"))
    g.link(("n", a1, "pr"), ("c", "f"))
    g.link(("n", a1, "arg"), ("n", l1, "pr"))
    g.link(("n", a3, "pr"), ("c", "g"))
    g.link(("n", a3, "arg"), ("n", fv, "pr"))
    g.link(("n", a3, "res"), ("n", fb, "pr"))
    g.link(("n", fv, "p"), ("n", l1, "var"))
    g.link(("n", fv, "q"), ("n", l2, "var"))
    g.link(("n", fb, "p"), ("n", l1, "bod"))
    g.link(("n", fb, "q"), ("n", l2, "bod"))
    g.free_ports = ["main", "f", "g"]
    return g


def test_no_cuts_in_single_lambda():
    assert find_cuts_sg(_single_lambda()) == []


def test_normalize_noop_on_cut_free_graph():
    g = _single_lambda()
    g, stats = normalize_sg(g)
    assert stats.steps == 0
    assert g.size() == 1


def test_running_example_matches_hand_wiring(corpus_graphs):
    _, _, _, g = corpus_graphs["running_example"]
    assert canonical_form(g) == canonical_form(_fig9a_expected())
    assert find_cuts_sg(g) != []


def test_normal_form_matches_hand_wiring(corpus_graphs):
    _, _, _, g = corpus_graphs["running_example"]
    g = copy.deepcopy(g)
    g, stats = normalize_sg(g)
    assert (stats.steps, stats.annihilations, stats.copies) == (2, 1, 1)
    assert canonical_form(g) == canonical_form(_fig9b_expected())
    assert find_cuts_sg(g) == []


def test_beta_annihilation_single_step():
    d = cut("h", lam("x", ax("x", A)),
            llolli("h", "r", ax("y", A), ax("r", A)))
    _, _, g = prepared_graph(d, "eal", "dlt")
    g, stats = normalize_sg(g)
    assert (stats.steps, stats.annihilations, stats.copies) == (1, 1, 0)
    assert g.size() == 0
    assert g.wires[("c", "main")] == ("c", "y")


def test_fan_fan_same_index_annihilates():
    g = SharingGraph()
    f1 = g.add_node("fan", 3)
    f2 = g.add_node("fan", 3)
    g.link(("n", f1, "pr"), ("n", f2, "pr"))
    for node, port, name in ((f1, "p", "a"), (f1, "q", "b"),
                             (f2, "p", "c"), (f2, "q", "d")):
        g.link(("n", node, port), ("c", name))
    g.free_ports = ["a", "b", "c", "d"]
    kind = reduce_step_sg(g, find_cuts_sg(g)[0])
    assert kind == "annihilation"
    assert g.size() == 0
    assert g.wires[("c", "a")] == ("c", "c")
    assert g.wires[("c", "b")] == ("c", "d")


def test_fan_lambda_copy_census(corpus_graphs):
    _, _, _, g = corpus_graphs["running_example"]
    g = copy.deepcopy(g)
    reduce_step_sg(g, find_cuts_sg(g)[0])  # beta
    cuts = find_cuts_sg(g)
    assert len(cuts) == 1
    kind = reduce_step_sg(g, cuts[0])
    assert kind == "copy"
    kinds = sorted(g.nodes.values())
    assert kinds.count("lam") == 2
    assert kinds.count("fan") == 2


def test_fan_fan_different_index_copies():
    g = SharingGraph()
    f1 = g.add_node("fan", 0)
    f2 = g.add_node("fan", 1)
    g.link(("n", f1, "pr"), ("n", f2, "pr"))
    for node, port, name in ((f1, "p", "a"), (f1, "q", "b"),
                             (f2, "p", "c"), (f2, "q", "d")):
        g.link(("n", node, port), ("c", name))
    g.free_ports = ["a", "b", "c", "d"]
    kind = reduce_step_sg(g, find_cuts_sg(g)[0])
    assert kind == "copy"
    assert g.size() == 4
    assert sorted(g.index.values()) == [0, 0, 1, 1]


def test_reduce_step_rejects_non_cut(corpus_graphs):
    from lamping.sharegraphs import MalformedGraph
    _, _, _, g = corpus_graphs["running_example"]
    g = copy.deepcopy(g)
    non_cut = next(e for e in g.edges() if e not in find_cuts_sg(g))
    with pytest.raises(MalformedGraph, match="not a cut"):
        reduce_step_sg(g, non_cut)


def test_path_count_requires_cut_free(corpus_graphs):
    from lamping.sharegraphs import MalformedGraph
    _, _, _, g = corpus_graphs["running_example"]
    with pytest.raises(MalformedGraph, match="cuts"):
        count_maximal_paths(g, "main")


def test_eraser_cut_reported_and_skipped(corpus_graphs):
    _, _, _, g = corpus_graphs["weakened_app"]
    g = copy.deepcopy(g)
    g, stats = normalize_sg(g)
    cuts = find_cuts_sg(g)
    assert len(cuts) == 1  # the erased argument stays as an inert cut
    with pytest.raises(EraserCut):
        reduce_step_sg(g, cuts[0])


def test_size_ledger_per_step(corpus_graphs):
    for name, (_, _, _, g) in corpus_graphs.items():
        g = copy.deepcopy(g)
        while True:
            cuts = [c for c in find_cuts_sg(g)
                    if g.nodes[c[0][1]] != "era" and g.nodes[c[1][1]] != "era"]
            if not cuts:
                break
            before = g.size()
            kind = reduce_step_sg(g, cuts[0])
            delta = g.size() - before
            assert delta == (-2 if kind == "annihilation" else 2), name


def test_normal_forms_unique_across_orders(corpus_graphs):
    for name, (_, _, _, g) in corpus_graphs.items():
        g1 = copy.deepcopy(g)
        g2 = copy.deepcopy(g)
        normalize_sg(g1)
        # a second deterministic order: highest-id cut first
        while True:
            cuts = [c for c in find_cuts_sg(g2)
                    if g2.nodes[c[0][1]] != "era" and g2.nodes[c[1][1]] != "era"]
            if not cuts:
                break
            reduce_step_sg(g2, cuts[-1])
        assert canonical_form(g1) == canonical_form(g2), name


def test_single_lambda_path_bound():
    g = _single_lambda()
    c = count_maximal_paths(g, "root")
    assert c <= g.size() + 1


def test_app_chain_paths_meet_bound():
    k = 4
    g = SharingGraph()
    apps = [g.add_node("app") for _ in range(k)]
    g.link(("n", apps[0], "pr"), ("c", "f"))
    for i in range(1, k):
        g.link(("n", apps[i], "pr"), ("n", apps[i - 1], "res"))
    for i in range(k):
        g.link(("n", apps[i], "arg"), ("c", f"x{i}"))
    g.link(("n", apps[k - 1], "res"), ("c", "root"))
    g.free_ports = ["root", "f"] + [f"x{i}" for i in range(k)]
    assert count_maximal_paths(g, "f") == k + 1
    for port in g.free_ports:
        assert count_maximal_paths(g, port) <= g.size() + 1


def test_path_bound_on_normalized_corpus(corpus_graphs):
    for name, (_, _, _, g) in corpus_graphs.items():
        g = copy.deepcopy(g)
        normalize_sg(g)
        for port in g.free_ports:
            assert count_maximal_paths(g, port) <= g.size() + 1, (name, port)


def test_dump_and_dot_deterministic(corpus_graphs):
    _, _, _, g = corpus_graphs["running_example"]
    assert graph_dump(g) == graph_dump(g)
    assert graph_dot(g) == graph_dot(g)
    assert "fan0" in graph_dot(g)
