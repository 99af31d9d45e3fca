import pytest

import hyperknow as hk
from hyperknow import search
from hyperknow.errors import NonEmptyAgentAtomsError, ValidationError
from hyperknow.frames import (
    FrameMorphism,
    HypergraphMorphism,
    build_frame,
    build_frame_model,
    check_frame_morphism,
    check_hypergraph_morphism,
    eta,
    eta_model,
    eta_morphism,
    is_isomorphic,
    is_isomorphic_frames,
    kappa,
    kappa_model,
    kappa_morphism,
)


def test_build_frame_validation():
    with pytest.raises(ValidationError):
        build_frame(("a",), ("w1", "w2"), {"a": (("w1",),)})  # w2 uncovered
    with pytest.raises(ValidationError):
        build_frame(("a",), ("w1",), {"a": (("w1",), ("w1",))})  # overlap
    fr = build_frame(("a", "b"), ("w1", "w2"), {"a": (("w2", "w1"),), "b": (("w2",),)})
    assert fr.classes["a"] == (("w1", "w2"),)  # canonical member order
    assert fr.dom("b") == frozenset({"w2"})


def test_eta_singleton():
    fr = build_frame(("a",), ("w",), {"a": (("w",),)})
    h = eta(fr)
    assert h.edges == ("w",)
    assert len(h.views["a"]) == 1


def test_eta_two_equivalent_worlds():
    fr = build_frame(("a",), ("w1", "w2"), {"a": (("w1", "w2"),)})
    h = eta(fr)
    assert len(h.edges) == 2
    assert len(h.views["a"]) == 1
    v = h.views["a"][0]
    assert set(h.worlds_of_view("a", v)) == {"w1", "w2"}


def test_eta_pairwise_frame_is_triangle_shaped(h3):
    # Three worlds, each pair equivalent for exactly one agent.
    fr = build_frame(
        ("a", "b", "c"), ("w1", "w2", "w3"),
        {"a": (("w1", "w2"),), "b": (("w1", "w3"),), "c": (("w2", "w3"),)})
    h = eta(fr)
    assert is_isomorphic(h, h3.hypergraph) is not None


def test_kappa_examples(h1, h2, h3):
    fr2 = kappa(h2.hypergraph)
    assert fr2.worlds == ("e_abc",)
    for agent in "abc":
        assert fr2.related(agent, "e_abc", "e_abc")

    fr3 = kappa(h3.hypergraph)
    assert len(fr3.worlds) == 3
    pairs = {("e_ab", "e_ac"): "a", ("e_ab", "e_bc"): "b", ("e_ac", "e_bc"): "c"}
    for (x, y), agent in pairs.items():
        for other in "abc":
            assert fr3.related(other, x, y) == (other == agent)

    fr1 = kappa(h1.hypergraph)
    assert len(fr1.worlds) == 7
    sizes = sorted(len(c) for c in fr1.classes["a"])
    assert sizes == [4]
    assert fr1.dom("a") == frozenset({"e_a", "e_ab", "e_ac", "e_abc"})


def test_eta_output_is_valid_hypergraph():
    for fr in search.enumerate_frames(("a", "b"), 3):
        h = eta(fr)  # build_hypergraph validates all four conditions
        assert set(h.edges) == set(fr.worlds)


def test_round_trip_hypergraphs():
    b = search.Bounds(agents=2, views=2, edges=4)
    for h in search.enumerate_hypergraphs(b):
        assert is_isomorphic(eta(kappa(h)), h) is not None


def test_round_trip_frames():
    for fr in search.enumerate_frames(("a", "b"), 3):
        assert is_isomorphic_frames(kappa(eta(fr)), fr) is not None


def test_eta_kappa_model_round_trip(binary_input):
    stripped = hk.strip_agent_atoms(binary_input)
    fm = kappa_model(stripped)
    assert len(fm.worlds) == 8
    assert fm.val["solo"] == stripped.val_env["solo"]
    back = eta_model(fm)
    assert is_isomorphic(back.hypergraph, stripped.hypergraph) is not None
    assert back.val_env["solo"] == stripped.val_env["solo"]


def test_kappa_model_rejects_agent_atoms(binary_input):
    with pytest.raises(NonEmptyAgentAtomsError):
        kappa_model(binary_input)


def test_empty_valuation_round_trip():
    fm = build_frame_model(("a",), ("w",), {"a": (("w",),)}, ("dusk",), {})
    m = eta_model(fm)
    assert m.val_env["dusk"] == frozenset()


def test_isomorphism_positive(h1):
    h = h1.hypergraph
    mor = is_isomorphic(eta(kappa(h)), h)
    assert mor is not None
    assert check_hypergraph_morphism(mor, eta(kappa(h)), h)


def test_isomorphism_negative(h2, h3):
    assert is_isomorphic(h2.hypergraph, h3.hypergraph) is None
    # Same sizes but different fiber structure.
    sig = hk.Signature(("a", "b"))
    h_shared = hk.build_hypergraph(
        sig, {"a": ("v1",), "b": ("w1",)}, ("e1", "e2"),
        {("e1", "a"): "v1", ("e2", "a"): "v1", ("e2", "b"): "w1"})
    h_split = hk.build_hypergraph(
        sig, {"a": ("v1",), "b": ("w1",)}, ("e1", "e2"),
        {("e1", "a"): "v1", ("e2", "b"): "w1"})
    assert is_isomorphic(h_shared, h_split) is None


def test_isomorphism_needs_backtracking():
    # Complete bipartite pairing vs doubled parallel edges: identical view
    # counts, edge counts and fiber sizes everywhere, so only the induced
    # view-map consistency check can tell them apart.
    sig = hk.Signature(("a", "b"))
    views = {"a": ("a1", "a2"), "b": ("b1", "b2")}
    complete = hk.build_hypergraph(
        sig, views, ("e1", "e2", "e3", "e4"),
        {("e1", "a"): "a1", ("e1", "b"): "b1",
         ("e2", "a"): "a1", ("e2", "b"): "b2",
         ("e3", "a"): "a2", ("e3", "b"): "b1",
         ("e4", "a"): "a2", ("e4", "b"): "b2"})
    doubled = hk.build_hypergraph(
        sig, views, ("e1", "e2", "e3", "e4"),
        {("e1", "a"): "a1", ("e1", "b"): "b1",
         ("e2", "a"): "a1", ("e2", "b"): "b1",
         ("e3", "a"): "a2", ("e3", "b"): "b2",
         ("e4", "a"): "a2", ("e4", "b"): "b2"})
    assert is_isomorphic(complete, doubled) is None
    # A relabeled copy of the complete pairing is found despite the swap.
    relabeled = hk.build_hypergraph(
        sig, views, ("f1", "f2", "f3", "f4"),
        {("f1", "a"): "a2", ("f1", "b"): "b2",
         ("f2", "a"): "a2", ("f2", "b"): "b1",
         ("f3", "a"): "a1", ("f3", "b"): "b2",
         ("f4", "a"): "a1", ("f4", "b"): "b1"})
    mor = is_isomorphic(complete, relabeled)
    assert mor is not None
    assert check_hypergraph_morphism(mor, complete, relabeled)


def test_frame_isomorphism_needs_backtracking():
    # Identical per-world class-size profiles; only the interplay between the
    # two agents' partitions distinguishes the frames.
    worlds = ("w1", "w2", "w3", "w4")
    a_classes = (("w1", "w2"), ("w3", "w4"))
    crossing = build_frame(("a", "b"), worlds,
                           {"a": a_classes, "b": (("w1", "w3"), ("w2", "w4"))})
    aligned = build_frame(("a", "b"), worlds,
                          {"a": a_classes, "b": (("w1", "w2"), ("w3", "w4"))})
    assert is_isomorphic_frames(crossing, aligned) is None
    shuffled = build_frame(("a", "b"), worlds,
                           {"a": (("w2", "w4"), ("w1", "w3")),
                            "b": (("w2", "w1"), ("w4", "w3"))})
    mor = is_isomorphic_frames(crossing, shuffled)
    assert mor is not None
    assert check_frame_morphism(mor, crossing, shuffled)


def test_identity_morphism(h1):
    h = h1.hypergraph
    mor = HypergraphMorphism(
        view_maps={a: {v: v for v in h.views[a]} for a in h.sig.agents},
        edge_map={e: e for e in h.edges})
    assert check_hypergraph_morphism(mor, h, h)


def test_collapse_morphism_h3_to_h2(h2, h3):
    mor = HypergraphMorphism(
        view_maps={a: {f"v{a}": f"v{a}"} for a in "abc"},
        edge_map={e: "e_abc" for e in h3.edges})
    assert check_hypergraph_morphism(mor, h3.hypergraph, h2.hypergraph)


def test_non_morphism_detected(h2, h3):
    # H2's world keeps agent c alive; sending it into a c-dead edge of H3
    # breaks the commutation condition.
    bad = HypergraphMorphism(
        view_maps={"a": {"va": "va"}, "b": {"vb": "vb"}, "c": {"vc": "vc"}},
        edge_map={"e_abc": "e_ab"})
    assert not check_hypergraph_morphism(bad, h2.hypergraph, h3.hypergraph)


def test_frame_morphism_check():
    fr1 = build_frame(("a",), ("w1", "w2"), {"a": (("w1", "w2"),)})
    fr2 = build_frame(("a",), ("u1", "u2"), {"a": (("u1",), ("u2",))})
    collapse = FrameMorphism(world_map={"w1": "u1", "w2": "u2"})
    assert not check_frame_morphism(collapse, fr1, fr2)  # splits a class
    merge = FrameMorphism(world_map={"u1": "w1", "u2": "w2"})
    assert check_frame_morphism(merge, fr2, fr1)


def test_functor_actions_preserve_morphisms():
    fr1 = build_frame(("a", "b"), ("w1", "w2"),
                      {"a": (("w1", "w2"),), "b": (("w1",), ("w2",))})
    fr2 = build_frame(("a", "b"), ("u1",), {"a": (("u1",),), "b": (("u1",),)})
    g = FrameMorphism(world_map={"w1": "u1", "w2": "u1"})
    assert check_frame_morphism(g, fr1, fr2)
    transported = eta_morphism(g, fr1, fr2)
    assert check_hypergraph_morphism(transported, eta(fr1), eta(fr2))
    # And back: the edge map of a hypergraph morphism is a frame morphism.
    back = kappa_morphism(transported)
    assert check_frame_morphism(back, kappa(eta(fr1)), kappa(eta(fr2)))


def test_functor_action_on_enumerated_isos():
    count = 0
    for fr in search.enumerate_frames(("a", "b"), 2):
        ident = FrameMorphism(world_map={w: w for w in fr.worlds})
        assert check_frame_morphism(ident, fr, fr)
        transported = eta_morphism(ident, fr, fr)
        assert check_hypergraph_morphism(transported, eta(fr), eta(fr))
        count += 1
    assert count > 0
