import pytest

import hyperknow as hk
from hyperknow import parser, search
from hyperknow.errors import UnknownPointError
from hyperknow.frames import build_frame_model, eta_model, kappa_model
from hyperknow.kb4 import check_translation_equiv, sat_kb4, translate
from hyperknow.semantics import Evaluator
from hyperknow.syntax import (
    KB4And,
    KB4Atom,
    KB4Knows,
    KB4Not,
    desugar,
    ksafe,
)


def test_knowledge_of_excluded_middle(h2):
    fm = kappa_model(h2)
    assert fm.worlds == ("e_abc",)
    fm = build_frame_model(("a",), ("w",), {"a": (("w",),)}, ("p",),
                           {"p": frozenset({"w"})})
    f = hk.parse_kb4("K[a](p | ~p)", fm_sig(fm))
    assert sat_kb4(fm, "w", f)


def fm_sig(fm):
    return hk.Signature(fm.frame.agents, {}, fm.atoms)


def test_dead_agent_knows_everything(binary_input):
    fm = kappa_model(hk.strip_agent_atoms(binary_input))
    f = hk.parse_kb4("K[b] solo", fm_sig(fm))
    assert sat_kb4(fm, "solo_a0", f)       # b is dead there: vacuous
    assert not sat_kb4(fm, "a0_b0", f)     # b alive, solo false at a0_b0


def test_single_reflexive_world():
    fm = build_frame_model(("a",), ("w",), {"a": (("w",),)}, ("p",), {"p": frozenset()})
    f = hk.parse_kb4("K[a] p", fm_sig(fm))
    assert not sat_kb4(fm, "w", f)
    with pytest.raises(UnknownPointError):
        sat_kb4(fm, "zz", f)


def test_translate_homomorphic():
    sig = hk.Signature(("a", "b"), {}, ("p",))
    assert translate(hk.parse_kb4("p", sig)) == hk.parse_world("p", sig)
    assert translate(hk.parse_kb4("K[a] p", sig)) == hk.parse_world("K[a] p", sig)
    f = translate(hk.parse_kb4("~K[a] K[b] p", sig))
    assert f == hk.parse_world("~K[a] K[b] p", sig)
    assert parser.render(f) == "~K[a] K[b] p"


def test_translation_equivalence_atoms():
    fm = build_frame_model(("a",), ("w1", "w2"), {"a": (("w1", "w2"),)},
                           ("p",), {"p": frozenset({"w1"})})
    assert check_translation_equiv(fm, hk.parse_kb4("p", fm_sig(fm)))


def test_translation_equivalence_enumerated():
    pool = search.enumerate_kb4_formulas(("q1",), ("a", "b"), max_size=4)
    count = 0
    for fm in search.enumerate_frame_models(("a", "b"), 2, ("q1",)):
        for f in pool:
            assert check_translation_equiv(fm, f), (fm, f)
            count += 1
    assert count > 1000


def test_corrupted_translation_detected():
    # Translating knowledge with the safe operator diverges wherever the
    # agent is dead, because safe knowledge is false there.
    def bad_translate(f):
        match f:
            case KB4Atom(name):
                return hk.syntax.EnvAtom(name)
            case KB4Not(sub):
                return hk.syntax.WNot(bad_translate(sub))
            case KB4And(l, r):
                return hk.syntax.WAnd(bad_translate(l), bad_translate(r))
            case KB4Knows(agent, sub):
                return desugar(ksafe(agent, bad_translate(sub)))

    fm = build_frame_model(
        ("a", "b"), ("w1", "w2"),
        {"a": (("w1",),), "b": (("w1",), ("w2",))},  # a dead at w2
        ("p",), {"p": frozenset({"w1", "w2"})})
    f = hk.parse_kb4("K[a] p", fm_sig(fm))
    em = eta_model(fm)
    ev = Evaluator(em)
    assert sat_kb4(fm, "w2", f)                      # vacuously true
    assert not ev.sat_world("w2", bad_translate(f))  # safe knowledge: false
    assert ev.sat_world("w2", translate(f))


def test_kb4_pool_generator():
    pool = search.enumerate_kb4_formulas(("q1", "q2"), ("a",), max_size=3)
    assert KB4Atom("q1") in pool
    assert KB4Knows("a", KB4Knows("a", KB4Atom("q1"))) in pool
    assert len(pool) == len(set(pool))
    deduped = search.enumerate_kb4_formulas(("q1", "q2"), ("a",), max_size=5,
                                            commutative_dedup=True)
    assert KB4And(KB4Atom("q1"), KB4Atom("q2")) in deduped
    assert KB4And(KB4Atom("q2"), KB4Atom("q1")) not in deduped
    # Modal depth cap respected.
    deep = search.enumerate_kb4_formulas(("q1",), ("a",), max_size=4, max_modal_depth=1)
    assert KB4Knows("a", KB4Knows("a", KB4Atom("q1"))) not in deep
