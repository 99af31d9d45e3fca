import random

import pytest

import hyperknow as hk
from hyperknow.errors import (
    AgentMismatchError,
    SortError,
    UnknownAgentError,
    UnknownAtomError,
    WrongSortAtomError,
)
from hyperknow.syntax import (
    AgentAtom,
    AllViews,
    ANot,
    ATrue,
    Box,
    EnvAtom,
    PossWorld,
    SomeView,
    WAnd,
    WImplies,
    WNot,
    WOr,
    WTrue,
    alive,
    atoms_of,
    desugar,
    is_core,
    ksafe,
    kunsafe,
    modal_depth,
    sort_check_agent,
    sort_check_world,
)

from conftest import random_world


def test_desugar_safe_knowledge():
    f = desugar(ksafe("a", EnvAtom("p")))
    # E[a] ~<>~p
    assert f == SomeView("a", ANot(PossWorld(WNot(EnvAtom("p")))))
    assert is_core(f)


def test_desugar_alive():
    assert desugar(alive("a")) == SomeView("a", ATrue())


def test_desugar_unsafe_knowledge():
    f = desugar(kunsafe("a", EnvAtom("p")))
    assert f == WNot(SomeView("a", ANot(ANot(PossWorld(WNot(EnvAtom("p")))))))


def test_desugar_connectives():
    p, q = EnvAtom("p"), EnvAtom("q")
    assert desugar(WOr(p, q)) == WNot(WAnd(WNot(p), WNot(q)))
    assert desugar(WImplies(p, q)) == WNot(WAnd(p, WNot(q)))
    assert desugar(AllViews("a", ATrue())) == WNot(SomeView("a", ANot(ATrue())))


@pytest.fixture
def sig():
    return hk.Signature(("a", "b"), {"a": ("pa",), "b": ("pb",)}, ("u",))


def _random_sugared(rng, sig, depth):
    """Random formula that may contain derived constructors."""
    core = random_world(rng, sig, depth)
    # Splice sugar on top to exercise desugaring.
    wrappers = [
        lambda f: WOr(f, EnvAtom("u")),
        lambda f: WImplies(EnvAtom("u"), f),
        lambda f: AllViews("a", PossWorld(f)),
        lambda f: ksafe("b", f),
        lambda f: kunsafe("a", f),
        lambda f: f,
    ]
    return rng.choice(wrappers)(core)


def test_desugar_idempotent_and_core(sig):
    rng = random.Random(7)
    for _ in range(300):
        f = _random_sugared(rng, sig, 4)
        once = desugar(f)
        assert is_core(once)
        assert desugar(once) == once


def test_sort_check_crosslevel_example(sig):
    # E[a] <> (A[b] [] true) is well-sorted.
    f = SomeView("a", PossWorld(AllViews("b", Box(WTrue()))))
    assert sort_check_world(f, sig) is f


def test_sort_check_errors(sig):
    with pytest.raises(AgentMismatchError):
        sort_check_agent(AgentAtom("pb"), "a", sig)
    with pytest.raises(AgentMismatchError):
        sort_check_world(SomeView("a", AgentAtom("pb")), sig)
    with pytest.raises(WrongSortAtomError):
        sort_check_world(EnvAtom("pa"), sig)
    with pytest.raises(WrongSortAtomError):
        sort_check_agent(AgentAtom("u"), "a", sig)
    with pytest.raises(UnknownAtomError):
        sort_check_world(EnvAtom("zz"), sig)
    with pytest.raises(UnknownAgentError):
        sort_check_world(SomeView("z", ATrue()), sig)
    with pytest.raises(SortError):
        sort_check_world(ATrue(), sig)


def test_sort_check_commutes_with_desugar(sig):
    rng = random.Random(11)
    for _ in range(200):
        f = _random_sugared(rng, sig, 4)
        sort_check_world(f, sig)
        sort_check_world(desugar(f), sig)
    bad = SomeView("a", AgentAtom("pb"))
    with pytest.raises(SortError):
        sort_check_world(bad, sig)
    with pytest.raises(SortError):
        sort_check_world(desugar(bad), sig)


def test_modal_depth():
    assert modal_depth(EnvAtom("p")) == 0
    assert modal_depth(alive("a")) == 1
    assert modal_depth(ksafe("a", EnvAtom("p"))) == 2
    assert modal_depth(kunsafe("a", ksafe("b", EnvAtom("p")))) == 4
    assert modal_depth(WAnd(alive("a"), EnvAtom("p"))) == 1


def test_atoms_of(sig):
    f = WAnd(SomeView("a", AgentAtom("pa")), WOr(EnvAtom("u"), alive("b")))
    assert atoms_of(f) == {"pa", "u"}


def test_desugar_preserves_modal_depth(sig):
    rng = random.Random(5)
    for _ in range(200):
        f = _random_sugared(rng, sig, 4)
        assert modal_depth(desugar(f)) == modal_depth(f)
