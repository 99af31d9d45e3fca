import random

import pytest

import hyperknow as hk
from hyperknow import parser, proofkernel
from hyperknow.errors import DerivationCheckError
from hyperknow.proofkernel import (
    Adj1Down,
    Adj2Up,
    AxFunctionality,
    AxNonEmptiness,
    AxSurjectivity,
    Derivation,
    DerivationLine,
    MP,
    NecA,
    PropTaut,
    Statement,
    abstract_propositional,
    adj1_down,
    adj1_up,
    adj2_down,
    adj2_up,
    check_derivation,
    check_line,
    is_tautology,
    soundness_spotcheck,
)
from hyperknow.syntax import desugar

from conftest import CORPUS, random_agent, random_world, taut_oracle

SIG = hk.Signature(("a",), {"a": ("pa",)}, ("p",))


def _w(text, sig=SIG):
    return parser.parse_world(text, sig)


def _a(text, sig=SIG):
    return parser.parse_agent(text, "a", sig)


def _derivation(*lines, sig=SIG):
    out = []
    for i, (sort, text, just) in enumerate(lines, start=1):
        formula = _w(text, sig) if sort == "e" else parser.parse_agent(text, sort, sig)
        out.append(DerivationLine(index=i, statement=Statement(sort, formula),
                                  justification=just))
    return Derivation(sig=sig, lines=tuple(out))


def test_adjunction_one_down():
    d = _derivation(
        ("e", "A[a] pa -> A[a] pa", PropTaut()),
        ("a", "<> A[a] pa -> pa", Adj1Down(1)),
    )
    check_derivation(d)


def test_adjunction_two_up():
    d = _derivation(
        ("e", "E[a] pa -> E[a] pa", PropTaut()),
        ("a", "pa -> [] E[a] pa", Adj2Up(1)),
    )
    check_derivation(d)


def test_necessitation_needs_world_premise():
    d = _derivation(
        ("a", "pa -> pa", PropTaut()),
        ("a", "[] (p -> p)", NecA(1)),
    )
    with pytest.raises(DerivationCheckError) as err:
        check_derivation(d)
    assert err.value.line == 2
    assert err.value.kind == "SortError"


def test_wrong_conclusion_rejected():
    d = _derivation(
        ("e", "A[a] pa -> A[a] pa", PropTaut()),
        ("a", "<> A[a] pa -> ~pa", Adj1Down(1)),
    )
    with pytest.raises(DerivationCheckError) as err:
        check_derivation(d)
    assert err.value.line == 2
    assert err.value.kind == "RuleMismatch"


def test_forward_reference_rejected():
    d = _derivation(("e", "p -> p", MP(1, 1)))
    with pytest.raises(DerivationCheckError) as err:
        check_derivation(d)
    assert err.value.kind == "BadReference"


def test_forged_unsound_statement_has_no_rule():
    # Over several agents, alive(a) is false where a is dead, and indeed no
    # justification produces it.
    sig2 = hk.Signature(("a", "b"), {"a": ("pa",)}, ())
    for just in (PropTaut(), AxSurjectivity(), AxFunctionality(), AxNonEmptiness()):
        d = _derivation(("e", "E[a] true", just), sig=sig2)
        with pytest.raises(DerivationCheckError) as err:
            check_derivation(d)
        assert err.value.line == 1


def test_axiom_matchers():
    check_derivation(_derivation(("a", "pa -> <> E[a] pa", AxSurjectivity())))
    check_derivation(_derivation(("a", "<> E[a] pa -> pa", AxFunctionality())))
    check_derivation(_derivation(("e", "alive(a)", AxNonEmptiness())))
    sig2 = hk.Signature(("a", "b"))
    check_derivation(_derivation(("e", "alive(a) | alive(b)", AxNonEmptiness()),
                                 sig=sig2))
    with pytest.raises(DerivationCheckError):
        # Wrong disjunct order.
        check_derivation(_derivation(("e", "alive(b) | alive(a)", AxNonEmptiness()),
                                     sig=sig2))
    with pytest.raises(DerivationCheckError):
        check_derivation(_derivation(("a", "pa -> <> E[a] ~pa", AxSurjectivity())))


def test_modus_ponens_order():
    d = _derivation(
        ("e", "p -> p", PropTaut()),
        ("e", "(p -> p) -> (p | ~p)", PropTaut()),
        ("e", "p | ~p", MP(2, 1)),
    )
    check_derivation(d)
    swapped = _derivation(
        ("e", "p -> p", PropTaut()),
        ("e", "(p -> p) -> (p | ~p)", PropTaut()),
        ("e", "p | ~p", MP(1, 2)),
    )
    with pytest.raises(DerivationCheckError):
        check_derivation(swapped)


def test_adjunction_inversion():
    stmts = [
        Statement("e", desugar(_w("p -> A[a] pa"))),
        Statement("e", desugar(_w("(p & p) -> A[a] (pa & <> p)"))),
    ]
    for s in stmts:
        assert adj1_up(adj1_down(s)) == s
    down = [
        Statement("a", desugar(_a("<> p -> pa"))),
        Statement("a", desugar(_a("<> (p & alive(a)) -> (pa & true)"))),
    ]
    for s in down:
        assert adj1_down(adj1_up(s)) == s
    s2 = Statement("a", desugar(_a("pa -> [] p")))
    assert adj2_up(adj2_down(s2)) == s2
    s3 = Statement("e", desugar(_w("E[a] pa -> p")))
    assert adj2_down(adj2_up(s3)) == s3


def test_proptaut_matches_oracle():
    rng = random.Random(37)
    for _ in range(300):
        f = desugar(random_world(rng, SIG, 4))
        assert is_tautology(f) == taut_oracle(f)
    for _ in range(300):
        f = desugar(random_agent(rng, SIG, "a", 4))
        assert is_tautology(f) == taut_oracle(f)
    assert is_tautology(desugar(_w("p | ~p")))
    assert is_tautology(desugar(_w("E[a] pa -> E[a] pa")))
    assert not is_tautology(desugar(_w("E[a] pa -> A[a] pa")))


def test_proptaut_abstraction_shares_modal_nodes():
    # <> A[a] pa -> [] E[a] pa  is propositionally equivalent to
    # [] E[a] pa | [] E[a] ~pa  because the abstraction maps the repeated
    # occurrences of each underlying diamond formula to one variable.
    g = desugar(_a("(<> A[a] pa -> [] E[a] pa) -> ([] E[a] pa | [] E[a] ~pa)"))
    _, n = abstract_propositional(g)
    assert n == 2
    assert is_tautology(g)


def test_proptaut_too_large():
    names = [f"x{i}" for i in range(21)]
    sig = hk.Signature(("a",), {}, tuple(names))
    f = desugar(parser.parse_world(" | ".join(names), sig))
    d = Derivation(sig=sig, lines=(
        DerivationLine(1, Statement("e", f), PropTaut()),))
    with pytest.raises(DerivationCheckError) as err:
        check_derivation(d)
    assert err.value.kind == "PropTautTooLarge"


def _corpus_files():
    return sorted(CORPUS.glob("*.deriv"))


def test_corpus_exists():
    assert len(_corpus_files()) >= 4


@pytest.mark.parametrize("path", [p.name for p in sorted(CORPUS.glob('*.deriv'))])
def test_corpus_checks(path):
    d = parser.parse_derivation((CORPUS / path).read_text())
    check_derivation(d)


@pytest.mark.parametrize("path", [p.name for p in sorted(CORPUS.glob('*.deriv'))])
def test_corpus_soundness(path):
    d = parser.parse_derivation((CORPUS / path).read_text())
    assert soundness_spotcheck(d) is None


def _corrupt(line):
    if isinstance(line.justification, PropTaut):
        bad = AxFunctionality()
    else:
        bad = PropTaut()
    return DerivationLine(index=line.index, statement=line.statement,
                          justification=bad, span=line.span)


@pytest.mark.parametrize("path", [p.name for p in sorted(CORPUS.glob('*.deriv'))])
def test_corpus_rejects_any_single_corruption(path):
    d = parser.parse_derivation((CORPUS / path).read_text())
    for k in range(1, len(d.lines) + 1):
        lines = list(d.lines)
        lines[k - 1] = _corrupt(lines[k - 1])
        corrupted = Derivation(sig=d.sig, lines=tuple(lines))
        with pytest.raises(DerivationCheckError) as err:
            check_derivation(corrupted)
        assert err.value.line == k


def test_forged_line_rejected_before_soundness_runs():
    # alive(a) alone is not derivable over a two-agent signature and is false
    # where a is dead; no justification accepts it, so the kernel refuses the
    # derivation before the semantic spot check would even see it.
    sig2 = hk.Signature(("a", "b"))
    forged = Derivation(sig=sig2, lines=(
        DerivationLine(1, Statement("e", desugar(parser.parse_world(
            "alive(a)", sig2))), AxNonEmptiness()),))
    with pytest.raises(DerivationCheckError):
        proofkernel.soundness_spotcheck(forged)
    # Over a single agent the same formula is the non-emptiness axiom itself
    # and both the kernel and the spot check accept it.
    d = _derivation(("e", "alive(a)", AxNonEmptiness()))
    assert proofkernel.soundness_spotcheck(d) is None


def test_check_line_prefix_independence():
    d = parser.parse_derivation((CORPUS / "locality.deriv").read_text())
    for k in range(1, len(d.lines) + 1):
        check_line(d, k)
