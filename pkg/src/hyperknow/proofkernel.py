"""A checker for sorted Hilbert-style derivations.

Statements are sorted sequents: world-sorted (``e``) or agent-sorted.  The
rule set: propositional tautologies and modus ponens (which together stand
in for all classical propositional reasoning), the two necessitation rules,
the two monotonicity rules, the four directions of the two adjunctions
linking the modal pairs across sorts, and the three axiom schemes matching
the defining conditions of chromatic hypergraphs.

All matching is structural on desugared core formulas: each rule computes
the expected conclusion from its premise and compares it with the stated
line.  ``PropTaut`` abstracts maximal modal subformulas and atoms into
propositional variables and decides by truth table (exact, capped at 20
variables).

``soundness_spotcheck`` replays every accepted statement against all
enumerated models within bounds; a violation would indicate a kernel bug,
so it is reported as a result rather than raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from .core import Signature
from .errors import DerivationCheckError
from .search import Bounds, enumerate_hypergraphs, iter_valuations
from .semantics import Evaluator, View, World
from .syntax import (
    AAnd,
    AFalse,
    AgentAtom,
    AMeta,
    ANot,
    ATrue,
    EnvAtom,
    PossWorld,
    SomeView,
    SourceSpan,
    WAnd,
    WFalse,
    WMeta,
    WNot,
    WTrue,
    atoms_of,
)

WORLD_SORT = "e"


@dataclass(frozen=True)
class Statement:
    """A sorted sequent: ``sort`` is 'e' or an agent name."""

    sort: str
    formula: object


# --- justifications -----------------------------------------------------------


@dataclass(frozen=True)
class PropTaut:
    pass


@dataclass(frozen=True)
class MP:
    implication: int
    antecedent: int


@dataclass(frozen=True)
class NecA:
    premise: int


@dataclass(frozen=True)
class NecE:
    premise: int


@dataclass(frozen=True)
class RM:
    """Monotonicity: world implication to agent implication under <> or []."""

    premise: int
    modality: str  # "diamond" | "box"


@dataclass(frozen=True)
class RMPrime:
    """Monotonicity: agent implication to world implication under E or A."""

    premise: int
    modality: str  # "some" | "all"


@dataclass(frozen=True)
class Adj1Down:
    premise: int


@dataclass(frozen=True)
class Adj1Up:
    premise: int


@dataclass(frozen=True)
class Adj2Down:
    premise: int


@dataclass(frozen=True)
class Adj2Up:
    premise: int


@dataclass(frozen=True)
class AxSurjectivity:
    pass


@dataclass(frozen=True)
class AxFunctionality:
    pass


@dataclass(frozen=True)
class AxNonEmptiness:
    pass


Justification = Union[
    PropTaut, MP, NecA, NecE, RM, RMPrime,
    Adj1Down, Adj1Up, Adj2Down, Adj2Up,
    AxSurjectivity, AxFunctionality, AxNonEmptiness,
]


@dataclass(frozen=True)
class DerivationLine:
    index: int
    statement: Statement
    justification: Justification
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class Derivation:
    sig: Signature
    lines: Tuple[DerivationLine, ...]


# --- core-shape helpers ----------------------------------------------------------


def _imp_w(l, r):
    return WNot(WAnd(l, WNot(r)))


def _imp_a(l, r):
    return ANot(AAnd(l, ANot(r)))


def _box(x):
    return ANot(PossWorld(WNot(x)))


def _allviews(agent, x):
    return WNot(SomeView(agent, ANot(x)))


def _as_imp_w(f):
    match f:
        case WNot(WAnd(l, WNot(r))):
            return l, r
    return None


def _as_imp_a(f):
    match f:
        case ANot(AAnd(l, ANot(r))):
            return l, r
    return None


def _as_allviews(f):
    match f:
        case WNot(SomeView(a, ANot(x))):
            return a, x
    return None


def _as_box(f):
    match f:
        case ANot(PossWorld(WNot(x))):
            return x
    return None


class _RuleError(Exception):
    def __init__(self, kind, message):
        self.kind = kind
        self.message = message
        super().__init__(message)


def _mismatch(message):
    raise _RuleError("RuleMismatch", message)


def _sort_error(message):
    raise _RuleError("SortError", message)


# --- pure rule transforms (premise -> expected conclusion) -------------------------


def nec_a(premise: Statement, agent: str) -> Statement:
    if premise.sort != WORLD_SORT:
        _sort_error("necessitation to an agent sort needs a world-sorted premise")
    return Statement(agent, _box(premise.formula))


def nec_e(premise: Statement) -> Statement:
    if premise.sort == WORLD_SORT:
        _sort_error("necessitation to the world sort needs an agent-sorted premise")
    return Statement(WORLD_SORT, _allviews(premise.sort, premise.formula))


def rm(premise: Statement, agent: str, modality: str) -> Statement:
    if premise.sort != WORLD_SORT:
        _sort_error("monotonicity under <>/[] needs a world-sorted premise")
    pair = _as_imp_w(premise.formula)
    if pair is None:
        _mismatch("monotonicity premise must be an implication")
    l, r = pair
    if modality == "diamond":
        return Statement(agent, _imp_a(PossWorld(l), PossWorld(r)))
    if modality == "box":
        return Statement(agent, _imp_a(_box(l), _box(r)))
    _mismatch(f"unknown modality '{modality}' for rm")


def rm_prime(premise: Statement, modality: str) -> Statement:
    if premise.sort == WORLD_SORT:
        _sort_error("monotonicity under E/A needs an agent-sorted premise")
    pair = _as_imp_a(premise.formula)
    if pair is None:
        _mismatch("monotonicity premise must be an implication")
    l, r = pair
    a = premise.sort
    if modality == "some":
        return Statement(WORLD_SORT, _imp_w(SomeView(a, l), SomeView(a, r)))
    if modality == "all":
        return Statement(WORLD_SORT, _imp_w(_allviews(a, l), _allviews(a, r)))
    _mismatch(f"unknown modality '{modality}' for rm'")


def adj1_down(premise: Statement) -> Statement:
    """From ``|-e PHI -> A[a] psi`` to ``|-a <> PHI -> psi``."""
    if premise.sort != WORLD_SORT:
        _sort_error("adj1-down needs a world-sorted premise")
    pair = _as_imp_w(premise.formula)
    if pair is None:
        _mismatch("adj1-down premise must be an implication")
    l, r = pair
    univ = _as_allviews(r)
    if univ is None:
        _mismatch("adj1-down premise must end in a universal view quantifier")
    a, psi = univ
    return Statement(a, _imp_a(PossWorld(l), psi))


def adj1_up(premise: Statement) -> Statement:
    """From ``|-a <> PHI -> psi`` back to ``|-e PHI -> A[a] psi``."""
    if premise.sort == WORLD_SORT:
        _sort_error("adj1-up needs an agent-sorted premise")
    pair = _as_imp_a(premise.formula)
    if pair is None:
        _mismatch("adj1-up premise must be an implication")
    l, psi = pair
    match l:
        case PossWorld(phi):
            return Statement(WORLD_SORT, _imp_w(phi, _allviews(premise.sort, psi)))
    _mismatch("adj1-up premise must start with <>")


def adj2_down(premise: Statement) -> Statement:
    """From ``|-a phi -> [] PSI`` to ``|-e E[a] phi -> PSI``."""
    if premise.sort == WORLD_SORT:
        _sort_error("adj2-down needs an agent-sorted premise")
    pair = _as_imp_a(premise.formula)
    if pair is None:
        _mismatch("adj2-down premise must be an implication")
    phi, r = pair
    psi = _as_box(r)
    if psi is None:
        _mismatch("adj2-down premise must end in []")
    return Statement(WORLD_SORT, _imp_w(SomeView(premise.sort, phi), psi))


def adj2_up(premise: Statement) -> Statement:
    """From ``|-e E[a] phi -> PSI`` back to ``|-a phi -> [] PSI``."""
    if premise.sort != WORLD_SORT:
        _sort_error("adj2-up needs a world-sorted premise")
    pair = _as_imp_w(premise.formula)
    if pair is None:
        _mismatch("adj2-up premise must be an implication")
    l, psi = pair
    match l:
        case SomeView(a, phi):
            return Statement(a, _imp_a(phi, _box(psi)))
    _mismatch("adj2-up premise must start with an existential view quantifier")


# --- axiom matching -----------------------------------------------------------------


def _match_surjectivity(stmt: Statement):
    if stmt.sort == WORLD_SORT:
        _sort_error("the surjectivity axiom is agent-sorted")
    pair = _as_imp_a(stmt.formula)
    if pair is None:
        _mismatch("surjectivity axiom must be an implication")
    phi, r = pair
    match r:
        case PossWorld(SomeView(a, phi2)) if a == stmt.sort and phi2 == phi:
            return
    _mismatch("surjectivity axiom must have the shape phi -> <> E[a] phi")


def _match_functionality(stmt: Statement):
    if stmt.sort == WORLD_SORT:
        _sort_error("the functionality axiom is agent-sorted")
    pair = _as_imp_a(stmt.formula)
    if pair is None:
        _mismatch("functionality axiom must be an implication")
    l, phi = pair
    match l:
        case PossWorld(SomeView(a, phi2)) if a == stmt.sort and phi2 == phi:
            return
    _mismatch("functionality axiom must have the shape <> E[a] phi -> phi")


def _ne_formula(sig: Signature):
    out = SomeView(sig.agents[0], ATrue())
    for a in sig.agents[1:]:
        out = WNot(WAnd(WNot(out), WNot(SomeView(a, ATrue()))))
    return out


def _match_non_emptiness(stmt: Statement, sig: Signature):
    if stmt.sort != WORLD_SORT:
        _sort_error("the non-emptiness axiom is world-sorted")
    if stmt.formula != _ne_formula(sig):
        _mismatch("non-emptiness axiom must be the disjunction of alive(a) "
                  "over all declared agents, in declaration order")


# --- propositional tautologies --------------------------------------------------------

PROPTAUT_MAX_VARS = 20


def abstract_propositional(f):
    """Propositional skeleton: maximal modal subformulas and atoms become
    variables.  Returns (skeleton, variable count)."""
    table: Dict[object, int] = {}

    def walk(g):
        match g:
            case WTrue() | ATrue():
                return ("const", True)
            case WFalse() | AFalse():
                return ("const", False)
            case WNot(x) | ANot(x):
                return ("not", walk(x))
            case WAnd(l, r) | AAnd(l, r):
                return ("and", walk(l), walk(r))
            case EnvAtom(_) | AgentAtom(_) | SomeView(_, _) | PossWorld(_) | WMeta(_) | AMeta(_):
                if g not in table:
                    table[g] = len(table)
                return ("var", table[g])
        raise _RuleError("SortError", f"not a core formula: {g!r}")

    return walk(f), len(table)


def _eval_skeleton(sk, bits) -> bool:
    tag = sk[0]
    if tag == "const":
        return sk[1]
    if tag == "var":
        return bool(bits >> sk[1] & 1)
    if tag == "not":
        return not _eval_skeleton(sk[1], bits)
    return _eval_skeleton(sk[1], bits) and _eval_skeleton(sk[2], bits)


def is_tautology(f) -> bool:
    """Exact truth-table decision on the propositional abstraction."""
    sk, n = abstract_propositional(f)
    if n > PROPTAUT_MAX_VARS:
        raise _RuleError(
            "PropTautTooLarge",
            f"{n} abstracted variables exceed the cap of {PROPTAUT_MAX_VARS}")
    return all(_eval_skeleton(sk, bits) for bits in range(1 << n))


# --- the checker ------------------------------------------------------------------


def _premise(lines, k, i):
    if not (1 <= i < k):
        raise _RuleError("BadReference",
                         f"premise {i} does not precede line {k}")
    return lines[i - 1].statement


def check_line(d: Derivation, k: int) -> None:
    """Check line ``k`` (1-based) against the earlier lines.

    Raises :class:`DerivationCheckError` when the justification does not
    produce exactly the stated statement.
    """
    line = d.lines[k - 1]
    stmt = line.statement
    just = line.justification
    try:
        match just:
            case PropTaut():
                if not is_tautology(stmt.formula):
                    raise _RuleError("NotATautology",
                                     "the propositional abstraction is falsifiable")
            case MP(i, j):
                impl = _premise(d.lines, k, i)
                ante = _premise(d.lines, k, j)
                if impl.sort != stmt.sort or ante.sort != stmt.sort:
                    _sort_error("modus ponens premises must share the line's sort")
                pair = _as_imp_w(impl.formula) if stmt.sort == WORLD_SORT \
                    else _as_imp_a(impl.formula)
                if pair is None:
                    _mismatch(f"line {i} is not an implication")
                l, r = pair
                if ante.formula != l:
                    _mismatch(f"line {j} is not the antecedent of line {i}")
                if stmt.formula != r:
                    _mismatch("stated formula is not the consequent of the implication")
            case NecA(i):
                expected = nec_a(_premise(d.lines, k, i), stmt.sort)
                _expect(stmt, expected)
            case NecE(i):
                expected = nec_e(_premise(d.lines, k, i))
                _expect(stmt, expected)
            case RM(i, modality):
                if stmt.sort == WORLD_SORT:
                    _sort_error("monotonicity under <>/[] concludes at an agent sort")
                expected = rm(_premise(d.lines, k, i), stmt.sort, modality)
                _expect(stmt, expected)
            case RMPrime(i, modality):
                expected = rm_prime(_premise(d.lines, k, i), modality)
                _expect(stmt, expected)
            case Adj1Down(i):
                expected = adj1_down(_premise(d.lines, k, i))
                _expect(stmt, expected)
            case Adj1Up(i):
                expected = adj1_up(_premise(d.lines, k, i))
                _expect(stmt, expected)
            case Adj2Down(i):
                expected = adj2_down(_premise(d.lines, k, i))
                _expect(stmt, expected)
            case Adj2Up(i):
                expected = adj2_up(_premise(d.lines, k, i))
                _expect(stmt, expected)
            case AxSurjectivity():
                _match_surjectivity(stmt)
            case AxFunctionality():
                _match_functionality(stmt)
            case AxNonEmptiness():
                _match_non_emptiness(stmt, d.sig)
            case _:
                raise _RuleError("RuleMismatch", f"unknown justification {just!r}")
    except _RuleError as err:
        raise DerivationCheckError(k, err.kind, err.message) from None


def _expect(stmt: Statement, expected: Statement):
    if stmt.sort != expected.sort:
        _sort_error(f"expected sort {expected.sort}, stated sort {stmt.sort}")
    if stmt.formula != expected.formula:
        _mismatch("stated formula differs from the rule's conclusion")


def check_derivation(d: Derivation) -> None:
    """Check every line in order; raises at the first failing line."""
    for k in range(1, len(d.lines) + 1):
        check_line(d, k)


# --- semantic spot check ----------------------------------------------------------


@dataclass(frozen=True)
class SoundnessCounterexample:
    line: int
    model: object
    point: object


def soundness_spotcheck(d: Derivation, bounds: Optional[Bounds] = None
                        ) -> Optional[SoundnessCounterexample]:
    """Replay each accepted line against all models within bounds.

    World statements are checked at every edge, agent statements at every
    view of that agent.  Valuations vary only over the atoms each line
    mentions (exact: other atoms cannot influence it).  Returns the first
    violation or None; a violation would mean the kernel itself is unsound.
    """
    check_derivation(d)
    sig = d.sig
    if bounds is None:
        bounds = Bounds(agents=len(sig.agents), views=2, edges=3)
    for line in d.lines:
        stmt = line.statement
        names = atoms_of(stmt.formula)
        vary_agent = {a: tuple(n for n in sig.atoms_for(a) if n in names)
                      for a in sig.agents}
        vary_env = tuple(n for n in sig.env_atoms if n in names)
        for h in enumerate_hypergraphs(bounds, sig):
            for model in iter_valuations(h, vary_agent, vary_env):
                ev = Evaluator(model)
                if stmt.sort == WORLD_SORT:
                    for e in model.edges:
                        if not ev.sat_world(e, stmt.formula):
                            return SoundnessCounterexample(line.index, model, World(e))
                else:
                    for v in model.views_of(stmt.sort):
                        if not ev.sat_agent(stmt.sort, v, stmt.formula):
                            return SoundnessCounterexample(
                                line.index, model, View(stmt.sort, v))
    return None
