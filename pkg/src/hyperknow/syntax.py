"""Sorted abstract syntax for the two-level logic, plus KB4 syntax.

There are two mutually recursive sorts: *world* formulas are evaluated in a
world of a model (a hyperedge) and *agent* formulas in a local view of one
agent.  ``PossWorld`` ("considers possible") sends an agent formula down to
a world formula, ``SomeView`` ("some view of agent a") sends a world formula
down to an agent formula of that agent's sort.

Formula values are immutable, hashable dataclasses; they can be shared
freely across threads.  Equality ignores source spans.

The core fragment is: atoms, ``true``/``false``, negation, conjunction and
the two modal constructors.  Everything else (``or``, ``->``, the universal
modalities, knowledge sugar) is derived; ``desugar`` rewrites a formula into
the core fragment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import (
    AgentMismatchError,
    SortError,
    UnknownAgentError,
    UnknownAtomError,
    WrongSortAtomError,
)


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range [start, end) with 1-based line/column of start."""

    start: int
    end: int
    line: int
    column: int


def _span():
    return field(default=None, compare=False, repr=False)


class WorldFormula:
    """Marker base class for world-sorted formulas."""

    __match_args__ = ()


class AgentFormula:
    """Marker base class for agent-sorted formulas."""

    __match_args__ = ()


# --- world sort, core -------------------------------------------------------


@dataclass(frozen=True)
class WTrue(WorldFormula):
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class WFalse(WorldFormula):
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class EnvAtom(WorldFormula):
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class WNot(WorldFormula):
    sub: WorldFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class WAnd(WorldFormula):
    left: WorldFormula
    right: WorldFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SomeView(WorldFormula):
    """There exists a view of ``agent`` in this world satisfying ``sub``."""

    agent: str
    sub: AgentFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class WMeta(WorldFormula):
    """Scheme metavariable of world sort (written ``?name``)."""

    name: str
    span: Optional[SourceSpan] = _span()


# --- world sort, derived ----------------------------------------------------


@dataclass(frozen=True)
class WOr(WorldFormula):
    left: WorldFormula
    right: WorldFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class WImplies(WorldFormula):
    left: WorldFormula
    right: WorldFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AllViews(WorldFormula):
    """Every view of ``agent`` in this world satisfies ``sub``.

    Vacuously true where the agent is absent.  Defined as ~E[a]~sub.
    """

    agent: str
    sub: AgentFormula
    span: Optional[SourceSpan] = _span()


# --- agent sort, core -------------------------------------------------------


@dataclass(frozen=True)
class ATrue(AgentFormula):
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AFalse(AgentFormula):
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AgentAtom(AgentFormula):
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ANot(AgentFormula):
    sub: AgentFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AAnd(AgentFormula):
    left: AgentFormula
    right: AgentFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class PossWorld(AgentFormula):
    """The agent considers possible a world satisfying ``sub``.

    The owning agent is not stored: it is supplied by the evaluation point
    (or by the enclosing ``SomeView``/``AllViews``), mirroring the surface
    syntax where ``<>`` carries no agent annotation.
    """

    sub: WorldFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AMeta(AgentFormula):
    """Scheme metavariable of agent sort (written ``?name``)."""

    name: str
    span: Optional[SourceSpan] = _span()


# --- agent sort, derived ----------------------------------------------------


@dataclass(frozen=True)
class AOr(AgentFormula):
    left: AgentFormula
    right: AgentFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AImplies(AgentFormula):
    left: AgentFormula
    right: AgentFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Box(AgentFormula):
    """The agent knows ``sub``: every world containing the current view
    satisfies it.  Defined as ~<>~sub."""

    sub: WorldFormula
    span: Optional[SourceSpan] = _span()


Formula = Union[WorldFormula, AgentFormula]


# --- KB4 --------------------------------------------------------------------


class KB4Formula:
    __match_args__ = ()


@dataclass(frozen=True)
class KB4Atom(KB4Formula):
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class KB4Not(KB4Formula):
    sub: KB4Formula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class KB4And(KB4Formula):
    left: KB4Formula
    right: KB4Formula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class KB4Knows(KB4Formula):
    agent: str
    sub: KB4Formula
    span: Optional[SourceSpan] = _span()


# --- sugar helpers ----------------------------------------------------------


def alive(agent: str) -> WorldFormula:
    """The world contains a view of ``agent``."""
    return SomeView(agent, ATrue())


def ksafe(agent: str, f: WorldFormula) -> WorldFormula:
    """Safe knowledge: some view of the agent knows ``f`` (false where dead)."""
    return SomeView(agent, Box(f))


def kunsafe(agent: str, f: WorldFormula) -> WorldFormula:
    """Unsafe knowledge: every view of the agent knows ``f`` (vacuous where dead)."""
    return AllViews(agent, Box(f))


def implies(left, right):
    if isinstance(left, WorldFormula):
        return WImplies(left, right)
    return AImplies(left, right)


def disj(left, right):
    if isinstance(left, WorldFormula):
        return WOr(left, right)
    return AOr(left, right)


def neg(f):
    return WNot(f) if isinstance(f, WorldFormula) else ANot(f)


def conj(left, right):
    if isinstance(left, WorldFormula):
        return WAnd(left, right)
    return AAnd(left, right)


# --- desugaring -------------------------------------------------------------


def desugar(f):
    """Rewrite into the core fragment. Idempotent; preserves spans."""
    match f:
        case WTrue() | WFalse() | EnvAtom() | WMeta():
            return f
        case ATrue() | AFalse() | AgentAtom() | AMeta():
            return f
        case WNot(x):
            return WNot(desugar(x), span=f.span)
        case ANot(x):
            return ANot(desugar(x), span=f.span)
        case WAnd(l, r):
            return WAnd(desugar(l), desugar(r), span=f.span)
        case AAnd(l, r):
            return AAnd(desugar(l), desugar(r), span=f.span)
        case SomeView(a, x):
            return SomeView(a, desugar(x), span=f.span)
        case PossWorld(x):
            return PossWorld(desugar(x), span=f.span)
        case WOr(l, r):
            return WNot(WAnd(WNot(desugar(l)), WNot(desugar(r))), span=f.span)
        case AOr(l, r):
            return ANot(AAnd(ANot(desugar(l)), ANot(desugar(r))), span=f.span)
        case WImplies(l, r):
            return WNot(WAnd(desugar(l), WNot(desugar(r))), span=f.span)
        case AImplies(l, r):
            return ANot(AAnd(desugar(l), ANot(desugar(r))), span=f.span)
        case AllViews(a, x):
            return WNot(SomeView(a, ANot(desugar(x))), span=f.span)
        case Box(x):
            return ANot(PossWorld(WNot(desugar(x))), span=f.span)
        case KB4Atom() | KB4Not() | KB4And() | KB4Knows():
            return _desugar_kb4(f)
    raise TypeError(f"not a formula: {f!r}")


def _desugar_kb4(f):
    match f:
        case KB4Atom():
            return f
        case KB4Not(x):
            return KB4Not(_desugar_kb4(x), span=f.span)
        case KB4And(l, r):
            return KB4And(_desugar_kb4(l), _desugar_kb4(r), span=f.span)
        case KB4Knows(a, x):
            return KB4Knows(a, _desugar_kb4(x), span=f.span)
    raise TypeError(f"not a KB4 formula: {f!r}")


_CORE_TYPES = (
    WTrue, WFalse, EnvAtom, WNot, WAnd, SomeView, WMeta,
    ATrue, AFalse, AgentAtom, ANot, AAnd, PossWorld, AMeta,
)


def is_core(f) -> bool:
    match f:
        case WNot(x) | ANot(x) | SomeView(_, x) | PossWorld(x):
            return is_core(x)
        case WAnd(l, r) | AAnd(l, r):
            return is_core(l) and is_core(r)
        case _:
            return type(f) in _CORE_TYPES


def modal_depth(f) -> int:
    """Nesting depth of the modal constructors (the two sorts alternate)."""
    match f:
        case WTrue() | WFalse() | EnvAtom() | WMeta() | ATrue() | AFalse() | AgentAtom() | AMeta():
            return 0
        case KB4Atom():
            return 0
        case WNot(x) | ANot(x) | KB4Not(x):
            return modal_depth(x)
        case WAnd(l, r) | AAnd(l, r) | WOr(l, r) | AOr(l, r) | WImplies(l, r) | AImplies(l, r) | KB4And(l, r):
            return max(modal_depth(l), modal_depth(r))
        case SomeView(_, x) | AllViews(_, x) | PossWorld(x) | Box(x) | KB4Knows(_, x):
            return 1 + modal_depth(x)
    raise TypeError(f"not a formula: {f!r}")


def atoms_of(f) -> set:
    """Names of all atoms occurring in the formula."""
    match f:
        case EnvAtom(n) | AgentAtom(n) | KB4Atom(n):
            return {n}
        case WTrue() | WFalse() | ATrue() | AFalse() | WMeta() | AMeta():
            return set()
        case WNot(x) | ANot(x) | KB4Not(x) | SomeView(_, x) | AllViews(_, x) | PossWorld(x) | Box(x) | KB4Knows(_, x):
            return atoms_of(x)
        case WAnd(l, r) | AAnd(l, r) | WOr(l, r) | AOr(l, r) | WImplies(l, r) | AImplies(l, r) | KB4And(l, r):
            return atoms_of(l) | atoms_of(r)
    raise TypeError(f"not a formula: {f!r}")


def metavars_of(f) -> set:
    match f:
        case WMeta(n) | AMeta(n):
            return {n}
        case WTrue() | WFalse() | ATrue() | AFalse() | EnvAtom() | AgentAtom():
            return set()
        case WNot(x) | ANot(x) | SomeView(_, x) | AllViews(_, x) | PossWorld(x) | Box(x):
            return metavars_of(x)
        case WAnd(l, r) | AAnd(l, r) | WOr(l, r) | AOr(l, r) | WImplies(l, r) | AImplies(l, r):
            return metavars_of(l) | metavars_of(r)
    raise TypeError(f"not a formula: {f!r}")


def substitute_metas(f, assignment):
    """Replace metavariable leaves by the formulas in ``assignment``."""
    match f:
        case WMeta(n) | AMeta(n):
            return assignment.get(n, f)
        case WNot(x):
            return WNot(substitute_metas(x, assignment), span=f.span)
        case ANot(x):
            return ANot(substitute_metas(x, assignment), span=f.span)
        case WAnd(l, r):
            return WAnd(substitute_metas(l, assignment), substitute_metas(r, assignment), span=f.span)
        case AAnd(l, r):
            return AAnd(substitute_metas(l, assignment), substitute_metas(r, assignment), span=f.span)
        case WOr(l, r):
            return WOr(substitute_metas(l, assignment), substitute_metas(r, assignment), span=f.span)
        case AOr(l, r):
            return AOr(substitute_metas(l, assignment), substitute_metas(r, assignment), span=f.span)
        case WImplies(l, r):
            return WImplies(substitute_metas(l, assignment), substitute_metas(r, assignment), span=f.span)
        case AImplies(l, r):
            return AImplies(substitute_metas(l, assignment), substitute_metas(r, assignment), span=f.span)
        case SomeView(a, x):
            return SomeView(a, substitute_metas(x, assignment), span=f.span)
        case AllViews(a, x):
            return AllViews(a, substitute_metas(x, assignment), span=f.span)
        case PossWorld(x):
            return PossWorld(substitute_metas(x, assignment), span=f.span)
        case Box(x):
            return Box(substitute_metas(x, assignment), span=f.span)
        case _:
            return f


# --- sort checking ----------------------------------------------------------


def sort_check_world(f, sig, allow_metas=False):
    """Check a world formula against the signature.

    Returns the formula unchanged on success.  Raises a ``SortError``
    subclass pinpointing the offending subterm otherwise.
    """
    _check(f, sig, "world", allow_metas, {})
    return f


def sort_check_agent(f, agent, sig, allow_metas=False):
    """Check an agent formula against the signature at the given sort."""
    if agent not in sig.agents:
        raise UnknownAgentError(f"unknown agent '{agent}'")
    _check(f, sig, agent, allow_metas, {})
    return f


def _check(f, sig, sort, allow_metas, meta_sorts):
    world = sort == "world"
    match f:
        case WTrue() | WFalse() if world:
            return
        case ATrue() | AFalse() if not world:
            return
        case EnvAtom(n) if world:
            owner = sig.sort_of_atom(n)
            if owner == "env":
                return
            if owner is None:
                raise UnknownAtomError(f"unknown atom '{n}'", node=f)
            raise WrongSortAtomError(
                f"atom '{n}' belongs to agent {owner} but occurs in world position", node=f)
        case AgentAtom(n) if not world:
            owner = sig.sort_of_atom(n)
            if owner == sort:
                return
            if owner is None:
                raise UnknownAtomError(f"unknown atom '{n}'", node=f)
            if owner == "env":
                raise WrongSortAtomError(
                    f"environment atom '{n}' occurs in an agent-{sort} position", node=f)
            raise AgentMismatchError(
                f"atom '{n}' belongs to agent {owner} but occurs under agent {sort}", node=f)
        case WMeta(n) if world:
            _bind_meta(f, n, "world", allow_metas, meta_sorts)
            return
        case AMeta(n) if not world:
            _bind_meta(f, n, sort, allow_metas, meta_sorts)
            return
        case WNot(x) if world:
            _check(x, sig, sort, allow_metas, meta_sorts)
            return
        case ANot(x) if not world:
            _check(x, sig, sort, allow_metas, meta_sorts)
            return
        case (WAnd(l, r) | WOr(l, r) | WImplies(l, r)) if world:
            _check(l, sig, sort, allow_metas, meta_sorts)
            _check(r, sig, sort, allow_metas, meta_sorts)
            return
        case (AAnd(l, r) | AOr(l, r) | AImplies(l, r)) if not world:
            _check(l, sig, sort, allow_metas, meta_sorts)
            _check(r, sig, sort, allow_metas, meta_sorts)
            return
        case (SomeView(a, x) | AllViews(a, x)) if world:
            if a not in sig.agents:
                raise UnknownAgentError(f"unknown agent '{a}'", node=f)
            _check(x, sig, a, allow_metas, meta_sorts)
            return
        case (PossWorld(x) | Box(x)) if not world:
            _check(x, sig, "world", allow_metas, meta_sorts)
            return
    # A node of the other sort in this position.
    if isinstance(f, (WorldFormula, AgentFormula)):
        if world:
            raise SortError(f"agent formula used in world position: {f!r}", node=f)
        raise SortError(f"world formula used in agent position: {f!r}", node=f)
    raise TypeError(f"not a formula: {f!r}")


def _bind_meta(node, name, sort, allow_metas, meta_sorts):
    if not allow_metas:
        raise SortError(f"metavariable '?{name}' not allowed here", node=node)
    seen = meta_sorts.get(name)
    if seen is None:
        meta_sorts[name] = sort
    elif seen != sort:
        raise SortError(
            f"metavariable '?{name}' used at sorts {seen} and {sort}", node=node)


def scheme_meta_sorts(f, sig, agent=None):
    """Map each metavariable of a scheme to its sort ('world' or an agent).

    ``agent`` names the scheme's own sort when it is agent-sorted.
    """
    meta_sorts = {}
    if isinstance(f, WorldFormula):
        _check(f, sig, "world", True, meta_sorts)
    else:
        if agent is None:
            raise SortError("agent-sorted scheme needs its owning agent")
        _check(f, sig, agent, True, meta_sorts)
    return meta_sorts


def sort_check_kb4(f, sig):
    """KB4 atoms live in the environment sort; agents must be declared."""
    match f:
        case KB4Atom(n):
            owner = sig.sort_of_atom(n)
            if owner == "env":
                return f
            if owner is None:
                raise UnknownAtomError(f"unknown atom '{n}'", node=f)
            raise WrongSortAtomError(
                f"atom '{n}' belongs to agent {owner}; KB4 atoms must be environment atoms",
                node=f)
        case KB4Not(x):
            sort_check_kb4(x, sig)
            return f
        case KB4And(l, r):
            sort_check_kb4(l, sig)
            sort_check_kb4(r, sig)
            return f
        case KB4Knows(a, x):
            if a not in sig.agents:
                raise UnknownAgentError(f"unknown agent '{a}'", node=f)
            sort_check_kb4(x, sig)
            return f
    raise TypeError(f"not a KB4 formula: {f!r}")
