"""Bounded enumeration of models, validity sweeps, and countermodel search.

``enumerate_hypergraphs``/``enumerate_models`` stream every structure within
the bounds, deterministically, with no isomorphism elimination (duplicates
are harmless for validity sweeps and canonicalization would cost more than
it saves at these sizes).

``check_scheme`` decides whether a scheme (a formula with ``?metavariable``
leaves) holds at every point of every model within bounds.  Instead of
instantiating metavariables with concrete formulas one by one, it sweeps the
*extensions* a metavariable can take: a scheme instance's truth value
depends on an instantiated subformula only through the set of points
satisfying it, and every set of points is realized by some atom under some
valuation within bounds.  The quotient is therefore exact (and independent
of any instantiation-depth cutoff) as soon as the atom alphabet offers one
atom per metavariable of each sort, which ``check_scheme`` enforces.
Returned countermodels carry a concrete witness: each metavariable is
assigned a fresh atom whose valuation is the falsifying extension, and the
verdict is re-checked through the ordinary evaluator before being returned.

``find_countermodel`` runs the same sweep over the valuations of a concrete
formula's atoms, then greedily minimizes the witness (drop edges, then
views, while the formula stays false).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .core import (
    ChromaticHypergraph,
    ChromaticHypergraphModel,
    Signature,
    build_model,
)
from .errors import BoundsError, SortError
from .frames import PartialEpistemicFrame, PartialEpistemicModel, build_frame, build_frame_model
from .semantics import Evaluator, EvalPoint, View, World
from .syntax import (
    AAnd,
    AFalse,
    AgentAtom,
    AgentFormula,
    AImplies,
    AllViews,
    AMeta,
    ANot,
    AOr,
    ATrue,
    Box,
    EnvAtom,
    KB4And,
    KB4Atom,
    KB4Knows,
    KB4Not,
    PossWorld,
    SomeView,
    WAnd,
    WFalse,
    WImplies,
    WMeta,
    WNot,
    WorldFormula,
    WTrue,
    alive,
    desugar,
    disj,
    ksafe,
    kunsafe,
    scheme_meta_sorts,
    substitute_metas,
)

_AGENT_POOL = "abcdefghijklmnopqrstuvwxyz"
_ENV_CAPS = {"agents": 3, "views": 3, "edges": 5}


def hard_caps() -> Dict[str, int]:
    """Default caps keep the worst-case sweep in the minutes range.

    ``HYPERKNOW_MAX_BOUNDS`` (e.g. ``agents=4,views=4,edges=6``) raises them;
    beyond the defaults is unsupported territory.
    """
    caps = dict(_ENV_CAPS)
    raw = os.environ.get("HYPERKNOW_MAX_BOUNDS", "")
    for part in filter(None, (p.strip() for p in raw.split(","))):
        key, _, value = part.partition("=")
        if key.strip() in caps and value.strip().isdigit():
            caps[key.strip()] = int(value.strip())
    return caps


@dataclass(frozen=True)
class Bounds:
    """Structural bounds for enumeration and scheme sweeps."""

    agents: int = 2
    views: int = 2
    edges: int = 4
    agent_atoms: int = 2
    env_atoms: int = 2
    depth: int = 2

    def validate(self):
        caps = hard_caps()
        problems = []
        if self.agents < 1 or self.views < 1 or self.edges < 1:
            problems.append("agents, views and edges bounds must be positive")
        if self.agent_atoms < 0 or self.env_atoms < 0 or self.depth < 0:
            problems.append("atom and depth bounds must be non-negative")
        for name in ("agents", "views", "edges"):
            if getattr(self, name) > caps[name]:
                problems.append(
                    f"{name} bound {getattr(self, name)} exceeds hard cap {caps[name]} "
                    "(set HYPERKNOW_MAX_BOUNDS to raise it)")
        if problems:
            raise BoundsError("; ".join(problems))


def default_agents(n: int) -> Tuple[str, ...]:
    if n > len(_AGENT_POOL):
        raise BoundsError(f"at most {len(_AGENT_POOL)} agents supported")
    return tuple(_AGENT_POOL[:n])


def signature_for_bounds(b: Bounds) -> Signature:
    """The sweep alphabet: ``p<i>_<agent>`` per agent, ``q<i>`` for the world."""
    agents = default_agents(b.agents)
    return Signature(
        agents,
        {a: tuple(f"p{i + 1}_{a}" for i in range(b.agent_atoms)) for a in agents},
        tuple(f"q{i + 1}" for i in range(b.env_atoms)),
    )


# --- structure enumeration ------------------------------------------------------


def enumerate_hypergraphs(b: Bounds, sig: Optional[Signature] = None) -> Iterator[ChromaticHypergraph]:
    """Every chromatic hypergraph within bounds, at least once, in a fixed order.

    View counts range from 0 to the bound per agent (an agent may exist in
    the signature yet hold no view anywhere); edge counts range from 1 to
    the bound.
    """
    b.validate()
    if sig is None:
        sig = Signature(default_agents(b.agents))
    agents = sig.agents
    for view_counts in itertools.product(range(b.views + 1), repeat=len(agents)):
        views = {a: tuple(f"{a}{i + 1}" for i in range(c))
                 for a, c in zip(agents, view_counts)}
        rows = [
            row
            for row in itertools.product(
                *[(None, *views[a]) for a in agents])
            if any(v is not None for v in row)
        ]
        # Edge-less structures are excluded: a model has at least one world.
        for k in range(1, b.edges + 1):
            for seq in itertools.product(rows, repeat=k):
                covered = {(a, v) for row in seq for a, v in zip(agents, row)
                           if v is not None}
                if len(covered) != sum(view_counts):
                    continue
                edges = tuple(f"e{i + 1}" for i in range(k))
                proj = {
                    (e, a): v
                    for e, row in zip(edges, seq)
                    for a, v in zip(agents, row)
                    if v is not None
                }
                yield ChromaticHypergraph(sig=sig, views=views, edges=edges, proj=proj)


def _subsets(items: Tuple[str, ...]) -> List[frozenset]:
    out = []
    for mask in range(1 << len(items)):
        out.append(frozenset(x for i, x in enumerate(items) if mask >> i & 1))
    return out


def iter_valuations(h: ChromaticHypergraph, vary_agent=None, vary_env=None
                    ) -> Iterator[ChromaticHypergraphModel]:
    """All models on ``h`` whose valuations vary over the given atoms only.

    Atoms not listed are left empty.  Varying only the atoms a formula
    mentions is exact for validity checks there.
    """
    sig = h.sig
    if vary_agent is None:
        vary_agent = {a: sig.atoms_for(a) for a in sig.agents}
    if vary_env is None:
        vary_env = sig.env_atoms
    agent_axes = []
    for a in sig.agents:
        for atom in vary_agent.get(a, ()):
            agent_axes.append((a, atom, _subsets(h.views.get(a, ()))))
    env_axes = [(atom, _subsets(h.edges)) for atom in vary_env]
    for choice in itertools.product(*[ax[-1] for ax in agent_axes + env_axes]):
        val_agent = {a: {atom: frozenset() for atom in sig.atoms_for(a)} for a in sig.agents}
        val_env = {atom: frozenset() for atom in sig.env_atoms}
        for (a, atom, _), members in zip(agent_axes, choice[:len(agent_axes)]):
            val_agent[a][atom] = members
        for (atom, _), members in zip(env_axes, choice[len(agent_axes):]):
            val_env[atom] = members
        yield ChromaticHypergraphModel(hypergraph=h, val_agent=val_agent, val_env=val_env)


def enumerate_models(b: Bounds, sig: Optional[Signature] = None
                     ) -> Iterator[ChromaticHypergraphModel]:
    """Every model within bounds: the hypergraph stream crossed with every
    valuation of the full atom alphabet."""
    if sig is None:
        sig = signature_for_bounds(b)
    for h in enumerate_hypergraphs(b, sig):
        yield from iter_valuations(h)


def enumerate_frames(agents: Tuple[str, ...], max_worlds: int) -> Iterator[PartialEpistemicFrame]:
    """Every partial epistemic frame on up to ``max_worlds`` worlds."""
    for m in range(max_worlds + 1):
        worlds = tuple(f"w{i + 1}" for i in range(m))
        per_agent = []
        for _ in agents:
            options = []
            for subset_mask in range(1 << m):
                subset = [worlds[i] for i in range(m) if subset_mask >> i & 1]
                for partition in _set_partitions(subset):
                    options.append(tuple(tuple(cls) for cls in partition))
            per_agent.append(options)
        for combo in itertools.product(*per_agent):
            classes = dict(zip(agents, combo))
            covered = set()
            for a in agents:
                for cls in classes[a]:
                    covered.update(cls)
            if len(covered) != m:
                continue
            yield build_frame(agents, worlds, classes)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def enumerate_frame_models(agents, max_worlds, atoms) -> Iterator[PartialEpistemicModel]:
    atoms = tuple(atoms)
    for fr in enumerate_frames(agents, max_worlds):
        axes = [_subsets(fr.worlds) for _ in atoms]
        for choice in itertools.product(*axes):
            val = dict(zip(atoms, choice))
            yield build_frame_model(fr.agents, fr.worlds, fr.classes, atoms, val)


def enumerate_kb4_formulas(atoms, agents, max_size=5, max_modal_depth=2,
                           commutative_dedup=False):
    """All KB4 formulas up to ``max_size`` nodes and the modal depth cap,
    in size-lexicographic order, deduplicated structurally.

    ``commutative_dedup`` keeps only one of each ``And`` pair (sound for
    agreement-style sweeps: every clause treats the conjuncts symmetrically).
    """
    by_size = {1: [(KB4Atom(a), 0) for a in atoms]}
    for size in range(2, max_size + 1):
        bucket = []
        for f, d in by_size[size - 1]:
            bucket.append((KB4Not(f), d))
            for ag in agents:
                if d < max_modal_depth:
                    bucket.append((KB4Knows(ag, f), d + 1))
        for left_size in range(1, size - 1):
            right_size = size - 1 - left_size
            if right_size < 1:
                continue
            if commutative_dedup and left_size > right_size:
                continue
            for li, (l, dl) in enumerate(by_size[left_size]):
                for ri, (r, dr) in enumerate(by_size[right_size]):
                    if commutative_dedup and left_size == right_size and ri < li:
                        continue
                    bucket.append((KB4And(l, r), max(dl, dr)))
        by_size[size] = bucket
    seen = set()
    out = []
    for size in range(1, max_size + 1):
        for f, _ in by_size[size]:
            if f not in seen:
                seen.add(f)
                out.append(f)
    return out


# --- extension-mask evaluation ----------------------------------------------------


class _MaskContext:
    """Per-hypergraph tables for bitmask extension evaluation."""

    __slots__ = ("h", "edges", "edge_index", "all_edges", "views", "view_index",
                 "all_views", "fiber_masks", "edge_view")

    def __init__(self, h: ChromaticHypergraph):
        self.h = h
        self.edges = h.edges
        self.edge_index = {e: i for i, e in enumerate(h.edges)}
        self.all_edges = (1 << len(h.edges)) - 1
        self.views = {a: h.views.get(a, ()) for a in h.sig.agents}
        self.view_index = {
            a: {v: i for i, v in enumerate(vs)} for a, vs in self.views.items()}
        self.all_views = {a: (1 << len(vs)) - 1 for a, vs in self.views.items()}
        self.fiber_masks = {}
        for a in h.sig.agents:
            masks = []
            for v in self.views[a]:
                mask = 0
                for e in h.worlds_of_view(a, v):
                    mask |= 1 << self.edge_index[e]
                masks.append(mask)
            self.fiber_masks[a] = masks


def _wext(f, ctx: _MaskContext, env: Dict[str, int]) -> int:
    match f:
        case WTrue():
            return ctx.all_edges
        case WFalse():
            return 0
        case EnvAtom(n) | WMeta(n):
            return env[n]
        case WNot(x):
            return ctx.all_edges ^ _wext(x, ctx, env)
        case WAnd(l, r):
            return _wext(l, ctx, env) & _wext(r, ctx, env)
        case SomeView(a, x):
            y = _aext(x, a, ctx, env)
            mask = 0
            fibers = ctx.fiber_masks[a]
            i = 0
            while y:
                if y & 1:
                    mask |= fibers[i]
                y >>= 1
                i += 1
            return mask
    raise SortError(f"not a core world formula: {f!r}", node=f)


def _aext(f, agent: str, ctx: _MaskContext, env: Dict[str, int]) -> int:
    match f:
        case ATrue():
            return ctx.all_views[agent]
        case AFalse():
            return 0
        case AgentAtom(n) | AMeta(n):
            return env[n]
        case ANot(x):
            return ctx.all_views[agent] ^ _aext(x, agent, ctx, env)
        case AAnd(l, r):
            return _aext(l, agent, ctx, env) & _aext(r, agent, ctx, env)
        case PossWorld(x):
            w = _wext(x, ctx, env)
            mask = 0
            for i, fiber in enumerate(ctx.fiber_masks[agent]):
                if fiber & w:
                    mask |= 1 << i
            return mask
    raise SortError(f"not a core agent formula: {f!r}", node=f)


@lru_cache(maxsize=8)
def _structures(agents: Tuple[str, ...], views: int, edges: int):
    b = Bounds(agents=len(agents), views=views, edges=edges)
    sig = Signature(agents)
    return tuple((h, _MaskContext(h)) for h in enumerate_hypergraphs(b, sig))


# --- verdicts -----------------------------------------------------------------------


@dataclass(frozen=True)
class ValidWithinBounds:
    models_checked: int = 0


@dataclass(frozen=True)
class Countermodel:
    model: ChromaticHypergraphModel
    point: EvalPoint
    assignment: Dict[str, object] = field(default_factory=dict)


Verdict = Union[ValidWithinBounds, Countermodel]


def _ordered_metas(f, acc):
    match f:
        case WMeta(n) | AMeta(n):
            if n not in acc:
                acc.append(n)
        case WNot(x) | ANot(x) | SomeView(_, x) | PossWorld(x):
            _ordered_metas(x, acc)
        case WAnd(l, r) | AAnd(l, r):
            _ordered_metas(l, acc)
            _ordered_metas(r, acc)
    return acc


def check_scheme(scheme, b: Bounds, agent: Optional[str] = None) -> Verdict:
    """Sweep a scheme over every model within bounds.

    World-sorted schemes are checked at every edge, agent-sorted schemes at
    every view of ``agent`` (required for the latter).  Returns the first
    countermodel in stream order, re-validated through the evaluator, or
    ``ValidWithinBounds``.
    """
    b.validate()
    sig = signature_for_bounds(b)
    world_scheme = isinstance(scheme, WorldFormula)
    if not world_scheme and agent is None:
        raise SortError("agent-sorted scheme: pass the owning agent")
    if not world_scheme and agent not in sig.agents:
        raise SortError(f"agent '{agent}' is outside the bounds alphabet")
    meta_sorts = scheme_meta_sorts(scheme, sig, agent=agent)
    core = desugar(scheme)
    metas = _ordered_metas(core, [])

    # Concrete atoms occurring in the scheme are swept exactly like
    # metavariables: their valuations are free across the enumerated models.
    atom_sorts = _atom_sorts(core, "world" if world_scheme else agent, {})
    sweep_names = metas + [n for n in atom_sorts if n not in metas]
    sweep_sorts = dict(meta_sorts)
    sweep_sorts.update(atom_sorts)

    # One fresh atom per metavariable makes the extension sweep exactly the
    # sweep over all instantiations under all valuations.
    witness_atom: Dict[str, object] = {}
    env_pool = [n for n in sig.env_atoms if n not in atom_sorts]
    agent_pool = {a: [n for n in sig.atoms_for(a) if n not in atom_sorts]
                  for a in sig.agents}
    for name in metas:
        sort = meta_sorts[name]
        if sort == "world":
            if not env_pool:
                raise BoundsError(
                    "scheme checking needs one environment atom per world metavariable")
            witness_atom[name] = EnvAtom(env_pool.pop(0))
        else:
            if not agent_pool[sort]:
                raise BoundsError(
                    f"scheme checking needs one atom of agent {sort} per metavariable")
            witness_atom[name] = AgentAtom(agent_pool[sort].pop(0))
    for name, sort in atom_sorts.items():
        witness_atom[name] = EnvAtom(name) if sort == "world" else AgentAtom(name)

    checked = 0
    for h, ctx in _structures(sig.agents, b.views, b.edges):
        domains = []
        for name in sweep_names:
            sort = sweep_sorts[name]
            size = len(ctx.edges) if sort == "world" else len(ctx.views[sort])
            domains.append(range(1 << size))
        for assignment in itertools.product(*domains):
            env = dict(zip(sweep_names, assignment))
            checked += 1
            if world_scheme:
                ext = _wext(core, ctx, env)
                full = ctx.all_edges
            else:
                ext = _aext(core, agent, ctx, env)
                full = ctx.all_views[agent]
            if ext == full:
                continue
            missing = (full & ~ext)
            idx = (missing & -missing).bit_length() - 1
            if world_scheme:
                point = World(ctx.edges[idx])
            else:
                point = View(agent, ctx.views[agent][idx])
            model = _witness_model(sig, h, ctx, sweep_names, sweep_sorts,
                                   witness_atom, env)
            formula_assignment = {name: witness_atom[name] for name in metas}
            _revalidate(model, point, core, formula_assignment)
            return Countermodel(model=model, point=point, assignment=formula_assignment)
    return ValidWithinBounds(models_checked=checked)


def _witness_model(sig, h, ctx, names, meta_sorts, witness_atom, env):
    val_agent = {a: {atom: frozenset() for atom in sig.atoms_for(a)} for a in sig.agents}
    val_env = {atom: frozenset() for atom in sig.env_atoms}
    for name in names:
        mask = env[name]
        sort = meta_sorts[name]
        atom = witness_atom[name]
        if isinstance(atom, EnvAtom):
            members = frozenset(e for i, e in enumerate(ctx.edges) if mask >> i & 1)
            val_env[atom.name] = members
        else:
            views = ctx.views[sort]
            members = frozenset(v for i, v in enumerate(views) if mask >> i & 1)
            val_agent[sort][atom.name] = members
    return build_model(sig, h.views, h.edges, h.proj, val_agent, val_env)


def _revalidate(model, point, core, formula_assignment):
    instance = substitute_metas(core, formula_assignment)
    if Evaluator(model).sat(point, instance):
        raise AssertionError(
            "internal error: extension sweep and evaluator disagree on a countermodel")


# --- concrete-formula countermodel search ------------------------------------------


def _atom_sorts(f, sort, acc):
    match f:
        case EnvAtom(n):
            acc[n] = "world"
        case AgentAtom(n):
            acc[n] = sort
        case WNot(x) | ANot(x):
            _atom_sorts(x, sort, acc)
        case WAnd(l, r) | AAnd(l, r):
            _atom_sorts(l, sort, acc)
            _atom_sorts(r, sort, acc)
        case SomeView(a, x):
            _atom_sorts(x, a, acc)
        case PossWorld(x):
            _atom_sorts(x, "world", acc)
    return acc


def _formula_agents(f, acc):
    match f:
        case SomeView(a, x):
            acc.add(a)
            _formula_agents(x, acc)
        case WNot(x) | ANot(x) | PossWorld(x):
            _formula_agents(x, acc)
        case WAnd(l, r) | AAnd(l, r):
            _formula_agents(l, acc)
            _formula_agents(r, acc)
    return acc


def find_countermodel(f: WorldFormula, b: Bounds) -> Verdict:
    """Bounded validity check for a concrete world formula.

    A returned countermodel is locally minimal: no single edge or view
    deletion keeps the formula false at the witness world.
    """
    b.validate()
    core = desugar(f)
    agents = default_agents(b.agents)
    extra = _formula_agents(core, set()) - set(agents)
    if extra:
        raise BoundsError(
            f"formula mentions agents {sorted(extra)} outside the bounds alphabet {list(agents)}")
    atom_sorts = _atom_sorts(core, "world", {})
    agent_atoms: Dict[str, List[str]] = {a: [] for a in agents}
    env_atoms: List[str] = []
    for name, sort in atom_sorts.items():
        if sort == "world":
            env_atoms.append(name)
        else:
            agent_atoms[sort].append(name)
    sig = Signature(agents, {a: tuple(v) for a, v in agent_atoms.items()}, tuple(env_atoms))

    names = list(atom_sorts)
    checked = 0
    for h, plain_ctx in _structures(agents, b.views, b.edges):
        h = ChromaticHypergraph(sig=sig, views=h.views, edges=h.edges, proj=h.proj)
        ctx = plain_ctx
        domains = []
        for name in names:
            sort = atom_sorts[name]
            size = len(ctx.edges) if sort == "world" else len(ctx.views[sort])
            domains.append(range(1 << size))
        for assignment in itertools.product(*domains):
            env = dict(zip(names, assignment))
            checked += 1
            ext = _wext(core, ctx, env)
            if ext == ctx.all_edges:
                continue
            missing = ctx.all_edges & ~ext
            idx = (missing & -missing).bit_length() - 1
            edge = ctx.edges[idx]
            val_agent = {a: {} for a in agents}
            val_env = {}
            for name in names:
                mask = env[name]
                sort = atom_sorts[name]
                if sort == "world":
                    val_env[name] = frozenset(
                        e for i, e in enumerate(ctx.edges) if mask >> i & 1)
                else:
                    val_agent[sort][name] = frozenset(
                        v for i, v in enumerate(ctx.views[sort]) if mask >> i & 1)
            model = build_model(sig, h.views, h.edges, h.proj, val_agent, val_env)
            model, edge = _minimize(model, edge, core)
            if Evaluator(model).sat_world(edge, core):
                raise AssertionError("internal error: minimized countermodel re-checks true")
            return Countermodel(model=model, point=World(edge), assignment={})
    return ValidWithinBounds(models_checked=checked)


def _drop_edge(m: ChromaticHypergraphModel, edge: str) -> Optional[ChromaticHypergraphModel]:
    h = m.hypergraph
    edges = tuple(e for e in h.edges if e != edge)
    proj = {(e, a): v for (e, a), v in h.proj.items() if e != edge}
    views = {}
    for a in h.sig.agents:
        keep = tuple(v for v in h.views.get(a, ())
                     if any(proj.get((e, a)) == v for e in edges))
        views[a] = keep
    val_agent = {
        a: {atom: frozenset(v for v in members if v in views[a])
            for atom, members in m.val_agent[a].items()}
        for a in h.sig.agents
    }
    val_env = {atom: frozenset(e for e in members if e != edge)
               for atom, members in m.val_env.items()}
    try:
        return build_model(h.sig, views, edges, proj, val_agent, val_env)
    except Exception:
        return None


def _drop_view(m: ChromaticHypergraphModel, agent: str, view: str
               ) -> Optional[ChromaticHypergraphModel]:
    h = m.hypergraph
    proj = {(e, a): v for (e, a), v in h.proj.items()
            if not (a == agent and v == view)}
    for e in h.edges:
        if not any((e, a) in proj for a in h.sig.agents):
            return None  # would orphan a world
    views = dict(h.views)
    views[agent] = tuple(v for v in h.views.get(agent, ()) if v != view)
    val_agent = {
        a: {atom: frozenset(v for v in members if v != view or a != agent)
            for atom, members in m.val_agent[a].items()}
        for a in h.sig.agents
    }
    try:
        return build_model(h.sig, views, h.edges, proj, val_agent, m.val_env)
    except Exception:
        return None


def _minimize(model, edge, core):
    """Greedy local minimization: edges first, then views, until fixpoint."""
    changed = True
    while changed:
        changed = False
        for e in model.edges:
            if e == edge:
                continue
            reduced = _drop_edge(model, e)
            if reduced is not None and not Evaluator(reduced).sat_world(edge, core):
                model = reduced
                changed = True
                break
        if changed:
            continue
        for a in model.sig.agents:
            for v in model.views_of(a):
                reduced = _drop_view(model, a, v)
                if reduced is not None and not Evaluator(reduced).sat_world(edge, core):
                    model = reduced
                    changed = True
                    break
            if changed:
                break
    return model, edge


# --- the scheme library --------------------------------------------------------------


def scheme_surjectivity(agent="a") -> AgentFormula:
    phi = AMeta("phi")
    return AImplies(phi, PossWorld(SomeView(agent, phi)))


def scheme_functionality(agent="a") -> AgentFormula:
    phi = AMeta("phi")
    return AImplies(PossWorld(SomeView(agent, phi)), phi)


def scheme_non_emptiness(agents) -> WorldFormula:
    out = alive(agents[0])
    for a in agents[1:]:
        out = disj(out, alive(a))
    return out


def interaction_schemes(agent="a"):
    """The six derivable interaction schemes, keyed 1..6."""
    phi = AMeta("phi")
    Phi = WMeta("PHI")
    return {
        1: WImplies(SomeView(agent, phi), AllViews(agent, phi)),
        2: AImplies(Box(Phi), Box(SomeView(agent, Box(Phi)))),
        3: WImplies(SomeView(agent, Box(Phi)), Phi),
        4: WImplies(Phi, AllViews(agent, PossWorld(Phi))),
        5: AImplies(phi, Box(SomeView(agent, phi))),
        6: AImplies(Box(Phi), PossWorld(Phi)),
    }


def locality_scheme(agent="a") -> AgentFormula:
    """An agent decides every formula about itself."""
    phi = AMeta("phi")
    return AOr(Box(SomeView(agent, phi)), Box(SomeView(agent, ANot(phi))))


def knowledge_schemes(agent="a"):
    """K/T/B/4 style schemes for the two world-level knowledge operators,
    plus the failure-of-necessitation formula for the safe one."""
    Phi = WMeta("PHI")
    Psi = WMeta("PSI")
    ku = lambda x: kunsafe(agent, x)
    ks = lambda x: ksafe(agent, x)
    return {
        "kunsafe_k": WImplies(ku(WImplies(Phi, Psi)), WImplies(ku(Phi), ku(Psi))),
        "kunsafe_b": WImplies(Phi, ku(WNot(ku(WNot(Phi))))),
        "kunsafe_4": WImplies(ku(Phi), ku(ku(Phi))),
        "ksafe_k": WImplies(ks(WImplies(Phi, Psi)), WImplies(ks(Phi), ks(Psi))),
        "ksafe_t": WImplies(ks(Phi), Phi),
        "ksafe_b": WImplies(Phi, ks(WNot(ks(WNot(Phi))))),
        "ksafe_4": WImplies(ks(Phi), ks(ks(Phi))),
        "ksafe_necessitation": ks(WTrue()),
    }
