"""Partial epistemic frames and their correspondence with chromatic hypergraphs.

A partial epistemic frame is a set of worlds with, per agent, a partial
equivalence relation: stored here as a partition of a subset of the worlds,
which makes symmetry and transitivity structural.  Every world must be
related to itself for at least one agent.

``eta`` turns a frame into a hypergraph (worlds become hyperedges, the
equivalence classes of an agent become its views); ``kappa`` goes the other
way (two hyperedges are equivalent for an agent when they share one of its
views).  The two constructions are mutually inverse up to isomorphism, which
:func:`is_isomorphic` decides exactly by backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional, Tuple

from .core import (
    ChromaticHypergraph,
    ChromaticHypergraphModel,
    Signature,
    build_hypergraph,
    build_model,
)
from .errors import NonEmptyAgentAtomsError, UnknownPointError, ValidationError


@dataclass(frozen=True)
class PartialEpistemicFrame:
    """Worlds plus, per agent, a partition of a subset of the worlds.

    Classes are canonicalized: members in world order, classes ordered by
    their first member.
    """

    agents: Tuple[str, ...]
    worlds: Tuple[str, ...]
    classes: Mapping[str, Tuple[Tuple[str, ...], ...]]

    def dom(self, agent: str) -> FrozenSet[str]:
        return frozenset(w for cls in self.classes.get(agent, ()) for w in cls)

    def class_of(self, agent: str, world: str) -> Optional[Tuple[str, ...]]:
        """The equivalence class of the world, or None where undefined."""
        return self._class_index.get((agent, world))

    def related(self, agent: str, w1: str, w2: str) -> bool:
        cls = self.class_of(agent, w1)
        return cls is not None and w2 in cls

    def __post_init__(self):
        index = {}
        for a in self.agents:
            for cls in self.classes.get(a, ()):
                for w in cls:
                    index[(a, w)] = cls
        object.__setattr__(self, "_class_index", index)


@dataclass(frozen=True)
class PartialEpistemicModel:
    """A frame plus an environment valuation (agents carry no atoms here)."""

    frame: PartialEpistemicFrame
    atoms: Tuple[str, ...] = ()
    val: Mapping[str, FrozenSet[str]] = field(default_factory=dict)

    @property
    def worlds(self) -> Tuple[str, ...]:
        return self.frame.worlds


def build_frame(agents, worlds, classes) -> PartialEpistemicFrame:
    """Validate and canonicalize a frame; reports all violations at once."""
    agents = tuple(agents)
    worlds = tuple(worlds)
    world_pos = {w: i for i, w in enumerate(worlds)}
    problems = []
    if len(set(worlds)) != len(worlds):
        problems.append("worlds: duplicate world names")
    if len(set(agents)) != len(agents):
        problems.append("agents: duplicate agent names")

    canonical = {}
    for a in agents:
        seen = set()
        fixed = []
        for cls in classes.get(a, ()):
            members = tuple(cls)
            if not members:
                problems.append(f"classes[{a}]: empty equivalence class")
                continue
            unknown = [w for w in members if w not in world_pos]
            if unknown:
                problems.append(
                    f"classes[{a}]: unknown worlds {unknown} in class {list(members)}")
                continue
            if len(set(members)) != len(members):
                problems.append(f"classes[{a}]: repeated world in class {list(members)}")
            overlap = seen.intersection(members)
            if overlap:
                problems.append(
                    f"classes[{a}]: worlds {sorted(overlap)} appear in two classes")
            seen.update(members)
            fixed.append(tuple(sorted(set(members), key=world_pos.get)))
        fixed.sort(key=lambda cls: world_pos[cls[0]])
        canonical[a] = tuple(fixed)

    for w in worlds:
        if not any(w in cls for a in agents for cls in canonical.get(a, ())):
            problems.append(
                f"coverage: world {w} is not related to itself for any agent")

    if problems:
        raise ValidationError(problems)
    return PartialEpistemicFrame(agents=agents, worlds=worlds, classes=canonical)


def build_frame_model(agents, worlds, classes, atoms=(), val=None) -> PartialEpistemicModel:
    frame = build_frame(agents, worlds, classes)
    atoms = tuple(atoms)
    val = dict(val or {})
    problems = []
    if len(set(atoms)) != len(atoms):
        problems.append("atoms: duplicate atom names")
    known = set(worlds)
    fixed = {}
    for atom in atoms:
        members = frozenset(val.get(atom, frozenset()))
        for w in members - known:
            problems.append(f"valuation: atom {atom} mentions unknown world '{w}'")
        fixed[atom] = members
    for atom in set(val) - set(atoms):
        problems.append(f"valuation: undeclared atom '{atom}'")
    if problems:
        raise ValidationError(problems)
    return PartialEpistemicModel(frame=frame, atoms=atoms, val=fixed)


# --- the two constructions ----------------------------------------------------


def _class_view_name(agent: str, cls: Tuple[str, ...]) -> str:
    return f"{agent}:{{{','.join(sorted(cls))}}}"


def eta(fr: PartialEpistemicFrame) -> ChromaticHypergraph:
    """Frame to hypergraph: worlds become hyperedges, classes become views."""
    sig = Signature(fr.agents)
    views = {a: tuple(_class_view_name(a, cls) for cls in fr.classes[a])
             for a in fr.agents}
    proj = {}
    for a in fr.agents:
        for cls in fr.classes[a]:
            name = _class_view_name(a, cls)
            for w in cls:
                proj[(w, a)] = name
    return build_hypergraph(sig, views, fr.worlds, proj)


def kappa(h: ChromaticHypergraph) -> PartialEpistemicFrame:
    """Hypergraph to frame: hyperedges become worlds; two worlds are
    equivalent for an agent when they contain the same view of it."""
    classes = {
        a: tuple(h.worlds_of_view(a, v) for v in h.views.get(a, ()))
        for a in h.sig.agents
    }
    return build_frame(h.sig.agents, h.edges, classes)


def eta_model(fm: PartialEpistemicModel) -> ChromaticHypergraphModel:
    """eta with the environment valuation carried across (worlds = edges)."""
    fr = fm.frame
    h = eta(fr)
    sig = Signature(fr.agents, {}, fm.atoms)
    return build_model(sig, h.views, h.edges, h.proj, {}, dict(fm.val))


def kappa_model(m: ChromaticHypergraphModel) -> PartialEpistemicModel:
    """kappa with the valuation carried across.

    Only models with empty agent atom alphabets correspond to frame models;
    anything else raises :class:`NonEmptyAgentAtomsError`.
    """
    nonempty = [a for a in m.sig.agents if m.sig.atoms_for(a)]
    if nonempty:
        raise NonEmptyAgentAtomsError(
            f"agents {nonempty} carry atoms; strip agent atoms before converting")
    fr = kappa(m.hypergraph)
    return build_frame_model(fr.agents, fr.worlds, fr.classes,
                             m.sig.env_atoms, dict(m.val_env))


# --- morphisms ------------------------------------------------------------------


@dataclass(frozen=True)
class HypergraphMorphism:
    """Per-agent view maps plus an edge map, commuting with the projections."""

    view_maps: Mapping[str, Mapping[str, str]]
    edge_map: Mapping[str, str]


@dataclass(frozen=True)
class FrameMorphism:
    """A world map preserving every agent's partial equivalence relation."""

    world_map: Mapping[str, str]


def check_hypergraph_morphism(mor: HypergraphMorphism,
                              source: ChromaticHypergraph,
                              target: ChromaticHypergraph) -> bool:
    """Pointwise check of the commutation condition."""
    for a in source.sig.agents:
        vm = mor.view_maps.get(a, {})
        for v in source.views.get(a, ()):
            if v not in vm:
                raise UnknownPointError(f"view map of agent {a} misses view '{v}'")
            if vm[v] not in target._view_sets.get(a, frozenset()):
                raise UnknownPointError(
                    f"view map of agent {a} sends '{v}' outside the target")
    for e in source.edges:
        if e not in mor.edge_map:
            raise UnknownPointError(f"edge map misses edge '{e}'")
        if mor.edge_map[e] not in target._edge_set:
            raise UnknownPointError(f"edge map sends '{e}' outside the target")
    for e in source.edges:
        for a in source.sig.agents:
            v = source.view_in(e, a)
            if v is None:
                continue
            if target.view_in(mor.edge_map[e], a) != mor.view_maps[a][v]:
                return False
    return True


def check_frame_morphism(mor: FrameMorphism,
                         source: PartialEpistemicFrame,
                         target: PartialEpistemicFrame) -> bool:
    fmap = mor.world_map
    for w in source.worlds:
        if w not in fmap:
            raise UnknownPointError(f"world map misses world '{w}'")
        if fmap[w] not in target.worlds:
            raise UnknownPointError(f"world map sends '{w}' outside the target")
    for a in source.agents:
        for cls in source.classes.get(a, ()):
            for w1 in cls:
                for w2 in cls:
                    if not target.related(a, fmap[w1], fmap[w2]):
                        return False
    return True


def eta_morphism(g: FrameMorphism, source: PartialEpistemicFrame,
                 target: PartialEpistemicFrame) -> HypergraphMorphism:
    """Transport a frame morphism along eta (classes map to classes)."""
    view_maps: Dict[str, Dict[str, str]] = {}
    for a in source.agents:
        vm = {}
        for cls in source.classes[a]:
            w = cls[0]
            tgt_cls = target.class_of(a, g.world_map[w])
            if tgt_cls is None:
                raise ValidationError(
                    [f"not a frame morphism: image of class {list(cls)} of {a} "
                     f"is outside dom_{a}"])
            vm[_class_view_name(a, cls)] = _class_view_name(a, tgt_cls)
        view_maps[a] = vm
    return HypergraphMorphism(view_maps=view_maps, edge_map=dict(g.world_map))


def kappa_morphism(f: HypergraphMorphism) -> FrameMorphism:
    """Transport a hypergraph morphism along kappa (the edge map survives)."""
    return FrameMorphism(world_map=dict(f.edge_map))


# --- exact isomorphism search ---------------------------------------------------


def is_isomorphic(h1: ChromaticHypergraph,
                  h2: ChromaticHypergraph) -> Optional[HypergraphMorphism]:
    """An invertible morphism h1 -> h2, or None.

    Exact backtracking over edge bijections; view maps are induced by the
    edge assignment.  Pruned by per-agent view counts, aliveness patterns and
    fiber sizes; fine at desk scale.
    """
    if h1.sig.agents != h2.sig.agents:
        return None
    agents = h1.sig.agents
    if len(h1.edges) != len(h2.edges):
        return None
    for a in agents:
        if len(h1.views.get(a, ())) != len(h2.views.get(a, ())):
            return None

    def signature_of(h, e):
        return tuple(
            (a, len(h.worlds_of_view(a, h.proj[(e, a)])) if (e, a) in h.proj else None)
            for a in agents)

    sig2_pool: Dict[tuple, list] = {}
    for e in h2.edges:
        sig2_pool.setdefault(signature_of(h2, e), []).append(e)

    edge_map: Dict[str, str] = {}
    used = set()
    view_map: Dict[Tuple[str, str], str] = {}
    view_map_inv: Dict[Tuple[str, str], str] = {}

    order = sorted(h1.edges, key=lambda e: len(sig2_pool.get(signature_of(h1, e), [])))

    def assign(i: int) -> bool:
        if i == len(order):
            return True
        e = order[i]
        for cand in sig2_pool.get(signature_of(h1, e), []):
            if cand in used:
                continue
            added = []
            ok = True
            for a in agents:
                v = h1.view_in(e, a)
                w = h2.view_in(cand, a)
                if (v is None) != (w is None):
                    ok = False
                    break
                if v is None:
                    continue
                if (a, v) in view_map:
                    if view_map[(a, v)] != w:
                        ok = False
                        break
                elif (a, w) in view_map_inv:
                    ok = False
                    break
                else:
                    view_map[(a, v)] = w
                    view_map_inv[(a, w)] = v
                    added.append((a, v, w))
            if ok:
                edge_map[e] = cand
                used.add(cand)
                if assign(i + 1):
                    return True
                used.discard(cand)
                del edge_map[e]
            for a, v, w in added:
                del view_map[(a, v)]
                del view_map_inv[(a, w)]
        return False

    if not assign(0):
        return None
    view_maps = {a: {} for a in agents}
    for (a, v), w in view_map.items():
        view_maps[a][v] = w
    return HypergraphMorphism(view_maps=view_maps, edge_map=dict(edge_map))


def is_isomorphic_frames(f1: PartialEpistemicFrame,
                         f2: PartialEpistemicFrame) -> Optional[FrameMorphism]:
    """An invertible frame morphism f1 -> f2, or None."""
    if f1.agents != f2.agents:
        return None
    if len(f1.worlds) != len(f2.worlds):
        return None
    for a in f1.agents:
        sizes1 = sorted(len(c) for c in f1.classes.get(a, ()))
        sizes2 = sorted(len(c) for c in f2.classes.get(a, ()))
        if sizes1 != sizes2:
            return None

    def profile(fr, w):
        out = []
        for a in fr.agents:
            cls = fr.class_of(a, w)
            out.append(None if cls is None else len(cls))
        return tuple(out)

    pool: Dict[tuple, list] = {}
    for w in f2.worlds:
        pool.setdefault(profile(f2, w), []).append(w)

    mapping: Dict[str, str] = {}
    used = set()
    worlds = list(f1.worlds)

    def compatible(w, cand):
        # Already-assigned worlds must agree on every agent's relation.
        for a in f1.agents:
            for w2, c2 in mapping.items():
                if f1.related(a, w, w2) != f2.related(a, cand, c2):
                    return False
        return True

    def assign(i: int) -> bool:
        if i == len(worlds):
            return True
        w = worlds[i]
        for cand in pool.get(profile(f1, w), []):
            if cand in used or not compatible(w, cand):
                continue
            mapping[w] = cand
            used.add(cand)
            if assign(i + 1):
                return True
            used.discard(cand)
            del mapping[w]
        return False

    if not assign(0):
        return None
    return FrameMorphism(world_map=dict(mapping))
