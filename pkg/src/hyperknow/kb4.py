"""KB4 Kripke semantics over partial epistemic models, and the embedding
into the two-level logic.

``sat_kb4`` evaluates directly on the frame: the knowledge operator
quantifies over the worlds related by the agent's partial equivalence
relation, and is vacuously true where the agent is undefined.  ``translate``
maps knowledge to the world-level unsafe-knowledge operator.  The two routes
are deliberately independent implementations so that
:func:`check_translation_equiv` is a meaningful cross-check.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import SortError, UnknownPointError
from .frames import PartialEpistemicModel, eta_model
from .semantics import Evaluator
from .syntax import (
    EnvAtom,
    KB4And,
    KB4Atom,
    KB4Formula,
    KB4Knows,
    KB4Not,
    WAnd,
    WNot,
    WorldFormula,
    desugar,
    kunsafe,
)


class KB4Evaluator:
    """Memoizing evaluator for KB4 formulas over one frame model."""

    def __init__(self, model: PartialEpistemicModel):
        self.model = model
        self._memo = {}

    def sat(self, world: str, f: KB4Formula) -> bool:
        m = self.model
        if world not in m.frame.worlds:
            raise UnknownPointError(f"unknown world '{world}'")
        key = (id(f), world)
        hit = self._memo.get(key)
        if hit is not None:
            return hit[0]
        match f:
            case KB4Atom(name):
                try:
                    out = world in m.val[name]
                except KeyError:
                    raise SortError(f"atom '{name}' is not declared in this model",
                                    node=f) from None
            case KB4Not(sub):
                out = not self.sat(world, sub)
            case KB4And(l, r):
                out = self.sat(world, l) and self.sat(world, r)
            case KB4Knows(agent, sub):
                cls = m.frame.class_of(agent, world)
                # Vacuously true where the agent's relation is undefined.
                out = cls is None or all(self.sat(w, sub) for w in cls)
            case _:
                raise SortError(f"not a KB4 formula: {f!r}", node=f)
        self._memo[key] = (out, f)
        return out


def sat_kb4(m: PartialEpistemicModel, world: str, f: KB4Formula) -> bool:
    return KB4Evaluator(m).sat(world, f)


@lru_cache(maxsize=None)
def translate(f: KB4Formula) -> WorldFormula:
    """Knowledge becomes unsafe knowledge; everything else is homomorphic.

    Returns a core world formula.
    """
    match f:
        case KB4Atom(name):
            return EnvAtom(name, span=f.span)
        case KB4Not(sub):
            return WNot(translate(sub), span=f.span)
        case KB4And(l, r):
            return WAnd(translate(l), translate(r), span=f.span)
        case KB4Knows(agent, sub):
            return desugar(kunsafe(agent, translate(sub)))
    raise TypeError(f"not a KB4 formula: {f!r}")


def check_translation_equiv(m: PartialEpistemicModel, f: KB4Formula) -> bool:
    """Does the direct KB4 evaluation agree with evaluating the translation
    on the converted hypergraph model, at every world?"""
    direct = KB4Evaluator(m)
    converted = Evaluator(eta_model(m))
    translated = translate(f)
    return all(direct.sat(w, f) == converted.sat_world(w, translated)
               for w in m.frame.worlds)
