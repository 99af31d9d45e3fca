#!/usr/bin/env python3
"""Replay the worked examples: the three one-view-per-agent hypergraphs,
the binary-input model with solo executions, and the shared-memory
neighborhood export.  Prints one verdict line per query."""

import hyperknow as hk
from hyperknow.neighborhood import shared_memory_example, to_neighborhood
from hyperknow.semantics import World
from hyperknow import sat_generalized


def world_query(model, name, edge, text):
    f = hk.parse_world(text, model.sig)
    verdict = hk.sat_world(model, edge, f)
    print(f"{name}, world {edge:8s} |= {text:55s} {verdict}")


def agent_query(model, name, agent, view, text):
    f = hk.parse_agent(text, agent, model.sig)
    verdict = hk.sat_agent(model, agent, view, f)
    print(f"{name}, view {view:9s} |= {text:55s} {verdict}")


def main():
    h1, h2, h3 = hk.example("h1"), hk.example("h2"), hk.example("h3")

    print("== everyone possibly absent (7 worlds) ==")
    world_query(h1, "h1", "e_ab", "alive(a)")
    world_query(h1, "h1", "e_ab", "alive(b)")
    world_query(h1, "h1", "e_ab", "alive(c)")
    agent_query(h1, "h1", "a", "va", "~[] alive(b)")

    print("== one world, everyone present ==")
    agent_query(h2, "h2", "a", "va", "[](alive(b) & alive(c))")

    print("== pairwise-compatible views ==")
    agent_query(h3, "h3", "a", "va",
                "[](alive(b) | alive(c)) & ~[]alive(b) & ~[]alive(c)")

    print("== binary input with solo executions ==")
    bi = hk.example("binary-input")
    agent_query(bi, "bi", "a", "a0", "0a")
    agent_query(bi, "bi", "a", "a0", "~[] E[b] true")
    agent_query(bi, "bi", "a", "a0", "<> E[b] 1b")
    agent_query(bi, "bi", "a", "a0", "[](~solo -> E[b](0b | 1b))")
    agent_query(bi, "bi", "a", "a0", "[] A[b](0b | 1b)")

    print("== shared memory (two views per process per state) ==")
    sm = shared_memory_example()
    nf = to_neighborhood(sm.hypergraph)
    for state in nf.states:
        hoods = sorted(sorted(h) for h in nf.n("a", state))
        print(f"N[a]({state}) = {hoods}")
    f = hk.parse_world("E[a] reads0_a & E[a] reads1_a", sm.sig)
    print("state 01 |= both bits readable by a:",
          sat_generalized(sm, World("01"), f))


if __name__ == "__main__":
    main()
