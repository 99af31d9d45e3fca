#!/usr/bin/env python3
"""Run the bounded validity sweep over the whole scheme library and print a
verdict table.  Countermodels are rendered in the model file format.

The knowledge-operator rows show the observable split: the vacuous operator
(A-then-box) passes K, B and 4; the existence-asserting one (E-then-box)
passes K and T and scheme 4, but fails B and necessitation at worlds where
the agent is absent.
"""

import argparse

from hyperknow import WorldFormula, parser, search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--agents", type=int, default=2)
    ap.add_argument("--views", type=int, default=2)
    ap.add_argument("--edges", type=int, default=4)
    ap.add_argument("--show-countermodels", action="store_true")
    args = ap.parse_args()

    bounds = search.Bounds(agents=args.agents, views=args.views, edges=args.edges)
    agents = search.default_agents(args.agents)

    table = {
        "axiom: surjectivity": (search.scheme_surjectivity("a"), "a"),
        "axiom: functionality": (search.scheme_functionality("a"), "a"),
        "axiom: non-emptiness": (search.scheme_non_emptiness(agents), None),
    }
    for k, scheme in search.interaction_schemes("a").items():
        agent = None if isinstance(scheme, WorldFormula) else "a"
        table[f"interaction {k}"] = (scheme, agent)
    table["locality"] = (search.locality_scheme("a"), "a")
    for name, scheme in search.knowledge_schemes("a").items():
        table[name] = (scheme, None)

    for label, (scheme, agent) in table.items():
        verdict = search.check_scheme(scheme, bounds, agent=agent)
        if isinstance(verdict, search.ValidWithinBounds):
            print(f"{label:24s} valid within bounds ({verdict.models_checked} sweeps)")
        else:
            where = verdict.point
            print(f"{label:24s} countermodel at {where}")
            if args.show_countermodels:
                rendered = {k: parser.render(v) for k, v in verdict.assignment.items()}
                if rendered:
                    print(f"    metavariables: {rendered}")
                print("    " + parser.render_model(verdict.model).replace("\n", "\n    "))


if __name__ == "__main__":
    main()
