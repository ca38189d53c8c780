"""Hill-climb for DNN kernels that push t(G,g)/|g|^e(G) below 1 on graphs the certifier leaves open."""

import argparse

from homdens.certifier import UNKNOWN, classify_catalog
from homdens.graphs import path
from homdens.verify import search_counterexample


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--iters", type=int, default=3000)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--all-unknown", action="store_true", help="every open graph on 6 vertices, not just one")
    args = ap.parse_args()
    if args.all_unknown:
        targets = [r.graph for r in classify_catalog(6) if r.status == UNKNOWN]
    else:
        targets = [path(5).complement()]
    for G in targets:
        best = None
        for k in args.k:
            for s in range(args.seeds):
                r = search_counterexample(G, k, iterations=args.iters, seed=s)
                if best is None or r.best_ratio < best[0].best_ratio:
                    best = (r, k, s)
        r, k, s = best
        flag = "  CANDIDATE" if r.candidate else ""
        print(f"n={G.n} edges={list(G.edges)} best ratio {r.best_ratio:.9f} (k={k}, seed={s}){flag}")


if __name__ == "__main__":
    main()
