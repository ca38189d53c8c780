"""Run every verification suite with one seed and print a summary table."""

import argparse
import time

from homdens.campaigns import SUITES, CampaignConfig, run_campaign
from homdens.formats import table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    rows = []
    for suite in SUITES:
        t0 = time.perf_counter()
        rep = run_campaign(CampaignConfig(suite, args.instances, args.seed, k=args.k, threads=args.threads))
        rows.append([suite, rep.instances_tested, rep.min_margin, rep.min_ratio, rep.max_residual,
                     len(rep.violations), round(time.perf_counter() - t0, 2)])
    print(table(["suite", "records", "minMargin", "minRatio", "maxResidual", "violations", "seconds"], rows), end="")


if __name__ == "__main__":
    main()
