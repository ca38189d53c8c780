"""Classify every connected graph up to N vertices and summarize the rules used."""

import argparse
import collections
import time

from homdens.certifier import UNKNOWN, classify_catalog, replay_certificate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=6)
    args = ap.parse_args()
    t0 = time.perf_counter()
    rows = classify_catalog(args.n)
    status = collections.Counter(r.status for r in rows)
    rules = collections.Counter(r.certificate.rule for r in rows if r.certificate)
    failed = [r.label for r in rows if r.certificate and not replay_certificate(r.certificate)]
    print(f"{len(rows)} graphs in {time.perf_counter() - t0:.2f}s: " + ", ".join(f"{k}={v}" for k, v in sorted(status.items())))
    print("top rules:")
    for rule, c in rules.most_common():
        print(f"  {rule:24s} {c}")
    print("unknown:")
    for r in rows:
        if r.status == UNKNOWN:
            print(f"  {r.label.decode()}")
    if failed:
        print(f"replay failures: {failed}")


if __name__ == "__main__":
    main()
