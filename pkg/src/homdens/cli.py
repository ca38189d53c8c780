"""Command-line front end: ``python -m homdens <subcommand> ...``.

Exit codes: 0 success, 1 a check failed (reports are still written),
2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import formats as F
from .campaigns import SUITES, CampaignConfig, run_campaign
from .certifier import RULE_CATALOG, Certificate, CertifyResult, classify_catalog, certify, replay_certificate
from .graphs import BipartiteGraph, Graph, GraphError, enumerate_connected
from .homdensity import BudgetExceeded, t, t_bipartite
from .kernel import RectKernel, StepKernel, edge_density, rect_density, random_kernel
from .verify import CEstimate, DensityResult, SearchResult, VerificationReport, c_estimate, min_density, search_counterexample

FORMATS = ("json", "csv", "table")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: tuple[str, ...]
    seed: int | None
    output: str | None
    format: str
    threads: int


# ---------------------------------------------------------------------------
# rendering


def emit_report(obj, fmt: str = "json") -> bytes:
    """Deterministic bytes for a report, certificate or result object."""
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}")
    if isinstance(obj, VerificationReport):
        if fmt == "json":
            return F.dumps(obj.to_dict()).encode()
        if fmt == "csv":
            return obj.to_csv().encode()
        head = ["suite", "instances", "minMargin", "minRatio", "maxResidual", "tolerance", "violations"]
        row = [obj.inequality_id, obj.instances_tested, obj.min_margin, obj.min_ratio, obj.max_residual,
               obj.tolerance, len(obj.violations)]
        return F.table(head, [row]).encode()
    if isinstance(obj, Certificate):
        obj = CertifyResult(obj.status, obj)
    if isinstance(obj, CertifyResult):
        if fmt == "table":
            lines = [f"status: {obj.status}"]
            if obj.certificate is not None:
                lines += _tree(obj.certificate)
            return ("\n".join(lines) + "\n").encode()
        if fmt == "csv":
            raise UsageError("certificates have no CSV form")
        return F.dumps(obj.to_dict()).encode()
    d = obj.to_dict() if hasattr(obj, "to_dict") else obj
    if fmt == "json":
        return F.dumps(d).encode()
    flat = {k: v for k, v in d.items() if not isinstance(v, (list, dict))}
    if fmt == "csv":
        keys = sorted(flat)
        return (",".join(keys) + "\n" + ",".join(_csv_cell(flat[k]) for k in keys) + "\n").encode()
    return F.table(["field", "value"], [[k, flat[k]] for k in sorted(flat)]).encode()


def _csv_cell(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _tree(c: Certificate, depth: int = 0) -> list[str]:
    pad = "  " * depth
    out = [f"{pad}{c.status} n={c.graph.n} e={c.graph.e} by {c.rule}"]
    for p in c.premises:
        out += _tree(p, depth + 1)
    return out


def _write(data: bytes, output: str | None):
    if output is None or output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(output, "wb") as fh:
            fh.write(data)


# ---------------------------------------------------------------------------
# subcommands


def _load_graph(path: str):
    return F.read_any_graph(F.read_text(path), path)


def cmd_certify(a) -> int:
    G = _load_graph(a.graph)
    if not isinstance(G, Graph):
        raise F.InputError(f"{a.graph}: certify needs a simple graph")
    res = certify(G, a.max_depth)
    _write(emit_report(res, a.format), a.output)
    if res.certificate is not None and not replay_certificate(res.certificate):
        print("error: emitted certificate failed replay", file=sys.stderr)
        return 1
    return 0


def cmd_replay(a) -> int:
    text = F.read_text(a.certificate)
    d = F._load(text, a.certificate)
    if isinstance(d, dict) and "certificate" in d:
        d = d["certificate"]
    try:
        c = Certificate.from_dict(d)
    except (KeyError, TypeError, ValueError, GraphError) as exc:
        raise F.InputError(f"{a.certificate}: malformed certificate: {exc}") from None
    r = replay_certificate(c)
    out = {"ok": r.ok, "reason": r.reason, "location": list(r.where), "status": c.status}
    _write(emit_report(out, a.format), a.output)
    return 0 if r.ok else 1


def cmd_catalog(a) -> int:
    if a.rules:
        rows = [[k, v] for k, v in RULE_CATALOG.items()]
        _write(F.table(["rule", "statement"], rows).encode(), a.output)
        return 0
    rows = classify_catalog(a.n, a.max_depth)
    bad = [r for r in rows if r.certificate is not None and not replay_certificate(r.certificate)]
    if a.format == "json":
        data = F.dumps([
            {"label": r.label.decode(), "graph": F.graph_to_obj(r.graph), "status": r.status,
             "certificate": None if r.certificate is None else r.certificate.to_dict()}
            for r in rows
        ]).encode()
    else:
        head = ["label", "n", "e", "status", "rule", "edges"]
        body = [[r.label.decode(), r.graph.n, r.graph.e, r.status,
                 "-" if r.certificate is None else r.certificate.rule,
                 " ".join(f"{u}-{v}" for u, v in r.graph.edges)] for r in rows]
        if a.format == "csv":
            data = ("\n".join(",".join(str(c) for c in row) for row in [head] + body) + "\n").encode()
        else:
            counts = {}
            for r in rows:
                counts[r.status] = counts.get(r.status, 0) + 1
            summary = "# " + " ".join(f"{k}={counts[k]}" for k in sorted(counts)) + "\n"
            data = (F.table(head, body) + summary).encode()
    _write(data, a.output)
    if bad:
        print(f"error: {len(bad)} certificates failed replay", file=sys.stderr)
        return 1
    return 0


def cmd_density(a) -> int:
    G = _load_graph(a.graph)
    g = F.load_kernel(a.kernel)
    if isinstance(G, Graph):
        if not isinstance(g, StepKernel):
            raise F.InputError(f"{a.kernel}: a simple graph needs a square kernel with k, A")
        val, nrm, e = t(G, g, a.method), edge_density(g), G.e
    elif isinstance(G, BipartiteGraph) and isinstance(g, RectKernel):
        val, nrm, e = t_bipartite(G, g, a.method), rect_density(g), G.e
    else:
        raise F.InputError(f"{a.graph}: unsupported graph/kernel combination")
    rhs = nrm ** e
    out = {"t": val, "norm": nrm, "normPower": rhs, "ratio": val / rhs if rhs > 0 else None, "e": e}
    _write(emit_report(out, a.format), a.output)
    return 0


def cmd_verify(a) -> int:
    cfg = CampaignConfig(a.suite, a.instances, a.seed, a.k, a.catalog_n, a.threads, a.tol, a.weights)
    rep = run_campaign(cfg)
    _write(emit_report(rep, a.format), a.output)
    if a.csv:
        _write(rep.to_csv().encode(), a.csv)
    return 0 if rep.ok else 1


def cmd_dmin(a) -> int:
    g = F.load_kernel(a.kernel)
    if not isinstance(g, StepKernel):
        raise F.InputError(f"{a.kernel}: dmin needs a square kernel")
    res: DensityResult = min_density(g)
    _write(emit_report(res, a.format), a.output)
    return 0


def cmd_cest(a) -> int:
    g = F.load_kernel(a.kernel)
    if not isinstance(g, StepKernel):
        raise F.InputError(f"{a.kernel}: cest needs a square kernel")
    catalog = [G for m in range(2, a.catalog_n + 1) for G in enumerate_connected(m)]
    res: CEstimate = c_estimate(g, catalog)
    _write(emit_report(res, a.format), a.output)
    return 0


def cmd_search(a) -> int:
    G = _load_graph(a.graph)
    if not isinstance(G, Graph):
        raise F.InputError(f"{a.graph}: search needs a simple graph")
    res: SearchResult = search_counterexample(G, a.k, a.rank, a.iters, a.seed)
    _write(emit_report(res, a.format), a.output)
    if res.candidate:
        print(f"candidate counterexample: ratio {res.best_ratio!r}", file=sys.stderr)
        return 1
    return 0


def cmd_gen(a) -> int:
    g = random_kernel(a.kind, a.k, a.rank, seed=a.seed, weights=a.weights)
    _write(F.dumps(F.kernel_to_obj(g)).encode(), a.output)
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="homdens", description="Homomorphism densities, good-graph certificates and inequality checks.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp, formats=FORMATS, default="json"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--output", "-o", default=None, help="write here instead of stdout")

    sp = sub.add_parser("certify", help="certify a graph as good or extra-good")
    sp.add_argument("graph")
    sp.add_argument("--max-depth", type=_positive, default=32)
    common(sp, ("json", "table"))
    sp.set_defaults(fn=cmd_certify)

    sp = sub.add_parser("replay", help="re-check a certificate")
    sp.add_argument("certificate")
    common(sp, ("json", "table"))
    sp.set_defaults(fn=cmd_replay)

    sp = sub.add_parser("catalog", help="classify every connected graph on at most N vertices")
    sp.add_argument("--n", type=_positive, default=5)
    sp.add_argument("--max-depth", type=_positive, default=32)
    sp.add_argument("--rules", action="store_true", help="list the rule catalog instead")
    common(sp, default="table")
    sp.set_defaults(fn=cmd_catalog)

    sp = sub.add_parser("density", help="t(G, g) and |g|^e(G)")
    sp.add_argument("graph")
    sp.add_argument("kernel")
    sp.add_argument("--method", choices=("dp", "brute"), default="dp")
    common(sp)
    sp.set_defaults(fn=cmd_density)

    sp = sub.add_parser("verify", help="run a seeded verification campaign")
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--instances", type=_positive, default=100)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--k", type=_positive, default=5)
    sp.add_argument("--catalog-n", type=_positive, default=5)
    sp.add_argument("--threads", type=_positive, default=1)
    sp.add_argument("--tol", type=float, default=None, help="override the suite tolerance")
    sp.add_argument("--weights", choices=("uniform", "random", "mixed"), default="mixed")
    sp.add_argument("--csv", default=None, help="also write per-instance CSV here")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("dmin", help="minimum of x^T A x over the simplex")
    sp.add_argument("kernel")
    common(sp)
    sp.set_defaults(fn=cmd_dmin)

    sp = sub.add_parser("cest", help="catalog estimate of inf_G t(G,g)^(1/e(G))")
    sp.add_argument("kernel")
    sp.add_argument("--catalog-n", type=_positive, default=5)
    common(sp)
    sp.set_defaults(fn=cmd_cest)

    sp = sub.add_parser("search", help="hill-climb for a kernel with t(G,g) < |g|^e(G)")
    sp.add_argument("graph")
    sp.add_argument("--k", type=_positive, required=True)
    sp.add_argument("--rank", type=_positive, default=None)
    sp.add_argument("--iters", type=_positive, default=1000)
    sp.add_argument("--seed", type=int, required=True)
    common(sp)
    sp.set_defaults(fn=cmd_search)

    sp = sub.add_parser("gen", help="generate a random kernel")
    sp.add_argument("--kind", choices=("dnn", "cp", "symnn"), required=True)
    sp.add_argument("--k", type=_positive, required=True)
    sp.add_argument("--rank", type=_positive, default=None)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--weights", choices=("uniform", "random"), default="uniform")
    sp.add_argument("--output", "-o", default=None)
    sp.set_defaults(fn=cmd_gen)
    return p


def run_config(a: argparse.Namespace) -> RunConfig:
    inputs = tuple(getattr(a, k) for k in ("graph", "kernel", "certificate") if getattr(a, k, None))
    return RunConfig(a.cmd, inputs, getattr(a, "seed", None), a.output, getattr(a, "format", "json"),
                     getattr(a, "threads", 1))


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        run_config(a)
        return a.fn(a)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (F.InputError, GraphError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        os._exit(0)


def main() -> None:
    sys.exit(dispatch())

