"""JSON and CSV readers/writers for graphs, kernels and reports.

Readers raise :class:`InputError` whose message names the source, and
either the line/column of a syntax error or the JSON path of the bad
value (``$.edges[3][1]``).  Output is deterministic: keys sorted, floats
written with ``repr`` (shortest string that round-trips exactly).
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .graphs import BipartiteGraph, Graph, GraphError, Hypergraph, make_bipartite, make_graph, make_hypergraph
from .kernel import KernelError, RectKernel, StepKernel, from_matrix, rect_kernel


class InputError(ValueError):
    pass


def _load(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _need(d, key: str, where: str, source: str):
    if not isinstance(d, dict):
        raise InputError(f"{source}: {where}: expected an object")
    if key not in d:
        raise InputError(f"{source}: {where}: missing key {key!r}")
    return d[key]


def _int(x, where: str, source: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{source}: {where}: expected an integer, got {json.dumps(x)}")
    return x


def _num(x, where: str, source: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise InputError(f"{source}: {where}: expected a finite number, got {json.dumps(x)}")
    return float(x)


def _list(x, where: str, source: str, length: int | None = None) -> list:
    if not isinstance(x, list):
        raise InputError(f"{source}: {where}: expected an array")
    if length is not None and len(x) != length:
        raise InputError(f"{source}: {where}: expected {length} entries, got {len(x)}")
    return x


def _int_rows(x, where: str, source: str, width: int | None) -> list[list[int]]:
    rows = _list(x, where, source)
    return [
        [_int(v, f"{where}[{i}][{j}]", source) for j, v in enumerate(_list(row, f"{where}[{i}]", source, width))]
        for i, row in enumerate(rows)
    ]


def _in_range(rows: list[list[int]], bounds: list[int], where: str, source: str):
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            hi = bounds[j] if len(bounds) > 1 else bounds[0]
            if not 0 <= v < hi:
                raise InputError(f"{source}: {where}[{i}][{j}]: vertex {v} out of range 0..{hi - 1}")


def _matrix(x, where: str, source: str, shape: tuple[int, int] | None = None) -> np.ndarray:
    rows = _list(x, where, source, None if shape is None else shape[0])
    if not rows:
        raise InputError(f"{source}: {where}: empty matrix")
    width = shape[1] if shape else None
    out = []
    for i, row in enumerate(rows):
        row = _list(row, f"{where}[{i}]", source, width)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputError(f"{source}: {where}[{i}]: expected {width} entries, got {len(row)}")
        out.append([_num(v, f"{where}[{i}][{j}]", source) for j, v in enumerate(row)])
    return np.array(out, dtype=float)


def _vector(x, where: str, source: str, n: int) -> np.ndarray:
    return np.array([_num(v, f"{where}[{i}]", source) for i, v in enumerate(_list(x, where, source, n))])


def _wrap(fn, source: str):
    try:
        return fn()
    except (GraphError, KernelError) as exc:
        raise InputError(f"{source}: {type(exc).__name__}: {exc}") from None


# ---------------------------------------------------------------------------
# graphs


def graph_from_obj(d, source: str = "<input>") -> Graph:
    n = _int(_need(d, "n", "$", source), "$.n", source)
    edges = _int_rows(_need(d, "edges", "$", source), "$.edges", source, 2)
    _in_range(edges, [n], "$.edges", source)
    return _wrap(lambda: make_graph(n, edges), source)


def bipartite_from_obj(d, source: str = "<input>") -> BipartiteGraph:
    a = _int(_need(d, "nLeft", "$", source), "$.nLeft", source)
    b = _int(_need(d, "nRight", "$", source), "$.nRight", source)
    edges = _int_rows(_need(d, "edges", "$", source), "$.edges", source, 2)
    _in_range(edges, [a, b], "$.edges", source)
    return _wrap(lambda: make_bipartite(a, b, edges), source)


def hypergraph_from_obj(d, source: str = "<input>") -> Hypergraph:
    r = _int(_need(d, "r", "$", source), "$.r", source)
    n = _int(_need(d, "n", "$", source), "$.n", source)
    edges = _int_rows(_need(d, "edges", "$", source), "$.edges", source, r)
    _in_range(edges, [n], "$.edges", source)
    return _wrap(lambda: make_hypergraph(r, n, edges), source)


def read_graph(text: str, source: str = "<input>") -> Graph:
    return graph_from_obj(_load(text, source), source)


def read_any_graph(text: str, source: str = "<input>"):
    """Graph, BipartiteGraph or Hypergraph, told apart by their keys."""
    d = _load(text, source)
    if isinstance(d, dict) and "nLeft" in d:
        return bipartite_from_obj(d, source)
    if isinstance(d, dict) and "r" in d:
        return hypergraph_from_obj(d, source)
    return graph_from_obj(d, source)


def graph_to_obj(G) -> dict:
    if isinstance(G, BipartiteGraph):
        return {"nLeft": G.n_left, "nRight": G.n_right, "edges": [list(e) for e in G.edges]}
    if isinstance(G, Hypergraph):
        return {"r": G.r, "n": G.n, "edges": [list(e) for e in G.edges]}
    return {"n": G.n, "edges": [list(e) for e in G.edges]}


# ---------------------------------------------------------------------------
# kernels


def kernel_from_obj(d, source: str = "<input>") -> StepKernel:
    k = _int(_need(d, "k", "$", source), "$.k", source)
    A = _matrix(_need(d, "A", "$", source), "$.A", source, (k, k))
    w = _vector(d["w"], "$.w", source, k) if isinstance(d, dict) and d.get("w") is not None else None
    return _wrap(lambda: from_matrix(A, w), source)


def rect_from_obj(d, source: str = "<input>") -> RectKernel:
    H = _matrix(_need(d, "H", "$", source), "$.H", source)
    n, m = H.shape
    wr = _vector(d["wRow"], "$.wRow", source, n) if d.get("wRow") is not None else None
    wc = _vector(d["wCol"], "$.wCol", source, m) if d.get("wCol") is not None else None
    return _wrap(lambda: rect_kernel(H, wr, wc), source)


def read_kernel(text: str, source: str = "<input>"):
    """StepKernel from matrix JSON, RectKernel when the object has ``H``."""
    d = _load(text, source)
    if isinstance(d, dict) and "H" in d:
        return rect_from_obj(d, source)
    return kernel_from_obj(d, source)


def read_matrix_csv(text: str, source: str = "<input>") -> StepKernel:
    rows = []
    for i, row in enumerate(csv.reader(io.StringIO(text))):
        if not row or all(not c.strip() for c in row):
            continue
        vals = []
        for j, c in enumerate(row):
            try:
                vals.append(float(c))
            except ValueError:
                raise InputError(f"{source}:{i + 1}:{j + 1}: not a number: {c!r}") from None
        rows.append(vals)
    if not rows or any(len(r) != len(rows) for r in rows):
        raise InputError(f"{source}: matrix CSV must be square")
    return _wrap(lambda: from_matrix(np.array(rows)), source)


def load_kernel(path: str | Path):
    text = read_text(path)
    if str(path).lower().endswith(".csv"):
        return read_matrix_csv(text, str(path))
    return read_kernel(text, str(path))


def kernel_to_obj(g) -> dict:
    if isinstance(g, RectKernel):
        return {"H": g.H.tolist(), "wRow": g.w_row.tolist(), "wCol": g.w_col.tolist()}
    return {"k": g.k, "A": g.A.tolist(), "w": g.w.tolist()}


# ---------------------------------------------------------------------------
# output


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, bytes):
        return x.hex()
    return x


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def fmt6(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[fmt6(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"
