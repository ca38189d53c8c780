"""Backward-chaining certification of good and extra-good graphs.

A graph is *good* if ``t(G, g) >= |g|^e(G)`` for every doubly nonnegative
kernel ``g`` and *extra-good* if the vertex-weighted strengthening holds.
The closure theorems for these classes become rules below.  ``certify``
searches backwards from the input (delete a leaf, a pendant cycle, a
dominating vertex, ...) until it reaches base facts, and returns a
:class:`Certificate` that :func:`replay_certificate` re-checks from
scratch.

Rules resting on results whose proofs are only sketched carry
``provenance: proof-sketch`` in their data; the bipartite base fact rests
on the literature and carries ``provenance: literature``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable

from .graphs import (
    ISO_BOUND,
    Graph,
    MultitreeSpec,
    TooLarge,
    canonical_form,
    canonical_graph,
    canonical_labeling,
    cocktail_party,
    cycle,
    cyclomatic_class,
    dominating_vertices,
    enumerate_connected,
    is_vertex_transitive,
    multitree,
    theta,
)

GOOD = "Good"
EXTRA = "ExtraGood"
UNKNOWN = "Unknown"
RANK = {UNKNOWN: 0, GOOD: 1, EXTRA: 2}

# rule id -> status of its conclusion; None means either, set by premise
CONCLUDES = {
    "BASE-BIPARTITE-SMALL": GOOD,
    "BASE-NORMING-SUB": GOOD,
    "BASE-COMPLETE": GOOD,
    "BASE-COCKTAIL": GOOD,
    "BASE-TREE/UNICYCLIC": EXTRA,
    "BASE-THETA": EXTRA,
    "BASE-BICYCLIC": EXTRA,
    "RULE-COMPONENTS": GOOD,
    "RULE-VT-UPGRADE": EXTRA,
    "RULE-LEAF": EXTRA,
    "RULE-PENDANT-CYCLE": EXTRA,
    "RULE-MULTITREE-GLUE": EXTRA,
    "RULE-DOMINATE-1": None,
    "RULE-DOMINATE-2": None,
    "COERCE": GOOD,
}

# one-line statement of each rule, shown by ``catalog --rules``
RULE_CATALOG = {
    "BASE-BIPARTITE-SMALL": "bipartite graphs that are trees, complete bipartite, or have at most 9 vertices satisfy Sidorenko's inequality",
    "BASE-NORMING-SUB": "cycles and the octahedron K_{2,2,2} have norming 1-subdivisions",
    "BASE-COMPLETE": "complete graphs are good",
    "BASE-COCKTAIL": "a complete graph minus a set of disjoint edges is good",
    "BASE-TREE/UNICYCLIC": "trees and unicyclic graphs are extra-good",
    "BASE-THETA": "two hubs joined by internally disjoint paths form an extra-good graph",
    "BASE-BICYCLIC": "bicyclic graphs are extra-good",
    "RULE-COMPONENTS": "a disjoint union of good graphs is good",
    "RULE-VT-UPGRADE": "a good vertex-transitive graph is extra-good",
    "RULE-LEAF": "adding a leaf to an extra-good graph keeps it extra-good",
    "RULE-PENDANT-CYCLE": "attaching a cycle at one vertex of an extra-good graph keeps it extra-good",
    "RULE-MULTITREE-GLUE": "gluing a black vertex of a multitree to an extra-good graph keeps it extra-good",
    "RULE-DOMINATE-1": "adding a vertex adjacent to everything preserves good and extra-good",
    "RULE-DOMINATE-2": "adding two nonadjacent vertices adjacent to everything preserves good and extra-good",
    "COERCE": "extra-good implies good",
}
DEFAULT_DEPTH = 32


@dataclass(frozen=True)
class Certificate:
    graph: Graph
    status: str
    rule: str
    rule_data: dict = field(default_factory=dict)
    premises: tuple["Certificate", ...] = ()

    def to_dict(self) -> dict:
        return {
            "conclusion": {
                "graph": {"n": self.graph.n, "edges": [list(e) for e in self.graph.edges]},
                "status": self.status,
            },
            "rule": self.rule,
            "ruleData": _sorted_data(self.rule_data),
            "premises": [p.to_dict() for p in self.premises],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        g = d["conclusion"]["graph"]
        return cls(
            Graph(int(g["n"]), tuple((int(u), int(v)) for u, v in g["edges"])),
            d["conclusion"]["status"],
            d["rule"],
            dict(d.get("ruleData", {})),
            tuple(cls.from_dict(p) for p in d.get("premises", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))

    def rules_used(self) -> set[str]:
        out = {self.rule}
        for p in self.premises:
            out |= p.rules_used()
        return out

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


def _sorted_data(d):
    if isinstance(d, dict):
        return {k: _sorted_data(d[k]) for k in sorted(d)}
    if isinstance(d, (list, tuple)):
        return [_sorted_data(x) for x in d]
    return d


def _graph_dict(G: Graph) -> dict:
    return {"n": G.n, "edges": [list(e) for e in G.edges]}


# ---------------------------------------------------------------------------
# structural recognizers (shared by search and replay where the check is local)


def is_complete(G: Graph) -> bool:
    return G.e == G.n * (G.n - 1) // 2


def complement_matching(G: Graph) -> list[tuple[int, int]] | None:
    """Missing edges if they are nonempty and pairwise disjoint."""
    miss = G.complement().edges
    used = [u for e in miss for u in e]
    if miss and len(used) == len(set(used)):
        return list(miss)
    return None


def find_theta(G: Graph) -> tuple[list[int], list[list[int]]] | None:
    """Hubs and hub-to-hub paths if G is a theta graph with at least three paths."""
    if not G.is_connected() or G.n < 4:
        return None
    big = [u for u in range(G.n) if G.degree(u) != 2]
    if len(big) != 2:
        return None
    a, b = big
    if G.degree(a) != G.degree(b) or G.degree(a) < 3:
        return None
    paths = []
    for s in sorted(G.adj[a]):
        walk, prev, cur = [a, s], a, s
        while cur not in (a, b):
            nxt = [w for w in G.adj[cur] if w != prev]
            if len(nxt) != 1:
                return None
            prev, cur = cur, nxt[0]
            walk.append(cur)
        if cur != b:
            return None
        paths.append(walk)
    if sum(1 for p in paths if len(p) == 2) > 1:
        return None
    return [a, b], paths


def find_pendant_cycles(G: Graph) -> list[tuple[int, list[int]]]:
    """(attachment, cycle internal vertices) for cycles hanging off a single vertex."""
    out, seen = [], set()
    for c in range(G.n):
        if c in seen or G.degree(c) != 2:
            continue
        ends = []
        for start in sorted(G.adj[c]):
            prev, cur, part = c, start, []
            while G.degree(cur) == 2 and cur != c:
                part.append(cur)
                nxt = [w for w in G.adj[cur] if w != prev]
                prev, cur = cur, nxt[0]
            ends.append((part, cur))
        (p1, e1), (p2, e2) = ends
        if e1 == c or e2 == c:
            continue  # the whole component is a cycle
        chain = list(reversed(p1)) + [c] + p2
        seen.update(chain)
        if e1 == e2 and len(chain) >= 2:
            out.append((e1, chain))
    return out


def _components_without(G: Graph, a: int) -> list[list[int]]:
    rest = [u for u in range(G.n) if u != a]
    sub = G.induced(rest)
    return [[rest[i] for i in comp] for comp in sub.components()]


def _iso_fixing(G1: Graph, G2: Graph, fixed: dict[int, int]) -> dict[int, int] | None:
    """Isomorphism G1 -> G2 extending ``fixed``, by backtracking."""
    if G1.n != G2.n or G1.e != G2.e:
        return None
    img = dict(fixed)
    used = set(img.values())
    for u, x in fixed.items():
        if G1.degree(u) != G2.degree(x):
            return None
    for (u, x), (w, y) in itertools.combinations(fixed.items(), 2):
        if G1.has_edge(u, w) != G2.has_edge(x, y):
            return None
    free = [u for u in range(G1.n) if u not in img]

    def go(i):
        if i == len(free):
            return True
        u = free[i]
        for x in range(G2.n):
            if x in used or G1.degree(u) != G2.degree(x):
                continue
            if all(G1.has_edge(u, w) == G2.has_edge(x, y) for w, y in img.items()):
                img[u] = x
                used.add(x)
                if go(i + 1):
                    return True
                del img[u]
                used.discard(x)
        return False

    return img if go(0) else None


def find_multitree(G: Graph) -> dict | None:
    """A multitree with at least two copies hanging off one vertex of G.

    Recognition is restricted: the bundle must be a union of components of
    ``G - a``, black vertices must be independent, and the copies must be
    isomorphic with every black vertex fixed.  Misses are simply not found.
    """
    for a in range(G.n):
        comps = _components_without(G, a)
        for size in range(1, len(comps)):
            for chosen in itertools.combinations(comps, size):
                verts = [a] + sorted(u for c in chosen for u in c)
                found = _multitree_at(G, verts, a)
                if found is not None:
                    return found
    return None


def _multitree_at(G: Graph, verts: list[int], a: int) -> dict | None:
    M = G.induced(verts)
    m = M.n
    others = list(range(1, m))
    for bsize in range(1, m):
        for extra in itertools.combinations(others, bsize - 1):
            B = [0] + list(extra)
            if any(M.has_edge(u, v) for u, v in itertools.combinations(B, 2)):
                continue
            res = _split_copies(M, B)
            if res is None:
                continue
            tree, black, groups, maps = res
            # multitree numbering: copy 1 keeps tree numbering, later copies append whites
            emb = [verts[maps[0][u]] for u in range(tree.n)]
            whites = [u for u in range(tree.n) if u not in black]
            for mp in maps[1:]:
                emb.extend(verts[mp[u]] for u in whites)
            glue = [u for u in range(tree.n) if maps[0][u] == 0][0]
            return {
                "attach": a,
                "tree": _graph_dict(tree),
                "black": sorted(black),
                "copies": len(groups),
                "glue": glue,
                "embedding": emb,
            }
    return None


def _split_copies(M: Graph, B: list[int]):
    Bset = set(B)
    W = [u for u in range(M.n) if u not in Bset]
    if not W:
        return None
    sub = M.induced(W)
    comps = [[W[i] for i in c] for c in sub.components()]

    def excess(c):
        cs = set(c)
        e = sum(1 for u, v in M.edges if (u in cs or v in cs))
        return e - len(c)

    ex = [excess(c) for c in comps]
    want = len(B) - 1
    if any(x > want for x in ex):
        return None
    groups: list[list[int]] = []

    def valid(group):
        verts = sorted(B + [u for ci in group for u in comps[ci]])
        T = M.induced(verts)
        return T.is_connected() and T.e == T.n - 1, verts

    def attempt():
        trees = []
        for grp in groups:
            ok, verts = valid(grp)
            if not ok:
                return None
            trees.append(verts)
        base_verts = trees[0]
        T = M.induced(base_verts)
        pos = {u: i for i, u in enumerate(base_verts)}
        black = [pos[b] for b in B]
        maps = []
        for verts in trees:
            T2 = M.induced(verts)
            pos2 = {u: i for i, u in enumerate(verts)}
            iso = _iso_fixing(T, T2, {pos[b]: pos2[b] for b in B})
            if iso is None:
                return None
            maps.append({u: verts[iso[u]] for u in range(T.n)})
        return T, black, list(groups), maps

    def go(i, sums):
        if i == len(comps):
            if len(groups) >= 2 and all(s == want for s in sums):
                return attempt()
            return None
        for gi in range(len(groups) + 1):
            if gi == len(groups):
                groups.append([i])
                sums.append(ex[i])
            else:
                if sums[gi] + ex[i] > want:
                    continue
                groups[gi].append(i)
                sums[gi] += ex[i]
            if sums[gi] <= want:
                r = go(i + 1, sums)
                if r is not None:
                    return r
            if len(groups[gi]) == 1 and gi == len(groups) - 1 and groups[gi] == [i]:
                groups.pop()
                sums.pop()
            else:
                groups[gi].remove(i)
                sums[gi] -= ex[i]
        return None

    return go(0, [])


# ---------------------------------------------------------------------------
# base facts


def _edge_extra_ok(G: Graph) -> bool:
    return G.e >= 1


def base_good(G: Graph):
    color = G.bipartition()
    if color is not None:
        cls = cyclomatic_class(G)
        a = sum(1 for c in color if c == 0)
        if G.n <= 9:
            return "BASE-BIPARTITE-SMALL", {"reason": "order<=9", "bipartition": color, "provenance": "literature"}
        if cls == "tree":
            return "BASE-BIPARTITE-SMALL", {"reason": "tree", "bipartition": color, "provenance": "literature"}
        if G.is_connected() and G.e == a * (G.n - a):
            return "BASE-BIPARTITE-SMALL", {"reason": "complete-bipartite", "bipartition": color, "provenance": "literature"}
    if G.n >= 3 and G.e == G.n and G.is_connected() and all(G.degree(u) == 2 for u in range(G.n)):
        return "BASE-NORMING-SUB", {"family": "Cycle", "order": G.n}
    if G.n == 6 and G.e == 12 and canonical_form(G) == canonical_form(cocktail_party(3)):
        return "BASE-NORMING-SUB", {"family": "K222"}
    if is_complete(G):
        return "BASE-COMPLETE", {"order": G.n}
    if G.n >= 3:
        miss = complement_matching(G)
        if miss is not None:
            return "BASE-COCKTAIL", {"missing": [list(e) for e in miss]}
    return None


def base_extra(G: Graph):
    if not _edge_extra_ok(G) or not G.is_connected():
        return None
    cls = cyclomatic_class(G)
    if cls in ("tree", "unicyclic"):
        return "BASE-TREE/UNICYCLIC", {"class": cls}
    th = find_theta(G)
    if th is not None:
        hubs, paths = th
        return "BASE-THETA", {"hubs": hubs, "paths": paths, "lengths": [len(p) - 1 for p in paths]}
    if cls == "bicyclic":
        return "BASE-BICYCLIC", {"class": cls}
    return None


# ---------------------------------------------------------------------------
# search


class Certifier:
    """Memoized prover; one instance may be reused across many graphs."""

    def __init__(self, allow_sketch: bool = True):
        self.allow_sketch = allow_sketch
        self.memo: dict[tuple, Certificate | None] = {}

    def prove(self, G: Graph, target: str, depth: int, coerce: bool = True) -> Certificate | None:
        # proofs are always built on canonical representatives
        Gc = canonical_graph(G)
        key = (Gc.n, Gc.edges, target, depth, coerce)
        if key not in self.memo:
            self.memo[key] = None  # guards against re-entry on the same key
            self.memo[key] = self._prove(Gc, target, depth, coerce)
        return self.memo[key]

    def _prove(self, G: Graph, target: str, depth: int, coerce: bool) -> Certificate | None:
        if target == GOOD:
            return self._prove_good(G, depth, coerce)
        return self._prove_extra(G, depth)

    def _prove_good(self, G, depth, coerce):
        b = base_good(G)
        if b is not None:
            return Certificate(G, GOOD, b[0], b[1])
        if depth <= 0:
            return None
        if coerce:
            p = self.prove(G, EXTRA, depth - 1)
            if p is not None:
                return Certificate(G, GOOD, "COERCE", {}, (p,))
        comps = G.components()
        if len(comps) > 1:
            prem = []
            for c in comps:
                p = self.prove(G.induced(c), GOOD, depth - 1)
                if p is None:
                    break
                prem.append(p)
            else:
                return Certificate(G, GOOD, "RULE-COMPONENTS", {"components": comps}, tuple(prem))
            return None
        return self._dominate(G, GOOD, depth)

    def _prove_extra(self, G, depth):
        b = base_extra(G)
        if b is not None:
            return Certificate(G, EXTRA, b[0], b[1])
        if depth <= 0 or not _edge_extra_ok(G):
            return None
        if G.is_connected() and is_vertex_transitive(G):
            p = self.prove(G, GOOD, depth - 1, coerce=False)
            if p is not None:
                return Certificate(G, EXTRA, "RULE-VT-UPGRADE", {}, (p,))
        for v in range(G.n):
            if G.degree(v) == 1:
                R = G.remove_vertices([v])
                if R.e >= 1:
                    p = self.prove(R, EXTRA, depth - 1)
                    if p is not None:
                        return Certificate(G, EXTRA, "RULE-LEAF", {"leaf": v}, (p,))
        tried = set()
        for a, ring in find_pendant_cycles(G):
            R = G.remove_vertices(ring)
            if R.e < 1:
                continue
            cf = canonical_form(R)
            if cf in tried:
                continue
            tried.add(cf)
            p = self.prove(R, EXTRA, depth - 1)
            if p is not None:
                return Certificate(G, EXTRA, "RULE-PENDANT-CYCLE", {"attach": a, "cycle": [a] + ring}, (p,))
        c = self._dominate(G, EXTRA, depth)
        if c is not None:
            return c
        if self.allow_sketch:
            mt = find_multitree(G)
            if mt is not None:
                removed = set(mt["embedding"]) - {mt["attach"]}
                R = G.remove_vertices(removed)
                if R.e >= 1:
                    p = self.prove(R, EXTRA, depth - 1)
                    if p is not None:
                        mt["provenance"] = "proof-sketch"
                        return Certificate(G, EXTRA, "RULE-MULTITREE-GLUE", mt, (p,))
        return None

    def _dominate(self, G, target, depth):
        if G.n < 2:
            return None
        dom = dominating_vertices(G)
        sketch = {"provenance": "proof-sketch"} if target == EXTRA else {}
        if target == EXTRA and not self.allow_sketch:
            return None
        tried = set()
        for v in dom:
            R = G.remove_vertices([v])
            if target == EXTRA and R.e < 1:
                continue
            cf = canonical_form(R)
            if cf in tried:
                continue
            tried.add(cf)
            p = self.prove(R, target, depth - 1)
            if p is not None:
                return Certificate(G, target, "RULE-DOMINATE-1", {"vertex": v, **sketch}, (p,))
        tried = set()
        for u, w in itertools.combinations(dom_pairs_candidates(G), 2):
            if G.has_edge(u, w):
                continue
            R = G.remove_vertices([u, w])
            if R.n == 0 or (target == EXTRA and R.e < 1):
                continue
            cf = canonical_form(R)
            if cf in tried:
                continue
            tried.add(cf)
            p = self.prove(R, target, depth - 1)
            if p is not None:
                return Certificate(G, target, "RULE-DOMINATE-2", {"pair": [u, w], **sketch}, (p,))
        return None


def dom_pairs_candidates(G: Graph) -> list[int]:
    """Vertices adjacent to all but exactly one other vertex."""
    return [u for u in range(G.n) if G.degree(u) == G.n - 2]


def _relabel_data(rule: str, data: dict, f: Callable[[int], int], n: int) -> dict:
    d = dict(data)
    one = ("leaf", "vertex", "attach")
    for key in one:
        if key in d:
            d[key] = f(d[key])
    for key in ("pair", "hubs", "cycle", "embedding"):
        if key in d:
            d[key] = [f(u) for u in d[key]]
    if "paths" in d:
        d["paths"] = [[f(u) for u in p] for p in d["paths"]]
    if "components" in d:
        d["components"] = [sorted(f(u) for u in c) for c in d["components"]]
    if "missing" in d:
        d["missing"] = sorted(sorted([f(u), f(v)]) for u, v in d["missing"])
    if "bipartition" in d:
        col = [0] * n
        for u, c in enumerate(d["bipartition"]):
            col[f(u)] = c
        d["bipartition"] = col
    return d


def relabel_certificate(c: Certificate, perm: list[int]) -> Certificate:
    """Rename the conclusion's vertices by ``perm``; premises are matched up to isomorphism."""
    G = c.graph.relabel(perm)
    data = _relabel_data(c.rule, c.rule_data, lambda u: perm[u], G.n)
    if c.rule == "RULE-COMPONENTS":
        order = sorted(range(len(data["components"])), key=lambda i: data["components"][i])
        data["components"] = [data["components"][i] for i in order]
        return Certificate(G, c.status, c.rule, data, tuple(c.premises[i] for i in order))
    return Certificate(G, c.status, c.rule, data, c.premises)


@dataclass(frozen=True)
class CertifyResult:
    status: str
    certificate: Certificate | None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


_DEFAULT = Certifier()


def certify(G: Graph, max_depth: int = DEFAULT_DEPTH, certifier: Certifier | None = None) -> CertifyResult:
    """Best status provable for G (ExtraGood over Good), with its certificate."""
    if G.n > ISO_BOUND:
        raise TooLarge(f"certify limited to {ISO_BOUND} vertices")
    cert = certifier or _DEFAULT
    perm = canonical_labeling(G)
    inv = [0] * G.n
    for u, p in enumerate(perm):
        inv[p] = u
    for target in (EXTRA, GOOD):
        c = cert.prove(G, target, max_depth)
        if c is not None:
            return CertifyResult(target, relabel_certificate(c, inv))
    return CertifyResult(UNKNOWN, None)


# ---------------------------------------------------------------------------
# replay


@dataclass(frozen=True)
class Replay:
    ok: bool
    reason: str = ""
    where: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok


def _iso(G: Graph, H: Graph) -> bool:
    return G.n == H.n and G.e == H.e and canonical_form(G) == canonical_form(H)


def replay_certificate(c: Certificate, _where: tuple[int, ...] = ()) -> Replay:
    """Re-check every node's side conditions and premise links."""
    def fail(msg):
        return Replay(False, msg, _where)

    if c.rule not in CONCLUDES:
        return fail(f"unknown rule {c.rule!r}")
    want = CONCLUDES[c.rule]
    if want is not None and c.status != want:
        return fail(f"{c.rule} concludes {want}, not {c.status}")
    if c.status not in (GOOD, EXTRA):
        return fail(f"bad status {c.status!r}")
    try:
        msg = _check_node(c)
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        msg = f"malformed rule data: {exc!r}"
    if msg:
        return fail(msg)
    for i, p in enumerate(c.premises):
        r = replay_certificate(p, _where + (i,))
        if not r:
            return r
    return Replay(True)


def _premise(c: Certificate, count: int = 1) -> str:
    if len(c.premises) != count:
        return f"{c.rule} needs {count} premise(s), got {len(c.premises)}"
    return ""


def _vertex(G: Graph, u) -> bool:
    return isinstance(u, int) and 0 <= u < G.n


def _check_node(c: Certificate) -> str:
    G, d, rule = c.graph, c.rule_data, c.rule
    if rule.startswith("BASE-") and c.premises:
        return "base facts take no premises"
    if rule == "BASE-BIPARTITE-SMALL":
        if not G.is_bipartite():
            return "not bipartite"
        col = G.bipartition()
        a = sum(1 for x in col if x == 0)
        small = G.n <= 9
        tree = cyclomatic_class(G) == "tree"
        kab = G.is_connected() and G.e == a * (G.n - a)
        return "" if (small or tree or kab) else "bipartite but not small, a tree, or complete bipartite"
    if rule == "BASE-NORMING-SUB":
        if d.get("family") == "Cycle":
            return "" if G.n >= 3 and _iso(G, cycle(G.n)) else "not a cycle"
        if d.get("family") == "K222":
            return "" if _iso(G, cocktail_party(3)) else "not the octahedron"
        return "unknown norming family"
    if rule == "BASE-COMPLETE":
        return "" if is_complete(G) else "not complete"
    if rule == "BASE-COCKTAIL":
        miss = G.complement().edges
        used = [u for e in miss for u in e]
        return "" if G.n >= 3 and miss and len(used) == len(set(used)) else "complement is not a set of independent edges"
    if rule == "BASE-TREE/UNICYCLIC":
        return "" if G.e >= 1 and cyclomatic_class(G) in ("tree", "unicyclic") else "not a tree or unicyclic"
    if rule == "BASE-BICYCLIC":
        return "" if cyclomatic_class(G) == "bicyclic" else "not bicyclic"
    if rule == "BASE-THETA":
        ks = [int(k) for k in d["lengths"]]
        try:
            T = theta(*ks)
        except ValueError as exc:
            return f"bad theta lengths: {exc}"
        return "" if _iso(G, T) else "not the stated theta graph"

    msg = _check_premise_links(c)
    return msg


def _cert_needs(c: Certificate, p: Certificate, status: str) -> str:
    return "" if p.status == status else f"premise must be {status}, got {p.status}"


def _check_premise_links(c: Certificate) -> str:
    G, d, rule = c.graph, c.rule_data, c.rule
    if rule == "COERCE":
        m = _premise(c)
        if m:
            return m
        p = c.premises[0]
        return _cert_needs(c, p, EXTRA) or ("" if _iso(p.graph, G) else "premise graph differs")
    if rule == "RULE-VT-UPGRADE":
        m = _premise(c)
        if m:
            return m
        p = c.premises[0]
        if not (G.is_connected() and is_vertex_transitive(G)):
            return "not vertex-transitive"
        return _cert_needs(c, p, GOOD) or ("" if _iso(p.graph, G) else "premise graph differs")
    if rule == "RULE-COMPONENTS":
        comps = [sorted(int(u) for u in x) for x in d["components"]]
        if sorted(comps) != sorted(G.components()) or len(comps) < 2:
            return "components do not match"
        m = _premise(c, len(comps))
        if m:
            return m
        for comp, p in zip(comps, c.premises):
            if p.status != GOOD:
                return "component premise must be Good"
            if not _iso(p.graph, G.induced(comp)):
                return "component premise graph differs"
        return ""
    if rule == "RULE-LEAF":
        m = _premise(c)
        if m:
            return m
        v = d["leaf"]
        if not _vertex(G, v) or G.degree(v) != 1:
            return "not a leaf"
        return _residue(c, [v], EXTRA)
    if rule == "RULE-PENDANT-CYCLE":
        m = _premise(c)
        if m:
            return m
        ring = [int(u) for u in d["cycle"]]
        a = int(d["attach"])
        if len(ring) < 3 or ring[0] != a or len(set(ring)) != len(ring) or not all(_vertex(G, u) for u in ring):
            return "bad cycle data"
        for i in range(len(ring)):
            if not G.has_edge(ring[i], ring[(i + 1) % len(ring)]):
                return "cycle edge missing"
        if any(G.degree(u) != 2 for u in ring[1:]):
            return "cycle vertex other than the attachment has degree != 2"
        return _residue(c, ring[1:], EXTRA)
    if rule in ("RULE-DOMINATE-1", "RULE-DOMINATE-2"):
        m = _premise(c)
        if m:
            return m
        vs = [d["vertex"]] if rule == "RULE-DOMINATE-1" else list(d["pair"])
        if not all(_vertex(G, v) for v in vs) or len(set(vs)) != len(vs):
            return "bad vertex data"
        if rule == "RULE-DOMINATE-2" and G.has_edge(vs[0], vs[1]):
            return "dominating pair is adjacent"
        others = [u for u in range(G.n) if u not in vs]
        if not others:
            return "nothing left after removal"
        for v in vs:
            if any(not G.has_edge(v, u) for u in others):
                return f"vertex {v} does not dominate"
        return _residue(c, vs, c.status)
    if rule == "RULE-MULTITREE-GLUE":
        m = _premise(c)
        if m:
            return m
        T = Graph(int(d["tree"]["n"]), tuple((int(u), int(v)) for u, v in d["tree"]["edges"]))
        spec = MultitreeSpec(T, frozenset(int(b) for b in d["black"]), int(d["copies"]))
        Mt = multitree(spec)
        emb = [int(u) for u in d["embedding"]]
        a, glue = int(d["attach"]), int(d["glue"])
        if len(emb) != Mt.n or len(set(emb)) != Mt.n or not all(_vertex(G, u) for u in emb):
            return "bad embedding"
        if glue not in spec.black or emb[glue] != a:
            return "glued vertex is not a black vertex mapped to the attachment"
        for x, y in itertools.combinations(range(Mt.n), 2):
            if Mt.has_edge(x, y) != G.has_edge(emb[x], emb[y]):
                return "embedding is not an induced copy of the multitree"
        inside = set(emb)
        removed = inside - {a}
        for u in removed:
            if any(w not in inside for w in G.adj[u]):
                return "multitree touches the rest of the graph away from the attachment"
        return _residue(c, sorted(removed), EXTRA)
    return f"no checker for {rule}"


def _residue(c: Certificate, drop, status) -> str:
    p = c.premises[0]
    if p.status != status:
        return f"premise must be {status}, got {p.status}"
    R = c.graph.remove_vertices(drop)
    if status == EXTRA and R.e < 1:
        return "residue has no edges"
    return "" if _iso(p.graph, R) else "premise graph does not match the residue"


# ---------------------------------------------------------------------------
# catalogs


@dataclass(frozen=True)
class CatalogRow:
    graph: Graph
    label: bytes
    status: str
    certificate: Certificate | None


def classify_catalog(n: int, max_depth: int = DEFAULT_DEPTH, certifier: Certifier | None = None) -> list[CatalogRow]:
    """Every connected graph on at most ``n`` vertices with its best provable status."""
    if n > 7:
        raise TooLarge("catalog limited to n <= 7")
    cert = certifier or _DEFAULT
    rows = []
    for m in range(1, n + 1):
        for G in enumerate_connected(m):
            r = certify(G, max_depth, cert)
            rows.append(CatalogRow(G, canonical_form(G), r.status, r.certificate))
    rows.sort(key=lambda r: r.label)
    return rows
