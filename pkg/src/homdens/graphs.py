"""Simple graphs, bipartite graphs and hypergraphs used throughout the package.

Vertices are always ``0..n-1``.  All types are immutable; constructors
normalize their edge sets (sorted pairs, duplicates merged) and reject
self-loops and out-of-range endpoints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

# isomorphism-complete operations refuse graphs above this size
ISO_BOUND = 10


class GraphError(ValueError):
    pass


class SelfLoop(GraphError):
    pass


class IndexOutOfRange(GraphError):
    pass


class InvalidParameter(GraphError):
    pass


class TooLarge(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidParameter(f"vertex count must be >= 0, got {self.n}")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise IndexOutOfRange(f"edge ({u},{v}) out of range for n={self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def v(self) -> int:
        return self.n

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``u`` renamed to ``perm[u]``."""
        return Graph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def remove_vertices(self, drop: Iterable[int]) -> "Graph":
        """Delete vertices; survivors keep their relative order."""
        drop = set(drop)
        keep = [u for u in range(self.n) if u not in drop]
        pos = {u: i for i, u in enumerate(keep)}
        return Graph(
            len(keep),
            tuple((pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos),
        )

    def induced(self, verts: Sequence[int]) -> "Graph":
        """Induced subgraph, vertex ``verts[i]`` becomes ``i``."""
        pos = {u: i for i, u in enumerate(verts)}
        return Graph(
            len(verts),
            tuple((pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos),
        )

    def complement(self) -> "Graph":
        present = set(self.edges)
        return Graph(
            self.n,
            tuple(p for p in itertools.combinations(range(self.n), 2) if p not in present),
        )

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def bipartition(self) -> list[int] | None:
        """2-coloring as a list of 0/1, or None for non-bipartite graphs."""
        color = [-1] * self.n
        for s in range(self.n):
            if color[s] >= 0:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if color[w] < 0:
                        color[w] = 1 - color[u]
                        stack.append(w)
                    elif color[w] == color[u]:
                        return None
        return color

    def is_bipartite(self) -> bool:
        return self.bipartition() is not None


def make_graph(n: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Validated, normalized graph; duplicate edges are merged."""
    return Graph(int(n), tuple((int(u), int(v)) for u, v in edge_list))


def disjoint_union(*graphs: Graph) -> Graph:
    off, edges = 0, []
    for g in graphs:
        edges.extend((u + off, v + off) for u, v in g.edges)
        off += g.n
    return Graph(off, tuple(edges))


@dataclass(frozen=True)
class BipartiteGraph:
    n_left: int
    n_right: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = set()
        for i, j in self.edges:
            if not (0 <= i < self.n_left and 0 <= j < self.n_right):
                raise IndexOutOfRange(
                    f"edge ({i},{j}) out of range for parts ({self.n_left},{self.n_right})"
                )
            norm.add((i, j))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def e(self) -> int:
        return len(self.edges)

    def left_degrees(self) -> list[int]:
        d = [0] * self.n_left
        for i, _ in self.edges:
            d[i] += 1
        return d

    def right_degrees(self) -> list[int]:
        d = [0] * self.n_right
        for _, j in self.edges:
            d[j] += 1
        return d

    def as_graph(self) -> Graph:
        """Forget the sides: left ``i`` -> ``i``, right ``j`` -> ``n_left + j``."""
        return Graph(
            self.n_left + self.n_right,
            tuple((i, self.n_left + j) for i, j in self.edges),
        )


def make_bipartite(n_left: int, n_right: int, edge_list) -> BipartiteGraph:
    return BipartiteGraph(int(n_left), int(n_right), tuple((int(i), int(j)) for i, j in edge_list))


def bipartite_from_graph(G: Graph) -> BipartiteGraph:
    """Split a bipartite simple graph by its 2-coloring (color 0 is the left side)."""
    color = G.bipartition()
    if color is None:
        raise InvalidParameter("graph is not bipartite")
    left = [u for u in range(G.n) if color[u] == 0]
    right = [u for u in range(G.n) if color[u] == 1]
    li = {u: i for i, u in enumerate(left)}
    ri = {u: j for j, u in enumerate(right)}
    edges = []
    for u, v in G.edges:
        if color[u] == 1:
            u, v = v, u
        edges.append((li[u], ri[v]))
    return BipartiteGraph(len(left), len(right), tuple(edges))


@dataclass(frozen=True)
class Hypergraph:
    r: int
    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.r < 1:
            raise InvalidParameter(f"uniformity must be >= 1, got {self.r}")
        norm = set()
        for e in self.edges:
            s = tuple(sorted(e))
            if len(s) != self.r or len(set(s)) != self.r:
                raise InvalidParameter(f"edge {tuple(e)} is not a set of {self.r} distinct vertices")
            if s[0] < 0 or s[-1] >= self.n:
                raise IndexOutOfRange(f"edge {tuple(e)} out of range for n={self.n}")
            norm.add(s)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def e(self) -> int:
        return len(self.edges)


def make_hypergraph(r: int, n: int, edge_list) -> Hypergraph:
    return Hypergraph(int(r), int(n), tuple(tuple(int(x) for x in e) for e in edge_list))


def hypergraph_from_graph(G: Graph) -> Hypergraph:
    return Hypergraph(2, G.n, G.edges)


def subdivision(G: Graph) -> BipartiteGraph:
    """Sub(G): left part V(G), right part E(G) in sorted edge order."""
    return BipartiteGraph(
        G.n, G.e, tuple((x, j) for j, (u, v) in enumerate(G.edges) for x in (u, v))
    )


def incidence(G: Hypergraph) -> BipartiteGraph:
    return BipartiteGraph(
        G.n, G.e, tuple((x, j) for j, e in enumerate(G.edges) for x in e)
    )


# ---------------------------------------------------------------------------
# named families


def complete(n: int) -> Graph:
    if n < 1:
        raise InvalidParameter("Complete requires n >= 1")
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParameter("Cycle requires n >= 3")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path(k: int) -> Graph:
    """Path with ``k`` edges on vertices ``0..k``."""
    if k < 0:
        raise InvalidParameter("Path requires k >= 0")
    return Graph(k + 1, tuple((i, i + 1) for i in range(k)))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}: left part ``0..a-1``, right part ``a..a+b-1``."""
    if a < 1 or b < 1:
        raise InvalidParameter("CompleteBipartite requires a, b >= 1")
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def complete_minus_complete(n: int, m: int) -> Graph:
    """K_n - K_m: vertices ``0..m-1`` pairwise nonadjacent, every other pair adjacent."""
    if not (n > m >= 1):
        raise InvalidParameter("CompleteMinusComplete requires n > m >= 1")
    return Graph(n, tuple((u, v) for u, v in itertools.combinations(range(n), 2) if v >= m))


def cocktail_party(r: int) -> Graph:
    """K_{2r} minus the perfect matching {2i, 2i+1}."""
    if r < 1:
        raise InvalidParameter("CocktailParty requires r >= 1")
    return Graph(
        2 * r,
        tuple((u, v) for u, v in itertools.combinations(range(2 * r), 2) if u // 2 != v // 2),
    )


def theta(*ks: int) -> Graph:
    """Two hubs (vertices 0 and 1) joined by internally disjoint paths of lengths ``ks``.

    Internal vertices are numbered path by path, from hub 0 towards hub 1.
    """
    if len(ks) == 1 and isinstance(ks[0], (list, tuple)):
        ks = tuple(ks[0])
    if len(ks) < 2:
        raise InvalidParameter("Theta requires at least two paths")
    if any(k < 1 for k in ks):
        raise InvalidParameter("Theta path lengths must be >= 1")
    if sum(1 for k in ks if k == 1) > 1:
        raise InvalidParameter("Theta allows at most one path of length 1")
    edges, nxt = [], 2
    for k in ks:
        prev = 0
        for _ in range(k - 1):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
        edges.append((prev, 1))
    return Graph(nxt, tuple(edges))


def cycles_joined(k1: int, k2: int, m: int) -> Graph:
    """Two cycles joined by an ``m``-edge path (``m == 0``: one shared vertex).

    Numbering: first cycle ``0..k1-1`` (attached at 0), then the path's
    new vertices, then the second cycle's remaining vertices.
    """
    if k1 < 3 or k2 < 3 or m < 0:
        raise InvalidParameter("CyclesJoined requires k1, k2 >= 3 and m >= 0")
    edges = [(i, (i + 1) % k1) for i in range(k1)]
    prev, nxt = 0, k1
    for _ in range(m):
        edges.append((prev, nxt))
        prev, nxt = nxt, nxt + 1
    ring = [prev] + list(range(nxt, nxt + k2 - 1))
    edges.extend((ring[i], ring[(i + 1) % k2]) for i in range(k2))
    return Graph(nxt + k2 - 1, tuple(edges))


@dataclass(frozen=True)
class MultitreeSpec:
    tree: Graph
    black: frozenset[int]
    copies: int = 1

    def __post_init__(self):
        object.__setattr__(self, "black", frozenset(self.black))
        t = self.tree
        if not (t.n >= 1 and t.is_connected() and t.e == t.n - 1):
            raise InvalidParameter("multitree base must be a tree")
        if not self.black or not all(0 <= b < t.n for b in self.black):
            raise InvalidParameter("black set must be a nonempty subset of the tree's vertices")
        if self.copies < 1:
            raise InvalidParameter("copies must be >= 1")
        if self.copies > 1 and any(u in self.black and v in self.black for u, v in t.edges):
            raise InvalidParameter("an edge between two black vertices would be duplicated")


def multitree(spec: MultitreeSpec) -> Graph:
    """Glue ``spec.copies`` copies of the tree along their black vertices.

    Copy 1 keeps the tree's numbering; white vertices of later copies are
    appended copy by copy, in tree order.
    """
    t = spec.tree
    whites = [u for u in range(t.n) if u not in spec.black]
    edges, nxt = list(t.edges), t.n
    for _ in range(spec.copies - 1):
        name = {u: u for u in spec.black}
        for u in whites:
            name[u] = nxt
            nxt += 1
        edges.extend((name[u], name[v]) for u, v in t.edges)
    return Graph(nxt, tuple(edges))


def construct_family(name: str, *params) -> Graph:
    """Dispatch by family name, e.g. ``construct_family("Theta", 2, 2, 2)``."""
    table = {
        "complete": complete,
        "cycle": cycle,
        "path": path,
        "completebipartite": complete_bipartite,
        "completeminuscomplete": complete_minus_complete,
        "cocktailparty": cocktail_party,
        "theta": theta,
        "cyclesjoined": cycles_joined,
        "multitree": multitree,
    }
    key = name.replace("_", "").replace("-", "").lower()
    if key not in table:
        raise InvalidParameter(f"unknown family {name!r}")
    return table[key](*params)


# ---------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class StructureReport:
    connected_components: list[list[int]]
    is_bipartite: bool
    cyclomatic_class: str
    leaves: list[int]
    dominating_vertices: list[int]
    is_vertex_transitive: bool = field(default=False)


def cyclomatic_class(G: Graph) -> str:
    if not G.is_connected() or G.n == 0:
        return "other"
    return {-1: "tree", 0: "unicyclic", 1: "bicyclic"}.get(G.e - G.n, "other")


def dominating_vertices(G: Graph) -> list[int]:
    return [u for u in range(G.n) if G.degree(u) == G.n - 1]


def leaves(G: Graph) -> list[int]:
    return [u for u in range(G.n) if G.degree(u) == 1]


def _automorphism_with(G: Graph, src: int, dst: int) -> bool:
    """Is there an automorphism sending ``src`` to ``dst``? Backtracking, BFS order."""
    order, seen = [src], {src}
    for u in order:
        for w in sorted(G.adj[u]):
            if w not in seen:
                seen.add(w)
                order.append(w)
    order += [u for u in range(G.n) if u not in seen]
    img: dict[int, int] = {}
    used: set[int] = set()

    def ok(u, x):
        if G.degree(u) != G.degree(x):
            return False
        for w, y in img.items():
            if G.has_edge(u, w) != G.has_edge(x, y):
                return False
        return True

    def go(i):
        if i == len(order):
            return True
        u = order[i]
        cands = [dst] if i == 0 else range(G.n)
        for x in cands:
            if x in used or not ok(u, x):
                continue
            img[u] = x
            used.add(x)
            if go(i + 1):
                return True
            del img[u]
            used.discard(x)
        return False

    return go(0)


def is_vertex_transitive(G: Graph) -> bool:
    """Exact check: vertex 0 can be mapped to every vertex by an automorphism."""
    if G.n <= 1:
        return True
    if len({G.degree(u) for u in range(G.n)}) > 1:
        return False
    return all(_automorphism_with(G, 0, t) for t in range(1, G.n))


def analyze(G: Graph) -> StructureReport:
    return StructureReport(
        connected_components=G.components(),
        is_bipartite=G.is_bipartite(),
        cyclomatic_class=cyclomatic_class(G),
        leaves=leaves(G),
        dominating_vertices=dominating_vertices(G),
        is_vertex_transitive=is_vertex_transitive(G),
    )


# ---------------------------------------------------------------------------
# canonical labelling


def _refine(G: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition (1-WL, order preserving)."""
    cells = [list(c) for c in cells]
    while True:
        where = {}
        for ci, c in enumerate(cells):
            for u in c:
                where[u] = ci
        out, changed = [], False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {}
            for u in c:
                cnt = [0] * len(cells)
                for w in G.adj[u]:
                    cnt[where[w]] += 1
                sig.setdefault(tuple(cnt), []).append(u)
            if len(sig) == 1:
                out.append(c)
                continue
            changed = True
            for key in sorted(sig, reverse=True):
                out.append(sorted(sig[key]))
        cells = out
        if not changed:
            return cells


def _code(G: Graph, order: list[int]) -> tuple[int, ...]:
    pos = {u: i for i, u in enumerate(order)}
    return tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in G.edges))


def _canon_connected(G: Graph) -> list[int]:
    best = None
    best_order = None
    degs = {}
    for u in range(G.n):
        degs.setdefault(G.degree(u), []).append(u)
    start = _refine(G, [degs[d] for d in sorted(degs, reverse=True)])

    def search(cells):
        nonlocal best, best_order
        if all(len(c) == 1 for c in cells):
            order = [c[0] for c in cells]
            code = _code(G, order)
            if best is None or code < best:
                best, best_order = code, order
            return
        # first smallest nontrivial cell is an isomorphism invariant choice
        target = min((i for i, c in enumerate(cells) if len(c) > 1), key=lambda i: (len(cells[i]), i))
        for u in cells[target]:
            rest = [w for w in cells[target] if w != u]
            nxt = cells[:target] + [[u], rest] + cells[target + 1:]
            search(_refine(G, nxt))

    search(start)
    perm = [0] * G.n
    for i, u in enumerate(best_order):
        perm[u] = i
    return perm


def canonical_labeling(G: Graph) -> list[int]:
    """Permutation ``perm`` such that ``G.relabel(perm)`` is the canonical graph."""
    if G.n > ISO_BOUND:
        raise TooLarge(f"canonical form limited to {ISO_BOUND} vertices, got {G.n}")
    return _labeling(G)


def canonical_graph(G: Graph) -> Graph:
    """A fixed representative of G's isomorphism class."""
    return G.relabel(canonical_labeling(G))


def _labeling(G: Graph) -> list[int]:
    if G.n <= 1:
        return list(range(G.n))
    comps = G.components()
    if len(comps) > 1:
        parts = []
        for c in comps:
            sub = G.induced(c)
            p = _labeling(sub)
            parts.append((sub.relabel(p), c, p))
        parts.sort(key=lambda t: (t[0].n, _encode(t[0])))
        perm, off = [0] * G.n, 0
        for H, c, p in parts:
            for i, u in enumerate(c):
                perm[u] = off + p[i]
            off += H.n
        return perm
    co = G.complement()
    if not co.is_connected():
        return _labeling(co)
    return _canon_connected(G)


def _encode(G: Graph) -> bytes:
    return f"{G.n}:" .encode() + ",".join(f"{u}-{v}" for u, v in G.edges).encode()


def canonical_form(G: Graph) -> bytes:
    """Byte label, equal for two graphs iff they are isomorphic."""
    return _encode(canonical_graph(G))


def is_isomorphic(G: Graph, H: Graph) -> bool:
    return G.n == H.n and G.e == H.e and canonical_form(G) == canonical_form(H)


# ---------------------------------------------------------------------------
# enumeration

_CONNECTED_CACHE: dict[int, tuple[Graph, ...]] = {}
_ALL_CACHE: dict[int, tuple[Graph, ...]] = {}


def _grow(base: Iterable[Graph], n: int, need_neighbor: bool) -> tuple[Graph, ...]:
    seen = {}
    for H in base:
        m = H.n
        for mask in range(1 if need_neighbor else 0, 1 << m):
            nb = [u for u in range(m) if mask >> u & 1]
            G = Graph(n, H.edges + tuple((u, m) for u in nb))
            cg = canonical_graph(G)
            seen.setdefault(_encode(cg), cg)
    return tuple(seen[k] for k in sorted(seen))


def enumerate_connected(n: int) -> tuple[Graph, ...]:
    """One canonical representative per connected graph on ``n`` vertices.

    Every connected graph has a non-cut vertex, so adding a vertex with a
    nonempty neighbourhood to each connected graph on ``n-1`` vertices
    reaches all classes.
    """
    if n > 7:
        raise TooLarge("enumeration limited to n <= 7")
    if n < 1:
        return ()
    if n not in _CONNECTED_CACHE:
        if n == 1:
            _CONNECTED_CACHE[1] = (Graph(1, ()),)
        else:
            _CONNECTED_CACHE[n] = _grow(enumerate_connected(n - 1), n, True)
    return _CONNECTED_CACHE[n]


def enumerate_graphs(n: int) -> tuple[Graph, ...]:
    """One canonical representative per graph (connected or not) on ``n`` vertices."""
    if n > 7:
        raise TooLarge("enumeration limited to n <= 7")
    if n < 1:
        return (Graph(0, ()),) if n == 0 else ()
    if n not in _ALL_CACHE:
        _ALL_CACHE[n] = (Graph(1, ()),) if n == 1 else _grow(enumerate_graphs(n - 1), n, False)
    return _ALL_CACHE[n]
