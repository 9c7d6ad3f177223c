"""The complete graph operad, its extension, and the complexity morphism.

An element on k vertices is an edge labelling mu_ij in N for i < j together
with an acyclic orientation.  Strict elements carry a global vertex order
(an acyclic orientation given by a topological order); extended elements
carry free per-edge orientations subject to the no-monochromatic-cycle rule.
"""

from __future__ import annotations

from .paths import LatticePath, PathError, complexity_table, compose as compose_path


class GraphError(ValueError):
    pass


class CompleteGraphElement:
    """Edge-labelled oriented complete graph on vertices 1..k.

    edges maps (i, j) with i < j to (label, forward) where forward is True
    when the edge is oriented i -> j.  order, when given, is the vertex
    order tuple realizing a global acyclic orientation (strict form).
    """

    __slots__ = ("k", "edges", "order")

    def __init__(self, k, edges, order=None):
        self.k = k
        self.edges = {}
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                if (i, j) not in edges:
                    raise GraphError("missing edge (%d,%d)" % (i, j))
                label, forward = edges[(i, j)]
                if label < 0:
                    raise GraphError("labels must be natural numbers")
                self.edges[(i, j)] = (int(label), bool(forward))
        if order is not None:
            order = tuple(order)
            if sorted(order) != list(range(1, k + 1)):
                raise GraphError("order is not a permutation of 1..%d" % k)
            pos = {v: t for t, v in enumerate(order)}
            for (i, j), (_, forward) in self.edges.items():
                if forward != (pos[i] < pos[j]):
                    raise GraphError("order inconsistent with edge orientations")
        self.order = order

    @classmethod
    def from_order(cls, k, labels, order):
        """Strict element from labels {(i,j): mu} and a vertex order."""
        pos = {v: t for t, v in enumerate(order)}
        edges = {
            (i, j): (labels[(i, j)], pos[i] < pos[j])
            for i in range(1, k + 1)
            for j in range(i + 1, k + 1)
        }
        return cls(k, edges, order)

    @property
    def is_strict(self):
        return self.order is not None

    def label(self, i, j):
        return self.edges[(min(i, j), max(i, j))][0]

    def oriented(self, i, j):
        """True when the edge between i and j points i -> j."""
        a, b = min(i, j), max(i, j)
        forward = self.edges[(a, b)][1]
        return forward if (i, j) == (a, b) else not forward

    def __eq__(self, other):
        return (
            isinstance(other, CompleteGraphElement)
            and self.k == other.k
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.k, tuple(sorted(self.edges.items()))))

    def __repr__(self):
        return "CompleteGraphElement(%s)" % format_graph(self)


def format_graph(e: CompleteGraphElement) -> str:
    """Text form "k=3; 12:1+,13:0-,23:2+" (sign '+' means i -> j)."""
    parts = []
    for i in range(1, e.k + 1):
        for j in range(i + 1, e.k + 1):
            label, forward = e.edges[(i, j)]
            parts.append("%d%d:%d%s" % (i, j, label, "+" if forward else "-"))
    return "k=%d; %s" % (e.k, ",".join(parts)) if parts else "k=%d;" % e.k


def leq(a: CompleteGraphElement, b: CompleteGraphElement) -> bool:
    """Product order: on each edge (m,s) <= (n,t) iff m < n or (m,s) = (n,t)."""
    if a.k != b.k:
        raise GraphError("sizes differ")
    for key, (m, s) in a.edges.items():
        n, t = b.edges[key]
        if not (m < n or (m, s) == (n, t)):
            return False
    return True


def is_extended_valid(e: CompleteGraphElement) -> bool:
    """No directed cycle whose edges all carry the same label."""
    labels = {lab for lab, _ in e.edges.values()}
    for lab in labels:
        adjacency = {v: [] for v in range(1, e.k + 1)}
        for (i, j), (l, forward) in e.edges.items():
            if l == lab:
                if forward:
                    adjacency[i].append(j)
                else:
                    adjacency[j].append(i)
        # Kahn peeling on the single-label subgraph
        indeg = {v: 0 for v in adjacency}
        for v, outs in adjacency.items():
            for w in outs:
                indeg[w] += 1
        stack = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for w in adjacency[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        if seen != e.k:
            return False
    return True


def graph_identity():
    return CompleteGraphElement(1, {}, order=(1,))


def compose_graphs(a: CompleteGraphElement, i: int, b: CompleteGraphElement):
    """Substitute b at vertex i of a; labels between blocks come from a."""
    if not 1 <= i <= a.k:
        raise GraphError("slot %d out of range" % i)
    k = a.k - 1 + b.k

    def block(v):
        # vertex of a owning the new vertex v, and v's index inside b (or None)
        if v < i:
            return v, None
        if v < i + b.k:
            return i, v - i + 1
        return v - b.k + 1, None

    edges = {}
    for v in range(1, k + 1):
        for w in range(v + 1, k + 1):
            (bv, inner_v), (bw, inner_w) = block(v), block(w)
            if bv == bw == i and inner_v is not None and inner_w is not None:
                lab = b.label(inner_v, inner_w)
                fwd = b.oriented(inner_v, inner_w)
            else:
                lab = a.label(bv, bw)
                fwd = a.oriented(bv, bw)
            edges[(v, w)] = (lab, fwd)
    order = None
    if a.is_strict and b.is_strict:
        order = []
        for v in a.order:
            if v == i:
                order.extend(u + i - 1 for u in b.order)
            elif v < i:
                order.append(v)
            else:
                order.append(v + b.k - 1)
        order = tuple(order)
    return CompleteGraphElement(k, edges, order)


def filtration_stage(e: CompleteGraphElement) -> int:
    """Least m with all labels < m, i.e. max label + 1 (0 for k <= 1)."""
    if not e.edges:
        return 0
    return max(lab for lab, _ in e.edges.values()) + 1


# ---------------------------------------------------------------------------
# the complexity morphism from lattice paths


def first_occurrence_order(x: LatticePath):
    """Colours in order of first occurrence (the earliest permutation
    subsequence of the word)."""
    order = []
    for a, _ in x.letters():
        if a not in order:
            order.append(a)
    return tuple(order)


def ctot(x: LatticePath) -> CompleteGraphElement:
    """x |-> (c_ij(x) - 1, orientation by first occurrence)."""
    order = first_occurrence_order(x)
    table = complexity_table(x)
    labels = {key: c - 1 for key, c in table.items()}
    return CompleteGraphElement.from_order(x.colours, labels, order)
