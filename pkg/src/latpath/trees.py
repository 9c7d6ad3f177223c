"""Complexity-<=2 paths as vertex-labelled planar rooted trees.

A tree vertex holds an ordered item list; an item is a child vertex or an
input slot.  Labelled vertices carry a colour (each colour exactly once);
unlabelled vertices are either joins (>= 2 items, all of them labelled
vertices or slots) or stumps (no items).  The boundary walk emitting one
letter per sector of a labelled vertex and one bar per input slot is the
single source of truth for the string order.
"""

from __future__ import annotations

from .paths import LatticePath, PathError, complexity


SLOT = "slot"


class TreeError(ValueError):
    pass


class TreeVertex:
    """Planar vertex: label is a colour or None; items are TreeVertex/SLOT."""

    __slots__ = ("label", "items")

    def __init__(self, label, items=()):
        self.label = label
        self.items = tuple(items)

    @property
    def arity(self):
        return len(self.items)

    def __eq__(self, other):
        return (
            isinstance(other, TreeVertex)
            and self.label == other.label
            and self.items == other.items
        )

    def __hash__(self):
        return hash((self.label, self.items))

    def __repr__(self):
        return "TreeVertex(%s)" % format_tree(self)


def _check_vertex(v, is_root):
    if v.label is None:
        if v.arity == 1 and not (is_root and v.items[0] is SLOT):
            # an unlabelled valence-2 vertex would have to be labelled
            raise TreeError("unlabelled vertex of arity 1")
        for item in v.items:
            if isinstance(item, TreeVertex) and item.label is None:
                # inner edge with two unlabelled extremities
                raise TreeError("unlabelled vertex with unlabelled child")
    for item in v.items:
        if isinstance(item, TreeVertex):
            _check_vertex(item, False)
        elif item is not SLOT:
            raise TreeError("bad item %r" % (item,))


def validate_tree(root: TreeVertex):
    """Check labels 1..k each once plus the valence and inner-edge rules."""
    labels = []

    def collect(v):
        if v.label is not None:
            labels.append(v.label)
        for item in v.items:
            if isinstance(item, TreeVertex):
                collect(item)

    collect(root)
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise TreeError("labels %s are not 1..k without repeats" % sorted(labels))
    _check_vertex(root, True)
    return len(labels)


# ---------------------------------------------------------------------------
# s-expression text form: "(v1 [slot] (v2 [slot]))", "(u ...)" unlabelled


def format_tree(root: TreeVertex) -> str:
    head = "u" if root.label is None else "v%d" % root.label
    parts = [head]
    for item in root.items:
        parts.append("[slot]" if item is SLOT else format_tree(item))
    return "(" + " ".join(parts) + ")"


def _tokenize_tree(text):
    for chunk in text.replace("(", " ( ").replace(")", " ) ").split():
        yield chunk


def parse_tree(text: str) -> TreeVertex:
    tokens = list(_tokenize_tree(text))
    pos = 0

    def parse_vertex():
        nonlocal pos
        if tokens[pos] != "(":
            raise TreeError("expected '(' at token %d" % pos)
        pos += 1
        head = tokens[pos]
        pos += 1
        if head == "u":
            label = None
        elif head.startswith("v") and head[1:].isdigit():
            label = int(head[1:])
        else:
            raise TreeError("bad vertex head %r" % head)
        items = []
        while tokens[pos] != ")":
            if tokens[pos] == "[slot]":
                items.append(SLOT)
                pos += 1
            else:
                items.append(parse_vertex())
        pos += 1
        return TreeVertex(label, items)

    root = parse_vertex()
    if pos != len(tokens):
        raise TreeError("trailing tokens after tree")
    validate_tree(root)
    return root


# ---------------------------------------------------------------------------
# path -> tree


def _parse_segment(tokens):
    """Parse a token segment into an item list.

    Tokens are ("bar",) or ("letter", colour).  Top-level colour spans become
    labelled vertices; bars between spans become input slots.
    """
    items = []
    idx = 0
    while idx < len(tokens):
        tok = tokens[idx]
        if tok[0] == "bar":
            items.append(SLOT)
            idx += 1
            continue
        colour = tok[1]
        last = max(p for p, t in enumerate(tokens) if t == ("letter", colour))
        span = tokens[idx : last + 1]
        occ_positions = [p for p, t in enumerate(span) if t == ("letter", colour)]
        gap_items = []
        for a, b in zip(occ_positions, occ_positions[1:]):
            gap = span[a + 1 : b]
            parsed = _parse_segment(gap)
            if len(parsed) == 0:
                gap_items.append(TreeVertex(None))  # silent stump
            elif len(parsed) == 1:
                gap_items.append(parsed[0])
            else:
                gap_items.append(TreeVertex(None, parsed))
        items.append(TreeVertex(colour, gap_items))
        idx = last + 1
    return items


def path_to_tree(x: LatticePath) -> TreeVertex:
    """The labelled tree of a complexity-<=2 path (nested colour spans)."""
    if complexity(x) > 2:
        raise PathError("complexity exceeds 2; spans are not nested")
    tokens = []
    for s, w in enumerate(x.substrings):
        for a in w:
            tokens.append(("letter", a))
        if s < x.arity_out:
            tokens.append(("bar",))
    items = _parse_segment(tokens)
    if len(items) == 1 and isinstance(items[0], TreeVertex):
        root = items[0]
    else:
        root = TreeVertex(None, items)
    validate_tree(root)
    return root


# ---------------------------------------------------------------------------
# tree -> path: the boundary walk


def _walk(v, emit):
    if v.label is not None:
        emit(("letter", v.label))
    for item in v.items:
        if item is SLOT:
            emit(("bar",))
        else:
            _walk(item, emit)
        if v.label is not None:
            emit(("letter", v.label))


def tree_to_path(root: TreeVertex) -> LatticePath:
    """Emit the clockwise boundary walk: letters per sector, bars per slot."""
    k = validate_tree(root)
    out = []
    _walk(root, out.append)
    subs = [[]]
    for tok in out:
        if tok[0] == "bar":
            subs.append([])
        else:
            subs[-1].append(tok[1])
    return LatticePath(k, subs)


# ---------------------------------------------------------------------------
# evaluation in a multiplicative non-symmetric operad


def tree_evaluate(x: LatticePath, elements, operad):
    """Substitute elements[i-1] at vertex v(i) of the tree of x.

    operad must provide arity(p), compose(p, i, q) with 1-based slots, and
    mult(m) giving the distinguished m-ary multiplication.  Free input slots
    are filled left to right.
    """
    if len(elements) != x.colours:
        raise PathError("need one element per colour")
    arities = x.arities()
    for i, p in enumerate(elements):
        if operad.arity(p) != arities[i]:
            raise PathError(
                "element %d has arity %d, colour needs %d"
                % (i + 1, operad.arity(p), arities[i])
            )
    tree = path_to_tree(x)

    def value(v):
        base = operad.mult(v.arity) if v.label is None else elements[v.label - 1]
        pos = 1
        for item in v.items:
            if item is SLOT:
                pos += 1
            else:
                q = value(item)
                base = operad.compose(base, pos, q)
                pos += operad.arity(q)
        return base

    return value(tree)


# ---------------------------------------------------------------------------
# exhaustive tree enumeration (test oracle)


def enumerate_trees(k, n, max_arity=3):
    """All valid trees with labels 1..k and n input slots, small arities.

    Labelled arities and join arities are bounded by max_arity; silent
    stumps only ever appear under labelled vertices (as the walk forces).
    """

    def splits(items, parts):
        if parts == 0:
            if not items:
                yield ()
            return
        for head in range(len(items) + 1):
            for rest in splits(items[head:], parts - 1):
                yield (items[:head],) + rest

    def vertices(labels, slots, allow_unlabelled_root):
        # trees using exactly this label set and this many slots
        labels = tuple(sorted(labels))
        for root_label in labels:
            rest = tuple(a for a in labels if a != root_label)
            for arity in range(0, max_arity + 1):
                for lab_split, slot_split in _assignments(rest, slots, arity, splits):
                    for items in _item_lists(lab_split, slot_split, vertices):
                        yield TreeVertex(root_label, items)
        if allow_unlabelled_root and (len(labels) + slots) >= 2:
            for arity in range(2, max_arity + 1):
                for lab_split, slot_split in _assignments(labels, slots, arity, splits):
                    for items in _item_lists(
                        lab_split, slot_split, vertices, under_join=True
                    ):
                        yield TreeVertex(None, items)

    def _assignments(labels, slots, arity, splits):
        for lab_split in splits(labels, arity):
            for slot_counts in _compositions(slots, arity):
                yield lab_split, slot_counts

    def _compositions(total, parts):
        if parts == 0:
            if total == 0:
                yield ()
            return
        for head in range(total + 1):
            for rest in _compositions(total - head, parts - 1):
                yield (head,) + rest

    def _item_lists(lab_split, slot_split, vertices, under_join=False):
        # each item position gets either a slot, a stump, or a labelled subtree
        def per_position(t):
            labs, nslots = lab_split[t], slot_split[t]
            if nslots == 1 and not labs:
                yield SLOT
            if nslots == 0 and not labs and not under_join:
                yield TreeVertex(None)  # stump under a labelled vertex
            if nslots >= 2 and not labs and not under_join:
                yield TreeVertex(None, (SLOT,) * nslots)
            if labs:
                for sub in vertices(labs, nslots, not under_join):
                    if under_join and sub.label is None:
                        continue
                    yield sub

        def rec(t):
            if t == len(lab_split):
                yield ()
                return
            for head in per_position(t):
                for tail in rec(t + 1):
                    yield (head,) + tail

        yield from rec(0)

    seen = set()
    if k == 0:
        candidates = []
        if n == 0:
            candidates.append(TreeVertex(None))
        if n == 1:
            candidates.append(TreeVertex(None, (SLOT,)))
        if n >= 2:
            candidates.append(TreeVertex(None, (SLOT,) * n))
        for t in candidates:
            validate_tree(t)
            yield t
        return
    for root in vertices(tuple(range(1, k + 1)), n, True):
        try:
            validate_tree(root)
        except TreeError:
            continue
        if root not in seen:
            seen.add(root)
            yield root
