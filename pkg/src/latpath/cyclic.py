"""The cyclic extension: marked paths, circular substitution, rotations.

A cyclic path is a plain path plus one distinguished occurrence per colour.
Domain element j of colour i names the occurrence (marker_i + j) mod
(n_i + 1) in string order, so each component of the underlying join map
factors as a rotation followed by a monotone operator.
"""

from __future__ import annotations

from .paths import (
    LatticePath,
    PathError,
    _scan_letters,
    _format_letter,
    complexity,
    format_path,
)


class CyclicLatticePath:
    """A lattice path with a marked occurrence for every colour."""

    __slots__ = ("base", "markers")

    def __init__(self, base: LatticePath, markers):
        markers = tuple(markers)
        if len(markers) != base.colours:
            raise PathError("need one marker per colour")
        for i, m in enumerate(markers, start=1):
            if not 0 <= m <= base.arity_in(i):
                raise PathError("marker for colour %d out of range" % i)
        self.base = base
        self.markers = markers

    def component_values(self, i):
        """Substring index of domain element j of colour i, j = 0..n_i."""
        occ = self.base.occurrences(i)
        m = self.markers[i - 1]
        return tuple(occ[(m + j) % len(occ)] for j in range(len(occ)))

    def __eq__(self, other):
        return (
            isinstance(other, CyclicLatticePath)
            and self.base == other.base
            and self.markers == other.markers
        )

    def __hash__(self):
        return hash((self.base, self.markers))

    def __repr__(self):
        return "CyclicLatticePath(%r)" % format_cyclic(self)

    def __str__(self):
        return format_cyclic(self)


def format_cyclic(x: CyclicLatticePath) -> str:
    """Marked text form with '^' before each distinguished letter."""
    seen = [0] * x.base.colours
    parts = []
    for w in x.base.substrings:
        buf = []
        for a in w:
            if seen[a - 1] == x.markers[a - 1]:
                buf.append("^")
            buf.append(_format_letter(a))
            seen[a - 1] += 1
        parts.append("".join(buf))
    return "|".join(parts)


def parse_cyclic(text: str) -> CyclicLatticePath:
    """Parse marked syntax like "1|^2^1|^3|123"."""
    subs, marked = [], []
    pending = False
    for part in text.split("|"):
        word = []
        for tok in _scan_letters(part, allow_marker=True):
            if tok == "^":
                if pending:
                    raise PathError("dangling '^'")
                pending = True
            else:
                word.append(tok)
                marked.append(pending)
                pending = False
        if pending:
            raise PathError("dangling '^'")
        subs.append(tuple(word))
    letters = [a for w in subs for a in w]
    k = max(letters) if letters else 0
    base = LatticePath(k, subs)
    markers = [None] * k
    seen = [0] * k
    for flag, a in zip(marked, letters):
        if flag:
            if markers[a - 1] is not None:
                raise PathError("colour %d marked twice" % a)
            markers[a - 1] = seen[a - 1]
        seen[a - 1] += 1
    for i, m in enumerate(markers, start=1):
        if m is None:
            raise PathError("colour %d has no marker" % i)
    return CyclicLatticePath(base, markers)


def with_zero_markers(x: LatticePath) -> CyclicLatticePath:
    return CyclicLatticePath(x, (0,) * x.colours)


def cyclic_identity(n: int) -> CyclicLatticePath:
    from .paths import identity_path

    return with_zero_markers(identity_path(n))


# ---------------------------------------------------------------------------
# circular composition


def compose_cyclic(x: CyclicLatticePath, i: int, y: CyclicLatticePath):
    """Substitute y into colour i: the leftmost substring of y lands on the
    marked occurrence, the following substrings continue circularly."""
    bx, by = x.base, y.base
    if not 1 <= i <= bx.colours:
        raise PathError("slot %d out of range" % i)
    r = bx.multiplicity(i)
    if r != by.arity_out + 1:
        raise PathError(
            "colour %d occurs %d times but y has %d substrings"
            % (i, r, by.arity_out + 1)
        )
    l = by.colours
    mi = x.markers[i - 1]
    # tag every letter so markers can be located after substitution;
    # an (origin, colour, occurrence) triple identifies a letter uniquely
    pieces = []
    seen_y = [0] * l
    for w in by.substrings:
        piece = []
        for b in w:
            piece.append(("y", b + (i - 1), b, seen_y[b - 1]))
            seen_y[b - 1] += 1
        pieces.append(piece)
    out = [[] for _ in bx.substrings]
    seen_x = [0] * bx.colours
    for s, w in enumerate(bx.substrings):
        for a in w:
            occ = seen_x[a - 1]
            seen_x[a - 1] += 1
            if a == i:
                out[s].extend(pieces[(occ - mi) % r])
            elif a < i:
                out[s].append(("x", a, a, occ))
            else:
                out[s].append(("x", a + l - 1, a, occ))
    base = LatticePath(
        bx.colours - 1 + l, tuple(tuple(t[1] for t in w) for w in out)
    )
    # markers: locate the image of each originally marked letter
    wanted = {}
    for b in range(1, l + 1):
        wanted[("y", b, y.markers[b - 1])] = b + (i - 1)
    for a in range(1, bx.colours + 1):
        if a != i:
            new = a if a < i else a + l - 1
            wanted[("x", a, x.markers[a - 1])] = new
    markers = [None] * base.colours
    counts = [0] * base.colours
    for w in out:
        for origin, new, old, occ in w:
            if wanted.get((origin, old, occ)) == new:
                markers[new - 1] = counts[new - 1]
            counts[new - 1] += 1
    return CyclicLatticePath(base, markers)


# ---------------------------------------------------------------------------
# rotation of the output circle


def output_rotate(x: CyclicLatticePath, steps: int = 1) -> CyclicLatticePath:
    """Act by the cyclic generator tau_n^steps: substring s moves to
    s + steps mod (n+1); markers follow their letters."""
    b = x.base
    n1 = b.arity_out + 1
    steps %= n1
    if steps == 0:
        return x
    subs = b.substrings[-steps:] + b.substrings[:-steps]
    # letters of colour i in the old string, in order; occurrence m_i is
    # marked; find its occurrence index after the block rotation
    new_base = LatticePath(b.colours, subs)
    markers = []
    for i in range(1, b.colours + 1):
        old = b.occurrences(i)
        m = x.markers[i - 1]
        # occurrences moving from the last `steps` substrings jump to the front
        order = sorted(
            range(len(old)), key=lambda t: (0 if old[t] >= n1 - steps else 1, t)
        )
        markers.append(order.index(m))
    return CyclicLatticePath(new_base, markers)


def rotation_orbit(x: CyclicLatticePath):
    n1 = x.base.arity_out + 1
    return [output_rotate(x, s) for s in range(n1)]


def cyclic_complexity(x: CyclicLatticePath) -> int:
    """Least even upper bound for all pair complexities over the orbit."""
    if x.base.colours <= 1:
        return 0
    worst = max(complexity(g.base) for g in rotation_orbit(x))
    return worst + (worst % 2)


# ---------------------------------------------------------------------------
# generic cyclic operad axiom checker


def cyclic_axiom_check(operad, elements_by_arity, max_arity=3):
    """Verify the tau-compatibility of circle-i products and unit fixedness.

    operad needs arity(p), compose(p, i, q), rotate(p) (the generator of
    C_[arity]), unit(), and eq(p, q).  elements_by_arity maps m to a list of
    test elements of arity m.  Returns (ok, failures).
    """
    failures = []
    unit = operad.unit()
    if not operad.eq(operad.rotate(unit), unit):
        failures.append(("unit not fixed by rotation",))

    def rot(p, times=1):
        for _ in range(times):
            p = operad.rotate(p)
        return p

    for m, xs in elements_by_arity.items():
        if m > max_arity or m < 1:
            continue
        for n, ys in elements_by_arity.items():
            if n > max_arity or n < 1:
                continue
            for xv in xs:
                for yv in ys:
                    for i in range(1, m + 1):
                        lhs = rot(operad.compose(xv, i, yv))
                        if i == 1:
                            rhs = operad.compose(rot(yv), n, rot(xv))
                        else:
                            rhs = operad.compose(rot(xv), i - 1, yv)
                        if not operad.eq(lhs, rhs):
                            failures.append(("equivariance", m, n, i))
    for m, xs in elements_by_arity.items():
        for xv in xs:
            if not operad.eq(rot(xv, m + 1), xv):
                failures.append(("torsion", m))
    return (not failures), failures
