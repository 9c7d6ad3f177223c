"""Core combinatorics of coloured lattice paths.

A path over colours 1..k with output arity n is stored as the tuple of its
n+1 substrings (words over {1..k}); the bars of the ASCII form are the gaps
between substrings.  Every colour must occur at least once.  Colour i with
multiplicity n_i + 1 is an input of arity n_i.

All values here are immutable and all operations are pure functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial


class PathError(ValueError):
    """Malformed path text or an operation violating a path invariant."""


# ---------------------------------------------------------------------------
# the path type


class LatticePath:
    """An operad element: k colours, n+1 substrings over {1..k}."""

    __slots__ = ("colours", "substrings", "_letters")

    def __init__(self, colours, substrings):
        substrings = tuple(tuple(w) for w in substrings)
        if colours < 0 or not substrings:
            raise PathError("need colours >= 0 and at least one substring")
        seen = set()
        for w in substrings:
            for a in w:
                if not 1 <= a <= colours:
                    raise PathError("letter %r out of colour range 1..%d" % (a, colours))
                seen.add(a)
        if len(seen) != colours:
            missing = sorted(set(range(1, colours + 1)) - seen)
            raise PathError("missing colours %s" % missing)
        self.colours = colours
        self.substrings = substrings
        self._letters = None

    # -- derived structure

    @property
    def arity_out(self):
        return len(self.substrings) - 1

    def letters(self):
        """Letters in string order as (colour, substring index) pairs."""
        if self._letters is None:
            self._letters = tuple(
                (a, s) for s, w in enumerate(self.substrings) for a in w
            )
        return self._letters

    def multiplicity(self, i):
        return sum(1 for a, _ in self.letters() if a == i)

    def arity_in(self, i):
        return self.multiplicity(i) - 1

    def arities(self):
        """The input arities (n_1, ..., n_k)."""
        counts = [0] * self.colours
        for a, _ in self.letters():
            counts[a - 1] += 1
        return tuple(c - 1 for c in counts)

    def occurrences(self, i):
        """Substring indices of colour i's occurrences, in string order."""
        return tuple(s for a, s in self.letters() if a == i)

    def word(self):
        """Bar-free letter sequence."""
        return tuple(a for a, _ in self.letters())

    # -- value semantics

    def __eq__(self, other):
        return (
            isinstance(other, LatticePath)
            and self.colours == other.colours
            and self.substrings == other.substrings
        )

    def __hash__(self):
        return hash((self.colours, self.substrings))

    def __repr__(self):
        return "LatticePath(%r)" % format_path(self)

    def __str__(self):
        return format_path(self)


# ---------------------------------------------------------------------------
# text form: letters 1..9, "(10)" beyond, '|' between substrings


def _format_letter(a):
    return str(a) if a <= 9 else "(%d)" % a


def format_path(x: LatticePath) -> str:
    return "|".join("".join(_format_letter(a) for a in w) for w in x.substrings)


def _scan_letters(text, allow_marker=False):
    """Tokenize one substring; yields letters and (with allow_marker) '^'."""
    i = 0
    while i < len(text):
        c = text[i]
        if c == "^" and allow_marker:
            yield "^"
            i += 1
        elif c.isdigit():
            if c == "0":
                raise PathError("colour 0 is not a letter")
            yield int(c)
            i += 1
        elif c == "(":
            j = text.find(")", i)
            if j < 0:
                raise PathError("unbalanced '(' in %r" % text)
            body = text[i + 1 : j]
            if not body.isdigit() or int(body) == 0:
                raise PathError("malformed token %r" % text[i : j + 1])
            yield int(body)
            i = j + 1
        else:
            raise PathError("unexpected character %r" % c)


def parse_path(text: str) -> LatticePath:
    """Parse "1||12|3|2" style text; rejects strings missing a colour."""
    subs = []
    for part in text.split("|"):
        subs.append(tuple(_scan_letters(part)))
    letters = [a for w in subs for a in w]
    k = max(letters) if letters else 0
    return LatticePath(k, subs)


# ---------------------------------------------------------------------------
# operad structure


def identity_path(n: int) -> LatticePath:
    """The unit of colour arity n: one colour, one letter per substring."""
    if n < 0:
        raise PathError("arity must be >= 0")
    return LatticePath(1, tuple((1,) for _ in range(n + 1)))


def compose(x: LatticePath, i: int, y: LatticePath) -> LatticePath:
    """Substitute y into colour i of x (renumbering + string substitution).

    The j-th substring of y, read as a bar-free word, replaces the j-th
    occurrence of colour i in x.  y's colours are spliced in at slot i and
    the higher colours of x are shifted up.
    """
    if not 1 <= i <= x.colours:
        raise PathError("slot %d out of range 1..%d" % (i, x.colours))
    r = x.multiplicity(i)
    if r != y.arity_out + 1:
        raise PathError(
            "colour %d occurs %d times but y has %d substrings"
            % (i, r, y.arity_out + 1)
        )
    l = y.colours
    pieces = [tuple(a + (i - 1) for a in w) for w in y.substrings]
    out = []
    occ = 0
    for w in x.substrings:
        neww = []
        for a in w:
            if a == i:
                neww.extend(pieces[occ])
                occ += 1
            elif a < i:
                neww.append(a)
            else:
                neww.append(a + l - 1)
        out.append(tuple(neww))
    return LatticePath(x.colours - 1 + l, out)


def sym_action(rho, x: LatticePath) -> LatticePath:
    """Relabel letter a as rho(a); rho is a dict or a 1-based sequence."""
    if not isinstance(rho, dict):
        rho = {a + 1: v for a, v in enumerate(rho)}
    if sorted(rho) != list(range(1, x.colours + 1)) or sorted(
        rho.values()
    ) != list(range(1, x.colours + 1)):
        raise PathError("not a permutation of 1..%d" % x.colours)
    return LatticePath(
        x.colours, tuple(tuple(rho[a] for a in w) for w in x.substrings)
    )


# ---------------------------------------------------------------------------
# projections and the complexity filtration


def projection(x: LatticePath, i: int, j: int) -> LatticePath:
    """Keep colours i < j only, drop all bars, renumber to {1, 2}."""
    if not 1 <= i < j <= x.colours:
        raise PathError("need 1 <= i < j <= k")
    word = tuple(1 if a == i else 2 for a, _ in x.letters() if a in (i, j))
    return LatticePath(2, (word,))


def _switches(word):
    return sum(1 for a, b in zip(word, word[1:]) if a != b)


def complexity_table(x: LatticePath):
    """{(i, j): c_ij} over all pairs i < j (direction changes in projection)."""
    table = {}
    positions = {}
    for p, (a, _) in enumerate(x.letters()):
        positions.setdefault(a, []).append(p)
    word = x.word()
    for i in range(1, x.colours + 1):
        for j in range(i + 1, x.colours + 1):
            sub = [a for a in word if a == i or a == j]
            table[(i, j)] = _switches(sub)
    return table


def complexity(x: LatticePath) -> int:
    """max c_ij; 0 when k <= 1 (the max over an empty pair set)."""
    if x.colours <= 1:
        return 0
    return max(complexity_table(x).values())


# ---------------------------------------------------------------------------
# simplicial operators and Joyal duality


@dataclass(frozen=True)
class SimplicialOperator:
    """A monotone map {0..m} -> {0..n}, stored as the value tuple."""

    target: int
    values: tuple

    def __post_init__(self):
        for v, w in zip(self.values, self.values[1:]):
            if w < v:
                raise PathError("operator not monotone: %r" % (self.values,))
        if self.values and not (0 <= self.values[0] and self.values[-1] <= self.target):
            raise PathError("operator value out of range")

    @property
    def source(self):
        return len(self.values) - 1

    def __call__(self, t):
        return self.values[t]

    def then(self, other: "SimplicialOperator") -> "SimplicialOperator":
        """self followed by other (other o self)."""
        if self.target != other.source:
            raise PathError("operators not composable")
        return SimplicialOperator(other.target, tuple(other.values[v] for v in self.values))


def identity_operator(n):
    return SimplicialOperator(n, tuple(range(n + 1)))


def coface(n, j):
    """delta^j : [n-1] -> [n], skipping j."""
    return SimplicialOperator(n, tuple(v if v < j else v + 1 for v in range(n)))


def codegeneracy(n, j):
    """sigma^j : [n+1] -> [n], hitting j twice."""
    return SimplicialOperator(n, tuple(v if v <= j else v - 1 for v in range(n + 2)))


def components(x: LatticePath):
    """The k monotone operators [n_i] -> [n] reading off substring indices."""
    return tuple(
        SimplicialOperator(x.arity_out, x.occurrences(i))
        for i in range(1, x.colours + 1)
    )


def joyal_dual(phi_values, m_plus: int) -> SimplicialOperator:
    """Dualize a bipointed monotone map phi: [n+1] -> [m+1] to psi: [m] -> [n].

    phi is given by its value tuple on 0..n+1; psi(i)+1 = min{j : phi(j) > i}.
    """
    n = len(phi_values) - 2
    if n < 0 or phi_values[0] != 0 or phi_values[-1] != m_plus:
        raise PathError("map must send 0 to 0 and n+1 to m+1")
    for v, w in zip(phi_values, phi_values[1:]):
        if w < v:
            raise PathError("map not monotone")
    psi = []
    for i in range(m_plus):  # i runs over 0..m
        j = next(j for j, v in enumerate(phi_values) if v > i)
        psi.append(j - 1)
    return SimplicialOperator(n, tuple(psi))


def joyal_dual_inverse(psi: SimplicialOperator):
    """Recover the bipointed map phi: [n+1] -> [m+1] from psi: [m] -> [n].

    phi(j) - 1 = max{i : psi(i) < j}, with phi(0) = 0.
    """
    m, n = psi.source, psi.target
    phi = [0]
    for j in range(1, n + 2):
        below = [i for i in range(m + 1) if psi(i) < j]
        phi.append((max(below) + 1) if below else 0)
    return tuple(phi)


# ---------------------------------------------------------------------------
# input faces/degeneracies, output cofaces/codegeneracies


def _rebuild(x, letters):
    subs = [[] for _ in range(x.arity_out + 1)]
    for a, s in letters:
        subs[s].append(a)
    return LatticePath(x.colours, subs)


def input_face(x: LatticePath, i: int, j: int) -> LatticePath:
    """Delete the j-th occurrence (string order) of colour i."""
    if x.multiplicity(i) < 2:
        raise PathError("cannot delete the unique occurrence of colour %d" % i)
    if not 0 <= j <= x.arity_in(i):
        raise PathError("occurrence index out of range")
    letters = []
    seen = 0
    for a, s in x.letters():
        if a == i:
            if seen != j:
                letters.append((a, s))
            seen += 1
        else:
            letters.append((a, s))
    return _rebuild(x, letters)


def input_degeneracy(x: LatticePath, i: int, j: int) -> LatticePath:
    """Duplicate the j-th occurrence of colour i adjacently in its substring."""
    if not 0 <= j <= x.arity_in(i):
        raise PathError("occurrence index out of range")
    letters = []
    seen = 0
    for a, s in x.letters():
        letters.append((a, s))
        if a == i:
            if seen == j:
                letters.append((a, s))
            seen += 1
    return _rebuild(x, letters)


def output_coface(x: LatticePath, j: int) -> LatticePath:
    """Insert an empty substring at slot j (0 <= j <= n+1)."""
    if not 0 <= j <= x.arity_out + 1:
        raise PathError("slot out of range")
    subs = x.substrings[:j] + ((),) + x.substrings[j:]
    return LatticePath(x.colours, subs)


def output_codegeneracy(x: LatticePath, j: int) -> LatticePath:
    """Merge substrings j and j+1."""
    if not 0 <= j <= x.arity_out - 1:
        raise PathError("slot out of range")
    subs = (
        x.substrings[:j]
        + (x.substrings[j] + x.substrings[j + 1],)
        + x.substrings[j + 2 :]
    )
    return LatticePath(x.colours, subs)


# ---------------------------------------------------------------------------
# the canonical splitting of the first filtration stage


def decompose_l1(x: LatticePath):
    """Split a complexity-<=1 path into (monotone part, appearance order).

    Returns (xs, rho) with rho the colour order of first appearance (as a
    1-based tuple: rho[t-1] is the colour in block t) and xs the path with
    colours sorted; sym_action(rho, xs) == x.
    """
    if complexity(x) > 1:
        raise PathError("complexity exceeds 1")
    order = []
    for a, _ in x.letters():
        if a not in order:
            order.append(a)
    inverse = {a: t + 1 for t, a in enumerate(order)}
    xs = sym_action(inverse, x)
    return xs, tuple(order)


# ---------------------------------------------------------------------------
# exhaustive enumeration (test oracle); deterministic order


def _multiset_words(counts):
    """Distinct arrangements of {i+1 with multiplicity counts[i]}, lex order."""
    total = sum(counts)
    if total == 0:
        yield ()
        return
    for a, c in enumerate(counts, start=1):
        if c:
            rest = list(counts)
            rest[a - 1] -= 1
            for tail in _multiset_words(rest):
                yield (a,) + tail


def enumerate_paths(arities, n):
    """All of L(n_1,...,n_k; n), lexicographic by word then bar positions."""
    counts = [m + 1 for m in arities]
    if any(c < 1 for c in counts) or n < 0:
        raise PathError("arities and output arity must be >= 0")
    total = sum(counts)
    for word in _multiset_words(counts):
        for cuts in itertools.combinations_with_replacement(range(total + 1), n):
            subs, prev = [], 0
            for c in cuts:
                subs.append(word[prev:c])
                prev = c
            subs.append(word[prev:])
            yield LatticePath(len(counts), subs)


def count_paths(arities, n):
    """L!/prod (n_i+1)! * C(L+n, n) with L = sum (n_i+1)."""
    counts = [m + 1 for m in arities]
    total = sum(counts)
    word_count = factorial(total)
    for c in counts:
        word_count //= factorial(c)
    return word_count * comb(total + n, n)
