"""Chain-level condensation: the surjection operad and its cosimplicial hull.

Generators are nondegenerate subdivided strings (no two adjacent equal
letters inside a substring); a bar-free generator on k colours of length
L has degree L - k, a subdivided one keeps degree = letters - colours.

Orientation convention: a generator is the left-to-right tensor of its
per-colour simplices with colours ordered 1 < ... < k ("colour-major");
every sign below is the Koszul sign of an explicit symbol permutation
against that frame, composed with the per-generator basis twist
`generator_twist` which normalizes the overlapping-cut expansion to a
single global sign per (generator, level).  The identity suites (d*d = 0,
Leibniz, associativity, cosimplicial compatibility) pin the convention.
"""

from __future__ import annotations

import itertools

from .paths import LatticePath, PathError, complexity, format_path, parse_path
from .rings import ZZ, integer_homology, rank as field_rank


class ChainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# generators


def is_nondegenerate(x: LatticePath) -> bool:
    return all(a != b for w in x.substrings for a, b in zip(w, w[1:]))


def check_generator(x: LatticePath):
    if not is_nondegenerate(x):
        raise ChainError("degenerate string %s" % format_path(x))
    return x


def degree(x: LatticePath) -> int:
    return len(x.word()) - x.colours


def is_surjection_generator(x: LatticePath) -> bool:
    return x.arity_out == 0 and is_nondegenerate(x)


def enumerate_surjection_generators(k, max_degree):
    """Bar-free nondegenerate strings on colours 1..k up to a degree bound."""
    for d in range(max_degree + 1):
        length = k + d
        for word in itertools.product(range(1, k + 1), repeat=length):
            if any(a == b for a, b in zip(word, word[1:])):
                continue
            if len(set(word)) != k:
                continue
            yield LatticePath(k, (word,))


# ---------------------------------------------------------------------------
# the symbol calculus: steps and production parities

# a step of colour i is the gap between consecutive occurrences; a generator
# of degree d carries d steps, listed colour-major


def _parity_of(production_indices):
    """Parity (0/1) of the permutation given by production indices read in
    frame order."""
    inv = 0
    seen = []
    for v in production_indices:
        inv += sum(1 for w in seen if w > v)
        seen.append(v)
    return inv & 1


def overlap_collapse(x: LatticePath):
    """Recognize an overlapping-cut decomposition.

    When every substring is nonempty and each consecutive pair shares its
    boundary letter, x is the expansion term of a unique bar-free
    generator at a unique cut tuple; returns (generator, cuts) or None.
    """
    subs = x.substrings
    if any(not w for w in subs):
        return None
    for a, b in zip(subs, subs[1:]):
        if a[-1] != b[0]:
            return None
    word = list(subs[0])
    cuts = []
    pos = len(subs[0])
    for w in subs[1:]:
        cuts.append(pos)
        word.extend(w[1:])
        pos += len(w) - 1
    return LatticePath(x.colours, (tuple(word),)), tuple(cuts)


def generator_twist(x: LatticePath) -> int:
    """Basis twist exponent normalizing the expansion to global sign +1.

    Overlapping-subdivided generators are re-oriented by the colour-major
    production parity of their (unique) cut presentation; every other
    generator, in particular every bar-free one, keeps the plain
    colour-major orientation.
    """
    collapsed = overlap_collapse(x)
    if collapsed is None:
        return 0
    u, cuts = collapsed
    term, par = _expansion_data(u, cuts)
    assert term == x
    return par if par is not None else 0


def boundary_terms(x: LatticePath):
    """Signed occurrence deletions of a nondegenerate generator.

    Yields (sign, generator); deletions that empty a colour or produce a
    degenerate string are dropped.  Colours are renumbered never - arities
    drop by one in the deleted colour only.
    """
    from .paths import input_face

    arities = x.arities()
    prefix = 0
    for i in range(1, x.colours + 1):
        n_i = arities[i - 1]
        if n_i >= 1:
            for j in range(n_i + 1):
                y = input_face(x, i, j)
                if is_nondegenerate(y):
                    sign = (-1) ** ((prefix + j + generator_twist(x) + generator_twist(y)) & 1)
                    yield sign, y
        prefix += n_i


# ---------------------------------------------------------------------------
# chain elements


class ChainElement:
    """Finite integer/ring linear combination of nondegenerate generators."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring=ZZ, terms=None):
        self.ring = ring
        self.terms = {}
        if terms:
            for x, c in terms.items() if isinstance(terms, dict) else terms:
                self.add_term(x, c)

    def add_term(self, x: LatticePath, coeff):
        check_generator(x)
        coeff = self.ring.promote(coeff)
        new = self.ring.add(self.terms.get(x, self.ring.zero), coeff)
        if self.ring.is_zero(new):
            self.terms.pop(x, None)
        else:
            self.terms[x] = new
        return self

    @classmethod
    def generator(cls, x, ring=ZZ):
        if isinstance(x, str):
            x = parse_path(x)
        return cls(ring, {x: ring.one})

    def __add__(self, other):
        out = ChainElement(self.ring, dict(self.terms))
        for x, c in other.terms.items():
            out.add_term(x, c)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = self.ring.promote(c)
        out = ChainElement(self.ring)
        for x, v in self.terms.items():
            out.add_term(x, self.ring.mul(c, v))
        return out

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, ChainElement)
            and self.ring is other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring.name, tuple(sorted(
            (format_path(x), str(c)) for x, c in self.terms.items()))))

    def sorted_terms(self):
        return sorted(
            self.terms.items(),
            key=lambda item: (item[0].colours, item[0].arity_out, format_path(item[0])),
        )

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for x, c in self.sorted_terms():
            parts.append("%+d*%s" % (c, format_path(x)) if str(c).lstrip("+-").isdigit()
                         else "+(%s)*%s" % (c, format_path(x)))
        return " ".join(parts)

    def __repr__(self):
        return "ChainElement(%s)" % self


def parse_chain(text: str, ring=ZZ) -> ChainElement:
    """Parse "+2*121 -1*12|21" style text; bare generators mean +1."""
    out = ChainElement(ring)
    for chunk in text.split():
        if "*" in chunk:
            coeff, gen = chunk.split("*", 1)
            coeff = coeff or "+1"
            if coeff in ("+", "-"):
                coeff += "1"
        else:
            coeff, gen = "+1", chunk
            if gen.startswith(("+", "-")):
                sign, gen = gen[0], gen[1:]
                coeff = sign + "1"
        out.add_term(parse_path(gen), ring.promote(coeff if ring is not ZZ else int(coeff)))
    return out


def boundary(e: ChainElement) -> ChainElement:
    out = ChainElement(e.ring)
    for x, c in e.terms.items():
        for sign, y in boundary_terms(x):
            out.add_term(y, e.ring.mul(c, e.ring.promote(sign)))
    return out


def complexity_filtration(e: ChainElement) -> int:
    """Max complexity over supported generators (0 for the zero element)."""
    if e.is_zero():
        return 0
    return max(complexity(x) for x in e.terms)


# ---------------------------------------------------------------------------
# the overlapping-cut expansion


def _expansion_data(u: LatticePath, cuts):
    """One expansion term together with its production parity.

    cuts is a nondecreasing tuple of letter positions (1-based) of the
    bar-free word of u.  Returns (generator, parity_exponent).
    """
    word = u.word()
    L = len(word)
    # substring j = word[cuts[j-1]-1 : cuts[j]] with sentinels 1, L
    bounds = (1,) + tuple(cuts) + (L,)
    subs = []
    for j in range(len(cuts) + 1):
        lo, hi = bounds[j], bounds[j + 1]
        subs.append(word[lo - 1 : hi])
    term = LatticePath(u.colours, subs)
    if not is_nondegenerate(term):
        return term, None
    # production order: old steps colour-major, then one new step per cut
    old_rank = {}
    r = 0
    occs = {i: [p for p, a in enumerate(word, start=1) if a == i] for i in range(1, u.colours + 1)}
    for i in range(1, u.colours + 1):
        for t in range(1, len(occs[i])):
            old_rank[(i, t)] = r
            r += 1
    n_old = r
    cut_index_at = {}
    for t, q in enumerate(cuts):
        cut_index_at.setdefault(q, []).append(n_old + t)
    production = []
    for i in range(1, u.colours + 1):
        # walk colour i's occurrences of the term: copies of old occurrences
        for t, p in enumerate(occs[i], start=1):
            if t > 1:
                production.append(old_rank[(i, t - 1)])
            production.extend(cut_index_at.get(p, ()))
    # production now lists, in the TERM's colour-major frame order, the
    # production index of each step; wait - the loop above walks old
    # occurrences in order, emitting the old step before each occurrence
    # (except the first) and the new cut steps right after each occurrence.
    return term, _parity_of(production)


def coface_expansion(u, n: int, ring=ZZ) -> ChainElement:
    """Sum over all n-cut overlapping decompositions of a bar-free element."""
    if isinstance(u, LatticePath):
        u = ChainElement.generator(u, ring)
    out = ChainElement(u.ring)
    for x, c in u.terms.items():
        if x.arity_out != 0:
            raise ChainError("expansion needs bar-free generators")
        L = len(x.word())
        tw_u = generator_twist(x)  # zero, but kept for symmetry
        for cuts in itertools.combinations_with_replacement(range(1, L + 1), n):
            term, par = _expansion_data(x, cuts)
            if par is None:
                continue
            sign = (-1) ** ((par + tw_u + generator_twist(term)) & 1)
            out.add_term(term, u.ring.mul(c, u.ring.promote(sign)))
    return out


# ---------------------------------------------------------------------------
# output cofaces/codegeneracies at chain level (basis-twisted)


def output_coface_chain(e: ChainElement, j: int) -> ChainElement:
    from .paths import output_coface

    out = ChainElement(e.ring)
    for x, c in e.terms.items():
        y = output_coface(x, j)
        sign = (-1) ** ((generator_twist(x) + generator_twist(y)) & 1)
        out.add_term(y, e.ring.mul(c, e.ring.promote(sign)))
    return out


def output_codegeneracy_chain(e: ChainElement, j: int) -> ChainElement:
    from .paths import output_codegeneracy

    out = ChainElement(e.ring)
    for x, c in e.terms.items():
        y = output_codegeneracy(x, j)
        if not is_nondegenerate(y):
            continue
        sign = (-1) ** ((generator_twist(x) + generator_twist(y)) & 1)
        out.add_term(y, e.ring.mul(c, e.ring.promote(sign)))
    return out


# ---------------------------------------------------------------------------
# operad composition of the surjection part


def _compose_generators(u: LatticePath, i: int, v: LatticePath):
    """Signed terms of u o_i v for bar-free nondegenerate u, v."""
    if u.arity_out != 0 or v.arity_out != 0:
        raise ChainError("surjection composition needs bar-free generators")
    if not 1 <= i <= u.colours:
        raise ChainError("slot %d out of range" % i)
    r = u.multiplicity(i)
    uword = u.word()
    l = v.colours
    vword = v.word()
    # production ranks of u's steps (colour-major)
    u_rank = {}
    rr = 0
    u_occs = {
        a: [p for p, b in enumerate(uword, start=1) if b == a]
        for a in range(1, u.colours + 1)
    }
    for a in range(1, u.colours + 1):
        for t in range(1, len(u_occs[a])):
            u_rank[(a, t)] = rr
            rr += 1
    n_u = rr

    def renum_u(a):
        return a if a < i else a + l - 1

    def renum_v(b):
        return b + (i - 1)

    for cuts in itertools.combinations_with_replacement(range(1, len(vword) + 1), r - 1):
        exp_term, par_exp = _expansion_data(v, cuts)
        if par_exp is None:
            continue
        # substitute the pieces into u's occurrences of colour i
        pieces = exp_term.substrings
        out_word = []
        occ = 0
        for a in uword:
            if a == i:
                out_word.extend(renum_v(b) for b in pieces[occ])
                occ += 1
            else:
                out_word.append(renum_u(a))
        if any(a == b for a, b in zip(out_word, out_word[1:])):
            continue
        result = LatticePath(u.colours - 1 + l, (tuple(out_word),))
        # production: u's symbols in u-colour-major order with colour i's
        # step t realized by the t-th cut step, then v's own steps
        v_rank = {}
        rr2 = 0
        v_occs = {
            b: [p for p, c in enumerate(vword, start=1) if c == b]
            for b in range(1, l + 1)
        }
        for b in range(1, l + 1):
            for t in range(1, len(v_occs[b])):
                v_rank[(b, t)] = n_u + rr2
                rr2 += 1
        # the t-th cut realizes u's colour-i step t, so it keeps that
        # step's slot in u's frame
        cut_prod = {}
        for t, q in enumerate(cuts, start=1):
            cut_prod.setdefault(q, []).append(u_rank[(i, t)])
        # now read the composite's steps in ITS colour-major frame and
        # record production indices
        production = []
        # colours of the composite: 1..i-1 from u, i..i+l-1 from v, rest u
        for colour in range(1, result.colours + 1):
            if colour < i or colour >= i + l:
                a = colour if colour < i else colour - l + 1
                for t in range(1, len(u_occs[a])):
                    production.append(u_rank[(a, t)])
            else:
                b = colour - (i - 1)
                # colour b of the expansion term: steps are old v-steps and
                # cut steps interleaved as in _expansion_data
                for t, p in enumerate(v_occs[b], start=1):
                    if t > 1:
                        production.append(v_rank[(b, t - 1)])
                    production.extend(cut_prod.get(p, ()))
        yield result, _parity_of(production)


def surj_compose(u, i: int, v) -> ChainElement:
    """Operadic substitution in the surjection part; bilinear in u and v."""
    if isinstance(u, (str, LatticePath)):
        u = ChainElement.generator(u)
    if isinstance(v, (str, LatticePath)):
        v = ChainElement.generator(v, u.ring)
    out = ChainElement(u.ring)
    for x, cx in u.terms.items():
        for y, cy in v.terms.items():
            coeff = u.ring.mul(cx, cy)
            for result, par in _compose_generators(x, i, y):
                out.add_term(
                    result, u.ring.mul(coeff, u.ring.promote((-1) ** par))
                )
    return out


def sym_action_chain(rho, e: ChainElement) -> ChainElement:
    """Relabel colours by rho with the Koszul sign of the induced step
    permutation (colour blocks of odd degree anticommute)."""
    from .paths import sym_action

    out = ChainElement(e.ring)
    for x, c in e.terms.items():
        y = sym_action(rho, x)
        arities = x.arities()
        if not isinstance(rho, dict):
            rho_map = {a + 1: v for a, v in enumerate(rho)}
        else:
            rho_map = rho
        # block Koszul sign: sort colours by their new labels
        order = sorted(range(1, x.colours + 1), key=lambda a: rho_map[a])
        production = []
        base = {}
        acc = 0
        for a in range(1, x.colours + 1):
            base[a] = acc
            acc += arities[a - 1]
        for a in order:
            production.extend(range(base[a], base[a] + arities[a - 1]))
        sign = (-1) ** (
            (_parity_of(production) + generator_twist(x) + generator_twist(y)) & 1
        )
        out.add_term(y, e.ring.mul(c, e.ring.promote(sign)))
    return out


# ---------------------------------------------------------------------------
# finite chain complexes over a ring


class ChainComplex:
    """Finitely generated chain complex: basis labels and boundary matrices.

    differentials[n] is the matrix of d: C_n -> C_{n-1} with entry [r][c]
    the coefficient of basis[n-1][r] in d(basis[n][c]).
    """

    def __init__(self, ring, basis, differentials):
        self.ring = ring
        self.basis = {n: list(b) for n, b in basis.items() if b}
        self.differentials = {}
        for n, mat in differentials.items():
            self.differentials[n] = [
                [ring.promote(v) for v in row] for row in mat
            ]
        self.validate()

    def dim(self, n):
        return len(self.basis.get(n, ()))

    def matrix(self, n):
        """d: C_n -> C_{n-1} (rows indexed by C_{n-1}, columns by C_n)."""
        if n in self.differentials:
            return self.differentials[n]
        return [[self.ring.zero] * self.dim(n) for _ in range(self.dim(n - 1))]

    def validate(self):
        degrees = sorted(self.basis)
        for n in degrees:
            mat = self.matrix(n)
            if mat and len(mat) != self.dim(n - 1):
                raise ChainError("d_%d has %d rows, expected %d" % (n, len(mat), self.dim(n - 1)))
            for row in mat:
                if len(row) != self.dim(n):
                    raise ChainError("d_%d row width mismatch" % n)
            # d o d = 0
            prev = self.matrix(n - 1)
            if prev and mat and self.dim(n - 2) and self.dim(n):
                for rr in range(self.dim(n - 2)):
                    for cc in range(self.dim(n)):
                        acc = self.ring.zero
                        for m in range(self.dim(n - 1)):
                            acc = self.ring.add(acc, self.ring.mul(prev[rr][m], mat[m][cc]))
                        if not self.ring.is_zero(acc):
                            raise ChainError("d*d != 0 at degree %d" % n)

    def homology(self, degrees=None):
        """[(degree, betti rank, torsion orders)] in increasing degree."""
        if degrees is None:
            degrees = sorted(self.basis)
        out = []
        for n in degrees:
            if self.dim(n) == 0:
                out.append((n, 0, []))
                continue
            d_out = self.matrix(n)
            d_in = self.matrix(n + 1)
            if self.ring is ZZ:
                betti, torsion = integer_homology(d_in, d_out, self.dim(n))
                out.append((n, betti, torsion))
            else:
                rank_out = field_rank(self.ring, d_out) if d_out else 0
                rank_in = field_rank(self.ring, d_in) if d_in else 0
                out.append((n, self.dim(n) - rank_out - rank_in, []))
        return out


class CochainComplex:
    """Finitely generated cochain complex: d raises degree by one.

    matrices[n] is the matrix of d: C^n -> C^{n+1}, rows indexed by the
    degree n+1 basis.
    """

    def __init__(self, ring, dims, matrices):
        self.ring = ring
        self.dims = dict(dims)
        self.matrices = {
            n: [[ring.promote(v) for v in row] for row in mat]
            for n, mat in matrices.items()
        }
        self.validate()

    def matrix(self, n):
        if n in self.matrices:
            return self.matrices[n]
        rows = self.dims.get(n + 1, 0)
        return [[self.ring.zero] * self.dims.get(n, 0) for _ in range(rows)]

    def validate(self):
        ring = self.ring
        for n in sorted(self.dims):
            mat = self.matrix(n)
            nxt = self.matrix(n + 1)
            if mat and len(mat) != self.dims.get(n + 1, 0):
                raise ChainError("d^%d has wrong height" % n)
            for row in mat:
                if len(row) != self.dims.get(n, 0):
                    raise ChainError("d^%d has wrong width" % n)
            if mat and nxt and self.dims.get(n + 2, 0) and self.dims.get(n, 0):
                for r in range(self.dims[n + 2]):
                    for c in range(self.dims[n]):
                        acc = ring.zero
                        for m in range(self.dims[n + 1]):
                            acc = ring.add(acc, ring.mul(nxt[r][m], mat[m][c]))
                        if not ring.is_zero(acc):
                            raise ChainError("d o d != 0 at degree %d" % n)

    def cohomology(self):
        """[(degree, rank)] over the field coefficients."""
        out = []
        for n in sorted(self.dims):
            d_out = self.matrix(n)
            d_in = self.matrix(n - 1)
            rank_out = field_rank(self.ring, d_out) if d_out else 0
            rank_in = field_rank(self.ring, d_in) if d_in else 0
            out.append((n, self.dims[n] - rank_out - rank_in))
        return out
