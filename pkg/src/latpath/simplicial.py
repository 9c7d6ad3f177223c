"""Finite simplicial sets, normalized cochains, the path coaction,
sphere coalgebra checks, cup-i products and Steenrod squares.

Nondegenerate simplices are labelled; a general simplex is a pair
(label, eta) with eta a monotone surjection recording the degeneracy.
Face tables may point at degenerate simplices, which is how quotients
like spheres and projective planes stay finite.
"""

from __future__ import annotations

import itertools

from .chains import ChainComplex, ChainElement, CochainComplex, coface_expansion, degree as chain_degree
from .paths import LatticePath, PathError, complexity, components
from .rings import PrimeField, QQ, ZZ, in_span, nullspace, rank, solve


class SimplicialError(ValueError):
    pass


def _is_identity(eta):
    return all(v == t for t, v in enumerate(eta))


def _epi_mono_factor(values, target):
    """Monotone [a] -> [target] as (mono values, epi values)."""
    image = sorted(set(values))
    image_index = {v: t for t, v in enumerate(image)}
    epi = tuple(image_index[v] for v in values)
    return tuple(image), epi


class SimplicialSet:
    """Finite semisimplicial data with degeneracy-aware face tables.

    cells[n] lists the nondegenerate n-simplices; faces[(n, label)][j] is
    the pair (label', eta) describing the j-th face, eta the monotone
    surjection onto the nondegenerate core.
    """

    def __init__(self, name, cells, faces):
        self.name = name
        self.cells = {n: list(v) for n, v in cells.items() if v}
        self.faces = dict(faces)
        self.dimension = max(self.cells) if self.cells else -1
        self._validate()

    def _validate(self):
        for (n, label), facelist in self.faces.items():
            if n == 0:
                if facelist:
                    raise SimplicialError("vertices have no faces")
                continue
            if len(facelist) != n + 1:
                raise SimplicialError("simplex %r needs %d faces" % (label, n + 1))
            for z, eta in facelist:
                dim_z = self.dim_of(z)
                if len(eta) != n or (eta and eta[-1] != dim_z) or not all(
                    b - a in (0, 1) for a, b in zip(eta, eta[1:])
                ):
                    if not (n == 0 and eta == ()):
                        raise SimplicialError(
                            "face of %r has malformed degeneracy %r" % (label, eta)
                        )

    def dim_of(self, label):
        for n, labels in self.cells.items():
            if label in labels:
                return n
        raise SimplicialError("unknown simplex %r" % (label,))

    def face(self, n, label, j):
        return self.faces[(n, label)][j]

    def act(self, label, theta):
        """Apply a monotone operator theta: [a] -> [dim label].

        Returns (core label, eta) with eta monotone surjective; eta is the
        identity exactly when the resulting simplex is nondegenerate.
        """
        n = self.dim_of(label)
        if list(theta) == list(range(n + 1)):
            return label, tuple(range(n + 1))
        mono, epi = _epi_mono_factor(theta, n)
        if len(mono) == n + 1:
            return label, epi
        # peel the largest missing vertex
        missing = max(v for v in range(n + 1) if v not in set(mono))
        z, eta = self.face(n, label, missing)
        reduced = tuple(v if v < missing else v - 1 for v in theta)
        composed = tuple(eta[v] for v in reduced)
        return self.act(z, composed)

    def simplices_at(self, n):
        """All n-simplices as (label, eta) pairs, degenerate ones included."""
        out = []
        for k in sorted(self.cells):
            if k > n:
                break
            for label in self.cells[k]:
                for eta in _surjections(n, k):
                    out.append((label, eta))
        return out

    # -- chains and cochains

    def chain_complex(self, ring=ZZ) -> ChainComplex:
        basis = {n: list(v) for n, v in self.cells.items()}
        diffs = {}
        for n in sorted(self.cells):
            if n == 0:
                continue
            rows = {lab: r for r, lab in enumerate(self.cells.get(n - 1, []))}
            mat = [[ring.zero] * len(self.cells[n]) for _ in rows]
            for c, label in enumerate(self.cells[n]):
                for j in range(n + 1):
                    z, eta = self.face(n, label, j)
                    if _is_identity(eta):
                        r = rows[z]
                        mat[r][c] = ring.add(mat[r][c], ring.promote((-1) ** j))
            diffs[n] = mat
        return ChainComplex(ring, basis, diffs)

    def cochain_complex(self, ring) -> CochainComplex:
        dims = {n: len(self.cells.get(n, [])) for n in range(self.dimension + 2)}
        mats = {}
        for n in range(self.dimension + 1):
            cols = {lab: c for c, lab in enumerate(self.cells.get(n, []))}
            mat = [[ring.zero] * dims[n] for _ in range(dims.get(n + 1, 0))]
            for r, label in enumerate(self.cells.get(n + 1, [])):
                for j in range(n + 2):
                    z, eta = self.face(n + 1, label, j)
                    if _is_identity(eta) and z in cols:
                        c = cols[z]
                        mat[r][c] = ring.add(mat[r][c], ring.promote((-1) ** j))
            mats[n] = mat
        return CochainComplex(ring, dims, mats)


def _surjections(n, k):
    """Monotone surjections [n] ->> [k]."""
    if k > n:
        return []
    out = []

    def rec(prefix, last):
        if len(prefix) == n + 1:
            if last == k:
                out.append(tuple(prefix))
            return
        for v in (last, last + 1):
            if v <= k:
                rec(prefix + [v], v)

    rec([0], 0)
    return out


# ---------------------------------------------------------------------------
# built-in spaces


def standard_simplex(n) -> SimplicialSet:
    cells = {}
    faces = {}
    for k in range(n + 1):
        cells[k] = list(itertools.combinations(range(n + 1), k + 1))
    for k in range(1, n + 1):
        for label in cells[k]:
            faces[(k, label)] = [
                (tuple(v for t, v in enumerate(label) if t != j), tuple(range(k)))
                for j in range(k + 1)
            ]
    for label in cells[0]:
        faces[(0, label)] = []
    return SimplicialSet("delta%d" % n, cells, faces)


def sphere(m) -> SimplicialSet:
    """Delta[m] with its whole boundary collapsed to the base point."""
    if m < 0:
        raise SimplicialError("m must be >= 0")
    if m == 0:
        return SimplicialSet(
            "s0", {0: ["*", "c"]}, {(0, "*"): [], (0, "c"): []}
        )
    cells = {0: ["*"], m: ["c"]}
    faces = {(0, "*"): []}
    collapse = tuple(0 for _ in range(m))  # [m-1] ->> [0]
    faces[(m, "c")] = [("*", collapse) for _ in range(m + 1)]
    return SimplicialSet("s%d" % m, cells, faces)


def from_facets(name, facets) -> SimplicialSet:
    """Ordered simplicial complex from its maximal faces (vertex tuples)."""
    by_dim = {}
    for facet in facets:
        facet = tuple(sorted(facet))
        if len(set(facet)) != len(facet):
            raise SimplicialError("facet %r repeats a vertex" % (facet,))
        for k in range(len(facet)):
            for sub in itertools.combinations(facet, k + 1):
                by_dim.setdefault(k, set()).add(sub)
    cells = {k: sorted(v) for k, v in by_dim.items()}
    faces = {}
    for k, labels in cells.items():
        for label in labels:
            if k == 0:
                faces[(0, label)] = []
            else:
                faces[(k, label)] = [
                    (tuple(v for t, v in enumerate(label) if t != j), tuple(range(k)))
                    for j in range(k + 1)
                ]
    return SimplicialSet(name, cells, faces)


def projective_plane() -> SimplicialSet:
    """The 6-vertex triangulation of the real projective plane."""
    facets = [
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 2, 6), (1, 5, 6),
        (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6),
    ]
    return from_facets("rp2", facets)


def torus() -> SimplicialSet:
    """The standard 9-vertex, 18-triangle grid torus."""
    def v(i, j):
        return 3 * (i % 3) + (j % 3)

    facets = []
    for i in range(3):
        for j in range(3):
            facets.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            facets.append((v(i, j), v(i, j + 1), v(i + 1, j + 1)))
    return from_facets("torus", facets)


BUILTIN_SPACES = {
    "s0": lambda: sphere(0),
    "s1": lambda: sphere(1),
    "s2": lambda: sphere(2),
    "rp2": projective_plane,
    "torus": torus,
    "delta1": lambda: standard_simplex(1),
    "delta2": lambda: standard_simplex(2),
    "delta3": lambda: standard_simplex(3),
}


def space_from_dict(data) -> SimplicialSet:
    """JSON shape: {"name": ..., "facets": [[v, ...], ...]} or explicit
    {"cells": {...}, "faces": {...}} tables."""
    if "facets" in data:
        return from_facets(data.get("name", "space"), [tuple(f) for f in data["facets"]])
    cells = {int(n): [tuple(l) if isinstance(l, list) else l for l in v]
             for n, v in data["cells"].items()}
    faces = {}
    for key, facelist in data["faces"].items():
        n, label = key
        faces[(int(n), label)] = [(z, tuple(eta)) for z, eta in facelist]
    return SimplicialSet(data.get("name", "space"), cells, faces)


# ---------------------------------------------------------------------------
# the sphere coalgebra check


def coalgebra_check(m, x: LatticePath, y):
    """Does the component coaction of x send y into the wedge?

    y is an n-simplex of sphere(m) given as (label, eta); returns True when
    at most one component lands off the base point.
    """
    space = sphere(m)
    label, eta = y
    hits = 0
    for psi in components(x):
        theta = tuple(eta[v] for v in psi.values)
        z, eta2 = space.act(label, theta)
        if z != "*":
            if not _is_identity(eta2):
                continue  # degenerate simplices are base-point-like only if at *
            hits += 1
    return hits <= 1


def coalgebra_witness(m, x: LatticePath, y):
    """The tuple of component images, for diagnostics."""
    space = sphere(m)
    label, eta = y
    out = []
    for psi in components(x):
        theta = tuple(eta[v] for v in psi.values)
        out.append(space.act(label, theta))
    return out


# ---------------------------------------------------------------------------
# cochains and the surjection action


class SpaceCochain:
    """Homogeneous normalized cochain: values on nondegenerate simplices."""

    __slots__ = ("space", "ring", "degree", "values")

    def __init__(self, space, ring, degree, values=None):
        self.space = space
        self.ring = ring
        self.degree = degree
        self.values = {}
        if values:
            for label, c in values.items():
                c = ring.promote(c)
                if not ring.is_zero(c):
                    self.values[label] = c

    def value(self, label):
        return self.values.get(label, self.ring.zero)

    def evaluate(self, simplex):
        """Value on a possibly degenerate simplex (label, eta)."""
        label, eta = simplex
        if not _is_identity(eta):
            return self.ring.zero
        return self.value(label)

    def __add__(self, other):
        vals = dict(self.values)
        for k, c in other.values.items():
            vals[k] = self.ring.add(vals.get(k, self.ring.zero), c)
        return SpaceCochain(self.space, self.ring, self.degree, vals)

    def scale(self, c):
        c = self.ring.promote(c)
        return SpaceCochain(
            self.space, self.ring, self.degree,
            {k: self.ring.mul(c, v) for k, v in self.values.items()},
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self):
        return not self.values

    def __eq__(self, other):
        return (
            isinstance(other, SpaceCochain)
            and self.degree == other.degree
            and self.values == other.values
        )

    def coboundary(self):
        ring = self.ring
        n = self.degree
        out = {}
        for label in self.space.cells.get(n + 1, []):
            acc = ring.zero
            for j in range(n + 2):
                z, eta = self.space.face(n + 1, label, j)
                if _is_identity(eta):
                    acc = ring.add(acc, ring.mul(ring.promote((-1) ** j), self.value(z)))
            if not ring.is_zero(acc):
                out[label] = acc
        return SpaceCochain(self.space, ring, n + 1, out)

    def coordinates(self):
        return [self.value(l) for l in self.space.cells.get(self.degree, [])]


def cochain_action(u, cochains):
    """Act by a bar-free chain element on space cochains.

    (u(f_1,...,f_k))(y) is the signed sum over the overlapping-cut
    expansions x of u with multiplicity(i) = deg(f_i) + 1 of the product
    of the f_i on the component images x_i^*(y).
    """
    from .hochschild import _action_sign

    if isinstance(u, (str, LatticePath)):
        u = ChainElement.generator(u)
    if not cochains:
        raise SimplicialError("need at least one cochain")
    space = cochains[0].space
    ring = cochains[0].ring
    degrees = [f.degree for f in cochains]
    u_degrees = {chain_degree(x) for x in u.terms}
    if len(u_degrees) != 1:
        raise SimplicialError("chain element must be homogeneous")
    d = u_degrees.pop()
    n = sum(degrees) - d
    if n < 0:
        return SpaceCochain(space, ring, 0)
    result = SpaceCochain(space, ring, n)
    for g, coeff in u.terms.items():
        if g.colours != len(cochains):
            raise SimplicialError("arity mismatch")
        expansion = coface_expansion(g, n)
        for x, sign in expansion.terms.items():
            if list(x.arities()) != degrees:
                continue
            eps = _action_sign(x, degrees)
            comps = components(x)
            vals = {}
            for label in space.cells.get(n, []):
                prod = ring.one
                for f, psi in zip(cochains, comps):
                    simplex = space.act(label, psi.values)
                    prod = ring.mul(prod, f.evaluate(simplex))
                    if ring.is_zero(prod):
                        break
                if not ring.is_zero(prod):
                    vals[label] = prod
            term = SpaceCochain(space, ring, n, vals)
            result = result + term.scale(int(coeff) * int(sign) * eps)
    return result


def cup_product(f, g):
    return cochain_action("12", [f, g])


def cup_i(i, f, g):
    """The cup-i product: the alternating two-colour generator of degree i."""
    word = tuple(1 if t % 2 == 0 else 2 for t in range(i + 2))
    u = LatticePath(2, (word,))
    return cochain_action(u, [f, g])


# ---------------------------------------------------------------------------
# cohomology bookkeeping over a field


class SpaceCohomology:
    def __init__(self, space, ring):
        self.space = space
        self.ring = ring
        self.complex = space.cochain_complex(ring)

    def is_cocycle(self, f: SpaceCochain):
        return f.coboundary().is_zero()

    def is_coboundary(self, f: SpaceCochain):
        n = f.degree
        if n == 0:
            return f.is_zero()
        mat = self.complex.matrix(n - 1)
        if not mat:
            return f.is_zero()
        return solve(self.ring, mat, f.coordinates()) is not None

    def cohomologous(self, f, g):
        return self.is_coboundary(f - g)

    def representatives(self, n):
        """Cocycle representatives of a basis of H^n."""
        ring = self.ring
        dim = self.complex.dims.get(n, 0)
        d_n = self.complex.matrix(n)
        kernel = nullspace(ring, d_n, dim) if d_n else [
            [ring.one if t == s else ring.zero for t in range(dim)] for s in range(dim)
        ]
        image = []
        if n > 0:
            prev = self.complex.matrix(n - 1)
            cols = [[row[c] for row in prev] for c in range(len(prev[0]))] if prev and prev[0] else []
            image = cols
        reps = []
        current = [list(v) for v in image]
        base = rank(ring, current) if current else 0
        for v in kernel:
            trial = current + [list(v)]
            if rank(ring, trial) > base:
                reps.append(v)
                current = trial
                base += 1
        labels = self.space.cells.get(n, [])
        return [
            SpaceCochain(self.space, ring, n, dict(zip(labels, vec))) for vec in reps
        ]


def steenrod_square(i, f: SpaceCochain):
    """Sq^i on the class of an F2 cocycle of degree p, via f cup_{p-i} f."""
    ring = f.ring
    if not isinstance(ring, PrimeField) or ring.p != 2:
        raise SimplicialError("Steenrod squares live over F2")
    p = f.degree
    if not 0 <= i <= p:
        raise SimplicialError("need 0 <= i <= degree")
    if not f.coboundary().is_zero():
        raise SimplicialError("input must be a cocycle")
    return cup_i(p - i, f, f)


def bockstein(f: SpaceCochain):
    """The integral Bockstein of an F2 cocycle, reduced back mod 2."""
    ring = f.ring
    if not isinstance(ring, PrimeField) or ring.p != 2:
        raise SimplicialError("Bockstein computed for F2 classes")
    space = f.space
    lift = SpaceCochain(space, ZZ, f.degree, {k: int(v) % 2 for k, v in f.values.items()})
    delta = lift.coboundary()
    out = {}
    for label, c in delta.values.items():
        if c % 2 != 0:
            raise SimplicialError("input was not a cocycle mod 2")
        out[label] = (c // 2) % 2
    return SpaceCochain(space, ring, f.degree + 1, out)
