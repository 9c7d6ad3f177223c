"""Coefficient rings (Z, Q, GF(p)) and exact linear algebra.

Matrices are lists of row lists of ring elements; everything is exact.
"""

from __future__ import annotations

from fractions import Fraction


class Ring:
    is_field = False

    def promote(self, v):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == self.zero

    def __repr__(self):
        return self.name


class IntegerRing(Ring):
    name = "Z"
    zero = 0
    one = 1

    def promote(self, v):
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise ValueError("%s is not an integer" % v)
            return int(v)
        return int(v)


class RationalField(Ring):
    name = "Q"
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def promote(self, v):
        if isinstance(v, str):
            return Fraction(v)
        return Fraction(v)

    def inv(self, a):
        return 1 / Fraction(a)


class PrimeField(Ring):
    is_field = True

    def __init__(self, p):
        for d in range(2, p):
            if d * d > p:
                break
            if p % d == 0:
                raise ValueError("%d is not prime" % p)
        if p < 2:
            raise ValueError("%d is not prime" % p)
        self.p = p
        self.name = "F%d" % p
        self.zero = 0
        self.one = 1 % p

    def promote(self, v):
        if isinstance(v, str):
            v = Fraction(v)
        if isinstance(v, Fraction):
            return self.mul(v.numerator, self.inv(self.promote(v.denominator)))
        return int(v) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError
        return pow(a, self.p - 2, self.p)


ZZ = IntegerRing()
QQ = RationalField()


def ring_by_name(name: str) -> Ring:
    name = name.lower()
    if name == "z":
        return ZZ
    if name == "q":
        return QQ
    if name.startswith("f") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError("unknown ring %r (use z, q, f2, f3, ...)" % name)


# ---------------------------------------------------------------------------
# exact Gaussian elimination over a field


def row_reduce(ring, rows):
    """Reduced row echelon form; returns (rref rows, pivot column list)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next(
            (t for t in range(r, len(rows)) if not ring.is_zero(rows[t][c])), None
        )
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = [ring.mul(inv, v) for v in rows[r]]
        for t in range(len(rows)):
            if t != r and not ring.is_zero(rows[t][c]):
                f = rows[t][c]
                rows[t] = [
                    ring.sub(v, ring.mul(f, w)) for v, w in zip(rows[t], rows[r])
                ]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(ring, rows):
    return len(row_reduce(ring, rows)[1])


def nullspace(ring, rows, ncols=None):
    """Basis of {v : rows . v = 0}, each vector of length ncols."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    rref, pivots = row_reduce(ring, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ring.zero] * ncols
        v[f] = ring.one
        for r, c in enumerate(pivots):
            v[c] = ring.neg(rref[r][f])
        basis.append(v)
    return basis


def solve(ring, rows, target):
    """One solution v of rows^T? -- solves sum_j v_j * column_j = target.

    rows is the matrix whose COLUMNS are the spanning vectors; returns the
    coefficient vector or None when target is outside the span.
    """
    if not rows:
        return [] if all(ring.is_zero(t) for t in target) else None
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [list(rows[r]) + [target[r]] for r in range(nrows)]
    rref, pivots = row_reduce(ring, aug)
    if ncols in pivots:
        return None
    v = [ring.zero] * ncols
    for r, c in enumerate(pivots):
        v[c] = rref[r][ncols]
    return v


def in_span(ring, columns, target):
    """Is target a linear combination of the given column vectors?"""
    if not columns:
        return all(ring.is_zero(t) for t in target)
    rows = [[col[r] for col in columns] for r in range(len(target))]
    return solve(ring, rows, target) is not None


# ---------------------------------------------------------------------------
# Smith normal form over the integers


def smith_normal_form(rows):
    """Invariant factors of an integer matrix (no transform tracking)."""
    m = [list(map(int, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    factors = []
    top = 0
    while top < min(nrows, ncols):
        # find a nonzero entry of least magnitude in the remaining block
        best = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        m[top], m[i] = m[i], m[top]
        for row in m:
            row[top], row[j] = row[j], row[top]
        pivot = m[top][top]
        dirty = False
        for i in range(top + 1, nrows):
            q = m[i][top] // pivot
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[top])]
            if m[i][top] != 0:
                dirty = True
        for j in range(top + 1, ncols):
            q = m[top][j] // pivot
            if q:
                for row in m:
                    row[j] -= q * row[top]
            if m[top][j] != 0:
                dirty = True
        if dirty:
            continue
        # pivot must divide the rest of the block
        offender = None
        for i in range(top + 1, nrows):
            for j in range(top + 1, ncols):
                if m[i][j] % pivot != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            m[top] = [a + b for a, b in zip(m[top], m[offender])]
            continue
        factors.append(abs(pivot))
        top += 1
    return factors


def integer_homology(d_in, d_out, n_chains):
    """Homology at C with d_in: C' -> C incoming and d_out: C -> C'' outgoing.

    d_out has n_chains columns; d_in has n_chains rows.  Returns
    (betti rank, [torsion orders > 1]).
    """
    factors_in = smith_normal_form(d_in) if d_in and d_in[0] else []
    rank_in = len(factors_in)
    rank_out = len(smith_normal_form(d_out)) if d_out and d_out[0] else 0
    betti = n_chains - rank_out - rank_in
    torsion = [f for f in factors_in if f > 1]
    return betti, torsion
