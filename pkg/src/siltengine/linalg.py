"""Exact dense linear algebra over a prime field or the rationals.

All matrices are numpy arrays: int64 entries reduced to [0, p) for GF(p),
Fraction objects for the rationals.  Subspaces are represented by matrices
whose rows form a basis; canonical form is the reduced row echelon form with
zero rows dropped, so equal subspaces compare equal entrywise.
"""

from fractions import Fraction

import numpy as np


class FieldMismatchError(ValueError):
    pass


class GF:
    """Prime field F_p with p fitting in a machine word."""

    def __init__(self, p):
        if p < 2:
            raise ValueError("p must be a prime >= 2")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return "GF(%d)" % self.p

    def array(self, data):
        return np.asarray(data, dtype=np.int64) % self.p

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def reduce(self, arr):
        return arr % self.p

    def inv(self, a):
        return pow(int(a), self.p - 2, self.p)

    def matmul(self, a, b):
        return (a @ b) % self.p

    def neg(self, arr):
        return (-arr) % self.p

    def rand(self, rng):
        return rng.randrange(self.p)


class RationalField:
    """Arbitrary-precision rationals via Fraction object arrays."""

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def array(self, data):
        a = np.asarray(data)
        out = np.empty(a.shape, dtype=object)
        flat_out, flat_in = out.reshape(-1), a.reshape(-1)
        for i in range(flat_in.size):
            flat_out[i] = Fraction(flat_in[i])
        return out

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.reshape(-1)[:] = [Fraction(0)] * out.size
        return out

    def eye(self, n):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def reduce(self, arr):
        return arr

    def inv(self, a):
        return Fraction(1) / a

    def matmul(self, a, b):
        if a.shape[1] != b.shape[0]:
            raise ValueError("shape mismatch")
        return a.dot(b)

    def neg(self, arr):
        return -arr

    def rand(self, rng):
        return Fraction(rng.randrange(-100, 101), rng.randrange(1, 20))


QQ = RationalField()


class Mat:
    """Field-tagged matrix; guards against mixing ground fields."""

    def __init__(self, field, data):
        self.field = field
        self.a = field.array(data)
        if self.a.ndim != 2:
            raise ValueError("Mat is 2-dimensional")

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatchError("mixed field tags")

    def __matmul__(self, other):
        self._check(other)
        return Mat(self.field, self.field.matmul(self.a, other.a))

    def __add__(self, other):
        self._check(other)
        return Mat(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other):
        self._check(other)
        return Mat(self.field, self.field.reduce(self.a - other.a))

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and bool(np.all(self.a == other.a))
        )

    def __repr__(self):
        return "Mat(%r, %r)" % (self.field, self.a.tolist())


def rref(F, a):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    a = F.reduce(np.array(a, copy=True))
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        k = r
        while k < nrows and a[k, c] == 0:
            k += 1
        if k == nrows:
            continue
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = F.reduce(a[r] * F.inv(a[r, c]))
        for i in range(nrows):
            if i != r and a[i, c] != 0:
                a[i] = F.reduce(a[i] - a[i, c] * a[r])
        pivots.append(c)
        r += 1
    return a, pivots


def rank(F, a):
    if a.size == 0:
        return 0
    return len(rref(F, a)[1])


def row_space(F, a):
    """Canonical basis of the row space (RREF with zero rows dropped)."""
    if a.shape[0] == 0:
        return F.zeros((0, a.shape[1]))
    r, pivots = rref(F, a)
    return r[: len(pivots)]


def kernel(F, a):
    """Basis (as rows) of the right null space {x : a @ x = 0}."""
    nrows, ncols = a.shape
    if ncols == 0:
        return F.zeros((0, 0))
    r, pivots = rref(F, a)
    free = [c for c in range(ncols) if c not in pivots]
    out = F.zeros((len(free), ncols))
    for i, c in enumerate(free):
        out[i, c] = 1
        for j, pc in enumerate(pivots):
            out[i, pc] = F.reduce(-r[j, c])
    return out


def solve(F, a, b):
    """Solve a @ x = b for a single column b.

    Returns (particular, kernel_rows) or None if inconsistent.
    """
    b = np.asarray(b).reshape(-1)
    if a.shape[0] != b.shape[0]:
        raise ValueError("a.rows must equal b.rows")
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    r, pivots = rref(F, aug)
    if a.shape[1] in pivots:
        return None
    x = F.zeros((a.shape[1],))
    for j, pc in enumerate(pivots):
        x[pc] = r[j, -1]
    return x, kernel(F, a)


def solve_matrix(F, a, b):
    """Solve a @ X = b columnwise; returns X or None if inconsistent."""
    cols = []
    for j in range(b.shape[1]):
        res = solve(F, a, b[:, j])
        if res is None:
            return None
        cols.append(res[0])
    if not cols:
        return F.zeros((a.shape[1], 0))
    return np.stack(cols, axis=1)


def in_span(F, basis, v):
    """Is the row vector v in the row span of basis?"""
    if basis.shape[0] == 0:
        return bool(np.all(F.reduce(np.asarray(v)) == 0))
    return solve(F, basis.T, np.asarray(v)) is not None


def coords_in_basis(F, basis, v):
    """Coefficients x with x @ basis = v, or None."""
    res = solve(F, basis.T, np.asarray(v))
    if res is None:
        return None
    return res[0]


def sum_spaces(F, u, v):
    if u.shape[0] == 0:
        return row_space(F, v)
    if v.shape[0] == 0:
        return row_space(F, u)
    if u.shape[1] != v.shape[1]:
        raise ValueError("ambient dimensions disagree")
    return row_space(F, np.concatenate([u, v], axis=0))


def intersect_spaces(F, u, v):
    """Canonical basis of the intersection of two row spaces."""
    if u.shape[1] != v.shape[1]:
        raise ValueError("ambient dimensions disagree")
    if u.shape[0] == 0 or v.shape[0] == 0:
        return F.zeros((0, u.shape[1]))
    # Zassenhaus: row-reduce [u u; v 0]; intersection shows in the lower right.
    n = u.shape[1]
    top = np.concatenate([u, u], axis=1)
    bot = np.concatenate([v, F.zeros(v.shape)], axis=1)
    r, pivots = rref(F, np.concatenate([top, bot], axis=0))
    # intersection rows are those whose left half vanished, i.e. whose pivot
    # sits in the right half of the Zassenhaus block matrix.
    rows = []
    for i, pc in enumerate(pivots):
        if pc >= n:
            rows.append(r[i, n:])
    if not rows:
        return F.zeros((0, n))
    return row_space(F, np.stack(rows, axis=0))


def complement(F, sub, whole):
    """Rows of `whole` completing a basis of `sub` to one of `whole`'s span.

    Returns (comp_rows, coords) where comp_rows spans a complement of the
    row space of sub inside that of whole.
    """
    cur = row_space(F, sub)
    comp = []
    for i in range(whole.shape[0]):
        v = whole[i]
        if not in_span(F, cur, v):
            comp.append(v)
            cur = sum_spaces(F, cur, v.reshape(1, -1))
    if not comp:
        return F.zeros((0, whole.shape[1]))
    return np.stack(comp, axis=0)


def quotient_coords(F, sub, total_basis, v):
    """Coordinates of v in span(total_basis) modulo span(sub).

    total_basis rows must be independent from sub and jointly span a space
    containing v.  Returns the coefficient vector over total_basis rows.
    """
    sub = row_space(F, sub)
    if total_basis.shape[0] == 0:
        return F.zeros((0,))
    stacked = (
        np.concatenate([sub, total_basis], axis=0) if sub.shape[0] else total_basis
    )
    c = coords_in_basis(F, stacked, v)
    if c is None:
        raise ValueError("vector not in the spanned space")
    return c[sub.shape[0] :]


def invert(F, a):
    """Inverse of a square matrix, or None if singular."""
    n = a.shape[0]
    if a.shape[1] != n:
        return None
    aug = np.concatenate([a, F.eye(n)], axis=1)
    r, pivots = rref(F, aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        return None
    return r[:, n:]
