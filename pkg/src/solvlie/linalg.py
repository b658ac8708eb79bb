"""Row-echelon linear algebra over Q(i), with a tolerance mode for floats.

Matrices are lists of row lists. Scalars are GaussianRational in exact mode
and Python complex in float mode; the two never mix inside one matrix.
Exact mode decides ranks deterministically, which is what makes the jump
index machinery reproducible. Float mode exists only for coadjoint flows
under the dilation group, where entries pick up factors e^{t}.
"""

from __future__ import annotations

from typing import Iterable, List, Optional

from .gaussian import GaussianRational, ZERO

Row = List
Matrix = List[Row]


def _is_zero(x, tol: Optional[float]) -> bool:
    if tol is None:
        return x.is_zero() if isinstance(x, GaussianRational) else x == 0
    return abs(x) <= tol


def _zero(tol: Optional[float]):
    return ZERO if tol is None else 0j


def rref(rows: Matrix, tol: Optional[float] = None) -> tuple[Matrix, List[int]]:
    """Reduced row echelon form. Returns (rows, pivot column indices).

    Exact mode picks the first nonzero pivot; float mode picks the largest
    entry in the column (partial pivoting) and zeroes entries below tol.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        pivot_row = None
        if tol is None:
            for k in range(r, len(rows)):
                if not _is_zero(rows[k][c], tol):
                    pivot_row = k
                    break
        else:
            best = tol
            for k in range(r, len(rows)):
                if abs(rows[k][c]) > best:
                    best = abs(rows[k][c])
                    pivot_row = k
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        rows[r] = [x if _is_zero(x, tol) else x / inv for x in rows[r]]
        pivot_row_vals = rows[r]
        for k in range(len(rows)):
            if k != r and not _is_zero(rows[k][c], tol):
                f = rows[k][c]
                rows[k] = [a if _is_zero(b, tol) else a - f * b
                           for a, b in zip(rows[k], pivot_row_vals)]
        pivots.append(c)
        r += 1
    kept = rows[: len(pivots)]
    if tol is not None:
        kept = [[x if abs(x) > tol else 0j for x in row] for row in kept]
    return kept, pivots


def rank(rows: Matrix, tol: Optional[float] = None) -> int:
    return len(rref(rows, tol)[1])


def kernel(rows: Matrix, ncols: int, tol: Optional[float] = None) -> Matrix:
    """Basis of {x : rows @ x = 0} as row vectors of length ncols."""
    red, pivots = rref(rows, tol)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    one = GaussianRational(1) if tol is None else 1 + 0j
    for f in free:
        vec = [_zero(tol)] * ncols
        vec[f] = one
        for row, p in zip(red, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def solve(rows: Matrix, rhs: Row, tol: Optional[float] = None) -> Optional[Row]:
    """One solution x of rows @ x = rhs, or None if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, tol)
    x = [_zero(tol)] * ncols
    for row, p in zip(red, pivots):
        if p == ncols:
            return None  # pivot in the constant column
        x[p] = row[-1]
    return x


def mat_vec(rows: Matrix, x: Row) -> Row:
    zero = ZERO if (x and isinstance(x[0], GaussianRational)) else 0j
    return [sum((a * b for a, b in zip(r, x)), zero) for r in rows]


class Subspace:
    """A subspace of the coordinate space, held in canonical RREF form.

    Equality of exact subspaces is literal row comparison of the RREF basis.
    """

    __slots__ = ("rows", "ambient_dim", "pivots", "tol")

    def __init__(self, rows: Iterable[Row], ambient_dim: int,
                 tol: Optional[float] = None):
        red, pivots = rref([list(r) for r in rows], tol)
        self.rows = red
        self.pivots = pivots
        self.ambient_dim = ambient_dim
        self.tol = tol

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains_vector(self, vec: Row) -> bool:
        return rank(self.rows + [list(vec)], self.tol) == self.dim

    def contains(self, other: "Subspace") -> bool:
        return rank(self.rows + other.rows, self.tol) == self.dim

    def intersect(self, other: "Subspace") -> "Subspace":
        # S cap T = annihilator of (ann S + ann T); ann is an involution.
        ann = kernel(self.rows, self.ambient_dim, self.tol) + \
            kernel(other.rows, self.ambient_dim, self.tol)
        return Subspace(kernel(ann, self.ambient_dim, self.tol),
                        self.ambient_dim, self.tol)

    def add(self, other: "Subspace") -> "Subspace":
        return Subspace(self.rows + other.rows, self.ambient_dim, self.tol)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.tol is not None or other.tol is not None:
            raise ValueError("equality is only decidable for exact subspaces")
        return self.ambient_dim == other.ambient_dim and self.rows == other.rows

    def __hash__(self):
        return hash((self.ambient_dim, tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def full_space(n: int, tol: Optional[float] = None) -> Subspace:
    one = GaussianRational(1) if tol is None else 1 + 0j
    zero = _zero(tol)
    rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
    return Subspace(rows, n, tol)


def zero_space(n: int, tol: Optional[float] = None) -> Subspace:
    return Subspace([], n, tol)


def det(rows: Matrix) -> GaussianRational:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(rows)
    if n == 0:
        return GaussianRational(1)
    a = [list(r) for r in rows]
    out = GaussianRational(1)
    for c in range(n):
        piv = None
        for k in range(c, n):
            if not a[k][c].is_zero():
                piv = k
                break
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            out = -out
        out = out * a[c][c]
        inv = a[c][c]
        for k in range(c + 1, n):
            if not a[k][c].is_zero():
                f = a[k][c] / inv
                a[k] = [x - f * y for x, y in zip(a[k], a[c])]
    return out
