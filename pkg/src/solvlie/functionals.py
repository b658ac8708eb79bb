"""Points of g* and the two coadjoint flows.

A functional is stored through its values on the real basis of g, which
makes the reality constraint l(conj(Z)) = conj(l(Z)) automatic. Exact
functionals carry Fractions; float functionals carry Python floats (used
for dilation flows, whose matrices have entries e^{t}).

Conventions fixed once for the whole package:

    [A, Z_j] = gamma_j(A) Z_j        (g * l)(X) = l(Ad_{g^{-1}} X)

so exp(A) scales adapted coordinates by e^{-gamma_j(A)} and exp(X), X in n,
acts through the exact polynomial series of -ad(X) transposed.
"""

from __future__ import annotations

import cmath
import random
from fractions import Fraction
from typing import List, Sequence, Union

from .adapted import AdaptableBasis
from .algebra import LieAlgebraSpec, ad_matrix, weight_decomposition
from .gaussian import GaussianRational, ZERO
from .linalg import solve

Scalar = Union[GaussianRational, complex]


class NotUnipotentError(ValueError):
    pass


class NeedsFloatError(ValueError):
    pass


class RealityError(ValueError):
    pass


class Functional:
    __slots__ = ("basis", "values", "exact", "_gram")

    def __init__(self, basis: AdaptableBasis, values: Sequence, exact: bool):
        self._gram = None
        self.basis = basis
        if exact:
            self.values = tuple(Fraction(v) if not isinstance(v, Fraction) else v
                                for v in values)
        else:
            self.values = tuple(float(v) for v in values)
        self.exact = exact
        if len(self.values) != basis.dim:
            raise ValueError("wrong number of coordinates")

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_real(cls, basis: AdaptableBasis, values, exact=True) -> "Functional":
        return cls(basis, values, exact)

    @classmethod
    def from_adapted(cls, basis: AdaptableBasis, zvals: Sequence) -> "Functional":
        """Build from values on the adapted basis; enforces reality exactly."""
        zs = [GaussianRational.coerce(z) if not isinstance(z, GaussianRational) else z
              for z in zvals]
        if len(zs) != basis.dim:
            raise ValueError("need one value per adapted basis vector")
        rows = [[basis.vectors[j][m] for m in range(basis.dim)]
                for j in range(basis.dim)]
        x = solve(rows, zs)
        if x is None:
            raise RealityError("inconsistent adapted values")
        if any(not xi.is_real() for xi in x):
            raise RealityError("values violate l(conj Z) = conj l(Z)")
        return cls(basis, [xi.re for xi in x], exact=True)

    def to_float(self) -> "Functional":
        if not self.exact:
            return self
        return Functional(self.basis, [float(v) for v in self.values], exact=False)

    # -- evaluation --------------------------------------------------------

    def value(self, vec: Sequence) -> Scalar:
        """Evaluate on a coordinate vector of g_C (complex-linear extension)."""
        if self.exact and vec and isinstance(vec[0], GaussianRational):
            total = ZERO
            for c, v in zip(vec, self.values):
                if not c.is_zero() and v != 0:
                    total = total + c * v
            return total
        total = 0j
        for c, v in zip(vec, self.values):
            total += complex(c) * complex(v)
        return total

    def z(self, j: int) -> Scalar:
        """Value on the j-th adapted basis vector (1-based)."""
        return self.value(self.basis.vector(j))

    def zvalues(self) -> List[Scalar]:
        return [self.z(j) for j in range(1, self.basis.dim + 1)]

    def _gram_matrix(self):
        # G[p][q] = l([e_p, e_q]) over the real basis, cached per functional
        if self._gram is None:
            spec = self.basis.spec
            dim = spec.dim
            zero = Fraction(0) if self.exact else 0.0
            g = [[zero] * dim for _ in range(dim)]
            for p in range(dim):
                for q in range(dim):
                    total = zero
                    for m, c in spec.bracket_sparse(p, q):
                        val = self.values[m]
                        if val:
                            total = total + c.re * val if self.exact \
                                else total + float(c.re) * val
                    g[p][q] = total
            self._gram = g
        return self._gram

    def pair(self, u: Sequence, v: Sequence) -> Scalar:
        """The orbit form at this point: l([u, v])."""
        g = self._gram_matrix()
        exact = self.exact and isinstance(u[0], GaussianRational) \
            and isinstance(v[0], GaussianRational)
        if exact:
            total = ZERO
            for p, up in enumerate(u):
                if up.is_zero():
                    continue
                row = g[p]
                inner = ZERO
                for q, vq in enumerate(v):
                    if row[q] and not vq.is_zero():
                        inner = inner + vq * row[q]
                if not inner.is_zero():
                    total = total + up * inner
            return total
        total = 0j
        for p, up in enumerate(u):
            cu = complex(up)
            if cu == 0:
                continue
            row = g[p]
            inner = 0j
            for q, vq in enumerate(v):
                if row[q]:
                    inner += complex(vq) * row[q]
            total += cu * inner
        return total

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __repr__(self):
        vals = ", ".join(str(v) for v in self.values)
        return f"Functional[{'exact' if self.exact else 'float'}]({vals})"


# ---------------------------------------------------------------------------
# unipotent coadjoint flow: exact polynomial series
# ---------------------------------------------------------------------------

def _nilpotent_exp_neg(spec: LieAlgebraSpec, x_vec) -> List[List[Fraction]]:
    """e^{-ad x} for x in n, as an exact rational matrix."""
    m = ad_matrix(spec, x_vec)
    dim = spec.dim
    out = [[Fraction(1) if i == j else Fraction(0) for j in range(dim)]
           for i in range(dim)]
    term = [[-m[i][j] for j in range(dim)] for i in range(dim)]
    k = 1
    while any(any(e != 0 for e in row) for row in term):
        if k > dim + 1:
            raise NotUnipotentError("ad(x) is not nilpotent")
        for i in range(dim):
            for j in range(dim):
                out[i][j] += term[i][j]
        nxt = [[sum((term[i][p] * -m[p][j] for p in range(dim)), Fraction(0))
                for j in range(dim)] for i in range(dim)]
        term = [[e / (k + 1) for e in row] for row in nxt]
        k += 1
    return out


def exp_unipotent_coadjoint(spec_or_basis, x_vec, l: Functional) -> Functional:
    """Coadjoint action of exp(x), x in n: exact on exact functionals."""
    basis = l.basis
    spec = basis.spec
    if isinstance(x_vec, dict):
        x_vec = spec.vector_from_labels(x_vec)
    nd = spec.n_dim
    for m in range(nd, spec.dim):
        c = x_vec[m]
        bad = (not c.is_zero()) if isinstance(c, GaussianRational) else c != 0
        if bad:
            raise NotUnipotentError("element has a nonzero h-component")
    emat = _nilpotent_exp_neg(spec, x_vec)
    if l.exact:
        new = [sum((Fraction(emat[p][m]) * l.values[p] for p in range(spec.dim)),
                   Fraction(0)) for m in range(spec.dim)]
        return Functional(basis, new, exact=True)
    new = [sum(float(emat[p][m]) * l.values[p] for p in range(spec.dim))
           for m in range(spec.dim)]
    return Functional(basis, new, exact=False)


# ---------------------------------------------------------------------------
# dilation coadjoint flow: diagonal in an exact joint eigenbasis
# ---------------------------------------------------------------------------

class _EigenData:
    """Exact joint eigenbasis of the dilation action, cached per spec."""

    def __init__(self, spec: LieAlgebraSpec):
        spaces = weight_decomposition(spec)
        rows = []
        weights = []
        for sp in spaces:
            for r in sp.rows:
                rows.append(list(r) + [ZERO] * spec.h_dim)
                weights.append(sp.weights)
        self.rows = rows          # eigenvectors over n, as full-width rows
        self.weights = weights    # per row: gamma(A_t) for each t
        self.spec = spec

    def gamma_at(self, idx: int, a_vec) -> complex:
        total = 0j
        for t in range(self.spec.h_dim):
            total += complex(a_vec[self.spec.n_dim + t]) * complex(self.weights[idx][t])
        return total

    def gamma_at_exact(self, idx: int, a_vec) -> GaussianRational:
        total = ZERO
        for t in range(self.spec.h_dim):
            c = a_vec[self.spec.n_dim + t]
            c = c if isinstance(c, GaussianRational) else GaussianRational.coerce(c)
            total = total + c * self.weights[idx][t]
        return total


def _eigen_data(spec: LieAlgebraSpec) -> _EigenData:
    cached = getattr(spec, "_eigen_cache", None)
    if cached is None:
        cached = _EigenData(spec)
        spec._eigen_cache = cached
    return cached


def exp_h_coadjoint(spec_or_basis, a_vec, l: Functional,
                    mode: str = "float") -> Functional:
    """Coadjoint action of exp(a), a in h.

    Exact mode is only available when every eigen-coordinate of l that the
    flow would rescale has weight value gamma(a) = 0 (then nothing moves).
    Float mode transforms to the exact eigenbasis, scales by e^{-gamma(a)},
    and transforms back in double precision.
    """
    basis = l.basis
    spec = basis.spec
    if isinstance(a_vec, dict):
        a_vec = spec.vector_from_labels(a_vec)
    for m in range(spec.n_dim):
        c = a_vec[m]
        bad = (not c.is_zero()) if isinstance(c, GaussianRational) else c != 0
        if bad:
            raise ValueError("element has a nonzero n-component")
    eig = _eigen_data(spec)

    if mode == "exact":
        if not l.exact:
            raise NeedsFloatError("exact mode requires an exact functional")
        for idx, row in enumerate(eig.rows):
            gamma = eig.gamma_at_exact(idx, a_vec)
            if gamma.is_zero():
                continue
            if not l.value(row).is_zero():
                raise NeedsFloatError(
                    "flow rescales a coordinate with nonzero weight; use float mode")
        return l
    if mode != "float":
        raise ValueError("mode must be 'exact' or 'float'")

    lf = l.to_float()
    nd = spec.n_dim
    # eigen coordinates of the n-part, scaled by e^{-gamma(a)}
    y = []
    for idx, row in enumerate(eig.rows):
        g = eig.gamma_at(idx, a_vec)
        y.append(lf.value(row) * cmath.exp(-g))
    # recover the real coordinates: sum_m rows[i][m] x_m = y_i
    mat = [[complex(eig.rows[i][m]) for m in range(nd)] for i in range(nd)]
    x = solve(mat, y, tol=1e-13)
    if x is None:
        raise RuntimeError("eigenbasis transform failed")
    new = list(lf.values)
    for m in range(nd):
        if abs(x[m].imag) > 1e-8 * (1 + abs(x[m])):
            raise RealityError("flow produced a non-real functional")
        new[m] = x[m].real
    return Functional(basis, new, exact=False)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def sample_functional(basis: AdaptableBasis, rng: random.Random,
                      bound: int = 9, support: str = "g") -> Functional:
    """Random exact functional with integer coordinates in [-bound, bound]."""
    dim = basis.dim
    nd = basis.n
    vals = []
    for m in range(dim):
        if support == "n" and m >= nd:
            vals.append(Fraction(0))
        else:
            vals.append(Fraction(rng.randint(-bound, bound)))
    return Functional(basis, vals, exact=True)


def sample_element(spec: LieAlgebraSpec, rng: random.Random, bound: int = 5,
                   support: str = "n"):
    """Random exact element of n (or h, or g) as a coordinate vector."""
    lo = 0 if support in ("n", "g") else spec.n_dim
    hi = spec.dim if support in ("h", "g") else spec.n_dim
    return tuple(GaussianRational(rng.randint(-bound, bound))
                 if lo <= m < hi else ZERO for m in range(spec.dim))
