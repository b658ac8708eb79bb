"""Orbit cross-sections and the little-group data.

Four nested membership oracles over a fixed generic layer:

  * the section of the nilpotent-part orbits (vanishing of l(Z_j(l)) over
    the layer's jump set),
  * its dense dilation-invariant part (nonzero coordinates off the jump
    set),
  * the section of the dilation orbits inside it (unit modulus on the
    paired coordinates), and
  * the section of the full-group orbits in g* (previous conditions on the
    restriction, zero on the normalized dilation directions, free on the
    little-group dual).

Membership always evaluates the defining equations directly at the point;
the constraint lists only describe which simple form each equation takes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .adapted import AdaptableBasis
from .algebra import LieAlgebraSpec
from .functionals import Functional, exp_h_coadjoint
from .gaussian import GaussianRational, ZERO
from .linalg import Subspace, kernel, rank, rref, solve
from .strata import (LayerDescriptor, LayerMismatchError, jump_data,
                     section_vectors)

MEMBERSHIP_TOL = 1e-9


class NormalizationFailedError(ValueError):
    pass


class NotInSectionError(ValueError):
    pass


class UnsupportedLayerError(ValueError):
    """The layer needs machinery outside this tool's sampling support."""


# ---------------------------------------------------------------------------
# little group
# ---------------------------------------------------------------------------

@dataclass
class StabilizerData:
    nu: Tuple[int, ...]                    # adapted indices off the jump set
    k_subalg: Subspace                     # subspace of h (rational rows)
    a_basis: List[Tuple[Fraction, ...]]    # normalized complement, A_1..A_r
    phi: Tuple[int, ...]                   # indices i_{s_1} < ... < i_{s_r}

    @property
    def k_dim(self) -> int:
        return self.k_subalg.dim

    @property
    def r(self) -> int:
        return len(self.a_basis)

    def as_dict(self, h_names):
        def combo(row):
            return {name: str(c) for name, c in zip(h_names, row) if c != 0}
        return {
            "nu": list(self.nu),
            "k_dim": self.k_dim,
            "k_basis": [combo([x.re for x in r]) for r in self.k_subalg.rows],
            "a_basis": [combo(r) for r in self.a_basis],
            "phi": list(self.phi),
        }


def stabilizer_data(spec: LieAlgebraSpec, basis: AdaptableBasis,
                    n_layer: LayerDescriptor) -> StabilizerData:
    """The common stabilizer subalgebra k over the dense part of the section,
    plus a normalized complement pairing with the phi coordinates.

    k is the joint kernel of the weights on the off-jump-set coordinates.
    The complement basis A_t satisfies Re weight_{phi_t}(A_u) = delta_{tu}.
    """
    nd, hd = spec.n_dim, spec.h_dim
    nu = tuple(j for j in range(1, nd + 1) if j not in set(n_layer.e_set))
    rows = []
    for j in nu:
        w = basis.weights[j - 1]
        rows.append([GaussianRational(x.re) for x in w])
        rows.append([GaussianRational(x.im) for x in w])
    k_rows = kernel(rows, hd) if rows else \
        [[GaussianRational(1) if i == t else ZERO for t in range(hd)]
         for i in range(hd)]
    k_sub = Subspace(k_rows, hd)

    # phi indices: walk nu upward, keep those whose real weight is new
    sel: List[List[GaussianRational]] = []
    phi: List[int] = []
    for j in nu:
        row = [GaussianRational(x.re) for x in basis.weights[j - 1]]
        if all(x.is_zero() for x in row):
            continue
        if rank(sel + [row]) > len(phi):
            sel.append(row)
            phi.append(j)

    r = len(phi)
    if k_sub.dim + r != hd:
        raise NormalizationFailedError(
            f"complement mismatch: dim k = {k_sub.dim}, r = {r}, dim h = {hd}")

    a_basis: List[Tuple[Fraction, ...]] = []
    if r:
        mat = [[basis.weights[j - 1][t].re for t in range(hd)] for j in phi]
        gmat = [[GaussianRational(x) for x in row] for row in mat]
        _, pivots = rref([list(row) for row in gmat])
        if len(pivots) < r:
            raise NormalizationFailedError("real weights on phi are dependent")
        for t in range(r):
            rhs = [GaussianRational(1 if u == t else 0) for u in range(r)]
            cols = [[gmat[u][p] for p in pivots] for u in range(r)]
            x = solve(cols, rhs)
            if x is None:
                raise NormalizationFailedError("normalization system is singular")
            full = [Fraction(0)] * hd
            for p, val in zip(pivots, x):
                if not val.is_real():
                    raise NormalizationFailedError("complex normalization")
                full[p] = val.re
            a_basis.append(tuple(full))
    return StabilizerData(nu=nu, k_subalg=k_sub, a_basis=a_basis, phi=tuple(phi))


def pointwise_stabilizer(f: Functional, basis: AdaptableBasis) -> Subspace:
    """{X in h : weight_j(X) = 0 whenever f(Z_j) != 0}, exact."""
    spec = basis.spec
    rows = []
    for j in range(1, basis.n + 1):
        zv = f.z(j)
        nonzero = (not zv.is_zero()) if isinstance(zv, GaussianRational) else zv != 0
        if nonzero:
            w = basis.weights[j - 1]
            rows.append([GaussianRational(x.re) for x in w])
            rows.append([GaussianRational(x.im) for x in w])
    if not rows:
        return Subspace([[GaussianRational(1) if i == t else ZERO
                          for t in range(spec.h_dim)]
                         for i in range(spec.h_dim)], spec.h_dim)
    return Subspace(kernel(rows, spec.h_dim), spec.h_dim)


def canonical_h_vectors(spec: LieAlgebraSpec, stab: StabilizerData):
    """h-part vectors in the order: k-part first, then A_r, ..., A_1."""
    nd, hd = spec.n_dim, spec.h_dim
    out = []
    for row in stab.k_subalg.rows:
        out.append(tuple([ZERO] * nd
                         + [GaussianRational(x.re) for x in row]))
    for a in reversed(stab.a_basis):
        out.append(tuple([ZERO] * nd + [GaussianRational(c) for c in a]))
    if rank([list(v) for v in out]) != hd:
        raise NormalizationFailedError("k-part plus complement is not a basis of h")
    return out


# ---------------------------------------------------------------------------
# membership oracles
# ---------------------------------------------------------------------------

@dataclass
class Constraint:
    kind: str                 # VANISH | CASE2_COMBO | CASE3_COMBO | MODULUS_ONE
    #                         # | NONZERO | H_PART_ZERO
    index: Optional[int] = None

    def as_dict(self):
        out = {"kind": self.kind}
        if self.index is not None:
            out["index"] = self.index
        return out


def _case_of(j: int, layer: LayerDescriptor) -> int:
    stable = set(layer.stable_set)
    e = set(layer.e_set)
    if j in stable or (j + 1) in e:
        return 1
    if j in set(layer.i_seq):
        return 2
    return 3


def _iszero(x, exact: bool, tol: float) -> bool:
    if exact and isinstance(x, GaussianRational):
        return x.is_zero()
    return abs(complex(x)) <= tol


class SectionOracle:
    """Membership test for one of the nested cross-sections."""

    def __init__(self, kind: str, basis: AdaptableBasis,
                 n_layer: LayerDescriptor,
                 stab: Optional[StabilizerData] = None,
                 phi: Optional[Tuple[int, ...]] = None,
                 check_layer: bool = True):
        if kind not in ("Lambda", "LambdaNu", "SigmaCirc", "Sigma"):
            raise ValueError(f"unknown oracle kind {kind!r}")
        self.kind = kind
        self.basis = basis
        self.n_layer = n_layer
        self.stab = stab
        self.phi = tuple(phi) if phi is not None else \
            (tuple(stab.phi) if stab is not None else ())
        self.check_layer = check_layer
        self.constraints = self._build_constraints()

    def _build_constraints(self) -> List[Constraint]:
        cons = [Constraint({1: "VANISH", 2: "CASE2_COMBO", 3: "CASE3_COMBO"}
                           [_case_of(j, self.n_layer)], j)
                for j in self.n_layer.e_set]
        if self.kind == "Lambda":
            return cons
        nd = self.basis.n
        nu = tuple(j for j in range(1, nd + 1)
                   if j not in set(self.n_layer.e_set))
        cons += [Constraint("NONZERO", j) for j in nu]
        if self.kind == "LambdaNu":
            return cons
        cons += [Constraint("MODULUS_ONE", j) for j in self.phi]
        if self.kind == "SigmaCirc":
            return cons
        cons.append(Constraint("H_PART_ZERO"))
        return cons

    @property
    def printable_form(self) -> Optional[str]:
        """Closed form, available when every jump equation is the simple one."""
        if any(c.kind in ("CASE2_COMBO", "CASE3_COMBO") for c in self.constraints):
            return None
        names = self.basis.describe()
        parts = []
        for c in self.constraints:
            if c.kind == "VANISH":
                parts.append(f"l({names[c.index - 1]}) = 0")
            elif c.kind == "NONZERO":
                parts.append(f"l({names[c.index - 1]}) != 0")
            elif c.kind == "MODULUS_ONE":
                parts.append(f"|l({names[c.index - 1]})| = 1")
            elif c.kind == "H_PART_ZERO":
                parts.append("zero on the normalized dilation directions")
        return ", ".join(parts)

    # -- the membership decision -------------------------------------------

    def contains(self, f: Functional, tol: float = MEMBERSHIP_TOL) -> bool:
        exact = f.exact
        basis = self.basis
        if self.check_layer:
            try:
                jd = jump_data(f, basis, "n")
            except LayerMismatchError:
                return False
            if jd.e_set != self.n_layer.e_set or jd.j_seq != self.n_layer.j_seq:
                return False
        else:
            jd = None
        try:
            sv = section_vectors(f, basis, jd, "n")
        except (LayerMismatchError, ZeroDivisionError):
            return False
        for j in self.n_layer.e_set:
            if not _iszero(f.value(sv.z_at[j]), exact, tol):
                return False
        if self.kind == "Lambda":
            return True
        nd = basis.n
        for j in range(1, nd + 1):
            if j in set(self.n_layer.e_set):
                continue
            if _iszero(f.z(j), exact, tol):
                return False
        if self.kind == "LambdaNu":
            return True
        for j in self.phi:
            zv = f.z(j)
            if exact and isinstance(zv, GaussianRational):
                if zv.abs2() != 1:
                    return False
            else:
                if abs(abs(complex(zv)) - 1.0) > tol:
                    return False
        if self.kind == "SigmaCirc":
            return True
        if self.stab is None:
            raise ValueError("full-section oracle needs stabilizer data")
        nd_full = basis.spec.n_dim
        for a in self.stab.a_basis:
            vec = [ZERO] * nd_full + [GaussianRational(c) for c in a]
            if not _iszero(f.value(vec), exact, tol):
                return False
        return True

    def as_dict(self):
        out = {
            "kind": self.kind,
            "constraints": [c.as_dict() for c in self.constraints],
        }
        pf = self.printable_form
        if pf is not None:
            out["printable"] = pf
        return out


def lambda_oracle(basis: AdaptableBasis, n_layer: LayerDescriptor) -> SectionOracle:
    return SectionOracle("Lambda", basis, n_layer)


def lambda_nu_oracle(basis: AdaptableBasis, n_layer: LayerDescriptor) -> SectionOracle:
    return SectionOracle("LambdaNu", basis, n_layer)


def sigma_circ_oracle(basis: AdaptableBasis, n_layer: LayerDescriptor,
                      stab: StabilizerData,
                      g_phi: Optional[Tuple[int, ...]] = None) -> SectionOracle:
    phi = tuple(g_phi) if g_phi is not None else tuple(stab.phi)
    return SectionOracle("SigmaCirc", basis, n_layer, stab=stab, phi=phi)


def sigma_oracle(basis: AdaptableBasis, n_layer: LayerDescriptor,
                 stab: StabilizerData,
                 g_phi: Optional[Tuple[int, ...]] = None) -> SectionOracle:
    phi = tuple(g_phi) if g_phi is not None else tuple(stab.phi)
    return SectionOracle("Sigma", basis, n_layer, stab=stab, phi=phi)


# ---------------------------------------------------------------------------
# samplers on the sections (simple-equation layers only)
# ---------------------------------------------------------------------------

def _assert_simple_layer(oracle: SectionOracle):
    if any(c.kind in ("CASE2_COMBO", "CASE3_COMBO") for c in oracle.constraints):
        raise UnsupportedLayerError(
            "sampling is only implemented for layers whose jump equations "
            "reduce to coordinate vanishing")


def sample_lambda_nu(oracle: SectionOracle, rng: random.Random,
                     bound: int = 9, max_tries: int = 200) -> Functional:
    """Random exact point of the dense invariant part of the section.

    Draws free coordinates and rejects the (measure-zero) draws that fall
    into a lower layer; nonzero coordinates alone do not guarantee
    genericity.
    """
    _assert_simple_layer(oracle)
    basis = oracle.basis
    e = set(oracle.n_layer.e_set)
    for _ in range(max_tries):
        zvals: List[GaussianRational] = [ZERO] * basis.dim
        for j in range(1, basis.n + 1):
            if j in e:
                continue
            s = basis.sigma[j]
            if s == j:
                v = 0
                while v == 0:
                    v = rng.randint(-bound, bound)
                zvals[j - 1] = GaussianRational(v)
            elif s > j:
                re = im = 0
                while re == 0 and im == 0:
                    re, im = rng.randint(-bound, bound), rng.randint(-bound, bound)
                zvals[j - 1] = GaussianRational(re, im)
                zvals[s - 1] = GaussianRational(re, -im)
        f = Functional.from_adapted(basis, zvals)
        if oracle.contains(f):
            return f
    raise UnsupportedLayerError("could not hit the generic layer by sampling")


def _rational_circle_point(rng: random.Random) -> GaussianRational:
    # (1-t^2, 2t)/(1+t^2) runs over rational points of the unit circle
    t = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    d = 1 + t * t
    return GaussianRational((1 - t * t) / d, 2 * t / d)


def sample_sigma_circ(oracle: SectionOracle, rng: random.Random,
                      bound: int = 9, max_tries: int = 200) -> Functional:
    """Random exact point of the dilation-orbit section (rejection sampled)."""
    _assert_simple_layer(oracle)
    basis = oracle.basis
    e = set(oracle.n_layer.e_set)
    phi = set(oracle.phi)
    for _ in range(max_tries):
        zvals: List[GaussianRational] = [ZERO] * basis.dim
        for j in range(1, basis.n + 1):
            if j in e:
                continue
            s = basis.sigma[j]
            if s == j:
                if j in phi:
                    zvals[j - 1] = GaussianRational(rng.choice((-1, 1)))
                else:
                    v = 0
                    while v == 0:
                        v = rng.randint(-bound, bound)
                    zvals[j - 1] = GaussianRational(v)
            elif s > j:
                if j in phi:
                    z = _rational_circle_point(rng)
                else:
                    re = im = 0
                    while re == 0 and im == 0:
                        re, im = rng.randint(-bound, bound), rng.randint(-bound, bound)
                    z = GaussianRational(re, im)
                zvals[j - 1] = z
                zvals[s - 1] = z.conjugate()
        f = Functional.from_adapted(basis, zvals)
        if oracle.contains(f):
            return f
    raise UnsupportedLayerError("could not hit the generic layer by sampling")


# ---------------------------------------------------------------------------
# projection along dilation orbits
# ---------------------------------------------------------------------------

def h_project(f: Functional, stab: StabilizerData,
              oracle_lambda_nu: SectionOracle,
              oracle_sigma_circ: SectionOracle,
              tol: float = MEMBERSHIP_TOL) -> Tuple[Tuple[float, ...], Functional]:
    """Unique dilation parameters (mod the little group) moving f onto the
    dilation-orbit section, and the landed point.

    Solves Re weight_{phi_t}(X) = log|f(Z_{phi_t})| on the normalized
    complement, where the system is diagonal, then flows by exp(X).
    """
    if not oracle_lambda_nu.contains(f, tol):
        raise NotInSectionError("point is not in the dense invariant section part")
    basis = f.basis
    spec = basis.spec
    params = []
    for j in stab.phi:
        zv = f.z(j)
        a2 = float(zv.abs2()) if isinstance(zv, GaussianRational) else abs(zv) ** 2
        params.append(0.5 * math.log(a2))
    x = [0.0] * spec.dim
    for t, a in zip(params, stab.a_basis):
        for u, c in enumerate(a):
            x[spec.n_dim + u] += t * float(c)
    sigma = exp_h_coadjoint(spec, x, f.to_float(), mode="float")
    if not oracle_sigma_circ.contains(sigma, tol):
        raise NotInSectionError("projection missed the section; layer mismatch")
    return tuple(params), sigma
