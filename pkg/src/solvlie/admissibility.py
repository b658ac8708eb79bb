"""Admissibility of the quasiregular representation of N x| H on L^2(N).

The decision needs three ingredients, all computed exactly: whether the
full group is unimodular (traces of ad), the intersection of the center
with the dilation part, and, for the decomposition summary, the
multiplicity of the generic irreducibles (a power of two read off a weight
matrix of the little group, or infinity).

Verdict rule: a unimodular group never admits an admissible vector; a
nonunimodular one does exactly when the dilation part meets the center
trivially.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from .adapted import AdaptableBasis
from .algebra import LieAlgebraSpec, trace_ad
from .functionals import Functional
from .gaussian import GaussianRational, ZERO
from .linalg import Subspace, kernel, rank
from .sections import (SectionOracle, StabilizerData, UnsupportedLayerError,
                       sample_sigma_circ)
from .strata import LayerDescriptor, jump_data

INFINITE = math.inf


class IsotropyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# center
# ---------------------------------------------------------------------------

@dataclass
class CenterData:
    z_g: Subspace
    z_cap_h: Subspace

    @property
    def dim_z_cap_h(self) -> int:
        return self.z_cap_h.dim

    def as_dict(self, spec: LieAlgebraSpec):
        def combos(sub: Subspace):
            out = []
            for row in sub.rows:
                out.append({spec.names[m]: str(row[m].re)
                            for m in range(spec.dim) if not row[m].is_zero()})
            return out
        return {
            "dim_z_g": self.z_g.dim,
            "dim_z_cap_h": self.dim_z_cap_h,
            "z_g_basis": combos(self.z_g),
            "z_cap_h_basis": combos(self.z_cap_h),
        }


def center_data(spec: LieAlgebraSpec) -> CenterData:
    """z(g) as the joint kernel of w -> [w, basis], intersected with h."""
    dim = spec.dim
    rows = []
    for m in range(dim):
        for out_coord in range(dim):
            row = []
            for p in range(dim):
                img = spec.bracket_basis(p, m)
                row.append(img[out_coord])
            rows.append(row)
    z_rows = kernel(rows, dim)
    z_g = Subspace(z_rows, dim)
    h_rows = [[GaussianRational(1) if m == spec.n_dim + t else ZERO
               for m in range(dim)] for t in range(spec.h_dim)]
    z_cap_h = z_g.intersect(Subspace(h_rows, dim))
    return CenterData(z_g=z_g, z_cap_h=z_cap_h)


# ---------------------------------------------------------------------------
# unimodularity
# ---------------------------------------------------------------------------

def unimodularity(spec: LieAlgebraSpec) -> Tuple[bool, Dict[str, Fraction]]:
    """tr(ad w) per basis element; the group is unimodular iff all vanish."""
    table = {name: trace_ad(spec, name) for name in spec.names}
    return all(v == 0 for v in table.values()), table


# ---------------------------------------------------------------------------
# polarization data at a section point
# ---------------------------------------------------------------------------

@dataclass
class PolarizationData:
    p: Subspace
    dim_d: int            # real dimension of n cap p
    dim_e: int            # real dimension of (p + conj p) cap n
    dim_x: int
    x_indices: Tuple[int, ...]   # adapted indices carrying the domain coordinates
    real: bool
    positive: bool

    def as_dict(self):
        return {
            "dim_p_complex": self.p.dim,
            "dim_d": self.dim_d,
            "dim_e": self.dim_e,
            "dim_x": self.dim_x,
            "x_indices": list(self.x_indices),
            "real": self.real,
            "positive": self.positive,
        }


def _conj_subspace(sub: Subspace, dim: int) -> Subspace:
    return Subspace([[x.conjugate() for x in r] for r in sub.rows], dim)


def _pivots_in_adapted(sub: Subspace, basis: AdaptableBasis) -> Tuple[int, ...]:
    """Flag positions where the subspace grows, i.e. rightmost-pivot set
    of the rows rewritten in adapted coordinates (1-based)."""
    if sub.dim == 0:
        return ()
    # adapted coordinates: solve row = sum_j c_j Z_j
    cols = [[basis.vectors[j][m] for j in range(basis.dim)]
            for m in range(basis.dim)]
    coords = []
    from .linalg import solve
    for row in sub.rows:
        c = solve(cols, list(row))
        if c is None:
            raise ValueError("vector outside the basis span")
        coords.append(c)
    # eliminate from the right: pivot = largest index with nonzero coord
    pivots = []
    rows = [list(r) for r in coords]
    for _ in range(len(rows)):
        best, best_piv = None, -1
        for idx, r in enumerate(rows):
            piv = max((j for j in range(basis.dim) if not r[j].is_zero()),
                      default=-1)
            if piv > best_piv:
                best, best_piv = idx, piv
        if best is None or best_piv < 0:
            break
        lead = rows.pop(best)
        pivots.append(best_piv + 1)
        for r in rows:
            if not r[best_piv].is_zero():
                f = r[best_piv] / lead[best_piv]
                for j in range(basis.dim):
                    r[j] = r[j] - f * lead[j]
    return tuple(sorted(pivots))


def polarization_data(lam: Functional, basis: AdaptableBasis) -> PolarizationData:
    """Maximal isotropic subalgebra from the flag recursion at lam, with the
    dimension data of the representation domain: dim X = dim(n/e) + dim(e/d)/2.

    When the isotropic subalgebra is not positive at lam, its conjugate is
    (same dimension data); the conjugate is reported in that case.
    """
    spec = basis.spec
    jd = jump_data(lam, basis, "n")
    p = jd.h_flag[-1]
    dim = basis.dim

    # isotropy, exact
    for a in p.rows:
        for b in p.rows:
            if not lam.pair(list(a), list(b)).is_zero():
                raise IsotropyError("flag recursion output is not isotropic")
    pbar = _conj_subspace(p, dim)
    # p + pbar closed under bracket
    psum = p.add(pbar)
    for a in psum.rows:
        for b in psum.rows:
            if not psum.contains_vector(spec.bracket(list(a), list(b))):
                raise IsotropyError("p + conj(p) is not a subalgebra")

    pint = p.intersect(pbar)
    dim_d = pint.dim
    dim_e = psum.dim
    if (dim_e - dim_d) % 2:
        raise IsotropyError("e/d has odd dimension")
    dim_x = (basis.n - dim_e) + (dim_e - dim_d) // 2
    is_real = p == pbar

    # positivity: i*lam[w, conj w] >= 0 on a basis of p; else swap to conj(p)
    def positive(sub: Subspace) -> bool:
        for w in sub.rows:
            val = lam.pair(list(w), [x.conjugate() for x in w])
            v = GaussianRational(0, 1) * val
            if not v.is_real() or v.re < 0:
                return False
        return True

    pos = positive(p)
    if not pos and not is_real:
        if positive(pbar):
            p, pbar = pbar, p
            pos = True

    # domain coordinate indices: complement of e in the flag, plus one index
    # per conjugate pair from the e/d gap
    e_pivots = set(_pivots_in_adapted(psum, basis))
    d_pivots = set(_pivots_in_adapted(pint, basis))
    if not d_pivots <= e_pivots:
        raise IsotropyError("nested pivot sets expected")
    outside = [j for j in range(1, basis.n + 1) if j not in e_pivots]
    gap = sorted(e_pivots - d_pivots)
    half = []
    used = set()
    for j in gap:
        if j in used:
            continue
        s = basis.sigma[j]
        if s == j or s not in gap:
            raise IsotropyError("e/d gap does not split into conjugate pairs")
        used.update((j, s))
        half.append(min(j, s))
    x_indices = tuple(sorted(outside + half))
    if len(x_indices) != dim_x:
        raise IsotropyError("domain coordinate count mismatch")
    return PolarizationData(p=p, dim_d=dim_d, dim_e=dim_e, dim_x=dim_x,
                            x_indices=x_indices, real=is_real, positive=pos)


# ---------------------------------------------------------------------------
# multiplicity
# ---------------------------------------------------------------------------

def multiplicity(basis: AdaptableBasis, stab: StabilizerData,
                 pol: PolarizationData):
    """2^(dim X) when the little group acts on the domain with real weights
    of full rank; infinity otherwise (in particular for a trivial little
    group).
    """
    if stab.k_dim == 0:
        return INFINITE
    if pol.dim_x == 0:
        return 1
    k_rows = [[GaussianRational(x.re) for x in row] for row in stab.k_subalg.rows]
    weight_rows = []
    for j in pol.x_indices:
        w = basis.weights[j - 1]
        vals = []
        for krow in k_rows:
            val = sum((krow[t] * w[t] for t in range(len(krow))), ZERO)
            if not val.is_real():
                return INFINITE
            vals.append(GaussianRational(val.re))
        weight_rows.append(vals)
    if rank(weight_rows) == pol.dim_x:
        return 2 ** pol.dim_x
    return INFINITE


def multiplicity_at_samples(basis: AdaptableBasis, stab: StabilizerData,
                            sigma_oracle: SectionOracle, seed: int = 7,
                            samples: int = 20):
    """Multiplicity evaluated at several section points; asserts constancy."""
    rng = random.Random(seed)
    values = set()
    result = None
    for _ in range(samples):
        lam = sample_sigma_circ(sigma_oracle, rng)
        pol = polarization_data(lam, basis)
        m = multiplicity(basis, stab, pol)
        values.add(m)
        result = m
    if len(values) != 1:
        raise IsotropyError(f"multiplicity not constant across samples: {values}")
    return result


# ---------------------------------------------------------------------------
# verdict
# ---------------------------------------------------------------------------

VERDICT_ADMISSIBLE = "ADMISSIBLE"
VERDICT_UNIMODULAR = "NOT_ADMISSIBLE_UNIMODULAR"
VERDICT_CENTER = "NOT_ADMISSIBLE_CENTER_MEETS_H"

REASONS = {
    VERDICT_ADMISSIBLE: (
        "the group is nonunimodular and the dilation part meets the center "
        "only at the identity, so the quasiregular representation embeds in "
        "the left regular representation and inherits admissibility"),
    VERDICT_UNIMODULAR: (
        "the group is unimodular, so no subrepresentation of the left "
        "regular representation admits an admissible vector (the multiplied "
        "Plancherel mass of the spectrum is infinite)"),
    VERDICT_CENTER: (
        "the dilation part meets the center nontrivially, so the "
        "quasiregular and left regular representations live on mutually "
        "singular spectral measures and containment fails"),
}


@dataclass
class AdmissibilityReport:
    verdict: str
    unimodular: bool
    trace_table: Dict[str, Fraction]
    dim_z_cap_h: int
    k_dim: int
    multiplicity: object              # int or math.inf or None
    dim_x: Optional[int]
    spectrum: Dict
    plancherel: Dict
    divergence_note: Optional[str] = None
    reason: str = ""

    def as_dict(self):
        mult = ("infinite" if self.multiplicity == INFINITE
                else self.multiplicity)
        out = {
            "verdict": self.verdict,
            "reason": self.reason,
            "unimodular": self.unimodular,
            "trace_table": {k: str(v) for k, v in self.trace_table.items()},
            "dim_z_cap_h": self.dim_z_cap_h,
            "k_dim": self.k_dim,
            "multiplicity": mult,
            "dim_x": self.dim_x,
            "spectrum": self.spectrum,
            "plancherel": self.plancherel,
        }
        if self.divergence_note:
            out["divergence_note"] = self.divergence_note
        return out


def verdict_from_parts(unimodular: bool, dim_z_cap_h: int) -> str:
    if unimodular:
        return VERDICT_UNIMODULAR
    return VERDICT_ADMISSIBLE if dim_z_cap_h == 0 else VERDICT_CENTER


# ---------------------------------------------------------------------------
# disintegration ratio check (Monte Carlo)
# ---------------------------------------------------------------------------

@dataclass
class RatioReport:
    lhs: Tuple[float, float]
    rhs: Tuple[float, float]
    ratios: Tuple[float, float]
    ratio_of_ratios: float
    samples: int
    seed: int

    def as_dict(self):
        return {
            "lhs": list(self.lhs), "rhs": list(self.rhs),
            "ratios": list(self.ratios),
            "ratio_of_ratios": self.ratio_of_ratios,
            "samples": self.samples, "seed": self.seed,
        }


class MCVarianceError(RuntimeError):
    pass


def disintegration_check(spec: LieAlgebraSpec, basis: AdaptableBasis,
                         n_layer: LayerDescriptor, stab: StabilizerData,
                         test_functions=None, mc_samples: int = 10 ** 6,
                         seed: int = 1234) -> RatioReport:
    """Monte-Carlo comparison of the two sides of the orbit-wise
    disintegration of the Plancherel density against dilation orbits.

    Both sides are estimated for two bump functions; the two left/right
    ratios must agree (the identity holds up to one global constant).
    Supported for layers whose dense section part has all-real free
    coordinates and a finite dilation-orbit section.
    """
    nu = stab.nu
    e_idx = list(n_layer.e_set)
    if set(stab.phi) != set(nu):
        raise UnsupportedLayerError(
            "finite section needed: every free coordinate must carry a "
            "modulus constraint")
    if any(basis.sigma[j] != j for j in nu):
        raise UnsupportedLayerError("free coordinates must be real")

    rng = np.random.default_rng(seed)
    n_nu = len(nu)
    r = stab.r

    if test_functions is None:
        def f1(x):  # x: array (m, n_nu)
            return np.exp(-((x - 1.3) ** 2).sum(axis=1) / 0.8)

        def f2(x):
            return np.exp(-((x + 0.7) ** 2).sum(axis=1) / 0.5) + \
                0.5 * np.exp(-((x - 2.1) ** 2).sum(axis=1) / 1.1)
        test_functions = (f1, f2)
    f1, f2 = test_functions

    # |Pf| on the section variety: the skew matrix entry over (Z_a, Z_b) is
    # the adapted expansion of [Z_a, Z_b] paired with the free coordinates
    # (all other adapted coordinates vanish on the variety)
    from .linalg import solve as _solve
    adapted_cols = [[basis.vectors[j][m] for j in range(basis.dim)]
                    for m in range(basis.dim)]
    lin_forms = {}
    for a, ja in enumerate(e_idx):
        for b, jb in enumerate(e_idx):
            if a >= b:
                continue
            bracket = spec.bracket(list(basis.vector(ja)), list(basis.vector(jb)))
            coords_exact = _solve(adapted_cols, list(bracket))
            if coords_exact is None:
                raise RuntimeError("bracket outside basis span")
            lin_forms[(a, b)] = np.array(
                [complex(coords_exact[j - 1]) for j in nu])

    def skew_entries(coords: np.ndarray) -> np.ndarray:
        m = coords.shape[0]
        mat = np.zeros((m, len(e_idx), len(e_idx)), dtype=complex)
        for (a, b), form in lin_forms.items():
            vals = coords @ form
            mat[:, a, b] = vals
            mat[:, b, a] = -vals
        return mat

    def pf_abs(coords: np.ndarray) -> np.ndarray:
        mats = skew_entries(coords)
        dets = np.linalg.det(mats)
        return np.sqrt(np.abs(dets))

    # left side: integral over the free coordinates of F * |Pf|
    box = 6.0
    pts = rng.uniform(-box, box, size=(mc_samples, n_nu))
    vol = (2 * box) ** n_nu
    weights = pf_abs(pts)
    lhs1 = float(np.mean(f1(pts) * weights) * vol)
    lhs2 = float(np.mean(f2(pts) * weights) * vol)

    # right side: sum over the finite section, integral over the dilation
    # parameters with the modular weight
    signs = [np.array(s) for s in _sign_patterns(n_nu)]
    traces = []
    re_weights = np.zeros((r, n_nu))
    for t, a in enumerate(stab.a_basis):
        avec = [Fraction(0)] * basis.dim
        for u, c in enumerate(a):
            avec[spec.n_dim + u] = c
        traces.append(float(trace_ad(spec, [GaussianRational(c) for c in avec])))
        for pos, j in enumerate(nu):
            w = basis.weights[j - 1]
            re_weights[t, pos] = float(sum(Fraction(w[u].re) * a[u]
                                           for u in range(spec.h_dim)))
    tbox = 8.0
    ts = rng.uniform(-tbox, tbox, size=(mc_samples, r))
    tvol = (2 * tbox) ** r
    modular = np.exp(-(ts @ np.array(traces)))
    rhs1 = rhs2 = 0.0
    for s in signs:
        # flowed coordinates: x_j(t) = e^{-sum_t t_u Re w_j(A_u)} * s_j
        scale = np.exp(-(ts @ re_weights))
        flowed = scale * s
        pf_sigma = float(pf_abs(s.reshape(1, -1))[0])
        rhs1 += float(np.mean(f1(flowed) * modular) * tvol) * pf_sigma
        rhs2 += float(np.mean(f2(flowed) * modular) * tvol) * pf_sigma

    for name, val in (("lhs1", lhs1), ("lhs2", lhs2),
                      ("rhs1", rhs1), ("rhs2", rhs2)):
        if not np.isfinite(val) or abs(val) < 1e-12:
            raise MCVarianceError(f"estimate {name} unusable: {val}")
    r1, r2 = lhs1 / rhs1, lhs2 / rhs2
    return RatioReport(lhs=(lhs1, lhs2), rhs=(rhs1, rhs2), ratios=(r1, r2),
                       ratio_of_ratios=r1 / r2, samples=mc_samples, seed=seed)


def _sign_patterns(n: int):
    out = [[]]
    for _ in range(n):
        out = [p + [s] for p in out for s in (1.0, -1.0)]
    return out
