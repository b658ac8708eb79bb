"""Jump indices, layers and section vectors of the coadjoint form.

For a point l of g* and the flag c_1 < c_2 < ... of an adapted basis, the
recursion below walks the flag and records where it escapes the successive
annihilators of the form (X, Y) -> l[X, Y]. The escape positions come in
pairs (i_k, j_k); their union e(l) has even cardinality and is constant on
layers. On a fixed layer, point-dependent vectors V_k, U_k (dual pairs of
the form) and combinations Z_j(l) are produced case by case; they cut out
the orbit cross-sections.

All decisions are exact rank computations over Q(i); the float variant
(tolerance-based ranks) exists for points produced by dilation flows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .adapted import AdaptableBasis
from .functionals import Functional, sample_functional
from .gaussian import GaussianRational, ZERO
from .linalg import Subspace, kernel

GR1 = GaussianRational(1)


class LayerMismatchError(ValueError):
    """A functional is not in the layer a computation assumed (zero pairing)."""


class UnsupportedCaseError(ValueError):
    """Section-vector case outside the supported table."""


class InconsistentSamplingError(ValueError):
    """Random sampling found no stable majority layer."""


class OddDimensionError(ValueError):
    pass


class NotSkewError(ValueError):
    pass


# ---------------------------------------------------------------------------
# the bilinear form and annihilators
# ---------------------------------------------------------------------------

def bilinear_form(l: Functional, s: Subspace, t: Optional[Subspace] = None):
    """Matrix of (X, Y) -> l[X, Y] on the given subspace bases."""
    if t is None:
        t = s
    return [[l.pair(list(a), list(b)) for b in t.rows] for a in s.rows]


def perp(l: Functional, s_rows: Sequence, ambient: Subspace) -> Subspace:
    """{v in ambient : l[s, v] = 0 for all s}, as a subspace of g_C."""
    tol = None if l.exact else 1e-9
    if not s_rows:
        return ambient
    mat = [[l.pair(list(s), list(t)) for t in ambient.rows] for s in s_rows]
    combos = kernel(mat, len(ambient.rows), tol)
    rows = []
    for combo in combos:
        vec = [sum((combo[i] * ambient.rows[i][m] for i in range(len(ambient.rows))),
                   ZERO if l.exact else 0j) for m in range(l.basis.dim)]
        rows.append(vec)
    return Subspace(rows, l.basis.dim, tol)


def radical(l: Functional, ambient: Subspace) -> Subspace:
    return perp(l, ambient.rows, ambient)


# ---------------------------------------------------------------------------
# jump data
# ---------------------------------------------------------------------------

@dataclass
class JumpData:
    i_seq: Tuple[int, ...]
    j_seq: Tuple[int, ...]
    h_flag: List[Subspace]          # h_0 (ambient) down to h_d
    ambient: str

    @property
    def d(self) -> int:
        return len(self.i_seq)

    @property
    def e_set(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.i_seq) | set(self.j_seq)))

    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (self.e_set, self.j_seq)


def _flag_meet_profile(basis: AdaptableBasis, n_amb: int, sub: Subspace,
                       tol) -> List[int]:
    """dims of (span of the first j basis vectors) cap sub, for j = 0..n_amb.

    Uses dim(c_j cap S) = j + dim S - dim(c_j + S) with one incremental
    elimination pass, instead of j separate intersections.
    """
    dim = basis.dim
    # sub.rows are already in RREF: each pivot column is zero elsewhere
    work: List[list] = [list(r) for r in sub.rows]
    pivots: List[int] = []
    for r in work:
        pivots.append(next(c for c in range(dim) if not _is_zero_scalar(r[c], tol)))
    s = len(work)
    out = [0]
    joined = s
    for j in range(1, n_amb + 1):
        v = [x if tol is None else complex(x) for x in basis.vector(j)]
        for r, p in zip(work, pivots):
            if not _is_zero_scalar(v[p], tol):
                f = v[p] / r[p]
                v = [a - f * b for a, b in zip(v, r)]
        piv = next((c for c in range(dim) if not _is_zero_scalar(v[c], tol)), None)
        if piv is not None:
            # keep every pivot column zero in the other rows, so one
            # elimination pass stays sufficient for later vectors
            for idx, r in enumerate(work):
                if not _is_zero_scalar(r[piv], tol):
                    f = r[piv] / v[piv]
                    work[idx] = [a - f * b for a, b in zip(r, v)]
            work.append(v)
            pivots.append(piv)
            joined += 1
        out.append(j + s - joined)
    return out


def _is_zero_scalar(x, tol) -> bool:
    if tol is None:
        return x.is_zero() if isinstance(x, GaussianRational) else x == 0
    return abs(x) <= tol


def jump_data(l: Functional, basis: Optional[AdaptableBasis] = None,
              ambient: str = "g") -> JumpData:
    """Run the flag/annihilator recursion at l.

    ambient 'n' restricts everything to the nilpotent part (giving the
    jump set of the restricted point); 'g' uses the whole algebra.
    """
    if basis is None:
        basis = l.basis
    tol = None if l.exact else 1e-9
    n_amb, amb = basis.ambient(ambient)
    if tol is not None:
        amb = Subspace([[complex(x) for x in r] for r in amb.rows], basis.dim, tol)

    def first_escape(inside: Subspace, outside: Subspace) -> Optional[int]:
        # min j with (c_j cap inside) not contained in outside
        prof_in = _flag_meet_profile(basis, n_amb, inside, tol)
        prof_out = _flag_meet_profile(basis, n_amb, inside.intersect(outside), tol)
        for j in range(1, n_amb + 1):
            if prof_in[j] > prof_out[j]:
                return j
        return None

    i_seq: List[int] = []
    j_seq: List[int] = []
    h_flag: List[Subspace] = [amb]

    # first step: flag escapes the radical; h_1 annihilates a single vector
    rad = radical(l, amb)
    i1 = first_escape(amb, rad)
    if i1 is None:
        return JumpData((), (), h_flag, ambient)
    z_i1 = [basis.vector(i1)] if tol is None else \
        [[complex(x) for x in basis.vector(i1)]]
    h1 = perp(l, z_i1, amb)
    j1 = first_escape(amb, h1)
    if j1 is None:
        raise LayerMismatchError("first jump has no partner")
    i_seq.append(i1)
    j_seq.append(j1)
    h_flag.append(h1)

    flags = [basis.flag(j) for j in range(n_amb + 1)]
    if tol is not None:
        flags = [Subspace([[complex(x) for x in r] for r in fl.rows],
                          basis.dim, tol) for fl in flags]

    while True:
        h_prev = h_flag[-1]
        p = perp(l, h_prev.rows, amb)
        ik = first_escape(h_prev, p)
        if ik is None:
            break
        hk = perp(l, h_prev.intersect(flags[ik]).rows, amb).intersect(h_prev)
        jk = first_escape(h_prev, hk)
        if jk is None:
            raise LayerMismatchError(f"jump {ik} has no partner")
        i_seq.append(ik)
        j_seq.append(jk)
        h_flag.append(hk)

    return JumpData(tuple(i_seq), tuple(j_seq), h_flag, ambient)


# ---------------------------------------------------------------------------
# layer data: conj-stable positions, primes, case sets
# ---------------------------------------------------------------------------

@dataclass
class LayerDescriptor:
    ambient: str
    e_set: Tuple[int, ...]
    i_seq: Tuple[int, ...]
    j_seq: Tuple[int, ...]
    stable_set: Tuple[int, ...]               # conj-stable flag positions, incl 0
    primes: Dict[int, Tuple[int, int]]        # j -> (j', j'')
    case_sets: Dict[int, Tuple[int, ...]]     # 0..5 -> pair indices k (1-based)
    phi: Tuple[int, ...]
    consistency: float = 1.0

    @property
    def d(self) -> int:
        return len(self.i_seq)

    def key(self):
        return (self.e_set, self.j_seq, self.phi)

    def as_dict(self):
        return {
            "ambient": self.ambient,
            "e": list(self.e_set),
            "i": list(self.i_seq),
            "j": list(self.j_seq),
            "stable_positions": list(self.stable_set),
            "primes": {str(j): list(v) for j, v in sorted(self.primes.items())},
            "case_sets": {f"K{k}": list(v) for k, v in self.case_sets.items()},
            "phi": list(self.phi),
            "sampling_agreement": self.consistency,
        }


def _layer_data(basis: AdaptableBasis, jd: JumpData, top: int):
    stable = [j for j in basis.self_conjugate_steps() if j <= top]
    stable_set = set(stable)
    primes = {}
    for j in range(1, top + 1):
        lower = max(p for p in stable if p < j) if any(p < j for p in stable) else 0
        upper = min((p for p in stable if p >= j), default=top)
        primes[j] = (lower, upper)
    e_set = set(jd.e_set)
    i_set = set(jd.i_seq)
    j_set = set(jd.j_seq)
    cases: Dict[int, List[int]] = {c: [] for c in range(6)}
    for k, ik in enumerate(jd.i_seq, start=1):
        lo, hi = primes[ik]
        if hi - lo == 1:
            cases[0].append(k)
        if ik not in stable_set and ik + 1 not in e_set:
            cases[1].append(k)
        if ik - 1 in j_set and ik - 1 not in stable_set:
            cases[2].append(k)
        if ik not in stable_set and ik + 1 in j_set:
            cases[3].append(k)
        if ik not in stable_set and ik + 1 in i_set:
            cases[4].append(k)
        if ik - 1 in i_set and ik - 1 not in stable_set:
            cases[5].append(k)
    return tuple(stable), primes, {c: tuple(v) for c, v in cases.items()}


# ---------------------------------------------------------------------------
# section vectors
# ---------------------------------------------------------------------------

@dataclass
class SectionVectors:
    jd: JumpData
    v_list: List[list]                 # V_k, dual pair first members
    u_list: List[list]                 # U_k, dual pair second members
    z_at: Dict[int, list]              # j in e -> Z_j(l)
    b_at: Dict[int, object]            # i_k in phi -> b value
    pairings: List[object]             # l[V_k, U_k]

    def rho(self, vec, l: Functional, upto: Optional[int] = None):
        """Project vec against the dual pairs V_m, U_m for m <= upto."""
        k = len(self.v_list) if upto is None else upto
        out = list(vec)
        for m in range(k):
            vm, um = self.v_list[m], self.u_list[m]
            c_u = l.pair(out, um)
            c_v = l.pair(out, vm)
            denom = self.pairings[m]
            out = [o - (c_u / denom) * v + (c_v / denom) * u
                   for o, v, u in zip(out, vm, um)]
        return out


def _re_vec(vec):
    return [GaussianRational(x.re) for x in vec]


def _im_vec(vec):
    return [GaussianRational(x.im) for x in vec]


def _scale(vec, c):
    return [c * x for x in vec]


def _add(u, v):
    return [a + b for a, b in zip(u, v)]


def _as_numeric(vec, exact: bool):
    if exact:
        return list(vec)
    return [complex(x) for x in vec]


def _nonzero(x, exact: bool) -> bool:
    if exact:
        return not x.is_zero() if isinstance(x, GaussianRational) else x != 0
    return abs(x) > 1e-9


def section_vectors(l: Functional, basis: Optional[AdaptableBasis] = None,
                    jd: Optional[JumpData] = None,
                    ambient: str = "g") -> SectionVectors:
    """Dual pairs V_k, U_k and the combinations Z_j(l), case by case.

    Raises LayerMismatchError when a pairing l[V_k, U_k] vanishes (the point
    is not in the layer the case table assumed) and UnsupportedCaseError for
    pair patterns outside the table.
    """
    if basis is None:
        basis = l.basis
    if jd is None:
        jd = jump_data(l, basis, ambient)
    n_amb, _ = basis.ambient(ambient)
    exact = l.exact
    _, _, cases = _layer_data(basis, jd, n_amb)
    in_case = {c: set(v) for c, v in cases.items()}

    sv = SectionVectors(jd=jd, v_list=[], u_list=[], z_at={}, b_at={},
                        pairings=[])
    pending_z: Dict[int, list] = {}

    for k in range(1, jd.d + 1):
        ik, jk = jd.i_seq[k - 1], jd.j_seq[k - 1]
        z_ik_basis = _as_numeric(basis.vector(ik), exact)
        re_i, im_i = _re_vec(basis.vector(ik)), _im_vec(basis.vector(ik))
        re_i, im_i = _as_numeric(re_i, exact), _as_numeric(im_i, exact)

        if k in in_case[5] and ik in pending_z:
            z_ik = pending_z.pop(ik)
        elif k in in_case[0]:
            z_ik = re_i
        elif k in in_case[1]:
            rho_jk = sv.rho(_as_numeric(basis.vector(jk), exact), l)
            b1 = l.value(basis.spec.bracket(rho_jk, re_i))
            b2 = l.value(basis.spec.bracket(rho_jk, im_i))
            z_ik = _add(_scale(re_i, b1), _scale(im_i, b2))
        elif k in in_case[2]:
            # the partner pair index m with j_m immediately below i_k
            m = next((m for m in range(1, min(k, len(sv.v_list) + 1))
                      if jd.j_seq[m - 1] == ik - 1), None)
            if m is None:
                raise UnsupportedCaseError(
                    f"pair {k}: no computed partner below index {ik}")
            a1 = l.pair(_as_numeric(_re_vec(basis.vector(jd.j_seq[m - 1])), exact),
                        sv.v_list[m - 1])
            a2 = l.pair(_as_numeric(_im_vec(basis.vector(jd.j_seq[m - 1])), exact),
                        sv.v_list[m - 1])
            z_ik = _add(_scale(re_i, -a2), _scale(im_i, -a1))
        elif k in in_case[3]:
            z_ik = im_i
        elif k in in_case[4]:
            z_ik = re_i
        else:
            raise UnsupportedCaseError(f"pair {k} falls in no supported case")

        vk = sv.rho(z_ik, l)
        re_j = _as_numeric(_re_vec(basis.vector(jk)), exact)
        im_j = _as_numeric(_im_vec(basis.vector(jk)), exact)
        a1 = l.pair(re_j, vk)
        a2 = l.pair(im_j, vk)
        z_jk = _add(_scale(re_j, a1), _scale(im_j, a2))
        uk = sv.rho(z_jk, l)
        pairing = l.pair(vk, uk)
        if not _nonzero(pairing, exact):
            raise LayerMismatchError(f"pairing of dual pair {k} vanishes")

        sv.v_list.append(vk)
        sv.u_list.append(uk)
        sv.pairings.append(pairing)
        sv.z_at[ik] = z_ik
        sv.z_at[jk] = z_jk

        if (k in in_case[4] and k + 1 <= jd.d and jd.i_seq[k] == ik + 1
                and basis.sigma[jd.j_seq[k]] == jk):
            num = l.value(basis.spec.bracket(uk, im_i))
            den = l.value(basis.spec.bracket(uk, re_i))
            if not _nonzero(den, exact):
                raise UnsupportedCaseError(
                    f"pair {k}: degenerate adjacent-pair combination")
            nxt = jd.i_seq[k]
            re_n = _as_numeric(_re_vec(basis.vector(nxt)), exact)
            im_n = _as_numeric(_im_vec(basis.vector(nxt)), exact)
            z_next = _add(_scale(re_n, -(num / den)),
                          _scale(im_n, -GR1 if exact else -1))
            pending_z[nxt] = z_next

    # b values on pair indices whose weight pairs with U_k
    for k in range(1, jd.d + 1):
        ik = jd.i_seq[k - 1]
        if ik > basis.n:
            continue
        gamma = basis.weight_on(ik, sv.u_list[k - 1])
        if not _nonzero(gamma, exact):
            continue
        denom = l.pair(_as_numeric(basis.vector(ik), exact), sv.u_list[k - 1])
        if not _nonzero(denom, exact):
            raise LayerMismatchError(f"b value at index {ik} is singular")
        sv.b_at[ik] = gamma / denom
    return sv


def layer_descriptor(l: Functional, basis: Optional[AdaptableBasis] = None,
                     ambient: str = "g") -> LayerDescriptor:
    """Full layer data at l: jumps, conj-stable positions, case sets, phi."""
    if basis is None:
        basis = l.basis
    jd = jump_data(l, basis, ambient)
    n_amb, _ = basis.ambient(ambient)
    stable, primes, cases = _layer_data(basis, jd, n_amb)
    sv = section_vectors(l, basis, jd, ambient)
    phi = tuple(sorted(sv.b_at.keys()))
    return LayerDescriptor(ambient=ambient, e_set=jd.e_set, i_seq=jd.i_seq,
                           j_seq=jd.j_seq, stable_set=stable, primes=primes,
                           case_sets=cases, phi=phi)


# ---------------------------------------------------------------------------
# generic layer by seeded sampling
# ---------------------------------------------------------------------------

def generic_layer(basis: AdaptableBasis, ambient: str = "g",
                  seed: int = 42, trials: int = 64,
                  bound: int = 9) -> LayerDescriptor:
    """Layer of a Zariski-dense set, found by exact evaluation at random
    integer points. The winner has maximal card(e); ties break toward the
    lexicographically smallest (e, j). Raises InconsistentSamplingError
    when under half of the samples agree with the winner.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    support = "n" if ambient == "n" else "g"
    outcomes: Dict[tuple, Tuple[int, LayerDescriptor]] = {}
    for _ in range(trials):
        f = sample_functional(basis, rng, bound=bound, support=support)
        if f.is_zero():
            continue
        try:
            desc = layer_descriptor(f, basis, ambient)
        except (LayerMismatchError, ZeroDivisionError):
            continue
        key = desc.key()
        count, _ = outcomes.get(key, (0, desc))
        outcomes[key] = (count + 1, desc)
    if not outcomes:
        raise InconsistentSamplingError("no sample produced a usable layer")
    best_key = min(outcomes, key=lambda k: (-len(k[0]), k[0], k[1]))
    count, desc = outcomes[best_key]
    agreement = count / trials
    if agreement <= 0.5:
        raise InconsistentSamplingError(
            f"winning layer holds only {count}/{trials} samples; raise the bound")
    desc.consistency = agreement
    return desc


# ---------------------------------------------------------------------------
# Pfaffian
# ---------------------------------------------------------------------------

def pfaffian(mat: Sequence[Sequence[GaussianRational]]) -> GaussianRational:
    """Exact Pfaffian of a skew matrix by first-row expansion."""
    n = len(mat)
    if n % 2:
        raise OddDimensionError(f"Pfaffian needs even dimension, got {n}")
    for i in range(n):
        if len(mat[i]) != n:
            raise NotSkewError("matrix is not square")
        for j in range(i, n):
            a = GaussianRational.coerce(mat[i][j]) if not isinstance(mat[i][j], GaussianRational) else mat[i][j]
            b = GaussianRational.coerce(mat[j][i]) if not isinstance(mat[j][i], GaussianRational) else mat[j][i]
            if a != -b:
                raise NotSkewError(f"entries ({i},{j}) and ({j},{i}) are not skew")

    def pf(indices: Tuple[int, ...]) -> GaussianRational:
        if not indices:
            return GR1
        i0 = indices[0]
        rest = indices[1:]
        total = ZERO
        sign = GR1
        for pos, j in enumerate(rest):
            entry = mat[i0][j]
            if not (entry.is_zero() if isinstance(entry, GaussianRational) else entry == 0):
                sub = tuple(x for x in rest if x != j)
                total = total + sign * entry * pf(sub)
            sign = -sign
        return total

    return pf(tuple(range(n)))


def skew_matrix(l: Functional, indices: Sequence[int]) -> List[List[GaussianRational]]:
    """The matrix [ l[Z_i, Z_j] ] over the given adapted indices (1-based)."""
    vecs = [list(l.basis.vector(j)) for j in indices]
    return [[l.pair(a, b) for b in vecs] for a in vecs]
