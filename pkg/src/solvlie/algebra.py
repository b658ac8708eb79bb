"""Lie algebra structure data for g = n x| h, with validation.

The input is a finite table of structure constants over an ordered real
basis: nilpotent part labels first, then the abelian dilation part. All
coefficients are exact rationals; bracket values always live in n.

Spec file format (JSON):

    {
      "name": "...",
      "n_basis": ["Z", "Y", "X"],
      "h_basis": ["A", "B"],
      "brackets": [
        {"x": "X", "y": "Y", "value": [{"c": "1", "b": "Z"}]},
        {"x": "A", "y": "X", "value": [{"c": "1/2", "b": "X"}]}
      ],
      "adaptable_hint": [
        {"label": "Z1", "value": [{"c": "1", "b": "Z"}]}
      ]
    }

Rational coefficients are strings "p/q"; hint coefficients may be Gaussian
rationals "p/q+r/s i" (ASCII minus). Omitted brackets are zero and the
antisymmetric completion is automatic.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gaussian import GaussianRational, ZERO, parse_gaussian
from .linalg import Subspace, kernel, rref

Vector = Tuple[GaussianRational, ...]


class SpecFormatError(ValueError):
    """Raised when a spec file does not conform to the input format."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class HypothesisViolation(ValueError):
    """The algebra falls outside the standing hypotheses of the pipeline."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def _gvec(coords) -> Vector:
    return tuple(GaussianRational.coerce(c) if not isinstance(c, GaussianRational)
                 else c for c in coords)


class LieAlgebraSpec:
    """Structure constants of g = n x| h over a named real basis."""

    def __init__(self, name: str, n_names: Sequence[str], h_names: Sequence[str],
                 brackets: Dict[Tuple[str, str], Dict[str, Fraction]],
                 adaptable_hint: Optional[List[Vector]] = None):
        self.name = name
        self.n_names = tuple(n_names)
        self.h_names = tuple(h_names)
        names = self.n_names + self.h_names
        if len(set(names)) != len(names):
            raise SpecFormatError("basis labels are not unique")
        self.names = names
        self._index = {lab: i for i, lab in enumerate(names)}
        self.adaptable_hint = adaptable_hint
        self.antisymmetry_conflicts: List[Tuple[str, str]] = []
        self.h_bracket_entries: List[Tuple[str, str]] = []

        # canonical table: key (i, j) with i < j, value = coord tuple over n
        self._table: Dict[Tuple[int, int], Vector] = {}
        self._bvec_cache: Dict[Tuple[int, int], Vector] = {}
        self._bsparse_cache: Dict[Tuple[int, int], tuple] = {}
        ndim = len(self.n_names)
        for (x, y), combo in brackets.items():
            for lab in (x, y):
                if lab not in self._index:
                    raise SpecFormatError(f"unknown basis label {lab!r}")
            coords = [Fraction(0)] * ndim
            for blab, c in combo.items():
                if blab not in self._index or self._index[blab] >= ndim:
                    raise SpecFormatError(
                        f"bracket value label {blab!r} is not in the nilpotent basis")
                coords[self._index[blab]] += c
            if all(c == 0 for c in coords):
                continue
            i, j = self._index[x], self._index[y]
            if i >= ndim and j >= ndim:
                self.h_bracket_entries.append((x, y))
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if i == j:
                self.antisymmetry_conflicts.append((x, y))
                continue
            coords = tuple(Fraction(sign) * c for c in coords)
            if (i, j) in self._table:
                if any(a != b for a, b in zip(self._table[(i, j)], coords)):
                    self.antisymmetry_conflicts.append((x, y))
                continue
            self._table[(i, j)] = tuple(coords)

    # -- dimensions -----------------------------------------------------

    @property
    def n_dim(self) -> int:
        return len(self.n_names)

    @property
    def h_dim(self) -> int:
        return len(self.h_names)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, label: str) -> int:
        return self._index[label]

    # -- brackets --------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> Vector:
        """[e_i, e_j] as a coordinate vector over the full basis."""
        cached = self._bvec_cache.get((i, j))
        if cached is not None:
            return cached
        out = [ZERO] * self.dim
        for m, c in self.bracket_sparse(i, j):
            out[m] = c
        out = tuple(out)
        self._bvec_cache[(i, j)] = out
        return out

    def bracket_sparse(self, i: int, j: int):
        """[e_i, e_j] as a tuple of (coordinate index, coefficient)."""
        cached = self._bsparse_cache.get((i, j))
        if cached is not None:
            return cached
        sign = 1
        a, b = i, j
        if a > b:
            a, b, sign = b, a, -1
        entry = self._table.get((a, b)) if a != b else None
        if entry is None:
            out = ()
        else:
            out = tuple((m, GaussianRational(sign * c))
                        for m, c in enumerate(entry) if c != 0)
        self._bsparse_cache[(i, j)] = out
        return out

    def bracket(self, u: Sequence, v: Sequence) -> list:
        """Bilinear extension of the bracket to coordinate vectors.

        Works for GaussianRational coordinates (exact) and complex (float).
        """
        exact = isinstance(u[0], GaussianRational) and isinstance(v[0], GaussianRational)
        zero = ZERO if exact else 0j
        out = [zero] * self.dim
        for i, ui in enumerate(u):
            if _iszero(ui):
                continue
            for j, vj in enumerate(v):
                if _iszero(vj) or i == j:
                    continue
                sparse = self.bracket_sparse(i, j)
                if not sparse:
                    continue
                c = ui * vj
                for m, bm in sparse:
                    out[m] = out[m] + c * bm if exact else out[m] + c * complex(bm)
        return out

    def basis_vector(self, label_or_index) -> Vector:
        i = label_or_index if isinstance(label_or_index, int) else self._index[label_or_index]
        return tuple(GaussianRational(1) if m == i else ZERO for m in range(self.dim))

    def vector_from_labels(self, combo: Dict[str, Fraction]) -> Vector:
        out = [ZERO] * self.dim
        for lab, c in combo.items():
            out[self._index[lab]] = out[self._index[lab]] + GaussianRational(c)
        return tuple(out)

    def n_is_commutative(self) -> bool:
        nd = self.n_dim
        return all(not (i < nd and j < nd) for (i, j) in self._table)


def _iszero(x) -> bool:
    return x.is_zero() if isinstance(x, GaussianRational) else x == 0


# ---------------------------------------------------------------------------
# ad matrices
# ---------------------------------------------------------------------------

def ad_matrix(spec: LieAlgebraSpec, w: Sequence) -> List[List[Fraction]]:
    """Matrix of ad(w) on the ordered real basis; columns are images.

    ``w`` is a real rational coordinate vector (or a label / label dict).
    """
    if isinstance(w, str):
        w = spec.basis_vector(w)
    elif isinstance(w, dict):
        w = spec.vector_from_labels(w)
    cols = []
    for m in range(spec.dim):
        img = spec.bracket(w, spec.basis_vector(m))
        cols.append(img)
    mat = [[Fraction(0)] * spec.dim for _ in range(spec.dim)]
    for c, img in enumerate(cols):
        for r, val in enumerate(img):
            if not val.is_zero():
                if not val.is_real():
                    raise ValueError("ad matrix of a real element must be real")
                mat[r][c] = val.re
    return mat


def trace_ad(spec: LieAlgebraSpec, w) -> Fraction:
    mat = ad_matrix(spec, w)
    return sum((mat[i][i] for i in range(spec.dim)), Fraction(0))


# ---------------------------------------------------------------------------
# joint weight decomposition of the h-action on n_C
# ---------------------------------------------------------------------------

@dataclass
class WeightSpace:
    weights: Tuple[GaussianRational, ...]  # value on each h basis element
    rows: List[List[GaussianRational]]     # basis of the space, coords over n

    @property
    def dim(self) -> int:
        return len(self.rows)


class DiagonalizationError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _rational_candidates(value: float) -> List[Fraction]:
    out = []
    for bound in (12, 1000, 10 ** 6):
        f = Fraction(value).limit_denominator(bound)
        if f not in out:
            out.append(f)
    return out


def _eigen_candidates(mat_float: np.ndarray) -> List[GaussianRational]:
    vals = np.linalg.eigvals(mat_float)
    cands: List[GaussianRational] = []
    for v in vals:
        for fr in _rational_candidates(float(v.real)):
            for fi in _rational_candidates(float(v.imag)):
                g = GaussianRational(fr, fi)
                if g not in cands:
                    cands.append(g)
    return cands


def weight_decomposition(spec: LieAlgebraSpec) -> List[WeightSpace]:
    """Split n_C into joint eigenspaces of the commuting operators ad(A).

    Eigenvalue candidates are read off numerically, then every acceptance
    decision (membership, dimension counts) is made in exact arithmetic.
    Raises DiagonalizationError when no Gaussian-rational eigenbasis exists.
    """
    nd = spec.n_dim
    spaces = [WeightSpace(weights=(), rows=[[GaussianRational(1) if i == j else ZERO
                                             for j in range(nd)] for i in range(nd)])]
    for t in range(spec.h_dim):
        a_vec = spec.basis_vector(spec.n_dim + t)
        # matrix of ad(A_t) on n (columns = images), exact
        cols = [spec.bracket(a_vec, spec.basis_vector(m))[:nd] for m in range(nd)]
        mat = [[cols[c][r] for c in range(nd)] for r in range(nd)]
        mat_float = np.array([[complex(x) for x in row] for row in mat])
        new_spaces: List[WeightSpace] = []
        for sp in spaces:
            if sp.dim == 0:
                continue
            # restriction of ad(A_t) to sp: sp is invariant since the ad(A)'s commute
            images = []
            for row in sp.rows:
                img = [sum((mat[r][c] * row[c] for c in range(nd)), ZERO)
                       for r in range(nd)]
                images.append(img)
            sub_float = np.array([[complex(x) for x in r] for r in sp.rows])
            img_float = np.array([[complex(x) for x in r] for r in images])
            # coefficients of images in the row basis, to get the restricted matrix
            coef, *_ = np.linalg.lstsq(sub_float.T, img_float.T, rcond=None)
            restricted = coef.T
            found_dim = 0
            for cand in _eigen_candidates(restricted):
                shifted = [[images[i][c] - cand * sp.rows[i][c] for c in range(nd)]
                           for i in range(len(sp.rows))]
                # kernel of (ad A - cand) inside sp, in sp-coordinates
                coeff_rows = [[shifted[i][c] for i in range(len(sp.rows))]
                              for c in range(nd)]
                null = kernel(coeff_rows, len(sp.rows))
                if not null:
                    continue
                rows = []
                for combo in null:
                    vec = [sum((combo[i] * sp.rows[i][c] for i in range(len(sp.rows))),
                               ZERO) for c in range(nd)]
                    rows.append(vec)
                red, _ = rref(rows)
                if not red:
                    continue
                found_dim += len(red)
                new_spaces.append(WeightSpace(weights=sp.weights + (cand,), rows=red))
            if found_dim != sp.dim:
                raise DiagonalizationError(
                    "EIGEN_NOT_GAUSSIAN_RATIONAL",
                    f"ad({spec.h_names[t]}) has no Gaussian-rational eigenbasis "
                    f"on a {sp.dim}-dimensional invariant subspace")
        spaces = new_spaces
    if spec.h_dim == 0:
        return spaces
    return spaces


def check_exponential_roots(spaces: List[WeightSpace]) -> Optional[str]:
    """Every root must satisfy Im(weight) = alpha * Re(weight) as functionals.

    Equivalently: the root takes no purely imaginary nonzero value anywhere
    on h. Returns an error message, or None when all roots are fine.
    """
    for sp in spaces:
        re_part = [w.re for w in sp.weights]
        im_part = [w.im for w in sp.weights]
        if all(x == 0 for x in re_part):
            if any(x != 0 for x in im_part):
                return (f"root {tuple(str(w) for w in sp.weights)} is purely "
                        "imaginary and nonzero")
            continue
        t0 = next(i for i, x in enumerate(re_part) if x != 0)
        alpha = im_part[t0] / re_part[t0]
        for r, im in zip(re_part, im_part):
            if im != alpha * r:
                return (f"root {tuple(str(w) for w in sp.weights)} takes a purely "
                        "imaginary value on part of h")
    return None


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    ok: bool
    code: Optional[str] = None
    detail: Optional[str] = None
    witness: Optional[tuple] = None

    def as_dict(self):
        out = {"name": self.name, "ok": self.ok}
        if not self.ok:
            out["code"] = self.code
            out["detail"] = self.detail
            if self.witness is not None:
                out["witness"] = list(self.witness)
        return out


@dataclass
class ValidationReport:
    checks: List[CheckResult] = field(default_factory=list)
    weight_spaces: Optional[List[WeightSpace]] = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def codes(self) -> List[str]:
        return [c.code for c in self.checks if not c.ok]

    def as_dict(self):
        return {"ok": self.ok, "checks": [c.as_dict() for c in self.checks]}


def validate_spec(spec: LieAlgebraSpec) -> ValidationReport:
    """Run the standing-hypothesis checks; failures are itemized with witnesses."""
    report = ValidationReport()
    add = report.checks.append

    if spec.antisymmetry_conflicts:
        add(CheckResult("antisymmetry", False, "ANTISYMMETRY_FAIL",
                        f"conflicting entries for {spec.antisymmetry_conflicts}",
                        witness=spec.antisymmetry_conflicts[0]))
    else:
        add(CheckResult("antisymmetry", True))

    if spec.h_bracket_entries:
        add(CheckResult("h_abelian", False, "H_NOT_ABELIAN",
                        f"nonzero bracket on h pairs {spec.h_bracket_entries}",
                        witness=spec.h_bracket_entries[0]))
    else:
        add(CheckResult("h_abelian", True))

    # Jacobi on all basis triples
    jac_witness = None
    for a, b, c in itertools.combinations(range(spec.dim), 3):
        va, vb, vc = (spec.basis_vector(k) for k in (a, b, c))
        s1 = spec.bracket(spec.bracket(va, vb), vc)
        s2 = spec.bracket(spec.bracket(vb, vc), va)
        s3 = spec.bracket(spec.bracket(vc, va), vb)
        if any(not (x + y + z).is_zero() for x, y, z in zip(s1, s2, s3)):
            jac_witness = (spec.names[a], spec.names[b], spec.names[c])
            break
    if jac_witness:
        add(CheckResult("jacobi", False, "JACOBI_FAIL",
                        f"Jacobi identity fails on {jac_witness}",
                        witness=jac_witness))
    else:
        add(CheckResult("jacobi", True))

    # n nilpotent: lower central series terminates
    nd = spec.n_dim
    current = Subspace([spec.basis_vector(i) for i in range(nd)], spec.dim)
    nilpotent = True
    for _ in range(nd + 1):
        gens = []
        for i in range(nd):
            for row in current.rows:
                gens.append(spec.bracket(spec.basis_vector(i), list(row)))
        nxt = Subspace(gens, spec.dim)
        if nxt.dim == 0:
            break
        if nxt.dim == current.dim:
            nilpotent = False
            break
        current = nxt
    else:
        nilpotent = False
    if nilpotent:
        add(CheckResult("n_nilpotent", True))
    else:
        add(CheckResult("n_nilpotent", False, "NOT_NILPOTENT",
                        "lower central series of n does not terminate"))

    # carrying on with eigen-structure only makes sense on a Lie algebra
    if jac_witness is None and not spec.antisymmetry_conflicts:
        try:
            spaces = weight_decomposition(spec)
            add(CheckResult("h_diagonalizable", True))
            report.weight_spaces = spaces
            msg = check_exponential_roots(spaces)
            if msg is None:
                add(CheckResult("exponential_roots", True))
            else:
                add(CheckResult("exponential_roots", False,
                                "PURELY_IMAGINARY_ROOT", msg))
        except DiagonalizationError as exc:
            add(CheckResult("h_diagonalizable", False, exc.code, str(exc)))
    return report


def require_noncommutative(spec: LieAlgebraSpec) -> None:
    if spec.n_is_commutative():
        raise HypothesisViolation(
            "N_COMMUTATIVE", "the nilpotent part must be non-commutative")


# ---------------------------------------------------------------------------
# JSON input format
# ---------------------------------------------------------------------------

def _parse_combo(items, what: str) -> Dict[str, Fraction]:
    combo: Dict[str, Fraction] = {}
    for item in items:
        if not isinstance(item, dict) or "c" not in item or "b" not in item:
            raise SpecFormatError(f"{what}: each term needs 'c' and 'b'")
        try:
            c = Fraction(str(item["c"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecFormatError(f"{what}: bad rational {item['c']!r}: {exc}")
        combo[item["b"]] = combo.get(item["b"], Fraction(0)) + c
    return combo


def _parse_gaussian_combo(items, labels, what: str) -> List[GaussianRational]:
    out = [ZERO] * len(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    for item in items:
        if not isinstance(item, dict) or "c" not in item or "b" not in item:
            raise SpecFormatError(f"{what}: each term needs 'c' and 'b'")
        if item["b"] not in index:
            raise SpecFormatError(f"{what}: unknown basis label {item['b']!r}")
        try:
            c = parse_gaussian(str(item["c"]))
        except ValueError as exc:
            raise SpecFormatError(f"{what}: {exc}")
        out[index[item["b"]]] = out[index[item["b"]]] + c
    return out


def spec_from_dict(doc: dict) -> LieAlgebraSpec:
    if not isinstance(doc, dict):
        raise SpecFormatError("spec document must be a JSON object")
    for key in ("n_basis",):
        if key not in doc:
            raise SpecFormatError(f"missing required field {key!r}")
    n_names = list(doc["n_basis"])
    h_names = list(doc.get("h_basis", []))
    brackets: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    for ent in doc.get("brackets", []):
        if not isinstance(ent, dict) or "x" not in ent or "y" not in ent:
            raise SpecFormatError("each bracket needs 'x' and 'y'")
        key = (ent["x"], ent["y"])
        combo = _parse_combo(ent.get("value", []), f"bracket [{key[0]},{key[1]}]")
        if key in brackets:
            raise SpecFormatError(f"duplicate bracket entry for {key}")
        brackets[key] = combo
    hint = None
    if "adaptable_hint" in doc:
        hint = []
        for ent in doc["adaptable_hint"]:
            if not isinstance(ent, dict) or "label" not in ent:
                raise SpecFormatError("each hint entry needs 'label' and 'value'")
            vec = _parse_gaussian_combo(ent.get("value", []), n_names,
                                        f"hint {ent['label']}")
            hint.append(tuple(vec))
    return LieAlgebraSpec(doc.get("name", "unnamed"), n_names, h_names,
                          brackets, adaptable_hint=hint)


def parse_spec_text(text: str) -> LieAlgebraSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(str(exc), line=exc.lineno, column=exc.colno)
    return spec_from_dict(doc)


def load_spec(path) -> LieAlgebraSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec_text(fh.read())
