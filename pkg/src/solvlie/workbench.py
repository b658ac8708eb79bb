"""End-to-end pipeline: spec file to orbital data to admissibility report.

Everything downstream of validation is derived lazily and cached, so a
caller can ask for just the verdict (cheap) or the full report document
(runs the layer sampling on both n* and g*). Reports are deterministic
functions of (spec, seed, trials).
"""

from __future__ import annotations

import random
from typing import Dict, Optional, Tuple

from . import admissibility as adm
from .adapted import AdaptableBasis, build_adaptable_basis
from .algebra import (HypothesisViolation, LieAlgebraSpec, ValidationReport,
                      require_noncommutative, validate_spec)
from .functionals import Functional
from .gaussian import GaussianRational
from .sections import (SectionOracle, StabilizerData, UnsupportedLayerError,
                       canonical_h_vectors, lambda_nu_oracle, lambda_oracle,
                       sample_lambda_nu, sample_sigma_circ, sigma_circ_oracle,
                       sigma_oracle, stabilizer_data)
from .strata import (LayerDescriptor, generic_layer, pfaffian, skew_matrix)

SCHEMA = "solvlie-report/1"

CITATIONS = {
    "validation": "standing hypotheses: nilpotent n, abelian h acting "
                  "diagonalizably with no purely imaginary root",
    "layers": "flag/annihilator recursion for the coadjoint form; layers "
              "indexed by jump sets",
    "sections": "orbit cross-sections cut out by vanishing and unit-modulus "
                "conditions over a generic layer",
    "stabilizer": "little group = joint kernel of the weights on the "
                  "off-jump-set coordinates",
    "plancherel": "Plancherel density |Pf| of the skew form on the jump "
                  "coordinates",
    "multiplicity": "orbit count of the little-group action on the "
                    "representation domain: 2^dim(X) or infinite",
    "verdict": "admissible iff nonunimodular and the dilation part meets "
               "the center trivially",
}


class PipelineError(RuntimeError):
    pass


class Workbench:
    def __init__(self, spec: LieAlgebraSpec, seed: int = 42, trials: int = 64,
                 tolerance: float = 1e-9):
        self.spec = spec
        self.seed = seed
        self.trials = trials
        self.tolerance = tolerance
        self._cache: Dict[str, object] = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # -- stages ----------------------------------------------------------

    @property
    def validation(self) -> ValidationReport:
        return self._get("validation", lambda: validate_spec(self.spec))

    def require_hypotheses(self):
        rep = self.validation
        if not rep.ok:
            first = rep.failures()[0]
            raise HypothesisViolation(first.code or "INVALID", first.detail or first.name)
        require_noncommutative(self.spec)

    @property
    def basis(self) -> AdaptableBasis:
        def make():
            self.require_hypotheses()
            return build_adaptable_basis(self.spec, hint=self.spec.adaptable_hint)
        return self._get("basis", make)

    @property
    def n_layer(self) -> LayerDescriptor:
        return self._get("n_layer", lambda: generic_layer(
            self.basis, "n", seed=self.seed, trials=self.trials))

    @property
    def stabilizer(self) -> StabilizerData:
        return self._get("stab", lambda: stabilizer_data(
            self.spec, self.basis, self.n_layer))

    @property
    def canonical_basis(self) -> AdaptableBasis:
        def make():
            hv = canonical_h_vectors(self.spec, self.stabilizer)
            return self.basis.with_h_part(hv)
        return self._get("canonical_basis", make)

    @property
    def g_layer(self) -> LayerDescriptor:
        def make():
            layer = generic_layer(self.canonical_basis, "g",
                                  seed=self.seed, trials=self.trials)
            if tuple(layer.phi) != tuple(self.stabilizer.phi):
                raise PipelineError(
                    f"paired-index mismatch: layer phi {layer.phi} vs "
                    f"stabilizer phi {self.stabilizer.phi}")
            return layer
        return self._get("g_layer", make)

    # -- oracles (built on the canonical basis so the full-section test
    #    can see the normalized dilation directions) -----------------------

    @property
    def oracle_lambda(self) -> SectionOracle:
        return self._get("o_lambda", lambda: lambda_oracle(
            self.canonical_basis, self.n_layer))

    @property
    def oracle_lambda_nu(self) -> SectionOracle:
        return self._get("o_lambda_nu", lambda: lambda_nu_oracle(
            self.canonical_basis, self.n_layer))

    # phi here comes from the stabilizer pairing; computing the g* layer
    # cross-checks it (see g_layer), and the report always runs both.
    @property
    def oracle_sigma_circ(self) -> SectionOracle:
        return self._get("o_sigma_circ", lambda: sigma_circ_oracle(
            self.canonical_basis, self.n_layer, self.stabilizer))

    @property
    def oracle_sigma(self) -> SectionOracle:
        return self._get("o_sigma", lambda: sigma_oracle(
            self.canonical_basis, self.n_layer, self.stabilizer))

    # -- admissibility ingredients ----------------------------------------

    @property
    def center(self) -> adm.CenterData:
        return self._get("center", lambda: adm.center_data(self.spec))

    @property
    def unimodular(self) -> Tuple[bool, dict]:
        return self._get("unimod", lambda: adm.unimodularity(self.spec))

    @property
    def polarization(self) -> Optional[adm.PolarizationData]:
        def make():
            try:
                rng = random.Random(self.seed + 17)
                lam = sample_sigma_circ(self.oracle_sigma_circ, rng)
                return adm.polarization_data(lam, self.canonical_basis)
            except UnsupportedLayerError:
                return None
        return self._get("polarization", make)

    @property
    def multiplicity(self):
        def make():
            if self.stabilizer.k_dim == 0:
                return adm.INFINITE
            pol = self.polarization
            if pol is None:
                return None
            return adm.multiplicity(self.canonical_basis, self.stabilizer, pol)
        return self._get("multiplicity", make)

    def verdict(self) -> adm.AdmissibilityReport:
        def make():
            self.require_hypotheses()
            uni, table = self.unimodular
            dim_zh = self.center.dim_z_cap_h
            code = adm.verdict_from_parts(uni, dim_zh)
            mult = self.multiplicity
            pol = self.polarization
            note = None
            if code == adm.VERDICT_UNIMODULAR and mult not in (None, adm.INFINITE):
                note = ("INFINITE_MASS: finite multiplicity on a spectrum of "
                        "infinite Plancherel mass; the admissibility integral "
                        "diverges")
            spectrum = {
                "support": "section of the dilation orbits x dual of the "
                           "little group",
                "sigma_circ": self.oracle_sigma_circ.as_dict(),
                "k_star_dim": self.stabilizer.k_dim,
            }
            return adm.AdmissibilityReport(
                verdict=code, unimodular=uni, trace_table=table,
                dim_z_cap_h=dim_zh, k_dim=self.stabilizer.k_dim,
                multiplicity=mult, dim_x=None if pol is None else pol.dim_x,
                spectrum=spectrum, plancherel=self.plancherel_samples(),
                divergence_note=note, reason=adm.REASONS[code])
        return self._get("verdict", make)

    # -- density samples ----------------------------------------------------

    def plancherel_samples(self, count: int = 3) -> dict:
        def one(f: Functional):
            mat = skew_matrix(f, list(self.n_layer.e_set))
            pf = pfaffian(mat)
            return {
                "point": {f"Z{j}": str(GaussianRational.coerce(v) if not isinstance(v, GaussianRational) else v)
                          for j, v in ((j, f.z(j)) for j in self.stabilizer.nu)},
                "pf_abs2": str(pf.abs2()),
            }
        rng = random.Random(self.seed + 5)
        samples = []
        try:
            for _ in range(count):
                samples.append(one(sample_lambda_nu(self.oracle_lambda_nu, rng)))
        except UnsupportedLayerError:
            return {"density": "|Pf| d(section) d(little-group dual)",
                    "samples": None,
                    "note": "sampling unsupported on this layer"}
        return {"density": "|Pf| d(section) d(little-group dual)",
                "samples": samples}

    def project(self, f: Functional):
        """Dilation parameters and landing point of f on the orbit section."""
        from .sections import h_project
        return h_project(f, self.stabilizer, self.oracle_lambda_nu,
                         self.oracle_sigma_circ, tol=self.tolerance)

    def disintegration(self, mc_samples: int = 10 ** 6, seed: int = 1234):
        return adm.disintegration_check(
            self.spec, self.canonical_basis, self.n_layer, self.stabilizer,
            mc_samples=mc_samples, seed=seed)

    # -- the report document -------------------------------------------------

    def report(self) -> dict:
        self.require_hypotheses()
        ver = self.verdict()
        doc = {
            "schema": SCHEMA,
            "name": self.spec.name,
            "seed": self.seed,
            "trials": self.trials,
            "validation": self.validation.as_dict(),
            "basis": {
                "labels": list(self.spec.names),
                "adapted": self.canonical_basis.describe(),
                "weights": [[str(w) for w in row]
                            for row in self.canonical_basis.weights],
            },
            "n_layer": self.n_layer.as_dict(),
            "g_layer": self.g_layer.as_dict(),
            "nu": list(self.stabilizer.nu),
            "stabilizer": self.stabilizer.as_dict(self.spec.h_names),
            "sections": {
                "lambda": self.oracle_lambda.as_dict(),
                "lambda_nu": self.oracle_lambda_nu.as_dict(),
                "sigma_circ": self.oracle_sigma_circ.as_dict(),
                "sigma": self.oracle_sigma.as_dict(),
            },
            "center": self.center.as_dict(self.spec),
            "admissibility": ver.as_dict(),
            "citations": CITATIONS,
        }
        return doc
