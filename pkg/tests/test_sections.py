import math
import random
from fractions import Fraction

import pytest

from conftest import SAMPLABLE_IDS, point, wb_for
from solvlie.functionals import exp_h_coadjoint
from solvlie.gaussian import GaussianRational as G
from solvlie.sections import (NotInSectionError, UnsupportedLayerError,
                              h_project, pointwise_stabilizer,
                              sample_lambda_nu, sample_sigma_circ)


# -- membership oracles ---------------------------------------------------------

def test_lambda_oracle_double_heisenberg_predicate_agreement():
    from solvlie.strata import jump_data
    wb = wb_for("double-heisenberg")
    spec = wb.spec
    rng = random.Random(41)
    oracle = wb.oracle_lambda
    hits = misses = 0
    for k in range(100):
        coords = {lab: Fraction(rng.randint(-4, 4)) for lab in spec.names}
        if k % 2 == 0:
            for lab in ("Y1", "Y2", "X1", "X2"):
                coords[lab] = Fraction(0)
        f = point(wb, **{k_: v for k_, v in coords.items()})
        zero_on = all(coords[lab] == 0 for lab in ("Y1", "Y2", "X1", "X2"))
        jd = jump_data(f, wb.canonical_basis, "n")
        in_layer = (jd.e_set == wb.n_layer.e_set
                    and jd.j_seq == wb.n_layer.j_seq)
        expected = zero_on and in_layer
        got = oracle.contains(f)
        assert got == expected
        hits += got
        misses += not got
    assert hits > 10 and misses > 10


def test_lambda_nu_oracle_heisenberg_closed_form():
    wb = wb_for("heisenberg-2param")
    rng = random.Random(42)
    oracle = wb.oracle_lambda_nu
    for _ in range(100):
        z = Fraction(rng.randint(-6, 6))
        y = Fraction(rng.randint(-2, 2))
        x = Fraction(rng.randint(-2, 2))
        f = point(wb, Z=z, Y=y, X=x)
        assert oracle.contains(f) == (z != 0 and y == 0 and x == 0)


def test_sigma_circ_exactly_two_points_heisenberg():
    wb = wb_for("heisenberg-2param")
    oracle = wb.oracle_sigma_circ
    assert oracle.contains(point(wb, Z=1))
    assert oracle.contains(point(wb, Z=-1))
    for z in (2, -2, 3, Fraction(1, 2)):
        assert not oracle.contains(point(wb, Z=z))


def test_sigma_oracle_spiral_modulus_constraint():
    wb = wb_for("spiral-heisenberg")
    oracle = wb.oracle_sigma_circ
    assert oracle.contains(point(wb, Z1=Fraction(3, 5), Z2=Fraction(4, 5)))
    assert oracle.contains(point(wb, Z1=-1))
    assert not oracle.contains(point(wb, Z1=2))
    assert not oracle.contains(point(wb, Z1=1, Z2=1))
    kinds = [c.kind for c in oracle.constraints]
    assert "MODULUS_ONE" in kinds


def test_sigma_oracle_coupled_pairs_case3_constraint():
    # the pairing constraint Re(conj(z) x) = 0 with |z| = 1
    wb = wb_for("coupled-pairs")
    oracle = wb.oracle_sigma_circ
    assert oracle.contains(point(wb, Z1=1, X2=1))
    assert oracle.contains(point(wb, Z1=1, X2=-3))
    assert not oracle.contains(point(wb, Z1=1, X1=1, X2=1))
    assert not oracle.contains(point(wb, Z1=2, X2=1))
    # mixed z: pick |z| = 1 via (3/5, 4/5); x must pair to zero:
    # Re(conj(z) x) = (3/5) x1 + (4/5) x2 = 0 at x = (4, -3) and fail at (1, 1)
    assert oracle.contains(point(wb, Z1=Fraction(3, 5), Z2=Fraction(4, 5),
                                  X1=4, X2=-3))
    assert not oracle.contains(point(wb, Z1=Fraction(3, 5), Z2=Fraction(4, 5),
                                     X1=1, X2=1))


def test_full_section_oracle_frees_little_group_dual():
    wb = wb_for("heisenberg-2param")
    oracle = wb.oracle_sigma
    assert oracle.contains(point(wb, Z=1, B=17))
    assert oracle.contains(point(wb, Z=-1, B=Fraction(-3, 7)))
    assert not oracle.contains(point(wb, Z=1, A=1))


def test_oracle_constraint_tags():
    wb = wb_for("heisenberg-2param")
    kinds = [(c.kind, c.index) for c in wb.oracle_sigma.constraints]
    assert ("VANISH", 2) in kinds and ("VANISH", 3) in kinds
    assert ("NONZERO", 1) in kinds
    assert ("MODULUS_ONE", 1) in kinds
    assert ("H_PART_ZERO", None) in kinds
    wb2 = wb_for("coupled-pairs")
    kinds2 = [c.kind for c in wb2.oracle_lambda.constraints]
    assert "CASE3_COMBO" in kinds2
    assert wb2.oracle_lambda.printable_form is None


# -- stabilizer -----------------------------------------------------------------

def test_stabilizer_heisenberg_2param():
    wb = wb_for("heisenberg-2param")
    stab = wb.stabilizer
    assert stab.nu == (1,)
    assert stab.k_dim == 1
    assert stab.k_subalg.contains_vector([G(0), G(1)])  # B
    assert stab.a_basis == [(Fraction(1), Fraction(0))]  # A, already normalized


def test_stabilizer_anisotropic_direction():
    wb = wb_for("anisotropic-heisenberg")
    stab = wb.stabilizer
    assert stab.k_dim == 1
    assert stab.k_subalg.contains_vector([G(0), G(1)])  # the A2 direction
    # its weight on the center of n vanishes
    assert wb.canonical_basis.weights[0][1].is_zero()


def test_stabilizer_trivial_for_spiral():
    wb = wb_for("spiral-heisenberg")
    assert wb.stabilizer.k_dim == 0
    assert wb.stabilizer.phi == (1,)


def test_pointwise_stabilizer_matches_common_kernel():
    rng = random.Random(43)
    for entry_id in SAMPLABLE_IDS:
        wb = wb_for(entry_id)
        if wb.spec.h_dim == 0:
            continue
        for _ in range(10):
            f = sample_lambda_nu(wb.oracle_lambda_nu, rng)
            sub = pointwise_stabilizer(f, wb.canonical_basis)
            assert sub == wb.stabilizer.k_subalg


def test_stabilizer_flow_fixes_section_points():
    rng = random.Random(44)
    wb = wb_for("anisotropic-heisenberg")
    spec = wb.spec
    for _ in range(10):
        f = sample_lambda_nu(wb.oracle_lambda_nu, rng)
        a = [G(0)] * spec.dim
        a[spec.index("A2")] = G(rng.randint(-3, 3))
        moved = exp_h_coadjoint(spec, a, f, mode="exact")
        assert list(moved.values) == list(f.values)


# -- samplers ---------------------------------------------------------------------

def test_lambda_nu_sampler_members_only():
    rng = random.Random(45)
    for entry_id in SAMPLABLE_IDS:
        wb = wb_for(entry_id)
        for _ in range(10):
            f = sample_lambda_nu(wb.oracle_lambda_nu, rng)
            assert wb.oracle_lambda_nu.contains(f)


def test_sigma_circ_sampler_members_only():
    rng = random.Random(46)
    for entry_id in SAMPLABLE_IDS:
        wb = wb_for(entry_id)
        for _ in range(10):
            f = sample_sigma_circ(wb.oracle_sigma_circ, rng)
            assert wb.oracle_sigma_circ.contains(f)


def test_sampler_unsupported_on_case3_layer():
    wb = wb_for("coupled-pairs")
    with pytest.raises(UnsupportedLayerError):
        sample_lambda_nu(wb.oracle_lambda_nu, random.Random(0))


# -- projection along dilation orbits ----------------------------------------------

def test_h_project_heisenberg_log():
    wb = wb_for("heisenberg-2param")
    f = point(wb, Z=4)
    params, sigma = h_project(f, wb.stabilizer, wb.oracle_lambda_nu,
                              wb.oracle_sigma_circ)
    assert params == pytest.approx((math.log(4),))
    assert complex(sigma.z(1)) == pytest.approx(1.0)
    f2 = point(wb, Z=-4)
    _, sigma2 = h_project(f2, wb.stabilizer, wb.oracle_lambda_nu,
                          wb.oracle_sigma_circ)
    assert complex(sigma2.z(1)) == pytest.approx(-1.0)


def test_h_project_identity_on_section():
    wb = wb_for("heisenberg-2param")
    f = point(wb, Z=1)
    params, sigma = h_project(f, wb.stabilizer, wb.oracle_lambda_nu,
                              wb.oracle_sigma_circ)
    assert params == pytest.approx((0.0,))
    assert complex(sigma.z(1)) == pytest.approx(1.0)


def test_h_project_spiral_rotation():
    wb = wb_for("spiral-heisenberg")
    f = point(wb, Z1=2)
    params, sigma = h_project(f, wb.stabilizer, wb.oracle_lambda_nu,
                              wb.oracle_sigma_circ)
    z = complex(sigma.z(1))
    assert abs(abs(z) - 1.0) < 1e-12
    assert math.atan2(z.imag, z.real) == pytest.approx(-math.log(2), abs=1e-9)


def test_h_project_rejects_non_members():
    wb = wb_for("heisenberg-2param")
    with pytest.raises(NotInSectionError):
        h_project(point(wb, Z=1, X=1), wb.stabilizer, wb.oracle_lambda_nu,
                  wb.oracle_sigma_circ)


def test_h_project_invariance_along_orbits():
    # projecting f and a dilation-moved copy of f lands on the same point
    rng = random.Random(47)
    wb = wb_for("anisotropic-heisenberg")
    spec = wb.spec
    for _ in range(8):
        f = sample_lambda_nu(wb.oracle_lambda_nu, rng)
        _, s1 = h_project(f, wb.stabilizer, wb.oracle_lambda_nu,
                          wb.oracle_sigma_circ)
        a = [0.0] * spec.dim
        a[spec.index("A1")] = rng.uniform(-1.0, 1.0)
        a[spec.index("A2")] = rng.uniform(-1.0, 1.0)
        moved = exp_h_coadjoint(spec, a, f, mode="float")
        _, s2 = h_project(moved, wb.stabilizer, wb.oracle_lambda_nu,
                          wb.oracle_sigma_circ)
        for v1, v2 in zip(s1.values, s2.values):
            assert v1 == pytest.approx(v2, abs=1e-8)


def test_h_project_idempotent():
    rng = random.Random(48)
    wb = wb_for("heisenberg-2param")
    for _ in range(8):
        f = sample_lambda_nu(wb.oracle_lambda_nu, rng)
        params, sigma = h_project(f, wb.stabilizer, wb.oracle_lambda_nu,
                                  wb.oracle_sigma_circ)
        params2, _ = h_project(sigma, wb.stabilizer, wb.oracle_lambda_nu,
                               wb.oracle_sigma_circ)
        assert all(abs(p) < 1e-9 for p in params2)


def test_lambda_nu_invariant_under_dilation_flow():
    rng = random.Random(49)
    wb = wb_for("heisenberg-2param")
    spec = wb.spec
    for _ in range(10):
        f = sample_lambda_nu(wb.oracle_lambda_nu, rng)
        a = [0.0] * spec.dim
        a[spec.index("A")] = rng.uniform(-1.5, 1.5)
        a[spec.index("B")] = rng.uniform(-1.5, 1.5)
        moved = exp_h_coadjoint(spec, a, f, mode="float")
        assert wb.oracle_lambda_nu.contains(moved, tol=1e-9)
