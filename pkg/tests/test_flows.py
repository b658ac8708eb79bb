import math
import random
from fractions import Fraction

import pytest

from conftest import point, wb_for
from solvlie.functionals import (NeedsFloatError, NotUnipotentError,
                                 exp_h_coadjoint, exp_unipotent_coadjoint,
                                 sample_element, sample_functional)
from solvlie.gaussian import GaussianRational as G


def _nilpotent_exp_oracle(spec, x_vec, l):
    """Independent oracle: transpose-series of ad(x) applied term by term."""
    from solvlie.algebra import ad_matrix
    m = ad_matrix(spec, x_vec)
    dim = spec.dim
    vals = list(l.values)
    out = list(vals)
    current = list(vals)
    k = 1
    while True:
        nxt = [sum(Fraction(-m[p][q]) * current[p] for p in range(dim))
               for q in range(dim)]
        if all(v == 0 for v in nxt):
            break
        current = [v / k for v in nxt]
        # careful: build (-ad x)^k / k! applied to the transpose step by step
        out = [a + b for a, b in zip(out, current)]
        k += 1
        if k > dim + 2:
            raise AssertionError("series did not terminate")
    return out


def test_unipotent_flow_heisenberg_hand_values():
    wb = wb_for("heisenberg-2param")
    spec = wb.spec
    l = point(wb, Z=3)
    t = Fraction(5, 2)
    x = [G(0)] * spec.dim
    x[spec.index("X")] = G(t)
    moved = exp_unipotent_coadjoint(spec, x, l)
    # l'(Y) = l(Y - t[X,Y]) = -t*l(Z); l'(Z) unchanged; l'(X) unchanged
    assert moved.values[spec.index("Y")] == -t * 3
    assert moved.values[spec.index("Z")] == 3
    assert moved.values[spec.index("X")] == 0


def test_unipotent_flow_matches_series_oracle():
    rng = random.Random(21)
    for entry_id in ("heisenberg-2param", "free-two-step",
                     "filiform-dilations-repaired"):
        wb = wb_for(entry_id)
        spec = wb.spec
        for _ in range(10):
            l = sample_functional(wb.canonical_basis, rng, support="g")
            x = sample_element(spec, rng, bound=3, support="n")
            moved = exp_unipotent_coadjoint(spec, x, l)
            oracle = _nilpotent_exp_oracle(spec, x, l)
            assert list(moved.values) == oracle


def test_unipotent_flow_identity_and_inverse():
    rng = random.Random(22)
    wb = wb_for("free-two-step")
    spec = wb.spec
    zero = [G(0)] * spec.dim
    for _ in range(10):
        l = sample_functional(wb.canonical_basis, rng, support="g")
        assert list(exp_unipotent_coadjoint(spec, zero, l).values) == list(l.values)
        x = sample_element(spec, rng, bound=4, support="n")
        neg = [-c for c in x]
        back = exp_unipotent_coadjoint(spec, neg, exp_unipotent_coadjoint(spec, x, l))
        assert list(back.values) == list(l.values)


def test_unipotent_flow_central_element_acts_trivially():
    # Z1 is central in the whole of g for the free two-step example
    wb = wb_for("free-two-step")
    spec = wb.spec
    rng = random.Random(23)
    z = [G(0)] * spec.dim
    z[spec.index("Z1")] = G(7)
    for _ in range(5):
        l = sample_functional(wb.canonical_basis, rng, support="g")
        assert list(exp_unipotent_coadjoint(spec, z, l).values) == list(l.values)


def test_unipotent_rejects_h_component():
    wb = wb_for("heisenberg-2param")
    spec = wb.spec
    x = [G(0)] * spec.dim
    x[spec.index("A")] = G(1)
    with pytest.raises(NotUnipotentError):
        exp_unipotent_coadjoint(spec, x, point(wb, Z=1))


def test_h_flow_scales_by_exp_minus_weight():
    wb = wb_for("heisenberg-2param")
    spec = wb.spec
    l = point(wb, Z=1)
    a = [0.0] * spec.dim
    t = 0.8
    a[spec.index("A")] = t
    moved = exp_h_coadjoint(spec, a, l, mode="float")
    assert moved.values[spec.index("Z")] == pytest.approx(math.exp(-t), rel=1e-12)


def test_h_flow_spiral_rotates_phase():
    wb = wb_for("spiral-heisenberg")
    spec = wb.spec
    l = point(wb, Z1=2)           # value 2 on the complex pair coordinate
    t = math.log(2.0)
    a = [0.0] * spec.dim
    a[spec.index("A")] = t
    moved = exp_h_coadjoint(spec, a, l, mode="float")
    z = complex(moved.z(1))
    assert abs(abs(z) - 1.0) < 1e-12
    assert math.isclose(math.atan2(z.imag, z.real), -t, rel_tol=1e-9)


def test_h_flow_zero_is_identity_exact():
    wb = wb_for("heisenberg-2param")
    spec = wb.spec
    l = point(wb, Z=5, Y=1, X=2)
    a = [G(0)] * spec.dim
    out = exp_h_coadjoint(spec, a, l, mode="exact")
    assert list(out.values) == list(l.values)


def test_h_flow_stabilizer_fixes_section_points_exactly():
    wb = wb_for("heisenberg-2param")
    spec = wb.spec
    l = point(wb, Z=9)
    a = [G(0)] * spec.dim
    a[spec.index("B")] = G(3)     # the little-group direction
    out = exp_h_coadjoint(spec, a, l, mode="exact")
    assert list(out.values) == list(l.values)


def test_h_flow_exact_mode_refuses_moving_coordinates():
    wb = wb_for("heisenberg-2param")
    spec = wb.spec
    l = point(wb, Z=1)
    a = [G(0)] * spec.dim
    a[spec.index("A")] = G(1)
    with pytest.raises(NeedsFloatError):
        exp_h_coadjoint(spec, a, l, mode="exact")


def test_h_flow_preserves_h_values():
    wb = wb_for("heisenberg-2param")
    spec = wb.spec
    l = point(wb, Z=1, A=4, B=-2)
    a = [0.0] * spec.dim
    a[spec.index("A")] = 1.5
    moved = exp_h_coadjoint(spec, a, l, mode="float")
    assert moved.values[spec.index("A")] == pytest.approx(4.0)
    assert moved.values[spec.index("B")] == pytest.approx(-2.0)


def test_reality_constraint_survives_flows():
    rng = random.Random(24)
    wb = wb_for("spiral-heisenberg")
    spec = wb.spec
    for _ in range(10):
        l = sample_functional(wb.canonical_basis, rng, support="n")
        x = sample_element(spec, rng, bound=3, support="n")
        moved = exp_unipotent_coadjoint(spec, x, l)
        for j in range(1, wb.canonical_basis.dim + 1):
            s = wb.canonical_basis.sigma[j]
            assert moved.z(j).conjugate() == moved.z(s)
