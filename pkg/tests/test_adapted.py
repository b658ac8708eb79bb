import random
from fractions import Fraction

import pytest

from solvlie.adapted import HintInvalidError, build_adaptable_basis
from solvlie.corpus import corpus_entry
from solvlie.gaussian import GaussianRational as G


def _basis(entry_id):
    spec = corpus_entry(entry_id).spec()
    return spec, build_adaptable_basis(spec, hint=spec.adaptable_hint)


def test_complex_dilation_hint_accepted_with_weights():
    spec, basis = _basis("heisenberg-complex-dilation")
    # weight of Z is 2, weight of X+iY is 1+i on the dilation generator
    assert basis.weights[0] == (G(2),)
    assert basis.weights[1] == (G(1, 1),)
    assert basis.weights[2] == (G(1, -1),)
    assert basis.alpha[1] == Fraction(1)
    assert basis.sigma[2] == 3 and basis.sigma[3] == 2 and basis.sigma[1] == 1


def test_double_heisenberg_hint_accepted():
    spec, basis = _basis("double-heisenberg")
    assert basis.n == 6 and basis.r == 0
    # conj pairs sit adjacent
    assert basis.sigma[1:7] == (2, 1, 4, 3, 6, 5)


def test_auto_construction_heisenberg_2param_real_flag_order():
    spec = corpus_entry("heisenberg-2param").spec()
    basis = build_adaptable_basis(spec)
    assert basis.describe()[:3] == ["Z", "Y", "X"]
    half = G(Fraction(1, 2))
    assert [w[0] for w in basis.weights[:3]] == [G(1), half, half]


def test_hint_invalid_not_a_flag():
    spec = corpus_entry("heisenberg-complex-dilation").spec()
    # ordering (X+iY, X-iY, Z): the first span is not an ideal
    hint = [
        (G(0), G(0, 1), G(1)),   # X + iY written over (Z, Y, X) coordinates
        (G(0), G(0, -1), G(1)),
        (G(1), G(0), G(0)),      # Z last
    ]
    with pytest.raises(HintInvalidError) as err:
        build_adaptable_basis(spec, hint=hint)
    assert err.value.condition == 1


def test_hint_invalid_conjugate_not_adjacent():
    spec = corpus_entry("double-heisenberg").spec()

    def vec(**kw):
        out = [G(0)] * 6
        for lab, v in kw.items():
            out[spec.index(lab)] = v
        return tuple(out)

    hint = [
        vec(Z1=G(1), Z2=G(0, 1)),
        vec(Z1=G(1), Z2=G(0, -1)),
        vec(Y1=G(1), Y2=G(0, 1)),
        vec(X1=G(1), X2=G(0, 1)),   # conjugate of the Y-pair missing here
        vec(Y1=G(1), Y2=G(0, -1)),
        vec(X1=G(1), X2=G(0, -1)),
    ]
    with pytest.raises(HintInvalidError) as err:
        build_adaptable_basis(spec, hint=hint)
    assert err.value.condition == 2


def test_hint_invalid_complex_vector_on_stable_step():
    # span{Z, iY} is conjugation-stable, so the vector itself must be real
    spec = corpus_entry("heisenberg-2param").spec()
    hint = [
        (G(1), G(0), G(0), G(0), G(0)),
        (G(0), G(0, 1), G(0), G(0), G(0)),   # i*Y
        (G(0), G(0), G(1), G(0), G(0)),
    ]
    with pytest.raises(HintInvalidError) as err:
        build_adaptable_basis(spec, hint=hint)
    assert err.value.condition == 3


def test_flag_ideal_property_everywhere():
    rng = random.Random(11)
    for entry_id in ("heisenberg-complex-dilation", "spiral-heisenberg",
                     "free-two-step", "five-dilations-repaired"):
        spec, basis = _basis(entry_id)
        for k in range(1, basis.dim + 1):
            flag = basis.flag(k)
            for _ in range(5):
                w = [G(rng.randint(-3, 3)) for _ in range(spec.dim)]
                for row in flag.rows:
                    img = spec.bracket(w, list(row))
                    assert flag.contains_vector(img)


def test_conjugation_pairing_involution_and_weights():
    for entry_id in ("spiral-heisenberg", "coupled-pairs", "free-two-step"):
        spec, basis = _basis(entry_id)
        for j in range(1, basis.dim + 1):
            s = basis.sigma[j]
            assert basis.sigma[s] == j
            wj = basis.weights[j - 1]
            ws = basis.weights[s - 1]
            assert tuple(w.conjugate() for w in wj) == ws


def test_construction_matches_hint_layer_for_spiral():
    # without the hint, the constructor must still produce a valid basis
    spec = corpus_entry("spiral-heisenberg").spec()
    basis = build_adaptable_basis(spec)
    assert basis.n == 6
    # weights on the dilation generator come in conjugate pairs
    vals = sorted(str(w[0]) for w in basis.weights[:6])
    assert vals == sorted(["1+1 i", "1-1 i", "1/2+1/2 i", "1/2-1/2 i",
                           "1/2+1/2 i", "1/2-1/2 i"])
