import random
from fractions import Fraction

import pytest

from solvlie.gaussian import GaussianRational, gr, parse_gaussian


def test_field_operations_exact():
    a = gr("3/4", "-2/5")
    b = gr("-1/3", "7")
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * (1 / a) == gr(1)
    assert -(-a) == a


def test_conjugation_involution_and_norm():
    rng = random.Random(0)
    for _ in range(50):
        z = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                             Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        assert z.conjugate().conjugate() == z
        n = z.abs2()
        assert isinstance(n, Fraction)
        assert n == (z * z.conjugate()).re
        assert (z * z.conjugate()).im == 0


def test_i_squared():
    assert gr(0, 1) * gr(0, 1) == gr(-1)


@pytest.mark.parametrize("text,re_, im_", [
    ("3/4", "3/4", "0"),
    ("-2", "-2", "0"),
    ("1/2+3/4 i", "1/2", "3/4"),
    ("1/2-3/4 i", "1/2", "-3/4"),
    ("-1/2+1 i", "-1/2", "1"),
    ("2 i", "0", "2"),
    ("-5/7 i", "0", "-5/7"),
    ("i", "0", "1"),
    ("0", "0", "0"),
])
def test_parse(text, re_, im_):
    z = parse_gaussian(text)
    assert z.re == Fraction(re_) and z.im == Fraction(im_)


@pytest.mark.parametrize("bad", ["", "x", "1+2", "1//2 i", "3/4 j"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_gaussian(bad)


def test_format_roundtrip():
    rng = random.Random(1)
    for _ in range(40):
        z = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                             Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        assert parse_gaussian(str(z)) == z


def test_mixing_with_complex_degrades_to_complex():
    z = gr("1/2", "1/2")
    assert isinstance(z * 1.0j, complex)
    assert complex(z) == 0.5 + 0.5j
