from fractions import Fraction

import pytest

from tnrank.scalars import GaussianRational, ModeMismatchError, as_exact, check_same_mode


def test_arithmetic_is_exact():
    a = GaussianRational(Fraction(1, 3), Fraction(1, 7))
    b = GaussianRational(Fraction(2, 5), Fraction(-3, 7))
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * (b + 1) == a * b + a


def test_associativity_on_awkward_fractions():
    xs = [GaussianRational(Fraction(1, k), Fraction(k, k + 1)) for k in range(1, 6)]
    left = ((xs[0] + xs[1]) + xs[2]) + (xs[3] + xs[4])
    right = xs[0] + (xs[1] + (xs[2] + (xs[3] + xs[4])))
    assert left == right


def test_complex_division():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert (1 / i) == -i
    assert GaussianRational(3, 4).abs2() == 25


def test_int_interop_and_zero():
    g = GaussianRational(2, -1)
    assert 0 + g == g
    assert g * 0 == GaussianRational(0)
    assert not GaussianRational(0)
    assert bool(g)
    with pytest.raises(ZeroDivisionError):
        g / GaussianRational(0)


def test_immutability():
    g = GaussianRational(1)
    with pytest.raises(AttributeError):
        g.re = Fraction(2)


def test_to_complex_rounds():
    g = GaussianRational(Fraction(1, 3), Fraction(-1, 2))
    c = g.to_complex()
    assert abs(c.real - 1 / 3) < 1e-15 and c.imag == -0.5


def test_as_exact_rejects_floats():
    with pytest.raises(TypeError):
        as_exact(0.5)


def test_mode_check():
    assert check_same_mode("exact", "exact") == "exact"
    with pytest.raises(ModeMismatchError):
        check_same_mode("exact", "float")
