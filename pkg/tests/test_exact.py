import random
from fractions import Fraction

import pytest
import sympy

from algebra.errors import DomainError
from algebra.exact import Polynomial, RationalFunction, poly_eval, poly_gcd, ratfunc_simplify

n = Polynomial.variable()
THRESHOLD_13 = Polynomial([-419, -1161, -993, -203, 24])
X = sympy.Symbol("n")


def _random_poly(rng, degree):
    coeffs = [rng.randint(-5, 5) for _ in range(degree)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    return Polynomial(coeffs)


def test_polynomial_arithmetic():
    assert (n + 1) ** 2 == Polynomial([1, 2, 1])
    assert (n ** 2 - 1) // (n - 1) == n + 1
    assert (n ** 3 + 2) % (n - 1) == Polynomial([3])
    assert Polynomial([0, 0, 1]).shift(1) == Polynomial([1, 2, 1])
    assert Polynomial([1, 1, 1]).derivative() == Polynomial([1, 2])
    assert str(Polynomial([1, -3, 0, 2])) == "2*n^3 - 3*n + 1"
    assert Polynomial([0, 0]).is_zero


def test_poly_gcd_examples():
    assert poly_gcd(n ** 2 - 1, n ** 2 + 2 * n + 1) == n + 1
    assert poly_gcd(n ** 3, Polynomial([5])) == Polynomial([1])
    assert poly_gcd(24 * n ** 2 - 96 * n + 413, 3 * n ** 2) == Polynomial([1])


def test_poly_gcd_of_two_zeros_is_rejected():
    with pytest.raises(DomainError):
        poly_gcd(Polynomial(), Polynomial())


def test_poly_gcd_is_multiplicative_in_a_common_factor():
    rng = random.Random(7)
    for _ in range(40):
        p, q, r = _random_poly(rng, rng.randint(0, 4)), _random_poly(rng, rng.randint(0, 4)), _random_poly(rng, rng.randint(1, 3))
        assert poly_gcd(p * r, q * r) == (r * poly_gcd(p, q)).monic()


def test_poly_eval():
    assert poly_eval(THRESHOLD_13, 13) == 56144
    assert poly_eval(THRESHOLD_13, 12) == -10463
    assert poly_eval(Polynomial(), Fraction(7, 3)) == 0


def test_ratfunc_simplify_examples():
    assert ratfunc_simplify(n ** 2 - 1, n - 1) == RationalFunction(n + 1)
    r = ratfunc_simplify(-n, -(n ** 2))
    assert (r.num, r.den) == (Polynomial([1]), n)
    f = ratfunc_simplify(24 * n ** 2 - 96 * n + 413, 3 * n ** 2)
    assert f.num == 24 * n ** 2 - 96 * n + 413
    assert f.den == 3 * n ** 2


def test_ratfunc_canonical_form():
    half = RationalFunction(Polynomial([2, 2]), Polynomial([4, 4]))
    assert (half.num, half.den) == (Polynomial([1]), Polynomial([2]))
    assert str(half) == "(1)/(2)"
    neg = RationalFunction(n, Polynomial([0, -2]))
    assert neg.den.leading > 0
    assert neg == RationalFunction(Fraction(-1, 2))


def test_zero_denominator_is_rejected():
    with pytest.raises(DomainError):
        ratfunc_simplify(n, Polynomial())
    with pytest.raises(DomainError):
        RationalFunction(n) / RationalFunction(0)


def test_ratfunc_field_operations():
    x = RationalFunction.variable()
    r = (x ** 2 + 1) / (x - 3)
    assert (r - r).is_zero
    assert r * (1 / r) == 1
    assert (1 / x).derivative() == -1 / x ** 2
    assert r.shift(1)(5) == r(6)
    assert (8 - 32 / x).degree == 0
    assert (-x).sign_at_infinity() == -1


def test_ratfunc_simplify_is_idempotent_and_value_preserving():
    rng = random.Random(11)
    for _ in range(30):
        common = _random_poly(rng, 1)
        num, den = _random_poly(rng, 3) * common, _random_poly(rng, 2) * common
        r = ratfunc_simplify(num, den)
        assert ratfunc_simplify(r.num, r.den) == r
        for _ in range(10):
            point = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
            if den(point) != 0:
                assert r(point) == num(point) / den(point)


def test_pole_evaluation_raises():
    with pytest.raises(DomainError):
        (1 / RationalFunction.variable())(0)


def _to_sympy(p):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], X, domain="QQ")


def test_poly_gcd_agrees_with_sympy():
    rng = random.Random(13)
    for _ in range(100):
        common = _random_poly(rng, rng.randint(0, 2))
        a = common * _random_poly(rng, rng.randint(0, 3))
        b = common * _random_poly(rng, rng.randint(0, 3))
        expected = sympy.gcd(_to_sympy(a), _to_sympy(b))
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(expected.all_coeffs())]
        assert poly_gcd(a, b) == Polynomial(coeffs)
