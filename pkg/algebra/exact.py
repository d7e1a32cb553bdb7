# algebra/exact.py
"""Exact rationals, dense univariate polynomials in n, canonical rational functions.

Rationals are ``fractions.Fraction``. Polynomials store coefficients by
ascending degree and are immutable once built. ``RationalFunction`` always
holds the canonical form: coprime numerator/denominator with integer
coefficients whose combined content is 1 and a positive leading denominator
coefficient, so structural equality is value equality.
"""
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Tuple, Union

from algebra.errors import DomainError

Rational = Fraction
Number = Union[int, Fraction]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._c: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def variable(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls([c])

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def __call__(self, x: Number) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        return other is not None and self._c == other._c

    def __hash__(self) -> int:
        return hash(("poly", self._c))

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self._c)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        size = max(len(self._c), len(other._c))
        a = self._c + (Fraction(0),) * (size - len(self._c))
        b = other._c + (Fraction(0),) * (size - len(other._c))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise DomainError("negative polynomial power")
        result, base = Polynomial([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> "Polynomial":
        c = as_rational(c)
        return Polynomial(c * x for x in self._c)

    def divmod(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if other.is_zero:
            raise DomainError("division by the zero polynomial")
        rem = list(self._c)
        d = other.degree
        lc = other.leading
        quot = [Fraction(0)] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1 - d, -1, -1):
            c = rem[k + d] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other._c):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:d])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def pseudo_remainder(self, other: "Polynomial") -> "Polynomial":
        delta = self.degree - other.degree
        if delta < 0:
            return self
        return self.scale(other.leading ** (delta + 1)) % other

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self._c) if i > 0)

    def shift(self, k: Number) -> "Polynomial":
        """Return p(n + k)."""
        step = Polynomial([k, 1])
        acc = Polynomial()
        for c in reversed(self._c):
            acc = acc * step + c
        return acc

    def primitive(self) -> Tuple[Fraction, "Polynomial"]:
        """Split into (positive content, integer primitive part)."""
        if self.is_zero:
            return Fraction(0), self
        den = lcm(*(c.denominator for c in self._c))
        ints = [int(c * den) for c in self._c]
        g = gcd(*ints)
        return Fraction(g, den), Polynomial(i // g for i in ints)

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = _format_coeff(mag)
            else:
                mono = "n" if k == 1 else f"n^{k}"
                body = mono if mag == 1 else f"{_format_coeff(mag)}*{mono}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd via the primitive polynomial remainder sequence."""
    if a.is_zero and b.is_zero:
        raise DomainError("gcd of two zero polynomials is undefined")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    f, g = a.primitive()[1], b.primitive()[1]
    if f.degree < g.degree:
        f, g = g, f
    while not g.is_zero:
        r = f.pseudo_remainder(g)
        f, g = g, r.primitive()[1]
    return f.monic()


def poly_eval(p: Polynomial, x: Number) -> Fraction:
    return p(x)


def _as_poly(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial([value])
    raise TypeError(f"cannot interpret {value!r} as a polynomial")


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        den = Polynomial([1]) if den is None else _as_poly(den)
        if den.is_zero:
            raise DomainError("zero denominator polynomial")
        if num.is_zero:
            num, den = Polynomial(), Polynomial([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            both = num.coeffs + den.coeffs
            scale = lcm(*(c.denominator for c in both))
            content = gcd(*(int(c * scale) for c in both))
            factor = Fraction(scale, content)
            if den.leading < 0:
                factor = -factor
            num, den = num.scale(factor), den.scale(factor)
        self.num: Polynomial = num
        self.den: Polynomial = den

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls(Polynomial.variable())

    @classmethod
    def constant(cls, c: Number) -> "RationalFunction":
        return cls(Polynomial([c]))

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return RationalFunction(other)
        return None

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise DomainError(f"{self} is not constant")
        return self.num.leading / self.den.leading

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial:
            raise DomainError(f"{self} is not a polynomial")
        return self.num.scale(1 / self.den.leading)

    @property
    def degree(self) -> int:
        """Degree at infinity: deg num - deg den."""
        return self.num.degree - self.den.degree

    def leading_ratio(self) -> Fraction:
        return self.num.leading / self.den.leading

    def sign_at_infinity(self) -> int:
        if self.is_zero:
            return 0
        return 1 if self.num.leading > 0 else -1

    def __call__(self, x: Number) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise DomainError(f"pole of {self} at n={x}")
        return self.num(x) / d

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        return other is not None and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("ratfunc", self.num.coeffs, self.den.coeffs))

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DomainError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            if self.is_zero:
                raise DomainError("negative power of the zero rational function")
            return RationalFunction(self.den ** (-k), self.num ** (-k))
        return RationalFunction(self.num ** k, self.den ** k)

    def shift(self, k: Number) -> "RationalFunction":
        """Return r(n + k)."""
        return RationalFunction(self.num.shift(k), self.den.shift(k))

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __str__(self) -> str:
        if self.den == Polynomial([1]):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def ratfunc_simplify(num: Polynomial, den: Polynomial) -> RationalFunction:
    return RationalFunction(num, den)
