# algebra/interval.py
"""Outward-rounded intervals with exact dyadic endpoints.

Field operations are carried out on the exact ``Fraction`` endpoints and then
rounded outward to ``precision_bits`` significant bits; ``log`` and ``exp``
go through ``mpmath.iv`` at the same working precision.
"""
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Tuple, Union

from mpmath import iv

from algebra.errors import DomainError
from algebra.exact import as_rational

MIN_PRECISION = 16

_iv_lock = threading.RLock()


@contextmanager
def working_precision(bits: int) -> Iterator[None]:
    """Hold the global mpmath interval context at ``bits`` for the block."""
    with _iv_lock:
        saved = iv.prec
        iv.prec = bits
        try:
            yield
        finally:
            iv.prec = saved


def _round(q: Fraction, bits: int, upward: bool) -> Fraction:
    if q == 0:
        return q
    bits = max(bits, MIN_PRECISION)
    num, den = q.numerator, q.denominator
    scale = bits - (abs(num).bit_length() - den.bit_length())
    if scale >= 0:
        top, bottom = num << scale, den
    else:
        top, bottom = num, den << -scale
    m = -((-top) // bottom) if upward else top // bottom
    return Fraction(m, 1 << scale) if scale >= 0 else Fraction(m << -scale)


def _decode(raw) -> Fraction:
    sign, man, exp, _ = raw
    man = int(man)
    if man == 0:
        if exp != 0:
            raise DomainError("interval endpoint is infinite or undefined")
        return Fraction(0)
    value = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -value if sign else value


def _enclose(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


IntervalLike = Union["Interval", int, Fraction]


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    precision_bits: int = 53

    def __post_init__(self):
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value, precision_bits: int = 53) -> "Interval":
        q = as_rational(value)
        return cls(q, q, precision_bits)

    @classmethod
    def rounded(cls, lo: Fraction, hi: Fraction, precision_bits: int) -> "Interval":
        return cls(_round(lo, precision_bits, False), _round(hi, precision_bits, True), precision_bits)

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.exact(other, self.precision_bits)

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def sign(self) -> int:
        """+1 or -1 when certified, 0 when the interval touches zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def contains(self, value) -> bool:
        if isinstance(value, Interval):
            return self.lo <= value.lo and value.hi <= self.hi
        q = as_rational(value)
        return self.lo <= q <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise DomainError(f"disjoint enclosures {self} and {other}")
        return Interval(lo, hi, max(self.precision_bits, other.precision_bits))

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.precision_bits)

    def __add__(self, other: IntervalLike) -> "Interval":
        o = self._coerce(other)
        bits = max(self.precision_bits, o.precision_bits)
        return Interval.rounded(self.lo + o.lo, self.hi + o.hi, bits)

    __radd__ = __add__

    def __sub__(self, other: IntervalLike) -> "Interval":
        return self + (-self._coerce(other))

    def __rsub__(self, other: IntervalLike) -> "Interval":
        return self._coerce(other) + (-self)

    def __mul__(self, other: IntervalLike) -> "Interval":
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        bits = max(self.precision_bits, o.precision_bits)
        return Interval.rounded(min(products), max(products), bits)

    __rmul__ = __mul__

    def __truediv__(self, other: IntervalLike) -> "Interval":
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise DomainError(f"division by an interval containing zero: {o}")
        bits = max(self.precision_bits, o.precision_bits)
        inv = Interval.rounded(1 / o.hi, 1 / o.lo, bits)
        return self * inv

    def __rtruediv__(self, other: IntervalLike) -> "Interval":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "Interval":
        if k < 0:
            return Interval.exact(1, self.precision_bits) / (self ** (-k))
        result = Interval.exact(1, self.precision_bits)
        for _ in range(k):
            result = result * self
        return result

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval.rounded(self.lo ** 2, self.hi ** 2, self.precision_bits)
        if self.hi <= 0:
            return Interval.rounded(self.hi ** 2, self.lo ** 2, self.precision_bits)
        return Interval.rounded(Fraction(0), max(self.lo ** 2, self.hi ** 2), self.precision_bits)

    def _transcendental(self, fn) -> "Interval":
        with working_precision(self.precision_bits):
            low = fn(_enclose(self.lo))
            high = low if self.is_degenerate else fn(_enclose(self.hi))
            return Interval(_decode(low._mpi_[0]), _decode(high._mpi_[1]), self.precision_bits)

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise DomainError(f"logarithm of a non-positive interval {self}")
        if self.is_degenerate and self.lo == 1:
            return Interval.exact(0, self.precision_bits)
        return self._transcendental(iv.log)

    def exp(self) -> "Interval":
        if self.is_degenerate and self.lo == 0:
            return Interval.exact(1, self.precision_bits)
        return self._transcendental(iv.exp)

    def with_precision(self, bits: int) -> "Interval":
        return Interval(self.lo, self.hi, bits)

    def as_strings(self) -> Tuple[str, str]:
        return str(self.lo), str(self.hi)

    def __str__(self) -> str:
        return f"[{_approx(self.lo)}, {_approx(self.hi)}]@{self.precision_bits}"


def _approx(q: Fraction) -> str:
    try:
        return f"{float(q):.17g}"
    except OverflowError:
        return f"{'-' if q < 0 else ''}2^{abs(q.numerator).bit_length() - q.denominator.bit_length()}"
