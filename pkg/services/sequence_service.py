# services/sequence_service.py
import logging
import threading
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from algebra.errors import DomainError, SingularRecurrenceError, ZeroTermError
from algebra.exact import Polynomial, as_rational
from algebra.interval import Interval

logger = logging.getLogger(__name__)

# enclosures below this precision are not refined further
MIN_REFINE_PRECISION = 32
# enclosures kept per precision before that precision's table is dropped
MAX_CACHED_ENCLOSURES = 4096

ROOT = "root"
RATIO = "ratio"
TARGETS = (ROOT, RATIO)


class PRecursiveSequence:
    """Sequence with sum_i p_i(n) a_{n+i} = 0 and exact initial values a_start, a_start+1, ...

    Terms are generated on demand and kept in an append-only table; a
    reader either sees a published prefix or waits on the writer lock.
    """

    def __init__(
        self,
        name: str,
        coeffs: Sequence[Polynomial],
        initial_values: Sequence,
        start: int = 0,
        positivity_from: Optional[int] = None,
        oeis_id: Optional[str] = None,
    ):
        if len(coeffs) < 2:
            raise DomainError("a recurrence needs at least two coefficients")
        if coeffs[-1].is_zero:
            raise DomainError("leading recurrence coefficient is the zero polynomial")
        self.name = name
        self.coeffs: Tuple[Polynomial, ...] = tuple(coeffs)
        self.start = start
        self.initial_values: Tuple[Fraction, ...] = tuple(as_rational(v) for v in initial_values)
        if len(self.initial_values) < self.order:
            raise DomainError(f"order {self.order} needs at least {self.order} initial values")
        self.positivity_from = start if positivity_from is None else positivity_from
        self.oeis_id = oeis_id
        self._terms: List[Fraction] = list(self.initial_values)
        self._lock = threading.Lock()
        self._enclosures: Dict[int, Dict[Tuple, Interval]] = {}
        self._enclosure_lock = threading.Lock()

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self) -> str:
        return f"PRecursiveSequence({self.name!r}, order={self.order})"

    # -- exact terms ---------------------------------------------------------

    def _extend_to(self, index: int) -> None:
        d = self.order
        with self._lock:
            terms = self._terms
            while self.start + len(terms) <= index:
                m = self.start + len(terms)
                base = m - d
                lead = self.coeffs[d](base)
                if lead == 0:
                    raise SingularRecurrenceError(base)
                window = terms[base - self.start:]
                acc = sum((p(base) * a for p, a in zip(self.coeffs[:-1], window)), Fraction(0))
                terms.append(-acc / lead)

    def term(self, n: int) -> Fraction:
        if n < self.start:
            raise DomainError(f"index {n} precedes the first index {self.start}")
        terms = self._terms
        if n - self.start < len(terms):
            return terms[n - self.start]
        self._extend_to(n)
        return self._terms[n - self.start]

    def terms(self, lo: int, hi: int) -> List[Fraction]:
        """Terms a_lo .. a_hi inclusive."""
        if hi >= lo:
            self.term(hi)
        return [self.term(n) for n in range(lo, hi + 1)]

    def residual(self, n: int) -> Fraction:
        return sum((p(n) * self.term(n + i) for i, p in enumerate(self.coeffs)), Fraction(0))

    def ratio(self, n: int) -> Fraction:
        a = self.term(n)
        if a == 0:
            raise ZeroTermError(n)
        return self.term(n + 1) / a

    def check_positivity(self, upto: int) -> None:
        for n in range(self.positivity_from, upto + 1):
            if self.term(n) <= 0:
                raise DomainError(f"term a_{n} = {self.term(n)} is not positive")

    def _positive_term(self, n: int) -> Fraction:
        a = self.term(n)
        if a <= 0:
            raise DomainError(f"term a_{n} = {a} of {self.name} is not positive")
        return a

    # -- enclosures ------------------------------------------------------------

    def _refined(self, key: Tuple, precision_bits: int, compute: Callable[[int], Interval]) -> Interval:
        cached = self._enclosures.get(precision_bits, {}).get(key)
        if cached is not None:
            return cached
        value = compute(precision_bits)
        if precision_bits // 2 >= MIN_REFINE_PRECISION:
            value = value.intersect(self._refined(key, precision_bits // 2, compute))
        with self._enclosure_lock:
            table = self._enclosures.setdefault(precision_bits, {})
            if len(table) >= MAX_CACHED_ENCLOSURES:
                logger.debug("dropping %d cached enclosures at %d bits for %s", len(table), precision_bits, self.name)
                table.clear()
            table.setdefault(key, value)
        return value

    def log_term(self, n: int, precision_bits: int) -> Interval:
        a = self._positive_term(n)
        return self._refined(("log", n), precision_bits, lambda bits: Interval.exact(a, bits).log())

    def u_term(self, n: int, precision_bits: int) -> Interval:
        """Enclosure of a_{n-1}^(1/(n-1)) a_{n+1}^(1/(n+1)) / a_n^(2/n)."""
        if n - 1 < max(self.positivity_from, 1):
            raise DomainError(f"u_{n} needs n - 1 >= max(positivity_from, 1)")

        def compute(bits: int) -> Interval:
            exponent = (
                self.log_term(n - 1, bits) / (n - 1)
                + self.log_term(n + 1, bits) / (n + 1)
                - self.log_term(n, bits) * Fraction(2, n)
            )
            return exponent.exp()

        return self._refined(("u", n), precision_bits, compute)

    def derived_term(self, target: str, n: int, precision_bits: int) -> Interval:
        """x_n = a_n^(1/n)/n! (root) or y_n = a_{n+1}^(1/(n+1))/(a_n^(1/n) n!) (ratio)."""
        if n < 1:
            raise DomainError("derived sequences start at n = 1")
        if target == ROOT:
            a = self.term(n)
            if a < 0:
                raise DomainError(f"term a_{n} = {a} is negative")
            if a == 0:
                return Interval.exact(0, precision_bits)
            if n == 1:
                return Interval.exact(a, precision_bits)

            def compute(bits: int) -> Interval:
                return (self.log_term(n, bits) / n).exp() / factorial(n)

        elif target == RATIO:
            top, bottom = self.term(n + 1), self.term(n)
            if bottom <= 0 or top < 0:
                raise DomainError(f"ratio target needs a_{n} > 0 and a_{n + 1} >= 0")
            if top == 0:
                return Interval.exact(0, precision_bits)

            def compute(bits: int) -> Interval:
                exponent = self.log_term(n + 1, bits) / (n + 1) - self.log_term(n, bits) / n
                return exponent.exp() / factorial(n)

        else:
            raise DomainError(f"unknown target {target!r}")
        return self._refined((target, n), precision_bits, compute)

    def interval_values(self, target: str) -> Callable[[int, int], Interval]:
        return lambda index, precision_bits: self.derived_term(target, index, precision_bits)


def term(seq: PRecursiveSequence, n: int) -> Fraction:
    return seq.term(n)


def ratio(seq: PRecursiveSequence, n: int) -> Fraction:
    return seq.ratio(n)


def u_term(seq: PRecursiveSequence, n: int, precision_bits: int) -> Interval:
    return seq.u_term(n, precision_bits)


def derived_term(seq: PRecursiveSequence, target: str, n: int, precision_bits: int) -> Interval:
    return seq.derived_term(target, n, precision_bits)
