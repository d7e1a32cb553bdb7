# services/inequality_service.py
"""Direct checks of the Turán-type inequalities at a single index.

Values come either from an exact table (index -> rational) or from an
enclosure source ``(index, precision_bits) -> Interval``; the latter is
re-evaluated at doubling precision until the sign of the margin is settled
or the precision cap is reached.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Mapping, Union

from algebra.errors import DomainError
from algebra.exact import RationalFunction, as_rational
from algebra.interval import Interval

logger = logging.getLogger(__name__)

DEFAULT_START_PRECISION = 64
DEFAULT_PRECISION_CAP = 4096

LOG_CONCAVE = "log_concave"
HIGHER_TURAN = "higher_turan"
LAGUERRE2 = "laguerre2"

EnclosureSource = Callable[[int, int], Interval]
ValueSource = Union[Mapping[int, object], EnclosureSource]


class CheckStatus(str, Enum):
    HOLDS = "holds"
    HOLDS_WITH_EQUALITY = "holds_with_equality"
    FAILS = "fails"
    UNDECIDED = "undecided"

    @property
    def acceptable(self) -> bool:
        return self in (CheckStatus.HOLDS, CheckStatus.HOLDS_WITH_EQUALITY)


@dataclass(frozen=True)
class CheckOutcome:
    index: int
    status: CheckStatus
    margin: Interval

    def to_dict(self) -> Dict:
        lo, hi = self.margin.as_strings()
        return {
            "index": self.index,
            "status": self.status.value,
            "margin": [lo, hi],
            "precision": self.margin.precision_bits,
        }


def _classify(margin: Interval) -> CheckStatus:
    if margin.lo > 0:
        return CheckStatus.HOLDS
    if margin.hi < 0:
        return CheckStatus.FAILS
    if margin.is_degenerate:
        return CheckStatus.HOLDS_WITH_EQUALITY
    return CheckStatus.UNDECIDED


def _sq(x):
    return x.square() if isinstance(x, Interval) else x * x


# -- the quantities, written once for rationals and intervals alike ----------

def log_concave_margin(a: Callable[[int], object], n: int):
    return _sq(a(n)) - a(n - 1) * a(n + 1)


def higher_turan_margin(a: Callable[[int], object], n: int):
    am, a0, a1, a2 = a(n - 1), a(n), a(n + 1), a(n + 2)
    left = _sq(a0) - am * a1
    right = _sq(a1) - a0 * a2
    cross = a0 * a1 - am * a2
    return 4 * left * right - _sq(cross)


def laguerre_margin(a: Callable[[int], object], n: int, m: int):
    if m == 2:
        return 3 * _sq(a(n + 2)) - 4 * a(n + 1) * a(n + 3) + a(n) * a(n + 4)
    return laguerre_sum(a, n, m)


def laguerre_sum(a: Callable[[int], object], n: int, m: int):
    """Binomial-weighted form (1/2) sum_k (-1)^(k+m) C(2m, k) a_{n+k} a_{n+2m-k}."""
    total = 0
    for k in range(2 * m + 1):
        sign = 1 if (k + m) % 2 == 0 else -1
        total = total + sign * comb(2 * m, k) * a(n + k) * a(n + 2 * m - k)
    return total * Fraction(1, 2)


# -- evaluation ------------------------------------------------------------

def _exact_lookup(values: Mapping[int, object]) -> Callable[[int], object]:
    def get(index: int):
        try:
            value = values[index]
        except KeyError:
            raise DomainError(f"missing value at index {index}") from None
        return value if isinstance(value, Interval) else as_rational(value)

    return get


def evaluate(
    quantity: Callable[[Callable[[int], object]], object],
    values: ValueSource,
    index: int,
    start_precision: int = DEFAULT_START_PRECISION,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> CheckOutcome:
    """Evaluate ``quantity`` on the value source and grade the sign of the result."""
    if isinstance(values, Mapping):
        margin = quantity(_exact_lookup(values))
        if not isinstance(margin, Interval):
            margin = Interval.exact(margin)
        return CheckOutcome(index, _classify(margin), margin)

    bits = min(start_precision, precision_cap)
    while True:
        margin = quantity(lambda i, b=bits: values(i, b))
        if not isinstance(margin, Interval):
            margin = Interval.exact(margin, bits)
        status = _classify(margin)
        if status is not CheckStatus.UNDECIDED or bits >= precision_cap:
            if status is CheckStatus.UNDECIDED:
                logger.info("index %d undecided at the %d-bit cap: %s", index, bits, margin)
            return CheckOutcome(index, status, margin)
        bits = min(bits * 2, precision_cap)


def check_log_concave(values: ValueSource, n: int, **precision) -> CheckOutcome:
    return evaluate(lambda a: log_concave_margin(a, n), values, n, **precision)


def check_higher_turan(values: ValueSource, n: int, **precision) -> CheckOutcome:
    return evaluate(lambda a: higher_turan_margin(a, n), values, n, **precision)


def check_laguerre(values: ValueSource, m: int, n: int, **precision) -> CheckOutcome:
    if m < 1:
        raise DomainError(f"Laguerre order must be at least 1, got {m}")
    return evaluate(lambda a: laguerre_margin(a, n, m), values, n, **precision)


def check_property(values: ValueSource, prop: str, n: int, **precision) -> CheckOutcome:
    if prop == HIGHER_TURAN:
        return check_higher_turan(values, n, **precision)
    if prop == LAGUERRE2:
        return check_laguerre(values, 2, n, **precision)
    if prop == LOG_CONCAVE:
        return check_log_concave(values, n, **precision)
    raise DomainError(f"unknown property {prop!r}")


def check_range(values: ValueSource, prop: str, lo: int, hi: int, **precision) -> List[CheckOutcome]:
    """Outcomes at every index in [lo, hi]."""
    return [check_property(values, prop, n, **precision) for n in range(lo, hi + 1)]


def turan_quartic(x: RationalFunction, y: RationalFunction) -> RationalFunction:
    """t(x, y) = 4(1 - x)(1 - y) - (1 - xy)^2."""
    x, y = RationalFunction._coerce(x), RationalFunction._coerce(y)
    return 4 * (1 - x) * (1 - y) - (1 - x * y) ** 2
