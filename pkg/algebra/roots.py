# algebra/roots.py
"""Sturm-chain root counting and "positive for every n >= N" thresholds."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional, Tuple

from algebra.errors import DomainError, EventuallyNonpositiveError, RootAtEndpointError
from algebra.exact import Number, Polynomial, RationalFunction, as_rational

logger = logging.getLogger(__name__)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class SturmChain:
    polys: Tuple[Polynomial, ...]

    @classmethod
    def of(cls, p: Polynomial) -> "SturmChain":
        if p.is_zero:
            raise DomainError("Sturm chain of the zero polynomial")
        chain = [p, p.derivative()]
        while not chain[-1].is_zero:
            rem = -(chain[-2] % chain[-1])
            # positive rescaling keeps every sign intact
            chain.append(rem.primitive()[1] if not rem.is_zero else rem)
        chain.pop()
        return cls(tuple(chain))

    def variations(self, x: Number) -> int:
        return _count_changes(_sign(q(x)) for q in self.polys)

    def variations_at_infinity(self, positive: bool = True) -> int:
        signs = []
        for q in self.polys:
            s = _sign(q.leading)
            if not positive and q.degree % 2 == 1:
                s = -s
            signs.append(s)
        return _count_changes(signs)


def _count_changes(signs) -> int:
    changes, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            changes += 1
        last = s
    return changes


def count_real_roots(p: Polynomial, lo: Number, hi: Number) -> int:
    """Number of distinct real roots of p in the open interval (lo, hi)."""
    lo, hi = as_rational(lo), as_rational(hi)
    if p.is_zero:
        raise DomainError("cannot count roots of the zero polynomial")
    if lo >= hi:
        raise DomainError(f"empty interval ({lo}, {hi})")
    for end in (lo, hi):
        if p(end) == 0:
            raise RootAtEndpointError(end)
    chain = SturmChain.of(p)
    return chain.variations(lo) - chain.variations(hi)


def count_roots_above(p: Polynomial, x: Number) -> int:
    x = as_rational(x)
    if p(x) == 0:
        raise RootAtEndpointError(x)
    chain = SturmChain.of(p)
    return chain.variations(x) - chain.variations_at_infinity(True)


def largest_root_upper_bound(p: Polynomial) -> Fraction:
    """Cauchy bound: every real root lies strictly below 1 + max |a_i / a_d|."""
    if p.is_zero or p.degree < 1:
        raise DomainError(f"constant polynomial {p} has no root bound")
    lc = p.leading
    return 1 + max(abs(c / lc) for c in p.coeffs[:-1])


def largest_root_floor(p: Polynomial) -> Optional[int]:
    """floor of the largest real root of p, or None when p has no real root."""
    if p.degree < 1:
        return None
    bound = largest_root_upper_bound(p)
    chain = SturmChain.of(p)
    at_top = chain.variations_at_infinity(True)

    def has_root_at_or_above(m: int) -> bool:
        if p(m) == 0:
            return True
        return chain.variations(m) - at_top > 0

    lo, hi = floor(-bound), ceil(bound)
    if not has_root_at_or_above(lo):
        return None
    # invariant: predicate true at lo, false at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if has_root_at_or_above(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class PositivityThreshold:
    threshold: int
    witness: str
    checked_floor: int
    root_bound: int

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "witness": self.witness,
            "checked_floor": self.checked_floor,
            "root_bound": self.root_bound,
        }


def _root_clearance(r: RationalFunction, floor_: int) -> Tuple[int, str]:
    """Smallest integer M >= floor_ above every real root of num and den."""
    clearance, notes = floor_, []
    for label, poly in (("numerator", r.num), ("denominator", r.den)):
        top = largest_root_floor(poly)
        if top is None:
            notes.append(f"{label} has no real root")
            continue
        notes.append(f"largest real root of {label} in [{top}, {top + 1})")
        clearance = max(clearance, top + 1)
    return clearance, "; ".join(notes)


def _require_positive_at_infinity(r: RationalFunction) -> None:
    if r.is_zero:
        raise DomainError("positivity threshold of the zero function")
    if r.sign_at_infinity() < 0:
        raise EventuallyNonpositiveError(f"{r} is negative for all large n")


def positivity_threshold(r: RationalFunction, floor: int = 1) -> PositivityThreshold:
    """Minimal integer N >= floor with r(n) > 0 at every integer n >= N."""
    _require_positive_at_infinity(r)
    clearance, witness = _root_clearance(r, floor)
    n = clearance
    while n - 1 >= floor:
        m = n - 1
        if r.den(m) == 0 or r.num(m) / r.den(m) <= 0:
            break
        n = m
    logger.debug("positivity threshold %d for %s (root clearance %d)", n, r, clearance)
    return PositivityThreshold(threshold=n, witness=witness, checked_floor=n, root_bound=clearance)


def real_positivity_threshold(r: RationalFunction, floor: int = 1) -> PositivityThreshold:
    """Smallest integer N >= floor with r > 0 and pole free on the real ray [N, oo)."""
    _require_positive_at_infinity(r)
    clearance, witness = _root_clearance(r, floor)
    return PositivityThreshold(
        threshold=clearance, witness=witness, checked_floor=clearance, root_bound=clearance
    )
