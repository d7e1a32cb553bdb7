# algebra/logexpr.py
"""Expressions R0(n) + sum P_i(n) log R_i(n) and the derivative-descent positivity proof.

The family is closed under differentiation: d/dn [P log R] = P' log R + P R'/R,
so once every log coefficient is a polynomial, finitely many derivatives leave
a rational function whose sign at infinity is settled by Sturm counting.
Signs then climb back down the derivative chain through the exact limits at
+oo computed from formal expansions in 1/n and log n.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from sympy import factorint

from algebra.errors import DomainError, EventuallyNonpositiveError, InconclusiveError
from algebra.exact import Number, Polynomial, RationalFunction, as_rational
from algebra.interval import Interval
from algebra.roots import PositivityThreshold, largest_root_floor, real_positivity_threshold

logger = logging.getLogger(__name__)

DEFAULT_START_PRECISION = 64
DEFAULT_PRECISION_CAP = 4096
DEFAULT_EVAL_BUDGET = 24
# extra orders tried when describing how a vanishing limit is approached
_DECAY_PROBE_DEPTH = 12


def _rf(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction(value)


# ---------------------------------------------------------------------------
# exact constants q + sum c_p log p


@dataclass(frozen=True)
class LogConstant:
    rational: Fraction = Fraction(0)
    logs: Tuple[Tuple[int, Fraction], ...] = ()

    @classmethod
    def of(cls, q: Number) -> "LogConstant":
        return cls(as_rational(q))

    @classmethod
    def log_of(cls, q: Number) -> "LogConstant":
        q = as_rational(q)
        if q <= 0:
            raise DomainError(f"log of non-positive constant {q}")
        coeffs: Dict[int, Fraction] = {}
        for p, e in factorint(q.numerator).items():
            coeffs[int(p)] = coeffs.get(int(p), Fraction(0)) + e
        for p, e in factorint(q.denominator).items():
            coeffs[int(p)] = coeffs.get(int(p), Fraction(0)) - e
        return cls(Fraction(0), _pack(coeffs))

    @property
    def is_zero(self) -> bool:
        return self.rational == 0 and not self.logs

    @property
    def is_rational(self) -> bool:
        return not self.logs

    def __add__(self, other: "LogConstant") -> "LogConstant":
        coeffs = dict(self.logs)
        for p, c in other.logs:
            coeffs[p] = coeffs.get(p, Fraction(0)) + c
        return LogConstant(self.rational + other.rational, _pack(coeffs))

    def __neg__(self) -> "LogConstant":
        return self.scale(-1)

    def __sub__(self, other: "LogConstant") -> "LogConstant":
        return self + (-other)

    def scale(self, c: Number) -> "LogConstant":
        c = as_rational(c)
        return LogConstant(self.rational * c, _pack({p: v * c for p, v in self.logs}))

    def interval(self, precision_bits: int) -> Interval:
        total = Interval.exact(self.rational, precision_bits)
        for p, c in self.logs:
            total = total + Interval.exact(c, precision_bits) * Interval.exact(p, precision_bits).log()
        return total

    def sign(self, start_precision: int = DEFAULT_START_PRECISION) -> int:
        # logs of distinct primes are linearly independent over Q together with 1,
        # so a nonzero constant always separates from 0 at some precision
        if self.is_zero:
            return 0
        if self.is_rational:
            return 1 if self.rational > 0 else -1
        bits = start_precision
        while bits <= 1 << 16:
            s = self.interval(bits).sign()
            if s:
                return s
            bits *= 2
        raise InconclusiveError(f"could not separate {self} from zero")

    def __str__(self) -> str:
        parts: List[str] = []
        if self.rational != 0 or not self.logs:
            parts.append(str(self.rational))
        for p, c in self.logs:
            mag = abs(c)
            body = f"log({p})" if mag == 1 else f"{mag}*log({p})"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)


def _pack(coeffs: Dict[int, Fraction]) -> Tuple[Tuple[int, Fraction], ...]:
    return tuple(sorted((p, Fraction(c)) for p, c in coeffs.items() if c != 0))


# ---------------------------------------------------------------------------
# formal expansion at n -> +oo


def _laurent(r: RationalFunction, depth: int) -> Tuple[int, List[Fraction]]:
    """r(n) = n^d * sum_{k < depth} c_k n^-k + O(n^(d - depth))."""
    a = list(reversed(r.num.coeffs))
    b = list(reversed(r.den.coeffs))
    out: List[Fraction] = []
    for k in range(depth):
        acc = a[k] if k < len(a) else Fraction(0)
        for j in range(1, min(k, len(b) - 1) + 1):
            acc -= b[j] * out[k - j]
        out.append(acc / b[0])
    return r.degree, out


def _log1p_series(h: List[Fraction], depth: int) -> List[Fraction]:
    """Coefficients y_k of log(1 + sum_{k>=1} h_k x^k); y_0 = 0."""
    y = [Fraction(0)] * depth
    for k in range(1, depth):
        acc = k * h[k]
        for j in range(1, k):
            acc -= j * y[j] * h[k - j]
        y[k] = acc / k
    return y


Expansion = Dict[Tuple[int, int], LogConstant]


def _accumulate(out: Expansion, key: Tuple[int, int], value: LogConstant) -> None:
    if value.is_zero:
        return
    total = out.get(key, LogConstant()) + value
    if total.is_zero:
        out.pop(key, None)
    else:
        out[key] = total


@dataclass(frozen=True)
class AsymptoticClass:
    kind: str
    value: Optional[LogConstant]
    leading_power: Optional[int]
    leading_log_power: int
    leading_sign: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": None if self.value is None else str(self.value),
            "leading_power": self.leading_power,
            "leading_log_power": self.leading_log_power,
            "leading_sign": self.leading_sign,
        }

    def describe(self) -> str:
        if self.leading_power is None:
            return f"{self.kind} (no nonzero term found)"
        term = f"n^{self.leading_power}" + (" log n" if self.leading_log_power else "")
        sign = "+" if self.leading_sign > 0 else "-"
        return f"{self.kind}, leading {sign}{term}"


# ---------------------------------------------------------------------------
# the expression family


class LogExpr:
    __slots__ = ("rational_part", "log_terms")

    def __init__(self, rational_part=0, log_terms: Iterable[Tuple[object, object]] = ()):
        merged: Dict[RationalFunction, RationalFunction] = {}
        for coeff, arg in log_terms:
            coeff, arg = _rf(coeff), _rf(arg)
            if arg.is_zero:
                raise DomainError("log(0)")
            if arg.sign_at_infinity() < 0:
                raise DomainError(f"log argument {arg} is negative for all large n")
            if coeff.is_zero or arg == 1:
                continue
            merged[arg] = merged.get(arg, RationalFunction(0)) + coeff
        terms = [(c, a) for a, c in merged.items() if not c.is_zero]
        terms.sort(key=lambda t: str(t[1]))
        self.rational_part: RationalFunction = _rf(rational_part)
        self.log_terms: Tuple[Tuple[RationalFunction, RationalFunction], ...] = tuple(terms)

    @classmethod
    def log_of(cls, arg, coeff=1) -> "LogExpr":
        return cls(0, [(coeff, arg)])

    @property
    def is_rational(self) -> bool:
        return not self.log_terms

    @property
    def is_zero(self) -> bool:
        return self.is_rational and self.rational_part.is_zero

    @staticmethod
    def _coerce(other) -> Optional["LogExpr"]:
        if isinstance(other, LogExpr):
            return other
        if isinstance(other, (int, Fraction, Polynomial, RationalFunction)):
            return LogExpr(other)
        return None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        return (
            other is not None
            and self.rational_part == other.rational_part
            and self.log_terms == other.log_terms
        )

    def __hash__(self) -> int:
        return hash((self.rational_part, self.log_terms))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return LogExpr(self.rational_part + other.rational_part, self.log_terms + other.log_terms)

    __radd__ = __add__

    def __neg__(self) -> "LogExpr":
        return self.scale(-1)

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

    def scale(self, factor) -> "LogExpr":
        factor = _rf(factor)
        return LogExpr(self.rational_part * factor, [(c * factor, a) for c, a in self.log_terms])

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational:
            return self.scale(other.rational_part)
        if self.is_rational:
            return other.scale(self.rational_part)
        raise DomainError("product of two logarithmic expressions leaves the family")

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.is_rational:
            raise DomainError("division by a logarithmic expression leaves the family")
        return self.scale(1 / other.rational_part)

    def shift(self, k: Number) -> "LogExpr":
        return LogExpr(
            self.rational_part.shift(k), [(c.shift(k), a.shift(k)) for c, a in self.log_terms]
        )

    def derivative(self) -> "LogExpr":
        rational = self.rational_part.derivative()
        terms = []
        for c, a in self.log_terms:
            terms.append((c.derivative(), a))
            if not a.is_constant:
                rational = rational + c * a.derivative() / a
        return LogExpr(rational, terms)

    def descent_order_bound(self) -> int:
        """Number of derivatives after which no log term survives."""
        if self.is_rational:
            return 0
        degrees = []
        for c, _ in self.log_terms:
            if not c.is_polynomial:
                raise InconclusiveError(f"log coefficient {c} is not a polynomial")
            degrees.append(c.num.degree)
        return 1 + max(degrees)

    def domain_start(self, floor: int = 1) -> int:
        """Smallest N >= floor such that every piece is smooth and every log argument positive on [N, oo)."""
        start = floor
        pieces = [self.rational_part] + [c for c, _ in self.log_terms]
        for piece in pieces:
            top = largest_root_floor(piece.den)
            if top is not None:
                start = max(start, top + 1)
        for _, arg in self.log_terms:
            if not arg.is_constant:
                start = max(start, real_positivity_threshold(arg, floor).threshold)
        return start

    def eval_interval(self, n: Number, precision_bits: int) -> Interval:
        total = Interval.exact(self.rational_part(n), precision_bits)
        for c, a in self.log_terms:
            value = a(n)
            if value <= 0:
                raise DomainError(f"log argument {a} is {value} at n={n}")
            total = total + Interval.exact(c(n), precision_bits) * Interval.exact(value, precision_bits).log()
        return total

    def certified_sign(self, n: Number, start_precision: int, precision_cap: int) -> Tuple[int, Interval]:
        bits = start_precision
        while True:
            enclosure = self.eval_interval(n, bits)
            s = enclosure.sign()
            if s or bits >= precision_cap:
                return s, enclosure
            bits = min(bits * 2, precision_cap)

    def expansion(self, min_power: int) -> Expansion:
        """Exact coefficients of n^j (log n)^m, m in {0, 1}, for every j >= min_power."""
        out: Expansion = {}
        if not self.rational_part.is_zero:
            d, cs = _laurent(self.rational_part, max(self.rational_part.degree - min_power + 1, 0))
            for k, c in enumerate(cs):
                _accumulate(out, (d - k, 0), LogConstant.of(c))
        for coeff, arg in self.log_terms:
            dc = coeff.degree
            depth = dc - min_power + 1
            if depth <= 0:
                continue
            _, cs = _laurent(coeff, depth)
            delta, a = _laurent(arg, depth)
            if a[0] <= 0:
                raise DomainError(f"log argument {arg} is not positive at infinity")
            h = [x / a[0] for x in a]
            ys = _log1p_series(h, depth)
            base = LogConstant.log_of(a[0])
            for i, c in enumerate(cs):
                if c == 0:
                    continue
                power = dc - i
                _accumulate(out, (power, 0), base.scale(c))
                if delta:
                    _accumulate(out, (power, 1), LogConstant.of(c * delta))
                for k in range(1, depth - i):
                    if ys[k]:
                        _accumulate(out, (power - k, 0), LogConstant.of(c * ys[k]))
        return {key: v for key, v in out.items() if key[0] >= min_power}

    def __str__(self) -> str:
        parts = []
        if not self.rational_part.is_zero or not self.log_terms:
            parts.append(f"({self.rational_part})")
        for c, a in self.log_terms:
            parts.append(f"({c})*log({a})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LogExpr({self})"


def derivative(e: LogExpr) -> LogExpr:
    return e.derivative()


def eval_interval(e: LogExpr, n: Number, precision_bits: int) -> Interval:
    return e.eval_interval(n, precision_bits)


def limit_at_infinity(e: LogExpr) -> AsymptoticClass:
    terms = e.expansion(0)
    growing = sorted((k for k in terms if k[0] > 0 or k[1] > 0), reverse=True)
    if growing:
        key = growing[0]
        s = terms[key].sign()
        kind = "plus_infinity" if s > 0 else "minus_infinity"
        return AsymptoticClass(kind, None, key[0], key[1], s)
    value = terms.get((0, 0), LogConstant())
    if not value.is_zero:
        return AsymptoticClass("finite", value, 0, 0, value.sign())
    for depth in range(1, _DECAY_PROBE_DEPTH + 1):
        decaying = e.expansion(-depth)
        if decaying:
            key = max(decaying)
            return AsymptoticClass("finite", value, key[0], key[1], decaying[key].sign())
    return AsymptoticClass("finite", value, None, 0, 0)


# ---------------------------------------------------------------------------
# derivative descent


@dataclass(frozen=True)
class DescentStep:
    order: int
    limit: AsymptoticClass
    sign: int
    threshold: int
    rule: str
    witness_index: Optional[int] = None
    witness: Optional[Interval] = None

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "limit": self.limit.to_dict(),
            "sign": self.sign,
            "threshold": self.threshold,
            "rule": self.rule,
            "witness_index": self.witness_index,
            "witness": None if self.witness is None else list(self.witness.as_strings()),
        }


@dataclass(frozen=True)
class DescentProof:
    expression: str
    order: int
    rational_tail: RationalFunction
    tail_sign: int
    tail_threshold: PositivityThreshold
    domain_start: int
    chain: Tuple[DescentStep, ...] = field(default_factory=tuple)
    final_threshold: int = 1

    def to_dict(self) -> dict:
        return {
            "expression": self.expression,
            "order": self.order,
            "rational_tail": str(self.rational_tail),
            "tail_sign": self.tail_sign,
            "tail_threshold": self.tail_threshold.to_dict(),
            "domain_start": self.domain_start,
            "chain": [step.to_dict() for step in self.chain],
            "final_threshold": self.final_threshold,
        }


def _search_witness(
    level: LogExpr, want: int, start: int, budget: int, start_precision: int, precision_cap: int
) -> Tuple[int, Interval]:
    for t in range(budget):
        n = start + (1 << t) - 1
        s, enclosure = level.certified_sign(n, start_precision, precision_cap)
        if s == want:
            return n, enclosure
    raise InconclusiveError(
        f"no certified {'positive' if want > 0 else 'negative'} value of {level} "
        f"within {budget} evaluations from n={start}"
    )


def _propagate(
    level: LogExpr,
    order: int,
    sign_above: int,
    start: int,
    budget: int,
    start_precision: int,
    precision_cap: int,
) -> DescentStep:
    lim = limit_at_infinity(level)
    # level is strictly monotone on [start, oo) in the direction sign_above
    opposite = "minus_infinity" if sign_above > 0 else "plus_infinity"
    if lim.kind == opposite:
        raise DomainError(f"inconsistent descent: monotone level {level} tends to {lim.kind}")
    if lim.kind == "finite" and lim.value.sign() * sign_above <= 0:
        rule = "A" if lim.value.is_zero else "A-extension"
        if rule == "A-extension":
            logger.warning("finite nonzero limit %s at derivative order %d handled symmetrically", lim.value, order)
        return DescentStep(order, lim, -sign_above, start, rule)
    n0, witness = _search_witness(level, sign_above, start, budget, start_precision, precision_cap)
    return DescentStep(order, lim, sign_above, n0, "B", n0, witness)


def prove_eventually_positive(
    e: LogExpr,
    eval_budget: int = DEFAULT_EVAL_BUDGET,
    floor: int = 1,
    start_precision: int = DEFAULT_START_PRECISION,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> DescentProof:
    """Certify e(n) > 0 for every real n >= final_threshold."""
    if e.is_zero:
        raise DomainError("expression is identically zero")
    bound = e.descent_order_bound()
    levels = [e]
    while not levels[-1].is_rational:
        if len(levels) > bound + 1:
            raise InconclusiveError(f"derivatives of {e} did not become rational")
        levels.append(levels[-1].derivative())
    order = len(levels) - 1
    tail = levels[-1].rational_part
    domain = e.domain_start(floor)
    chain: List[DescentStep] = []

    if tail.is_zero:
        top = order - 1
        while True:
            if top < 0:
                raise DomainError("expression is identically zero")
            lim = limit_at_infinity(levels[top])
            if not lim.value.is_zero:
                break
            top -= 1
        sign = lim.value.sign()
        threshold = max(floor, domain)
        tail_threshold = PositivityThreshold(threshold, "rational tail vanishes identically", threshold, threshold)
        chain.append(DescentStep(top, lim, sign, threshold, "constant"))
        tail_sign = 0
        below = top
    else:
        tail_sign = tail.sign_at_infinity()
        tail_threshold = real_positivity_threshold(tail if tail_sign > 0 else -tail, floor)
        sign = tail_sign
        threshold = max(floor, domain, tail_threshold.threshold)
        below = order

    for i in range(below - 1, -1, -1):
        step = _propagate(levels[i], i, sign, threshold, eval_budget, start_precision, precision_cap)
        chain.append(step)
        sign, threshold = step.sign, step.threshold

    if sign < 0:
        raise EventuallyNonpositiveError(f"{e} is negative for all n >= {threshold}")
    logger.debug("descent of order %d proves positivity from %d", order, threshold)
    return DescentProof(
        expression=str(e),
        order=order,
        rational_tail=tail,
        tail_sign=tail_sign,
        tail_threshold=tail_threshold,
        domain_start=domain,
        chain=tuple(chain),
        final_threshold=threshold,
    )
