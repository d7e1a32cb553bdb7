# services/spec_service.py
"""Expression grammar and sequence spec loading.

Grammar (precedence low to high): ``+ -`` (left), ``* /`` (left), unary ``-``,
``^`` (right, integer exponent), atoms: integer or decimal literals, the
variable ``n``, ``log(expr)`` and parenthesised expressions.
"""
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

from pydantic import ValidationError

from algebra.errors import DomainError, ParseError, SingularRecurrenceError, SpecValidationError
from algebra.exact import Polynomial, RationalFunction
from algebra.logexpr import LogExpr
from config.settings import Settings
from models.spec import SPEC_SCHEMA, SequenceSpecDocument
from services.certify_service import CandidateBounds
from services.sequence_service import PRecursiveSequence

logger = logging.getLogger(__name__)

# groups of increasing binding power
OPERATORS = [
    [("+", "left"), ("-", "left")],
    [("*", "left"), ("/", "left")],
    [("neg", "prefix")],
    [("^", "right")],
]
OPERATOR_PREC = {name: idx for idx, group in enumerate(OPERATORS) for name, _ in group}
OPERATOR_ASSOC = {name: assoc for group in OPERATORS for name, assoc in group}
BINARY = {"+", "-", "*", "/", "^"}


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "(", ")"
    value: object
    position: int


@dataclass(frozen=True)
class Node:
    op: str  # "num", "n", "neg", "+", "-", "*", "/", "^", "log"
    args: Tuple
    position: int

    def to_tuple(self):
        """Plain nested-tuple form, handy for golden comparisons."""
        if self.op == "num":
            return ("num", self.args[0])
        if self.op == "n":
            return ("n",)
        return (self.op,) + tuple(a.to_tuple() for a in self.args)


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    idx = 0
    while idx < len(source):
        c = source[idx]
        if c.isspace():
            idx += 1
            continue
        if c.isdigit() or (c == "." and idx + 1 < len(source) and source[idx + 1].isdigit()):
            begin = idx
            while idx < len(source) and (source[idx].isdigit() or source[idx] == "."):
                idx += 1
            text = source[begin:idx]
            if text.count(".") > 1:
                raise ParseError(f"malformed number {text!r}", begin)
            tokens.append(Token("num", Fraction(text), begin))
            continue
        if c.isalpha() or c == "_":
            begin = idx
            while idx < len(source) and (source[idx].isalnum() or source[idx] == "_"):
                idx += 1
            tokens.append(Token("name", source[begin:idx], begin))
            continue
        if c in BINARY:
            tokens.append(Token("op", c, idx))
            idx += 1
            continue
        if c in "()":
            tokens.append(Token(c, c, idx))
            idx += 1
            continue
        raise ParseError(f"unexpected character {c!r}", idx)
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of input", len(self.source))
        self.pos += 1
        return token

    def expect(self, kind: str) -> Token:
        token = self.peek()
        if token is None or token.kind != kind:
            where = len(self.source) if token is None else token.position
            raise ParseError(f"expected {kind!r}", where)
        return self.advance()

    def atom(self) -> Node:
        token = self.advance()
        if token.kind == "op" and token.value == "-":
            operand = self.expression(OPERATOR_PREC["^"])
            return Node("neg", (operand,), token.position)
        if token.kind == "num":
            return Node("num", (token.value,), token.position)
        if token.kind == "name":
            if token.value == "n":
                return Node("n", (), token.position)
            if token.value == "log":
                self.expect("(")
                inner = self.expression(0)
                self.expect(")")
                return Node("log", (inner,), token.position)
            raise ParseError(f"unknown name {token.value!r}", token.position)
        if token.kind == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {token.value!r}", token.position)

    def expression(self, min_prec: int) -> Node:
        lhs = self.atom()
        while True:
            token = self.peek()
            if token is None or token.kind != "op":
                return lhs
            prec = OPERATOR_PREC[token.value]
            if prec < min_prec:
                return lhs
            self.advance()
            next_prec = prec + 1 if OPERATOR_ASSOC[token.value] == "left" else prec
            rhs = self.expression(next_prec)
            if token.value == "^" and _integer_literal(rhs) is None:
                raise ParseError("exponent must be an integer literal", rhs.position)
            lhs = Node(token.value, (lhs, rhs), token.position)

    def parse(self) -> Node:
        if not self.tokens:
            raise ParseError("empty expression", 0)
        node = self.expression(0)
        leftover = self.peek()
        if leftover is not None:
            raise ParseError(f"unexpected token {leftover.value!r}", leftover.position)
        return node


def _integer_literal(node: Node) -> Optional[int]:
    if node.op == "num" and node.args[0].denominator == 1:
        return int(node.args[0])
    if node.op == "neg":
        inner = _integer_literal(node.args[0])
        return None if inner is None else -inner
    return None


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


Value = Union[RationalFunction, LogExpr]


def _evaluate(node: Node, allow_log: bool, inside_log: bool = False) -> Value:
    op = node.op
    if op == "num":
        return RationalFunction.constant(node.args[0])
    if op == "n":
        return RationalFunction.variable()
    if op == "log":
        if not allow_log:
            raise ParseError("log(...) is not allowed in a rational function", node.position)
        if inside_log:
            raise ParseError("nested log is unsupported", node.position)
        arg = _evaluate(node.args[0], allow_log, inside_log=True)
        if isinstance(arg, LogExpr):
            raise ParseError("log argument must be a rational function", node.position)
        return LogExpr.log_of(arg)
    if op == "neg":
        return -_evaluate(node.args[0], allow_log, inside_log)
    lhs = _evaluate(node.args[0], allow_log, inside_log)
    if op == "^":
        k = _integer_literal(node.args[1])
        if isinstance(lhs, LogExpr):
            if not lhs.is_rational:
                raise ParseError("powers of logarithms are outside the expression family", node.position)
            lhs = lhs.rational_part
        if k < 0 and lhs.is_zero:
            raise ParseError("zero denominator", node.position)
        return lhs ** k
    rhs = _evaluate(node.args[1], allow_log, inside_log)
    if op == "+":
        return _lift(lhs) + rhs if isinstance(rhs, LogExpr) else lhs + rhs
    if op == "-":
        return _lift(lhs) - rhs if isinstance(rhs, LogExpr) else lhs - rhs
    if op == "*":
        try:
            return _lift(lhs) * rhs if isinstance(rhs, LogExpr) else lhs * rhs
        except DomainError as exc:
            raise ParseError(str(exc), node.position) from exc
    if op == "/":
        divisor = rhs.rational_part if isinstance(rhs, LogExpr) and rhs.is_rational else rhs
        if isinstance(divisor, LogExpr):
            raise ParseError("division by a logarithm is outside the expression family", node.position)
        if divisor.is_zero:
            raise ParseError("zero denominator", node.args[1].position)
        return lhs / divisor
    raise ParseError(f"unknown operator {op!r}", node.position)


def _lift(value: Value) -> LogExpr:
    return value if isinstance(value, LogExpr) else LogExpr(value)


def parse_ratfunc(text: str) -> RationalFunction:
    value = _evaluate(parse_ast(text), allow_log=False)
    assert isinstance(value, RationalFunction)
    return value


def parse_logexpr(text: str) -> LogExpr:
    return _lift(_evaluate(parse_ast(text), allow_log=True))


def parse_polynomial(text: str) -> Polynomial:
    r = parse_ratfunc(text)
    if not r.is_polynomial:
        raise ParseError(f"{text!r} is not a polynomial in n")
    return r.as_polynomial()


# ---------------------------------------------------------------------------
# spec documents


@dataclass(frozen=True)
class SequenceSpec:
    name: str
    order: int
    coeffs: Tuple[Polynomial, ...]
    start: int
    initial_values: Tuple[Fraction, ...]
    positivity_from: int
    oeis_id: Optional[str]
    bounds: Optional[CandidateBounds]
    document: SequenceSpecDocument

    def sequence(self) -> PRecursiveSequence:
        return PRecursiveSequence(
            self.name,
            self.coeffs,
            self.initial_values,
            start=self.start,
            positivity_from=self.positivity_from,
            oeis_id=self.oeis_id,
        )


# how far past the declared data positivity is machine-checked at load time
POSITIVITY_LOOKAHEAD = 12


def load_spec(document: Union[Mapping, SequenceSpecDocument]) -> SequenceSpec:
    issues: List[Tuple[str, str]] = []
    if isinstance(document, SequenceSpecDocument):
        doc = document
    else:
        try:
            doc = SequenceSpecDocument.model_validate(document)
        except ValidationError as exc:
            raise SpecValidationError(
                [(".".join(str(p) for p in err["loc"]), err["msg"]) for err in exc.errors()]
            ) from exc

    if doc.schema_id != SPEC_SCHEMA:
        issues.append(("schema", f"expected {SPEC_SCHEMA!r}, got {doc.schema_id!r}"))
    if len(doc.coeffs) != doc.order + 1:
        issues.append(("coeffs", f"order {doc.order} needs {doc.order + 1} coefficients, got {len(doc.coeffs)}"))
    if len(doc.initial.values) < doc.order:
        issues.append(("initial.values", f"order {doc.order} needs at least {doc.order} initial values"))
    if doc.positivity_from < doc.initial.start:
        issues.append(("positivity_from", "must not precede initial.start"))

    coeffs: List[Polynomial] = []
    for i, text in enumerate(doc.coeffs):
        try:
            coeffs.append(parse_polynomial(text).shift(doc.shift))
        except (ParseError, DomainError) as exc:
            issues.append((f"coeffs[{i}]", str(exc)))

    values: List[Fraction] = []
    for i, text in enumerate(doc.initial.values):
        try:
            values.append(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError):
            issues.append((f"initial.values[{i}]", f"not a decimal rational: {text!r}"))

    bounds = _load_bounds(doc, issues)
    if issues:
        raise SpecValidationError(issues)

    spec = SequenceSpec(
        name=doc.name,
        order=doc.order,
        coeffs=tuple(coeffs),
        start=doc.initial.start,
        initial_values=tuple(values),
        positivity_from=doc.positivity_from,
        oeis_id=doc.oeis_id,
        bounds=bounds,
        document=doc,
    )
    _check_sequence(spec, issues)
    if issues:
        raise SpecValidationError(issues)
    logger.debug("loaded spec %s (order %d)", spec.name, spec.order)
    return spec


def _load_bounds(doc: SequenceSpecDocument, issues: List[Tuple[str, str]]) -> Optional[CandidateBounds]:
    if doc.bounds is None:
        return None
    parsed: Dict[str, object] = {}
    declared: Dict[str, int] = {}
    for key in ("f", "g", "s_log", "S_log", "fu", "gu"):
        entry = getattr(doc.bounds, key)
        if entry is None:
            continue
        path = f"bounds.{key}"
        if entry.from_ < doc.initial.start:
            issues.append((f"{path}.from", "must not precede initial.start"))
        try:
            parsed[key] = parse_logexpr(entry.expr) if key.endswith("_log") else parse_ratfunc(entry.expr)
        except (ParseError, DomainError) as exc:
            issues.append((f"{path}.expr", str(exc)))
            continue
        declared[key] = entry.from_
    return CandidateBounds(
        f=parsed.get("f"),
        g=parsed.get("g"),
        s_log=parsed.get("s_log"),
        S_log=parsed.get("S_log"),
        fu=parsed.get("fu"),
        gu=parsed.get("gu"),
        declared_from=declared,
    )


def _check_sequence(spec: SequenceSpec, issues: List[Tuple[str, str]]) -> None:
    seq = spec.sequence()
    given_to = spec.start + len(spec.initial_values) - 1
    try:
        for n in range(spec.start, given_to - spec.order + 1):
            if spec.coeffs[-1](n) != 0 and seq.residual(n) != 0:
                issues.append(("initial.values", f"recurrence residual at n={n} is {seq.residual(n)}"))
        upto = max(given_to, spec.positivity_from) + POSITIVITY_LOOKAHEAD
        for n in range(spec.positivity_from, upto + 1):
            if seq.term(n) <= 0:
                issues.append(("positivity_from", f"term a_{n} = {seq.term(n)} is not positive"))
                break
    except SingularRecurrenceError as exc:
        issues.append(("coeffs", str(exc)))


def load_spec_file(path: Union[str, Path]) -> SequenceSpec:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise SpecValidationError([(str(path), "file not found")]) from exc
    except json.JSONDecodeError as exc:
        raise SpecValidationError([(str(path), f"invalid JSON: {exc}")]) from exc
    return load_spec(raw)


def resolve_spec_path(name_or_path: str) -> Path:
    """Accept a path, or the name of a bundled spec under the spec directory."""
    candidate = Path(name_or_path)
    if candidate.exists():
        return candidate
    bundled = Path(Settings.SPEC_DIR) / f"{name_or_path}.json"
    return bundled if bundled.exists() else candidate


def list_bundled_specs() -> List[str]:
    return sorted(p.stem for p in Path(Settings.SPEC_DIR).glob("*.json"))
