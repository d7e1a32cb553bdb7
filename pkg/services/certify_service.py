# services/certify_service.py
"""Certification pipeline for the root and ratio sequences of a P-recursive sequence.

Stages run in a fixed order, each consuming the validity range of the one
before it:

    ratio bounds  f(n) < a_{n+1}/a_n < g(n)        induction on the recurrence
    value bounds  s(n) < log a_n < S(n)           induction + derivative descent
    u bounds      fu(n) < u_n < gu(n)              log inequality + descent
    criterion     rational positivity thresholds   Sturm counting

and the indices below the criterion's coverage are checked directly with
interval arithmetic.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from algebra.errors import (
    CertificateMismatch,
    CriterionFailure,
    DomainError,
    EventuallyNonpositiveError,
    InconclusiveError,
    ParseError,
    StageFailure,
    TurancertError,
    UnsupportedOrderError,
)
from algebra.exact import Polynomial, RationalFunction
from algebra.interval import Interval
from algebra.logexpr import DescentProof, LogExpr, prove_eventually_positive
from algebra.roots import count_roots_above, largest_root_floor, positivity_threshold
from config.settings import Settings
from models.certificate import (
    CERTIFICATE_SCHEMA,
    CertificateDocument,
    CertificateStages,
    CriterionStage,
    InitialWindow,
    PolicyRecord,
    RatioBoundsStage,
    ThresholdRecord,
    UBoundsStage,
    ValueBoundsStage,
    WindowCheck,
)
from services.inequality_service import (
    HIGHER_TURAN,
    LAGUERRE2,
    CheckStatus,
    check_property,
    check_range,
    turan_quartic,
)
from services.sequence_service import RATIO, ROOT, TARGETS, PRecursiveSequence

logger = logging.getLogger(__name__)

PAPER = "paper"
CONSERVATIVE = "conservative"
MODES = (PAPER, CONSERVATIVE)
STANDARD = "standard"
PROPERTIES = (HIGHER_TURAN, LAGUERRE2)


@dataclass(frozen=True)
class CandidateBounds:
    """User-supplied bounds; ``declared_from`` maps a bound name to the first index it is claimed for."""

    f: Optional[RationalFunction] = None
    g: Optional[RationalFunction] = None
    s_log: Optional[LogExpr] = None
    S_log: Optional[LogExpr] = None
    fu: Optional[RationalFunction] = None
    gu: Optional[RationalFunction] = None
    declared_from: Dict[str, int] = field(default_factory=dict, hash=False)

    def start_of(self, *keys: str, default: int = 1) -> int:
        return max((self.declared_from[k] for k in keys if k in self.declared_from), default=default)

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if getattr(self, k) is None]
        if missing:
            raise DomainError(f"bounds block is missing {', '.join(missing)}")


@dataclass(frozen=True)
class PrecisionPolicy:
    start_precision: int = Settings.START_PRECISION
    precision_cap: int = Settings.PRECISION_CAP
    eval_budget: int = Settings.EVAL_BUDGET


# ---------------------------------------------------------------------------
# helpers


def _threshold_record(stage: str, label: str, r: RationalFunction, floor: int) -> ThresholdRecord:
    try:
        t = positivity_threshold(r, floor)
    except EventuallyNonpositiveError as exc:
        if stage == "criterion":
            raise CriterionFailure(label, str(exc)) from exc
        raise StageFailure(stage, f"{label} is not eventually positive: {r}") from exc
    except DomainError as exc:
        raise StageFailure(stage, f"{label}: {exc}") from exc
    return ThresholdRecord(
        label=label, expression=str(r), threshold=t.threshold, witness=t.witness, root_bound=t.root_bound
    )


def _pole_free_from(p: Polynomial, floor: int) -> int:
    top = largest_root_floor(p)
    return floor if top is None else max(floor, top + 1)


def _closed_form_ratio(seq: PRecursiveSequence) -> RationalFunction:
    return -RationalFunction(seq.coeffs[0]) / RationalFunction(seq.coeffs[1])


def _ratio_bounds_for(seq: PRecursiveSequence, f, g) -> Tuple[RationalFunction, RationalFunction]:
    if seq.order == 1:
        closed = _closed_form_ratio(seq)
        return closed, closed
    if f is None or g is None:
        raise DomainError("ratio bounds f and g are required for recurrences of order 2")
    return f, g


def _sandwiched(seq: PRecursiveSequence, f: RationalFunction, g: RationalFunction, n: int) -> bool:
    try:
        return f(n) < seq.ratio(n) < g(n)
    except DomainError:
        return False


def _descent(stage: str, side: str, expr: LogExpr, floor: int, policy: PrecisionPolicy) -> Tuple[Optional[DescentProof], int]:
    if expr.is_zero:
        return None, floor
    try:
        proof = prove_eventually_positive(
            expr,
            eval_budget=policy.eval_budget,
            floor=floor,
            start_precision=policy.start_precision,
            precision_cap=policy.precision_cap,
        )
    except (EventuallyNonpositiveError, DomainError) as exc:
        raise StageFailure(stage, f"{side} side: {exc}") from exc
    logger.info("%s %s side positive from n=%d (descent order %d)", stage, side, proof.final_threshold, proof.order)
    return proof, proof.final_threshold


def _between(
    lower: Callable[[int], Interval],
    value: Callable[[int], Interval],
    upper: Callable[[int], Interval],
    policy: PrecisionPolicy,
) -> Tuple[str, Interval]:
    """Decide lower < value < upper, raising precision until settled or capped."""
    bits = min(policy.start_precision, policy.precision_cap)
    while True:
        lo, v, hi = lower(bits), value(bits), upper(bits)
        if lo.hi < v.lo and v.hi < hi.lo:
            return "holds", v
        if v.hi <= lo.lo:
            return "fails_lower", v
        if v.lo >= hi.hi:
            return "fails_upper", v
        if bits >= policy.precision_cap:
            return "undecided", v
        bits = min(bits * 2, policy.precision_cap)


def _window_check(index: int, status: str, enclosure: Interval) -> WindowCheck:
    return WindowCheck(
        index=index, status=status, enclosure=list(enclosure.as_strings()), precision=enclosure.precision_bits
    )


def _sandwich_window(
    stage: str,
    lo: int,
    hi: int,
    lower: Callable[[int, int], Interval],
    value: Callable[[int, int], Interval],
    upper: Callable[[int, int], Interval],
    policy: PrecisionPolicy,
) -> List[WindowCheck]:
    checks = []
    for n in range(lo, hi):
        status, enclosure = _between(
            lambda b: lower(n, b), lambda b: value(n, b), lambda b: upper(n, b), policy
        )
        if status == "undecided":
            raise InconclusiveError(f"{stage}: sandwich at n={n} undecided at {policy.precision_cap} bits")
        if status != "holds":
            side = "lower" if status == "fails_lower" else "upper"
            raise StageFailure(stage, f"{side} bound violated at n={n} (value {enclosure})")
        checks.append(_window_check(n, status, enclosure))
    return checks


# ---------------------------------------------------------------------------
# stages


def verify_ratio_bounds(
    seq: PRecursiveSequence,
    f: Optional[RationalFunction],
    g: Optional[RationalFunction],
    base: int,
    floor: Optional[int] = None,
) -> RatioBoundsStage:
    """Certify f(n) < a_{n+1}/a_n < g(n) for every n >= valid_from."""
    floor = seq.positivity_from if floor is None else floor
    if seq.order > 2:
        raise UnsupportedOrderError(
            f"ratio induction needs a recurrence of order at most 2, {seq.name} has order {seq.order}"
        )
    lead_from = _pole_free_from(seq.coeffs[-1], floor)

    if seq.order == 1:
        closed = _closed_form_ratio(seq)
        conditions = []
        if f is not None:
            conditions.append(_threshold_record("ratio_bounds", "r - f", closed - f, floor))
        if g is not None:
            conditions.append(_threshold_record("ratio_bounds", "g - r", g - closed, floor))
        valid = max([lead_from] + [c.threshold for c in conditions])
        logger.info("ratio of %s is %s in closed form from n=%d", seq.name, closed, valid)
        return RatioBoundsStage(
            method="closed_form",
            f=str(closed if f is None else f),
            g=str(closed if g is None else g),
            base=base,
            conditions=conditions,
            induction_from=valid,
            valid_from=valid,
        )

    f, g = _ratio_bounds_for(seq, f, g)
    if not _sandwiched(seq, f, g, base):
        raise StageFailure("ratio_bounds", f"exact check fails at n={base}: r = {seq.ratio(base)} not in (f, g)")

    p0, p1, p2 = (RationalFunction(p) for p in seq.coeffs)
    alpha, beta = -p1 / p2, -p0 / p2
    conditions = [_threshold_record("ratio_bounds", "f", f, floor)]
    f1, g1 = f.shift(1), g.shift(1)
    if beta.is_zero:
        lower, upper = alpha - f1, g1 - alpha
    else:
        sign = beta.sign_at_infinity()
        conditions.append(_threshold_record("ratio_bounds", "beta" if sign > 0 else "-beta", beta * sign, floor))
        if sign > 0:
            lower, upper = alpha + beta / g - f1, g1 - alpha - beta / f
        else:
            lower, upper = alpha + beta / f - f1, g1 - alpha - beta / g
    conditions.append(_threshold_record("ratio_bounds", "lower containment", lower, floor))
    conditions.append(_threshold_record("ratio_bounds", "upper containment", upper, floor))

    induction_from = max([base, lead_from] + [c.threshold for c in conditions])
    for n in range(base + 1, induction_from + 1):
        if not _sandwiched(seq, f, g, n):
            raise StageFailure("ratio_bounds", f"exact check fails at n={n} below the induction start {induction_from}")

    valid = base
    while valid - 1 >= floor and _sandwiched(seq, f, g, valid - 1):
        valid -= 1
    logger.info("ratio bounds of %s: induction from %d, exact down to %d", seq.name, induction_from, valid)
    return RatioBoundsStage(
        method="induction",
        f=str(f),
        g=str(g),
        base=base,
        conditions=conditions,
        induction_from=induction_from,
        valid_from=valid,
    )


def verify_value_bounds(
    seq: PRecursiveSequence,
    s_log: LogExpr,
    S_log: LogExpr,
    f: Optional[RationalFunction],
    g: Optional[RationalFunction],
    ratio_stage: RatioBoundsStage,
    declared_from: int,
    policy: Optional[PrecisionPolicy] = None,
) -> ValueBoundsStage:
    """Certify s(n) < log a_n < S(n) for every n >= declared_from."""
    policy = policy or PrecisionPolicy()
    f, g = _ratio_bounds_for(seq, f, g)
    declared_from = max(declared_from, seq.positivity_from)
    floor = max(declared_from, 1)

    lower_step = LogExpr.log_of(f) + s_log - s_log.shift(1)
    upper_step = S_log.shift(1) - LogExpr.log_of(g) - S_log
    lower_proof, t1 = _descent("value_bounds", "lower", lower_step, floor, policy)
    upper_proof, t2 = _descent("value_bounds", "upper", upper_step, floor, policy)
    induction_from = max(ratio_stage.valid_from, declared_from, t1, t2)

    window = _sandwich_window(
        "value_bounds",
        declared_from,
        induction_from + 1,
        s_log.eval_interval,
        seq.log_term,
        S_log.eval_interval,
        policy,
    )
    logger.info("value bounds of %s: induction from %d, window from %d", seq.name, induction_from, declared_from)
    return ValueBoundsStage(
        s_log=str(s_log),
        S_log=str(S_log),
        lower_step=None if lower_proof is None else lower_proof.to_dict(),
        upper_step=None if upper_proof is None else upper_proof.to_dict(),
        induction_from=induction_from,
        window=window,
        valid_from=declared_from,
    )


def u_bound_expressions(
    f: RationalFunction,
    g: RationalFunction,
    s_log: LogExpr,
    S_log: LogExpr,
    fu: RationalFunction,
    gu: RationalFunction,
) -> Tuple[LogExpr, LogExpr]:
    """The two log inequalities whose positivity gives fu(n) < u_n < gu(n).

    Multiplying log u_n by n^3 - n gives
    2 log a_{n-1} - (n^2 + n - 2) log r_{n-1} + (n^2 - n) log r_n,
    which is then bounded termwise by the ratio and value bounds.
    """
    n = RationalFunction.variable()
    w_next, w_prev, w_u = n ** 2 - n, n ** 2 + n - 2, n ** 3 - n
    lower = (
        LogExpr.log_of(f, w_next)
        - LogExpr.log_of(g.shift(-1), w_prev)
        + s_log.shift(-1).scale(2)
        - LogExpr.log_of(fu, w_u)
    )
    upper = (
        LogExpr.log_of(gu, w_u)
        - LogExpr.log_of(g, w_next)
        + LogExpr.log_of(f.shift(-1), w_prev)
        - S_log.shift(-1).scale(2)
    )
    return lower, upper


def verify_u_bounds(
    seq: PRecursiveSequence,
    bounds: CandidateBounds,
    ratio_stage: RatioBoundsStage,
    value_stage: ValueBoundsStage,
    policy: Optional[PrecisionPolicy] = None,
) -> UBoundsStage:
    """Certify fu(n) < u_n < gu(n) for every n >= the declared start of fu/gu."""
    policy = policy or PrecisionPolicy()
    bounds.require("s_log", "S_log", "fu", "gu")
    f, g = _ratio_bounds_for(seq, bounds.f, bounds.g)
    lower, upper = u_bound_expressions(f, g, bounds.s_log, bounds.S_log, bounds.fu, bounds.gu)
    u_start = max(bounds.start_of("fu", "gu", default=2), 2, seq.positivity_from + 1)

    lower_proof, t1 = _descent("u_bounds", "lower", lower, 2, policy)
    upper_proof, t2 = _descent("u_bounds", "upper", upper, 2, policy)
    if lower_proof is None or upper_proof is None:
        raise StageFailure("u_bounds", "a u-bound inequality vanishes identically, so the sandwich is not strict")
    induction_from = max(t1, t2, ratio_stage.valid_from + 1, value_stage.valid_from + 1, u_start)

    fu, gu = bounds.fu, bounds.gu
    window = _sandwich_window(
        "u_bounds",
        u_start,
        induction_from,
        lambda n, bits: Interval.exact(fu(n), bits),
        seq.u_term,
        lambda n, bits: Interval.exact(gu(n), bits),
        policy,
    )
    logger.info("u bounds of %s hold from n=%d (direct from %d)", seq.name, u_start, induction_from)
    return UBoundsStage(
        fu=str(fu),
        gu=str(gu),
        lower_descent=lower_proof.to_dict(),
        upper_descent=upper_proof.to_dict(),
        induction_from=induction_from,
        window=window,
        valid_from=u_start,
    )


# ---------------------------------------------------------------------------
# criteria


def criterion_bounds(
    fu: RationalFunction, gu: RationalFunction, target: str
) -> Tuple[RationalFunction, RationalFunction]:
    """Bounds (p, q) on x_{n-1}x_{n+1}/x_n^2 for the chosen derived sequence x."""
    n = RationalFunction.variable()
    w = n / (n + 1)
    if target == ROOT:
        return w * fu, w * gu
    if target == RATIO:
        return w * fu.shift(1) / gu, w * gu.shift(1) / fu
    raise DomainError(f"unknown target {target!r}")


def _lower_bound_positive_from(fu: RationalFunction, gu: RationalFunction, floor: int) -> int:
    return max(
        _threshold_record("criterion", "fu", fu, floor).threshold,
        _threshold_record("criterion", "gu", gu, floor).threshold,
    )


def turan_compositions(p: RationalFunction, q: RationalFunction) -> List[Tuple[str, RationalFunction]]:
    p1, q1 = p.shift(1), q.shift(1)
    return [
        ("t(p_n, p_{n+1})", turan_quartic(p, p1)),
        ("t(p_n, q_{n+1})", turan_quartic(p, q1)),
        ("t(q_n, p_{n+1})", turan_quartic(q, p1)),
        ("t(q_n, q_{n+1})", turan_quartic(q, q1)),
    ]


def criterion_higher_turan(
    fu: RationalFunction, gu: RationalFunction, target: str, floor: int = 1, u_from: Optional[int] = None
) -> CriterionStage:
    p, q = criterion_bounds(fu, gu, target)
    records = [_threshold_record("criterion", label, t, floor) for label, t in turan_compositions(p, q)]
    threshold = max(r.threshold for r in records)
    positive_from = _lower_bound_positive_from(fu, gu, floor)
    coverage = max(threshold, positive_from, floor if u_from is None else u_from)
    logger.info("higher order Turán criterion (%s): thresholds %s", target, [r.threshold for r in records])
    return CriterionStage(
        property=HIGHER_TURAN,
        target=target,
        mode=STANDARD,
        compositions=records,
        threshold=threshold,
        lower_bound_positive_from=positive_from,
        coverage_from=coverage,
    )


def laguerre2_form(
    fu: RationalFunction, gu: RationalFunction, target: str, mode: str = CONSERVATIVE
) -> Tuple[str, RationalFunction, Optional[RationalFunction]]:
    """Criterion rational function in the centre index, and the side condition when one is needed."""
    p, q = criterion_bounds(fu, gu, target)
    before, after = p.shift(-1), p.shift(1)
    if target == ROOT or mode == CONSERVATIVE:
        return "p_{n-1} p_n^2 p_{n+1} - 4 q_n + 3", before * p ** 2 * after - 4 * q + 3, None
    if mode == PAPER:
        side = 2 - before * after * q
        return "p_{n-1} p_n q_n p_{n+1} - 4 q_n + 3", before * p * q * after - 4 * q + 3, side
    raise DomainError(f"unknown Laguerre criterion mode {mode!r}")


def criterion_laguerre2(
    fu: RationalFunction,
    gu: RationalFunction,
    target: str,
    mode: str = CONSERVATIVE,
    floor: int = 1,
    u_from: Optional[int] = None,
) -> CriterionStage:
    label, form, side = laguerre2_form(fu, gu, target, mode)
    record = _threshold_record("criterion", label, form, floor)
    side_record = None if side is None else _threshold_record("criterion", "2 - p_{n-1} p_{n+1} q_n", side, floor)
    positive_from = _lower_bound_positive_from(fu, gu, floor)
    # the check at index n is centred at n + 2
    coverage = max(
        record.threshold,
        0 if side_record is None else side_record.threshold,
        positive_from + 1,
        floor if u_from is None else u_from + 1,
    )
    logger.info("Laguerre criterion (%s, %s): threshold %d", target, mode, record.threshold)
    return CriterionStage(
        property=LAGUERRE2,
        target=target,
        mode=STANDARD if target == ROOT else mode,
        compositions=[record],
        threshold=record.threshold,
        side_condition=side_record,
        lower_bound_positive_from=positive_from,
        coverage_from=coverage,
    )


# ---------------------------------------------------------------------------
# full runs


def run_initial_window(
    seq: PRecursiveSequence, target: str, prop: str, start: int, stop: int, policy: PrecisionPolicy
) -> InitialWindow:
    """Direct interval checks at every index in [start, stop); the first failure is reported."""
    values = seq.interval_values(target)
    outcomes = []
    for n in range(start, stop):
        outcome = check_property(
            values, prop, n, start_precision=policy.start_precision, precision_cap=policy.precision_cap
        )
        if outcome.status is CheckStatus.UNDECIDED:
            raise InconclusiveError(f"{prop} at n={n} undecided at {policy.precision_cap} bits")
        if not outcome.status.acceptable:
            raise StageFailure("initial_window", f"{prop} fails at n={n} (margin {outcome.margin})")
        outcomes.append(_window_check(n, outcome.status.value, outcome.margin))
    return InitialWindow(
        from_=start, to=max(start, stop), method="interval", precision=policy.precision_cap, outcomes=outcomes
    )


def certify_property(
    seq: PRecursiveSequence,
    bounds: CandidateBounds,
    target: str,
    prop: str,
    start: int,
    mode: str = CONSERVATIVE,
    policy: Optional[PrecisionPolicy] = None,
) -> CertificateDocument:
    if target not in TARGETS:
        raise DomainError(f"unknown target {target!r}")
    if prop not in PROPERTIES:
        raise DomainError(f"unknown property {prop!r}")
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")
    policy = policy or PrecisionPolicy()
    bounds.require("s_log", "S_log", "fu", "gu")
    logger.info("certifying %s for the %s sequence of %s from n=%d", prop, target, seq.name, start)

    ratio = verify_ratio_bounds(
        seq, bounds.f, bounds.g, bounds.start_of("f", "g", default=seq.positivity_from)
    )
    value = verify_value_bounds(
        seq,
        bounds.s_log,
        bounds.S_log,
        bounds.f,
        bounds.g,
        ratio,
        bounds.start_of("s_log", "S_log", default=seq.positivity_from),
        policy,
    )
    u = verify_u_bounds(seq, bounds, ratio, value, policy)
    if prop == HIGHER_TURAN:
        criterion = criterion_higher_turan(bounds.fu, bounds.gu, target, u_from=u.valid_from)
    else:
        criterion = criterion_laguerre2(bounds.fu, bounds.gu, target, mode, u_from=u.valid_from)
    window = run_initial_window(seq, target, prop, start, criterion.coverage_from, policy)

    certificate = CertificateDocument(
        sequence=seq.name,
        oeis_id=seq.oeis_id,
        target=target,
        property=prop,
        mode=mode,
        start=start,
        policy=PolicyRecord(
            start_precision=policy.start_precision,
            precision_cap=policy.precision_cap,
            eval_budget=policy.eval_budget,
        ),
        stages=CertificateStages(ratio_bounds=ratio, value_bounds=value, u_bounds=u, criterion=criterion),
        initial_window=window,
        overall_from=start,
    )
    logger.info("%s holds for the %s sequence of %s from n=%d", prop, target, seq.name, start)
    return certificate.sealed()


# ---------------------------------------------------------------------------
# re-verification


@dataclass
class VerificationReport:
    ok: bool
    failures: List[str]
    checked_thresholds: int

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "failures": self.failures, "checked_thresholds": self.checked_thresholds}


def _threshold_records(cert: CertificateDocument) -> Iterable[Tuple[str, ThresholdRecord]]:
    for i, rec in enumerate(cert.stages.ratio_bounds.conditions):
        yield f"stages.ratio_bounds.conditions[{i}]", rec
    for i, rec in enumerate(cert.stages.criterion.compositions):
        yield f"stages.criterion.compositions[{i}]", rec
    if cert.stages.criterion.side_condition is not None:
        yield "stages.criterion.side_condition", cert.stages.criterion.side_condition


def recheck_threshold(path: str, record: ThresholdRecord) -> List[str]:
    """Independent Sturm re-check that the recorded expression is positive on [threshold, oo)."""
    from services.spec_service import parse_ratfunc

    try:
        r = parse_ratfunc(record.expression)
    except ParseError as exc:
        return [f"{path}: expression does not parse ({exc})"]
    if r.sign_at_infinity() <= 0:
        return [f"{path}: {record.label} is not positive at infinity"]
    bound = record.root_bound
    if bound < record.threshold:
        return [f"{path}: root bound {bound} below threshold {record.threshold}"]
    for label, poly in (("numerator", r.num), ("denominator", r.den)):
        if poly.degree >= 1 and (poly(bound) == 0 or count_roots_above(poly, bound) > 0):
            return [f"{path}: {label} has a real root at or above the recorded bound {bound}"]
    for k in range(record.threshold, bound):
        if r.den(k) == 0 or r(k) <= 0:
            return [f"{path}: threshold {record.threshold} too small, {record.label} is not positive at n={k}"]
    return []


def _diff(path: str, recorded: Any, fresh: Any) -> List[str]:
    if isinstance(recorded, dict) and isinstance(fresh, dict):
        out = []
        for key in sorted(set(recorded) | set(fresh)):
            out.extend(_diff(f"{path}.{key}" if path else key, recorded.get(key), fresh.get(key)))
        return out
    if isinstance(recorded, list) and isinstance(fresh, list):
        if len(recorded) != len(fresh):
            return [f"{path}: {len(recorded)} entries recorded, {len(fresh)} recomputed"]
        out = []
        for i, (a, b) in enumerate(zip(recorded, fresh)):
            out.extend(_diff(f"{path}[{i}]", a, b))
        return out
    if recorded != fresh:
        return [f"{path}: recorded {recorded!r}, recomputed {fresh!r}"]
    return []


def reverify(
    cert: CertificateDocument,
    seq: PRecursiveSequence,
    bounds: CandidateBounds,
    policy: Optional[PrecisionPolicy] = None,
) -> VerificationReport:
    if cert.schema_id != CERTIFICATE_SCHEMA:
        raise CertificateMismatch(f"unsupported certificate schema {cert.schema_id!r}")
    if cert.sequence != seq.name:
        return VerificationReport(False, [f"sequence: certificate is for {cert.sequence!r}, spec is {seq.name!r}"], 0)

    if policy is None:
        policy = PrecisionPolicy(cert.policy.start_precision, cert.policy.precision_cap, cert.policy.eval_budget)

    failures: List[str] = []
    if cert.metadata.digest != cert.compute_digest():
        failures.append("metadata.digest: does not match the certificate payload")
    records = list(_threshold_records(cert))
    for path, record in records:
        failures.extend(recheck_threshold(path, record))

    try:
        fresh = certify_property(seq, bounds, cert.target, cert.property, cert.start, cert.mode, policy)
    except TurancertError as exc:
        failures.append(f"recomputation failed: {exc}")
    else:
        failures.extend(_diff("", cert.canonical_payload(), fresh.canonical_payload()))

    for failure in failures:
        logger.warning("re-verification of %s: %s", cert.sequence, failure)
    return VerificationReport(not failures, failures, len(records))


class CertificationService:
    """Front door used by the CLI, the API and the benchmark."""

    def __init__(self, start_precision: Optional[int] = None, precision_cap: Optional[int] = None,
                 eval_budget: Optional[int] = None):
        self.policy = PrecisionPolicy(
            start_precision=start_precision or Settings.START_PRECISION,
            precision_cap=precision_cap or Settings.PRECISION_CAP,
            eval_budget=eval_budget or Settings.EVAL_BUDGET,
        )

    def certify(self, spec, target: str, prop: str, start: int, mode: str = CONSERVATIVE) -> CertificateDocument:
        if spec.bounds is None:
            raise DomainError(f"spec {spec.name} has no bounds block")
        return certify_property(spec.sequence(), spec.bounds, target, prop, start, mode, self.policy)

    def reverify(self, cert: CertificateDocument, spec) -> VerificationReport:
        if spec.bounds is None:
            raise DomainError(f"spec {spec.name} has no bounds block")
        return reverify(cert, spec.sequence(), spec.bounds)

    def check(self, spec, target: str, prop: str, lo: int, hi: int):
        seq = spec.sequence()
        return check_range(
            seq.interval_values(target),
            prop,
            lo,
            hi,
            start_precision=self.policy.start_precision,
            precision_cap=self.policy.precision_cap,
        )
