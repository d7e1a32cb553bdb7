"""turancert command line: terms | check | certify | verify-cert | oeis-check."""
import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

from algebra.errors import (
    CertificateMismatch,
    EventuallyNonpositiveError,
    InconclusiveError,
    StageFailure,
    TurancertError,
)
from config.settings import Settings
from models.certificate import CertificateDocument
from services.certify_service import CONSERVATIVE, MODES, CertificationService
from services.inequality_service import (
    HIGHER_TURAN,
    LAGUERRE2,
    LOG_CONCAVE,
    CheckStatus,
    check_laguerre,
    check_property,
)
from services.oeis_service import OeisClient, cross_validate, parse_bfile
from services.sequence_service import RATIO, ROOT
from services.spec_service import load_spec_file, resolve_spec_path

logger = logging.getLogger("turancert")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_UNDECIDED = 2
EXIT_INPUT = 3

TERMS = "terms"
PROPERTY_ALIASES = {"hot": HIGHER_TURAN, HIGHER_TURAN: HIGHER_TURAN, LAGUERRE2: LAGUERRE2, LOG_CONCAVE: LOG_CONCAVE}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, InconclusiveError):
        return EXIT_UNDECIDED
    if isinstance(exc, (StageFailure, EventuallyNonpositiveError, CertificateMismatch)):
        return EXIT_FAILED
    return EXIT_INPUT


def _emit(args, payload, human: str) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n" if args.json else human
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(spec: str):
    return load_spec_file(resolve_spec_path(spec))


def _service(args) -> CertificationService:
    return CertificationService(precision_cap=args.precision)


# -- subcommands -----------------------------------------------------------

def cmd_terms(args) -> int:
    spec = _load(args.spec[0])
    seq = spec.sequence()
    lo = seq.start if args.lo is None else args.lo
    hi = lo + 10 if args.hi is None else args.hi
    rows = []
    for n in range(lo, hi + 1):
        row = {"n": n, "a": str(seq.term(n))}
        if args.ratios:
            row["r"] = None if seq.term(n) == 0 else str(seq.ratio(n))
        rows.append(row)
    human = "".join(
        f"{r['n']:>6}  {r['a']}" + (f"  r={r['r']}" if args.ratios else "") + "\n" for r in rows
    )
    _emit(args, {"sequence": seq.name, "terms": rows}, human)
    return EXIT_OK


def cmd_check(args) -> int:
    spec = _load(args.spec[0])
    seq = spec.sequence()
    target = args.target[0] if args.target else ROOT
    prop = PROPERTY_ALIASES[args.property[0] if args.property else HIGHER_TURAN]
    lo = 1 if args.lo is None else args.lo
    hi = lo + 20 if args.hi is None else args.hi
    cap = args.precision or Settings.PRECISION_CAP
    precision = {"start_precision": min(Settings.START_PRECISION, cap), "precision_cap": cap}

    if target == TERMS:
        # raw terms are exact; only the window a_{lo-1} .. a_{hi+2m} is needed
        reach = 2 * (args.laguerre_order or 2) + 2
        values = {n: seq.term(n) for n in range(max(seq.start, lo - 1), hi + reach + 1)}
    else:
        values = seq.interval_values(target)

    if args.laguerre_order is not None:
        outcomes = [check_laguerre(values, args.laguerre_order, n, **precision) for n in range(lo, hi + 1)]
        prop = f"laguerre{args.laguerre_order}"
    else:
        outcomes = [check_property(values, prop, n, **precision) for n in range(lo, hi + 1)]

    statuses = {o.status for o in outcomes}
    code = EXIT_OK
    if CheckStatus.FAILS in statuses:
        code = EXIT_FAILED
    elif CheckStatus.UNDECIDED in statuses:
        code = EXIT_UNDECIDED
    human = "".join(f"{o.index:>6}  {o.status.value:<20} {o.margin}\n" for o in outcomes)
    payload = {"sequence": seq.name, "target": target, "property": prop, "outcomes": [o.to_dict() for o in outcomes]}
    _emit(args, payload, human)
    return code


def _certify_job(job: Tuple[str, str, str, int, str, Optional[int]]) -> Tuple[str, int, str]:
    spec_path, target, prop, start, mode, cap = job
    try:
        spec = _load(spec_path)
        cert = CertificationService(precision_cap=cap).certify(spec, target, prop, start, mode)
        return f"{spec.name}-{target}-{prop}", EXIT_OK, cert.to_json()
    except TurancertError as exc:
        return f"{Path(spec_path).stem}-{target}-{prop}", exit_code_for(exc), str(exc)


def cmd_certify(args) -> int:
    if args.lo is None:
        sys.stderr.write("certify needs --from N\n")
        return EXIT_INPUT
    targets = args.target or [ROOT]
    props = [PROPERTY_ALIASES[p] for p in (args.property or [HIGHER_TURAN])]
    jobs = [
        (spec, target, prop, args.lo, args.mode, args.precision)
        for spec in args.spec for target in targets for prop in props
    ]
    logger.info(f"running {len(jobs)} certification job(s)")
    if len(jobs) > 1 and args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            results = list(pool.map(_certify_job, jobs))
    else:
        results = [_certify_job(job) for job in jobs]

    worst = EXIT_OK
    for name, code, body in results:
        if code != EXIT_OK:
            sys.stderr.write(f"{name}: {body}\n")
            worst = max(worst, code)
            continue
        if args.out and len(jobs) > 1:
            out_dir = Path(args.out)
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"{name}.json").write_text(body)
        elif args.out:
            Path(args.out).write_text(body)
        else:
            sys.stdout.write(body)
    return worst


def cmd_verify_cert(args) -> int:
    if not args.cert:
        sys.stderr.write("verify-cert needs --cert PATH\n")
        return EXIT_INPUT
    cert = CertificateDocument.from_json(Path(args.cert).read_text())
    spec = _load(args.spec[0])
    try:
        report = _service(args).reverify(cert, spec)
    except CertificateMismatch as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_FAILED
    if not report.ok:
        sys.stderr.write(f"re-verification failed: {report.failures[0]}\n")
    human = "certificate verified\n" if report.ok else "".join(f"- {f}\n" for f in report.failures)
    _emit(args, report.to_dict(), human)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_oeis_check(args) -> int:
    spec = _load(args.spec[0])
    if args.bfile:
        bfile = parse_bfile(Path(args.bfile).read_text(), spec.oeis_id)
    else:
        if not spec.oeis_id:
            sys.stderr.write(f"spec {spec.name} has no oeis_id; pass --bfile\n")
            return EXIT_INPUT
        client = OeisClient(cache_dir=args.cache_dir, allow_network=args.allow_network or None)
        bfile = client.resolve(spec.oeis_id)
    report = cross_validate(spec.sequence(), bfile, args.hi, args.lower)
    human = f"{report.confirmed} terms confirmed, {len(report.mismatches)} mismatches\n" + "".join(
        f"  n={m['index']}: expected {m['expected']}, computed {m['actual']}\n" for m in report.mismatches
    )
    _emit(args, report.to_dict(), human)
    return EXIT_OK if report.ok else EXIT_FAILED


COMMANDS = {
    "terms": cmd_terms,
    "check": cmd_check,
    "certify": cmd_certify,
    "verify-cert": cmd_verify_cert,
    "oeis-check": cmd_oeis_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="turancert", description="Certified Turán and Laguerre inequalities")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--spec", action="append", required=True, help="spec file or bundled spec name (repeatable for certify)")
    ap.add_argument("--target", action="append", choices=[ROOT, RATIO, TERMS],
                    help="derived sequence; 'terms' checks the raw terms (check only)")
    ap.add_argument("--property", action="append", choices=sorted(PROPERTY_ALIASES))
    ap.add_argument("--from", dest="lo", type=int, default=None)
    ap.add_argument("--to", dest="hi", type=int, default=None)
    ap.add_argument("--precision", type=int, default=None, help="precision cap in bits")
    ap.add_argument("--mode", choices=MODES, default=CONSERVATIVE, help="ratio-target Laguerre criterion form")
    ap.add_argument("--laguerre-order", type=int, default=None, help="check the Laguerre inequality of this order")
    ap.add_argument("--ratios", action="store_true", help="also print a_{n+1}/a_n (terms)")
    ap.add_argument("--cert", default=None, help="certificate file (verify-cert)")
    ap.add_argument("--bfile", default=None, help="local b-file (oeis-check)")
    ap.add_argument("--lower", type=int, default=None, help="first index compared (oeis-check)")
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--out", default=None)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--allow-network", action="store_true")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.lo is not None and args.hi is not None and args.lo > args.hi:
        parser.error("--from must not exceed --to")
    if args.target and TERMS in args.target and args.command != "check":
        parser.error("--target terms is only valid for check")
    if args.laguerre_order is not None and args.property:
        parser.error("--laguerre-order and --property are mutually exclusive")
    logging.basicConfig(level=Settings.LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
    try:
        return COMMANDS[args.command](args)
    except TurancertError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exit_code_for(exc)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
