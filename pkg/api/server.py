import logging
import sys
from pathlib import Path

project_root = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(project_root))

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ValidationError
from typing import Any, Dict, List, Optional

from algebra.errors import (
    InconclusiveError,
    NetworkUnavailableError,
    StageFailure,
    TurancertError,
    EventuallyNonpositiveError,
)
from config.settings import Settings
from models.certificate import CertificateDocument
from services.certify_service import CONSERVATIVE, CertificationService
from services.oeis_service import OeisClient, cross_validate
from services.spec_service import list_bundled_specs, load_spec, load_spec_file, resolve_spec_path

logging.basicConfig(level=Settings.LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

app = FastAPI(title="turancert API", version="1.0.0")

certification_service = CertificationService()


class SpecRef(BaseModel):
    """A bundled spec name, or an inline spec document."""
    spec: Optional[str] = None
    document: Optional[Dict[str, Any]] = None


class TermsRequest(SpecRef):
    lo: int = 0
    hi: int = 10
    ratios: bool = False


class CheckRequest(SpecRef):
    target: str = "root"
    property: str = "higher_turan"
    lo: int
    hi: int
    precision: Optional[int] = None


class CertifyRequest(SpecRef):
    target: str = "root"
    property: str = "higher_turan"
    start: int
    mode: str = CONSERVATIVE


class VerifyRequest(SpecRef):
    certificate: Dict[str, Any]


class OeisCheckRequest(SpecRef):
    limit: Optional[int] = None
    lower: Optional[int] = None


class VerificationResponse(BaseModel):
    is_valid: bool
    failures: List[str]


def _spec(request: SpecRef):
    if request.document is not None:
        return load_spec(request.document)
    if request.spec is None:
        raise HTTPException(status_code=422, detail="either spec or document is required")
    return load_spec_file(resolve_spec_path(request.spec))


def _http_error(exc: TurancertError) -> HTTPException:
    if isinstance(exc, NetworkUnavailableError):
        return HTTPException(status_code=503, detail=str(exc))
    if isinstance(exc, (StageFailure, EventuallyNonpositiveError, InconclusiveError)):
        return HTTPException(status_code=409, detail=str(exc))
    return HTTPException(status_code=422, detail=str(exc))


@app.get("/specs", response_model=List[str])
async def get_specs():
    return list_bundled_specs()


@app.post("/terms")
async def post_terms(request: TermsRequest):
    try:
        seq = _spec(request).sequence()
        rows = []
        for n in range(request.lo, request.hi + 1):
            row = {"n": n, "a": str(seq.term(n))}
            if request.ratios:
                a = seq.term(n)
                row["r"] = None if a == 0 else str(seq.ratio(n))
            rows.append(row)
        return {"sequence": seq.name, "terms": rows}
    except TurancertError as e:
        raise _http_error(e)


@app.post("/check")
def post_check(request: CheckRequest):
    try:
        service = CertificationService(precision_cap=request.precision) if request.precision else certification_service
        outcomes = service.check(_spec(request), request.target, request.property, request.lo, request.hi)
        return {
            "target": request.target,
            "property": request.property,
            "outcomes": [o.to_dict() for o in outcomes],
        }
    except TurancertError as e:
        raise _http_error(e)


@app.post("/certify")
def post_certify(request: CertifyRequest):
    try:
        cert = certification_service.certify(
            _spec(request), request.target, request.property, request.start, request.mode
        )
        return cert.model_dump(by_alias=True)
    except TurancertError as e:
        logger.info(f"certification refused: {e}")
        raise _http_error(e)


@app.post("/verify-cert", response_model=VerificationResponse)
def post_verify_cert(request: VerifyRequest):
    try:
        cert = CertificateDocument.model_validate(request.certificate)
        report = certification_service.reverify(cert, _spec(request))
        return VerificationResponse(is_valid=report.ok, failures=report.failures)
    except ValidationError as e:
        raise HTTPException(status_code=422, detail=f"certificate does not match the schema: {e}")
    except TurancertError as e:
        raise _http_error(e)


@app.post("/oeis-check")
def post_oeis_check(request: OeisCheckRequest):
    try:
        spec = _spec(request)
        if not spec.oeis_id:
            raise HTTPException(status_code=422, detail=f"spec {spec.name} has no oeis_id")
        bfile = OeisClient().resolve(spec.oeis_id)
        return cross_validate(spec.sequence(), bfile, request.limit, request.lower).to_dict()
    except TurancertError as e:
        raise _http_error(e)


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host=Settings.API_HOST, port=Settings.API_PORT)
