# models/certificate.py
import json
from typing import Any, Dict, List, Optional

from cryptography.hazmat.primitives import hashes
from pydantic import BaseModel, ConfigDict, Field

CERTIFICATE_SCHEMA = "turancert/1"
GENERATOR = "turancert"
GENERATOR_VERSION = "1.0.0"


class ThresholdRecord(BaseModel):
    label: str
    expression: str
    threshold: int
    witness: str
    root_bound: int


class WindowCheck(BaseModel):
    """One directly checked index; ``enclosure`` is the checked quantity as decimal-string endpoints."""

    index: int
    status: str
    enclosure: List[str]
    precision: int


class RatioBoundsStage(BaseModel):
    stage: str = "ratio_bounds"
    method: str  # "induction" or "closed_form"
    f: str
    g: str
    base: int
    conditions: List[ThresholdRecord]
    induction_from: int
    valid_from: int


class ValueBoundsStage(BaseModel):
    stage: str = "value_bounds"
    s_log: str
    S_log: str
    lower_step: Optional[Dict[str, Any]]
    upper_step: Optional[Dict[str, Any]]
    induction_from: int
    window: List[WindowCheck]
    valid_from: int


class UBoundsStage(BaseModel):
    stage: str = "u_bounds"
    fu: str
    gu: str
    lower_descent: Dict[str, Any]
    upper_descent: Dict[str, Any]
    induction_from: int
    window: List[WindowCheck]
    valid_from: int


class CriterionStage(BaseModel):
    stage: str = "criterion"
    property: str
    target: str
    mode: str
    compositions: List[ThresholdRecord]
    threshold: int
    side_condition: Optional[ThresholdRecord] = None
    lower_bound_positive_from: int
    coverage_from: int


class CertificateStages(BaseModel):
    ratio_bounds: RatioBoundsStage
    value_bounds: ValueBoundsStage
    u_bounds: UBoundsStage
    criterion: CriterionStage


class InitialWindow(BaseModel):
    """Indices in [from, to) checked directly."""

    model_config = ConfigDict(populate_by_name=True)

    from_: int = Field(alias="from")
    to: int
    method: str
    precision: int
    outcomes: List[WindowCheck]


class PolicyRecord(BaseModel):
    start_precision: int
    precision_cap: int
    eval_budget: int


class CertificateMetadata(BaseModel):
    generator: str = GENERATOR
    version: str = GENERATOR_VERSION
    digest: str = ""


class CertificateDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_id: str = Field(CERTIFICATE_SCHEMA, alias="schema")
    sequence: str
    oeis_id: Optional[str] = None
    target: str
    property: str
    mode: str
    start: int
    policy: PolicyRecord
    stages: CertificateStages
    initial_window: InitialWindow
    overall_from: int
    metadata: CertificateMetadata = Field(default_factory=CertificateMetadata)

    def canonical_payload(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True, exclude={"metadata": {"digest"}})

    def compute_digest(self) -> str:
        encoded = json.dumps(self.canonical_payload(), sort_keys=True, separators=(",", ":")).encode()
        digest = hashes.Hash(hashes.SHA256())
        digest.update(encoded)
        return digest.finalize().hex()

    def sealed(self) -> "CertificateDocument":
        digest = self.compute_digest()
        return self.model_copy(update={"metadata": self.metadata.model_copy(update={"digest": digest})})

    def to_json(self) -> str:
        return json.dumps(self.model_dump(by_alias=True), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CertificateDocument":
        return cls.model_validate_json(text)
