# models/spec.py
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

SPEC_SCHEMA = "turancert-spec/1"


class BoundEntry(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    expr: str
    from_: int = Field(alias="from")


class BoundsBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    f: Optional[BoundEntry] = None
    g: Optional[BoundEntry] = None
    s_log: Optional[BoundEntry] = None
    S_log: Optional[BoundEntry] = None
    fu: Optional[BoundEntry] = None
    gu: Optional[BoundEntry] = None


class InitialBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: int = 0
    values: List[str]


class SequenceSpecDocument(BaseModel):
    """On-disk sequence description; all numbers are decimal strings."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_id: str = Field(SPEC_SCHEMA, alias="schema")
    name: str
    description: Optional[str] = None
    order: int = Field(ge=1)
    coeffs: List[str]
    shift: int = 0
    initial: InitialBlock
    positivity_from: int
    oeis_id: Optional[str] = None
    bounds: Optional[BoundsBlock] = None
