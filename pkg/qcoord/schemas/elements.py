from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from qcoord.schemas.reports import REPORT_SCHEMA_VERSION


class VersionedOut(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=REPORT_SCHEMA_VERSION, alias="schema")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True)


class TermOut(BaseModel):
    monomial: str
    coefficient: str
    exponents: List[int]
    dpower: int = 0


class ElementOut(VersionedOut):
    n: int
    variant: str
    ell: Optional[int] = None
    order: str
    value: str
    terms: List[TermOut] = []


class ExpansionEntry(BaseModel):
    basis_key: str
    classical_coeff: str


class ExpansionOut(VersionedOut):
    ell: int
    n: int
    variant: str
    entries: List[ExpansionEntry] = []


class ClassicalOut(VersionedOut):
    ell: int
    n: int
    variant: str
    value: str


class BasisOut(VersionedOut):
    ell: int
    n: int
    variant: str
    count: int
    keys: List[str] = []


class ExpressionIn(BaseModel):
    expr: str = Field(..., max_length=10000)


class ProductIn(BaseModel):
    left: str = Field(..., max_length=10000)
    right: str = Field(..., max_length=10000)
