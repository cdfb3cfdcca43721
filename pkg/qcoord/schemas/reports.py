from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

REPORT_SCHEMA_VERSION = 1


class CheckCase(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    input: str
    residual: str
    passed: bool = Field(alias="pass")


class CheckReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=REPORT_SCHEMA_VERSION, alias="schema")
    check: str
    n: int
    ell: Optional[int] = None
    cases: List[CheckCase] = []

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    @property
    def failures(self) -> List[CheckCase]:
        return [case for case in self.cases if not case.passed]

    def summary(self) -> str:
        ell = f" ell={self.ell}" if self.ell is not None else ""
        passed = len(self.cases) - len(self.failures)
        status = "PASS" if self.passed else "FAIL"
        return f"check {self.check} n={self.n}{ell}: {passed}/{len(self.cases)} passed [{status}]"

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True)


def merge_reports(check: str, n: int, ell: Optional[int], *reports: CheckReport) -> CheckReport:
    return CheckReport(
        check=check,
        n=n,
        ell=ell,
        cases=[case for report in reports for case in report.cases],
    )
