"""
Pydantic schemas for verification reports.
"""
from datetime import datetime, timezone
from enum import Enum
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = "qlab.report/1"
MAX_WITNESSES = 20


class CheckStatus(str, Enum):
    """Outcome of one check."""
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"


class CheckRecord(BaseModel):
    """Schema for one check outcome with its counterexample witnesses."""
    check: str
    status: CheckStatus
    stage: Optional[int] = None
    detail: str = ""
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)
    witness_count: int = 0


class RunMetadata(BaseModel):
    """Schema for the run that produced a report."""
    schema_version: str = SCHEMA_VERSION
    command: str
    quantale: Optional[str] = None
    config: Dict[str, Any] = Field(default_factory=dict)
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    finished_at: Optional[datetime] = None


class Report(BaseModel):
    """Ordered list of check records; a run fails iff any record failed."""
    metadata: RunMetadata
    records: List[CheckRecord] = Field(default_factory=list)

    def add(
        self,
        check: str,
        status: CheckStatus,
        stage: Optional[int] = None,
        detail: str = "",
        witnesses: Optional[List[Dict[str, Any]]] = None,
    ) -> CheckRecord:
        witnesses = witnesses or []
        record = CheckRecord(
            check=check,
            status=status,
            stage=stage,
            detail=detail,
            witnesses=witnesses[:MAX_WITNESSES],
            witness_count=len(witnesses),
        )
        self.records.append(record)
        return record

    def expect(
        self,
        check: str,
        witnesses: List[Dict[str, Any]],
        stage: Optional[int] = None,
        detail: str = "",
        soft: bool = False,
    ) -> CheckRecord:
        """Record pass when there are no witnesses, else fail (or info when soft)."""
        if not witnesses:
            return self.add(check, CheckStatus.PASS, stage, detail)
        status = CheckStatus.INFO if soft else CheckStatus.FAIL
        return self.add(check, status, stage, detail, witnesses)

    def find(self, check: str) -> List[CheckRecord]:
        return [r for r in self.records if r.check == check]

    @property
    def failed(self) -> bool:
        return any(r.status == CheckStatus.FAIL for r in self.records)

    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def finish(self) -> "Report":
        self.metadata.finished_at = datetime.now(timezone.utc)
        return self

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def canonical_json(self) -> str:
        """JSON without timestamps; identical for identical runs."""
        data = self.model_dump(
            mode="json",
            exclude={"metadata": {"started_at", "finished_at"}},
        )
        return json.dumps(data, indent=2, sort_keys=True)

    def summary_counts(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in CheckStatus}
        for record in self.records:
            counts[record.status.value] += 1
        return counts


def new_report(command: str, quantale: Optional[str] = None, config: Optional[Dict[str, Any]] = None) -> Report:
    """Start an empty report for one command."""
    return Report(metadata=RunMetadata(command=command, quantale=quantale, config=config or {}))
