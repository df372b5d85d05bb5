"""
Pydantic schemas for quantale files, runs and reports.
"""
from .def_config import DefConfig
from .quantale_file import QuantaleFile
from .report import SCHEMA_VERSION, CheckRecord, CheckStatus, Report, RunMetadata, new_report
from .run_spec import Command, HierarchyTag, RunSpec, Suite

__all__ = [
    "SCHEMA_VERSION",
    "CheckRecord",
    "CheckStatus",
    "Command",
    "DefConfig",
    "HierarchyTag",
    "QuantaleFile",
    "Report",
    "RunMetadata",
    "RunSpec",
    "Suite",
    "new_report",
]
