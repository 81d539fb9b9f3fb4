"""
Data models for containerlab.
"""

from containerlab.models.family import FamilyClass, KFamily, NiceReport, PhiImage, StarDistance
from containerlab.models.reports import (
    CheckResult,
    ClosureProfileReport,
    CountReport,
    IsoperimetryReport,
    MaximalProfileReport,
    PartitionReport,
    PhiReport,
    RemovalProbeReport,
    Report,
    RunInfo,
    VerificationSummary,
)

__all__ = [
    "CheckResult",
    "ClosureProfileReport",
    "CountReport",
    "FamilyClass",
    "IsoperimetryReport",
    "KFamily",
    "MaximalProfileReport",
    "NiceReport",
    "PartitionReport",
    "PhiImage",
    "PhiReport",
    "RemovalProbeReport",
    "Report",
    "RunInfo",
    "StarDistance",
    "VerificationSummary",
]
