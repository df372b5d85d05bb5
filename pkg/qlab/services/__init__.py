"""
Services behind the command line: verification suites and report output.
"""
from .reporting import ReportWriter, format_summary, print_summary
from .verification import VerificationService

__all__ = ["ReportWriter", "VerificationService", "format_summary", "print_summary"]
