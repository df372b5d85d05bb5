"""
Report and dump output: atomic file writes and the human-readable summary.
"""
import logging
import os
from pathlib import Path
import tempfile
from typing import Optional, Union

import click

from qlab.schemas.report import CheckStatus, Report

logger = logging.getLogger(__name__)

_STATUS_COLORS = {
    CheckStatus.PASS: "green",
    CheckStatus.FAIL: "red",
    CheckStatus.INFO: "cyan",
}


class ReportWriter:
    """
    Writes reports and stage dumps to the local filesystem.

    Every write goes to a temporary file in the target directory first and is
    moved into place with os.replace, so readers never see a half-written file.
    """

    def __init__(self, base_path: Optional[Union[str, Path]] = None):
        """
        Initialize the writer.

        Args:
            base_path: Directory relative paths are resolved against; the working directory when omitted
        """
        self.base_path = Path(base_path) if base_path is not None else Path.cwd()

    def resolve(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_path / path

    def write_text(self, path: Union[str, Path], text: str) -> Path:
        """
        Atomically write `text` to `path`.

        Args:
            path: Destination file
            text: Full file contents

        Returns:
            The resolved destination path
        """
        dest_path = self.resolve(path)
        dest_path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{dest_path.name}.", suffix=".tmp", dir=dest_path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(text)
            os.replace(tmp_name, dest_path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        logger.debug(f"wrote {dest_path}")
        return dest_path

    def write_report(self, path: Union[str, Path], report: Report) -> Path:
        dest_path = self.write_text(path, report.to_json() + "\n")
        logger.info(f"✅ report written to {dest_path}")
        return dest_path

    def write_dump(self, path: Union[str, Path], dump: str) -> Path:
        dest_path = self.write_text(path, dump)
        logger.info(f"✅ stage dump written to {dest_path}")
        return dest_path


def format_summary(report: Report, color: bool = False) -> str:
    """One line per record plus a totals line."""
    lines = []
    for record in report.records:
        status = record.status.value.upper()
        if color:
            status = click.style(status, fg=_STATUS_COLORS[record.status], bold=True)
        stage = f" [stage {record.stage}]" if record.stage is not None else ""
        detail = f": {record.detail}" if record.detail else ""
        witnesses = f" ({record.witness_count} witness(es))" if record.witness_count else ""
        lines.append(f"{status:<4} {record.check}{stage}{detail}{witnesses}")
    counts = report.summary_counts()
    lines.append(
        f"{counts['pass']} passed, {counts['fail']} failed, {counts['info']} info"
        f" -> exit {report.exit_code()}"
    )
    return "\n".join(lines)


def print_summary(report: Report) -> None:
    """Summary on stdout; failed records also show their first witness."""
    click.echo(format_summary(report, color=True))
    for record in report.records:
        if record.status == CheckStatus.FAIL and record.witnesses:
            click.echo(f"  {record.check}: {record.witnesses[0]}", err=True)
