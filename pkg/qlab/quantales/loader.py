"""
Reading and writing quantale files.
"""
from fractions import Fraction
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError
import yaml

from qlab.core.exceptions import QuantaleSourceError
from qlab.schemas.quantale_file import QuantaleFile
from .base import Quantale, build_from_tables
from .factory import QuantaleFactory

logger = logging.getLogger(__name__)


def load_quantale_file(path: Union[str, Path]) -> Quantale:
    """
    Load and validate a quantale file.

    The format is the structured object {"labels", "leq", "product", "bottom", "top"};
    JSON and YAML spellings are both accepted.

    Raises:
        QuantaleSourceError: File unreadable or ill-formed, with line context when known
        QuantaleValidationError: Tables violate an axiom
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise QuantaleSourceError(str(path), e.strerror or str(e)) from e

    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        if line is not None:
            problem += f": {text.splitlines()[line - 1].strip()!r}" if line <= len(text.splitlines()) else ""
        raise QuantaleSourceError(str(path), problem, line=line) from e

    if not isinstance(raw, dict):
        raise QuantaleSourceError(str(path), "top level must be an object", line=1)

    try:
        spec = QuantaleFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "file"
        raise QuantaleSourceError(
            str(path), f"{where}: {first['msg']}", line=_line_of_key(text, first["loc"])
        ) from e

    values = None
    if spec.values is not None:
        try:
            values = [Fraction(v) for v in spec.values]
        except (ValueError, ZeroDivisionError) as e:
            raise QuantaleSourceError(str(path), f"values: {e}") from e

    logger.info(f"Loaded quantale tables from {path}")
    return build_from_tables(
        spec.labels,
        spec.leq,
        spec.product,
        spec.bottom,
        spec.top,
        name=spec.name or path.stem,
        values=values,
    )


def _line_of_key(text: str, loc) -> Union[int, None]:
    if not loc:
        return None
    key = str(loc[0])
    for number, line in enumerate(text.splitlines(), start=1):
        if f'"{key}"' in line or line.lstrip().startswith(f"{key}:"):
            return number
    return None


def load_quantale(source: str) -> Quantale:
    """Resolve a builtin name or a file path."""
    if Path(source).is_file():
        return load_quantale_file(source)
    if ":" not in source:
        raise QuantaleSourceError(source, "no such file and not a builtin name")
    return QuantaleFactory.create(source)


def dump_quantale(q: Quantale) -> str:
    """Serialize tables in the quantale file format."""
    return json.dumps(q.to_tables(), indent=2)
