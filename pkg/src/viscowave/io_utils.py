"""Deterministic CSV formatting and atomic file writes."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

FLOAT_FORMAT = "%.12g"


def format_table(header: list[str], columns, comments: list[str] | None = None) -> str:
    """CSV text with ``#`` comment lines, a header row and 12-significant-digit values."""
    lines = [f"# {c}" for c in (comments or [])]
    lines.append(",".join(header))
    cols = [np.asarray(c) for c in columns]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (str, bytes)):
        return str(v)
    return FLOAT_FORMAT % float(v)


def atomic_write(path: str | Path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
