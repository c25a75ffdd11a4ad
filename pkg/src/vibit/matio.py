"""Plain-text complex matrix files: one row per line, entries like 0.5+0.5j."""

from __future__ import annotations

import numpy as np

from .errors import FormatError


def format_matrix(m) -> str:
    arr = np.asarray(m, dtype=complex)
    lines = []
    for row in arr:
        lines.append(" ".join(repr(z).strip("()") for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    rows: list[list[complex]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        entries = []
        for token in line.split():
            try:
                entries.append(complex(token))
            except ValueError as exc:
                raise FormatError(f"bad complex entry {token!r}", lineno) from exc
        if rows and len(entries) != len(rows[0]):
            raise FormatError(
                f"row has {len(entries)} entries, expected {len(rows[0])}", lineno)
        rows.append(entries)
    if not rows:
        raise FormatError("empty matrix file")
    return np.asarray(rows, dtype=complex)
