"""Sanity statistics for symbol streams: counts, monobit, runs, chi-square.

These are desk-scale health checks, not a randomness battery; no statistical
test can establish the unpredictability property the physical protocol is
designed around.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import chi2

from .pipeline import BINARY, SymbolStream


@dataclass(frozen=True)
class StatsReport:
    alphabet: str
    n: int
    counts: dict[str, int]
    monobit_z: float | None = None
    runs: int | None = None
    runs_z: float | None = None
    chi_square: float | None = None
    chi_square_dof: int | None = None
    chi_square_p: float | None = None
    expected: list[float] | None = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> str:
        payload = asdict(self)
        payload["notes"] = list(self.notes)
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "StatsReport":
        data = json.loads(text)
        data["notes"] = tuple(data.get("notes", ()))
        return cls(**data)


def monobit_z(bits: np.ndarray) -> float:
    """(n1 - n/2) / (sqrt(n)/2): standard-normal under fair bits."""
    n = bits.size
    ones = int(np.count_nonzero(bits))
    return (ones - n / 2.0) / (math.sqrt(n) / 2.0)


def runs_statistics(bits: np.ndarray) -> tuple[int, float | None]:
    """Total runs and the Wald-Wolfowitz z-score (None when degenerate)."""
    n = bits.size
    total = 1 + int(np.count_nonzero(np.diff(bits)))
    ones = int(np.count_nonzero(bits))
    zeros = n - ones
    if n < 2 or ones == 0 or zeros == 0:
        return total, None
    mu = 2.0 * ones * zeros / n + 1.0
    var = 2.0 * ones * zeros * (2.0 * ones * zeros - n) / (n * n * (n - 1.0))
    if var <= 0.0:
        return total, None
    return total, (total - mu) / math.sqrt(var)


def chi_square_vs(counts: np.ndarray, expected_probs: np.ndarray) -> tuple[float, int, float]:
    """Pearson statistic against expected cell probabilities.

    Zero-probability cells are excluded from the statistic (and the degrees
    of freedom) unless they were observed, in which case the statistic is
    infinite and the p-value zero.
    """
    n = int(counts.sum())
    mask = expected_probs > 0.0
    if np.any(counts[~mask] > 0):
        return math.inf, int(mask.sum()) - 1, 0.0
    exp = expected_probs[mask] * n
    stat = float(np.sum((counts[mask] - exp) ** 2 / exp)) if n else 0.0
    dof = int(mask.sum()) - 1
    p = float(chi2.sf(stat, dof)) if dof > 0 else 1.0
    return stat, dof, p


def analyze_stream(stream: SymbolStream, expected=None) -> StatsReport:
    """Compute the report for a stream.

    Monobit and runs apply to binary streams; chi-square needs an expected
    distribution (explicit argument, else the sidecar distribution recorded
    at generation time).
    """
    notes: list[str] = []
    width = 2 if stream.alphabet == BINARY else 3
    counts_arr = np.bincount(stream.symbols, minlength=width).astype(float)
    n = len(stream)

    mono = runs_total = runs_score = None
    if stream.alphabet == BINARY:
        if n == 0:
            notes.append("monobit/runs undefined for an empty stream")
        else:
            mono = monobit_z(stream.symbols)
            runs_total, runs_score = runs_statistics(stream.symbols)
            if runs_score is None:
                notes.append("runs z undefined for a constant stream")
    else:
        notes.append("monobit/runs apply to binary streams only")

    if expected is None:
        expected = stream.meta.get("distribution")
        if expected is not None and len(expected) != width:
            expected = None
    stat = dof = pval = None
    exp_list = None
    if expected is not None:
        exp_arr = np.asarray(expected, dtype=float)
        if exp_arr.size != width:
            raise ValueError(f"expected distribution needs {width} entries")
        if n == 0:
            notes.append("chi-square undefined for an empty stream")
        else:
            stat, dof, pval = chi_square_vs(counts_arr, exp_arr)
        exp_list = [float(p) for p in exp_arr]
    else:
        notes.append("no expected distribution: chi-square skipped")

    return StatsReport(
        alphabet=stream.alphabet,
        n=n,
        counts={str(i): int(counts_arr[i]) for i in range(width)},
        monobit_z=mono,
        runs=runs_total,
        runs_z=runs_score,
        chi_square=stat,
        chi_square_dof=dof,
        chi_square_p=pval,
        expected=exp_list,
        notes=tuple(notes),
    )
