"""Correlation metrics and file-level scoring.

Implements the two GWSC scores: uncentered Pearson for similarity-change
predictions (subtask 1) and the harmonic mean of Pearson and Spearman for
in-context similarity predictions (subtask 2). All formulas are written out
explicitly; the test suite checks them against independent library oracles.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gwsc.errors import (
    DegenerateDenominator,
    LengthMismatch,
    RowCountMismatch,
    ZeroSeries,
    ZeroVariance,
)

log = logging.getLogger(__name__)

SUBTASK1_HEADER = "change"
SUBTASK2_HEADER = "sim_context1\tsim_context2"


@dataclass(frozen=True)
class EvalResult:
    metric: str
    value: float
    n: int

    def to_dict(self) -> dict:
        return {"metric": self.metric, "value": self.value, "n": self.n}


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=np.float64).reshape(-1)
    ya = np.asarray(y, dtype=np.float64).reshape(-1)
    if xa.shape != ya.shape:
        raise LengthMismatch(f"series lengths differ: {xa.size} vs {ya.size}")
    if xa.size < 2:
        raise LengthMismatch("correlation needs at least 2 points")
    return xa, ya


def uncentered_pearson(x, y) -> float:
    """Raw-product correlation: sum(x*y) / sqrt(sum(x^2) * sum(y^2))."""
    xa, ya = _pair(x, y)
    sxx, syy = float(xa @ xa), float(ya @ ya)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroSeries("uncentered correlation undefined for an all-zero series")
    return float(xa @ ya) / math.sqrt(sxx * syy)


def pearson(x, y) -> float:
    """Standard centered Pearson correlation."""
    xa, ya = _pair(x, y)
    xc, yc = xa - xa.mean(), ya - ya.mean()
    sxx, syy = float(xc @ xc), float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("Pearson correlation undefined for a constant series")
    return float(xc @ yc) / math.sqrt(sxx * syy)


def average_ranks(x) -> np.ndarray:
    """1-based ranks with ties replaced by the mean rank of the tie group."""
    xa = np.asarray(x, dtype=np.float64).reshape(-1)
    order = np.argsort(xa, kind="stable")
    ranks = np.empty(xa.size, dtype=np.float64)
    i = 0
    while i < xa.size:
        j = i
        while j + 1 < xa.size and xa[order[j + 1]] == xa[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Pearson correlation over average-rank transforms."""
    xa, ya = _pair(x, y)
    return pearson(average_ranks(xa), average_ranks(ya))


def harmonic_mean(a: float, b: float) -> float:
    """2ab / (a + b)."""
    if a + b == 0.0:
        raise DegenerateDenominator(f"harmonic mean undefined for {a} + {b} = 0")
    return 2.0 * a * b / (a + b)


# --------------------------------------------------------------- file level


def _read_tsv_columns(path, expected_header: str) -> list[list[float]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != expected_header:
        raise RowCountMismatch(
            f"{path}: expected header {expected_header!r}, got {lines[0] if lines else '<empty>'!r}"
        )
    n_cols = expected_header.count("\t") + 1
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != n_cols:
            raise RowCountMismatch(f"{path}:{i}: expected {n_cols} columns, got {len(parts)}")
        rows.append([float(p) for p in parts])
    return rows


def evaluate(pred_file, gold_file, subtask: int, aggregate: str = "concat") -> EvalResult:
    """Score a prediction file against a gold file.

    Subtask 1 uses uncentered Pearson over the ``change`` column. Subtask 2
    concatenates the two similarity columns into one series before computing
    the harmonic mean of Pearson and Spearman (``aggregate="columns"``
    instead averages the per-column harmonic means). Rows where either side
    is non-finite are excluded pairwise with a warning.
    """
    if subtask not in (1, 2):
        raise ValueError(f"subtask must be 1 or 2, got {subtask}")
    header = SUBTASK1_HEADER if subtask == 1 else SUBTASK2_HEADER
    pred = _read_tsv_columns(pred_file, header)
    gold = _read_tsv_columns(gold_file, header)
    if len(pred) != len(gold):
        raise RowCountMismatch(
            f"row counts differ: {len(pred)} predictions vs {len(gold)} gold rows"
        )

    pred_a = np.asarray(pred, dtype=np.float64)
    gold_a = np.asarray(gold, dtype=np.float64)
    keep = np.isfinite(pred_a).all(axis=1) & np.isfinite(gold_a).all(axis=1)
    if not keep.all():
        log.warning("excluding %d row(s) with null predictions", int((~keep).sum()))
        pred_a, gold_a = pred_a[keep], gold_a[keep]

    if subtask == 1:
        value = uncentered_pearson(pred_a[:, 0], gold_a[:, 0])
        return EvalResult("uncentered_pearson", value, int(pred_a.shape[0]))

    if aggregate == "concat":
        p = np.concatenate([pred_a[:, 0], pred_a[:, 1]])
        g = np.concatenate([gold_a[:, 0], gold_a[:, 1]])
        value = harmonic_mean(pearson(p, g), spearman(p, g))
        return EvalResult("harmonic_pearson_spearman", value, int(p.size))
    if aggregate == "columns":
        vals = [
            harmonic_mean(pearson(pred_a[:, c], gold_a[:, c]), spearman(pred_a[:, c], gold_a[:, c]))
            for c in (0, 1)
        ]
        return EvalResult(
            "harmonic_pearson_spearman_columns",
            float(np.mean(vals)),
            int(pred_a.size),
        )
    raise ValueError(f"aggregate must be 'concat' or 'columns', got {aggregate!r}")
