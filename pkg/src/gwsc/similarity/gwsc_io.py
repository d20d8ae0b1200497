"""Reading evaluation items and writing prediction files.

Input: TSV with columns word1, word2, context1, context2 (header row;
extra columns ignored). Inside each context the two target tokens are
wrapped in ``<strong>`` ... ``</strong>`` markers; stripping the markers
yields character spans into the clean text.

Outputs: subtask 1 is a single ``change`` column; subtask 2 has columns
``sim_context1`` and ``sim_context2``. One row per input item, input
order, six decimal places, ``nan`` for null predictions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from difflib import SequenceMatcher
from pathlib import Path
from typing import Optional, Sequence

from gwsc.errors import MalformedRow
from gwsc.metrics import SUBTASK1_HEADER, SUBTASK2_HEADER

_MARKER_RE = re.compile(r"<strong>(.*?)</strong>", re.DOTALL)


@dataclass(frozen=True)
class GwscItem:
    """A word pair observed in two contexts, with target spans per context."""

    item_id: str
    word_a: str
    word_b: str
    context1: str
    context2: str
    span1_a: tuple[int, int]
    span1_b: tuple[int, int]
    span2_a: tuple[int, int]
    span2_b: tuple[int, int]
    language: str = "en"


def strip_markers(marked: str) -> tuple[str, list[tuple[int, int]]]:
    """Remove ``<strong>`` markers; return clean text and marked spans."""
    clean_parts: list[str] = []
    spans: list[tuple[int, int]] = []
    pos = 0
    clean_len = 0
    for m in _MARKER_RE.finditer(marked):
        clean_parts.append(marked[pos : m.start()])
        clean_len += m.start() - pos
        inner = m.group(1)
        spans.append((clean_len, clean_len + len(inner)))
        clean_parts.append(inner)
        clean_len += len(inner)
        pos = m.end()
    clean_parts.append(marked[pos:])
    return "".join(clean_parts), spans


def _match_score(surface: str, word: str) -> float:
    s, w = surface.casefold(), word.casefold()
    if s == w:
        return 3.0
    if s.startswith(w) or w.startswith(s):
        return 2.0
    return SequenceMatcher(None, s, w).ratio()


def _assign_spans(
    text: str, spans: Sequence[tuple[int, int]], word_a: str, word_b: str
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Decide which marked span belongs to which word."""
    (s0, s1) = spans
    surf0, surf1 = text[s0[0] : s0[1]], text[s1[0] : s1[1]]
    straight = _match_score(surf0, word_a) + _match_score(surf1, word_b)
    crossed = _match_score(surf0, word_b) + _match_score(surf1, word_a)
    return (s0, s1) if straight >= crossed else (s1, s0)


def parse_gwsc_tsv(path, language: str = "en") -> list[GwscItem]:
    """Parse an evaluation input file into items, preserving row order."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise MalformedRow(path, 1, "empty file")
    header = lines[0].split("\t")
    try:
        cols = {name: header.index(name) for name in ("word1", "word2", "context1", "context2")}
    except ValueError as exc:
        raise MalformedRow(path, 1, f"missing column in header {header}") from exc

    items = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < len(header):
            raise MalformedRow(path, i, f"expected {len(header)} columns, got {len(parts)}")
        word_a, word_b = parts[cols["word1"]], parts[cols["word2"]]
        contexts, spans_ab = [], []
        for col in ("context1", "context2"):
            clean, spans = strip_markers(parts[cols[col]])
            if len(spans) != 2:
                raise MalformedRow(
                    path, i, f"{col} must mark exactly 2 targets, found {len(spans)}"
                )
            contexts.append(clean)
            spans_ab.append(_assign_spans(clean, spans, word_a, word_b))
        items.append(
            GwscItem(
                item_id=f"row-{i - 1:04d}",
                word_a=word_a,
                word_b=word_b,
                context1=contexts[0],
                context2=contexts[1],
                span1_a=spans_ab[0][0],
                span1_b=spans_ab[0][1],
                span2_a=spans_ab[1][0],
                span2_b=spans_ab[1][1],
                language=language,
            )
        )
    return items


def _fmt(value: Optional[float]) -> str:
    return "nan" if value is None else f"{value:.6f}"


def write_subtask1(changes: Sequence[Optional[float]], path) -> None:
    lines = [SUBTASK1_HEADER] + [_fmt(v) for v in changes]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_subtask2(rows: Sequence[tuple[Optional[float], Optional[float]]], path) -> None:
    lines = [SUBTASK2_HEADER] + [f"{_fmt(a)}\t{_fmt(b)}" for a, b in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
