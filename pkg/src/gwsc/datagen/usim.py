"""Graded usage-similarity annotations and their binarization.

Annotations score two usages of the same word from 1 (completely different)
to 5 (same meaning). Scores below the low threshold become F pairs, scores
above the high threshold become T pairs, and the middle band is excluded.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from gwsc.core.types import ContextedTarget, LabeledPair
from gwsc.errors import MalformedRow


@dataclass(frozen=True)
class UsimAnnotation:
    a: ContextedTarget
    b: ContextedTarget
    score: float

    def __post_init__(self):
        if self.a.lemma != self.b.lemma:
            raise ValueError(
                f"usage pair must share a lemma: {self.a.lemma!r} vs {self.b.lemma!r}"
            )
        if not (1.0 <= self.score <= 5.0):
            raise ValueError(f"similarity score {self.score} outside [1, 5]")


def read_usim(path, language: str = "en") -> list[UsimAnnotation]:
    """Read a usage-similarity table.

    Format: 9-column TSV, one annotation per line:
    lemma, pos, sentence1, start1, end1, sentence2, start2, end2, score.
    Lines starting with ``#`` are comments.
    """
    annotations = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 9:
            raise MalformedRow(path, i, f"expected 9 columns, got {len(parts)}")
        lemma, pos, s1, st1, e1, s2, st2, e2, score = parts
        try:
            annotations.append(
                UsimAnnotation(
                    a=ContextedTarget(s1, int(st1), int(e1), lemma, pos, language),
                    b=ContextedTarget(s2, int(st2), int(e2), lemma, pos, language),
                    score=float(score),
                )
            )
        except (ValueError, TypeError) as exc:
            raise MalformedRow(path, i, str(exc)) from exc
    return annotations


def binarize_usim(
    annotations: list[UsimAnnotation], low: float = 2.0, high: float = 4.0
) -> list[LabeledPair]:
    """Map graded annotations to T/F pairs with strict thresholds.

    score < low -> F, score > high -> T, anything in [low, high] is excluded.
    The graded score is preserved on the emitted pair.
    """
    if not low < high:
        raise ValueError(f"low threshold must be below high ({low} vs {high})")
    pairs = []
    for ann in annotations:
        if ann.score < low:
            label = "F"
        elif ann.score > high:
            label = "T"
        else:
            continue
        pairs.append(
            LabeledPair(a=ann.a, b=ann.b, label=label, source="USIM", graded_score=ann.score)
        )
    return pairs
