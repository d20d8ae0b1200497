"""Symmetric paraphrase table with quality scores."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from gwsc.errors import MalformedRow


class ParaphraseTable:
    """Maps unordered word pairs to a paraphrase quality score.

    Lookups are case-folded and symmetric; self-pairs are never contained.
    Duplicate entries keep the highest score.
    """

    def __init__(self):
        self._neighbors: dict[str, dict[str, float]] = {}

    @classmethod
    def from_tsv(cls, path) -> "ParaphraseTable":
        """Load a 3-column TSV: word1, word2, score."""
        table = cls()
        for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedRow(path, i, f"expected 3 columns, got {len(parts)}")
            try:
                table.add(parts[0], parts[1], float(parts[2]))
            except ValueError as exc:
                raise MalformedRow(path, i, str(exc)) from exc
        return table

    def add(self, w1: str, w2: str, score: float) -> None:
        w1, w2 = w1.strip().casefold(), w2.strip().casefold()
        if not w1 or not w2 or w1 == w2:
            return
        for a, b in ((w1, w2), (w2, w1)):
            prev = self._neighbors.setdefault(a, {}).get(b)
            if prev is None or score > prev:
                self._neighbors[a][b] = score

    def contains(self, w1: str, w2: str) -> bool:
        return self.score(w1, w2) is not None

    def score(self, w1: str, w2: str) -> Optional[float]:
        return self._neighbors.get(w1.casefold(), {}).get(w2.casefold())

    def neighbors(self, word: str) -> dict[str, float]:
        return dict(self._neighbors.get(word.casefold(), {}))

    def __len__(self) -> int:
        return sum(len(v) for v in self._neighbors.values()) // 2
