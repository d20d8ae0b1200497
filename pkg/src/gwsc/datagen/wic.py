"""Reader for word-in-context training files.

Distribution format: a data file with 5 tab-separated columns
(word, POS, "i-j" token index pair, sentence1, sentence2) and a sidecar
gold file with one T/F label per line. Sentences are space-tokenized;
the index pair locates the target token in each sentence.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from gwsc.core.types import ContextedTarget, LabeledPair
from gwsc.errors import MalformedRow

_POS_MAP = {"N": "NOUN", "V": "VERB", "J": "ADJ", "A": "ADJ", "R": "ADV"}


def _token_span(sentence: str, index: int) -> tuple[int, int]:
    tokens = sentence.split()
    if not (0 <= index < len(tokens)):
        raise ValueError(f"token index {index} out of range for {len(tokens)} tokens")
    pos = 0
    for k, tok in enumerate(tokens):
        start = sentence.index(tok, pos)
        if k == index:
            return start, start + len(tok)
        pos = start + len(tok)
    raise AssertionError("unreachable")


def _default_gold_path(data_path: Path) -> Path:
    name = data_path.name
    if ".data." in name:
        return data_path.with_name(name.replace(".data.", ".gold."))
    return data_path.with_suffix(".gold" + data_path.suffix)


def load_wic(
    data_path, gold_path: Optional[str] = None, language: str = "en"
) -> list[LabeledPair]:
    """Load a word-in-context data file with its gold labels.

    Emits one pair per input line; any unparsable line raises
    :class:`MalformedRow` with its 1-based line number.
    """
    data_path = Path(data_path)
    gold_path = Path(gold_path) if gold_path else _default_gold_path(data_path)
    data_lines = data_path.read_text(encoding="utf-8").splitlines()
    gold_lines = gold_path.read_text(encoding="utf-8").splitlines()

    pairs = []
    for i, line in enumerate(data_lines, 1):
        parts = line.split("\t")
        if len(parts) != 5:
            raise MalformedRow(data_path, i, f"expected 5 columns, got {len(parts)}")
        word, pos_tag, index_pair, s1, s2 = parts
        if i > len(gold_lines):
            raise MalformedRow(gold_path, i, "missing gold label")
        label = gold_lines[i - 1].strip()
        if label not in ("T", "F"):
            raise MalformedRow(gold_path, i, f"label must be T or F, got {label!r}")
        try:
            idx1_str, idx2_str = index_pair.split("-")
            span1 = _token_span(s1, int(idx1_str))
            span2 = _token_span(s2, int(idx2_str))
        except ValueError as exc:
            raise MalformedRow(data_path, i, str(exc)) from exc
        coarse = _POS_MAP.get(pos_tag.upper(), "OTHER")
        pairs.append(
            LabeledPair(
                a=ContextedTarget(s1, *span1, lemma=word, pos=coarse, language=language),
                b=ContextedTarget(s2, *span2, lemma=word, pos=coarse, language=language),
                label=label,
                source="WIC",
            )
        )
    return pairs
