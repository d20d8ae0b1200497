"""Injected part-of-speech tagging.

The builders only need the coarse tagset (NOUN/VERB/ADJ/ADV/OTHER) plus a
lemma and character span per token, so the tagger is a tiny protocol any
real tagger can be adapted to. :class:`LexiconTagger` is the deterministic
built-in used with the fixture resources.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol

from gwsc.core.types import CONTENT_POS, POS_TAGS
from gwsc.errors import MalformedRow

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


@dataclass(frozen=True)
class TaggedToken:
    text: str
    start: int
    end: int
    lemma: str
    pos: str


class PosTagger(Protocol):
    def tag(self, sentence: str) -> list[TaggedToken]: ...


class LexiconTagger:
    """Lexicon lookup tagger; unknown alphabetic tokens default to NOUN.

    The lexicon maps a case-folded surface form to (lemma, coarse POS).
    Defaulting unknown words to NOUN keeps them content words, which is the
    useful behaviour when mining corpora without a full tagger.
    """

    def __init__(self, lexicon: Optional[dict[str, tuple[str, str]]] = None,
                 default_pos: str = "NOUN"):
        if default_pos not in POS_TAGS:
            raise ValueError(f"default_pos must be one of {POS_TAGS}")
        self.lexicon = dict(lexicon or {})
        self.default_pos = default_pos

    @classmethod
    def from_tsv(cls, path, default_pos: str = "NOUN") -> "LexiconTagger":
        """Load a 3-column TSV lexicon: surface, lemma, POS."""
        lexicon = {}
        for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedRow(path, i, f"expected 3 columns, got {len(parts)}")
            surface, lemma, pos = (p.strip() for p in parts)
            if pos not in POS_TAGS:
                raise MalformedRow(path, i, f"unknown POS tag {pos!r}")
            lexicon[surface.casefold()] = (lemma.casefold(), pos)
        return cls(lexicon, default_pos=default_pos)

    def tag(self, sentence: str) -> list[TaggedToken]:
        tokens = []
        for m in _TOKEN_RE.finditer(sentence):
            text = m.group()
            key = text.casefold()
            if key in self.lexicon:
                lemma, pos = self.lexicon[key]
            elif text.isalpha():
                lemma, pos = key, self.default_pos
            else:
                lemma, pos = key, "OTHER"
            tokens.append(TaggedToken(text, m.start(), m.end(), lemma, pos))
        return tokens


def content_lemmas(tokens: list[TaggedToken]) -> dict[str, TaggedToken]:
    """Map each content-word lemma to its first occurrence in the sentence."""
    out: dict[str, TaggedToken] = {}
    for tok in tokens:
        if tok.pos in CONTENT_POS and tok.lemma not in out:
            out[tok.lemma] = tok
    return out
