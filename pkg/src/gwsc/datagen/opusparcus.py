"""Mining T/F word-instance pairs from a quality-ranked paraphrase resource.

Paraphrase pairs above the quality cutoff that share a content word become
positive examples for that word; for each positive, one negative is sampled
from sentence pairs that contain the same word but are not paraphrases of
each other. Very frequent words (a ranked stoplist) are skipped because
their semantics are too fuzzy to supervise.
"""

from __future__ import annotations

import logging
import random
from collections import OrderedDict
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator

from gwsc.core.types import ContextedTarget, LabeledPair
from gwsc.datagen.tagger import PosTagger, content_lemmas
from gwsc.errors import InsufficientNegatives, MalformedRow

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParaphraseRecord:
    s1: str
    s2: str
    quality: float

    def __post_init__(self):
        # documented resource range is roughly 2 (worst) to 77 (best)
        if not (0.0 <= self.quality <= 100.0):
            raise ValueError(f"quality score {self.quality} outside the plausible range")


def read_opusparcus(path) -> Iterator[ParaphraseRecord]:
    """Stream a paraphrase table: 3-column TSV (sentence1, sentence2, quality)."""
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedRow(path, i, f"expected 3 columns, got {len(parts)}")
            try:
                yield ParaphraseRecord(parts[0], parts[1], float(parts[2]))
            except ValueError as exc:
                raise MalformedRow(path, i, str(exc)) from exc


def load_stoplist(path, k: int = 200) -> set[str]:
    """Take the first ``k`` entries of a rank-ordered word frequency list."""
    words = [
        line.strip().casefold()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    return set(words[:k])


def _target_for(sentence: str, lemma: str, tagged, language: str) -> ContextedTarget:
    tok = content_lemmas(tagged)[lemma]
    return ContextedTarget(sentence, tok.start, tok.end, lemma, tok.pos, language)


def build_opusparcus_pairs(
    records: Iterable[ParaphraseRecord],
    tagger: PosTagger,
    stoplist: set[str],
    target_count: int,
    seed: int = 0,
    quality_min: float = 15.0,
    language: str = "en",
) -> list[LabeledPair]:
    """Build a class-balanced T/F dataset from a paraphrase resource.

    Every T pair is a paraphrase record with quality strictly above
    ``quality_min`` whose sentences share a content word outside the
    stoplist. Its matching F pair is a uniform seeded draw from sentence
    pairs in the resource that share the same word but never co-occur as an
    above-threshold paraphrase record; when no such pair exists the T is
    dropped so the classes stay balanced. The result is cut down to
    ``target_count`` pairs (``target_count // 2`` T/F couples) by a seeded
    sample.
    """
    rng = random.Random(seed)
    records = list(records)

    # distinct sentences in first-appearance order, tagged once
    sentences: OrderedDict[str, list] = OrderedDict()
    for rec in records:
        for s in (rec.s1, rec.s2):
            if s not in sentences:
                sentences[s] = tagger.tag(s)

    paraphrase_keys = {
        frozenset((r.s1, r.s2)) for r in records if r.quality > quality_min and r.s1 != r.s2
    }
    by_word: dict[str, list[str]] = {}
    for s, tagged in sentences.items():
        for lemma in content_lemmas(tagged):
            by_word.setdefault(lemma, []).append(s)

    couples: list[tuple[LabeledPair, LabeledPair]] = []
    dropped_negatives = 0
    for rec in records:
        if rec.quality <= quality_min or rec.s1 == rec.s2:
            continue
        shared = (
            set(content_lemmas(sentences[rec.s1]))
            & set(content_lemmas(sentences[rec.s2]))
        ) - stoplist
        if not shared:
            continue
        word = rng.choice(sorted(shared))
        try:
            neg = _sample_negative(word, rec, by_word[word], paraphrase_keys, rng)
        except InsufficientNegatives:
            dropped_negatives += 1
            continue
        t_pair = LabeledPair(
            a=_target_for(rec.s1, word, sentences[rec.s1], language),
            b=_target_for(rec.s2, word, sentences[rec.s2], language),
            label="T",
            source="OPUSPARCUS",
        )
        f_pair = LabeledPair(
            a=_target_for(neg[0], word, sentences[neg[0]], language),
            b=_target_for(neg[1], word, sentences[neg[1]], language),
            label="F",
            source="OPUSPARCUS",
        )
        couples.append((t_pair, f_pair))

    if dropped_negatives:
        log.warning(
            "dropped %d positive pair(s) with no negative counterpart", dropped_negatives
        )

    keep = target_count // 2
    if len(couples) > keep:
        couples = rng.sample(couples, keep)
    return [pair for couple in couples for pair in couple]


def _sample_negative(
    word: str,
    record: ParaphraseRecord,
    candidates: list[str],
    paraphrase_keys: set[frozenset],
    rng: random.Random,
) -> tuple[str, str]:
    """Uniform draw over same-word sentence pairs that are not paraphrases."""
    eligible = [
        (x, y)
        for x, y in combinations(candidates, 2)
        if frozenset((x, y)) not in paraphrase_keys
    ]
    if not eligible:
        raise InsufficientNegatives(f"no non-paraphrase co-occurrence for {word!r}")
    return rng.choice(eligible)
