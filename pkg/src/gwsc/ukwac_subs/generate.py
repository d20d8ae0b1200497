"""3-class dataset generation from a plain sentence corpus.

Every content word with candidate substitutes is a potential training
instance (a sentence can yield several). Each instance is assigned class
(a) correct substitute, (b) out-of-context synonym or (c) random same-POS
word, by a seeded draw against exact largest-remainder quotas, and the
target span is replaced by the class-appropriate word.
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from gwsc.core.types import ContextedTarget, LabeledPair
from gwsc.datagen.tagger import PosTagger
from gwsc.errors import EmptyRanking
from gwsc.ukwac_subs.embedder import ContextEmbedder
from gwsc.ukwac_subs.ppdb import ParaphraseTable
from gwsc.ukwac_subs.ranking import (
    candidate_substitutes,
    rank_substitutes,
    select_different_meaning,
    select_random_word,
    select_same_meaning,
)

log = logging.getLogger(__name__)

CLASSES = ("a", "b", "c")


@dataclass(frozen=True)
class UkwacInstance:
    """An original sentence and its single-span substitution."""

    original_sentence: str
    substituted_sentence: str
    original_span: tuple[int, int]
    substituted_span: tuple[int, int]
    cls: str
    lemma: str
    pos: str
    substitute: str

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise ValueError(f"class must be one of {CLASSES}, got {self.cls!r}")


def largest_remainder(n: int, proportions: Sequence[float]) -> tuple[int, ...]:
    """Integer allocation of ``n`` by proportions, exact at any n."""
    if abs(sum(proportions) - 1.0) > 1e-9:
        raise ValueError(f"proportions must sum to 1, got {sum(proportions)}")
    floors = [int(n * p) for p in proportions]
    remainders = [(n * p) % 1.0 for p in proportions]
    missing = n - sum(floors)
    # hand out leftover units to the largest fractional remainders; ties by index
    order = sorted(range(len(proportions)), key=lambda i: (-remainders[i], i))
    for i in order[:missing]:
        floors[i] += 1
    return tuple(floors)


def build_pos_vocabulary(
    sentences: Iterable[str], tagger: PosTagger, min_freq: int = 5
) -> dict[str, list[str]]:
    """POS-indexed lemma lists from the corpus itself (min frequency filter)."""
    counts: dict[str, Counter] = {}
    for sentence in sentences:
        for tok in tagger.tag(sentence):
            counts.setdefault(tok.pos, Counter())[tok.lemma] += 1
    return {
        pos: sorted(w for w, c in counter.items() if c >= min_freq)
        for pos, counter in counts.items()
    }


def generate_dataset(
    corpus: Iterable[str],
    table: ParaphraseTable,
    embedder: ContextEmbedder,
    vocabulary: Mapping[str, Sequence[str]],
    tagger: PosTagger,
    n: int = 100_000,
    proportions: Sequence[float] = (0.40, 0.30, 0.30),
    seed: int = 0,
    min_score: float = 2.0,
) -> list[UkwacInstance]:
    """Generate up to ``n`` substitution instances with exact class quotas.

    Sentences are consumed in order; within a sentence, content words in
    token order. Each rankable instance draws its class from the remaining
    quotas (so final counts match the largest-remainder allocation exactly);
    instances that cannot serve the drawn class fall back to the classes
    they can serve. Deterministic given the seed. When the corpus runs out
    before the quotas fill, all available instances are returned with a
    warning.
    """
    quotas = dict(zip(CLASSES, largest_remainder(n, proportions)))
    rng = random.Random(seed)
    out: list[UkwacInstance] = []

    for sentence in corpus:
        if all(q == 0 for q in quotas.values()):
            break
        for tok in tagger.tag(sentence):
            if all(q == 0 for q in quotas.values()):
                break
            if tok.pos not in ("NOUN", "VERB", "ADJ", "ADV"):
                continue
            candidates = candidate_substitutes(tok.lemma, tok.pos, table, min_score)
            if not candidates:
                continue
            instance = ContextedTarget(sentence, tok.start, tok.end, tok.lemma, tok.pos)
            try:
                ranking = rank_substitutes(instance, candidates, embedder)
            except EmptyRanking:
                continue
            if not len(ranking):
                continue

            choices = {"a": select_same_meaning(ranking)}
            different = select_different_meaning(ranking, table)
            if different is not None:
                choices["b"] = different
            exclude = {tok.lemma} | set(ranking.words)
            eligible_c = [w for w in vocabulary.get(tok.pos, ()) if w not in exclude]
            if eligible_c:
                choices["c"] = None  # drawn lazily below

            feasible = [c for c in CLASSES if quotas[c] > 0 and c in choices]
            if not feasible:
                continue
            cls = rng.choices(feasible, weights=[quotas[c] for c in feasible])[0]
            substitute = (
                select_random_word(tok.pos, vocabulary, exclude, rng)
                if cls == "c"
                else choices[cls]
            )
            if substitute == instance.surface:
                continue  # substitution would leave the sentence unchanged
            substituted = sentence[: tok.start] + substitute + sentence[tok.end :]
            out.append(
                UkwacInstance(
                    original_sentence=sentence,
                    substituted_sentence=substituted,
                    original_span=(tok.start, tok.end),
                    substituted_span=(tok.start, tok.start + len(substitute)),
                    cls=cls,
                    lemma=tok.lemma,
                    pos=tok.pos,
                    substitute=substitute,
                )
            )
            quotas[cls] -= 1

    remaining = sum(quotas.values())
    if remaining:
        log.warning(
            "corpus exhausted: generated %d of %d instances (missing %s)",
            len(out), n, {c: q for c, q in quotas.items() if q},
        )
    return out


def instances_to_pairs(instances: Iterable[UkwacInstance], language: str = "en") -> list[LabeledPair]:
    """View substitution instances as labeled pairs (classes A/B/C)."""
    pairs = []
    for inst in instances:
        pairs.append(
            LabeledPair(
                a=ContextedTarget(
                    inst.original_sentence, *inst.original_span,
                    lemma=inst.lemma, pos=inst.pos, language=language,
                ),
                b=ContextedTarget(
                    inst.substituted_sentence, *inst.substituted_span,
                    lemma=inst.substitute, pos=inst.pos, language=language,
                ),
                label=inst.cls.upper(),
                source="UKWAC_SUBS",
            )
        )
    return pairs


def split_holdout(
    pairs: Sequence[LabeledPair], k: int, seed: int = 0
) -> tuple[list[LabeledPair], list[LabeledPair]]:
    """Split off ``k`` held-out pairs, stratified by label, seeded."""
    rng = random.Random(seed)
    by_label: dict[str, list[LabeledPair]] = {}
    for pair in pairs:
        by_label.setdefault(pair.label, []).append(pair)
    labels = sorted(by_label)
    share = largest_remainder(min(k, len(pairs)), [len(by_label[l]) / len(pairs) for l in labels])
    heldout, train = [], []
    for label, take in zip(labels, share):
        group = by_label[label]
        take = min(take, len(group))
        picked = set(rng.sample(range(len(group)), take))
        for i, pair in enumerate(group):
            (heldout if i in picked else train).append(pair)
    return train, heldout
