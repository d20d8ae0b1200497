"""Candidate filtering, fit scoring and substitute selection.

Candidates come from the paraphrase table (score strictly above a cutoff);
each is scored by how well it fits the target slot:

    fit = (cos(s, t) + 1) / 2 * (cos(s, C) + 1) / 2

with s the candidate's static vector, t the target word's static vector and
C the context vector. The top-ranked candidate is taken as the correct
in-context substitute; walking down the ranking, the first candidate whose
predecessor is NOT its paraphrase marks a different meaning of the target.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from gwsc.core.ops import cosine_similarity
from gwsc.core.types import ContextedTarget
from gwsc.errors import EmptyRanking, EmptyVocabulary
from gwsc.ukwac_subs.embedder import ContextEmbedder
from gwsc.ukwac_subs.ppdb import ParaphraseTable

log = logging.getLogger(__name__)


def candidate_substitutes(
    word: str, pos: str, table: ParaphraseTable, min_score: float = 2.0
) -> list[str]:
    """Table neighbors of ``word`` scoring strictly above ``min_score``.

    The table is word-level (no POS encoding), so ``pos`` is accepted for
    interface compatibility but not filtered on. Sorted for determinism.
    """
    return sorted(w for w, s in table.neighbors(word).items() if s > min_score)


def c2v_score(s, t, c) -> float:
    """Fit score in [0, 1]; 1 only when both cosines are 1."""
    return (cosine_similarity(s, t) + 1.0) / 2.0 * (cosine_similarity(s, c) + 1.0) / 2.0


@dataclass(frozen=True)
class SubstituteRanking:
    """Ordered candidate substitutes with fit scores for one target instance.

    Scores are non-increasing; ties are broken lexicographically by
    substitute. Substitutes are unique and never the target's own lemma.
    """

    instance: ContextedTarget
    ranked: tuple[tuple[str, float], ...]

    def __post_init__(self):
        seen = set()
        for (w1, score1), (w2, score2) in zip(self.ranked, self.ranked[1:]):
            if score2 > score1 or (score2 == score1 and w2 < w1):
                raise ValueError(f"ranking order violated at {w1!r} -> {w2!r}")
        for word, _ in self.ranked:
            if word in seen:
                raise ValueError(f"duplicate substitute {word!r}")
            if word == self.instance.lemma:
                raise ValueError("ranking must not contain the target lemma")
            seen.add(word)

    def __len__(self) -> int:
        return len(self.ranked)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.ranked)


def rank_substitutes(
    instance: ContextedTarget, candidates: Sequence[str], embedder: ContextEmbedder
) -> SubstituteRanking:
    """Sort candidates by fit score, descending, ties lexicographic.

    Candidates without a static vector are dropped (logged at debug level).
    """
    if not candidates:
        raise EmptyRanking("no candidates to rank")
    t = embedder.static_vec(instance.lemma)
    if t is None:
        raise EmptyRanking(f"target {instance.lemma!r} has no static vector")
    c = embedder.context_vec(instance.sentence, (instance.start, instance.end))
    scored = []
    for cand in candidates:
        if cand == instance.lemma:
            continue
        s = embedder.static_vec(cand)
        if s is None:
            log.debug("dropping candidate %r: no static vector", cand)
            continue
        scored.append((cand, c2v_score(s, t, c)))
    scored.sort(key=lambda ws: (-ws[1], ws[0]))
    return SubstituteRanking(instance=instance, ranked=tuple(scored))


def select_same_meaning(ranking: SubstituteRanking) -> str:
    """The top-ranked substitute is taken as correct in this context."""
    if not ranking.ranked:
        raise EmptyRanking("cannot select from an empty ranking")
    return ranking.ranked[0][0]


def select_different_meaning(
    ranking: SubstituteRanking, table: ParaphraseTable
) -> Optional[str]:
    """First ranked substitute whose predecessor is not its paraphrase.

    Walks adjacent ranking positions top-down; at the first adjacent pair
    missing from the table, the lower-ranked member is returned. Returns
    None when the ranking has fewer than 2 entries or every adjacent pair
    is in the table.
    """
    words = ranking.words
    for i in range(len(words) - 1):
        if not table.contains(words[i], words[i + 1]):
            return words[i + 1]
    return None


def select_random_word(
    pos: str,
    vocabulary: Mapping[str, Sequence[str]],
    exclude: set[str],
    seed: Union[int, random.Random],
) -> str:
    """Uniform seeded draw of a same-POS word outside the exclude set."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    eligible = sorted(w for w in vocabulary.get(pos, ()) if w not in exclude)
    if not eligible:
        raise EmptyVocabulary(f"no eligible {pos} word outside the exclude set")
    return eligible[rng.randrange(len(eligible))]
