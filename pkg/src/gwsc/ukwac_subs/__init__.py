"""3-class substitution dataset: correct / out-of-context / random substitutes."""

from gwsc.ukwac_subs.ppdb import ParaphraseTable
from gwsc.ukwac_subs.embedder import BackendContextEmbedder, ContextEmbedder, HashEmbedder
from gwsc.ukwac_subs.ranking import (
    SubstituteRanking,
    c2v_score,
    candidate_substitutes,
    rank_substitutes,
    select_different_meaning,
    select_random_word,
    select_same_meaning,
)
from gwsc.ukwac_subs.generate import (
    UkwacInstance,
    build_pos_vocabulary,
    generate_dataset,
    instances_to_pairs,
    largest_remainder,
    split_holdout,
)

__all__ = [
    "BackendContextEmbedder",
    "ContextEmbedder",
    "HashEmbedder",
    "ParaphraseTable",
    "SubstituteRanking",
    "UkwacInstance",
    "build_pos_vocabulary",
    "c2v_score",
    "candidate_substitutes",
    "generate_dataset",
    "instances_to_pairs",
    "largest_remainder",
    "rank_substitutes",
    "select_different_meaning",
    "select_random_word",
    "select_same_meaning",
    "split_holdout",
]
