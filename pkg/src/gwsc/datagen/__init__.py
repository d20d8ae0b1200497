"""Builders for the lexical-semantic fine-tuning datasets."""

from gwsc.datagen.tagger import LexiconTagger, PosTagger, TaggedToken
from gwsc.datagen.usim import UsimAnnotation, binarize_usim, read_usim
from gwsc.datagen.coinco import (
    SubstituteSet,
    build_coinco_pairs,
    coinco_overlap,
    label_coinco_pair,
    read_coinco,
    sample_coinco_pairs,
)
from gwsc.datagen.wic import load_wic
from gwsc.datagen.opusparcus import (
    ParaphraseRecord,
    build_opusparcus_pairs,
    load_stoplist,
    read_opusparcus,
)
from gwsc.datagen.merge import merge_dedupe
from gwsc.datagen.io import dataset_content_hash, read_dataset, write_dataset

__all__ = [
    "LexiconTagger",
    "ParaphraseRecord",
    "PosTagger",
    "SubstituteSet",
    "TaggedToken",
    "UsimAnnotation",
    "binarize_usim",
    "build_coinco_pairs",
    "build_opusparcus_pairs",
    "coinco_overlap",
    "dataset_content_hash",
    "label_coinco_pair",
    "load_stoplist",
    "load_wic",
    "merge_dedupe",
    "read_coinco",
    "read_dataset",
    "read_opusparcus",
    "read_usim",
    "sample_coinco_pairs",
    "write_dataset",
]
