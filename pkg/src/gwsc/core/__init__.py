"""Domain types, tokenizer alignment, target pooling and vector similarity."""

from gwsc.core.types import (
    CONTENT_POS,
    POS_TAGS,
    SOURCES,
    ContextedTarget,
    Dropped,
    EncodedPair,
    EncoderOutput,
    LabeledPair,
    TokenAlignment,
    WordpieceOffset,
)
from gwsc.core.backends import EncoderBackend, ToyEncoder, ToyTokenizer
from gwsc.core.ops import (
    build_pair_input,
    cosine_similarity,
    locate_target,
    pool_target,
)

__all__ = [
    "CONTENT_POS",
    "POS_TAGS",
    "SOURCES",
    "ContextedTarget",
    "Dropped",
    "EncodedPair",
    "EncoderBackend",
    "EncoderOutput",
    "LabeledPair",
    "TokenAlignment",
    "ToyEncoder",
    "ToyTokenizer",
    "WordpieceOffset",
    "build_pair_input",
    "cosine_similarity",
    "locate_target",
    "pool_target",
]
