"""Core domain types for contextualized word-pair data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import torch

from gwsc.errors import LayerOutOfRange

POS_TAGS = ("NOUN", "VERB", "ADJ", "ADV", "OTHER")
CONTENT_POS = frozenset({"NOUN", "VERB", "ADJ", "ADV"})

SOURCES = ("USIM", "COINCO", "WIC", "UKWAC_SUBS", "OPUSPARCUS")
BINARY_LABELS = ("F", "T")
TERNARY_LABELS = ("A", "B", "C")


@dataclass(frozen=True)
class ContextedTarget:
    """A sentence plus a character-span-located target word.

    ``sentence[start:end]`` must be a non-empty token; the span always refers
    to the original (unfolded) text.
    """

    sentence: str
    start: int
    end: int
    lemma: str
    pos: str = "OTHER"
    language: str = "en"

    def __post_init__(self):
        if not (0 <= self.start < self.end <= len(self.sentence)):
            raise ValueError(
                f"invalid target span [{self.start}, {self.end}) for sentence "
                f"of length {len(self.sentence)}"
            )
        if not self.sentence[self.start : self.end].strip():
            raise ValueError("target span covers only whitespace")
        if self.pos not in POS_TAGS:
            raise ValueError(f"pos must be one of {POS_TAGS}, got {self.pos!r}")

    @property
    def surface(self) -> str:
        return self.sentence[self.start : self.end]


@dataclass(frozen=True)
class LabeledPair:
    """Two contexted targets with a class label and optional graded score.

    Binary sources (USIM/COINCO/WIC/OPUSPARCUS) carry T/F labels; UKWAC_SUBS
    carries A/B/C. A graded score is present exactly for USIM, on the
    dataset-native 1-5 scale.
    """

    a: ContextedTarget
    b: ContextedTarget
    label: str
    source: str
    graded_score: Optional[float] = None
    pair_id: Optional[str] = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        expected = TERNARY_LABELS if self.source == "UKWAC_SUBS" else BINARY_LABELS
        if self.label not in expected:
            raise ValueError(
                f"label {self.label!r} invalid for source {self.source} "
                f"(expected one of {expected})"
            )
        if self.source == "USIM":
            if self.graded_score is None:
                raise ValueError("USIM pairs must carry a graded score")
            if not (1.0 <= self.graded_score <= 5.0):
                raise ValueError(f"graded score {self.graded_score} outside [1, 5]")
        elif self.graded_score is not None:
            raise ValueError(f"graded score only allowed for USIM, not {self.source}")


@dataclass(frozen=True)
class TokenAlignment:
    """Wordpiece positions (in the encoded sequence) covering a target word."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if not self.indices:
            raise ValueError("alignment must cover at least one wordpiece")
        for prev, nxt in zip(self.indices, self.indices[1:]):
            if nxt != prev + 1:
                raise ValueError(f"alignment indices not contiguous: {self.indices}")
        if self.indices[0] < 0:
            raise ValueError("alignment indices must be non-negative")

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class WordpieceOffset:
    """Character span of one wordpiece within sentence ``role`` (0 or 1)."""

    role: int
    start: int
    end: int


@dataclass(frozen=True)
class Dropped:
    """Sentinel: a declared target's first wordpiece sits at/after max_len."""

    role: int
    wordpiece_index: int
    max_len: int


@dataclass
class EncodedPair:
    """A single encoder input sequence built from one or two sentences.

    ``offsets`` holds one entry per kept token: a :class:`WordpieceOffset`
    for text pieces, ``None`` for special tokens. ``overflow_offsets`` keeps
    the offsets of right-truncated pieces so truncation can be diagnosed.
    """

    tokens: list[str]
    input_ids: list[int]
    segment_ids: list[int]
    offsets: list[Optional[WordpieceOffset]]
    overflow_offsets: list[WordpieceOffset] = field(default_factory=list)
    max_len: int = 128
    full_length: int = 0

    def __len__(self) -> int:
        return len(self.tokens)


class EncoderOutput:
    """Per-layer, per-token representations for one encoded sequence.

    Layer 0 is the embedding output; layers 1..n_layers are the transformer
    blocks. Layer indices outside that range raise :class:`LayerOutOfRange`.
    """

    def __init__(self, layers: torch.Tensor, pair: EncodedPair):
        if layers.dim() != 3:
            raise ValueError(f"expected [layers, seq, hidden], got {tuple(layers.shape)}")
        if layers.shape[1] != len(pair):
            raise ValueError(
                f"sequence length mismatch: {layers.shape[1]} vs {len(pair)} tokens"
            )
        self.layers = layers
        self.pair = pair

    @property
    def n_layers(self) -> int:
        return self.layers.shape[0] - 1

    @property
    def hidden_dim(self) -> int:
        return self.layers.shape[2]

    def layer(self, index: int) -> torch.Tensor:
        if not (0 <= index <= self.n_layers):
            raise LayerOutOfRange(
                f"layer {index} outside 0..{self.n_layers} "
                "(0 = embedding output, 1..n = transformer blocks)"
            )
        return self.layers[index]
