"""Pair-input construction, target alignment, pooling and cosine similarity.

All functions here are pure; they are safe to call from concurrent workers.
"""

from __future__ import annotations

import math
from typing import Optional, Union

import numpy as np
import torch

from gwsc.core.backends import EncoderBackend
from gwsc.core.types import (
    Dropped,
    EncodedPair,
    EncoderOutput,
    TokenAlignment,
    WordpieceOffset,
)
from gwsc.errors import (
    AlignmentNotFound,
    DimensionMismatch,
    TargetTruncated,
    ZeroVector,
)

ROLE_FIRST, ROLE_SECOND = 0, 1
_ROLE_NAMES = {"first": ROLE_FIRST, "second": ROLE_SECOND, 0: ROLE_FIRST, 1: ROLE_SECOND}


def _overlaps(offset: WordpieceOffset, span: tuple[int, int]) -> bool:
    return offset.start < span[1] and span[0] < offset.end


def build_pair_input(
    s1: str,
    s2: Optional[str],
    backend: EncoderBackend,
    max_len: int = 128,
    span1: Optional[tuple[int, int]] = None,
    span2: Optional[tuple[int, int]] = None,
) -> Union[EncodedPair, Dropped]:
    """Join one or two sentences into a single encoder input sequence.

    Layout is ``[CLS] s1 [SEP]`` or ``[CLS] s1 [SEP] s2 [SEP]``, right-truncated
    to ``max_len`` pieces. When a target span is declared for a sentence and
    its first covering wordpiece would land at or beyond ``max_len``, the
    example is not encodable and :class:`Dropped` is returned instead.
    """
    if not s1 or (s2 is not None and not s2):
        raise ValueError("sentences must be non-empty")
    tok = backend.tokenizer

    tokens: list[str] = [backend.cls_token]
    ids: list[int] = [tok.cls_id]
    segments: list[int] = [0]
    offsets: list[Optional[WordpieceOffset]] = [None]

    for role, (text, _span) in enumerate(((s1, span1), (s2, span2))):
        if text is None:
            continue
        pieces, piece_ids, spans = backend.tokenize(text)
        tokens.extend(pieces)
        ids.extend(piece_ids)
        segments.extend([role] * len(pieces))
        offsets.extend(WordpieceOffset(role, s, e) for s, e in spans)
        tokens.append(backend.sep_token)
        ids.append(tok.sep_id)
        segments.append(role)
        offsets.append(None)

    for role, span in ((ROLE_FIRST, span1), (ROLE_SECOND, span2)):
        if span is None:
            continue
        covering = [
            i
            for i, off in enumerate(offsets)
            if off is not None and off.role == role and _overlaps(off, span)
        ]
        if covering and covering[0] >= max_len:
            return Dropped(role=role, wordpiece_index=covering[0], max_len=max_len)

    full_length = len(tokens)
    overflow = [off for off in offsets[max_len:] if off is not None]
    return EncodedPair(
        tokens=tokens[:max_len],
        input_ids=ids[:max_len],
        segment_ids=segments[:max_len],
        offsets=offsets[:max_len],
        overflow_offsets=overflow,
        max_len=max_len,
        full_length=full_length,
    )


def locate_target(
    sentence: str,
    span: tuple[int, int],
    backend: EncoderBackend,
    sentence_role: Union[str, int],
    pair_input: EncodedPair,
) -> TokenAlignment:
    """Find the wordpiece indices of ``pair_input`` covering a character span.

    Only offsets belonging to the requested sentence segment are considered.
    Raises :class:`TargetTruncated` when covering pieces existed but were all
    cut by truncation, and :class:`AlignmentNotFound` for spans that overlap
    nothing (malformed annotation).
    """
    role = _ROLE_NAMES.get(sentence_role)
    if role is None:
        raise ValueError(f"sentence_role must be 'first' or 'second', got {sentence_role!r}")
    start, end = span
    if not (0 <= start < end <= len(sentence)):
        raise AlignmentNotFound(
            f"span [{start}, {end}) invalid for sentence of length {len(sentence)}"
        )
    indices = [
        i
        for i, off in enumerate(pair_input.offsets)
        if off is not None and off.role == role and _overlaps(off, span)
    ]
    if indices:
        return TokenAlignment(tuple(indices))
    if any(off.role == role and _overlaps(off, span) for off in pair_input.overflow_offsets):
        raise TargetTruncated(
            f"target span [{start}, {end}) falls beyond the {pair_input.max_len}-piece limit"
        )
    raise AlignmentNotFound(
        f"no wordpiece offsets overlap span [{start}, {end}) in segment {role}"
    )


def pool_target(output: EncoderOutput, alignment: TokenAlignment, layer: int) -> torch.Tensor:
    """Average the wordpiece vectors covering a target at one layer.

    Singleton alignments return the vector unchanged.
    """
    mat = output.layer(layer)
    if alignment.indices[-1] >= mat.shape[0]:
        raise AlignmentNotFound(
            f"alignment index {alignment.indices[-1]} outside sequence of length {mat.shape[0]}"
        )
    rows = mat[list(alignment.indices)]
    return rows.mean(dim=0)


def _as_1d_array(v) -> np.ndarray:
    if isinstance(v, torch.Tensor):
        v = v.detach().cpu().numpy()
    arr = np.asarray(v, dtype=np.float64).reshape(-1)
    return arr


def cosine_similarity(u, v) -> float:
    """Plain cosine: u.v / (|u||v|). Accepts sequences, arrays or tensors."""
    ua, va = _as_1d_array(u), _as_1d_array(v)
    if ua.shape != va.shape:
        raise DimensionMismatch(f"vector dims differ: {ua.shape} vs {va.shape}")
    nu, nv = math.sqrt(float(ua @ ua)), math.sqrt(float(va @ va))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine similarity undefined for a zero vector")
    # clamp float noise so identical vectors score exactly 1.0
    return min(1.0, max(-1.0, float(ua @ va) / (nu * nv)))
