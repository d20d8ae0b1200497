"""Pluggable encoder backends.

An :class:`EncoderBackend` turns text into wordpieces with character offsets
and produces per-layer token representations. Production backends wrap a
pretrained transformer (see :mod:`gwsc.core.hf`); tests and CI run on
:class:`ToyEncoder`, a miniature transformer with deterministic seeded
weights so every pipeline stage is verifiable at desk scale.
"""

from __future__ import annotations

import re
import zlib
from abc import ABC, abstractmethod
from typing import Sequence

import torch
from torch import nn

from gwsc.core.types import EncodedPair, EncoderOutput

_WORD_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


class EncoderBackend(ABC):
    """Contract every encoder implementation must satisfy.

    ``encode`` must be deterministic given fixed weights, input and eval
    mode, and safe for concurrent read-only inference.
    """

    n_layers: int
    hidden_dim: int
    uncased: bool

    cls_token = "[CLS]"
    sep_token = "[SEP]"
    pad_id = 0

    @abstractmethod
    def tokenize(self, text: str) -> tuple[list[str], list[int], list[tuple[int, int]]]:
        """Return (wordpieces, input ids, per-piece character spans)."""

    @abstractmethod
    def encode(self, pairs: Sequence[EncodedPair]) -> list[EncoderOutput]:
        """Encode already-built input sequences into per-layer representations."""

    @abstractmethod
    def torch_module(self) -> nn.Module:
        """The underlying module, for optimization and (de)serialization."""

    @abstractmethod
    def set_dropout(self, p: float) -> None:
        """Set the encoder's internal dropout probability."""

    def train(self) -> None:
        self.torch_module().train()

    def eval(self) -> None:
        self.torch_module().eval()

    def config(self) -> dict:
        """JSON-serializable constructor arguments, for checkpoint manifests."""
        raise NotImplementedError


class ToyTokenizer:
    """Deterministic wordpiece-style tokenizer with character offsets.

    Words are regex tokens; any word longer than ``piece_len`` characters is
    split into fixed-size chunks, continuations prefixed with ``##`` (the
    prefix is not part of the character span). Ids come from a CRC32 hash of
    the (case-folded, if uncased) piece, so the vocabulary needs no fitting
    and is stable across runs.
    """

    def __init__(self, vocab_size: int = 512, piece_len: int = 4, uncased: bool = True):
        if vocab_size <= 8:
            raise ValueError("vocab_size too small for special tokens")
        self.vocab_size = vocab_size
        self.piece_len = piece_len
        self.uncased = uncased
        self.pad_id, self.cls_id, self.sep_id = 0, 1, 2
        self._n_special = 4  # pad, cls, sep, reserved

    def tokenize(self, text: str):
        pieces: list[str] = []
        ids: list[int] = []
        spans: list[tuple[int, int]] = []
        for m in _WORD_RE.finditer(text):
            word, w_start = m.group(), m.start()
            for k in range(0, len(word), self.piece_len):
                chunk = word[k : k + self.piece_len]
                piece = chunk if k == 0 else "##" + chunk
                pieces.append(piece)
                ids.append(self._piece_id(piece))
                spans.append((w_start + k, w_start + k + len(chunk)))
        return pieces, ids, spans

    def _piece_id(self, piece: str) -> int:
        key = piece.lower() if self.uncased else piece
        return self._n_special + zlib.crc32(key.encode("utf-8")) % (
            self.vocab_size - self._n_special
        )


class _Block(nn.Module):
    """Pre-norm-free mini transformer block: attention + FF with residuals."""

    def __init__(self, hidden: int, heads: int, ff: int, dropout: float):
        super().__init__()
        self.attn = nn.MultiheadAttention(hidden, heads, dropout=dropout, batch_first=True)
        self.norm1 = nn.LayerNorm(hidden)
        self.ff = nn.Sequential(nn.Linear(hidden, ff), nn.GELU(), nn.Linear(ff, hidden))
        self.norm2 = nn.LayerNorm(hidden)
        self.drop = nn.Dropout(dropout)

    def forward(self, x, pad_mask):
        attn_out, _ = self.attn(x, x, x, key_padding_mask=pad_mask, need_weights=False)
        x = self.norm1(x + self.drop(attn_out))
        x = self.norm2(x + self.drop(self.ff(x)))
        return x


class ToyEncoder(nn.Module, EncoderBackend):
    """Small trainable transformer encoder with deterministic initialization.

    All parameters are re-initialized from a local seeded generator, so two
    instances built with the same arguments have bit-identical weights.
    """

    def __init__(
        self,
        hidden_dim: int = 16,
        n_layers: int = 2,
        n_heads: int = 2,
        ff_dim: int = 32,
        vocab_size: int = 512,
        max_positions: int = 192,
        dropout: float = 0.1,
        seed: int = 0,
        uncased: bool = True,
    ):
        nn.Module.__init__(self)
        self.hidden_dim = hidden_dim
        self.n_layers = n_layers
        self.n_heads = n_heads
        self.ff_dim = ff_dim
        self.vocab_size = vocab_size
        self.max_positions = max_positions
        self.seed = seed
        self.uncased = uncased
        self.tokenizer = ToyTokenizer(vocab_size=vocab_size, uncased=uncased)

        self.tok_emb = nn.Embedding(vocab_size, hidden_dim, padding_idx=0)
        self.pos_emb = nn.Embedding(max_positions, hidden_dim)
        self.seg_emb = nn.Embedding(2, hidden_dim)
        self.emb_norm = nn.LayerNorm(hidden_dim)
        self.emb_drop = nn.Dropout(dropout)
        self.blocks = nn.ModuleList(
            _Block(hidden_dim, n_heads, ff_dim, dropout) for _ in range(n_layers)
        )
        self._reinit(seed)
        self.set_dropout(dropout)
        self.eval()

    def _reinit(self, seed: int) -> None:
        gen = torch.Generator().manual_seed(seed)
        for name, p in sorted(self.named_parameters(), key=lambda kv: kv[0]):
            with torch.no_grad():
                if p.dim() >= 2:
                    p.copy_(torch.randn(p.shape, generator=gen) * 0.08)
                elif name.endswith("weight"):  # layernorm scales
                    p.fill_(1.0)
                else:
                    p.zero_()

    def config(self) -> dict:
        return {
            "hidden_dim": self.hidden_dim,
            "n_layers": self.n_layers,
            "n_heads": self.n_heads,
            "ff_dim": self.ff_dim,
            "vocab_size": self.vocab_size,
            "max_positions": self.max_positions,
            "seed": self.seed,
            "uncased": self.uncased,
        }

    def torch_module(self) -> nn.Module:
        return self

    def set_dropout(self, p: float) -> None:
        for mod in self.modules():
            if isinstance(mod, nn.Dropout):
                mod.p = p
            elif isinstance(mod, nn.MultiheadAttention):
                mod.dropout = p

    def tokenize(self, text: str):
        return self.tokenizer.tokenize(text)

    def forward(self, input_ids, segment_ids, pad_mask):
        positions = torch.arange(input_ids.shape[1], device=input_ids.device)
        x = (
            self.tok_emb(input_ids)
            + self.pos_emb(positions)[None, :, :]
            + self.seg_emb(segment_ids)
        )
        x = self.emb_drop(self.emb_norm(x))
        states = [x]
        for block in self.blocks:
            x = block(x, pad_mask)
            states.append(x)
        return states

    def encode(self, pairs: Sequence[EncodedPair]) -> list[EncoderOutput]:
        if not pairs:
            return []
        lengths = [len(p) for p in pairs]
        max_t = max(lengths)
        ids = torch.full((len(pairs), max_t), self.tokenizer.pad_id, dtype=torch.long)
        segs = torch.zeros((len(pairs), max_t), dtype=torch.long)
        pad_mask = torch.ones((len(pairs), max_t), dtype=torch.bool)
        for i, p in enumerate(pairs):
            ids[i, : lengths[i]] = torch.tensor(p.input_ids, dtype=torch.long)
            segs[i, : lengths[i]] = torch.tensor(p.segment_ids, dtype=torch.long)
            pad_mask[i, : lengths[i]] = False
        states = self.forward(ids, segs, pad_mask)
        stacked = torch.stack(states, dim=0)  # [L+1, B, T, H]
        return [
            EncoderOutput(stacked[:, i, : lengths[i], :], pairs[i])
            for i in range(len(pairs))
        ]
