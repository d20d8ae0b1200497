"""Context embedders for substitute ranking.

The ranking formula needs two things from a model: a static vector per word
and a context vector for a target slot in a sentence. Any model exposing
those (e.g. a pretrained encoder's input embeddings + a masked-target
context representation) can serve; :class:`HashEmbedder` is the
deterministic stand-in used for tests and fixture-scale runs.
"""

from __future__ import annotations

import hashlib
import re
from typing import Optional, Protocol

import numpy as np
import torch

from gwsc.core.backends import EncoderBackend
from gwsc.core.ops import build_pair_input, locate_target, pool_target
from gwsc.core.types import Dropped

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


class ContextEmbedder(Protocol):
    """Contract: deterministic vectors, matching dimensions.

    ``static_vec`` may return ``None`` for out-of-vocabulary words; such
    candidates are dropped from rankings.
    """

    def static_vec(self, word: str) -> Optional[np.ndarray]: ...

    def context_vec(self, sentence: str, span: tuple[int, int]) -> np.ndarray: ...


def _hash_seed(salt: int, key: str) -> int:
    digest = hashlib.blake2b(f"{salt}:{key}".encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class HashEmbedder:
    """Deterministic toy embedder.

    Static vectors are unit Gaussian draws seeded by a hash of the word;
    the context vector is the mean of the static vectors of all tokens
    outside the target span (a fixed fallback vector when the target is
    the only token). Optionally restricted to a vocabulary so the
    missing-static-vector path can be exercised.
    """

    def __init__(self, dim: int = 16, seed: int = 0, vocabulary: Optional[set[str]] = None):
        self.dim = dim
        self.seed = seed
        self.vocabulary = {w.casefold() for w in vocabulary} if vocabulary else None

    def static_vec(self, word: str) -> Optional[np.ndarray]:
        key = word.casefold()
        if self.vocabulary is not None and key not in self.vocabulary:
            return None
        rng = np.random.default_rng(_hash_seed(self.seed, key))
        v = rng.standard_normal(self.dim)
        return v / np.linalg.norm(v)

    def context_vec(self, sentence: str, span: tuple[int, int]) -> np.ndarray:
        vecs = []
        for m in _TOKEN_RE.finditer(sentence):
            if m.start() < span[1] and span[0] < m.end():
                continue
            rng = np.random.default_rng(_hash_seed(self.seed, m.group().casefold()))
            v = rng.standard_normal(self.dim)
            vecs.append(v / np.linalg.norm(v))
        if not vecs:
            rng = np.random.default_rng(_hash_seed(self.seed, "<empty-context>"))
            v = rng.standard_normal(self.dim)
            return v / np.linalg.norm(v)
        mean = np.mean(vecs, axis=0)
        norm = np.linalg.norm(mean)
        return mean / norm if norm > 0 else vecs[0]


class BackendContextEmbedder:
    """Adapter that derives both vector kinds from an encoder backend.

    Static vector: embedding-layer output of the word encoded alone.
    Context vector: last-layer mean over all non-target tokens of the
    sentence. Deterministic because encoding runs in eval mode.
    """

    def __init__(self, backend: EncoderBackend, max_len: int = 128):
        self.backend = backend
        self.max_len = max_len

    def _encode(self, text: str):
        pair = build_pair_input(text, None, self.backend, self.max_len)
        assert not isinstance(pair, Dropped)  # no targets declared
        self.backend.eval()
        with torch.no_grad():
            return self.backend.encode([pair])[0]

    def static_vec(self, word: str) -> Optional[np.ndarray]:
        out = self._encode(word)
        alignment = locate_target(word, (0, len(word)), self.backend, "first", out.pair)
        return pool_target(out, alignment, 0).numpy()

    def context_vec(self, sentence: str, span: tuple[int, int]) -> np.ndarray:
        out = self._encode(sentence)
        rows = [
            i
            for i, off in enumerate(out.pair.offsets)
            if off is not None and not (off.start < span[1] and span[0] < off.end)
        ]
        layer = out.layer(out.n_layers)
        if not rows:
            return layer.mean(dim=0).numpy()
        return layer[rows].mean(dim=0).numpy()
