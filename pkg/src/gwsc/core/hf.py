"""Adapter for pretrained HuggingFace encoders.

Production runs plug any ``AutoModel`` with a fast tokenizer in here; the
rest of the pipeline only sees the :class:`~gwsc.core.backends.EncoderBackend`
contract. Imported lazily so the package works without ``transformers``.
"""

from __future__ import annotations

from typing import Sequence

import torch
from torch import nn

from gwsc.core.backends import EncoderBackend
from gwsc.core.types import EncodedPair, EncoderOutput
from gwsc.errors import ConfigError


class _HFTokenizerShim:
    """Exposes the pad/cls/sep ids the pair builder expects."""

    def __init__(self, hf_tokenizer):
        self.hf = hf_tokenizer
        self.pad_id = hf_tokenizer.pad_token_id or 0
        self.cls_id = hf_tokenizer.cls_token_id
        self.sep_id = hf_tokenizer.sep_token_id


class HFEncoder(EncoderBackend):
    """Wraps a pretrained transformer as an encoder backend.

    Requires a fast tokenizer (for ``return_offsets_mapping``).
    """

    def __init__(self, model_name: str, dropout: float = 0.1):
        try:
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:  # pragma: no cover
            raise ConfigError(
                "transformers is not installed; install the 'hf' extra to use "
                "pretrained backends"
            ) from exc
        self.model_name = model_name
        self._hf_tokenizer = AutoTokenizer.from_pretrained(model_name, use_fast=True)
        if not self._hf_tokenizer.is_fast:
            raise ConfigError(f"{model_name} has no fast tokenizer (offsets unavailable)")
        self.model = AutoModel.from_pretrained(model_name, output_hidden_states=True)
        self.tokenizer = _HFTokenizerShim(self._hf_tokenizer)
        self.n_layers = self.model.config.num_hidden_layers
        self.hidden_dim = self.model.config.hidden_size
        self.uncased = bool(getattr(self._hf_tokenizer, "do_lower_case", False))
        self.cls_token = self._hf_tokenizer.cls_token
        self.sep_token = self._hf_tokenizer.sep_token
        self.pad_id = self.tokenizer.pad_id
        self.set_dropout(dropout)
        self.model.eval()

    def config(self) -> dict:
        return {"model_name": self.model_name}

    def torch_module(self) -> nn.Module:
        return self.model

    def set_dropout(self, p: float) -> None:
        for mod in self.model.modules():
            if isinstance(mod, nn.Dropout):
                mod.p = p

    def tokenize(self, text: str):
        enc = self._hf_tokenizer(
            text, add_special_tokens=False, return_offsets_mapping=True
        )
        pieces = self._hf_tokenizer.convert_ids_to_tokens(enc["input_ids"])
        return pieces, list(enc["input_ids"]), [tuple(o) for o in enc["offset_mapping"]]

    def encode(self, pairs: Sequence[EncodedPair]) -> list[EncoderOutput]:
        if not pairs:
            return []
        lengths = [len(p) for p in pairs]
        max_t = max(lengths)
        ids = torch.full((len(pairs), max_t), self.pad_id, dtype=torch.long)
        segs = torch.zeros((len(pairs), max_t), dtype=torch.long)
        attn = torch.zeros((len(pairs), max_t), dtype=torch.long)
        for i, p in enumerate(pairs):
            ids[i, : lengths[i]] = torch.tensor(p.input_ids, dtype=torch.long)
            segs[i, : lengths[i]] = torch.tensor(p.segment_ids, dtype=torch.long)
            attn[i, : lengths[i]] = 1
        kwargs = {"input_ids": ids, "attention_mask": attn}
        if self.model.config.model_type in ("bert", "electra"):
            kwargs["token_type_ids"] = segs
        out = self.model(**kwargs)
        stacked = torch.stack(out.hidden_states, dim=0)  # [L+1, B, T, H]
        return [
            EncoderOutput(stacked[:, i, : lengths[i], :], pairs[i])
            for i in range(len(pairs))
        ]
