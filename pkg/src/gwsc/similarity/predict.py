"""In-context similarity and similarity-change prediction.

A context is encoded once as a single segment; both word representations
are pooled from that pass at the requested layer and compared by cosine.
The similarity change between two contexts is the plain difference

    delta = sim(context2) - sim(context1)

which is exactly antisymmetric under context swap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import torch

from gwsc.core.backends import EncoderBackend
from gwsc.core.ops import build_pair_input, cosine_similarity, locate_target, pool_target
from gwsc.core.types import Dropped
from gwsc.errors import GwscError, LayerOutOfRange, TargetTruncated
from gwsc.similarity.gwsc_io import GwscItem

log = logging.getLogger(__name__)


@dataclass
class PredictionRecord:
    """Per-layer similarities and deltas for one item.

    ``chosen_layer`` names the layer whose values go into the submission
    file; layer indexing is 0 = embedding output, 1..n = transformer blocks.
    Items whose targets could not be located carry ``error`` and null values.
    """

    item_id: str
    chosen_layer: int
    sim_context1: dict[int, float] = field(default_factory=dict)
    sim_context2: dict[int, float] = field(default_factory=dict)
    delta: dict[int, float] = field(default_factory=dict)
    error: Optional[str] = None

    def chosen(self, which: str) -> Optional[float]:
        table = {"sim1": self.sim_context1, "sim2": self.sim_context2, "delta": self.delta}[which]
        return table.get(self.chosen_layer)


def _encode_context(backend: EncoderBackend, context: str, span_a, span_b, max_len: int):
    built = build_pair_input(context, None, backend, max_len=max_len, span1=span_a)
    if isinstance(built, Dropped):
        raise TargetTruncated(
            f"target at wordpiece {built.wordpiece_index} beyond max_len={max_len}"
        )
    align_a = locate_target(context, span_a, backend, "first", built)
    align_b = locate_target(context, span_b, backend, "first", built)
    with torch.no_grad():
        output = backend.encode([built])[0]
    return output, align_a, align_b


def sim_in_context(
    backend: EncoderBackend,
    context: str,
    span_a: tuple[int, int],
    span_b: tuple[int, int],
    layer: int,
    max_len: int = 128,
) -> float:
    """Cosine similarity of two word representations in one context."""
    backend.eval()
    output, align_a, align_b = _encode_context(backend, context, span_a, span_b, max_len)
    return cosine_similarity(
        pool_target(output, align_a, layer), pool_target(output, align_b, layer)
    )


def delta_sim(backend: EncoderBackend, item: GwscItem, layer: int, max_len: int = 128) -> float:
    """Similarity change from context 1 to context 2 at one layer."""
    sim2 = sim_in_context(backend, item.context2, item.span2_a, item.span2_b, layer, max_len)
    sim1 = sim_in_context(backend, item.context1, item.span1_a, item.span1_b, layer, max_len)
    return sim2 - sim1


def predict_batch(
    backend: EncoderBackend,
    items: Sequence[GwscItem],
    layers: Sequence[int],
    max_len: int = 128,
    chosen_layer: Optional[int] = None,
) -> list[PredictionRecord]:
    """One record per item, all requested layers populated.

    Items with truncated or unlocatable targets are emitted with null
    predictions and a warning, never dropped. Each context is encoded once;
    all layers are pooled from that single pass.
    """
    if not layers:
        raise ValueError("at least one layer must be requested")
    for layer in layers:
        if not (0 <= layer <= backend.n_layers):
            raise LayerOutOfRange(f"layer {layer} outside 0..{backend.n_layers}")
    chosen = chosen_layer if chosen_layer is not None else max(layers)
    if chosen not in layers:
        raise ValueError(f"chosen layer {chosen} not among requested layers {list(layers)}")

    backend.eval()
    records = []
    for item in items:
        record = PredictionRecord(item_id=item.item_id, chosen_layer=chosen)
        try:
            out1, a1, b1 = _encode_context(backend, item.context1, item.span1_a, item.span1_b, max_len)
            out2, a2, b2 = _encode_context(backend, item.context2, item.span2_a, item.span2_b, max_len)
            for layer in layers:
                s1 = cosine_similarity(pool_target(out1, a1, layer), pool_target(out1, b1, layer))
                s2 = cosine_similarity(pool_target(out2, a2, layer), pool_target(out2, b2, layer))
                record.sim_context1[layer] = s1
                record.sim_context2[layer] = s2
                record.delta[layer] = s2 - s1
        except GwscError as exc:
            record.error = str(exc)
            log.warning("item %s not predictable: %s", item.item_id, exc)
        records.append(record)
    return records
