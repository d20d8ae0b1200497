"""The fine-tuning loop.

Each labeled pair becomes one joint input sequence; the two target
representations are read from the encoder's last layer and fed to the
configured head. All weights (encoder and head) update. Runs are
deterministic given the config seed: batch order, dropout masks and
optimizer state all derive from it, and training is pinned to one thread.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import torch

from gwsc.core.backends import EncoderBackend
from gwsc.core.ops import build_pair_input, locate_target, pool_target
from gwsc.core.types import Dropped, EncodedPair, LabeledPair, TokenAlignment
from gwsc.datagen.io import dataset_content_hash
from gwsc.errors import ConfigError, EmptyDataset, NonFiniteLoss
from gwsc.training.checkpoint import save_checkpoint
from gwsc.training.config import FineTuneConfig, check_dataset_compat, class_index
from gwsc.training.heads import (
    CosinePairHead,
    LinearPairHead,
    classif_forward,
    classif_loss,
    cosdist_loss,
)

log = logging.getLogger(__name__)


@dataclass
class TrainReport:
    """Per-epoch training record: one loss entry per completed epoch."""

    epoch_losses: list[float] = field(default_factory=list)
    heldout_accuracy: list[float] = field(default_factory=list)
    checkpoint_id: Optional[str] = None
    n_examples: int = 0
    dropped_examples: int = 0

    def to_dict(self) -> dict:
        return {
            "epoch_losses": self.epoch_losses,
            "heldout_accuracy": self.heldout_accuracy,
            "checkpoint_id": self.checkpoint_id,
            "n_examples": self.n_examples,
            "dropped_examples": self.dropped_examples,
        }


@dataclass
class _Example:
    pair_input: EncodedPair
    align_a: TokenAlignment
    align_b: TokenAlignment
    label: str


def _prepare_examples(
    backend: EncoderBackend, pairs: Sequence[LabeledPair], max_len: int
) -> tuple[list[_Example], int]:
    """Build joint inputs and target alignments, dropping over-limit targets."""
    examples, dropped = [], 0
    for pair in pairs:
        built = build_pair_input(
            pair.a.sentence,
            pair.b.sentence,
            backend,
            max_len=max_len,
            span1=(pair.a.start, pair.a.end),
            span2=(pair.b.start, pair.b.end),
        )
        if isinstance(built, Dropped):
            dropped += 1
            continue
        align_a = locate_target(pair.a.sentence, (pair.a.start, pair.a.end), backend, "first", built)
        align_b = locate_target(pair.b.sentence, (pair.b.start, pair.b.end), backend, "second", built)
        examples.append(_Example(built, align_a, align_b, pair.label))
    return examples, dropped


def _pooled_reps(backend, examples: Sequence[_Example]):
    outputs = backend.encode([ex.pair_input for ex in examples])
    last = backend.n_layers
    rep_a = torch.stack([pool_target(o, ex.align_a, last) for o, ex in zip(outputs, examples)])
    rep_b = torch.stack([pool_target(o, ex.align_b, last) for o, ex in zip(outputs, examples)])
    return rep_a, rep_b


def finetune(
    backend: EncoderBackend,
    data: Sequence[LabeledPair],
    config: FineTuneConfig,
    heldout: Optional[Sequence[LabeledPair]] = None,
    run_dir=None,
):
    """Fine-tune a backend on labeled pairs; returns (backend, head, report).

    The backend is updated in place. When ``run_dir`` is given, a checkpoint
    is persisted after every epoch. Training runs for exactly
    ``config.epochs`` epochs (no early stopping).
    """
    check_dataset_compat(config, data)
    torch.manual_seed(config.seed)
    torch.set_num_threads(1)

    examples, dropped = _prepare_examples(backend, data, config.max_len)
    if dropped:
        log.info("dropped %d example(s) with targets beyond max_len=%d", dropped, config.max_len)
    if not examples:
        raise EmptyDataset("no training examples remain after input construction")

    backend.set_dropout(config.dropout)
    if config.head == "CLASSIF":
        head = LinearPairHead(backend.hidden_dim, config.n_classes, config.dropout, seed=config.seed)
    else:
        head = CosinePairHead(backend.hidden_dim, config.dropout, margin=config.margin)
    optimizer = torch.optim.Adam(
        list(backend.torch_module().parameters()) + list(head.parameters()),
        lr=config.learning_rate,
    )

    data_hash = dataset_content_hash(data)
    order_rng = random.Random(config.seed)
    report = TrainReport(n_examples=len(examples), dropped_examples=dropped)

    for epoch in range(1, config.epochs + 1):
        backend.train()
        head.train()
        order = list(range(len(examples)))
        order_rng.shuffle(order)
        total_loss, seen = 0.0, 0
        for b_start in range(0, len(order), config.batch_size):
            batch = [examples[i] for i in order[b_start : b_start + config.batch_size]]
            rep_a, rep_b = _pooled_reps(backend, batch)
            if config.head == "CLASSIF":
                probs = classif_forward(rep_a, rep_b, head)
                gold = [class_index(ex.label, config.n_classes) for ex in batch]
                loss = classif_loss(probs, gold)
            else:
                da, db = head(rep_a, rep_b)
                loss = cosdist_loss(da, db, [ex.label for ex in batch], margin=head.margin)
            value = float(loss.item())
            if not np.isfinite(value):
                raise NonFiniteLoss(f"epoch{epoch}/batch{b_start // config.batch_size}", value)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total_loss += value * len(batch)
            seen += len(batch)
        report.epoch_losses.append(total_loss / seen)

        if heldout is not None and config.head == "CLASSIF":
            report.heldout_accuracy.append(
                heldout_accuracy(backend, head, heldout, max_len=config.max_len)
            )
        if run_dir is not None:
            save_checkpoint(run_dir, epoch, backend, head, config, data_hash)
            report.checkpoint_id = f"epoch_{epoch}"

    backend.eval()
    head.eval()
    return backend, head, report


def heldout_accuracy(
    backend: EncoderBackend,
    head: LinearPairHead,
    pairs: Sequence[LabeledPair],
    max_len: int = 128,
) -> float:
    """Fraction of argmax-correct predictions (ties resolve to class 0)."""
    if not isinstance(head, LinearPairHead):
        raise ConfigError("held-out accuracy requires the classification head")
    examples, _ = _prepare_examples(backend, pairs, max_len)
    if not examples:
        raise EmptyDataset("no evaluable held-out examples")
    backend.eval()
    head.eval()
    correct = 0
    with torch.no_grad():
        for b_start in range(0, len(examples), 64):
            batch = examples[b_start : b_start + 64]
            rep_a, rep_b = _pooled_reps(backend, batch)
            probs = classif_forward(rep_a, rep_b, head).numpy()
            predicted = np.argmax(probs, axis=-1)  # first maximum wins
            gold = np.array([class_index(ex.label, head.n_classes) for ex in batch])
            correct += int((predicted == gold).sum())
    return correct / len(examples)
