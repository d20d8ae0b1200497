"""The two word-pair training heads.

Classification: the two target representations are concatenated and fed to
a linear layer; softmax probabilities are trained with cross entropy.
Cosine distance: same-meaning pairs are pulled together (loss 1 - cos) and
different-meaning pairs pushed apart (loss max(0, cos - margin)).
"""

from __future__ import annotations

import torch
from torch import nn

from gwsc.errors import DimensionMismatch, ZeroVector


class LinearPairHead(nn.Module):
    """Linear classifier over concatenated pair representations.

    Dropout is applied to the concatenation before the linear map.
    Weights initialize deterministically from the given seed.
    """

    def __init__(self, hidden_dim: int, n_classes: int, dropout: float = 0.1, seed: int = 0):
        super().__init__()
        self.hidden_dim = hidden_dim
        self.n_classes = n_classes
        self.drop = nn.Dropout(dropout)
        self.linear = nn.Linear(2 * hidden_dim, n_classes)
        gen = torch.Generator().manual_seed(seed)
        with torch.no_grad():
            self.linear.weight.copy_(torch.randn(self.linear.weight.shape, generator=gen) * 0.05)
            self.linear.bias.zero_()

    def forward(self, rep_a: torch.Tensor, rep_b: torch.Tensor) -> torch.Tensor:
        return self.linear(self.drop(torch.cat((rep_a, rep_b), dim=-1)))

    def set_dropout(self, p: float) -> None:
        self.drop.p = p


class CosinePairHead(nn.Module):
    """Parameter-free head for the cosine-distance objective.

    Holds the margin and applies dropout to each target representation
    before the loss, mirroring the classifier's dropout placement.
    """

    def __init__(self, hidden_dim: int, dropout: float = 0.1, margin: float = 0.0):
        super().__init__()
        self.hidden_dim = hidden_dim
        self.margin = margin
        self.drop = nn.Dropout(dropout)

    def forward(self, rep_a: torch.Tensor, rep_b: torch.Tensor):
        return self.drop(rep_a), self.drop(rep_b)

    def set_dropout(self, p: float) -> None:
        self.drop.p = p


def classif_forward(rep_a: torch.Tensor, rep_b: torch.Tensor, head: LinearPairHead) -> torch.Tensor:
    """Class probabilities for one pair (or a batch): softmax of the logits."""
    if rep_a.shape != rep_b.shape:
        raise DimensionMismatch(f"pair reps differ: {tuple(rep_a.shape)} vs {tuple(rep_b.shape)}")
    if rep_a.shape[-1] != head.hidden_dim:
        raise DimensionMismatch(
            f"rep dim {rep_a.shape[-1]} does not match head hidden_dim {head.hidden_dim}"
        )
    return torch.softmax(head(rep_a, rep_b), dim=-1)


def classif_loss(probs: torch.Tensor, gold_class) -> torch.Tensor:
    """Cross entropy: -log p(gold). Accepts a single example or a batch."""
    if probs.dim() == 1:
        return -torch.log(probs[int(gold_class)])
    gold = torch.as_tensor(gold_class, dtype=torch.long, device=probs.device)
    picked = probs.gather(-1, gold.unsqueeze(-1)).squeeze(-1)
    return -torch.log(picked).mean()


def _batch_cosine(rep_a: torch.Tensor, rep_b: torch.Tensor) -> torch.Tensor:
    na = torch.linalg.vector_norm(rep_a, dim=-1)
    nb = torch.linalg.vector_norm(rep_b, dim=-1)
    if bool((na == 0).any()) or bool((nb == 0).any()):
        raise ZeroVector("cosine loss undefined for a zero representation")
    return (rep_a * rep_b).sum(dim=-1) / (na * nb)


def cosdist_loss(rep_a: torch.Tensor, rep_b: torch.Tensor, label, margin: float = 0.0) -> torch.Tensor:
    """Cosine embedding loss.

    T: 1 - cos(a, b);  F: max(0, cos(a, b) - margin). For batches, ``label``
    is a sequence of "T"/"F" and the mean loss is returned.
    """
    cos = _batch_cosine(rep_a, rep_b)
    if rep_a.dim() == 1:
        return 1.0 - cos if label == "T" else torch.clamp(cos - margin, min=0.0)
    same = torch.tensor([l == "T" for l in label], device=rep_a.device)
    losses = torch.where(same, 1.0 - cos, torch.clamp(cos - margin, min=0.0))
    return losses.mean()
