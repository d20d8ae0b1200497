"""Fine-tuning configuration and head/dataset compatibility rules."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

from gwsc.core.types import LabeledPair
from gwsc.errors import ConfigError

HEADS = ("CLASSIF", "COSDIST")

# class index conventions: argmax ties resolve to index 0
BINARY_CLASSES = ("F", "T")
TERNARY_CLASSES = ("A", "B", "C")


def class_labels(n_classes: int) -> tuple[str, ...]:
    return BINARY_CLASSES if n_classes == 2 else TERNARY_CLASSES


def class_index(label: str, n_classes: int) -> int:
    return class_labels(n_classes).index(label)


@dataclass(frozen=True)
class FineTuneConfig:
    """All knobs of one fine-tuning run; serializes losslessly to JSON."""

    head: str
    learning_rate: float = 5e-5
    epochs: int = 1
    dropout: float = 0.1
    max_len: int = 128
    batch_size: int = 32
    seed: int = 0
    margin: float = 0.0  # COSDIST only
    n_classes: int = 2  # CLASSIF only

    def __post_init__(self):
        if self.head not in HEADS:
            raise ConfigError(f"head must be one of {HEADS}, got {self.head!r}")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if not (0.0 <= self.dropout < 1.0):
            raise ConfigError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.n_classes not in (2, 3):
            raise ConfigError(f"n_classes must be 2 or 3, got {self.n_classes}")
        if self.head == "COSDIST" and self.n_classes != 2:
            raise ConfigError("the cosine-distance head only supports binary data")
        if self.max_len < 4:
            raise ConfigError("max_len too small to fit any pair input")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "FineTuneConfig":
        try:
            return cls(**doc)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def check_dataset_compat(config: FineTuneConfig, pairs: Iterable[LabeledPair]) -> None:
    """Reject head/dataset arity mismatches before any work happens.

    Ternary data requires the 3-class classification head; the
    cosine-distance head needs binary labels.
    """
    labels = {p.label for p in pairs}
    ternary = bool(labels & {"A", "B", "C"})
    binary = bool(labels & {"T", "F"})
    if ternary and binary:
        raise ConfigError("dataset mixes binary and ternary labels")
    if ternary and config.head == "COSDIST":
        raise ConfigError("3-class data is compatible with the classification head only")
    if ternary and config.n_classes != 3:
        raise ConfigError("3-class data requires n_classes=3")
    if binary and config.head == "CLASSIF" and config.n_classes != 2:
        raise ConfigError("binary data requires n_classes=2")
