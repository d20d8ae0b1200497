"""Fine-tuning of encoder backends with the two word-pair heads."""

from gwsc.training.config import (
    FineTuneConfig,
    check_dataset_compat,
    class_index,
    class_labels,
)
from gwsc.training.heads import (
    LinearPairHead,
    classif_forward,
    classif_loss,
    cosdist_loss,
)
from gwsc.training.loop import TrainReport, finetune, heldout_accuracy
from gwsc.training.checkpoint import (
    load_backend,
    load_head,
    save_checkpoint,
    state_dict_hash,
)

__all__ = [
    "FineTuneConfig",
    "LinearPairHead",
    "TrainReport",
    "check_dataset_compat",
    "class_index",
    "class_labels",
    "classif_forward",
    "classif_loss",
    "cosdist_loss",
    "finetune",
    "heldout_accuracy",
    "load_backend",
    "load_head",
    "save_checkpoint",
    "state_dict_hash",
]
