"""Per-layer in-context similarity and similarity-change prediction."""

from gwsc.similarity.gwsc_io import (
    GwscItem,
    parse_gwsc_tsv,
    strip_markers,
    write_subtask1,
    write_subtask2,
)
from gwsc.similarity.predict import (
    PredictionRecord,
    delta_sim,
    predict_batch,
    sim_in_context,
)

__all__ = [
    "GwscItem",
    "PredictionRecord",
    "delta_sim",
    "parse_gwsc_tsv",
    "predict_batch",
    "sim_in_context",
    "strip_markers",
    "write_subtask1",
    "write_subtask2",
]
