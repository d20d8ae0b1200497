"""Pydantic request/response models for the service API.

Request models double as the fully-resolved run configs: defaults are
expanded here and the resolved dump is echoed into each run directory.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class BackendSpec(BaseModel):
    """Which encoder to build: the deterministic toy model or a pretrained one."""

    kind: Literal["toy", "hf"] = "toy"
    # toy parameters
    hidden_dim: int = 16
    n_layers: int = 2
    n_heads: int = 2
    ff_dim: int = 32
    vocab_size: int = 512
    max_positions: int = 192
    seed: int = 0
    uncased: bool = True
    # hf parameters
    model_name: Optional[str] = None


class BuildDataRequest(BaseModel):
    """Build one fine-tuning dataset from resource files."""

    source: Literal["usim", "coinco", "wic", "ukwac-subs", "opusparcus"]
    out_dir: str
    data_path: str
    language: str = "en"
    seed: int = 0
    # wic
    gold_path: Optional[str] = None
    # usim
    usim_low: float = 2.0
    usim_high: float = 4.0
    # coinco
    cap: int = 500
    t_threshold: float = 0.5
    f_max_shared: int = 1
    denominator: str = "min"
    legacy_path: Optional[str] = None
    # opusparcus
    stoplist_path: Optional[str] = None
    stoplist_k: int = 200
    target_count: int = 1000
    quality_min: float = 15.0
    lexicon_path: Optional[str] = None
    # ukwac-subs
    ppdb_path: Optional[str] = None
    n: int = 100_000
    proportions: tuple[float, float, float] = (0.40, 0.30, 0.30)
    min_score: float = 2.0
    embedder_dim: int = 16
    embedder_seed: int = 0
    vocab_min_freq: int = 5


class BuildDataResponse(BaseModel):
    run_dir: str
    dataset_path: str
    counts: dict
    manifest_hash: str


class FinetuneRequest(BaseModel):
    """Fine-tune a backend on a dataset file."""

    dataset_path: str
    out_dir: str
    head: Literal["CLASSIF", "COSDIST"]
    learning_rate: float = 5e-5
    epochs: int = 1
    dropout: float = 0.1
    max_len: int = 128
    batch_size: int = 32
    seed: int = 0
    margin: float = 0.0
    n_classes: int = 2
    heldout_fraction: float = 0.0
    backend: BackendSpec = Field(default_factory=BackendSpec)


class FinetuneResponse(BaseModel):
    run_dir: str
    checkpoint_dir: str
    report: dict
    manifest_hash: str


class PredictRequest(BaseModel):
    """Predict similarities (subtask 2) or similarity changes (subtask 1)."""

    checkpoint_dir: str
    input_path: str
    out_dir: str
    subtask: Literal[1, 2]
    layers: list[int]
    layer: Optional[int] = None  # submission layer; defaults to max(layers)
    max_len: int = 128
    language: str = "en"


class PredictResponse(BaseModel):
    run_dir: str
    output_path: str
    sidecar_path: str
    n_items: int
    n_failed: int
    manifest_hash: str


class EvaluateRequest(BaseModel):
    pred_path: str
    gold_path: str
    subtask: Literal[1, 2]
    aggregate: Literal["concat", "columns"] = "concat"
    out_path: Optional[str] = None


class EvaluateResponse(BaseModel):
    metric: str
    value: float
    n: int


class GridRequest(BaseModel):
    """Enumerate head x learning-rate x epochs cells, score every layer on dev."""

    dataset_path: str
    dev_input_path: str
    dev_gold_path: str
    out_dir: str
    subtask: Literal[1, 2]
    heads: list[Literal["CLASSIF", "COSDIST"]] = ["CLASSIF", "COSDIST"]
    learning_rates: list[float] = [5e-5, 1e-6, 1e-7]
    epochs_list: list[int] = [1]
    layers: Optional[list[int]] = None  # default: all layers of the backend
    dropout: float = 0.1
    max_len: int = 128
    batch_size: int = 32
    seed: int = 0
    margin: float = 0.0
    n_classes: int = 2
    aggregate: Literal["concat", "columns"] = "concat"
    language: str = "en"
    backend: BackendSpec = Field(default_factory=BackendSpec)


class GridCell(BaseModel):
    head: str
    learning_rate: float
    epochs: int
    layer: int
    value: float
    n: int


class GridResponse(BaseModel):
    run_dir: str
    leaderboard: list[GridCell]
    manifest_hash: str


class HealthResponse(BaseModel):
    status: str
    version: str
