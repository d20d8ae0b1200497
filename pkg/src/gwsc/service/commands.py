"""Implementations behind the service endpoints.

Each command resolves its request into a fresh run directory containing the
config echo, outputs, a structured log and a hash manifest.
"""

from __future__ import annotations

import itertools
from pathlib import Path

from gwsc.core.backends import EncoderBackend, ToyEncoder
from gwsc.datagen import (
    LexiconTagger,
    binarize_usim,
    build_coinco_pairs,
    build_opusparcus_pairs,
    load_stoplist,
    load_wic,
    merge_dedupe,
    read_coinco,
    read_dataset,
    read_opusparcus,
    read_usim,
    sample_coinco_pairs,
    write_dataset,
)
from gwsc.errors import ConfigError
from gwsc.metrics import evaluate
from gwsc.service import runs
from gwsc.service.schemas import (
    BackendSpec,
    BuildDataRequest,
    BuildDataResponse,
    EvaluateRequest,
    EvaluateResponse,
    FinetuneRequest,
    FinetuneResponse,
    GridCell,
    GridRequest,
    GridResponse,
    PredictRequest,
    PredictResponse,
)
from gwsc.similarity import parse_gwsc_tsv, predict_batch, write_subtask1, write_subtask2
from gwsc.training import FineTuneConfig, check_dataset_compat, finetune
from gwsc.training.checkpoint import load_backend, state_dict_hash
from gwsc.ukwac_subs import (
    HashEmbedder,
    ParaphraseTable,
    build_pos_vocabulary,
    generate_dataset,
    instances_to_pairs,
    split_holdout,
)


def build_backend(spec: BackendSpec) -> EncoderBackend:
    if spec.kind == "toy":
        return ToyEncoder(
            hidden_dim=spec.hidden_dim,
            n_layers=spec.n_layers,
            n_heads=spec.n_heads,
            ff_dim=spec.ff_dim,
            vocab_size=spec.vocab_size,
            max_positions=spec.max_positions,
            seed=spec.seed,
            uncased=spec.uncased,
        )
    if spec.model_name is None:
        raise ConfigError("backend.kind='hf' requires backend.model_name")
    from gwsc.core.hf import HFEncoder

    return HFEncoder(spec.model_name)


def _require(path, what: str) -> str:
    if path is None:
        raise ConfigError(f"{what} is required for this source")
    if not Path(path).exists():
        raise ConfigError(f"{what} not found: {path}")
    return path


def _tagger(req: BuildDataRequest) -> LexiconTagger:
    if req.lexicon_path:
        return LexiconTagger.from_tsv(_require(req.lexicon_path, "lexicon_path"))
    return LexiconTagger()


def cmd_build_data(req: BuildDataRequest) -> BuildDataResponse:
    run_dir = runs.fresh_run_dir(req.out_dir)
    log = runs.RunLog(run_dir)
    inputs = {req.data_path: runs.file_sha256(_require(req.data_path, "data_path"))}

    if req.source == "usim":
        annotations = read_usim(req.data_path, language=req.language)
        pairs = binarize_usim(annotations, low=req.usim_low, high=req.usim_high)
        log.event("binarized", total=len(annotations),
                  kept=len(pairs), excluded=len(annotations) - len(pairs))
    elif req.source == "coinco":
        instances = read_coinco(req.data_path, language=req.language)
        labeled = build_coinco_pairs(
            instances, req.t_threshold, req.f_max_shared, req.denominator
        )
        pairs = sample_coinco_pairs(labeled, cap=req.cap, seed=req.seed)
        log.event("sampled", labeled=len(labeled), balanced=len(pairs))
        if req.legacy_path:
            inputs[req.legacy_path] = runs.file_sha256(_require(req.legacy_path, "legacy_path"))
            legacy = read_dataset(req.legacy_path)
            pairs = merge_dedupe(pairs, legacy)
            log.event("merged", legacy=len(legacy), merged=len(pairs))
    elif req.source == "wic":
        gold = _require(req.gold_path, "gold_path") if req.gold_path else None
        if gold:
            inputs[gold] = runs.file_sha256(gold)
        pairs = load_wic(req.data_path, gold, language=req.language)
    elif req.source == "opusparcus":
        stoplist_path = _require(req.stoplist_path, "stoplist_path")
        inputs[stoplist_path] = runs.file_sha256(stoplist_path)
        stoplist = load_stoplist(stoplist_path, k=req.stoplist_k)
        pairs = build_opusparcus_pairs(
            read_opusparcus(req.data_path),
            tagger=_tagger(req),
            stoplist=stoplist,
            target_count=req.target_count,
            seed=req.seed,
            quality_min=req.quality_min,
            language=req.language,
        )
    elif req.source == "ukwac-subs":
        ppdb_path = _require(req.ppdb_path, "ppdb_path")
        inputs[ppdb_path] = runs.file_sha256(ppdb_path)
        table = ParaphraseTable.from_tsv(ppdb_path)
        tagger = _tagger(req)
        sentences = [
            line
            for line in Path(req.data_path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        vocabulary = build_pos_vocabulary(sentences, tagger, min_freq=req.vocab_min_freq)
        embedder = HashEmbedder(dim=req.embedder_dim, seed=req.embedder_seed)
        instances = generate_dataset(
            sentences,
            table,
            embedder,
            vocabulary,
            tagger,
            n=req.n,
            proportions=req.proportions,
            seed=req.seed,
            min_score=req.min_score,
        )
        pairs = instances_to_pairs(instances, language=req.language)
    else:  # unreachable: schema-validated
        raise ConfigError(f"unknown source {req.source!r}")

    if req.lexicon_path and req.source in ("opusparcus", "ukwac-subs"):
        inputs[req.lexicon_path] = runs.file_sha256(req.lexicon_path)

    dataset_path = run_dir / "dataset.jsonl"
    counts = write_dataset(pairs, dataset_path)
    counts["seed"] = req.seed
    log.event("written", **counts)
    manifest = runs.finalize_manifest(
        run_dir,
        command="build-data",
        config=req.model_dump(),
        inputs=inputs,
        outputs={"dataset.jsonl": runs.file_sha256(dataset_path)},
        counts=counts,
    )
    return BuildDataResponse(
        run_dir=str(run_dir),
        dataset_path=str(dataset_path),
        counts=counts,
        manifest_hash=manifest["manifest_hash"],
    )


def cmd_finetune(req: FinetuneRequest) -> FinetuneResponse:
    config = FineTuneConfig(
        head=req.head,
        learning_rate=req.learning_rate,
        epochs=req.epochs,
        dropout=req.dropout,
        max_len=req.max_len,
        batch_size=req.batch_size,
        seed=req.seed,
        margin=req.margin,
        n_classes=req.n_classes,
    )
    pairs = read_dataset(_require(req.dataset_path, "dataset_path"))
    check_dataset_compat(config, pairs)  # reject arity mismatches up front

    run_dir = runs.fresh_run_dir(req.out_dir)
    log = runs.RunLog(run_dir)
    heldout = None
    if req.heldout_fraction > 0:
        k = max(1, int(round(req.heldout_fraction * len(pairs))))
        pairs, heldout = split_holdout(pairs, k, seed=req.seed)
        log.event("heldout_split", train=len(pairs), heldout=len(heldout))

    backend = build_backend(req.backend)
    ckpt_root = run_dir / "checkpoints"
    backend, head, report = finetune(backend, pairs, config, heldout=heldout, run_dir=ckpt_root)
    log.event("trained", epochs=config.epochs, dropped=report.dropped_examples)

    runs.write_json(run_dir / "report.json", report.to_dict())
    outputs = {"report.json": runs.file_sha256(run_dir / "report.json")}
    for epoch in range(1, config.epochs + 1):
        mpath = ckpt_root / f"epoch_{epoch}" / "manifest.json"
        outputs[f"checkpoints/epoch_{epoch}/manifest.json"] = runs.file_sha256(mpath)
    outputs["final_backend_state"] = state_dict_hash(backend.torch_module())
    outputs["final_head_state"] = state_dict_hash(head)

    manifest = runs.finalize_manifest(
        run_dir,
        command="finetune",
        config=req.model_dump(),
        inputs={req.dataset_path: runs.file_sha256(req.dataset_path)},
        outputs=outputs,
        counts={
            "n_examples": report.n_examples,
            "dropped_examples": report.dropped_examples,
        },
    )
    return FinetuneResponse(
        run_dir=str(run_dir),
        checkpoint_dir=str(ckpt_root / f"epoch_{config.epochs}"),
        report=report.to_dict(),
        manifest_hash=manifest["manifest_hash"],
    )


def cmd_predict(req: PredictRequest) -> PredictResponse:
    if not req.layers:
        raise ConfigError("layers must not be empty")
    ckpt = Path(_require(req.checkpoint_dir, "checkpoint_dir"))
    backend = load_backend(ckpt)
    items = parse_gwsc_tsv(_require(req.input_path, "input_path"), language=req.language)

    run_dir = runs.fresh_run_dir(req.out_dir)
    log = runs.RunLog(run_dir)
    records = predict_batch(
        backend, items, req.layers, max_len=req.max_len, chosen_layer=req.layer
    )
    n_failed = sum(1 for r in records if r.error is not None)
    if n_failed:
        log.event("failed_items", count=n_failed,
                  ids=[r.item_id for r in records if r.error])

    output_path = run_dir / f"predictions_subtask{req.subtask}.tsv"
    if req.subtask == 1:
        write_subtask1([r.chosen("delta") for r in records], output_path)
    else:
        write_subtask2([(r.chosen("sim1"), r.chosen("sim2")) for r in records], output_path)

    sidecar_path = run_dir / "predictions_layers.json"
    runs.write_json(
        sidecar_path,
        [
            {
                "item_id": r.item_id,
                "chosen_layer": r.chosen_layer,
                "sim_context1": {str(k): v for k, v in r.sim_context1.items()},
                "sim_context2": {str(k): v for k, v in r.sim_context2.items()},
                "delta": {str(k): v for k, v in r.delta.items()},
                "error": r.error,
            }
            for r in records
        ],
    )
    log.event("predicted", items=len(records), layers=req.layers)

    manifest = runs.finalize_manifest(
        run_dir,
        command="predict",
        config=req.model_dump(),
        inputs={
            req.input_path: runs.file_sha256(req.input_path),
            "checkpoint_state": state_dict_hash(backend.torch_module()),
        },
        outputs={
            output_path.name: runs.file_sha256(output_path),
            sidecar_path.name: runs.file_sha256(sidecar_path),
        },
        counts={"n_items": len(records), "n_failed": n_failed},
    )
    return PredictResponse(
        run_dir=str(run_dir),
        output_path=str(output_path),
        sidecar_path=str(sidecar_path),
        n_items=len(records),
        n_failed=n_failed,
        manifest_hash=manifest["manifest_hash"],
    )


def cmd_evaluate(req: EvaluateRequest) -> EvaluateResponse:
    result = evaluate(
        _require(req.pred_path, "pred_path"),
        _require(req.gold_path, "gold_path"),
        req.subtask,
        aggregate=req.aggregate,
    )
    if req.out_path:
        runs.write_json(req.out_path, result.to_dict())
    return EvaluateResponse(**result.to_dict())


def cmd_grid(req: GridRequest) -> GridResponse:
    pairs = read_dataset(_require(req.dataset_path, "dataset_path"))
    _require(req.dev_input_path, "dev_input_path")
    _require(req.dev_gold_path, "dev_gold_path")
    run_dir = runs.fresh_run_dir(req.out_dir)
    log = runs.RunLog(run_dir)

    probe = build_backend(req.backend)
    layers = req.layers if req.layers else list(range(0, probe.n_layers + 1))

    rows: list[GridCell] = []
    outputs: dict[str, str] = {}
    for i, (head, lr, epochs) in enumerate(
        itertools.product(req.heads, req.learning_rates, req.epochs_list)
    ):
        config = FineTuneConfig(
            head=head,
            learning_rate=lr,
            epochs=epochs,
            dropout=req.dropout,
            max_len=req.max_len,
            batch_size=req.batch_size,
            seed=req.seed,
            margin=req.margin,
            n_classes=req.n_classes,
        )
        check_dataset_compat(config, pairs)
        backend = build_backend(req.backend)
        backend, _head, _report = finetune(backend, pairs, config)
        cell_dir = run_dir / "cells" / f"cell_{i:03d}_{head}_{lr:g}_ep{epochs}"
        cell_dir.mkdir(parents=True)
        items = parse_gwsc_tsv(req.dev_input_path, language=req.language)
        # one prediction pass covers every layer of this trained cell
        records = predict_batch(backend, items, layers, max_len=req.max_len)
        for layer in layers:
            pred_path = cell_dir / f"predictions_subtask{req.subtask}_layer{layer}.tsv"
            if req.subtask == 1:
                write_subtask1([r.delta.get(layer) for r in records], pred_path)
            else:
                write_subtask2(
                    [(r.sim_context1.get(layer), r.sim_context2.get(layer)) for r in records],
                    pred_path,
                )
            result = evaluate(pred_path, req.dev_gold_path, req.subtask, aggregate=req.aggregate)
            rel = str(pred_path.relative_to(run_dir))
            outputs[rel] = runs.file_sha256(pred_path)
            rows.append(
                GridCell(head=head, learning_rate=lr, epochs=epochs,
                         layer=layer, value=result.value, n=result.n)
            )
        log.event("cell_done", head=head, learning_rate=lr, epochs=epochs)

    # rank by score; ties prefer the higher layer
    rows.sort(key=lambda r: (-r.value, -r.layer))
    leaderboard_path = run_dir / "leaderboard.json"
    runs.write_json(leaderboard_path, [r.model_dump() for r in rows])
    outputs["leaderboard.json"] = runs.file_sha256(leaderboard_path)

    manifest = runs.finalize_manifest(
        run_dir,
        command="grid",
        config=req.model_dump(),
        inputs={
            req.dataset_path: runs.file_sha256(req.dataset_path),
            req.dev_input_path: runs.file_sha256(req.dev_input_path),
            req.dev_gold_path: runs.file_sha256(req.dev_gold_path),
        },
        outputs=outputs,
        counts={"cells": len(req.heads) * len(req.learning_rates) * len(req.epochs_list),
                "layers": len(layers)},
    )
    return GridResponse(
        run_dir=str(run_dir),
        leaderboard=rows,
        manifest_hash=manifest["manifest_hash"],
    )
