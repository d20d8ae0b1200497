"""Thin command-line client for the pipeline service.

Every subcommand assembles a JSON request and posts it to the service:
either a remote one (``--server http://host:port``) or an in-process
application instance (the default, so the CLI works standalone). Exit
codes: 0 success, 2 configuration error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


class ServiceClient:
    """Posts requests either over HTTP or to an in-process app."""

    def __init__(self, server: Optional[str] = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            from fastapi.testclient import TestClient

            from gwsc.service import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict):
        return self._client.post(path, json=payload)

    def get(self, path: str):
        return self._client.get(path)


def _csv_ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _csv_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _csv_strs(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _payload(args: argparse.Namespace, fields: list[str]) -> dict:
    """Collect set flags; unset ones fall back to the service-side defaults."""
    out = {}
    for name in fields:
        value = getattr(args, name, None)
        if value is not None:
            out[name] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gwsc", description=__doc__)
    parser.add_argument("--server", help="service URL; default runs the service in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-data", help="build a fine-tuning dataset from resource files")
    p.add_argument("--source", required=True,
                   choices=["usim", "coinco", "wic", "ukwac-subs", "opusparcus"])
    p.add_argument("--data-path", dest="data_path", required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--language")
    p.add_argument("--seed", type=int)
    p.add_argument("--gold-path", dest="gold_path")
    p.add_argument("--usim-low", dest="usim_low", type=float)
    p.add_argument("--usim-high", dest="usim_high", type=float)
    p.add_argument("--cap", type=int)
    p.add_argument("--t-threshold", dest="t_threshold", type=float)
    p.add_argument("--f-max-shared", dest="f_max_shared", type=int)
    p.add_argument("--denominator")
    p.add_argument("--legacy-path", dest="legacy_path")
    p.add_argument("--stoplist-path", dest="stoplist_path")
    p.add_argument("--stoplist-k", dest="stoplist_k", type=int)
    p.add_argument("--target-count", dest="target_count", type=int)
    p.add_argument("--quality-min", dest="quality_min", type=float)
    p.add_argument("--lexicon-path", dest="lexicon_path")
    p.add_argument("--ppdb-path", dest="ppdb_path")
    p.add_argument("--n", type=int)
    p.add_argument("--proportions", type=_csv_floats, help="e.g. 0.4,0.3,0.3")
    p.add_argument("--min-score", dest="min_score", type=float)
    p.add_argument("--embedder-dim", dest="embedder_dim", type=int)
    p.add_argument("--embedder-seed", dest="embedder_seed", type=int)
    p.add_argument("--vocab-min-freq", dest="vocab_min_freq", type=int)

    p = sub.add_parser("finetune", help="fine-tune an encoder on a dataset")
    p.add_argument("--dataset-path", dest="dataset_path", required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--head", required=True, choices=["CLASSIF", "COSDIST"])
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--dropout", type=float)
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--margin", type=float)
    p.add_argument("--n-classes", dest="n_classes", type=int)
    p.add_argument("--heldout-fraction", dest="heldout_fraction", type=float)
    _add_backend_flags(p)

    p = sub.add_parser("predict", help="predict similarities from a checkpoint")
    p.add_argument("--checkpoint-dir", dest="checkpoint_dir", required=True)
    p.add_argument("--input-path", dest="input_path", required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--subtask", type=int, required=True, choices=[1, 2])
    p.add_argument("--layers", type=_csv_ints, required=True, help="e.g. 0,1,2")
    p.add_argument("--layer", type=int, help="submission layer; default max of --layers")
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--language")

    p = sub.add_parser("evaluate", help="score a prediction file against gold")
    p.add_argument("--pred-path", dest="pred_path", required=True)
    p.add_argument("--gold-path", dest="gold_path", required=True)
    p.add_argument("--subtask", type=int, required=True, choices=[1, 2])
    p.add_argument("--aggregate", choices=["concat", "columns"])
    p.add_argument("--out-path", dest="out_path")

    p = sub.add_parser("grid", help="enumerate a hyperparameter grid against a dev set")
    p.add_argument("--dataset-path", dest="dataset_path", required=True)
    p.add_argument("--dev-input-path", dest="dev_input_path", required=True)
    p.add_argument("--dev-gold-path", dest="dev_gold_path", required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--subtask", type=int, required=True, choices=[1, 2])
    p.add_argument("--heads", type=_csv_strs, help="e.g. CLASSIF,COSDIST")
    p.add_argument("--learning-rates", dest="learning_rates", type=_csv_floats)
    p.add_argument("--epochs-list", dest="epochs_list", type=_csv_ints)
    p.add_argument("--layers", type=_csv_ints)
    p.add_argument("--dropout", type=float)
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--margin", type=float)
    p.add_argument("--n-classes", dest="n_classes", type=int)
    p.add_argument("--aggregate", choices=["concat", "columns"])
    p.add_argument("--language")
    _add_backend_flags(p)

    p = sub.add_parser("serve", help="run the service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _add_backend_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend-kind", dest="backend_kind", choices=["toy", "hf"])
    p.add_argument("--backend-model-name", dest="backend_model_name")
    p.add_argument("--backend-hidden-dim", dest="backend_hidden_dim", type=int)
    p.add_argument("--backend-n-layers", dest="backend_n_layers", type=int)
    p.add_argument("--backend-seed", dest="backend_seed", type=int)


def _backend_payload(args: argparse.Namespace) -> Optional[dict]:
    mapping = {
        "kind": "backend_kind",
        "model_name": "backend_model_name",
        "hidden_dim": "backend_hidden_dim",
        "n_layers": "backend_n_layers",
        "seed": "backend_seed",
    }
    spec = {k: getattr(args, v, None) for k, v in mapping.items()}
    spec = {k: v for k, v in spec.items() if v is not None}
    return spec or None

_FIELDS = {
    "build-data": [
        "source", "data_path", "out_dir", "language", "seed", "gold_path",
        "usim_low", "usim_high", "cap", "t_threshold", "f_max_shared",
        "denominator", "legacy_path", "stoplist_path", "stoplist_k",
        "target_count", "quality_min", "lexicon_path", "ppdb_path", "n",
        "proportions", "min_score", "embedder_dim", "embedder_seed",
        "vocab_min_freq",
    ],
    "finetune": [
        "dataset_path", "out_dir", "head", "learning_rate", "epochs", "dropout",
        "max_len", "batch_size", "seed", "margin", "n_classes", "heldout_fraction",
    ],
    "predict": [
        "checkpoint_dir", "input_path", "out_dir", "subtask", "layers", "layer",
        "max_len", "language",
    ],
    "evaluate": ["pred_path", "gold_path", "subtask", "aggregate", "out_path"],
    "grid": [
        "dataset_path", "dev_input_path", "dev_gold_path", "out_dir", "subtask",
        "heads", "learning_rates", "epochs_list", "layers", "dropout", "max_len",
        "batch_size", "seed", "margin", "n_classes", "aggregate", "language",
    ],
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from gwsc.service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    payload = _payload(args, _FIELDS[args.command])
    if args.command in ("finetune", "grid"):
        backend = _backend_payload(args)
        if backend:
            payload["backend"] = backend

    try:
        client = ServiceClient(args.server)
        response = client.post(f"/commands/{args.command}", payload)
    except Exception as exc:  # connection failures and friends
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    if response.status_code == 200:
        print(json.dumps(response.json(), indent=2, sort_keys=True))
        return EXIT_OK
    try:
        detail = response.json().get("detail")
    except ValueError:
        detail = response.text
    print(f"error ({response.status_code}): {json.dumps(detail)}", file=sys.stderr)
    if response.status_code == 422:
        return EXIT_CONFIG
    return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
