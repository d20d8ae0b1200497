"""Checkpoint persistence.

Layout: ``<run_dir>/epoch_<k>/`` holding ``backend.pt``, ``head.pt`` and a
``manifest.json`` echoing the config plus the dataset content hash. Writes
are atomic (temp file + rename). Manifests record a canonical hash of the
weights rather than file bytes, because serialized files are not
byte-stable across processes.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import torch

from gwsc.core.backends import EncoderBackend, ToyEncoder
from gwsc.errors import ConfigError
from gwsc.training.config import FineTuneConfig
from gwsc.training.heads import CosinePairHead, LinearPairHead


def state_dict_hash(module: torch.nn.Module) -> str:
    """Deterministic hash over parameter names, shapes, dtypes and bytes."""
    h = hashlib.sha256()
    sd = module.state_dict()
    for name in sorted(sd):
        tensor = sd[name].detach().cpu().contiguous()
        h.update(name.encode("utf-8"))
        h.update(str(tensor.dtype).encode())
        h.update(str(tuple(tensor.shape)).encode())
        h.update(tensor.numpy().tobytes())
    return h.hexdigest()


def _atomic_torch_save(obj, path: Path) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    torch.save(obj, tmp)
    os.replace(tmp, path)


def _atomic_write_text(text: str, path: Path) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def save_checkpoint(
    run_dir,
    epoch: int,
    backend: EncoderBackend,
    head: LinearPairHead,
    config: FineTuneConfig,
    dataset_hash: str,
) -> Path:
    ckpt_dir = Path(run_dir) / f"epoch_{epoch}"
    ckpt_dir.mkdir(parents=True, exist_ok=True)
    backend_kind = "toy" if isinstance(backend, ToyEncoder) else "hf"
    _atomic_torch_save(
        {
            "kind": backend_kind,
            "config": backend.config(),
            "state": backend.torch_module().state_dict(),
        },
        ckpt_dir / "backend.pt",
    )
    if isinstance(head, LinearPairHead):
        head_doc = {
            "kind": "classif",
            "hidden_dim": head.hidden_dim,
            "n_classes": head.n_classes,
            "state": head.state_dict(),
        }
    else:
        head_doc = {
            "kind": "cosine",
            "hidden_dim": head.hidden_dim,
            "margin": head.margin,
            "state": head.state_dict(),
        }
    _atomic_torch_save(head_doc, ckpt_dir / "head.pt")
    manifest = {
        "epoch": epoch,
        "config": config.to_dict(),
        "dataset_hash": dataset_hash,
        "backend_kind": backend_kind,
        "backend_config": backend.config(),
        "backend_state_hash": state_dict_hash(backend.torch_module()),
        "head_state_hash": state_dict_hash(head),
    }
    _atomic_write_text(json.dumps(manifest, indent=2, sort_keys=True), ckpt_dir / "manifest.json")
    return ckpt_dir


def load_backend(ckpt_dir) -> EncoderBackend:
    doc = torch.load(Path(ckpt_dir) / "backend.pt", weights_only=False)
    if doc["kind"] == "toy":
        backend = ToyEncoder(**doc["config"])
    elif doc["kind"] == "hf":
        from gwsc.core.hf import HFEncoder

        backend = HFEncoder(**doc["config"])
    else:
        raise ConfigError(f"unknown backend kind {doc['kind']!r} in checkpoint")
    backend.torch_module().load_state_dict(doc["state"])
    backend.eval()
    return backend


def load_head(ckpt_dir):
    doc = torch.load(Path(ckpt_dir) / "head.pt", weights_only=False)
    if doc["kind"] == "classif":
        head = LinearPairHead(doc["hidden_dim"], doc["n_classes"])
    else:
        head = CosinePairHead(doc["hidden_dim"], margin=doc["margin"])
    head.load_state_dict(doc["state"])
    head.eval()
    return head
