"""Run directories, manifests and structured logs.

Every command writes into a fresh directory: the fully-resolved config
(``config.json``), its outputs, a ``manifest.json`` with content hashes of
inputs and outputs, and a ``log.jsonl`` event log. Manifests contain no
timestamps, so rerunning the same config on the same inputs reproduces the
manifest hash byte-for-byte; wall-clock details live only in the log, which
is excluded from hashing.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from gwsc.errors import ConfigError


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def fresh_run_dir(path) -> Path:
    run_dir = Path(path)
    if run_dir.exists() and any(run_dir.iterdir()):
        raise ConfigError(f"run directory {run_dir} already exists and is not empty")
    run_dir.mkdir(parents=True, exist_ok=True)
    return run_dir


def write_json(path, obj) -> None:
    Path(path).write_text(
        json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


class RunLog:
    """Append-only JSONL event log for one run."""

    def __init__(self, run_dir: Path):
        self.path = Path(run_dir) / "log.jsonl"

    def event(self, kind: str, **fields) -> None:
        doc = {"ts": round(time.time(), 3), "event": kind, **fields}
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")


def finalize_manifest(run_dir: Path, command: str, config: dict,
                      inputs: dict, outputs: dict, counts: dict) -> dict:
    """Write config echo + manifest; the manifest hash covers everything but the log."""
    write_json(Path(run_dir) / "config.json", config)
    payload = {
        "command": command,
        "config": config,
        "inputs": inputs,
        "outputs": outputs,
        "counts": counts,
    }
    payload["manifest_hash"] = hashlib.sha256(canonical_json(payload).encode()).hexdigest()
    write_json(Path(run_dir) / "manifest.json", payload)
    return payload
