"""Dataset JSONL serialization.

One pair per line, UTF-8, keys in a fixed order:
``{"id", "source", "lang", "label", "graded_score", "s1", "t1": {"start",
"end", "lemma", "pos"}, "s2", "t2": {...}}``. Ternary labels are written
lower-case ("a"/"b"/"c") to match the 3-class dataset convention; binary
labels stay "T"/"F".
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Sequence

from gwsc.core.types import ContextedTarget, LabeledPair
from gwsc.errors import MalformedRow


def _target_json(t: ContextedTarget) -> dict:
    return {"start": t.start, "end": t.end, "lemma": t.lemma, "pos": t.pos}


def pair_to_json(pair: LabeledPair, pair_id: str) -> str:
    label = pair.label.lower() if pair.source == "UKWAC_SUBS" else pair.label
    doc = {
        "id": pair_id,
        "source": pair.source,
        "lang": pair.a.language,
        "label": label,
        "graded_score": pair.graded_score,
        "s1": pair.a.sentence,
        "t1": _target_json(pair.a),
        "s2": pair.b.sentence,
        "t2": _target_json(pair.b),
    }
    return json.dumps(doc, ensure_ascii=False)


def write_dataset(pairs: Sequence[LabeledPair], path) -> dict:
    """Write pairs to JSONL; returns per-label counts for the manifest.

    Pairs without an id get sequential ``<source>-NNNNNN`` ids in input
    order, so rewriting the same pairs yields byte-identical files.
    """
    counts: dict[str, int] = {}
    lines = []
    for i, pair in enumerate(pairs):
        pair_id = pair.pair_id or f"{pair.source.lower()}-{i:06d}"
        lines.append(pair_to_json(pair, pair_id))
        label = pair.label.lower() if pair.source == "UKWAC_SUBS" else pair.label
        counts[label] = counts.get(label, 0) + 1
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return {"total": len(pairs), "by_label": dict(sorted(counts.items()))}


def read_dataset(path) -> list[LabeledPair]:
    pairs = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            source = doc["source"]
            label = doc["label"].upper() if source == "UKWAC_SUBS" else doc["label"]
            lang = doc.get("lang", "en")
            pairs.append(
                LabeledPair(
                    a=ContextedTarget(doc["s1"], doc["t1"]["start"], doc["t1"]["end"],
                                      doc["t1"]["lemma"], doc["t1"]["pos"], lang),
                    b=ContextedTarget(doc["s2"], doc["t2"]["start"], doc["t2"]["end"],
                                      doc["t2"]["lemma"], doc["t2"]["pos"], lang),
                    label=label,
                    source=source,
                    graded_score=doc.get("graded_score"),
                    pair_id=doc.get("id"),
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise MalformedRow(path, i, str(exc)) from exc
    return pairs


def dataset_content_hash(pairs: Iterable[LabeledPair]) -> str:
    """Content hash over the canonical serialization (ids excluded)."""
    h = hashlib.sha256()
    for pair in pairs:
        h.update(pair_to_json(pair, "-").encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()
