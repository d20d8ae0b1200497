"""Merging a freshly built dataset with a previously published one."""

from __future__ import annotations

from typing import Iterable

from gwsc.core.types import ContextedTarget, LabeledPair


def _pair_key(pair: LabeledPair):
    def side(t: ContextedTarget):
        return (t.sentence, t.start, t.end)

    return tuple(sorted((side(pair.a), side(pair.b))))


def merge_dedupe(
    new_pairs: Iterable[LabeledPair], legacy_pairs: Iterable[LabeledPair]
) -> list[LabeledPair]:
    """Union of two pair collections, deduplicated and deterministically ordered.

    The key is the unordered pair of (sentence, target span), ignoring labels;
    when a duplicate disagrees on the label the legacy pair wins, keeping
    compatibility with the previously published data. Output is sorted by key.
    """
    merged: dict[tuple, LabeledPair] = {}
    for pair in new_pairs:
        merged[_pair_key(pair)] = pair
    for pair in legacy_pairs:
        merged[_pair_key(pair)] = pair
    return [merged[k] for k in sorted(merged)]
