"""Substitute-overlap labeling for same-lemma instance pairs.

Each annotated instance carries the lexical substitutes humans chose for it;
pairs of instances of the same lemma are labeled same-meaning (T) when they
share enough substitutes and different-meaning (F) when they share almost
none. The overlap fraction uses the smaller set as denominator so the rule
is symmetric and attainable when set sizes differ.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable

from gwsc.core.types import ContextedTarget, LabeledPair
from gwsc.errors import EmptySubstituteSet, MalformedRow

EXCLUDED = "EXCLUDED"

_DENOMINATORS = {
    "min": lambda a, b: min(a, b),
    "max": lambda a, b: max(a, b),
    "union": None,  # handled separately (needs the union size, not set sizes)
}


@dataclass(frozen=True)
class SubstituteSet:
    """An instance with its deduplicated, case-folded substitute lemmas."""

    instance: ContextedTarget
    substitutes: frozenset[str]

    def __post_init__(self):
        if self.instance.lemma.casefold() in self.substitutes:
            raise ValueError("substitute set must exclude the target's own lemma")


def read_coinco(path, language: str = "en") -> list[SubstituteSet]:
    """Read a substitute table.

    Format: 6-column TSV: lemma, pos, sentence, start, end, substitutes
    (``|``-separated). Substitutes are case-folded and deduplicated; the
    target's own lemma is dropped.
    """
    out = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise MalformedRow(path, i, f"expected 6 columns, got {len(parts)}")
        lemma, pos, sentence, start, end, subs = parts
        try:
            instance = ContextedTarget(sentence, int(start), int(end), lemma, pos, language)
            substitutes = frozenset(
                s.strip().casefold() for s in subs.split("|") if s.strip()
            ) - {lemma.casefold()}
            out.append(SubstituteSet(instance, substitutes))
        except (ValueError, TypeError) as exc:
            raise MalformedRow(path, i, str(exc)) from exc
    return out


def coinco_overlap(
    s1: SubstituteSet, s2: SubstituteSet, denominator: str = "min"
) -> tuple[int, float]:
    """Shared substitute count and overlap fraction for two instances."""
    if not s1.substitutes or not s2.substitutes:
        raise EmptySubstituteSet("overlap undefined for an empty substitute set")
    shared = len(s1.substitutes & s2.substitutes)
    if denominator == "union":
        denom = len(s1.substitutes | s2.substitutes)
    elif denominator in _DENOMINATORS:
        denom = _DENOMINATORS[denominator](len(s1.substitutes), len(s2.substitutes))
    else:
        raise ValueError(f"unknown denominator {denominator!r}")
    return shared, shared / denom


def label_coinco_pair(
    s1: SubstituteSet,
    s2: SubstituteSet,
    t_threshold: float = 0.5,
    f_max_shared: int = 1,
    denominator: str = "min",
) -> str:
    """Label a same-lemma instance pair as "T", "F" or "EXCLUDED".

    T needs overlap fraction >= t_threshold with at least 2 shared
    substitutes; F needs at most f_max_shared shared substitutes with a
    fraction below t_threshold. Small sets can satisfy both raw rules
    (shared = 1 but fraction >= threshold): that ambiguous case is excluded.
    """
    shared, fraction = coinco_overlap(s1, s2, denominator=denominator)
    if fraction >= t_threshold and shared >= 2:
        return "T"
    if shared <= f_max_shared and fraction < t_threshold:
        return "F"
    return EXCLUDED


def build_coinco_pairs(
    instances: Iterable[SubstituteSet],
    t_threshold: float = 0.5,
    f_max_shared: int = 1,
    denominator: str = "min",
) -> list[LabeledPair]:
    """Enumerate and label all same-lemma instance pairs, skipping EXCLUDED.

    Instances without substitutes are ignored (they cannot be labeled).
    """
    by_lemma: dict[str, list[SubstituteSet]] = defaultdict(list)
    for inst in instances:
        if inst.substitutes:
            by_lemma[inst.instance.lemma].append(inst)
    pairs = []
    for lemma in sorted(by_lemma):
        for s1, s2 in combinations(by_lemma[lemma], 2):
            label = label_coinco_pair(s1, s2, t_threshold, f_max_shared, denominator)
            if label == EXCLUDED:
                continue
            pairs.append(
                LabeledPair(a=s1.instance, b=s2.instance, label=label, source="COINCO")
            )
    return pairs


def sample_coinco_pairs(
    pairs: Iterable[LabeledPair], cap: int = 500, seed: int = 0
) -> list[LabeledPair]:
    """Cap pairs per lemma, then balance T and F globally.

    Per lemma, up to ``cap`` pairs are kept by uniform sampling without
    replacement; the majority class is then downsampled to match the
    minority. Fully deterministic given the seed.
    """
    rng = random.Random(seed)
    by_lemma: dict[str, list[LabeledPair]] = defaultdict(list)
    for pair in pairs:
        by_lemma[pair.a.lemma].append(pair)

    capped: list[LabeledPair] = []
    for lemma in sorted(by_lemma):
        group = by_lemma[lemma]
        capped.extend(group if len(group) <= cap else rng.sample(group, cap))

    t_pairs = [p for p in capped if p.label == "T"]
    f_pairs = [p for p in capped if p.label == "F"]
    k = min(len(t_pairs), len(f_pairs))
    balanced = (
        (t_pairs if len(t_pairs) == k else rng.sample(t_pairs, k))
        + (f_pairs if len(f_pairs) == k else rng.sample(f_pairs, k))
    )
    return balanced
