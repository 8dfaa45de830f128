"""Representative example selection: edit distance + k-medoids clustering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .apparatus_model import ApparatusDocument
from .transitions import TransitionPair, display_text, enumerate_pairs

PairKey = tuple[str, str, str]


def levenshtein(a: str, b: str) -> int:
    """Minimum single-character insertions, deletions, and substitutions
    turning a into b, over Unicode scalar values."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(b) > len(a):
        a, b = b, a
    previous = list(range(len(b) + 1))
    current = [0] * (len(b) + 1)
    for i, ca in enumerate(a, start=1):
        current[0] = i
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
        previous, current = current, previous
    return previous[len(b)]


@dataclass
class ClassifiedExample:
    pair: TransitionPair
    category_id: str
    description: str | None

    @property
    def has_description(self) -> bool:
        return bool(self.description)


def pair_signature(example: ClassifiedExample) -> str:
    pair = example.pair
    return f"{display_text(pair.active_text)} -> {display_text(pair.passive_text)}"


def distance_matrix(signatures: list[str]) -> np.ndarray:
    """Symmetric pairwise Levenshtein distances with a zero diagonal."""
    n = len(signatures)
    d = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = levenshtein(signatures[i], signatures[j])
    return d


def total_deviation(d: np.ndarray, medoids: list[int]) -> float:
    return float(d[medoids].min(axis=0).sum())


def _build_init(d: np.ndarray, k: int) -> list[int]:
    medoids = [int(np.argmin(d.sum(axis=1)))]
    nearest = d[medoids[0]].astype(np.float64).copy()
    while len(medoids) < k:
        gains = np.maximum(nearest[None, :] - d, 0).sum(axis=1)
        gains[medoids] = -1.0
        best = int(np.argmax(gains))
        medoids.append(best)
        nearest = np.minimum(nearest, d[best])
    return medoids


def _nearest_two(d: np.ndarray, medoids: list[int]):
    """Per point: index (into medoids) of the nearest medoid, its distance,
    and the second-nearest distance."""
    sub = d[medoids].astype(np.float64)
    order = np.argsort(sub, axis=0, kind="stable")
    cols = np.arange(d.shape[0])
    nearest_slot = order[0]
    nearest = sub[nearest_slot, cols]
    second = sub[order[1], cols] if len(medoids) > 1 else np.full(d.shape[0], np.inf)
    return nearest_slot, nearest, second


def _removal_loss(nearest_slot, nearest, second, k: int) -> np.ndarray:
    loss = np.zeros(k)
    np.add.at(loss, nearest_slot, second - nearest)
    return loss


def _swap_descent(d: np.ndarray, medoids: list[int]) -> list[int]:
    """Eager first-improving swap descent (the FasterPAM update rule):
    each non-medoid is scored against all k removal candidates in one pass."""
    n = d.shape[0]
    medoids = list(medoids)
    k = len(medoids)
    nearest_slot, nearest, second = _nearest_two(d, medoids)
    loss = _removal_loss(nearest_slot, nearest, second, k)
    improved = True
    while improved:
        improved = False
        for x in range(n):
            if x in medoids:
                continue
            dx = d[x].astype(np.float64)
            shared = np.minimum(dx - nearest, 0.0).sum()
            delta = loss + shared
            correction = np.where(
                dx < nearest,
                nearest - second,
                np.where(dx < second, dx - second, 0.0),
            )
            np.add.at(delta, nearest_slot, correction)
            best = float(delta.min())
            if best < -1e-9:
                slots = [i for i in range(k) if delta[i] <= best + 1e-12]
                slot = min(slots, key=lambda i: medoids[i])
                medoids[slot] = x
                nearest_slot, nearest, second = _nearest_two(d, medoids)
                loss = _removal_loss(nearest_slot, nearest, second, k)
                improved = True
    return sorted(medoids)


def k_medoids(d: np.ndarray, k: int) -> list[int]:
    """Indices of k medoids minimizing total deviation to a swap-local
    optimum. Deterministic: greedy BUILD start, ties to the lowest index."""
    if k < 1:
        raise ValueError("k must be at least 1")
    n = d.shape[0]
    if k >= n:
        return list(range(n))
    medoids = _build_init(d, k)
    if k == 1:
        return medoids  # BUILD's first pick already minimizes TD for k=1
    return _swap_descent(d, medoids)


def classified_examples(
    doc: ApparatusDocument,
    category_id: str,
    pool: set[PairKey] | None = None,
) -> list[ClassifiedExample]:
    """Manually classified pairs of one category, in document order.
    When pool is given, only pairs listed in it are eligible."""
    examples: list[ClassifiedExample] = []
    for unit in doc.units:
        by_pair = {(r.active_id, r.passive_id): r for r in unit.relations}
        for pair in enumerate_pairs(unit):
            relation = by_pair.get((pair.active_id, pair.passive_id))
            if relation is None or not relation.is_manual:
                continue
            if relation.primary_category != category_id:
                continue
            if pool is not None and (unit.id, pair.active_id, pair.passive_id) not in pool:
                continue
            examples.append(
                ClassifiedExample(
                    pair=pair,
                    category_id=category_id,
                    description=relation.description,
                )
            )
    return examples


def _medoid_subset(examples: list[ClassifiedExample], k: int) -> list[ClassifiedExample]:
    if len(examples) <= k:
        return list(examples)
    d = distance_matrix([pair_signature(e) for e in examples])
    return [examples[i] for i in k_medoids(d, k)]


def select_examples(
    doc: ApparatusDocument,
    category_id: str,
    k: int,
    pool: set[PairKey] | None = None,
) -> list[ClassifiedExample]:
    """Up to k representative examples: described ones take priority, medoids
    fill the remainder; output keeps described-first document order."""
    all_examples = classified_examples(doc, category_id, pool)
    described = [e for e in all_examples if e.has_description]
    undescribed = [e for e in all_examples if not e.has_description]
    if len(all_examples) <= k:
        return described + undescribed
    if len(described) >= k:
        return _medoid_subset(described, k)
    return described + _medoid_subset(undescribed, k - len(described))
