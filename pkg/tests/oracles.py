"""Independent reference implementations used to check the package.

Everything here is deliberately written from the plain definitions
(textbook recursion, exhaustive search, sklearn) rather than sharing any
code with the package under test.
"""

from __future__ import annotations

import itertools
import random

import numpy as np
from sklearn.metrics import accuracy_score, f1_score, precision_score, recall_score

from rdgai.apparatus_model import (
    ApparatusDocument,
    Category,
    Classification,
    Reading,
    VariationUnit,
)


def levenshtein_reference(a: str, b: str, _memo=None) -> int:
    """Textbook recursive definition with memoization."""
    if _memo is None:
        _memo = {}
    key = (a, b)
    if key in _memo:
        return _memo[key]
    if not a:
        result = len(b)
    elif not b:
        result = len(a)
    else:
        cost = 0 if a[0] == b[0] else 1
        result = min(
            levenshtein_reference(a[1:], b, _memo) + 1,
            levenshtein_reference(a, b[1:], _memo) + 1,
            levenshtein_reference(a[1:], b[1:], _memo) + cost,
        )
    _memo[key] = result
    return result


def total_deviation_reference(d: np.ndarray, medoids) -> float:
    return float(sum(min(d[i][m] for m in medoids) for i in range(d.shape[0])))


def exhaustive_k_medoids(d: np.ndarray, k: int) -> tuple[list[int], float]:
    """Globally optimal medoid set by brute force; ties to the
    lexicographically smallest index set."""
    n = d.shape[0]
    best: list[int] | None = None
    best_td = float("inf")
    for subset in itertools.combinations(range(n), min(k, n)):
        td = total_deviation_reference(d, subset)
        if td < best_td - 1e-12:
            best, best_td = list(subset), td
    assert best is not None
    return best, best_td


def is_swap_local_optimum(d: np.ndarray, medoids: list[int]) -> bool:
    """No single (medoid, non-medoid) exchange reduces total deviation."""
    base = total_deviation_reference(d, medoids)
    others = [i for i in range(d.shape[0]) if i not in medoids]
    for slot in range(len(medoids)):
        for candidate in others:
            trial = list(medoids)
            trial[slot] = candidate
            if total_deviation_reference(d, trial) < base - 1e-9:
                return False
    return True


def metrics_reference(counts, categories):
    """(accuracy, macro P, macro R, macro F1) via sklearn, reconstructing
    the per-pair label lists from a confusion matrix whose final column (if
    wider than square) holds unclassified pairs."""
    y_true: list[str] = []
    y_pred: list[str] = []
    width = len(counts[0])
    column_labels = list(categories) + (["__none__"] if width > len(categories) else [])
    for row_index, row in enumerate(counts):
        for column_index, value in enumerate(row):
            y_true.extend([categories[row_index]] * value)
            y_pred.extend([column_labels[column_index]] * value)
    present = [c for i, c in enumerate(categories) if sum(counts[i]) > 0]
    return (
        accuracy_score(y_true, y_pred),
        precision_score(y_true, y_pred, labels=present, average="macro", zero_division=0),
        recall_score(y_true, y_pred, labels=present, average="macro", zero_division=0),
        f1_score(y_true, y_pred, labels=present, average="macro", zero_division=0),
    )


def build_random_document(rng: random.Random) -> ApparatusDocument:
    """A synthetic in-memory document: a few categories (symmetric and
    reciprocal), units of 1-4 readings, and random manual relations."""
    categories = [
        Category(id="Sym_A", name="Sym_A", description="symmetric a"),
        Category(id="Sym_B", name="Sym_B", description="symmetric b"),
        Category(id="Fwd", name="Fwd", description="forward", inverse_id="Bwd"),
        Category(id="Bwd", name="Bwd", description="backward", inverse_id="Fwd"),
    ]
    alphabet = "abcdefgh"
    units = []
    for unit_index in range(rng.randint(2, 6)):
        n_readings = rng.randint(1, 4)
        readings = []
        for reading_index in range(n_readings):
            length = rng.randint(0, 6)
            text = "".join(rng.choice(alphabet) for _ in range(length))
            readings.append(Reading(id=str(reading_index + 1), text=text, witnesses=[]))
        unit = VariationUnit(id=f"u{unit_index + 1}", context="before ⸆ after", readings=readings)
        pairs = [
            (a.id, b.id)
            for a in readings
            for b in readings
            if a.id != b.id and rng.random() < 0.5
        ]
        for active_id, passive_id in pairs:
            if unit.relation_for(active_id, passive_id) is not None:
                continue
            category = rng.choice(categories)
            unit.set_relation(
                Classification(
                    active_id=active_id,
                    passive_id=passive_id,
                    category_ids=[category.id],
                    description=rng.choice([None, "noted change"]),
                    responsibility=rng.choice(["annotator1", "annotator2"]),
                )
            )
        units.append(unit)
    return ApparatusDocument(categories=categories, units=units)
