"""Ordered reading pairs and the reciprocal/symmetric category algebra."""

from __future__ import annotations

from dataclasses import dataclass

from .apparatus_model import (
    ApparatusDocument,
    Classification,
    VariationUnit,
    add_relation_inplace,
)
from .errors import DocumentValidationError

OMITTED = "(omitted)"


def display_text(text: str) -> str:
    """Reading text as rendered anywhere a human or model reads it."""
    return text if text else OMITTED


@dataclass(frozen=True)
class TransitionPair:
    unit_id: str
    active_id: str
    passive_id: str
    active_text: str
    passive_text: str
    context: str


def enumerate_pairs(unit: VariationUnit) -> list[TransitionPair]:
    """All ordered pairs (a, b), a != b, in reading order: n(n-1) pairs."""
    pairs: list[TransitionPair] = []
    for active in unit.readings:
        for passive in unit.readings:
            if active is passive:
                continue
            pairs.append(
                TransitionPair(
                    unit_id=unit.id,
                    active_id=active.id,
                    passive_id=passive.id,
                    active_text=active.text,
                    passive_text=passive.text,
                    context=unit.context,
                )
            )
    return pairs


def reciprocal_category_ids(doc: ApparatusDocument, category_ids: list[str]) -> list[str]:
    """Category list for the reverse direction: inverse where declared, else same."""
    reverse = []
    for category_id in category_ids:
        category = doc.category(category_id)
        if category is None:
            raise DocumentValidationError(f"unknown category {category_id!r}")
        reverse.append(category.inverse_id or category.id)
    return reverse


def classify_pair_inplace(
    doc: ApparatusDocument,
    unit_id: str,
    active_id: str,
    passive_id: str,
    category_ids: list[str],
    description: str | None,
    responsibility: str,
) -> bool:
    """Write the forward relation and its reciprocal; return whether the
    reciprocal was written (a manual reverse classification blocks it)."""
    add_relation_inplace(
        doc,
        unit_id,
        Classification(
            active_id=active_id,
            passive_id=passive_id,
            category_ids=list(category_ids),
            description=description,
            responsibility=responsibility,
        ),
    )
    unit = doc.unit(unit_id)
    reverse = unit.relation_for(passive_id, active_id)
    if reverse is not None and reverse.is_manual:
        return False
    unit.set_relation(
        Classification(
            active_id=passive_id,
            passive_id=active_id,
            category_ids=reciprocal_category_ids(doc, list(category_ids)),
            description=f"reciprocal of {active_id} -> {passive_id}",
            responsibility=responsibility,
        )
    )
    return True


def classify_pair(
    doc: ApparatusDocument,
    pair: TransitionPair,
    category_id: str,
    description: str | None,
    responsibility: str,
) -> ApparatusDocument:
    """Copying form of classify_pair_inplace for single-category writes."""
    updated = doc.clone()
    classify_pair_inplace(
        updated,
        pair.unit_id,
        pair.active_id,
        pair.passive_id,
        [category_id],
        description,
        responsibility,
    )
    return updated


def unclassified_pairs(doc: ApparatusDocument) -> list[TransitionPair]:
    """All pairs over all units lacking a classification, in document order."""
    missing: list[TransitionPair] = []
    for unit in doc.units:
        for pair in enumerate_pairs(unit):
            if unit.relation_for(pair.active_id, pair.passive_id) is None:
                missing.append(pair)
    return missing
