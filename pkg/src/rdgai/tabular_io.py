"""CSV export/import of classifications for bulk editing in a spreadsheet."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .apparatus_model import ApparatusDocument
from .errors import TableFormatError
from .transitions import classify_pair_inplace, display_text, enumerate_pairs

HEADER = [
    "App ID",
    "Context",
    "Active Reading ID",
    "Passive Reading ID",
    "Active Reading Text",
    "Passive Reading Text",
    "Description",
    "Relation Type(s)",
]


@dataclass
class ImportSummary:
    added: int = 0
    changed: int = 0
    unchanged: int = 0
    errors: list[str] = field(default_factory=list)


def export_table(doc: ApparatusDocument) -> str:
    """UTF-8 CSV (with BOM, RFC 4180 line endings): one row per ordered
    pair in document order; unclassified pairs leave the last two columns
    empty."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(HEADER)
    for unit in doc.units:
        for pair in enumerate_pairs(unit):
            relation = unit.relation_for(pair.active_id, pair.passive_id)
            description = relation.description if relation and relation.description else ""
            categories = ";".join(relation.category_ids) if relation else ""
            writer.writerow(
                [
                    unit.id,
                    unit.context,
                    pair.active_id,
                    pair.passive_id,
                    display_text(pair.active_text),
                    display_text(pair.passive_text),
                    description,
                    categories,
                ]
            )
    return "﻿" + buffer.getvalue()


def import_table(
    doc: ApparatusDocument,
    csv_text: str,
    responsibility: str = "import",
) -> tuple[ApparatusDocument, ImportSummary]:
    """Apply edited rows back onto the document.

    Rows are compared against the document as it was before the import, so
    reciprocal updates triggered by an earlier row never make a later,
    untouched row look like an edit. Empty relation cells state no opinion
    and leave the pair alone. Bad rows are skipped and reported."""
    rows = list(csv.reader(io.StringIO(csv_text.lstrip("﻿"))))
    if not rows or rows[0] != HEADER:
        raise TableFormatError("header row does not match the export format")
    snapshot = doc
    updated = doc.clone()
    summary = ImportSummary()
    known_categories = {category.id for category in doc.categories}
    for line_number, row in enumerate(rows[1:], start=2):
        if not row or all(not cell for cell in row):
            continue
        if len(row) != len(HEADER):
            summary.errors.append(f"row {line_number}: expected {len(HEADER)} columns, got {len(row)}")
            continue
        unit_id, _context, active_id, passive_id, _at, _pt, description, relation_cell = row
        unit = snapshot.unit(unit_id)
        if unit is None:
            summary.errors.append(f"row {line_number}: unknown unit {unit_id!r}")
            continue
        if unit.reading(active_id) is None or unit.reading(passive_id) is None:
            summary.errors.append(
                f"row {line_number}: unknown reading in unit {unit_id!r}"
            )
            continue
        if not relation_cell.strip():
            continue
        category_ids = [c.strip() for c in relation_cell.split(";") if c.strip()]
        unknown = [c for c in category_ids if c not in known_categories]
        if unknown:
            summary.errors.append(
                f"row {line_number}: unknown category {unknown[0]!r}"
            )
            continue
        if active_id == passive_id:
            summary.errors.append(f"row {line_number}: identical reading ids")
            continue
        existing = unit.relation_for(active_id, passive_id)
        new_description = description if description else None
        if (
            existing is not None
            and existing.category_ids == category_ids
            and (existing.description or None) == new_description
        ):
            summary.unchanged += 1
            continue
        classify_pair_inplace(
            updated,
            unit_id,
            active_id,
            passive_id,
            category_ids,
            new_description,
            responsibility,
        )
        if existing is None:
            summary.added += 1
        else:
            summary.changed += 1
    return updated, summary
