"""Prompt construction and response parsing for the classification task.

The prompt is split into a stable prefix (task statement, category
definitions, selected examples, output contract) reused byte-for-byte
across every unit of a run, and a short per-unit query. Providers that
cache identical prefixes then only pay for the query.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .apparatus_model import ApparatusDocument, VariationUnit
from .errors import PromptError, ResponseFormatError
from .selection import PairKey, pair_signature, select_examples
from .transitions import TransitionPair, display_text

NO_JUSTIFICATION = "(no justification recorded)"

_TASK_STATEMENT = """\
You are helping a textual critic annotate a collation of manuscript
witnesses. At each variation unit the witnesses split into two or more
readings, and every ordered pair of readings (active -> passive) records a
hypothetical change that a copyist made to turn the active reading into the
passive one. Classify each listed pair into exactly one of the categories
defined below. Readings are quoted in their source language and script; an
absent reading is shown as (omitted).
"""

_FORMAT_CONTRACT = """\
Reply with a single JSON array and nothing else. Each element must be an
object of the form
{"pair": <pair number>, "category": "<category id>", "justification": "<one short sentence>"}
with exactly one element for every numbered pair in the query.
"""

CORRECTIVE_INSTRUCTION = (
    "Your previous reply could not be parsed. "
    "Answer again with only the JSON array described above."
)


@dataclass
class PairDecision:
    active_id: str
    passive_id: str
    category_id: str
    justification: str


def render_stable_prefix(
    doc: ApparatusDocument,
    examples_per_category: int,
    pool: set[PairKey] | None = None,
) -> str:
    if not doc.categories:
        raise PromptError("document declares no categories")
    lines = [_TASK_STATEMENT, "Categories:", ""]
    for number, category in enumerate(doc.categories, start=1):
        lines.append(f"{number}. {category.id}: {category.description}")
        if category.inverse_id:
            lines.append(f"   (reverse direction of a {category.id} change: {category.inverse_id})")
        examples = select_examples(doc, category.id, examples_per_category, pool)
        if examples:
            lines.append("   Examples:")
            for example in examples:
                rendered = f"({example.description})" if example.description else NO_JUSTIFICATION
                lines.append(f"   - {pair_signature(example)} ⇒ {category.id} {rendered}")
        lines.append("")
    lines.append(_FORMAT_CONTRACT)
    return "\n".join(lines)


def render_unit_query(unit: VariationUnit, pairs: list[TransitionPair]) -> str:
    if not pairs:
        raise PromptError(f"no pairs to classify in unit {unit.id!r}")
    for pair in pairs:
        if pair.unit_id != unit.id:
            raise PromptError(f"pair {pair.active_id!r} -> {pair.passive_id!r} is not from unit {unit.id!r}")
    lines = [f"Variation unit: {unit.id}", f"Context: {unit.context}", "", "Readings:"]
    for reading in unit.readings:
        lines.append(f"- {reading.id}: {display_text(reading.text)}")
    lines.append("")
    lines.append("Pairs to classify:")
    for number, pair in enumerate(pairs, start=1):
        lines.append(
            f"{number}. reading {pair.active_id} -> reading {pair.passive_id}: "
            f"{display_text(pair.active_text)} -> {display_text(pair.passive_text)}"
        )
    return "\n".join(lines) + "\n"


def _first_json_array(text: str):
    decoder = json.JSONDecoder()
    start = text.find("[")
    while start != -1:
        try:
            value, _ = decoder.raw_decode(text, start)
        except json.JSONDecodeError:
            value = None
        if isinstance(value, list):
            return value
        start = text.find("[", start + 1)
    raise ResponseFormatError("no JSON array found in the response")


def parse_response(
    text: str,
    expected_pairs: list[TransitionPair],
    categories,
) -> tuple[list[PairDecision], list[str]]:
    """Decode a model reply into per-pair decisions.

    Returns (decisions, errors): errors describe pairs that could not be
    used. A reply without any JSON array raises ResponseFormatError so the
    caller can retry the whole unit.
    """
    elements = _first_json_array(text)
    by_id = {category.id.lower(): category.id for category in categories}
    chosen: dict[int, tuple[str, str]] = {}
    errors: list[str] = []
    for element in elements:
        if not isinstance(element, dict):
            errors.append(f"ignored a non-object array element: {element!r}")
            continue
        try:
            number = int(element["pair"])
        except (KeyError, TypeError, ValueError):
            errors.append(f"element without a usable pair number: {element!r}")
            continue
        if not 1 <= number <= len(expected_pairs):
            errors.append(f"pair {number}: no such pair in the query")
            continue
        category_raw = str(element.get("category", ""))
        category_id = by_id.get(category_raw.strip().lower())
        if category_id is None:
            errors.append(f"pair {number}: unknown category {category_raw!r}")
            continue
        justification = str(element.get("justification", ""))
        chosen[number] = (category_id, justification)  # duplicates: last wins
    decisions: list[PairDecision] = []
    for number, pair in enumerate(expected_pairs, start=1):
        if number not in chosen:
            if not any(error.startswith(f"pair {number}:") for error in errors):
                errors.append(f"pair {number}: no decision in the response")
            continue
        category_id, justification = chosen[number]
        decisions.append(
            PairDecision(
                active_id=pair.active_id,
                passive_id=pair.passive_id,
                category_id=category_id,
                justification=justification,
            )
        )
    return decisions, errors
