"""TEI XML critical apparatus model: parse, represent, mutate, re-serialize.

The parsed tree is kept alongside the model so that everything this module
does not understand (header prose, sectioning, comments) survives a
round trip untouched. Only the transcriptional relation lists are ever
rewritten on output.
"""

from __future__ import annotations

import copy
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .errors import DocumentParseError, DocumentValidationError

TEI_NS = "http://www.tei-c.org/ns/1.0"
XML_ID = "{http://www.w3.org/XML/1998/namespace}id"

# Responsibility value reserved for machine-produced classifications.
MACHINE_RESP = "rdgai"

# Marks the position of a variation unit inside its surrounding context.
UNIT_MARKER = "⸆"

# Elements whose running text supplies the context around an embedded app.
_CONTEXT_BLOCKS = {"ab", "p", "l", "seg"}


def _localname(tag) -> str:
    if not isinstance(tag, str):
        return ""  # comments and processing instructions
    return tag.rsplit("}", 1)[-1]


def _collapse(text: str) -> str:
    """Normalize whitespace: internal runs become one space, ends trimmed."""
    return " ".join(text.split())


def _strip_pointer(value: str) -> str:
    return value.lstrip("#")


@dataclass
class Category:
    """A transition class, possibly paired with a reciprocal class."""

    id: str
    name: str
    description: str
    inverse_id: str | None = None

    @property
    def is_symmetric(self) -> bool:
        return self.inverse_id is None


@dataclass
class Reading:
    id: str
    text: str
    witnesses: list[str] = field(default_factory=list)


@dataclass
class Classification:
    """A category assignment for one ordered pair of readings."""

    active_id: str
    passive_id: str
    category_ids: list[str]
    description: str | None = None
    responsibility: str = ""

    @property
    def primary_category(self) -> str:
        return self.category_ids[0]

    @property
    def is_manual(self) -> bool:
        return self.responsibility != MACHINE_RESP


@dataclass
class VariationUnit:
    id: str
    context: str
    readings: list[Reading]
    relations: list[Classification] = field(default_factory=list)

    def reading(self, reading_id: str) -> Reading | None:
        for reading in self.readings:
            if reading.id == reading_id:
                return reading
        return None

    def relation_for(self, active_id: str, passive_id: str) -> Classification | None:
        for relation in self.relations:
            if relation.active_id == active_id and relation.passive_id == passive_id:
                return relation
        return None

    def set_relation(self, classification: Classification) -> None:
        """Insert a relation, replacing any prior one for the same ordered pair."""
        for i, relation in enumerate(self.relations):
            if (
                relation.active_id == classification.active_id
                and relation.passive_id == classification.passive_id
            ):
                self.relations[i] = classification
                return
        self.relations.append(classification)

    def remove_relation(self, active_id: str, passive_id: str) -> int:
        before = len(self.relations)
        self.relations = [
            r
            for r in self.relations
            if not (r.active_id == active_id and r.passive_id == passive_id)
        ]
        return before - len(self.relations)


@dataclass
class ApparatusDocument:
    categories: list[Category]
    units: list[VariationUnit]
    # The parsed source tree; compared documents are equal on the model alone.
    source_shell: ET.ElementTree | None = field(default=None, compare=False, repr=False)

    def category(self, category_id: str) -> Category | None:
        for category in self.categories:
            if category.id == category_id:
                return category
        return None

    def unit(self, unit_id: str) -> VariationUnit | None:
        for unit in self.units:
            if unit.id == unit_id:
                return unit
        return None

    def clone(self) -> "ApparatusDocument":
        return copy.deepcopy(self)


def _iter_local(root: ET.Element, name: str):
    for el in root.iter():
        if _localname(el.tag) == name:
            yield el


def _element_text(el: ET.Element) -> str:
    return "".join(el.itertext())


def _is_transcriptional_list(el: ET.Element) -> bool:
    if _localname(el.tag) != "listRelation":
        return False
    return el.get("type") in (None, "transcriptional")


def _parse_categories(root: ET.Element) -> list[Category]:
    categories: list[Category] = []
    seen: set[str] = set()
    for group in _iter_local(root, "interpGrp"):
        if group.get("type") != "transcriptional":
            continue
        for interp in group:
            if _localname(interp.tag) != "interp":
                continue
            category_id = interp.get(XML_ID) or ""
            if not category_id:
                raise DocumentValidationError("interp element without xml:id in transcriptional interpGrp")
            if category_id in seen:
                raise DocumentValidationError(f"duplicate category id {category_id!r}")
            seen.add(category_id)
            corresp = interp.get("corresp")
            categories.append(
                Category(
                    id=category_id,
                    name=interp.get("n") or category_id,
                    description=_collapse(_element_text(interp)),
                    inverse_id=_strip_pointer(corresp) if corresp else None,
                )
            )
    _check_category_graph(categories)
    return categories


def _check_category_graph(categories: list[Category]) -> None:
    by_id = {c.id: c for c in categories}
    for category in categories:
        if category.inverse_id is None:
            continue
        inverse = by_id.get(category.inverse_id)
        if inverse is None:
            raise DocumentValidationError(
                f"category {category.id!r} names unknown inverse {category.inverse_id!r}"
            )
        if inverse.inverse_id != category.id:
            raise DocumentValidationError(
                f"category {category.id!r} has inverse {inverse.id!r}, "
                f"which does not point back"
            )


def _reading_representative(app: ET.Element) -> str:
    """Base text stand-in for an app when building a sibling's context."""
    for child in app:
        if _localname(child.tag) == "lem":
            return _element_text(child)
    for child in app:
        if _localname(child.tag) == "rdg":
            return _element_text(child)
    return ""


def _context_for(app: ET.Element, parent: ET.Element | None) -> str:
    if parent is None or _localname(parent.tag) not in _CONTEXT_BLOCKS:
        return UNIT_MARKER
    parts: list[str] = [parent.text or ""]
    for child in parent:
        if child is app:
            parts.append(UNIT_MARKER)
        elif _localname(child.tag) == "app":
            parts.append(_reading_representative(child))
        elif isinstance(child.tag, str):
            parts.append(_element_text(child))
        parts.append(child.tail or "")
    return _collapse("".join(parts))


def _parse_readings(app: ET.Element, unit_id: str) -> list[Reading]:
    readings: list[Reading] = []
    seen: set[str] = set()
    ordinal = 0
    for child in app:
        if _localname(child.tag) != "rdg":
            continue
        ordinal += 1
        reading_id = child.get("n") or child.get(XML_ID) or str(ordinal)
        if reading_id in seen:
            raise DocumentValidationError(
                f"duplicate reading id {reading_id!r} in unit {unit_id!r}"
            )
        seen.add(reading_id)
        witnesses = [_strip_pointer(w) for w in (child.get("wit") or "").split()]
        readings.append(Reading(id=reading_id, text=_collapse(_element_text(child)), witnesses=witnesses))
    return readings


def _parse_relations(app: ET.Element, unit: VariationUnit, categories: list[Category]) -> None:
    category_ids = {c.id for c in categories}
    reading_ids = {r.id for r in unit.readings}
    for child in app:
        if not _is_transcriptional_list(child):
            continue
        for relation in child:
            if _localname(relation.tag) != "relation":
                continue
            active = _strip_pointer(relation.get("active") or "")
            passive = _strip_pointer(relation.get("passive") or "")
            if not active or not passive:
                raise DocumentValidationError(
                    f"relation without active/passive in unit {unit.id!r}"
                )
            if active == passive:
                raise DocumentValidationError(
                    f"relation with identical endpoints {active!r} in unit {unit.id!r}"
                )
            for endpoint in (active, passive):
                if endpoint not in reading_ids:
                    raise DocumentValidationError(
                        f"relation references unknown reading {endpoint!r} in unit {unit.id!r}"
                    )
            ana = [_strip_pointer(a) for a in (relation.get("ana") or "").split()]
            if not ana:
                raise DocumentValidationError(
                    f"relation {active!r} -> {passive!r} without categories in unit {unit.id!r}"
                )
            for category_id in ana:
                if category_id not in category_ids:
                    raise DocumentValidationError(
                        f"relation references unknown category {category_id!r} in unit {unit.id!r}"
                    )
            resp = relation.get("resp")
            if not resp:
                raise DocumentValidationError(
                    f"relation {active!r} -> {passive!r} without resp in unit {unit.id!r}"
                )
            description: str | None = None
            for sub in relation:
                if _localname(sub.tag) == "desc":
                    description = _element_text(sub).strip()
                    break
            unit.set_relation(
                Classification(
                    active_id=active,
                    passive_id=passive,
                    category_ids=ana,
                    description=description,
                    responsibility=_strip_pointer(resp),
                )
            )


def parse_document(xml_text: str) -> ApparatusDocument:
    """Parse TEI XML into the apparatus model, keeping the tree as shell."""
    builder = ET.TreeBuilder(insert_comments=True, insert_pis=True)
    try:
        root = ET.fromstring(xml_text, parser=ET.XMLParser(target=builder))
    except ET.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        message = str(exc).split(": line ")[0]
        raise DocumentParseError(message, line, column) from exc

    categories = _parse_categories(root)
    parent_of = {child: parent for parent in root.iter() for child in parent}

    units: list[VariationUnit] = []
    seen_units: set[str] = set()
    for ordinal, app in enumerate(_iter_local(root, "app"), start=1):
        unit_id = app.get(XML_ID) or f"unit-{ordinal}"
        if unit_id in seen_units:
            raise DocumentValidationError(f"duplicate unit id {unit_id!r}")
        seen_units.add(unit_id)
        unit = VariationUnit(
            id=unit_id,
            context=_context_for(app, parent_of.get(app)),
            readings=_parse_readings(app, unit_id),
        )
        if not unit.readings:
            raise DocumentValidationError(f"unit {unit_id!r} has no readings")
        _parse_relations(app, unit, categories)
        units.append(unit)

    return ApparatusDocument(categories=categories, units=units, source_shell=ET.ElementTree(root))


def validate_document(doc: ApparatusDocument) -> None:
    """Raise DocumentValidationError if any model invariant is broken."""
    seen_categories: set[str] = set()
    for category in doc.categories:
        if not category.id:
            raise DocumentValidationError("category with empty id")
        if category.id in seen_categories:
            raise DocumentValidationError(f"duplicate category id {category.id!r}")
        seen_categories.add(category.id)
    _check_category_graph(doc.categories)

    seen_units: set[str] = set()
    for unit in doc.units:
        if unit.id in seen_units:
            raise DocumentValidationError(f"duplicate unit id {unit.id!r}")
        seen_units.add(unit.id)
        if not unit.readings:
            raise DocumentValidationError(f"unit {unit.id!r} has no readings")
        reading_ids = set()
        for reading in unit.readings:
            if reading.id in reading_ids:
                raise DocumentValidationError(
                    f"duplicate reading id {reading.id!r} in unit {unit.id!r}"
                )
            reading_ids.add(reading.id)
        seen_pairs: set[tuple[str, str]] = set()
        for relation in unit.relations:
            if relation.active_id == relation.passive_id:
                raise DocumentValidationError(
                    f"relation with identical endpoints in unit {unit.id!r}"
                )
            for endpoint in (relation.active_id, relation.passive_id):
                if endpoint not in reading_ids:
                    raise DocumentValidationError(
                        f"relation references unknown reading {endpoint!r} in unit {unit.id!r}"
                    )
            if not relation.category_ids:
                raise DocumentValidationError(
                    f"relation without categories in unit {unit.id!r}"
                )
            for category_id in relation.category_ids:
                if category_id not in seen_categories:
                    raise DocumentValidationError(
                        f"relation references unknown category {category_id!r} in unit {unit.id!r}"
                    )
            if not relation.responsibility:
                raise DocumentValidationError(
                    f"relation without responsibility in unit {unit.id!r}"
                )
            pair = (relation.active_id, relation.passive_id)
            if pair in seen_pairs:
                raise DocumentValidationError(
                    f"multiple relations for pair {pair!r} in unit {unit.id!r}"
                )
            seen_pairs.add(pair)


def _relation_element(ns: str, relation: Classification) -> ET.Element:
    el = ET.Element(f"{ns}relation")
    el.set("active", f"#{relation.active_id}")
    el.set("passive", f"#{relation.passive_id}")
    el.set("ana", " ".join(f"#{c}" for c in relation.category_ids))
    el.set("resp", f"#{relation.responsibility}")
    if relation.description is not None:
        desc = ET.SubElement(el, f"{ns}desc")
        desc.text = relation.description
    return el


def _sync_relations(root: ET.Element, doc: ApparatusDocument) -> None:
    apps = list(_iter_local(root, "app"))
    if len(apps) != len(doc.units):
        raise DocumentValidationError(
            f"source tree has {len(apps)} app elements but the model has {len(doc.units)} units"
        )
    for app, unit in zip(apps, doc.units):
        ns = app.tag[: app.tag.rindex("}") + 1] if app.tag.startswith("{") else ""
        for stale in [child for child in app if _is_transcriptional_list(child)]:
            app.remove(stale)
        if not unit.relations:
            continue
        list_el = ET.SubElement(app, f"{ns}listRelation")
        list_el.set("type", "transcriptional")
        for relation in unit.relations:
            list_el.append(_relation_element(ns, relation))


def _synthesize_tree(doc: ApparatusDocument) -> ET.Element:
    """Build a minimal TEI skeleton for documents created in memory."""
    ns = f"{{{TEI_NS}}}"
    root = ET.Element(f"{ns}TEI")
    header = ET.SubElement(root, f"{ns}teiHeader")
    file_desc = ET.SubElement(header, f"{ns}fileDesc")
    title_stmt = ET.SubElement(file_desc, f"{ns}titleStmt")
    ET.SubElement(title_stmt, f"{ns}title").text = "Critical apparatus"
    profile = ET.SubElement(header, f"{ns}profileDesc")
    group = ET.SubElement(profile, f"{ns}interpGrp")
    group.set("type", "transcriptional")
    for category in doc.categories:
        interp = ET.SubElement(group, f"{ns}interp")
        interp.set(XML_ID, category.id)
        if category.name != category.id:
            interp.set("n", category.name)
        if category.inverse_id is not None:
            interp.set("corresp", f"#{category.inverse_id}")
        interp.text = category.description
    body = ET.SubElement(ET.SubElement(root, f"{ns}text"), f"{ns}body")
    for unit in doc.units:
        ab = ET.SubElement(body, f"{ns}ab")
        pre, _, post = unit.context.partition(UNIT_MARKER)
        ab.text = pre
        app = ET.SubElement(ab, f"{ns}app")
        app.set(XML_ID, unit.id)
        app.tail = post
        for reading in unit.readings:
            rdg = ET.SubElement(app, f"{ns}rdg")
            rdg.set("n", reading.id)
            if reading.witnesses:
                rdg.set("wit", " ".join(f"#{w}" for w in reading.witnesses))
            rdg.text = reading.text
    return root


def serialize_document(doc: ApparatusDocument) -> str:
    """Emit TEI XML that parses back to a semantically equal document."""
    validate_document(doc)
    if doc.source_shell is not None:
        root = copy.deepcopy(doc.source_shell).getroot()
    else:
        root = _synthesize_tree(doc)
    _sync_relations(root, doc)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def add_relation(
    doc: ApparatusDocument, unit_id: str, classification: Classification
) -> ApparatusDocument:
    """Return a copy of the document with the relation added (or replaced)."""
    updated = doc.clone()
    add_relation_inplace(updated, unit_id, classification)
    return updated


def add_relation_inplace(
    doc: ApparatusDocument, unit_id: str, classification: Classification
) -> None:
    """In-place variant for callers that own their working copy."""
    unit = doc.unit(unit_id)
    if unit is None:
        raise DocumentValidationError(f"unknown unit {unit_id!r}")
    if classification.active_id == classification.passive_id:
        raise DocumentValidationError(
            f"relation endpoints must differ (got {classification.active_id!r} twice)"
        )
    for endpoint in (classification.active_id, classification.passive_id):
        if unit.reading(endpoint) is None:
            raise DocumentValidationError(
                f"unknown reading {endpoint!r} in unit {unit_id!r}"
            )
    if not classification.category_ids:
        raise DocumentValidationError("classification without categories")
    for category_id in classification.category_ids:
        if doc.category(category_id) is None:
            raise DocumentValidationError(f"unknown category {category_id!r}")
    if not classification.responsibility:
        raise DocumentValidationError("classification without responsibility")
    unit.set_relation(classification)


def remove_relation(
    doc: ApparatusDocument, unit_id: str, active_id: str, passive_id: str
) -> tuple[ApparatusDocument, int]:
    """Return a copy with the forward relation removed; count may be 0."""
    updated = doc.clone()
    unit = updated.unit(unit_id)
    if unit is None:
        return updated, 0
    return updated, unit.remove_relation(active_id, passive_id)


# Serializing unprefixed TEI output needs the namespace registered once.
ET.register_namespace("", TEI_NS)
