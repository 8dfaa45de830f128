"""HTTP API over one loaded apparatus document, plus the static UI."""

from __future__ import annotations

import os
import tempfile
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .apparatus_model import ApparatusDocument, parse_document, serialize_document
from .errors import DocumentValidationError
from .transitions import classify_pair_inplace, enumerate_pairs

STATIC_DIR = Path(__file__).parent / "static"


@dataclass
class Session:
    path: Path
    doc: ApparatusDocument
    responsibility: str
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


class ClassificationRequest(BaseModel):
    unit_id: str
    active: str
    passive: str
    category_id: str
    description: str | None = None


def _persist(session: Session) -> None:
    """Atomic rewrite of the TEI file; the XML stays the source of truth."""
    text = serialize_document(session.doc)
    fd, temp_path = tempfile.mkstemp(dir=session.path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(temp_path, session.path)
    except OSError:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def _relation_payload(unit_id: str, relation) -> dict:
    return {
        "unit_id": unit_id,
        "active": relation.active_id,
        "passive": relation.passive_id,
        "category_id": relation.primary_category,
        "description": relation.description,
        "responsibility": relation.responsibility,
    }


def create_app(
    document_path: str | Path,
    responsibility: str = "annotator",
    static_dir: str | Path | None = None,
) -> FastAPI:
    path = Path(document_path)
    doc = parse_document(path.read_text(encoding="utf-8"))
    session = Session(path=path, doc=doc, responsibility=responsibility)
    app = FastAPI(title="rdgai")
    app.state.session = session

    @app.get("/api/summary")
    def summary() -> dict:
        doc = session.doc
        total = sum(len(unit.readings) * (len(unit.readings) - 1) for unit in doc.units)
        classified = sum(len(unit.relations) for unit in doc.units)
        return {
            "unit_count": len(doc.units),
            "classified_pair_count": classified,
            "total_pair_count": total,
            "categories": [
                {"id": c.id, "description": c.description, "inverse_id": c.inverse_id}
                for c in doc.categories
            ],
            # per-unit status so the UI sidebar can be built from this call
            "units": [
                {
                    "id": unit.id,
                    "classified_pair_count": len(unit.relations),
                    "total_pair_count": len(unit.readings) * (len(unit.readings) - 1),
                }
                for unit in doc.units
            ],
            "revision": session.revision,
        }

    @app.get("/api/units/{unit_id}")
    def unit_detail(unit_id: str) -> dict:
        doc = session.doc
        unit = doc.unit(unit_id)
        if unit is None:
            raise HTTPException(status_code=404, detail=f"unknown unit {unit_id!r}")
        pairs = []
        for pair in enumerate_pairs(unit):
            entry: dict = {"active": pair.active_id, "passive": pair.passive_id}
            relation = unit.relation_for(pair.active_id, pair.passive_id)
            if relation is not None:
                entry["classification"] = relation.primary_category
                if relation.description is not None:
                    entry["description"] = relation.description
                entry["responsibility"] = relation.responsibility
            pairs.append(entry)
        detail = {
            "id": unit.id,
            "context": unit.context,
            "readings": [
                {"id": r.id, "text": r.text, "witnesses": r.witnesses} for r in unit.readings
            ],
            "pairs": pairs,
            "revision": session.revision,
        }
        position = next(i for i, u in enumerate(doc.units) if u.id == unit.id)
        if position > 0:
            detail["prev_id"] = doc.units[position - 1].id
        if position < len(doc.units) - 1:
            detail["next_id"] = doc.units[position + 1].id
        return detail

    @app.post("/api/classifications")
    def classify(request: ClassificationRequest) -> dict:
        with session.lock:
            working = session.doc.clone()
            try:
                reciprocal_written = classify_pair_inplace(
                    working,
                    request.unit_id,
                    request.active,
                    request.passive,
                    [request.category_id],
                    request.description,
                    session.responsibility,
                )
            except DocumentValidationError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            previous = session.doc
            session.doc = working
            try:
                _persist(session)
            except OSError as exc:
                session.doc = previous
                raise HTTPException(status_code=409, detail=f"could not persist: {exc}")
            session.revision += 1
            unit = working.unit(request.unit_id)
            written = [_relation_payload(unit.id, unit.relation_for(request.active, request.passive))]
            if reciprocal_written:
                written.append(
                    _relation_payload(unit.id, unit.relation_for(request.passive, request.active))
                )
            return {
                "written": written,
                "reciprocal_written": reciprocal_written,
                "revision": session.revision,
            }

    @app.delete("/api/classifications")
    def remove(unit_id: str, active: str, passive: str) -> dict:
        with session.lock:
            working = session.doc.clone()
            unit = working.unit(unit_id)
            removed = unit.remove_relation(active, passive) if unit is not None else 0
            if removed:
                previous = session.doc
                session.doc = working
                try:
                    _persist(session)
                except OSError as exc:
                    session.doc = previous
                    raise HTTPException(status_code=409, detail=f"could not persist: {exc}")
                session.revision += 1
            return {"removed": removed, "revision": session.revision}

    directory = Path(static_dir) if static_dir is not None else STATIC_DIR
    if directory.is_dir():
        app.mount("/", StaticFiles(directory=directory, html=True), name="ui")
    return app
