"""End-to-end automatic classification of unclassified reading pairs."""

from __future__ import annotations

import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .apparatus_model import MACHINE_RESP, ApparatusDocument, VariationUnit
from .errors import DocumentValidationError, ResponseFormatError, TransientGatewayError
from .llm_gateway import ModelConfig, complete
from .prompting import (
    CORRECTIVE_INSTRUCTION,
    PairDecision,
    parse_response,
    render_stable_prefix,
    render_unit_query,
)
from .selection import PairKey, classified_examples
from .transitions import TransitionPair, classify_pair_inplace, unclassified_pairs


@dataclass
class RunConfig:
    model: ModelConfig
    examples_per_category: int = 10
    concurrency: int = 4
    unit_filter: list[str] | None = None
    dry_run: bool = False
    prompt_pool: set[PairKey] | None = None


@dataclass
class UnitFailure:
    unit_id: str
    message: str


@dataclass
class RunStats:
    pairs_attempted: int = 0
    pairs_classified: int = 0
    pairs_failed: int = 0
    errors: list[UnitFailure] = field(default_factory=list)
    prompt_tokens: int = 0
    completion_tokens: int = 0
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {
            "pairs_attempted": self.pairs_attempted,
            "pairs_classified": self.pairs_classified,
            "pairs_failed": self.pairs_failed,
            "errors": [{"unit_id": e.unit_id, "message": e.message} for e in self.errors],
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "wall_time": self.wall_time,
        }


@dataclass
class _UnitOutcome:
    decisions: list[PairDecision] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    prompt_tokens: int = 0
    completion_tokens: int = 0


def _targets(doc: ApparatusDocument, config: RunConfig) -> list[tuple[VariationUnit, list[TransitionPair]]]:
    wanted = set(config.unit_filter) if config.unit_filter is not None else None
    by_unit: dict[str, list[TransitionPair]] = {}
    for pair in unclassified_pairs(doc):
        by_unit.setdefault(pair.unit_id, []).append(pair)
    targets = []
    for unit in doc.units:
        pairs = by_unit.get(unit.id)
        if not pairs:
            continue
        if wanted is not None and unit.id not in wanted:
            continue
        targets.append((unit, pairs))
    return targets


def _classify_unit(config: RunConfig, prefix: str, unit: VariationUnit, pairs, categories) -> _UnitOutcome:
    outcome = _UnitOutcome()
    query = render_unit_query(unit, pairs)
    try:
        result = complete(config.model, prefix, query)
        outcome.prompt_tokens += result.prompt_tokens
        outcome.completion_tokens += result.completion_tokens
        try:
            outcome.decisions, outcome.errors = parse_response(result.text, pairs, categories)
        except ResponseFormatError:
            # One corrective retry for an unparseable reply, then give up.
            retry = complete(config.model, prefix, query + "\n" + CORRECTIVE_INSTRUCTION)
            outcome.prompt_tokens += retry.prompt_tokens
            outcome.completion_tokens += retry.completion_tokens
            outcome.decisions, outcome.errors = parse_response(retry.text, pairs, categories)
    except ResponseFormatError as exc:
        outcome.errors = [f"unusable response after retry: {exc}"]
    except TransientGatewayError as exc:
        outcome.errors = [str(exc)]
    return outcome


def classify_document(
    doc: ApparatusDocument,
    config: RunConfig,
    output=None,
) -> tuple[ApparatusDocument, RunStats]:
    """Classify every unclassified pair (subject to unit_filter) and write
    the results back with responsibility "rdgai". Manual classifications
    are left untouched; failed pairs stay unclassified for a later rerun."""
    if config.examples_per_category < 1:
        raise ValueError("examples_per_category must be at least 1")
    if not doc.categories:
        raise DocumentValidationError("document declares no categories")
    started = time.monotonic()
    stats = RunStats()
    for category in doc.categories:
        if not classified_examples(doc, category.id, config.prompt_pool):
            warnings.warn(f"category {category.id!r} has no usable examples", stacklevel=2)
    prefix = render_stable_prefix(doc, config.examples_per_category, config.prompt_pool)
    targets = _targets(doc, config)

    if config.dry_run:
        stream = sys.stdout if output is None else output
        print(prefix, file=stream)
        for unit, pairs in targets:
            print(render_unit_query(unit, pairs), file=stream)
        stats.wall_time = time.monotonic() - started
        return doc, stats

    outcomes: dict[str, _UnitOutcome] = {}
    with ThreadPoolExecutor(max_workers=max(1, config.concurrency)) as executor:
        futures = {
            unit.id: executor.submit(_classify_unit, config, prefix, unit, pairs, doc.categories)
            for unit, pairs in targets
        }
        for unit_id, future in futures.items():
            outcomes[unit_id] = future.result()

    updated = doc.clone()
    for unit, pairs in targets:
        outcome = outcomes[unit.id]
        stats.pairs_attempted += len(pairs)
        stats.prompt_tokens += outcome.prompt_tokens
        stats.completion_tokens += outcome.completion_tokens
        for message in outcome.errors:
            stats.errors.append(UnitFailure(unit_id=unit.id, message=message))
        for decision in outcome.decisions:
            classify_pair_inplace(
                updated,
                unit.id,
                decision.active_id,
                decision.passive_id,
                [decision.category_id],
                decision.justification,
                MACHINE_RESP,
            )
            stats.pairs_classified += 1
    stats.pairs_failed = stats.pairs_attempted - stats.pairs_classified
    stats.wall_time = time.monotonic() - started
    return updated, stats
