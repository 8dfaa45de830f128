"""Hold-out evaluation of automatic classification, with report rendering."""

from __future__ import annotations

import html
import random
import warnings
from dataclasses import dataclass
from statistics import fmean

from .apparatus_model import MACHINE_RESP, ApparatusDocument
from .llm_gateway import ModelConfig, complete
from .pipeline import RunConfig, classify_document
from .prompting import render_stable_prefix
from .selection import PairKey
from .transitions import display_text

UNCLASSIFIED = "unclassified"


@dataclass
class EvalSplit:
    prompt_pool: dict[PairKey, str]
    ground_truth: dict[PairKey, str]
    proportion: float
    seed: int


@dataclass
class ConfusionMatrix:
    categories: list[str]
    counts: list[list[int]]  # rows = ground truth, last column = unclassified

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.categories)))


@dataclass
class PairListing:
    unit_id: str
    active_id: str
    passive_id: str
    active_text: str
    passive_text: str
    ground_truth: str
    prediction: str | None
    justification: str | None
    correct: bool


@dataclass
class EvaluationReport:
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    matrix: ConfusionMatrix
    listings: list[PairListing]
    base_prompt: str
    suggestions: str | None = None


def manual_annotations(doc: ApparatusDocument) -> dict[PairKey, str]:
    """Every manually classified pair mapped to its primary category,
    in document order."""
    annotations: dict[PairKey, str] = {}
    for unit in doc.units:
        for relation in unit.relations:
            if relation.is_manual:
                annotations[(unit.id, relation.active_id, relation.passive_id)] = (
                    relation.primary_category
                )
    return annotations


def split_annotations(doc: ApparatusDocument, proportion: float, seed: int) -> EvalSplit:
    """Stratified split of the manual annotations into a prompt pool and
    ground truth. Each category is shuffled with its own seeded generator,
    so the split is stable per seed even if other categories change."""
    if not 0 < proportion < 1:
        raise ValueError("proportion must be strictly between 0 and 1")
    annotations = manual_annotations(doc)
    if len(annotations) < 2:
        raise ValueError("need at least 2 manual classifications to split")
    by_category: dict[str, list[PairKey]] = {c.id: [] for c in doc.categories}
    for key, category_id in annotations.items():
        by_category.setdefault(category_id, []).append(key)
    pool: dict[PairKey, str] = {}
    truth: dict[PairKey, str] = {}
    for category_id, keys in by_category.items():
        if not keys:
            continue
        if len(keys) == 1:
            warnings.warn(
                f"category {category_id!r} has a single manual annotation; "
                "it goes to the prompt pool and cannot be tested",
                stacklevel=2,
            )
            pool[keys[0]] = category_id
            continue
        shuffled = list(keys)
        random.Random(f"{seed}:{category_id}").shuffle(shuffled)
        n_pool = max(1, round(proportion * len(keys)))
        for key in shuffled[:n_pool]:
            pool[key] = category_id
        for key in shuffled[n_pool:]:
            truth[key] = category_id
    return EvalSplit(prompt_pool=pool, ground_truth=truth, proportion=proportion, seed=seed)


def strip_ground_truth(doc: ApparatusDocument, split: EvalSplit) -> ApparatusDocument:
    stripped = doc.clone()
    for unit_id, active_id, passive_id in split.ground_truth:
        stripped.unit(unit_id).remove_relation(active_id, passive_id)
    return stripped


def score(
    ground_truth: dict[PairKey, str],
    predictions: dict[PairKey, str],
    categories: list[str],
) -> ConfusionMatrix:
    """Confusion matrix over category order, with an extra final column for
    pairs that received no usable prediction."""
    index = {category_id: i for i, category_id in enumerate(categories)}
    counts = [[0] * (len(categories) + 1) for _ in categories]
    for key in predictions:
        if key not in ground_truth:
            warnings.warn(f"ignoring prediction for pair outside the ground truth: {key}", stacklevel=2)
    for key, truth_category in ground_truth.items():
        row = index[truth_category]
        predicted = predictions.get(key)
        column = index[predicted] if predicted in index else len(categories)
        counts[row][column] += 1
    return ConfusionMatrix(categories=list(categories), counts=counts)


def metrics(matrix: ConfusionMatrix) -> tuple[float, float, float, float]:
    """(accuracy, macro precision, macro recall, macro F1).

    Unclassified pairs count against accuracy and recall. Zero denominators
    yield 0. Macro averages run over classes with at least one ground-truth
    instance."""
    total = matrix.total
    if total == 0:
        raise ValueError("empty confusion matrix")
    n = len(matrix.categories)
    accuracy = matrix.trace / total
    precisions, recalls, f1s = [], [], []
    for c in range(n):
        row_sum = sum(matrix.counts[c])
        if row_sum == 0:
            continue
        tp = matrix.counts[c][c]
        column_sum = sum(matrix.counts[r][c] for r in range(n))
        precision = tp / column_sum if column_sum else 0.0
        recall = tp / row_sum
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        precisions.append(precision)
        recalls.append(recall)
        f1s.append(f1)
    if not precisions:
        raise ValueError("no ground-truth instances in the matrix")
    return accuracy, fmean(precisions), fmean(recalls), fmean(f1s)


def run_evaluation(
    doc: ApparatusDocument,
    proportion: float,
    seed: int,
    model: ModelConfig,
    examples_per_category: int = 10,
    concurrency: int = 4,
) -> EvaluationReport:
    """Split, reclassify the held-out pairs with the model, and score."""
    split = split_annotations(doc, proportion, seed)
    working = strip_ground_truth(doc, split)
    truth_units = sorted({key[0] for key in split.ground_truth})
    config = RunConfig(
        model=model,
        examples_per_category=examples_per_category,
        concurrency=concurrency,
        unit_filter=truth_units,
        prompt_pool=set(split.prompt_pool),
    )
    classified, _stats = classify_document(working, config)

    predictions: dict[PairKey, str] = {}
    justifications: dict[PairKey, str | None] = {}
    for key in split.ground_truth:
        unit_id, active_id, passive_id = key
        relation = classified.unit(unit_id).relation_for(active_id, passive_id)
        if relation is not None and relation.responsibility == MACHINE_RESP:
            predictions[key] = relation.primary_category
            justifications[key] = relation.description
    matrix = score(split.ground_truth, predictions, [c.id for c in doc.categories])
    accuracy, macro_p, macro_r, macro_f1 = metrics(matrix)

    listings: list[PairListing] = []
    for unit in doc.units:
        for relation in unit.relations:
            key = (unit.id, relation.active_id, relation.passive_id)
            if key not in split.ground_truth:
                continue
            prediction = predictions.get(key)
            listings.append(
                PairListing(
                    unit_id=unit.id,
                    active_id=relation.active_id,
                    passive_id=relation.passive_id,
                    active_text=unit.reading(relation.active_id).text,
                    passive_text=unit.reading(relation.passive_id).text,
                    ground_truth=split.ground_truth[key],
                    prediction=prediction,
                    justification=justifications.get(key),
                    correct=prediction == split.ground_truth[key],
                )
            )
    base_prompt = render_stable_prefix(working, examples_per_category, set(split.prompt_pool))
    return EvaluationReport(
        accuracy=accuracy,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f1,
        matrix=matrix,
        listings=listings,
        base_prompt=base_prompt,
    )


def _matrix_rows(matrix: ConfusionMatrix) -> list[list[str]]:
    header = [""] + matrix.categories + [UNCLASSIFIED]
    rows = [header]
    for i, category_id in enumerate(matrix.categories):
        rows.append([category_id] + [str(v) for v in matrix.counts[i]])
    return rows


def _listing_line(item: PairListing) -> str:
    predicted = item.prediction or UNCLASSIFIED
    line = (
        f"{item.unit_id} {item.active_id} -> {item.passive_id}: "
        f"{display_text(item.active_text)} -> {display_text(item.passive_text)} | "
        f"ground truth {item.ground_truth} | predicted {predicted}"
    )
    if item.justification:
        line += f" | {item.justification}"
    return line


def render_text_report(report: EvaluationReport) -> str:
    lines = [
        "Classification evaluation",
        "",
        f"accuracy {report.accuracy:.3f} ({report.accuracy * 100:.1f}%)",
        f"macro precision {report.macro_precision:.3f}",
        f"macro recall {report.macro_recall:.3f}",
        f"macro f1 {report.macro_f1:.3f}",
        f"pairs evaluated {report.matrix.total}",
        "",
        "Confusion matrix (rows = ground truth, columns = predicted):",
    ]
    for row in _matrix_rows(report.matrix):
        lines.append("\t".join(row))
    incorrect = [item for item in report.listings if not item.correct]
    correct = [item for item in report.listings if item.correct]
    lines.append("")
    if incorrect:
        lines.append(f"Errors ({len(incorrect)}):")
        lines.extend(f"- {_listing_line(item)}" for item in incorrect)
    else:
        lines.append("No errors.")
    lines.append("")
    lines.append(f"Correct ({len(correct)}):")
    lines.extend(f"- {_listing_line(item)}" for item in correct)
    lines.append("")
    if report.suggestions:
        lines.append("Prompt review suggestions:")
        lines.append(report.suggestions)
        lines.append("")
    lines.append("Base prompt:")
    lines.append(report.base_prompt)
    return "\n".join(lines) + "\n"


_HTML_STYLE = """
body { font-family: system-ui, sans-serif; margin: 2rem auto; max-width: 70rem; color: #1a1a1a; }
table { border-collapse: collapse; margin: 1rem 0; }
th, td { border: 1px solid #bbb; padding: 0.3rem 0.7rem; text-align: left; }
th { background: #f0f0f0; }
tr.bad { background: #fff0f0; }
.metrics span { margin-right: 1.5rem; }
pre { background: #f7f7f7; padding: 1rem; overflow-x: auto; white-space: pre-wrap; }
td.rtl { direction: rtl; }
"""


def _listing_table(items: list[PairListing]) -> list[str]:
    parts = [
        "<table>",
        "<tr><th>Unit</th><th>Pair</th><th>Active</th><th>Passive</th>"
        "<th>Ground truth</th><th>Predicted</th><th>Justification</th></tr>",
    ]
    for item in items:
        row_class = "" if item.correct else ' class="bad"'
        parts.append(
            f"<tr{row_class}><td>{html.escape(item.unit_id)}</td>"
            f"<td>{html.escape(item.active_id)} &rarr; {html.escape(item.passive_id)}</td>"
            f"<td class=\"rtl\">{html.escape(display_text(item.active_text))}</td>"
            f"<td class=\"rtl\">{html.escape(display_text(item.passive_text))}</td>"
            f"<td>{html.escape(item.ground_truth)}</td>"
            f"<td>{html.escape(item.prediction or UNCLASSIFIED)}</td>"
            f"<td>{html.escape(item.justification or '')}</td></tr>"
        )
    parts.append("</table>")
    return parts


def render_html_report(report: EvaluationReport) -> str:
    incorrect = [item for item in report.listings if not item.correct]
    correct = [item for item in report.listings if item.correct]
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        '<head><meta charset="utf-8"><title>Classification evaluation</title>',
        f"<style>{_HTML_STYLE}</style></head>",
        "<body>",
        "<h1>Classification evaluation</h1>",
        '<p class="metrics">'
        f"<span>Accuracy <strong>{report.accuracy * 100:.1f}%</strong></span>"
        f"<span>Macro precision {report.macro_precision:.3f}</span>"
        f"<span>Macro recall {report.macro_recall:.3f}</span>"
        f"<span>Macro F1 {report.macro_f1:.3f}</span>"
        f"<span>Pairs evaluated {report.matrix.total}</span>"
        "</p>",
        "<h2>Confusion matrix</h2>",
        "<table>",
    ]
    rows = _matrix_rows(report.matrix)
    parts.append("<tr>" + "".join(f"<th>{html.escape(cell)}</th>" for cell in rows[0]) + "</tr>")
    for row in rows[1:]:
        cells = [f"<th>{html.escape(row[0])}</th>"]
        cells.extend(f"<td>{html.escape(cell)}</td>" for cell in row[1:])
        parts.append("<tr>" + "".join(cells) + "</tr>")
    parts.append("</table>")
    if incorrect:
        parts.append(f"<h2>Errors ({len(incorrect)})</h2>")
        parts.extend(_listing_table(incorrect))
    else:
        parts.append("<h2>Errors</h2><p>No errors.</p>")
    parts.append(f"<h2>Correct ({len(correct)})</h2>")
    parts.extend(_listing_table(correct))
    if report.suggestions:
        parts.append("<h2>Prompt review suggestions</h2>")
        parts.append(f"<pre>{html.escape(report.suggestions)}</pre>")
    parts.append("<details><summary>Base prompt</summary>")
    parts.append(f"<pre>{html.escape(report.base_prompt)}</pre>")
    parts.append("</details>")
    parts.append("</body></html>")
    return "\n".join(parts) + "\n"


def render_report(report: EvaluationReport, format: str = "html") -> str:
    if format == "html":
        return render_html_report(report)
    if format == "text":
        return render_text_report(report)
    raise ValueError(f"unknown report format {format!r}")


_REVIEW_SYSTEM = (
    "You review annotation guidelines for a manuscript collation project. "
    "Given an evaluation report, suggest clarifications to the category "
    "definitions and examples, and flag ground-truth annotations that look "
    "inconsistent with their own category definitions."
)


def review_prompt(model: ModelConfig, text_report: str) -> str:
    """Ask the model to critique the prompt in light of the evaluation."""
    result = complete(model, _REVIEW_SYSTEM, text_report)
    return result.text
