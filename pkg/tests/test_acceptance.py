"""Release gate: one test per acceptance criterion.

Each test wraps its checks in conftest.criterion() so the terminal summary
prints one PASS/FAIL line per criterion. The tests here stay independent of
execution order and of each other."""

import hashlib
import math
import os
import random
import subprocess
import sys
import time
import warnings
from pathlib import Path

import numpy as np
from click.testing import CliRunner

from rdgai.apparatus_model import MACHINE_RESP, parse_document, serialize_document
from rdgai.cli import main
from rdgai.evaluation import (
    ConfusionMatrix,
    manual_annotations,
    metrics,
    run_evaluation,
    split_annotations,
)
from rdgai.pipeline import RunConfig, classify_document
from rdgai.prompting import render_stable_prefix
from rdgai.selection import _build_init, k_medoids, levenshtein, total_deviation
from rdgai.tabular_io import export_table, import_table
from rdgai.transitions import classify_pair_inplace, reciprocal_category_ids

from .conftest import FIXTURES, GOLDEN, criterion
from .mock_llm import ScriptedClassifier
from .oracles import (
    build_random_document,
    exhaustive_k_medoids,
    is_swap_local_optimum,
    levenshtein_reference,
    metrics_reference,
)

ROOT = Path(__file__).resolve().parents[1]

MOCK_ENV = {"RDGAI_MODEL": "mock-model", "RDGAI_API_KEY": "test-key-1234"}


def test_criterion_01_live_accuracy_documented_not_faked():
    with criterion(1, "live accuracy documented, not reproduced"):
        readme = (ROOT / "README.md").read_text(encoding="utf-8")
        assert "cannot be reproduced deterministically" in readme
        assert "RDGAI_LIVE=1" in readme
        assert "accuracy of at least 0.70" in readme
        assert "excluded from the default test run" in readme
        live = (ROOT / "tests" / "test_live.py").read_text(encoding="utf-8")
        assert 'os.environ.get("RDGAI_LIVE") != "1"' in live
        assert "0.70" in live


def _four_error_pairs(doc):
    """One ground-truth pair per category (seed 42, proportion 0.2) whose
    reverse is not itself in the ground truth, so a scripted wrong answer
    flips exactly one matrix cell."""
    truth = split_annotations(doc, 0.2, 42).ground_truth
    picked = []
    for category in doc.categories:
        keys = sorted(key for key, cat in truth.items() if cat == category.id)
        for unit_id, active_id, passive_id in keys:
            if (unit_id, passive_id, active_id) not in truth:
                picked.append((unit_id, active_id, passive_id))
                break
    return picked


def test_criterion_02_four_scripted_errors_score_900(mock_server, john8_path, john8_doc, config_for, tmp_path):
    with criterion(2, "4 scripted errors in 40 pairs -> accuracy 0.900"):
        errors = _four_error_pairs(john8_doc)
        assert len(errors) == 4
        server = mock_server(ScriptedClassifier(john8_doc, error_pairs=errors))

        report = run_evaluation(john8_doc, 0.2, 42, config_for(server))
        assert report.accuracy == 36 / 40
        assert report.matrix.total == 40
        assert report.matrix.trace == 36

        result = CliRunner().invoke(
            main,
            [
                "evaluate",
                str(john8_path),
                "--proportion",
                "0.2",
                "--seed",
                "42",
                "--report",
                str(tmp_path / "report.html"),
            ],
            env={"RDGAI_API_BASE": server.url, **MOCK_ENV},
            catch_exceptions=False,
        )
        assert result.exit_code == 0
        assert "pairs evaluated 40" in result.output
        assert "accuracy 0.900" in result.output


def test_criterion_03_macro_metrics_pinned_matrix():
    with criterion(3, "macro metrics on the pinned 2x2 matrix"):
        matrix = ConfusionMatrix(categories=["A", "B"], counts=[[3, 1], [2, 4]])
        values = metrics(matrix)
        expected = (0.7, 0.7, 0.7083333333333333, 0.696969696969697)
        for ours, pinned in zip(values, expected):
            assert math.isclose(ours, pinned, abs_tol=1e-9)
        for ours, independent in zip(values, metrics_reference(matrix.counts, matrix.categories)):
            assert math.isclose(ours, independent, abs_tol=1e-9)


def test_criterion_04_levenshtein_matches_recursive_definition():
    with criterion(4, "Levenshtein equals the recursive definition") as note:
        started = time.perf_counter()
        alphabet = "abc"
        strings = [""]
        frontier = [""]
        for _ in range(6):
            frontier = [text + symbol for text in frontier for symbol in alphabet]
            strings.extend(frontier)
        assert len(strings) == 1093
        # one memo shared across the sweep keeps the exponential oracle fast
        memo: dict = {}
        for index, a in enumerate(strings):
            for b in strings[index:]:
                assert levenshtein(a, b) == levenshtein_reference(a, b, memo)

        rng = random.Random(20260815)
        ranges = [(0x20, 0x7E), (0x0600, 0x06FF), (0x4E00, 0x4FFF), (0x1F300, 0x1F5FF)]

        def random_text() -> str:
            return "".join(
                chr(rng.randint(*rng.choice(ranges))) for _ in range(rng.randint(0, 12))
            )

        for _ in range(1000):
            x, y, z = random_text(), random_text(), random_text()
            d_xy = levenshtein(x, y)
            assert d_xy >= 0
            assert (d_xy == 0) == (x == y)
            assert d_xy == levenshtein(y, x)
            assert d_xy <= levenshtein(x, z) + levenshtein(z, y)

        elapsed = time.perf_counter() - started
        note["text"] = f"{elapsed:.1f}s"
        assert elapsed < 10.0


# Small instances with known optima. The last two start from a suboptimal
# BUILD selection, so they fail unless the swap phase actually runs.
CURATED_MEDOID_INSTANCES = [
    ([[0, 1, 4], [1, 0, 2], [4, 2, 0]], 1),
    ([[0, 1, 10, 10], [1, 0, 10, 10], [10, 10, 0, 1], [10, 10, 1, 0]], 2),
    (
        [
            [0, 7, 33, 23, 20, 17],
            [7, 0, 32, 16, 13, 16],
            [33, 32, 0, 28, 29, 22],
            [23, 16, 28, 0, 7, 6],
            [20, 13, 29, 7, 0, 13],
            [17, 16, 22, 6, 13, 0],
        ],
        3,
    ),
    (
        [
            [0, 18, 19, 8, 14, 11, 6, 14],
            [18, 0, 37, 26, 6, 21, 24, 6],
            [19, 37, 0, 11, 31, 30, 13, 33],
            [8, 26, 11, 0, 20, 19, 2, 22],
            [14, 6, 31, 20, 0, 19, 20, 4],
            [11, 21, 30, 19, 19, 0, 17, 15],
            [6, 24, 13, 2, 20, 17, 0, 20],
            [14, 6, 33, 22, 4, 15, 20, 0],
        ],
        3,
    ),
]


def test_criterion_05_k_medoids_quality():
    with criterion(5, "k-medoids swap-optimal, TD gap to exhaustive") as note:
        started = time.perf_counter()
        rng = np.random.default_rng(20260815)
        max_gap = 0.0
        for _ in range(100):
            n = int(rng.integers(2, 9))
            k = int(rng.integers(1, min(3, n - 1) + 1))
            points = rng.integers(0, 50, size=(n, 2))
            d = np.abs(points[:, None, :] - points[None, :, :]).sum(axis=2).astype(np.int64)
            chosen = k_medoids(d, k)
            td = total_deviation(d, chosen)
            assert is_swap_local_optimum(d, chosen)
            assert td <= total_deviation(d, _build_init(d, k)) + 1e-9
            _, best_td = exhaustive_k_medoids(d, k)
            gap = td - best_td
            assert gap >= -1e-9
            max_gap = max(max_gap, gap)

        for counts, k in CURATED_MEDOID_INSTANCES:
            d = np.array(counts, dtype=np.int64)
            chosen = k_medoids(d, k)
            assert is_swap_local_optimum(d, chosen)
            _, best_td = exhaustive_k_medoids(d, k)
            assert total_deviation(d, chosen) == best_td

        swap_needed = np.array(CURATED_MEDOID_INSTANCES[2][0], dtype=np.int64)
        assert total_deviation(swap_needed, k_medoids(swap_needed, 3)) < total_deviation(
            swap_needed, _build_init(swap_needed, 3)
        )

        elapsed = time.perf_counter() - started
        note["text"] = f"max TD gap to exhaustive {max_gap:g}; {elapsed:.1f}s"
        assert elapsed < 5.0


def test_criterion_06_round_trips_and_stable_prefix(mock_server, john8_doc, config_for):
    with criterion(6, "lossless round trips, constant prompt prefix"):
        for name in ("john8_sample.xml", "inverse_pair.xml", "minimal.xml"):
            doc = parse_document((FIXTURES / name).read_text(encoding="utf-8"))
            assert parse_document(serialize_document(doc)) == doc

        updated, summary = import_table(john8_doc, export_table(john8_doc))
        assert (summary.added, summary.changed, summary.unchanged) == (0, 0, 50)
        assert summary.errors == []
        assert serialize_document(updated) == serialize_document(john8_doc)

        server = mock_server(ScriptedClassifier(john8_doc))
        classify_document(john8_doc.clone(), RunConfig(model=config_for(server)))
        assert len(server.requests) == 5
        prefix_hashes = {
            hashlib.sha256(message["content"].encode("utf-8")).hexdigest()
            for request in server.requests
            for message in request["messages"]
            if message["role"] == "system"
        }
        expected = render_stable_prefix(john8_doc, 10)
        assert prefix_hashes == {hashlib.sha256(expected.encode("utf-8")).hexdigest()}


def test_criterion_07_reciprocal_closure_random_ops():
    with criterion(7, "reciprocal closure under 500 random writes"):
        rng = random.Random(20260815)
        ops_applied = 0
        while ops_applied < 500:
            doc = build_random_document(rng)
            for unit in doc.units:
                unit.relations.clear()
            eligible = [unit for unit in doc.units if len(unit.readings) >= 2]
            if not eligible:
                continue
            for _ in range(rng.randint(20, 60)):
                if ops_applied >= 500:
                    break
                unit = rng.choice(eligible)
                active_id, passive_id = rng.sample([r.id for r in unit.readings], 2)
                categories = rng.sample(
                    [c.id for c in doc.categories], rng.choice([1, 1, 1, 2])
                )
                description = rng.choice([None, f"op {ops_applied}"])
                responsibility = rng.choice(["annotator1", "annotator2", MACHINE_RESP])
                classify_pair_inplace(
                    doc, unit.id, active_id, passive_id, categories, description, responsibility
                )
                ops_applied += 1
                # the closure is idempotent: re-applying changes nothing
                snapshot = doc.clone()
                classify_pair_inplace(
                    doc, unit.id, active_id, passive_id, categories, description, responsibility
                )
                assert doc == snapshot

            for unit in doc.units:
                for relation in unit.relations:
                    reverse = unit.relation_for(relation.passive_id, relation.active_id)
                    assert reverse is not None, (unit.id, relation.active_id, relation.passive_id)
                    if not relation.is_manual and not reverse.is_manual:
                        assert reverse.category_ids == reciprocal_category_ids(
                            doc, relation.category_ids
                        )
        assert ops_applied == 500


def test_criterion_08_split_partition_properties():
    with criterion(8, "split partition properties over 50 random cases"):
        rng = random.Random(424242)
        checked = 0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            while checked < 50:
                doc = build_random_document(rng)
                manual = manual_annotations(doc)
                if len(manual) < 2:
                    continue
                proportion = rng.uniform(0.05, 0.95)
                seed = rng.randint(0, 10**6)
                split = split_annotations(doc, proportion, seed)
                assert split_annotations(doc, proportion, seed) == split

                pool = set(split.prompt_pool)
                truth = set(split.ground_truth)
                assert pool.isdisjoint(truth)
                assert pool | truth == set(manual)

                sizes: dict[str, int] = {}
                pooled: dict[str, int] = {}
                for key, category in manual.items():
                    sizes[category] = sizes.get(category, 0) + 1
                    if key in pool:
                        pooled[category] = pooled.get(category, 0) + 1
                for category, m in sizes.items():
                    assert pooled.get(category, 0) == max(1, round(proportion * m))
                checked += 1


def test_criterion_09_concurrency_determinism(mock_server, john8_path, john8_doc, tmp_path):
    with criterion(9, "byte-identical output at concurrency 1 and 4"):
        server = mock_server(ScriptedClassifier(john8_doc))
        outputs = []
        for concurrency in (1, 4):
            out_path = tmp_path / f"out{concurrency}.xml"
            result = CliRunner().invoke(
                main,
                [
                    "classify",
                    str(john8_path),
                    str(out_path),
                    "--concurrency",
                    str(concurrency),
                ],
                env={"RDGAI_API_BASE": server.url, **MOCK_ENV},
                catch_exceptions=False,
            )
            assert result.exit_code == 0
            outputs.append(out_path.read_bytes())
        assert outputs[0] == outputs[1]


def test_criterion_10_every_subcommand_green(mock_server, john8_path, john8_doc, tmp_path):
    with criterion(10, "every subcommand exits 0 on the fixture"):
        server = mock_server(ScriptedClassifier(john8_doc))
        env = os.environ.copy()
        env.update({"RDGAI_API_BASE": server.url, **MOCK_ENV})

        def run(*args: str) -> subprocess.CompletedProcess:
            return subprocess.run(
                [sys.executable, "-m", "rdgai", *args],
                capture_output=True,
                text=True,
                env=env,
                timeout=120,
            )

        source = tmp_path / "in.xml"
        source.write_bytes(john8_path.read_bytes())
        before = source.read_bytes()
        dry_out = tmp_path / "dry.xml"
        result = run("classify", str(source), str(dry_out), "--dry-run")
        assert result.returncode == 0
        assert "Variation unit: Jn8_45-1" in result.stdout
        assert source.read_bytes() == before
        assert dry_out.read_bytes() == before

        report_path = tmp_path / "report.html"
        result = run(
            "evaluate",
            str(john8_path),
            "--proportion",
            "0.2",
            "--seed",
            "42",
            "--report",
            str(report_path),
        )
        assert result.returncode == 0
        assert "pairs evaluated 40" in result.stdout
        assert "accuracy 1.000" in result.stdout
        assert "Accuracy <strong>100.0%</strong>" in report_path.read_text(encoding="utf-8")

        csv_path = tmp_path / "table.csv"
        result = run("export", str(john8_path), str(csv_path))
        assert result.returncode == 0
        assert csv_path.read_bytes() == (GOLDEN / "export_john8.csv").read_bytes()

        round_trip = tmp_path / "roundtrip.xml"
        result = run("import", str(john8_path), str(csv_path), str(round_trip))
        assert result.returncode == 0
        assert "added 0 changed 0 unchanged 50" in result.stdout
        assert parse_document(round_trip.read_text(encoding="utf-8")) == john8_doc

        result = run("serve", "--help")
        assert result.returncode == 0
        assert "--port" in result.stdout
