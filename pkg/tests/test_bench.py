import csv
import io

import pytest

from lsra.bench import CSV_FIELDS, bench_dir, run_file, run_text
from lsra.generator import generate_planted
from lsra.search import SearchConfig

FAST = SearchConfig(cutoff_seconds=5, seed=3)


@pytest.fixture(scope="module")
def small_suite(tmp_path_factory):
    d = tmp_path_factory.mktemp("small")
    for i in range(10):
        kind = "lra" if i % 2 else "mra"
        (d / f"{kind}_{i}.smt2").write_text(generate_planted(kind, 4, 10, i, i % 3))
    return d


def test_empty_directory(tmp_path):
    rep = bench_dir(tmp_path, FAST)
    assert rep.rows == [] and rep.solved == 0
    lines = rep.to_csv().splitlines()
    assert lines == [",".join(CSV_FIELDS), "# solved=0 total=0"]


def test_small_suite_solved(small_suite):
    rep = bench_dir(small_suite, FAST)
    assert rep.solved == 10
    assert all(r.validated and r.output.startswith("sat\n") for r in rep.rows)
    assert [r.instance for r in rep.rows] == sorted(r.instance for r in rep.rows)


def test_csv_schema(small_suite):
    text = bench_dir(small_suite, FAST).to_csv()
    body, summary = text.rstrip("\n").rsplit("\n", 1)
    rows = list(csv.DictReader(io.StringIO(body)))
    assert tuple(rows[0]) == CSV_FIELDS and len(rows) == 10
    assert {r["answer"] for r in rows} == {"sat"}
    assert all(r["seed"] == "3" and r["validated"] == "true" for r in rows)
    assert summary.startswith("# solved=10 total=10 median_s=")


def test_parallel_matches_serial(small_suite):
    cfg = SearchConfig(max_steps=200, cutoff_seconds=None, seed=5)
    serial = bench_dir(small_suite, cfg, jobs=1).to_csv(with_time=False, with_summary=False)
    parallel = bench_dir(small_suite, cfg, jobs=4).to_csv(with_time=False, with_summary=False)
    assert serial == parallel


def test_error_rows(tmp_path):
    (tmp_path / "bad.smt2").write_text("(assert (> x 0))")
    (tmp_path / "nonlinear.smt2").write_text(
        "(set-logic QF_NRA)(declare-fun x () Real)(assert (> (* x x) 1))(check-sat)")
    (tmp_path / "ok.smt2").write_text(generate_planted("lra", 3, 5, 1))
    rep = bench_dir(tmp_path, FAST)
    answers = {r.instance.rsplit("/", 1)[1]: r.answer for r in rep.rows}
    assert answers == {"bad.smt2": "error", "nonlinear.smt2": "error", "ok.smt2": "sat"}
    assert all(r.diagnostic for r in rep.rows if r.answer == "error")


def test_missing_file(tmp_path):
    r = run_file(tmp_path / "nope.smt2", FAST)
    assert r.answer == "error" and r.diagnostic


def test_unknown_when_step_limit_hits():
    text = ("(set-logic QF_LRA)(declare-fun x () Real)"
            "(assert (> x 1))(assert (< x 0))(check-sat)")
    r = run_text(text, SearchConfig(max_steps=50, cutoff_seconds=None))
    assert (r.answer, r.output, r.validated) == ("unknown", "unknown\n", False)


def test_validate_off_reported():
    r = run_text(generate_planted("lra", 3, 5, 2), FAST, validate=False)
    assert r.answer == "sat" and r.validated is False
