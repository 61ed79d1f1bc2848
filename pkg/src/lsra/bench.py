"""Running single files and whole directories of instances."""

from __future__ import annotations

import csv
import io
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError
from .search import SearchConfig, SearchStats, solve
from .smtlib import clausify, parse_script, print_model, validate_model

CSV_FIELDS = ("instance", "answer", "time_s", "steps", "seed", "validated")


@dataclass
class RunResult:
    instance: str
    answer: str  # "sat", "unknown" or "error"
    time_s: float
    steps: int
    seed: int
    validated: bool
    output: str = ""
    diagnostic: str = ""
    stats: SearchStats | None = field(default=None, repr=False)

    def row(self, with_time: bool = True) -> dict:
        return {
            "instance": self.instance,
            "answer": self.answer,
            "time_s": f"{self.time_s:.4f}" if with_time else "",
            "steps": self.steps,
            "seed": self.seed,
            "validated": str(self.validated).lower(),
        }


def run_text(text: str, cfg: SearchConfig, instance: str = "<input>", validate: bool = True) -> RunResult:
    start = time.monotonic()
    try:
        script = parse_script(text)
        formula = clausify(script)
    except (InputError, RecursionError) as exc:
        return RunResult(instance, "error", time.monotonic() - start, 0, cfg.seed, False,
                         diagnostic=f"{type(exc).__name__}: {exc}")
    result = solve(formula, cfg)
    elapsed = time.monotonic() - start
    if not result.is_sat:
        return RunResult(instance, "unknown", elapsed, result.stats.steps, cfg.seed, False,
                         output="unknown\n", stats=result.stats)
    ok = validate_model(script.assertions, result.assignment) if validate else True
    if not ok:
        return RunResult(instance, "error", elapsed, result.stats.steps, cfg.seed, False,
                         diagnostic="model failed validation", stats=result.stats)
    return RunResult(instance, "sat", elapsed, result.stats.steps, cfg.seed, validate,
                     output=print_model(result.assignment, script.declarations), stats=result.stats)


def run_file(path, cfg: SearchConfig, validate: bool = True) -> RunResult:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        return RunResult(str(path), "error", 0.0, 0, cfg.seed, False, diagnostic=str(exc))
    return run_text(text, cfg, str(path), validate)


@dataclass
class BenchReport:
    rows: list[RunResult]

    @property
    def solved(self) -> int:
        return sum(1 for r in self.rows if r.answer == "sat")

    def time_quantiles(self) -> dict[str, float]:
        times = sorted(r.time_s for r in self.rows)
        if not times:
            return {}
        if len(times) == 1:
            return {"median": times[0], "p90": times[0], "max": times[0]}
        deciles = statistics.quantiles(times, n=10, method="inclusive")
        return {"median": statistics.median(times), "p90": deciles[8], "max": times[-1]}

    def summary(self) -> str:
        q = self.time_quantiles()
        parts = [f"solved={self.solved}", f"total={len(self.rows)}"]
        parts += [f"{k}_s={v:.4f}" for k, v in q.items()]
        return "# " + " ".join(parts)

    def to_csv(self, with_time: bool = True, with_summary: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in self.rows:
            writer.writerow(r.row(with_time))
        if with_summary:
            buf.write(self.summary() + "\n")
        return buf.getvalue()

    def tie_histogram(self) -> dict[int, int]:
        total: dict[int, int] = {}
        for r in self.rows:
            if r.stats is not None:
                for k, n in r.stats.tie_histogram.items():
                    total[k] = total.get(k, 0) + n
        return total


def _run_one(args) -> RunResult:
    path, cfg, validate = args
    try:
        return run_file(path, cfg, validate)
    except Exception as exc:  # one bad instance must not stop the suite
        print(f"{path}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return RunResult(path, "error", 0.0, 0, cfg.seed, False, diagnostic=str(exc))


def bench_dir(directory, cfg: SearchConfig, jobs: int = 1, validate: bool = True) -> BenchReport:
    """Run every ``.smt2`` file in ``directory`` once; rows are sorted by path."""
    paths = sorted(str(p) for p in Path(directory).glob("*.smt2"))
    work = [(p, cfg, validate) for p in paths]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one, work))
    else:
        rows = [_run_one(item) for item in work]
    return BenchReport(sorted(rows, key=lambda r: r.instance))
