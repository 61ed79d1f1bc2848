from __future__ import annotations

from dataclasses import asdict, dataclass, field

ABLATIONS = {
    "none": dict(interval_op=True, tie_break=True),
    "cm": dict(interval_op=False, tie_break=True),
    "score": dict(interval_op=True, tie_break=False),
    "plain": dict(interval_op=False, tie_break=False),
}


@dataclass
class SearchConfig:
    """Solver parameters.

    ``interval_op=False`` restricts real moves to critical-move thresholds
    and ``tie_break=False`` drops the denominator/magnitude preference when
    scores tie; together they give the plain variant.
    """

    L: int = 20
    K: int = 3
    sp: float = 0.0003
    cutoff_seconds: float | None = 1200.0
    max_steps: int | None = None
    seed: int = 0
    init: str = "zero"
    interval_op: bool = True
    tie_break: bool = True
    restart_steps: int | None = None
    audit_every: int = 0

    def __post_init__(self):
        if self.L < 1:
            raise ValueError("L must be >= 1")
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if not 0.0 <= self.sp <= 1.0:
            raise ValueError("sp must be a probability")
        if self.init not in ("zero", "random"):
            raise ValueError(f"unknown init policy {self.init!r}")

    @classmethod
    def with_ablation(cls, name: str, **kwargs) -> SearchConfig:
        if name not in ABLATIONS:
            raise ValueError(f"unknown ablation {name!r}")
        return cls(**{**ABLATIONS[name], **kwargs})


@dataclass
class SearchStats:
    steps: int = 0
    real_steps: int = 0
    bool_steps: int = 0
    mode_switches: int = 0
    escapes: int = 0
    paws_increments: int = 0
    paws_smooths: int = 0
    nudges: int = 0
    restarts: int = 0
    # k -> number of selections where k candidates shared the best score
    tie_histogram: dict[int, int] = field(default_factory=dict)
    # (step, number of falsified clauses) at each new minimum
    best_cost_trace: list[tuple[int, int]] = field(default_factory=list)

    def record_tie(self, k: int) -> None:
        self.tie_histogram[k] = self.tie_histogram.get(k, 0) + 1

    def histogram_csv(self) -> str:
        rows = ["k,step_count"]
        rows += [f"{k},{n}" for k, n in sorted(self.tie_histogram.items())]
        return "\n".join(rows) + "\n"

    def as_dict(self) -> dict:
        return asdict(self)
