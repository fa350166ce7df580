"""Run configuration and shared numerical tolerances."""

from __future__ import annotations

from dataclasses import dataclass, field, fields


@dataclass(frozen=True)
class Tolerances:
    """Default numerical tolerances, overridable per run.

    Lengths are relative; collinearity is absolute per unit diameter;
    concyclicity is relative to the circle radius.
    """

    rel_length: float = 1e-9
    collinearity: float = 1e-8
    concyclicity: float = 1e-8
    wall: float = 1e-6
    gradient: float = 1e-10
    eigen_zero_band: float = 1e-7
    sign_guard: float = 1e-7
    reach_boundary: float = 1e-7
    match: float = 1e-5
    grid_points: int = 10_000

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"tolerance {f.name} must be positive")


DEFAULT_TOLS = Tolerances()


@dataclass
class RunConfig:
    """Reproducibility and I/O knobs for a CLI run or oracle sweep."""

    tols: Tolerances = field(default_factory=Tolerances)
    seed: int = 42
    n_seeds: int = 1000
    strict: bool = False
    out: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        if self.n_seeds < 1:
            raise ValueError("n_seeds must be >= 1")
