"""Threshold and grid schedules driving arc detection.

Each scheme produces, for a signal length m >= 3, the kernel floor H_m,
the detection level h_m, the confirmation level h'_m, and the grid order
J_m:

  dirichlet-example   H = ln(m+1)/sqrt(2),  h = h' = c0 + c1*ln^(1-delta) m,
                      J = 8m (single-level localization only)
  poisson-standard    H = ln(m)/2 - 1/2,    h = c3*ln^(1-delta) m + c4,
                      h' = c5*ln^(1-delta) m + c6 with 0 < c3 < c5, c4 < c6,
                      J = ceil(2*pi*sqrt(m)) or ceil(2*pi*m^1.5) in estimate mode
  poisson-corollary   h = h' = ln^(1-delta) m with delta in (0, 1/2),
                      J = ceil(2*pi*sqrt(m)); H as for poisson-standard

Default constants: delta = 1/2, (c0, c1) = (0, 1), (c3, c4, c5, c6) =
(1, 3, 2, 4).  The offsets keep the detection level above the bounded
inter-frequency leakage of the kernel tails at practical m; any constants
with 0 < c3 < c5 and c4 < c6 are admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, ParameterError
from .kernels import SummationMatrix, kernel_at_one, partial_sum_at

SCHEMES = ("dirichlet-example", "poisson-standard", "poisson-corollary")
MODES = ("detect", "estimate")

TWO_STAGE_COARSE_FACTOR = 16  # detection grid of the two-stage mode: 16*ceil(2*pi*sqrt(m))


class ScheduleValues(NamedTuple):
    H: float
    h: float
    h_prime: float
    J: int


@dataclass(frozen=True)
class ThresholdSchedule:
    scheme: str = "poisson-standard"
    delta: float = 0.5
    c0: float = 0.0
    c1: float = 1.0
    c3: float = 1.0
    c4: float = 3.0
    c5: float = 2.0
    c6: float = 4.0
    mode: str = "detect"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown schedule scheme {self.scheme!r}")
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown schedule mode {self.mode!r}")
        if not (0.0 < self.delta < 1.0):
            raise ConfigurationError("delta must lie in (0, 1)")
        if self.scheme == "poisson-corollary" and not (0.0 < self.delta < 0.5):
            raise ConfigurationError("poisson-corollary requires delta in (0, 1/2)")
        if self.scheme == "poisson-standard":
            if not (0.0 < self.c3 < self.c5):
                raise ConfigurationError("constants must satisfy 0 < c3 < c5")
            if not (self.c4 < self.c6):
                raise ConfigurationError("constants must satisfy c4 < c6")
        if self.scheme == "dirichlet-example" and self.c1 <= 0.0:
            raise ConfigurationError("c1 must be positive")

    @property
    def matrix_scheme(self) -> str:
        return "dirichlet" if self.scheme == "dirichlet-example" else "truncated-poisson"

    def m_min_positive(self) -> int:
        """Smallest m >= 3 with h_m > 0 (negative offsets delay positivity)."""
        if self.scheme == "dirichlet-example":
            slope, offset = self.c1, self.c0
        elif self.scheme == "poisson-corollary":
            return 3  # h = ln^(1-delta) m > 0 for m >= 3
        else:
            slope, offset = self.c3, self.c4
        if offset >= 0.0:
            return 3
        floor = math.exp((-offset / slope) ** (1.0 / (1.0 - self.delta)))
        m = max(3, math.floor(floor) + 1)
        while self.c_level(m) <= 0.0:
            m += 1
        return m

    def c_level(self, m: int) -> float:
        """The detection level h_m (without building the full tuple)."""
        pw = math.log(m) ** (1.0 - self.delta)
        if self.scheme == "dirichlet-example":
            return self.c0 + self.c1 * pw
        if self.scheme == "poisson-corollary":
            return pw
        return self.c3 * pw + self.c4

    def compatible_with(self, matrix: SummationMatrix) -> bool:
        return matrix.scheme == self.matrix_scheme

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme, "delta": self.delta, "mode": self.mode,
            "c0": self.c0, "c1": self.c1,
            "c3": self.c3, "c4": self.c4, "c5": self.c5, "c6": self.c6,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdSchedule":
        known = {"scheme", "delta", "mode", "c0", "c1", "c3", "c4", "c5", "c6"}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown schedule fields: {sorted(unknown)}")
        return cls(**d)


def schedule_at(schedule: ThresholdSchedule, m: int) -> ScheduleValues:
    """Evaluate (H_m, h_m, h'_m, J_m); requires m >= 3 so ln m > 1."""
    if m < 3:
        raise ParameterError("schedules require m >= 3 (so that ln m > 1)")
    lg = math.log(m)
    pw = lg ** (1.0 - schedule.delta)
    if schedule.scheme == "dirichlet-example":
        H = math.log(m + 1) / math.sqrt(2.0)
        h = schedule.c0 + schedule.c1 * pw
        return ScheduleValues(H, h, h, 8 * m)
    H = 0.5 * lg - 0.5
    if schedule.scheme == "poisson-corollary":
        h = pw
        J = math.ceil(2.0 * math.pi * math.sqrt(m))
        if schedule.mode == "estimate":
            J = math.ceil(2.0 * math.pi * m ** 1.5)
        return ScheduleValues(H, h, h, J)
    h = schedule.c3 * pw + schedule.c4
    h_prime = schedule.c5 * pw + schedule.c6
    if schedule.mode == "estimate":
        J = math.ceil(2.0 * math.pi * m ** 1.5)
    else:
        J = math.ceil(2.0 * math.pi * math.sqrt(m))
    return ScheduleValues(H, h, h_prime, J)


@dataclass(frozen=True)
class ScheduleValidation:
    passed: bool
    first_failure_m: int | None
    failed_condition: str | None
    m_range: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "first_failure_m": self.first_failure_m,
            "failed_condition": self.failed_condition,
            "m_range": list(self.m_range),
        }


def validate_schedule(schedule: ThresholdSchedule, matrix: SummationMatrix,
                      m_range: tuple[int, int],
                      theta_samples_per_m: int = 9) -> ScheduleValidation:
    """Check, for each m in the range, that H_m < S(1,m;0), h_m <= h'_m, and
    the kernel stays above H_m on [-2*pi/J_m, 2*pi/J_m] (sampled)."""
    if not schedule.compatible_with(matrix):
        raise ConfigurationError(
            f"schedule {schedule.scheme!r} requires a {schedule.matrix_scheme} matrix")
    lo, hi = int(m_range[0]), int(m_range[1])
    if lo < 3 or hi < lo:
        raise ParameterError("m range must satisfy 3 <= lo <= hi")
    for m in range(lo, hi + 1):
        H, h, h_prime, J = schedule_at(schedule, m)
        if not H < kernel_at_one(matrix, m):
            return ScheduleValidation(False, m, "H_m < S(1,m;0)", (lo, hi))
        if not h <= h_prime:
            return ScheduleValidation(False, m, "h_m <= h'_m", (lo, hi))
        th = np.linspace(-2.0 * np.pi / J, 2.0 * np.pi / J, theta_samples_per_m)
        if float(np.min(np.abs(partial_sum_at(None, matrix, m, th)))) < H:
            return ScheduleValidation(False, m, "|S(1,m)| >= H_m on the grid cell", (lo, hi))
    return ScheduleValidation(True, None, None, (lo, hi))
