"""Joint estimation of the number, locations, and amplitudes of periodicities.

From m samples: evaluate the weighted partial sum on the J_m-point grid,
extract the two-threshold arc family, report N-hat and per-arc estimates

    z-hat     = exp(2i*pi*(j1+j2)/(2J))   (arc midpoint; a maximizer-point
                                           rule is available behind a flag)
    alpha-hat = mean of S over the arc's maximizer indices, divided by
                sum a_{m,t}/t

The optional two-stage mode detects on a 16x-oversampled coarse grid and
refines the maximizer search by direct summation on fine-grid points
inside the detected arcs that clear the confirmation level.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .arcs import ArcFamily, DiscreteArc, two_threshold_family
from .errors import ConfigurationError, DegenerateLocalizationError, InputLengthError
from .kernels import SummationMatrix, evaluate_grid, kernel_at_one, partial_sum_at
from .schedules import TWO_STAGE_COARSE_FACTOR, ThresholdSchedule, schedule_at
from .signal_model import SampledSignal

MAXIMIZER_TIE_REL = 1e-12  # grid points within this relative slack share the max

MODES = ("single-grid", "two-stage")
Z_RULES = ("midpoint", "maximizer")


@dataclass(frozen=True)
class ComponentEstimate:
    arc: DiscreteArc
    z_hat: complex
    alpha_hat: complex | None
    max_indices: tuple
    max_magnitude: float

    def to_dict(self) -> dict:
        d = {
            "j1": int(self.arc.j1), "j2": int(self.arc.j2),
            "z_hat": [self.z_hat.real, self.z_hat.imag],
            "alpha_hat": None if self.alpha_hat is None
            else [self.alpha_hat.real, self.alpha_hat.imag],
            "max_j": [int(j) for j in self.max_indices],
            "max_magnitude": float(self.max_magnitude),
        }
        return d


@dataclass(frozen=True)
class EstimationReport:
    N_hat: int
    components: tuple
    family: ArcFamily
    diagnostics: dict
    grid: object = None  # GridEvaluation when requested via keep_grid

    def to_dict(self) -> dict:
        return {
            "N_hat": int(self.N_hat),
            "components": [c.to_dict() for c in self.components],
            "diagnostics": self.diagnostics,
        }


def _signal_array(signal) -> np.ndarray:
    if isinstance(signal, SampledSignal):
        return signal.samples
    return np.asarray(signal, dtype=complex)


def _check_setup(signal, matrix, schedule, m):
    if not schedule.compatible_with(matrix):
        raise ConfigurationError(
            f"schedule {schedule.scheme!r} requires a {schedule.matrix_scheme} matrix")
    x = _signal_array(signal)
    if x.size < m:
        raise InputLengthError(f"signal has {x.size} samples, need m={m}")
    return x


def _component(arc, values_on_arc, indices, grid_J, z_rule, denom, with_amplitude):
    """`indices` are contiguous (not reduced mod grid_J) so that averaging
    tied maximizers stays on the arc even when it crosses theta = 0."""
    mags = np.abs(values_on_arc)
    top = float(np.max(mags))
    tie = top * (1.0 - MAXIMIZER_TIE_REL)
    sel = np.flatnonzero(mags >= tie)
    max_idx = tuple(int(indices[k]) % grid_J for k in sel)
    if z_rule == "midpoint":
        z_hat = arc.midpoint()
    else:
        # average-of-maximizers rule
        j_bar = float(np.mean([indices[k] for k in sel]))
        z_hat = complex(np.exp(2j * np.pi * j_bar / grid_J))
    alpha = None
    if with_amplitude:
        alpha = complex(np.mean(values_on_arc[sel]) / denom)
    return ComponentEstimate(arc, z_hat, alpha, max_idx, top)


def estimate(signal, matrix: SummationMatrix, schedule: ThresholdSchedule, m: int,
             mode: str = "single-grid", z_rule: str = "midpoint",
             workers: int | None = None, keep_grid: bool = False) -> EstimationReport:
    """Run the full detection-estimation pipeline on the first m samples.

    Amplitudes are produced only for the truncated Poisson matrix: no
    almost-decreasing split is proved for Dirichlet, so that scheme yields
    localization output (alpha_hat is None).  A full-circle superlevel set
    raises DegenerateLocalizationError carrying the arc.
    """
    if mode not in MODES:
        raise ConfigurationError(f"unknown estimation mode {mode!r}")
    if z_rule not in Z_RULES:
        raise ConfigurationError(f"unknown z rule {z_rule!r}")
    if mode == "two-stage":
        return estimate_two_stage(signal, matrix, schedule, m, z_rule=z_rule)

    t0 = time.perf_counter()
    x = _check_setup(signal, matrix, schedule, m)
    H, h, h_prime, J = schedule_at(schedule, m)
    grid = evaluate_grid(x, matrix, m, J, workers=workers)
    family, n_hat = two_threshold_family(grid.magnitudes, h, h_prime)
    if n_hat is None:
        raise DegenerateLocalizationError(family.arcs[0])
    denom = kernel_at_one(matrix, m)
    # amplitude consistency needs the large grid (estimate mode) and the
    # almost-decreasing kernel; otherwise the report is localization-only
    with_amp = matrix.is_poisson and schedule.mode == "estimate"
    comps = []
    for arc in family:
        raw = np.arange(arc.j1, arc.j2 + 1)
        comps.append(_component(arc, grid.values[raw % J], raw, J,
                                z_rule, denom, with_amp))
    diag = {
        "m": m, "J": J, "H": H, "h": h, "h_prime": h_prime,
        "kernel_at_one": denom, "mode": mode, "scheme": matrix.scheme,
        "runtime_s": time.perf_counter() - t0, "full_circle": False,
    }
    return EstimationReport(n_hat, tuple(comps), family, diag,
                            grid=grid if keep_grid else None)


def estimate_two_stage(signal, matrix: SummationMatrix, schedule: ThresholdSchedule,
                       m: int, z_rule: str = "midpoint") -> EstimationReport:
    """Coarse detection plus fine maximizer search by direct summation.

    Detection runs on the 16 * ceil(2*pi*sqrt(m))-point grid; within each
    kept arc the maximizer search is restricted to fine-grid points (step
    2*pi / ceil(2*pi*m^1.5)) that clear the confirmation level.
    """
    t0 = time.perf_counter()
    x = _check_setup(signal, matrix, schedule, m)
    H, h, h_prime, _ = schedule_at(schedule, m)
    J_det = TWO_STAGE_COARSE_FACTOR * math.ceil(2.0 * math.pi * math.sqrt(m))
    J_fine = math.ceil(2.0 * math.pi * m ** 1.5)

    grid = evaluate_grid(x, matrix, m, J_det)
    family, n_hat = two_threshold_family(grid.magnitudes, h, h_prime)
    if n_hat is None:
        raise DegenerateLocalizationError(family.arcs[0])
    denom = kernel_at_one(matrix, m)
    # the fine search grid always has ceil(2*pi*m^1.5) points, so the
    # amplitude formula is justified regardless of the schedule mode
    with_amp = matrix.is_poisson
    comps = []
    for arc in family:
        # fine indices covering the same angular span as the coarse arc
        f1 = math.ceil(arc.j1 * J_fine / J_det)
        f2 = math.floor(arc.j2 * J_fine / J_det)
        if f2 < f1:
            f1 = f2 = round(arc.j1 * J_fine / J_det)
        fine_j = np.arange(f1, f2 + 1)
        values = partial_sum_at(x, matrix, m, 2.0 * np.pi * fine_j / J_fine)
        confirmed = np.abs(values) >= h_prime
        if np.any(confirmed):
            # restrict the maximizer search to the confirmation-level set
            values = values[confirmed]
            fine_j = fine_j[confirmed]
        comps.append(_component(arc, values, fine_j, J_fine,
                                z_rule, denom, with_amp))
    diag = {
        "m": m, "J": J_det, "J_fine": J_fine, "H": H, "h": h, "h_prime": h_prime,
        "kernel_at_one": denom, "mode": "two-stage", "scheme": matrix.scheme,
        "runtime_s": time.perf_counter() - t0, "full_circle": False,
    }
    return EstimationReport(n_hat, tuple(comps), family, diag)
