"""Probability tail bounds, localization failure bounds, and Monte-Carlo sweeps.

The subgaussian machinery: for a trigonometric polynomial with coefficients
a_k and i.i.d. complex noise whose rotated real/imag parts are subgaussian
with factors b1 >= b2, the sup-norm tail obeys

    P(||q||_inf >= C) <= (n+1) * 2*pi * e^(3/2) * (C^2/(2r) - 1) * exp(-C^2/(4r)),
    r = b1^2 * sum |a_k|^2,   valid for C > 2*sqrt(2r).

Specializing to the truncated Poisson weights a_{m,t}/t gives a closed-form
bound on the noise sup used to convert the localization failure thresholds
of the miss/spurious events into numeric probabilities.

The consistency sweep runs seeded estimation trials over an m-grid and
reports N-hat correctness, Pompeiu-Hausdorff distances of the refined
localization against the true support, and frequency/amplitude errors.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .arcs import directed_angular_sup, hausdorff_distance, localization_set, refined_family
from .errors import ConfigurationError, DegenerateLocalizationError, ParameterError
from .estimators import estimate
from .kernels import (
    BETA_SUP_BOUND,
    SummationMatrix,
    evaluate_grid,
    kernel_f,
    weights,
)
from .schedules import ThresholdSchedule, schedule_at
from .signal_model import NoiseSpec, SignalModel, derive_seed, draw_noise, synthesize

E_3_2 = math.exp(1.5)


@dataclass(frozen=True)
class TailBoundQuery:
    """Inputs of the polynomial sup-norm tail bound."""

    C: float
    r: float
    n: int
    m: int | None = None
    b1: float | None = None

    def __post_init__(self):
        if self.r <= 0:
            raise ParameterError("r must be positive")
        if self.b1 is not None and self.b1 <= 0:
            raise ParameterError("b1 must be positive")


def subgaussian_poly_tail_bound(q: TailBoundQuery) -> float:
    """(n+1) * 2*pi*e^(3/2) * (C^2/(2r) - 1) * exp(-C^2/(4r)) for C > 2*sqrt(2r)."""
    if q.C <= 2.0 * math.sqrt(2.0 * q.r):
        raise ParameterError("bound requires C > 2*sqrt(2r)")
    ratio = q.C**2 / (2.0 * q.r)
    return (q.n + 1) * 2.0 * math.pi * E_3_2 * (ratio - 1.0) * math.exp(-ratio / 2.0)


def poisson_weight_square_sum(matrix: SummationMatrix, m: int) -> float:
    """sum_{t<=m} a_{m,t}^2 / t^2 (the r/b1^2 of the noise polynomial)."""
    t = np.arange(1, m + 1, dtype=float)
    return float(np.sum((weights(matrix, m) / t) ** 2))


def poisson_noise_sup_tail_bound(m: int, matrix: SummationMatrix, b1: float, C: float) -> float:
    """Tail bound on the sup of the noise partial sum under subgaussian noise.

    P(||S(eps, m)||_inf >= C) <= pi*e^(3/2) / (b1^2 * sum a^2/t^2)
                                  * m * C^2 * exp(-3*C^2 / (2*pi^2*b1^2)),
    valid for C >= 2*pi*b1/sqrt(3).
    """
    if not matrix.is_poisson:
        raise ConfigurationError("the sup tail bound is stated for the truncated Poisson matrix")
    if b1 <= 0:
        raise ParameterError("b1 must be positive")
    floor = 2.0 * math.pi * b1 / math.sqrt(3.0)
    if C < floor:
        raise ParameterError(f"bound requires C >= 2*pi*b1/sqrt(3) ~= {floor:.6f}")
    ssum = poisson_weight_square_sum(matrix, m)
    return (math.pi * E_3_2 / (b1**2 * ssum)) * m * C**2 \
        * math.exp(-3.0 * C**2 / (2.0 * math.pi**2 * b1**2))


@dataclass(frozen=True)
class LocalizationBounds:
    """Noise-sup thresholds whose exceedance controls the failure events."""

    miss_threshold: float
    spurious_threshold: float
    miss_probability: float | None = None
    spurious_probability: float | None = None
    vacuous_miss: bool = False
    vacuous_spurious: bool = False

    def to_dict(self) -> dict:
        return {
            "miss_threshold": self.miss_threshold,
            "spurious_threshold": self.spurious_threshold,
            "miss_probability": self.miss_probability,
            "spurious_probability": self.spurious_probability,
            "vacuous_miss": self.vacuous_miss,
            "vacuous_spurious": self.vacuous_spurious,
        }


def localization_failure_bounds(model: SignalModel, matrix: SummationMatrix,
                                schedule: ThresholdSchedule, m: int, Delta: float,
                                n: int, b1: float | None = None,
                                use_h_prime: bool = False) -> LocalizationBounds:
    """Thresholds for the miss and spurious-point events of the localization.

      miss:     P(z_n not in L-hat) <= P(||S_eps|| >= |a_n|*H - h
                                           - (||mu|| - |a_n|)*(f(Delta - 2pi/J) + |beta|))
      spurious: P(z in L-hat, dist(z, supp) >= Delta)
                                      <= P(||S_eps|| >= h - ||mu||*(f(Delta - pi/J) + |beta|))

    with |beta| taken as the proved 11/5.  Requires Delta > 2*pi/J_m for the
    miss bound (Delta >= 2*pi/J_m suffices for the spurious one) and that
    z_n is the only support point within Delta.  With `use_h_prime` the same
    statements apply to the refined set at level h'.  If b1 is given, the
    thresholds are composed with the sup tail bound into probabilities; a
    nonpositive threshold (or one below the bound's validity floor) yields
    the vacuous probability 1.
    """
    if not (0 <= n < model.count):
        raise ParameterError("component index n out of range")
    H, h, h_prime, J = schedule_at(schedule, m)
    level = h_prime if use_h_prime else h
    if Delta <= 2.0 * math.pi / J:
        raise ParameterError("Delta must exceed the grid step 2*pi/J_m")
    lam = model.frequencies[n]
    others = np.delete(model.frequencies, n)
    if others.size:
        gap = np.min(np.abs((others - lam + math.pi) % (2 * math.pi) - math.pi))
        if gap < Delta:
            raise ParameterError("z_n must be the only support point within Delta")
    a_n = abs(model.amplitudes[n])
    mass = model.total_mass()
    f_miss = float(kernel_f(matrix, m, Delta - 2.0 * math.pi / J))
    f_spur = float(kernel_f(matrix, m, Delta - math.pi / J))
    miss = a_n * H - level - (mass - a_n) * (f_miss + BETA_SUP_BOUND)
    spurious = level - mass * (f_spur + BETA_SUP_BOUND)

    p_miss = p_spur = None
    vac_miss = vac_spur = False
    if b1 is not None:
        floor = 2.0 * math.pi * b1 / math.sqrt(3.0)

        def compose(threshold):
            if threshold < floor:
                return 1.0, True
            return min(1.0, poisson_noise_sup_tail_bound(m, matrix, b1, threshold)), False

        p_miss, vac_miss = compose(miss)
        p_spur, vac_spur = compose(spurious)
    return LocalizationBounds(miss, spurious, p_miss, p_spur, vac_miss, vac_spur)


def noise_sup_grid_max(noise: NoiseSpec, matrix: SummationMatrix, m: int,
                       oversample: int = 16) -> float:
    """Grid max of |S(eps, m)| over oversample*m points, one noise draw.

    The polynomial degree is at most m, so a 16x-oversampled uniform grid
    keeps the grid max within a small factor of the true sup norm.
    """
    eps = draw_noise(noise, m)
    grid = evaluate_grid(eps, matrix, m, oversample * m)
    return float(np.max(grid.magnitudes))


def binomial_se(p_hat: float, n: int) -> float:
    return math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n)


@dataclass(frozen=True)
class CorollaryRates:
    """Empirical rates of the coverage and distance events with their bounds."""

    m: int
    trials: int
    rate_coverage: float
    rate_distance: float
    se_coverage: float
    se_distance: float
    bound_miss: float | None
    bound_spurious: float | None

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "m", "trials", "rate_coverage", "rate_distance",
            "se_coverage", "se_distance", "bound_miss", "bound_spurious")}


def corollary_event_rates(model: SignalModel, noise: NoiseSpec, matrix: SummationMatrix,
                          schedule: ThresholdSchedule, m: int, trials: int,
                          alpha_tilde: float, Delta: float) -> CorollaryRates:
    """Monte-Carlo rates of the events {A(alpha~, Delta) subset L-hat} and
    {L-hat subset O_Delta(supp mu)} under the corollary schedule.

    Requires the poisson-corollary schedule and subgaussian (Nsg) noise.
    When the qualifying set A(alpha~, Delta) is empty the coverage event
    holds vacuously.
    """
    if schedule.scheme != "poisson-corollary":
        raise ConfigurationError("corollary event rates require the poisson-corollary schedule")
    if not schedule.compatible_with(matrix):
        raise ConfigurationError("schedule/matrix scheme mismatch")
    if noise.family not in ("complex-gaussian", "none"):
        raise ConfigurationError("corollary rates are stated for subgaussian (gaussian) noise")
    if not (0.0 < Delta < math.pi / 3.0):
        raise ParameterError("Delta must lie in (0, pi/3)")
    _, h, _, J = schedule_at(schedule, m)

    # qualifying support points: |alpha| > alpha~ and isolated at distance Delta
    lam = model.frequencies
    qualifying = []
    for i, (l, a) in enumerate(zip(lam, model.amplitudes)):
        if abs(a) <= alpha_tilde:
            continue
        others = np.delete(lam, i)
        if others.size:
            gap = np.min(np.abs((others - l + math.pi) % (2 * math.pi) - math.pi))
            if gap < Delta:
                continue
        qualifying.append(np.exp(1j * l))

    support = model.support_points()
    hit_cov = hit_dist = 0
    for trial in range(trials):
        spec = noise.with_seed(derive_seed(noise.seed, m, trial))
        x = synthesize(model, spec, m)
        grid = evaluate_grid(x.samples, matrix, m, J)
        family = localization_set(grid.magnitudes, h)
        covered = all(
            any(arc.contains_angle(float(np.angle(z))) for arc in family)
            for z in qualifying)
        if covered:
            hit_cov += 1
        if support.size == 0:
            within = family.is_empty
        else:
            within = (not family.is_full_circle
                      and directed_angular_sup(family, list(support)) < Delta)
        if within:
            hit_dist += 1

    rate_cov = hit_cov / trials
    rate_dist = hit_dist / trials
    bound_miss = bound_spur = None
    if model.count and noise.family == "complex-gaussian":
        worst = None
        for i in range(model.count):
            try:
                lb = localization_failure_bounds(model, matrix, schedule, m, Delta, i,
                                                 b1=noise.b1)
            except ParameterError:
                continue
            p = lb.miss_probability
            worst = p if worst is None else max(worst, p)
        bound_miss = worst
        try:
            lb = localization_failure_bounds(model, matrix, schedule, m, Delta, 0,
                                             b1=noise.b1)
            bound_spur = lb.spurious_probability
        except ParameterError:
            bound_spur = None
    return CorollaryRates(m, trials, rate_cov, rate_dist,
                          binomial_se(rate_cov, trials), binomial_se(rate_dist, trials),
                          bound_miss, bound_spur)


# ---------------------------------------------------------------------------
# consistency sweep

@dataclass(frozen=True)
class SweepPlan:
    model: SignalModel
    noise: NoiseSpec
    m_grid: tuple
    trials: int
    matrix: SummationMatrix = field(default_factory=SummationMatrix)
    schedule: ThresholdSchedule = field(default_factory=lambda: ThresholdSchedule(mode="estimate"))
    mode: str = "single-grid"
    z_rule: str = "midpoint"
    z_angle_tol: float | None = None  # None: pi / ceil(2*pi*sqrt(m)) per m
    amp_rel_tol: float = 0.25
    seed: int = 0

    def __post_init__(self):
        grid = tuple(int(m) for m in self.m_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])) or not grid:
            raise ParameterError("m grid must be nonempty and strictly increasing")
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        object.__setattr__(self, "m_grid", grid)

    def z_tolerance(self, m: int) -> float:
        if self.z_angle_tol is not None:
            return self.z_angle_tol
        return math.pi / math.ceil(2.0 * math.pi * math.sqrt(m))


@dataclass(frozen=True)
class TrialRecord:
    m: int
    trial: int
    N_hat: int  # -1 marks a degenerate full-circle run
    N_true: int
    hausdorff: float
    max_freq_err: float
    max_amp_err: float
    success: bool

    def csv_row(self) -> list:
        return [self.m, self.trial, self.N_hat, self.N_true,
                repr(float(self.hausdorff)), repr(float(self.max_freq_err)),
                repr(float(self.max_amp_err)), int(self.success)]


@dataclass(frozen=True)
class SweepSummary:
    m: int
    trials: int
    rate_N: float
    rate_success: float
    median_hausdorff: float
    p90_hausdorff: float
    median_freq_err: float
    p90_freq_err: float
    median_amp_err: float
    p90_amp_err: float

    def csv_row(self) -> list:
        return [self.m, self.trials, repr(float(self.rate_N)), repr(float(self.rate_success)),
                repr(float(self.median_hausdorff)), repr(float(self.p90_hausdorff)),
                repr(float(self.median_freq_err)), repr(float(self.p90_freq_err)),
                repr(float(self.median_amp_err)), repr(float(self.p90_amp_err))]


TRIAL_COLUMNS = ["m", "trial", "N_hat", "N_true", "hausdorff",
                 "max_freq_err", "max_amp_err", "success"]
SUMMARY_COLUMNS = ["m", "trials", "rate_N", "rate_success",
                   "median_hausdorff", "p90_hausdorff",
                   "median_freq_err", "p90_freq_err",
                   "median_amp_err", "p90_amp_err"]


def _angular_gap(z: complex, w: complex) -> float:
    return abs(float(np.angle(z * np.conjugate(w))))


def _score_trial(plan: SweepPlan, m: int, trial: int) -> TrialRecord:
    noise = plan.noise.with_seed(derive_seed(plan.seed, m, trial))
    signal = synthesize(plan.model, noise, m)
    n_true = plan.model.count
    try:
        report = estimate(signal, plan.matrix, plan.schedule, m,
                          mode=plan.mode, z_rule=plan.z_rule, keep_grid=True)
    except DegenerateLocalizationError:
        return TrialRecord(m, trial, -1, n_true, math.inf, math.inf, math.inf, False)

    _, _, h_prime, _ = schedule_at(plan.schedule, m)
    if report.grid is not None:
        mags = report.grid.magnitudes
    else:  # two-stage reports carry no grid; evaluate the coarse one
        mags = evaluate_grid(signal.samples, plan.matrix, m,
                             report.diagnostics["J"]).magnitudes
    refined = refined_family(mags, report.family, h_prime)
    support = list(plan.model.support_points())
    dist = hausdorff_distance(refined, support)

    if report.N_hat != n_true:
        return TrialRecord(m, trial, report.N_hat, n_true, dist, math.inf, math.inf, False)
    if n_true == 0:
        return TrialRecord(m, trial, 0, 0, dist, 0.0, 0.0, True)

    freq_err = 0.0
    amp_err: float = 0.0
    have_amp = True
    for lam, alpha in zip(plan.model.frequencies, plan.model.amplitudes):
        z_true = complex(np.exp(1j * lam))
        gaps = [_angular_gap(z_true, c.z_hat) for c in report.components]
        k = int(np.argmin(gaps))
        freq_err = max(freq_err, gaps[k])
        a_hat = report.components[k].alpha_hat
        if a_hat is None:
            have_amp = False
        else:
            amp_err = max(amp_err, abs(a_hat - alpha) / abs(alpha))
    if not have_amp:
        amp_err = math.nan
    ok = freq_err <= plan.z_tolerance(m) and (math.isnan(amp_err) or amp_err <= plan.amp_rel_tol)
    return TrialRecord(m, trial, report.N_hat, n_true, dist, freq_err, amp_err, ok)


@dataclass(frozen=True)
class SweepReport:
    plan: SweepPlan
    records: tuple
    summaries: tuple


def consistency_sweep(plan: SweepPlan) -> SweepReport:
    """Run the seeded trials for every m in the plan's grid.

    Trials derive independent sub-seeds from (seed, m, trial), so results
    do not depend on execution order; records come out sorted by (m, trial).
    Degenerate full-circle runs count as failures with N_hat = -1.
    """
    records = []
    summaries = []
    for m in plan.m_grid:
        rows = [_score_trial(plan, m, t) for t in range(plan.trials)]
        records.extend(rows)
        n_rate = sum(r.N_hat == r.N_true for r in rows) / plan.trials
        s_rate = sum(r.success for r in rows) / plan.trials
        dists = np.array([r.hausdorff for r in rows])
        freqs = np.array([r.max_freq_err for r in rows])
        amps = np.array([r.max_amp_err for r in rows])
        # order statistics (no interpolation): robust to inf entries from failures
        def q(x, p):
            return float(np.quantile(x, p, method="lower"))

        summaries.append(SweepSummary(
            m, plan.trials, n_rate, s_rate,
            q(dists, 0.5), q(dists, 0.9),
            q(freqs, 0.5), q(freqs, 0.9),
            q(amps, 0.5), q(amps, 0.9),
        ))
    return SweepReport(plan, tuple(records), tuple(summaries))


def write_sweep_csv(path, report: SweepReport) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIAL_COLUMNS)
        for rec in report.records:
            writer.writerow(rec.csv_row())


def write_summary_csv(path, report: SweepReport) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for s in report.summaries:
            writer.writerow(s.csv_row())
