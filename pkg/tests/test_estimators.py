import numpy as np
import pytest

from periodik import (
    DIRICHLET,
    POISSON,
    ConfigurationError,
    DegenerateLocalizationError,
    InputLengthError,
    NoiseSpec,
    SampledSignal,
    SignalModel,
    ThresholdSchedule,
    derive_seed,
    estimate,
    estimate_two_stage,
    kernel_at_one,
    schedule_at,
    synthesize,
)

EST = ThresholdSchedule("poisson-standard", mode="estimate")
DIR_SCHED = ThresholdSchedule("dirichlet-example")


def angular_gap(z, w):
    return abs(float(np.angle(z * np.conjugate(w))))


def test_zero_signal_detects_nothing():
    report = estimate(SampledSignal(np.zeros(64, dtype=complex)), POISSON, EST, 64)
    assert report.N_hat == 0 and not report.components


def test_noiseless_on_grid_exact_recovery():
    sig = synthesize(SignalModel([0.0], [2.0]), NoiseSpec("none"), 200)
    report = estimate(sig, POISSON, EST, 200)
    assert report.N_hat == 1
    comp = report.components[0]
    J = report.diagnostics["J"]
    assert abs(comp.alpha_hat - 2.0) <= 1e-9
    assert angular_gap(comp.z_hat, 1.0 + 0j) <= np.pi / J + 1e-12


def test_noiseless_two_component_trend():
    model = SignalModel([0.0, np.pi / 2], [2.0, 1.5j])
    sig = synthesize(model, NoiseSpec("none"), 3200)
    errs = []
    for m in (200, 800, 3200):
        report = estimate(sig, POISSON, EST, m)
        assert report.N_hat == 2, m
        worst = 0.0
        for lam, alpha in zip(model.frequencies, model.amplitudes):
            z = complex(np.exp(1j * lam))
            comp = min(report.components, key=lambda c: angular_gap(z, c.z_hat))
            worst = max(worst, abs(comp.alpha_hat - alpha))
        errs.append(worst)
    assert errs[0] > errs[1] > errs[2]


def test_two_stage_matches_on_grid_case():
    sig = synthesize(SignalModel([0.0], [2.0]), NoiseSpec("none"), 200)
    single = estimate(sig, POISSON, EST, 200)
    two = estimate_two_stage(sig, POISSON, EST, 200)
    assert two.N_hat == single.N_hat == 1
    assert abs(two.components[0].alpha_hat - single.components[0].alpha_hat) <= 1e-9
    assert abs(two.components[0].z_hat - single.components[0].z_hat) <= 1e-9


def test_two_stage_zero_signal():
    report = estimate_two_stage(SampledSignal(np.zeros(64, dtype=complex)), POISSON, EST, 64)
    assert report.N_hat == 0


def test_two_stage_cross_mode_agreement():
    # The two modes detect on different grids, so heavy-tailed trials can
    # split a marginal arc on one grid but not the other; on this pinned
    # batch the divergence is 2 trials out of 100.  Where the modes agree,
    # matched components must carry the same amplitude to 1e-6.
    model = SignalModel([0.0, np.pi / 2], [2.0, 1.5j])
    noise = NoiseSpec("symmetric-pareto", a=1.5)
    agreements = 0
    checked_alpha = 0
    for trial in range(100):
        sig = synthesize(model, noise.with_seed(derive_seed(17, trial)), 400)

        def n_of(fn):
            try:
                return fn()
            except DegenerateLocalizationError:
                return None

        single = n_of(lambda: estimate(sig, POISSON, EST, 400))
        two = n_of(lambda: estimate_two_stage(sig, POISSON, EST, 400))
        if (single is None) != (two is None):
            continue
        if single is None or single.N_hat == two.N_hat:
            agreements += 1
            if single is None:
                continue
            for cs, ct in zip(single.components, two.components):
                if cs.alpha_hat is not None and angular_gap(cs.z_hat, ct.z_hat) < 1e-3:
                    assert abs(cs.alpha_hat - ct.alpha_hat) <= 1e-6
                    checked_alpha += 1
    assert agreements >= 98
    assert checked_alpha > 100


def test_global_phase_equivariance():
    model = SignalModel([0.4, -2.0], [1.0 + 1.0j, 2.0])
    noise = NoiseSpec("complex-gaussian", seed=5, b1=0.3, b2=0.3)
    sig = synthesize(model, noise, 150)
    psi = 1.234
    rotated = SampledSignal(np.exp(1j * psi) * sig.samples)
    a = estimate(sig, POISSON, EST, 150)
    b = estimate(rotated, POISSON, EST, 150)
    assert a.N_hat == b.N_hat
    for ca, cb in zip(a.components, b.components):
        assert ca.arc == cb.arc
        assert ca.z_hat == cb.z_hat
        assert abs(cb.alpha_hat - np.exp(1j * psi) * ca.alpha_hat) <= 1e-12 * abs(ca.alpha_hat)


def test_grid_frequency_shift_equivariance():
    model = SignalModel([0.0], [2.0])
    sig = synthesize(model, NoiseSpec("none"), 100)
    J = schedule_at(EST, 100).J
    k = 2000
    t = np.arange(1, 101)
    shifted = SampledSignal(sig.samples * np.exp(-2j * np.pi * k * t / J))
    a = estimate(sig, POISSON, EST, 100)
    b = estimate(shifted, POISSON, EST, 100)
    assert a.N_hat == b.N_hat == 1
    ca, cb = a.components[0], b.components[0]
    assert (cb.arc.j1 - ca.arc.j1) % J == k % J
    assert abs(cb.z_hat - ca.z_hat * np.exp(2j * np.pi * k / J)) <= 1e-10
    assert abs(cb.alpha_hat - ca.alpha_hat) <= 1e-10 * abs(ca.alpha_hat)


def test_midpoint_lies_on_arc():
    model = SignalModel([0.3, -1.0], [2.0, 1.0])
    noise = NoiseSpec("complex-gaussian", seed=9, b1=0.5, b2=0.5)
    report = estimate(synthesize(model, noise, 128), POISSON, EST, 128)
    for comp in report.components:
        assert comp.arc.contains_angle(float(np.angle(comp.z_hat)) % (2 * np.pi))


def test_denominator_identity():
    sig = synthesize(SignalModel([0.0], [2.0]), NoiseSpec("none"), 64)
    report = estimate(sig, POISSON, EST, 64)
    assert report.diagnostics["kernel_at_one"] == kernel_at_one(POISSON, 64)


def test_maximizer_z_rule():
    sig = synthesize(SignalModel([0.0], [2.0]), NoiseSpec("none"), 200)
    report = estimate(sig, POISSON, EST, 200, z_rule="maximizer")
    # on-grid peak: the unique maximizer sits at z = 1 exactly
    assert abs(report.components[0].z_hat - 1.0) <= 1e-12


def test_dirichlet_yields_localization_only():
    sig = synthesize(SignalModel([0.0], [2.0]), NoiseSpec("none"), 200)
    report = estimate(sig, DIRICHLET, DIR_SCHED, 200)
    assert report.N_hat >= 1
    assert all(c.alpha_hat is None for c in report.components)


def test_detect_mode_withholds_amplitudes():
    # the small detection grid does not support the amplitude formula
    sig = synthesize(SignalModel([0.0], [2.0]), NoiseSpec("none"), 200)
    report = estimate(sig, POISSON, ThresholdSchedule("poisson-standard"), 200)
    assert report.N_hat == 1
    assert report.components[0].alpha_hat is None
    # the two-stage search always uses the fine grid, so amplitudes exist
    two = estimate_two_stage(sig, POISSON, ThresholdSchedule("poisson-standard"), 200)
    assert abs(two.components[0].alpha_hat - 2.0) <= 1e-9


def test_full_circle_raises_degenerate():
    # a large constant lifts |S| above both levels everywhere
    sig = SampledSignal(np.full(50, 100.0 + 0j))
    with pytest.raises(DegenerateLocalizationError) as err:
        estimate(sig, POISSON, EST, 50)
    assert err.value.arc.full_circle


def test_scheme_mismatch_and_short_signal():
    sig = synthesize(SignalModel([0.0], [2.0]), NoiseSpec("none"), 64)
    with pytest.raises(ConfigurationError):
        estimate(sig, DIRICHLET, EST, 64)
    with pytest.raises(InputLengthError):
        estimate(sig, POISSON, EST, 65)
    with pytest.raises(ConfigurationError):
        estimate(sig, POISSON, EST, 64, mode="triple")
