"""Deterministic signal model, noise generators, and sampling.

The signal is x(t) = sum_n alpha_n * exp(-i * lambda_n * t) + eps_t for
t = 1..m, with distinct frequencies lambda_n in [-pi, pi) and nonzero
complex amplitudes alpha_n.  Noise families cover heavy tails (symmetric
Pareto, Student-t), subgaussian complex Gaussian, and variance growing
like t^nu.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError, ParameterError

NOISE_FAMILIES = (
    "none",
    "complex-gaussian",
    "student-t",
    "symmetric-pareto",
    "growing-variance",
)


@dataclass(frozen=True)
class SignalModel:
    """Frequencies and complex amplitudes of the deterministic part."""

    frequencies: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        freqs = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        amps = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        if freqs.shape != amps.shape or freqs.ndim != 1:
            raise ParameterError("frequencies and amplitudes must be 1-d of equal length")
        if freqs.size:
            if np.any(freqs < -np.pi) or np.any(freqs >= np.pi):
                raise ParameterError("frequencies must lie in [-pi, pi)")
            if len(np.unique(freqs)) != freqs.size:
                raise ParameterError("frequencies must be pairwise distinct")
            if np.any(np.abs(amps) == 0.0):
                raise ParameterError("amplitudes must be nonzero")
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def count(self) -> int:
        return self.frequencies.size

    def support_points(self) -> np.ndarray:
        """Points z_n = exp(i * lambda_n) on the unit circle."""
        return np.exp(1j * self.frequencies)

    def total_mass(self) -> float:
        """The total variation ||mu|| = sum |alpha_n|."""
        return float(np.sum(np.abs(self.amplitudes)))

    def to_dict(self) -> dict:
        return {
            "frequencies": [float(f) for f in self.frequencies],
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SignalModel":
        amps = [complex(re, im) for re, im in d.get("amplitudes", [])]
        return cls(np.asarray(d.get("frequencies", []), dtype=float), np.asarray(amps))


@dataclass(frozen=True)
class NoiseSpec:
    """One noise family plus its parameters and RNG seed.

    Families and parameters:
      none              -- zero noise
      symmetric-pareto  -- |eps| with survival x**-a (x >= 1), uniform phase; a > 1
      student-t         -- independent real/imag parts, each Student-t; df > 1
      complex-gaussian  -- exp(-i*phi) * (b1*g1 + i*b2*g2), g1, g2 standard normal
      growing-variance  -- t**(nu/2) * (g1 + i*g2); nu < 1
    """

    family: str = "none"
    seed: int = 0
    a: float | None = None
    df: float | None = None
    b1: float | None = None
    b2: float = 0.0
    phi: float = 0.0
    nu: float | None = None

    def __post_init__(self):
        if self.family not in NOISE_FAMILIES:
            raise ParameterError(f"unknown noise family {self.family!r}")
        if self.family == "symmetric-pareto":
            if self.a is None or self.a <= 1.0:
                raise ParameterError("pareto tail index a must satisfy a > 1")
        elif self.family == "student-t":
            if self.df is None or self.df <= 1.0:
                raise ParameterError("student-t degrees of freedom must exceed 1")
        elif self.family == "complex-gaussian":
            if self.b1 is None or self.b1 <= 0.0:
                raise ParameterError("gaussian scale b1 must be positive")
            if not (self.b1 >= self.b2 >= 0.0):
                raise ParameterError("gaussian scales must satisfy b1 >= b2 >= 0")
        elif self.family == "growing-variance":
            if self.nu is None or self.nu >= 1.0:
                raise ParameterError("growth exponent nu must satisfy nu < 1")

    def with_seed(self, seed: int) -> "NoiseSpec":
        return replace(self, seed=int(seed))

    def to_dict(self) -> dict:
        d = {"family": self.family, "seed": int(self.seed)}
        for k in ("a", "df", "b1", "nu"):
            v = getattr(self, k)
            if v is not None:
                d[k] = float(v)
        if self.family == "complex-gaussian":
            d["b2"] = float(self.b2)
            d["phi"] = float(self.phi)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseSpec":
        known = {"family", "seed", "a", "df", "b1", "b2", "phi", "nu"}
        unknown = set(d) - known
        if unknown:
            raise ParameterError(f"unknown noise fields: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class SampledSignal:
    """Finite sample x(1..m) of a signal."""

    samples: np.ndarray
    provenance: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.samples, dtype=complex))
        if s.ndim != 1 or s.size < 1:
            raise ParameterError("samples must be a nonempty 1-d sequence")
        object.__setattr__(self, "samples", s)

    @property
    def m(self) -> int:
        return self.samples.size


def derive_seed(master: int, *indices: int) -> int:
    """Deterministic 63-bit sub-seed from a master seed and trial indices.

    Independent streams are obtained by feeding (master, i, j, ...) into a
    SeedSequence, so parallel trials never share state.
    """
    ss = np.random.SeedSequence([int(master), *[int(i) for i in indices]])
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def draw_noise(noise: NoiseSpec, m: int) -> np.ndarray:
    """Draw eps_1..eps_m for the given spec; bit-reproducible per seed."""
    if m < 1:
        raise ParameterError("m must be >= 1")
    if noise.family == "none":
        return np.zeros(m, dtype=complex)
    rng = np.random.default_rng(noise.seed)
    if noise.family == "symmetric-pareto":
        # inverse survival: |eps| = U**(-1/a), so P(|eps| > x) = x**-a
        modulus = rng.uniform(size=m) ** (-1.0 / noise.a)
        phase = rng.uniform(0.0, 2.0 * np.pi, size=m)
        return modulus * np.exp(1j * phase)
    if noise.family == "student-t":
        return rng.standard_t(noise.df, size=m) + 1j * rng.standard_t(noise.df, size=m)
    if noise.family == "complex-gaussian":
        g1 = rng.standard_normal(m)
        g2 = rng.standard_normal(m)
        return np.exp(-1j * noise.phi) * (noise.b1 * g1 + 1j * noise.b2 * g2)
    # growing-variance: scaled standard complex gaussian
    g = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    t = np.arange(1, m + 1, dtype=float)
    return t ** (noise.nu / 2.0) * g


def deterministic_part(model: SignalModel, m: int) -> np.ndarray:
    """y(t) = sum_n alpha_n exp(-i lambda_n t) for t = 1..m."""
    t = np.arange(1, m + 1, dtype=float)
    if model.count == 0:
        return np.zeros(m, dtype=complex)
    # (m, N) phase matrix; N is small so this stays cheap
    return np.exp(-1j * np.outer(t, model.frequencies)) @ model.amplitudes


def synthesize(model: SignalModel, noise: NoiseSpec, m: int) -> SampledSignal:
    """Sample x(t) = y(t) + eps_t for t = 1..m."""
    if m < 1:
        raise ParameterError("m must be >= 1")
    samples = deterministic_part(model, m) + draw_noise(noise, m)
    prov = {"model": model.to_dict(), "noise": noise.to_dict(), "m": m}
    return SampledSignal(samples, provenance=prov)


def rescale_decaying(signal: SampledSignal, xi: float) -> SampledSignal:
    """Multiply samples by t**xi, undoing a 1/t**xi decay of the signal.

    Requires 0 <= xi < 1/2 so that i.i.d. finite-variance noise rescaled by
    t**xi keeps variance growth O(t^nu) with nu = 2*xi < 1.
    """
    if not (0.0 <= xi < 0.5):
        raise ParameterError("xi must lie in [0, 1/2)")
    t = np.arange(1, signal.m + 1, dtype=float)
    return SampledSignal(signal.samples * t**xi, provenance=signal.provenance)


def write_signal_csv(path, signal: SampledSignal) -> None:
    """Write rows t,re,im for t = 1..m."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "re", "im"])
        for t, z in enumerate(signal.samples, start=1):
            writer.writerow([t, repr(float(z.real)), repr(float(z.imag))])


def read_signal_csv(path) -> SampledSignal:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:3]] != ["t", "re", "im"]:
            raise ConfigurationError(f"{path}: expected header 't,re,im'")
        values = []
        for row in reader:
            if not row:
                continue
            try:
                t, re, im = int(row[0]), float(row[1]), float(row[2])
            except (ValueError, IndexError):
                raise ConfigurationError(f"{path}: malformed row {row!r}")
            if t != len(values) + 1:
                raise ConfigurationError(f"{path}: rows must run t = 1..m in order")
            values.append(complex(re, im))
    if not values:
        raise ConfigurationError(f"{path}: no samples")
    return SampledSignal(np.asarray(values))
