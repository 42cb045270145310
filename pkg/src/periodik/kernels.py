"""Summation matrices and grid evaluation of the weighted partial sums.

A summation matrix A = (a_{m,t}) defines the partial sums

    S(u, m; theta) = sum_{t=1}^{m} (a_{m,t} / t) * u(t) * exp(i*t*theta).

Two schemes are provided: Dirichlet (a_{m,t} = 1 for t <= m) and the
truncated Poisson matrix (a_{m,t} = exp(-C*t/m) for t <= m).  Evaluation
at the J-th roots of unity goes through a zero-padded inverse FFT of the
weighted sequence (the sequence is folded modulo J first, which computes
exactly the same sum); a direct-summation path serves as the oracle.

For C = 1, the kernel admits the almost-decreasing split S = f + beta
with f(theta) = max(0, -ln|1 - exp(-1/m + i*theta)|) and the uniform
bound |beta| < ln 2 + pi/3 + 1/e < 11/5, and `check_kernel_bounds`
verifies this plus related inequalities numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy.integrate import quad

from .errors import (
    ConfigurationError,
    InputLengthError,
    KernelDecompositionError,
    ParameterError,
)
from .signal_model import SampledSignal

BETA_SUP_BOUND = 11.0 / 5.0  # proved uniform bound on |beta| for C = 1


@dataclass(frozen=True)
class SummationMatrix:
    """Weight scheme a_{m,t}; `C` is used by the truncated Poisson matrix only."""

    scheme: str = "truncated-poisson"
    C: float = 1.0

    def __post_init__(self):
        if self.scheme not in ("dirichlet", "truncated-poisson"):
            raise ParameterError(f"unknown summation scheme {self.scheme!r}")
        if self.scheme == "truncated-poisson" and self.C <= 0:
            raise ParameterError("poisson constant C must be positive")

    @property
    def is_poisson(self) -> bool:
        return self.scheme == "truncated-poisson"


DIRICHLET = SummationMatrix("dirichlet")
POISSON = SummationMatrix("truncated-poisson", 1.0)


def weight(matrix: SummationMatrix, m: int, t):
    """a_{m,t}; accepts scalar or array t, zero for t > m."""
    t = np.asarray(t, dtype=float)
    if m < 1 or np.any(t < 1):
        raise ParameterError("m and t must be >= 1")
    inside = t <= m
    if matrix.scheme == "dirichlet":
        w = inside.astype(float)
    else:
        w = np.where(inside, np.exp(-matrix.C * t / m), 0.0)
    return w if w.ndim else float(w)


def weights(matrix: SummationMatrix, m: int) -> np.ndarray:
    """The row a_{m,1..m}."""
    return weight(matrix, m, np.arange(1, m + 1))


def kernel_at_one(matrix: SummationMatrix, m: int) -> float:
    """S(1, m; 0) = sum_{t<=m} a_{m,t}/t, the kernel sup-norm and the
    denominator of the amplitude estimator."""
    t = np.arange(1, m + 1, dtype=float)
    return float(np.sum(weights(matrix, m) / t))


@dataclass(frozen=True)
class GridEvaluation:
    """Values of a partial sum at the J-th roots of unity, j = 0..J-1."""

    values: np.ndarray
    m: int
    J: int

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.J) / self.J


def _weighted_sequence(u, matrix: SummationMatrix, m: int) -> np.ndarray:
    if isinstance(u, SampledSignal):
        u = u.samples
    if u is None:
        u = np.ones(m)
    u = np.asarray(u, dtype=complex)
    if u.size < m:
        raise InputLengthError(f"signal has {u.size} samples, need m={m}")
    t = np.arange(1, m + 1, dtype=float)
    return weights(matrix, m) / t * u[:m]


def evaluate_grid(u, matrix: SummationMatrix, m: int, J: int, path: str = "dft",
                  workers: int | None = None) -> GridEvaluation:
    """Evaluate S(u, m; 2*pi*j/J) for j = 0..J-1.

    `u` may be a SampledSignal, a complex array of length >= m, or None for
    the constant-one sequence.  The dft path folds the weighted sequence
    modulo J and runs one inverse FFT (O(J log J)); the direct path sums
    the definition (O(m*J)) and exists as a correctness oracle.
    """
    if J < 1:
        raise ParameterError("J must be >= 1")
    seq = _weighted_sequence(u, matrix, m)
    if path == "dft":
        folded = np.zeros(J, dtype=complex)
        np.add.at(folded, np.arange(1, m + 1) % J, seq)
        values = J * scipy.fft.ifft(folded, workers=workers or -1)
    elif path == "direct":
        values = direct_grid_values(seq, J)
    else:
        raise ParameterError(f"unknown evaluation path {path!r}")
    return GridEvaluation(values, m=m, J=J)


def direct_grid_values(seq: np.ndarray, J: int, chunk: int = 4096) -> np.ndarray:
    """Naive evaluation of sum_t seq[t-1] * exp(2i*pi*j*t/J) for all j."""
    m = seq.size
    t = np.arange(1, m + 1)
    values = np.empty(J, dtype=complex)
    for start in range(0, J, chunk):
        j = np.arange(start, min(start + chunk, J))
        values[j] = np.exp(2j * np.pi * np.outer(j, t) / J) @ seq
    return values


def partial_sum_at(u, matrix: SummationMatrix, m: int, thetas) -> np.ndarray:
    """S(u, m; theta) by direct summation at arbitrary angles."""
    seq = _weighted_sequence(u, matrix, m)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    t = np.arange(1, m + 1)
    out = np.empty(thetas.size, dtype=complex)
    chunk = max(1, int(2e6) // max(m, 1))
    for start in range(0, thetas.size, chunk):
        th = thetas[start:start + chunk]
        out[start:start + chunk] = np.exp(1j * np.outer(th, t)) @ seq
    return out


def kernel_f(matrix: SummationMatrix, m: int, theta) -> np.ndarray | float:
    """The monotone part f(theta) = max(0, -ln|1 - exp(-1/m + i*theta)|).

    Only provided for the truncated Poisson matrix with C = 1; no such
    split is proved for other kernels.
    """
    if not (matrix.is_poisson and matrix.C == 1.0):
        raise KernelDecompositionError(
            "the (f, beta) decomposition is available only for truncated Poisson with C=1")
    theta = np.asarray(theta, dtype=float)
    f = np.maximum(0.0, -np.log(np.abs(1.0 - np.exp(-1.0 / m + 1j * theta))))
    return f if f.ndim else float(f)


def poisson_remainder_bound(C: float) -> float:
    """E1(C) = integral_C^inf exp(-x)/x dx, the tail dropped by truncation.

    Adaptive quadrature at 1e-10 absolute tolerance; the variable change
    x = C + u maps the domain to (0, inf) for quad.
    """
    if C <= 0:
        raise ParameterError("C must be positive")
    val, _ = quad(lambda u: math.exp(-(C + u)) / (C + u), 0.0, np.inf, epsabs=1e-10)
    return val


@dataclass(frozen=True)
class BoundCheck:
    name: str
    satisfied: bool
    worst_margin: float  # min over samples of (bound - quantity); >= 0 iff satisfied
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "satisfied": bool(self.satisfied),
            "worst_margin": float(self.worst_margin),
            "detail": self.detail,
        }


def check_kernel_bounds(matrix: SummationMatrix, m: int, thetas) -> list[BoundCheck]:
    """Numerically verify the proved truncated-Poisson kernel inequalities.

    At each sampled theta:
      remainder       |S + ln(1 - r*exp(i*theta))| < E1(C)
      beta-sup (C=1)  |S - f| <= 11/5
      lower p=0,1     |S| >= (p+1)/2 * ln m - 1/2 at |theta| <= m**-(p+1/2)
      log-minus-1/e   |S| >= -ln|1-exp(-1/m+i*theta)| - 1/e for |theta| <= pi/3
    """
    if not matrix.is_poisson:
        raise ConfigurationError("kernel bounds are specific to the truncated Poisson matrix")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    S = partial_sum_at(None, matrix, m, thetas)
    absS = np.abs(S)
    checks = []

    r = math.exp(-matrix.C / m)
    E1 = poisson_remainder_bound(matrix.C)
    rem = np.abs(S + np.log(1.0 - r * np.exp(1j * thetas)))
    margin = float(np.min(E1 - rem))
    checks.append(BoundCheck("remainder<E1(C)", margin > 0.0, margin,
                             f"E1({matrix.C:g})={E1:.9f}"))

    if matrix.C == 1.0:
        f = kernel_f(matrix, m, thetas)
        beta = np.abs(S - f)
        margin = float(np.min(BETA_SUP_BOUND - beta))
        checks.append(BoundCheck("|S-f|<=11/5", margin >= 0.0, margin))

        for p in (0, 1):
            th_p = np.array([0.0, m ** -(p + 0.5), -(m ** -(p + 0.5))])
            lower = 0.5 * (p + 1) * math.log(m) - 0.5
            vals = np.abs(partial_sum_at(None, matrix, m, th_p))
            margin = float(np.min(vals - lower))
            checks.append(BoundCheck(f"lower-bound-p{p}", margin >= 0.0, margin,
                                     f"threshold={lower:.6f}"))

        inside = np.abs(thetas) <= np.pi / 3.0
        if np.any(inside):
            rhs = -np.log(np.abs(1.0 - np.exp(-1.0 / m + 1j * thetas[inside]))) - math.exp(-1)
            margin = float(np.min(absS[inside] - rhs))
            checks.append(BoundCheck("log-lower-bound", margin >= 0.0, margin))
    return checks
