"""DCT-domain frequency modulation for measurement transport.

A measurement m in [0, N-1] is carried by the cosine tone

    z[n] = A_c * sqrt(2/N) * cos(pi * (2m + 1) * n / (2N)),   n = 0..N-1,

which is the row pattern of a DCT-III basis, i.e. N-ary FSK on the DCT
frequency grid.  Detection is a full matched-filter bank (correlate
against all N candidate tones, take the argmax): the tone family is not
exactly orthogonal at the block boundary, so the bank is used instead of
a plain transform call.  The module also covers the multi-tone variant
that carries DCT coefficients of a function table, and the closed-form
error / distortion predictions that go with it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import fft as _fft
from scipy import special as _special

from . import _kernels

__all__ = [
    "ModulationConfig",
    "BasebandSignal",
    "FunctionSpec",
    "dct_forward",
    "dct_inverse",
    "modulate_single_tone",
    "modulate_multitone",
    "demodulate",
    "symbol_error_probability",
    "approximate_function",
    "reconstruct",
    "theoretical_mse",
]


@dataclass(frozen=True)
class ModulationConfig:
    """Block parameters: alphabet size, amplitude, timing, chirp rate.

    ``n_levels`` is both the alphabet size and the number of samples per
    block.  ``spreading_rate`` is the dimensionless chirp rate (0 means
    no chirp).
    """

    n_levels: int
    carrier_amplitude: float = 1.0
    observation_time: float = 1.0
    spreading_rate: float = 0.0

    def __post_init__(self):
        if int(self.n_levels) != self.n_levels or self.n_levels < 2:
            raise ValueError(f"n_levels must be an integer >= 2, got {self.n_levels}")
        if self.carrier_amplitude <= 0:
            raise ValueError("carrier_amplitude must be > 0")
        if self.observation_time <= 0:
            raise ValueError("observation_time must be > 0")
        if self.spreading_rate < 0:
            raise ValueError("spreading_rate must be >= 0")

    @property
    def signal_bandwidth(self) -> float:
        """Bandwidth of the underlying measurement process, 1/T (Hz)."""
        return 1.0 / self.observation_time

    @property
    def sample_rate(self) -> float:
        """N samples per observation window (Hz)."""
        return self.n_levels / self.observation_time

    @property
    def max_baseband_bandwidth(self) -> float:
        """Highest unchirped tone frequency, W * (2N - 1) / 4 (Hz).

        Always below sample_rate / 2, so the block is adequately sampled.
        """
        return self.signal_bandwidth * (2 * self.n_levels - 1) / 4.0


@dataclass
class BasebandSignal:
    """One block of complex baseband samples."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 1:
            raise ValueError("samples must be a 1-D sequence")

    def __len__(self) -> int:
        return self.samples.shape[0]


@dataclass
class FunctionSpec:
    """A function table plus its sparse DCT approximation.

    ``coefficients[i]`` is the orthonormal forward-DCT coefficient of
    ``table`` at index ``kept_indices[i]``.
    """

    table: np.ndarray
    kept_indices: np.ndarray
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.float64)
        self.kept_indices = np.asarray(self.kept_indices, dtype=np.int64)
        self.coefficients = np.asarray(self.coefficients, dtype=np.float64)
        n = self.table.shape[0]
        if self.kept_indices.shape != self.coefficients.shape:
            raise ValueError("kept_indices and coefficients must align")
        if self.kept_indices.size == 0:
            raise ValueError("retained index set must be nonempty")
        if np.unique(self.kept_indices).size != self.kept_indices.size:
            raise ValueError("kept_indices must be unique")
        if self.kept_indices.min() < 0 or self.kept_indices.max() >= n:
            raise ValueError("kept_indices out of range")

    @property
    def n_levels(self) -> int:
        return self.table.shape[0]

    @property
    def approximation_error(self) -> float:
        """Mean-square truncation error, sum of discarded coefficient powers / N."""
        full = dct_forward(self.table)
        discarded = np.sum(full**2) - np.sum(full[self.kept_indices] ** 2)
        # clip: fp cancellation can leave a tiny negative residue
        return float(max(discarded, 0.0)) / self.n_levels


def _check_symbol(m, n_levels: int) -> int:
    mi = int(m)
    if mi != m or not 0 <= mi <= n_levels - 1:
        raise ValueError(f"symbol index must be an integer in [0, {n_levels - 1}], got {m}")
    return mi


@lru_cache(maxsize=16)
def tone_bank(n_levels: int) -> np.ndarray:
    """Unit-amplitude candidate tones, shape (N, N): row m is the tone for m."""
    n = np.arange(n_levels, dtype=np.float64)
    m = n[:, None]
    bank = np.sqrt(2.0 / n_levels) * np.cos(np.pi * (2 * m + 1) * n / (2 * n_levels))
    bank.setflags(write=False)
    return bank


@lru_cache(maxsize=16)
def analytic_bank(n_levels: int) -> np.ndarray:
    """Unit-amplitude analytic (complex) tones, shape (N, N)."""
    n = np.arange(n_levels, dtype=np.float64)
    m = n[:, None]
    bank = np.sqrt(2.0 / n_levels) * np.exp(1j * np.pi * (2 * m + 1) * n / (2 * n_levels))
    bank.setflags(write=False)
    return bank


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------


def dct_forward(x) -> np.ndarray:
    """Orthonormal type-II DCT (scipy backend); inverse of dct_inverse."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 2:
        raise ValueError("input must be a 1-D sequence of length >= 2")
    return _fft.dct(x, type=2, norm="ortho")


def dct_inverse(X) -> np.ndarray:
    """Orthonormal type-III DCT, the exact inverse of dct_forward."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 1 or X.shape[0] < 2:
        raise ValueError("input must be a 1-D sequence of length >= 2")
    return _fft.idct(X, type=2, norm="ortho")


# ---------------------------------------------------------------------------
# Modulation / detection
# ---------------------------------------------------------------------------


def modulate_single_tone(m, cfg: ModulationConfig) -> BasebandSignal:
    """Map measurement m onto its cosine tone (stored complex, zero imag)."""
    mi = _check_symbol(m, cfg.n_levels)
    samples = cfg.carrier_amplitude * tone_bank(cfg.n_levels)[mi]
    return BasebandSignal(samples.astype(np.complex128), cfg.sample_rate)


def modulate_multitone(spec: FunctionSpec, m, cfg: ModulationConfig) -> BasebandSignal:
    """Superpose the retained-coefficient tones at harmonics k of symbol m.

    z[n] = A_c sqrt(2/N) * sum_{k in K} F_k cos(pi k (2m+1) n / (2N)).
    """
    if spec.n_levels != cfg.n_levels:
        raise ValueError("function table length must equal cfg.n_levels")
    mi = _check_symbol(m, cfg.n_levels)
    n_lev = cfg.n_levels
    n = np.arange(n_lev, dtype=np.float64)
    k = spec.kept_indices[:, None].astype(np.float64)
    basis = np.cos(np.pi * k * (2 * mi + 1) * n / (2 * n_lev))
    samples = cfg.carrier_amplitude * np.sqrt(2.0 / n_lev) * (spec.coefficients @ basis)
    return BasebandSignal(samples.astype(np.complex128), cfg.sample_rate)


def demodulate(y: BasebandSignal, cfg: ModulationConfig):
    """Matched-filter bank detection on the real part of ``y``.

    Returns ``(m_hat, scores)`` where scores[j] is the correlation with
    the candidate tone for symbol j and m_hat = argmax(scores).  The
    argmax is invariant to any positive scaling of the input.
    """
    samples = np.asarray(y.samples if isinstance(y, BasebandSignal) else y)
    if samples.shape[0] != cfg.n_levels:
        raise ValueError("signal length must equal cfg.n_levels")
    m_hat, scores = demodulate_rows(samples.real[None, :], cfg.n_levels)
    return int(m_hat[0]), scores[0]


def demodulate_rows(y_real: np.ndarray, n_levels: int):
    """Batched matched-filter bank over rows of a (B, N) real array."""
    y_real = np.asarray(y_real, dtype=np.float64)
    if y_real.ndim != 2 or y_real.shape[1] != n_levels:
        raise ValueError("expected shape (batch, n_levels)")
    scores = _kernels.matched_filter_scores(y_real, np.asarray(tone_bank(n_levels)))
    return np.argmax(scores, axis=1), scores


def symbol_error_probability(snr: float, n_levels: int) -> float:
    """Union-bound symbol error probability (N-1) * Q(sqrt(snr)).

    ``snr`` is A_c^2 |h|^2 / N_0.  Clamped to [0, 1]; the bound is only
    tight at high SNR (it exceeds 1 near snr = 0).
    """
    if snr < 0:
        raise ValueError("snr must be >= 0")
    if n_levels < 2:
        raise ValueError("n_levels must be >= 2")
    q = 0.5 * _special.erfc(np.sqrt(snr) / np.sqrt(2.0))
    return float(min(1.0, (n_levels - 1) * q))


# ---------------------------------------------------------------------------
# Function approximation
# ---------------------------------------------------------------------------


def approximate_function(f, num_kept: int) -> FunctionSpec:
    """Keep the num_kept largest-magnitude DCT coefficients of table f.

    Ties break toward the lower index so the retained set is
    reproducible.
    """
    f = np.asarray(f, dtype=np.float64)
    n = f.shape[0]
    if not 1 <= num_kept <= n:
        raise ValueError(f"num_kept must be in [1, {n}], got {num_kept}")
    coeffs = dct_forward(f)
    order = np.argsort(-np.abs(coeffs), kind="stable")
    kept = np.sort(order[:num_kept])
    return FunctionSpec(table=f, kept_indices=kept, coefficients=coeffs[kept])


def reconstruct(spec: FunctionSpec, m) -> float:
    """Evaluate the retained-coefficient partial inverse DCT at index m."""
    mi = _check_symbol(m, spec.n_levels)
    n = spec.n_levels
    weights = np.where(spec.kept_indices == 0, np.sqrt(1.0 / n), np.sqrt(2.0 / n))
    basis = np.cos(np.pi * spec.kept_indices * (2 * mi + 1) / (2 * n))
    return float(np.sum(weights * spec.coefficients * basis))


def theoretical_mse(spec: FunctionSpec, p_e: float) -> float:
    """Closed-form distortion: truncation error plus symbol-error term.

    The symbol-error term averages |f(m) - f(m_hat)|^2 over a uniform
    true symbol and a uniform wrong detection (all N-1 wrong tones are
    equally likely in an FSK error), weighted by p_e.
    """
    if not 0.0 <= p_e <= 1.0:
        raise ValueError("p_e must be in [0, 1]")
    f = spec.table
    n = spec.n_levels
    # sum over ordered pairs (m, m_hat != m) of (f(m) - f(m_hat))^2,
    # via sum_{a,b} (f_a - f_b)^2 = 2 N sum f^2 - 2 (sum f)^2
    pair_sum = 2.0 * n * np.sum(f**2) - 2.0 * np.sum(f) ** 2
    error_term = p_e * pair_sum / (n * (n - 1))
    return spec.approximation_error + float(error_term)
