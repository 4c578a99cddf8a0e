"""Posterior summaries: moments, HPD and Goldstein intervals, ICC, diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GOLDSTEIN_FACTOR = 1.39
LOGISTIC_VARIANCE = 3.29  # the fixed latent level-1 variance, pi^2/3
DENSITY_GRID = 512
TRACE_SEGMENTS = 10
AUTOCORR_LAGS = 50


def goldstein_interval(mean: float, sd: float) -> tuple[float, float]:
    """mean -/+ 1.39*sd; two such intervals overlap iff the difference is
    not "statistically significant" at the 5% level."""
    if sd < 0:
        raise ValueError("sd must be >= 0")
    half = GOLDSTEIN_FACTOR * sd
    return (mean - half, mean + half)


def hpd_interval(samples, level: float = 0.95) -> tuple[float, float]:
    """Shortest contiguous window of sorted draws holding ceil(level*N) of them.

    Ties in window width break to the leftmost window. Input need not be
    pre-sorted.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.shape[0]
    if n == 0:
        raise ValueError("need at least one sample")
    m = int(math.ceil(level * n))
    if m >= n:
        return (float(x[0]), float(x[-1]))
    widths = x[m - 1:] - x[: n - m + 1]
    i = int(np.argmin(widths))  # argmin returns the first = leftmost minimum
    return (float(x[i]), float(x[i + m - 1]))


def _hpd_columns(sorted_cols: np.ndarray, level: float = 0.95) -> np.ndarray:
    """hpd_interval applied to every column of an (S, K) column-sorted matrix."""
    n, k = sorted_cols.shape
    m = int(math.ceil(level * n))
    if m >= n:
        return np.vstack([sorted_cols[0], sorted_cols[-1]])
    widths = sorted_cols[m - 1:, :] - sorted_cols[: n - m + 1, :]
    idx = np.argmin(widths, axis=0)
    cols = np.arange(k)
    return np.vstack([sorted_cols[idx, cols], sorted_cols[idx + m - 1, cols]])


def icc(sigma2_u, sigma2_tau):
    """Intra-class correlation with the latent level-1 variance fixed at 3.29."""
    s2u = np.asarray(sigma2_u, dtype=np.float64)
    s2t = np.asarray(sigma2_tau, dtype=np.float64)
    if np.any(s2u < 0) or np.any(s2t < 0):
        raise ValueError("variance components must be >= 0")
    total = s2u + s2t
    out = total / (LOGISTIC_VARIANCE + total)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PosteriorSummary:
    mean: float
    sd: float
    hpd_lower: float
    hpd_upper: float
    goldstein_lower: float
    goldstein_upper: float

    @classmethod
    def from_samples(cls, samples, level: float = 0.95,
                     clamp: tuple[float, float] | None = None) -> "PosteriorSummary":
        x = np.asarray(samples, dtype=np.float64)
        mean = float(np.mean(x))
        sd = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
        hl, hu = hpd_interval(x, level)
        gl, gu = goldstein_interval(mean, sd)
        if clamp is not None:
            lo, hi = clamp
            hl, hu = max(hl, lo), min(hu, hi)
            gl, gu = max(gl, lo), min(gu, hi)
        return cls(mean, sd, hl, hu, gl, gu)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "sd": self.sd,
            "hpd": [self.hpd_lower, self.hpd_upper],
            "goldstein": [self.goldstein_lower, self.goldstein_upper],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PosteriorSummary":
        return cls(d["mean"], d["sd"], d["hpd"][0], d["hpd"][1],
                   d["goldstein"][0], d["goldstein"][1])


def summarize(chain, selector: str, level: float = 0.95) -> PosteriorSummary:
    """Posterior summary of one selected parameter of a chain."""
    return PosteriorSummary.from_samples(chain.parameter(selector), level=level)


# ---------------------------------------------------------------------------
# convergence diagnostics
# ---------------------------------------------------------------------------

@dataclass
class DiagnosticsReport:
    autocorrelation: np.ndarray        # lags 0..AUTOCORR_LAGS
    effective_sample_size: float
    trace_segment_means: np.ndarray    # TRACE_SEGMENTS per-segment means
    density_x: np.ndarray              # DENSITY_GRID abscissae
    density_y: np.ndarray              # Gaussian-kernel density estimate
    zero_variance: bool

    def to_dict(self) -> dict:
        return {
            "autocorrelation": list(self.autocorrelation),
            "effective_sample_size": self.effective_sample_size,
            "trace_segment_means": list(self.trace_segment_means),
            "density_x": list(self.density_x),
            "density_y": list(self.density_y),
            "zero_variance": self.zero_variance,
        }


def autocorrelation(samples, max_lag: int = AUTOCORR_LAGS) -> np.ndarray:
    """Sample autocorrelations at lags 0..max_lag (nan for a constant series)."""
    x = np.asarray(samples, dtype=np.float64)
    n = x.shape[0]
    xc = x - np.mean(x)
    denom = float(xc @ xc)
    out = np.full(max_lag + 1, np.nan)
    if denom <= 0.0:
        return out
    out[0] = 1.0
    for k in range(1, min(max_lag, n - 1) + 1):
        out[k] = float(xc[:-k] @ xc[k:]) / denom
    return out


def effective_sample_size(samples) -> float:
    """ESS via Geyer's initial positive sequence, capped at the draw count."""
    x = np.asarray(samples, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        return float(n)
    rho = autocorrelation(x, max_lag=min(n - 2, 2000))
    if np.isnan(rho[0]):
        return float(n)
    tau = 1.0
    m = 0
    while 2 * m + 1 < rho.shape[0]:
        pair = rho[2 * m] + rho[2 * m + 1]
        if m > 0 and pair <= 0.0:
            break
        tau += 2.0 * pair if m > 0 else 2.0 * rho[1]
        m += 1
    tau = max(tau, 1e-12)
    return float(min(n / tau, n))


def kde_grid(samples, grid_size: int = DENSITY_GRID) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian-kernel density estimate on an even grid (rule-of-thumb bandwidth)."""
    x = np.asarray(samples, dtype=np.float64)
    n = x.shape[0]
    sd = float(np.std(x, ddof=1)) if n > 1 else 0.0
    if sd == 0.0:
        c = float(x[0]) if n else 0.0
        gx = np.linspace(c - 1.0, c + 1.0, grid_size)
        gy = np.zeros(grid_size)
        return gx, gy
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) or sd
    h = 0.9 * spread * n ** (-0.2)
    gx = np.linspace(float(x.min()) - 3 * h, float(x.max()) + 3 * h, grid_size)
    z = (gx[:, None] - x[None, :]) / h
    gy = np.exp(-0.5 * z * z).sum(axis=1) / (n * h * math.sqrt(2 * math.pi))
    return gx, gy


def diagnostics_from_samples(samples) -> DiagnosticsReport:
    x = np.asarray(samples, dtype=np.float64)
    rho = autocorrelation(x)
    zero_var = bool(np.isnan(rho[0]))
    segments = np.array([float(np.mean(s)) for s in np.array_split(x, TRACE_SEGMENTS)])
    gx, gy = kde_grid(x)
    return DiagnosticsReport(
        autocorrelation=rho,
        effective_sample_size=effective_sample_size(x),
        trace_segment_means=segments,
        density_x=gx,
        density_y=gy,
        zero_variance=zero_var,
    )


def diagnostics(chain, selector: str) -> DiagnosticsReport:
    """Autocorrelation, ESS, segment trace means and a density grid for one parameter."""
    return diagnostics_from_samples(chain.parameter(selector))
