"""Goodness-of-fit instruments: ECDF, Kolmogorov-Smirnov, histograms.

The KS test here is one-sample against a fully specified continuous
cdf, with the asymptotic Kolmogorov p-value (small-sample correction
folded into the argument).  ``MonotoneCdf`` turns an expensive pdf
(e.g. the quadrature spacing density) into a fast interpolated cdf
suitable as a KS reference.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np


__all__ = [
    "KsResult",
    "Histogram",
    "MonotoneCdf",
    "ecdf",
    "ks_statistic",
    "ks_pvalue",
    "ks_test",
    "histogram",
]


@dataclass(frozen=True)
class KsResult:
    """KS statistic, its asymptotic p-value and the sample size."""

    statistic: float
    p_value: float
    sample_size: int


@dataclass(frozen=True, eq=False)
class Histogram:
    """Area-normalized histogram: ``sum(densities * widths) == 1``."""

    bin_edges: np.ndarray
    densities: np.ndarray
    count: int

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        dens = np.asarray(self.densities, dtype=float)
        if edges.ndim != 1 or dens.ndim != 1 or edges.size != dens.size + 1:
            raise ValueError("need len(bin_edges) == len(densities) + 1")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin_edges must be strictly increasing")
        if np.any(dens < 0) or not np.all(np.isfinite(dens)):
            raise ValueError("densities must be finite and >= 0")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "densities", dens)
        object.__setattr__(self, "count", int(self.count))

    def to_csv(self, path=None, comments=()) -> str:
        """CSV with columns ``bin_lo,bin_hi,density``."""
        from pathlib import Path

        lines = [f"# {c}" for c in comments]
        lines.append("bin_lo,bin_hi,density")
        lines.extend(
            f"{float(lo)!r},{float(hi)!r},{float(d)!r}"
            for lo, hi, d in zip(self.bin_edges[:-1], self.bin_edges[1:], self.densities)
        )
        text = "\n".join(lines) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text


def _sorted_sample(sample) -> np.ndarray:
    arr = np.asarray(sample, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("sample must be a nonempty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample must be finite")
    if np.any(np.diff(arr) < 0):
        raise ValueError("sample must be sorted ascending")
    return arr


def ecdf(sample, x):
    """Empirical cdf of a sorted ``sample`` evaluated at ``x``.

    Right-continuous step function: ``#{s_i <= x} / N``.
    """
    arr = _sorted_sample(sample)
    xq = np.asarray(x, dtype=float)
    scalar = xq.ndim == 0
    out = np.searchsorted(arr, np.atleast_1d(xq), side="right") / arr.size
    return float(out[0]) if scalar else out


def ks_statistic(sample, cdf) -> float:
    """One-sample KS distance between a sorted sample and ``cdf``.

        D = max_i max(i/N - F(x_(i)), F(x_(i)) - (i-1)/N)

    ``cdf`` is called once with the whole sample array (or per point if
    it only handles scalars) and must return values in ``[0, 1]``.
    """
    arr = _sorted_sample(sample)
    try:
        f = np.asarray(cdf(arr), dtype=float)
        if f.shape != arr.shape:
            raise TypeError
    except TypeError:
        f = np.array([float(cdf(v)) for v in arr])
    if np.any(f < 0) or np.any(f > 1) or not np.all(np.isfinite(f)):
        raise ValueError("cdf values must lie in [0, 1]")
    n = arr.size
    i = np.arange(1, n + 1)
    d = np.maximum(i / n - f, f - (i - 1) / n).max()
    return float(max(d, 0.0))


def _kolmogorov_sf(lam: float) -> float:
    # Q(lam) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lam^2); alternating with
    # decreasing terms, so truncating when a term drops below 1e-12 bounds
    # the error by that term.
    if lam <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 100001):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += sign * term
        sign = -sign
        if term < 1e-12:
            break
    return min(1.0, max(0.0, 2.0 * total))


def ks_pvalue(statistic, sample_size) -> float:
    """Asymptotic p-value of the KS statistic.

    Uses the Kolmogorov tail series at the corrected argument

        lam = (sqrt(N) + 0.12 + 0.11 / sqrt(N)) * D,

    which keeps the asymptotic formula accurate down to moderate N.
    ``statistic == 0`` gives 1; the result lies in ``(0, 1]`` up to
    underflow of the series itself.
    """
    d = float(statistic)
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"statistic must be in [0, 1], got {d!r}")
    if isinstance(sample_size, bool) or not isinstance(sample_size, numbers.Integral):
        raise TypeError(f"sample_size must be an integer, got {sample_size!r}")
    if sample_size < 1:
        raise ValueError(f"sample_size must be >= 1, got {sample_size}")
    if d == 0.0:
        return 1.0
    sqrt_n = math.sqrt(sample_size)
    lam = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d
    return _kolmogorov_sf(lam)


def ks_test(sample, cdf) -> KsResult:
    """KS statistic and p-value in one call."""
    arr = _sorted_sample(sample)
    d = ks_statistic(arr, cdf)
    return KsResult(statistic=d, p_value=ks_pvalue(d, arr.size), sample_size=arr.size)


def histogram(sample, bins, range=None) -> Histogram:
    """Area-normalized histogram of ``sample``.

    Parameters
    ----------
    sample : array_like
        Nonempty, finite values (any order).
    bins : int
        Number of bins, >= 1.
    range : (float, float), optional
        Outer edges; defaults to the sample min/max.  Must satisfy
        ``lo < hi``.  Values outside are dropped from the density
        normalization.

    Returns
    -------
    Histogram
        ``densities`` integrate to 1 over the binned range whenever any
        observation falls inside it.
    """
    arr = np.asarray(sample, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("sample must be a nonempty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample must be finite")
    if isinstance(bins, bool) or not isinstance(bins, numbers.Integral):
        raise TypeError(f"bins must be an integer, got {bins!r}")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if range is not None:
        lo, hi = float(range[0]), float(range[1])
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"range must satisfy lo < hi, got {range!r}")
        range = (lo, hi)
    counts, edges = np.histogram(arr, bins=int(bins), range=range)
    inside = int(counts.sum())
    widths = np.diff(edges)
    if inside > 0:
        densities = counts / (inside * widths)
    else:
        densities = np.zeros_like(widths)
    return Histogram(bin_edges=edges, densities=densities, count=inside)


class MonotoneCdf:
    """Interpolated cdf built from tabulated values on a grid.

    Construction from a pdf integrates with the cumulative trapezoid
    rule, enforces monotonicity and clamps to ``[0, 1]``; evaluation is
    linear interpolation (0 left of the grid, the final value right of
    it).  Intended as a fast KS reference for densities that are
    expensive pointwise.
    """

    def __init__(self, grid, values):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or grid.size < 2 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        values = np.minimum(np.maximum.accumulate(np.maximum(values, 0.0)), 1.0)
        self.grid = grid
        self.values = values

    @classmethod
    def from_pdf(cls, pdf, y_max, points=4097) -> "MonotoneCdf":
        """Tabulate ``pdf`` on ``points`` nodes over ``[0, y_max]`` and
        integrate it into a cdf."""
        from scipy.integrate import cumulative_trapezoid

        grid = np.linspace(0.0, float(y_max), int(points))
        dens = np.asarray(pdf(grid), dtype=float)
        if dens.shape != grid.shape:
            dens = np.array([float(pdf(v)) for v in grid])
        cum = cumulative_trapezoid(dens, grid, initial=0.0)
        return cls(grid, cum)

    def __call__(self, x):
        xq = np.asarray(x, dtype=float)
        scalar = xq.ndim == 0
        out = np.interp(np.atleast_1d(xq), self.grid, self.values, left=0.0)
        return float(out[0]) if scalar else out
