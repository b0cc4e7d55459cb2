"""Order-statistic spacing densities for Gamma samples.

Three routes to the same object, used to cross-check each other:

* ``y2_pdf_exact`` / ``y2_mixture``: closed form for the spacing of two
  iid ``Gamma(m, 1)`` observations with integer shape ``m``, and its
  decomposition as a finite mixture of ``Gamma(i+1, 1)`` components.
* ``spacing_pdf_numeric``: adaptive quadrature of the general spacing
  integrand for any ``n``, any pair of order-statistic ranks and any
  real shape ``m > 0``.
* ``claimed_pdf_yj``: the conjectured law ``Gamma(m, sigma/(n-j+1))``
  for the j-th consecutive spacing.  It is exact when ``m == 1``
  (exponential samples) and wrong otherwise; it is provided so the
  discrepancy can be measured, not because it holds.
"""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import integrate, special

from .gamma import GammaParams, gamma_cdf, gamma_pdf, gamma_quantile, _as_float_array, _maybe_scalar

__all__ = [
    "SpacingIndex",
    "DensityCurve",
    "MixtureDecomposition",
    "QuadratureError",
    "y2_pdf_exact",
    "y2_cdf_exact",
    "y2_mixture",
    "spacing_pdf_numeric",
    "spacing_cdf_numeric",
    "claimed_pdf_yj",
    "claimed_cdf_yj",
    "density_curve",
]

LN2 = math.log(2.0)

# Cap on adaptive subdivisions before quadrature is declared failed.
SUBDIVISION_LIMIT = 2**15


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""


@dataclass(frozen=True)
class SpacingIndex:
    """Ranks of a (possibly non-consecutive) spacing ``X_(s) - X_(r)``.

    Requires ``1 <= r < s <= n``.  The consecutive spacing
    ``Y_j = X_(j) - X_(j-1)`` is ``SpacingIndex.consecutive(n, j)``.
    """

    n: int
    s: int
    r: int

    def __post_init__(self):
        for name in ("n", "s", "r"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 1 <= self.r < self.s <= self.n:
            raise ValueError(
                f"ranks must satisfy 1 <= r < s <= n, got r={self.r}, s={self.s}, n={self.n}"
            )

    @classmethod
    def consecutive(cls, n: int, j: int) -> "SpacingIndex":
        """Index of ``Y_j = X_(j) - X_(j-1)`` for ``2 <= j <= n``."""
        if isinstance(j, bool) or not isinstance(j, numbers.Integral):
            raise TypeError(f"j must be an integer, got {j!r}")
        if not 2 <= j <= n:
            raise ValueError(f"j must satisfy 2 <= j <= n, got j={j}, n={n}")
        return cls(n=n, s=int(j), r=int(j) - 1)


@dataclass(frozen=True, eq=False)
class DensityCurve:
    """Density values tabulated on a strictly increasing grid.

    ``normalization_error`` is ``|trapezoid(values, grid) - 1|``, a
    cheap self-check that the tabulated mass is close to one.
    """

    grid: np.ndarray
    values: np.ndarray
    normalization_error: float

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or values.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if grid.size < 2:
            raise ValueError("curve needs at least 2 grid points")
        if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be finite and strictly increasing")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("density values must be finite and >= 0")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "normalization_error", float(self.normalization_error))

    def to_csv(self, path=None, comments=()) -> str:
        """Render as CSV (``y,f``), optionally writing ``path``.

        ``comments`` become ``#``-prefixed lines above the header.
        Floats use shortest round-trip repr, so output is byte-stable.
        """
        lines = [f"# {c}" for c in comments]
        lines.append("y,f")
        lines.extend(f"{float(g)!r},{float(v)!r}" for g, v in zip(self.grid, self.values))
        text = "\n".join(lines) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_json(self, path=None, meta=None) -> str:
        """Render as JSON, optionally writing ``path``.

        Keys: ``y``, ``f``, ``normalization_error`` and, when ``meta``
        is given, a leading ``meta`` object.
        """
        obj = {}
        if meta is not None:
            obj["meta"] = meta
        obj["y"] = [float(g) for g in self.grid]
        obj["f"] = [float(v) for v in self.values]
        obj["normalization_error"] = self.normalization_error
        text = json.dumps(obj, indent=2) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text


@dataclass(frozen=True, eq=False)
class MixtureDecomposition:
    """Finite Gamma mixture: ``sum_i weights[i] * Gamma(shapes[i], 1)``."""

    weights: np.ndarray
    shapes: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        shapes = np.asarray(self.shapes, dtype=int)
        if weights.ndim != 1 or shapes.ndim != 1 or weights.shape != shapes.shape:
            raise ValueError("weights and shapes must be 1-D arrays of equal length")
        if weights.size == 0:
            raise ValueError("mixture needs at least one component")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite and > 0")
        if np.any(shapes < 1):
            raise ValueError("component shapes must be >= 1")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "shapes", shapes)

    def pdf(self, y):
        """Mixture density at ``y``."""
        arr, scalar = _as_float_array(y)
        out = np.zeros_like(arr)
        for w, a in zip(self.weights, self.shapes):
            out += w * gamma_pdf(arr, GammaParams(float(a), 1.0))
        return _maybe_scalar(out, scalar)

    def cdf(self, y):
        """Mixture cumulative distribution at ``y``."""
        arr, scalar = _as_float_array(y)
        out = np.zeros_like(arr)
        for w, a in zip(self.weights, self.shapes):
            out += w * gamma_cdf(arr, GammaParams(float(a), 1.0))
        return _maybe_scalar(out, scalar)


def _as_shape_int(m) -> int:
    """Integer shape parameter; rejects non-integral and m < 1."""
    if isinstance(m, bool):
        raise TypeError(f"m must be an integer, got {m!r}")
    if isinstance(m, numbers.Integral):
        mi = int(m)
    elif isinstance(m, float) and m.is_integer():
        mi = int(m)
    else:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    if mi < 1:
        raise ValueError(f"m must be >= 1, got {mi}")
    return mi


def _log_binom(n, k):
    return special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(n - k + 1)


def _y2_log_coeffs(m: int) -> np.ndarray:
    # log of C(m-1, i) * G(2m - i - 1) / (G(m)^2 * 2^(2(m-1) - i)), i = 0..m-1
    i = np.arange(m, dtype=float)
    return (
        _log_binom(m - 1.0, i)
        + special.gammaln(2.0 * m - i - 1.0)
        - 2.0 * special.gammaln(float(m))
        - (2.0 * (m - 1) - i) * LN2
    )


def y2_pdf_exact(m, y):
    """Exact spacing density for two iid ``Gamma(m, 1)`` observations.

    For integer ``m >= 1`` the spacing ``Y = X_(2) - X_(1)`` has density

        exp(-y) * sum_{i=0}^{m-1} C(m-1, i) G(2m-i-1) y^i
                  / (G(m)^2 * 2^(2(m-1)-i)),   y >= 0.

    Terms are evaluated in log space and accumulated with compensated
    summation, so the result stays accurate for large ``m`` where the
    raw coefficients overflow.

    Parameters
    ----------
    m : int
        Integer shape, at least 1.  Non-integer shapes have no closed
        form here; use ``spacing_pdf_numeric``.
    y : float or array_like

    Returns
    -------
    float or ndarray
        Zero for ``y < 0``.
    """
    mi = _as_shape_int(m)
    arr, scalar = _as_float_array(y)
    logc = _y2_log_coeffs(mi)
    out = np.zeros_like(arr)
    at_zero = arr == 0
    if np.any(at_zero):
        # only the i = 0 term survives at y = 0
        out[at_zero] = math.exp(logc[0])
    pos = arr > 0
    if np.any(pos):
        yp = arr[pos]
        ly = np.log(yp)
        total = np.zeros_like(yp)
        comp = np.zeros_like(yp)
        for i in range(mi):
            term = np.exp(logc[i] + i * ly - yp)
            t = total + term
            comp += np.where(
                np.abs(total) >= np.abs(term), (total - t) + term, (term - t) + total
            )
            total = t
        out[pos] = total + comp
    return _maybe_scalar(out, scalar)


def y2_mixture(m) -> MixtureDecomposition:
    """Mixture form of the exact two-observation spacing law.

    ``Y ~ sum_i w_i Gamma(i+1, 1)`` with

        w_i = C(m-1, i) G(2m-i-1) i! / (G(m)^2 * 2^(2(m-1)-i)),

    ``i = 0..m-1``.  The weights are positive and sum to 1; the mixture
    density coincides pointwise with ``y2_pdf_exact``.
    """
    mi = _as_shape_int(m)
    i = np.arange(mi, dtype=float)
    weights = np.exp(_y2_log_coeffs(mi) + special.gammaln(i + 1.0))
    return MixtureDecomposition(weights=weights, shapes=np.arange(1, mi + 1))


def y2_cdf_exact(m, y):
    """Exact cdf of the two-observation spacing: ``sum_i w_i P(i+1, y)``."""
    return y2_mixture(m).cdf(y)


def claimed_pdf_yj(n, j, m, y, sigma=1.0):
    """Density of the conjectured spacing law ``Gamma(m, sigma/(n-j+1))``.

    This is the claim under test, not a true spacing law: it matches the
    quadrature route exactly when ``m == 1`` and disagrees for every
    other shape.
    """
    idx = SpacingIndex.consecutive(n, j)
    params = GammaParams(float(m), float(sigma) / (idx.n - idx.s + 1))
    return gamma_pdf(y, params)


def claimed_cdf_yj(n, j, m, y, sigma=1.0):
    """Cdf companion of ``claimed_pdf_yj``."""
    idx = SpacingIndex.consecutive(n, j)
    params = GammaParams(float(m), float(sigma) / (idx.n - idx.s + 1))
    return gamma_cdf(y, params)


def _quad(fn, lo, hi, tol):
    res = integrate.quad(
        fn, lo, hi, epsabs=tol, epsrel=0.0, limit=SUBDIVISION_LIMIT, full_output=1
    )
    if len(res) > 3:
        raise QuadratureError(
            f"quadrature on [{lo:g}, {hi:g}] did not converge to {tol:g}: "
            + " ".join(str(res[3]).split())
        )
    return res[0]


def spacing_pdf_numeric(idx: SpacingIndex, params: GammaParams, y, tol=1e-9):
    """Spacing density ``f_{X_(s)-X_(r)}(y)`` by adaptive quadrature.

    Integrates

        n! / ((r-1)! (s-r-1)! (n-s)!) *
        F(x)^(r-1) f(x) [F(x+y) - F(x)]^(s-r-1) f(x+y) [1 - F(x+y)]^(n-s)

    over ``x in (0, U)`` with ``U = sigma * Q(1 - 1e-14) + y``, where
    ``f``/``F``/``Q`` are the ``Gamma(m, sigma)`` density, cdf and
    quantile.  Works for any real shape ``m > 0`` and any rank pair.

    Parameters
    ----------
    idx : SpacingIndex
    params : GammaParams
    y : float
        Point of evaluation; the density is 0 for ``y < 0``.
    tol : float
        Absolute error budget for the returned value.

    Raises
    ------
    QuadratureError
        If the adaptive scheme cannot certify the tolerance.
    """
    y = float(y)
    if not math.isfinite(y):
        raise ValueError(f"y must be finite, got {y!r}")
    tol = float(tol)
    if not 0 < tol < 1:
        raise ValueError(f"tol must be in (0, 1), got {tol!r}")
    if y < 0:
        return 0.0
    n, s, r = idx.n, idx.s, idx.r
    m, sigma = params.m, params.sigma
    coef = float(
        math.factorial(n)
        // (math.factorial(r - 1) * math.factorial(s - r - 1) * math.factorial(n - s))
    )
    a_exp, b_exp, c_exp = r - 1, s - r - 1, n - s
    lgm = math.lgamma(m)

    def fpdf(t):
        if t <= 0.0:
            if t < 0.0 or m > 1.0:
                return 0.0
            return 1.0 / sigma if m == 1.0 else math.inf
        u = t / sigma
        return math.exp((m - 1.0) * math.log(u) - u - lgm) / sigma

    def cdf(t):
        return float(special.gammainc(m, t / sigma)) if t > 0.0 else 0.0

    def sf(t):
        return float(special.gammaincc(m, t / sigma)) if t > 0.0 else 1.0

    def integrand(x):
        val = fpdf(x) * fpdf(x + y)
        if val == 0.0:
            return 0.0
        if a_exp:
            val *= cdf(x) ** a_exp
        if b_exp:
            mid = cdf(x + y) - cdf(x)
            if mid <= 0.0:
                return 0.0
            val *= mid**b_exp
        if c_exp:
            val *= sf(x + y) ** c_exp
        return val

    upper = sigma * float(gamma_quantile(1.0 - 1e-14, GammaParams(m, 1.0))) + y
    value = coef * _quad(integrand, 0.0, upper, tol / coef)
    return max(0.0, value)


def spacing_cdf_numeric(idx: SpacingIndex, params: GammaParams, y, tol=1e-9):
    """Spacing cdf by integrating ``spacing_pdf_numeric`` over ``[0, y]``.

    The pointwise density tolerance is tightened so that accumulated
    density error plus outer quadrature error stay within ``tol``; the
    result is clamped to ``[0, 1]``.
    """
    y = float(y)
    if not math.isfinite(y):
        raise ValueError(f"y must be finite, got {y!r}")
    tol = float(tol)
    if not 0 < tol < 1:
        raise ValueError(f"tol must be in (0, 1), got {tol!r}")
    if y <= 0:
        return 0.0
    inner_tol = tol / (20.0 * max(1.0, y))
    value = _quad(
        lambda t: spacing_pdf_numeric(idx, params, t, inner_tol), 0.0, y, tol / 2.0
    )
    return min(1.0, max(0.0, value))


def density_curve(pdf, y_max, points) -> DensityCurve:
    """Tabulate ``pdf`` on a uniform grid ``[0, y_max]``.

    Parameters
    ----------
    pdf : callable
        Maps an ndarray of grid points to density values >= 0.
    y_max : float
        Right endpoint, > 0.
    points : int
        Grid size, at least 2.

    Returns
    -------
    DensityCurve
        With ``normalization_error = |trapezoid(values) - 1|``.
    """
    y_max = float(y_max)
    if not math.isfinite(y_max) or y_max <= 0:
        raise ValueError(f"y_max must be finite and > 0, got {y_max!r}")
    if isinstance(points, bool) or not isinstance(points, numbers.Integral):
        raise TypeError(f"points must be an integer, got {points!r}")
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    grid = np.linspace(0.0, y_max, int(points))
    values = np.asarray(pdf(grid), dtype=float)
    if values.shape != grid.shape:
        raise ValueError("pdf callable must return one value per grid point")
    err = abs(float(np.trapezoid(values, grid)) - 1.0)
    return DensityCurve(grid=grid, values=values, normalization_error=err)
