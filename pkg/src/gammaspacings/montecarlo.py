"""Seeded Monte Carlo for spacing laws and discordancy statistics.

Replication ``r`` always draws from the substream ``(seed, r)``, so a
run is reproducible bit for bit regardless of execution order or the
number of workers, and any replication can be regenerated in isolation.

Conventions: empirical critical values invert the ECDF at ``1 - alpha``
(1-based index ``ceil((1-alpha) * R)``); p-values use add-one counting
``(1 + #{values >= observed}) / (1 + R)`` so they are never zero.
Statistic nulls are simulated at unit scale: both statistics are scale
invariant, which is what makes the stored ``sigma`` metadata only.
"""

from __future__ import annotations

import json
import math
import numbers
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gamma import GammaParams, RngStream
from .stats import _dk_sorted, _zk_sorted

__all__ = [
    "ConfigMismatchError",
    "SimulationConfig",
    "EmpiricalSample",
    "SlippageAlternative",
    "simulate_spacing",
    "simulate_statistic",
    "critical_value",
    "p_value",
    "simulate_power",
]

_STATISTICS = {"zk": _zk_sorted, "dk": _dk_sorted}


class ConfigMismatchError(ValueError):
    """Simulation inputs describe incompatible configurations."""


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of a Monte Carlo run.

    ``k`` is required only for statistic simulations.  ``sigma`` scales
    spacing draws; statistic nulls are scale-free and carry it as
    metadata only.
    """

    n: int
    m: float
    reps: int
    seed: int
    sigma: float = 1.0
    k: int | None = None

    def __post_init__(self):
        for name in ("n", "reps", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be in [0, 2**64), got {self.seed}")
        params = GammaParams(self.m, self.sigma)  # validates both
        object.__setattr__(self, "m", params.m)
        object.__setattr__(self, "sigma", params.sigma)
        if self.k is not None:
            if isinstance(self.k, bool) or not isinstance(self.k, numbers.Integral):
                raise TypeError(f"k must be an integer, got {self.k!r}")
            if not 1 <= self.k <= self.n - 1:
                raise ValueError(
                    f"k must satisfy 1 <= k <= n-1 = {self.n - 1}, got {self.k}"
                )
            object.__setattr__(self, "k", int(self.k))

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "sigma": self.sigma,
            "reps": self.reps,
            "seed": self.seed,
            "k": self.k,
        }


@dataclass(frozen=True, eq=False)
class EmpiricalSample:
    """Finalized (sorted) Monte Carlo sample of one scalar quantity."""

    values: np.ndarray
    config: SimulationConfig
    statistic_name: str
    sorted: bool = True

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be 1-D")
        if values.size != self.config.reps:
            raise ValueError(
                f"got {values.size} values for reps={self.config.reps}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if self.sorted and np.any(np.diff(values) < 0):
            raise ValueError("values flagged sorted but are not")
        object.__setattr__(self, "values", values)

    def _comment_lines(self):
        cfg = self.config
        return [
            f"statistic: {self.statistic_name}",
            f"n: {cfg.n}",
            f"m: {float(cfg.m)!r}",
            f"sigma: {float(cfg.sigma)!r}",
            f"reps: {cfg.reps}",
            f"seed: {cfg.seed}",
            f"k: {cfg.k}",
        ]

    def to_csv(self, path=None, comments=()) -> str:
        """One ``value`` column; config as ``#`` comments above the
        header.  Byte-stable for a fixed config and seed."""
        lines = [f"# {c}" for c in (*self._comment_lines(), *comments)]
        lines.append("value")
        lines.extend(f"{float(v)!r}" for v in self.values)
        text = "\n".join(lines) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_json(self, path=None, meta=None) -> str:
        obj = {"statistic": self.statistic_name, "config": self.config.as_dict()}
        if meta is not None:
            obj["meta"] = meta
        obj["values"] = [float(v) for v in self.values]
        text = json.dumps(obj, indent=2) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text


@dataclass(frozen=True)
class SlippageAlternative:
    """Scale-slippage contamination: ``count`` of the ``n`` draws come
    from ``Gamma(m, b * sigma)`` with ``b >= 1``; ``b == 1`` recovers
    the null."""

    b: float
    contaminated_count: int = 1

    def __post_init__(self):
        if isinstance(self.b, bool) or not isinstance(self.b, numbers.Real):
            raise TypeError(f"b must be a real number, got {self.b!r}")
        if not math.isfinite(self.b) or self.b < 1.0:
            raise ValueError(f"b must be finite and >= 1, got {self.b!r}")
        object.__setattr__(self, "b", float(self.b))
        count = self.contaminated_count
        if isinstance(count, bool) or not isinstance(count, numbers.Integral):
            raise TypeError(f"contaminated_count must be an integer, got {count!r}")
        if count < 1:
            raise ValueError(f"contaminated_count must be >= 1, got {count}")
        object.__setattr__(self, "contaminated_count", int(count))


def _check_workers(workers) -> int:
    if isinstance(workers, bool) or not isinstance(workers, numbers.Integral):
        raise TypeError(f"workers must be an integer, got {workers!r}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return int(workers)


def _run_replications(fill, reps, workers) -> np.ndarray:
    # fill(r) must depend only on r; then the schedule cannot matter.
    out = np.empty(reps, dtype=float)
    if workers == 1:
        for r in range(reps):
            out[r] = fill(r)
        return out

    def run_slice(lo, hi):
        for r in range(lo, hi):
            out[r] = fill(r)

    bounds = np.linspace(0, reps, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(run_slice, lo, hi)
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for fut in futures:
            fut.result()
    return out


def _draw_nondegenerate(gen, m, sigma, n) -> np.ndarray:
    xs = np.sort(gen.gamma(shape=m, scale=sigma, size=n))
    while xs[0] == xs[-1]:  # degenerate draw; continue the same stream
        xs = np.sort(gen.gamma(shape=m, scale=sigma, size=n))
    return xs


def simulate_spacing(config: SimulationConfig, j, workers=1) -> EmpiricalSample:
    """Empirical null of the spacing ``Y_j`` under ``Gamma(m, sigma)``.

    Each replication draws ``n`` variates from its own substream, sorts
    them and records ``X_(j) - X_(j-1)``.  Returns the sorted sample.
    """
    from .spacings import SpacingIndex

    idx = SpacingIndex.consecutive(config.n, j)
    workers = _check_workers(workers)
    m, sigma, n = config.m, config.sigma, config.n

    def fill(r):
        gen = RngStream(config.seed, r).generator()
        xs = np.sort(gen.gamma(shape=m, scale=sigma, size=n))
        return xs[idx.s - 1] - xs[idx.r - 1]

    values = np.sort(_run_replications(fill, config.reps, workers))
    return EmpiricalSample(values=values, config=config, statistic_name=f"y{idx.s}")


def simulate_statistic(config: SimulationConfig, which, workers=1) -> EmpiricalSample:
    """Empirical null of a discordancy statistic (``"zk"`` or ``"dk"``).

    Draws are taken at unit scale (the statistics are scale invariant),
    so samples for different ``sigma`` are bitwise identical.  Requires
    ``config.k``.  Degenerate draws (all values equal) are redrawn from
    the same substream.
    """
    if which not in _STATISTICS:
        raise ValueError(f"which must be one of {sorted(_STATISTICS)}, got {which!r}")
    if config.k is None:
        raise ValueError("config.k is required for statistic simulation")
    workers = _check_workers(workers)
    stat = _STATISTICS[which]
    m, n, k = config.m, config.n, config.k

    def fill(r):
        gen = RngStream(config.seed, r).generator()
        return stat(_draw_nondegenerate(gen, m, 1.0, n), k)

    values = np.sort(_run_replications(fill, config.reps, workers))
    return EmpiricalSample(values=values, config=config, statistic_name=which)


def critical_value(sample: EmpiricalSample, alpha) -> float:
    """Upper-tail empirical critical value at level ``alpha``.

    The ``ceil((1 - alpha) * R)``-th smallest simulated value (1-based),
    i.e. the inverted ECDF at ``1 - alpha``.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    if not sample.sorted:
        raise ValueError("sample must be finalized (sorted)")
    reps = sample.values.size
    index = min(max(math.ceil((1.0 - alpha) * reps), 1), reps)
    return float(sample.values[index - 1])


def p_value(sample: EmpiricalSample, observed) -> float:
    """Add-one Monte Carlo p-value of ``observed`` against the null.

        (1 + #{values >= observed}) / (1 + R)

    Always in ``(0, 1]``; never 0, so it is safe to compare to any
    level.
    """
    observed = float(observed)
    if not math.isfinite(observed):
        raise ValueError(f"observed must be finite, got {observed!r}")
    if not sample.sorted:
        raise ValueError("sample must be finalized (sorted)")
    reps = sample.values.size
    count_ge = reps - int(np.searchsorted(sample.values, observed, side="left"))
    return (1 + count_ge) / (1 + reps)


def simulate_power(
    config: SimulationConfig,
    alternative: SlippageAlternative,
    alpha,
    null_sample: EmpiricalSample,
    workers=1,
) -> float:
    """Rejection rate under scale slippage, against a simulated null.

    The statistic is taken from ``null_sample.statistic_name``; its
    critical value at ``alpha`` comes from ``null_sample``.  Each
    replication draws ``n`` unit-scale variates, multiplies the last
    ``contaminated_count`` of them by ``b``, and rejects when the
    statistic exceeds the critical value.

    Raises
    ------
    ConfigMismatchError
        If the null sample is not a statistic null, or its ``n``/``m``/
        ``k`` disagree with ``config``, or ``config.k`` differs from
        ``alternative.contaminated_count``.
    """
    which = null_sample.statistic_name
    if which not in _STATISTICS:
        raise ConfigMismatchError(
            f"null sample records {which!r}, not a discordancy statistic"
        )
    if config.k is None:
        raise ValueError("config.k is required for power simulation")
    if config.k != alternative.contaminated_count:
        raise ConfigMismatchError(
            f"config.k={config.k} but alternative contaminates "
            f"{alternative.contaminated_count} observations"
        )
    null_cfg = null_sample.config
    if (config.n, config.m, config.k) != (null_cfg.n, null_cfg.m, null_cfg.k):
        raise ConfigMismatchError(
            "null sample was simulated for "
            f"(n={null_cfg.n}, m={null_cfg.m}, k={null_cfg.k}), "
            f"not (n={config.n}, m={config.m}, k={config.k})"
        )
    workers = _check_workers(workers)
    crit = critical_value(null_sample, alpha)
    stat = _STATISTICS[which]
    m, n, k, b = config.m, config.n, config.k, alternative.b

    def fill(r):
        gen = RngStream(config.seed, r).generator()
        xs = gen.gamma(shape=m, scale=1.0, size=n)
        xs[n - k :] *= b
        xs.sort()
        while xs[0] == xs[-1]:
            xs = gen.gamma(shape=m, scale=1.0, size=n)
            xs[n - k :] *= b
            xs.sort()
        return stat(xs, k)

    values = _run_replications(fill, config.reps, workers)
    return float(np.mean(values > crit))
