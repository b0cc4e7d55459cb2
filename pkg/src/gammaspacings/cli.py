"""Command-line interface.

Subcommands: ``density`` (tabulate spacing densities), ``simulate``
(empirical null samples), ``validate`` (KS check of the claimed spacing
law against the true one), ``critical-values``, ``test`` (discordancy
decision on a data file) and ``power`` (slippage power sweep).

Exit status: 0 on success ("not discordant" for ``test``); 1 when
``test`` finds the sample discordant; 2 on usage, parse, IO or numeric
errors.  All simulation commands require ``--seed``; data files written
with the same parameters and seed are byte-identical (timestamps live
only in the ``<output>.manifest.json`` sidecar).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__
from .gamma import GammaParams, gamma_quantile
from .gof import MonotoneCdf, histogram, ks_test
from .montecarlo import (
    SimulationConfig,
    SlippageAlternative,
    critical_value,
    p_value,
    simulate_power,
    simulate_spacing,
    simulate_statistic,
)
from .spacings import (
    DensityCurve,
    QuadratureError,
    SpacingIndex,
    claimed_cdf_yj,
    claimed_pdf_yj,
    density_curve,
    spacing_pdf_numeric,
    y2_cdf_exact,
    y2_pdf_exact,
)
from .stats import DegenerateSampleError, dixon_dk, z_k

_STAT_FNS = {"zk": z_k, "dk": dixon_dk}


class CliError(click.ClickException):
    """Runtime failure (IO, parsing, numerics); exits with status 2."""

    exit_code = 2


@dataclass(frozen=True)
class RunManifest:
    """Sidecar record of one CLI invocation."""

    subcommand: str
    parameters: dict
    version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())


def _write_manifest(stem, subcommand, parameters):
    path = f"{stem}.manifest.json"
    RunManifest(subcommand=subcommand, parameters=parameters).write(path)
    click.echo(f"wrote {path}")


def _parse_float_list(text, flag):
    out = []
    for piece in str(text).split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            out.append(float(piece))
        except ValueError:
            raise click.UsageError(f"{flag} expects comma-separated numbers, got {piece!r}")
    if not out:
        raise click.UsageError(f"{flag} must list at least one value")
    return out


def _config(**kwargs):
    try:
        return SimulationConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise click.UsageError(str(exc))


def _comment_pairs(params):
    return [f"{key}: {value}" for key, value in params.items()]


@click.group()
@click.version_option(version=__version__, prog_name="gammaspacings")
def main():
    """Spacing laws of Gamma order statistics and discordancy tests."""


@main.command()
@click.option("--m", type=float, required=True, help="Gamma shape parameter.")
@click.option("--n", type=int, default=2, show_default=True, help="Sample size.")
@click.option("--j", type=int, default=2, show_default=True,
              help="Spacing index: Y_j = X_(j) - X_(j-1).")
@click.option("--which", type=click.Choice(["exact", "claimed", "numeric", "all"]),
              default="all", show_default=True,
              help="Curve(s) to tabulate. 'all' = the true density (exact "
                   "closed form when n=j=2 and m is an integer, quadrature "
                   "otherwise) plus the claimed Gamma(m, 1/(n-j+1)) law.")
@click.option("--ymax", type=float, default=None,
              help="Grid endpoint [default: 0.9999 quantile of Gamma(m, 1)].")
@click.option("--points", type=int, default=201, show_default=True,
              help="Grid size.")
@click.option("--tol", type=float, default=1e-9, show_default=True,
              help="Quadrature tolerance for the numeric route.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--output", type=click.Path(), default="density", show_default=True,
              help="Output stem; one file per curve plus a manifest.")
def density(m, n, j, which, ymax, points, tol, fmt, output):
    """Tabulate spacing density curves on a uniform grid."""
    if m <= 0 or not math.isfinite(m):
        raise click.UsageError(f"--m must be finite and > 0, got {m}")
    if n < 2:
        raise click.UsageError(f"--n must be >= 2, got {n}")
    if not 2 <= j <= n:
        raise click.UsageError(f"--j must satisfy 2 <= j <= n, got j={j}, n={n}")
    if points < 2:
        raise click.UsageError(f"--points must be >= 2, got {points}")
    exact_ok = float(m).is_integer() and m >= 1 and n == 2 and j == 2
    if which == "exact" and not exact_ok:
        raise click.UsageError(
            "--which exact needs integer m >= 1 and n = j = 2; "
            "use --which numeric for this configuration"
        )
    routes = [which] if which != "all" else [("exact" if exact_ok else "numeric"), "claimed"]
    if ymax is None:
        ymax = math.ceil(float(gamma_quantile(0.9999, GammaParams(m, 1.0))) * 10) / 10
    if ymax <= 0 or not math.isfinite(ymax):
        raise click.UsageError(f"--ymax must be finite and > 0, got {ymax}")

    def route_pdf(route):
        if route == "exact":
            return lambda g: y2_pdf_exact(int(m), g)
        if route == "claimed":
            return lambda g: claimed_pdf_yj(n, j, m, g)
        idx = SpacingIndex.consecutive(n, j)
        params = GammaParams(m, 1.0)
        return lambda g: np.array(
            [spacing_pdf_numeric(idx, params, float(t), tol) for t in np.atleast_1d(g)]
        )

    params = {"m": m, "n": n, "j": j, "which": which, "ymax": ymax,
              "points": points, "tol": tol, "format": fmt, "output": output}
    try:
        for route in routes:
            pdf = route_pdf(route)
            if m < 1:
                # densities with m < 1 are unbounded at 0; start the grid
                # half a step in
                grid = np.linspace(0.0, ymax, points)
                grid[0] = grid[1] / 2.0
                values = np.asarray(pdf(grid), dtype=float)
                err = abs(float(np.trapezoid(values, grid)) - 1.0)
                curve = DensityCurve(grid=grid, values=values, normalization_error=err)
            else:
                curve = density_curve(pdf, ymax, points)
            path = f"{output}_{route}.{fmt}"
            meta = {**params, "curve": route}
            if fmt == "csv":
                curve.to_csv(path, comments=_comment_pairs(meta))
            else:
                curve.to_json(path, meta=meta)
            click.echo(f"wrote {path}")
    except QuadratureError as exc:
        raise CliError(str(exc))
    _write_manifest(output, "density", params)


@main.command()
@click.option("--n", type=int, required=True, help="Sample size per replication.")
@click.option("--m", type=float, required=True, help="Gamma shape parameter.")
@click.option("--sigma", type=float, default=1.0, show_default=True,
              help="Gamma scale (spacing runs; statistics are scale-free).")
@click.option("--j", type=int, default=None,
              help="Simulate the spacing Y_j (mutually exclusive with --stat).")
@click.option("--stat", type=click.Choice(["zk", "dk"]), default=None,
              help="Simulate a discordancy statistic (requires --k).")
@click.option("--k", type=int, default=None, help="Number of suspected outliers.")
@click.option("--reps", type=int, default=10000, show_default=True,
              help="Monte Carlo replications.")
@click.option("--seed", type=int, required=True, help="RNG seed (required).")
@click.option("--workers", type=int, default=1, show_default=True,
              help="Worker threads; results are identical for any count.")
@click.option("--bins", type=int, default=None,
              help="Also write an area-normalized histogram with this many bins.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--output", type=click.Path(), default="simulate", show_default=True)
def simulate(n, m, sigma, j, stat, k, reps, seed, workers, bins, fmt, output):
    """Simulate an empirical null sample of a spacing or a statistic."""
    if (j is None) == (stat is None):
        raise click.UsageError("exactly one of --j or --stat is required")
    if stat is not None and k is None:
        raise click.UsageError("--stat requires --k")
    if j is not None and k is not None:
        raise click.UsageError("--k applies only to --stat runs")
    cfg = _config(n=n, m=m, sigma=sigma, reps=reps, seed=seed, k=k)
    try:
        if j is not None:
            if not 2 <= j <= n:
                raise click.UsageError(f"--j must satisfy 2 <= j <= n, got j={j}, n={n}")
            sample = simulate_spacing(cfg, j, workers=workers)
        else:
            sample = simulate_statistic(cfg, stat, workers=workers)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, click.UsageError):
            raise
        raise click.UsageError(str(exc))
    params = {"n": n, "m": m, "sigma": sigma, "j": j, "stat": stat, "k": k,
              "reps": reps, "seed": seed, "bins": bins, "format": fmt,
              "output": output}
    path = f"{output}.{fmt}"
    if fmt == "csv":
        sample.to_csv(path)
    else:
        sample.to_json(path)
    click.echo(f"wrote {path}")
    if bins is not None:
        if bins < 1:
            raise click.UsageError(f"--bins must be >= 1, got {bins}")
        hist = histogram(sample.values, bins)
        hist_path = f"{output}_hist.{fmt}"
        if fmt == "csv":
            hist.to_csv(hist_path, comments=_comment_pairs(
                {"statistic": sample.statistic_name, **{key: params[key] for key in
                 ("n", "m", "sigma", "reps", "seed", "bins")}}))
        else:
            Path(hist_path).write_text(json.dumps({
                "statistic": sample.statistic_name,
                "bin_edges": [float(v) for v in hist.bin_edges],
                "densities": [float(v) for v in hist.densities],
                "count": hist.count,
            }, indent=2) + "\n")
        click.echo(f"wrote {hist_path}")
    _write_manifest(output, "simulate", params)


@main.command()
@click.option("--m", "m_list", type=str, default="1,3,8", show_default=True,
              help="Comma-separated shape parameters to check.")
@click.option("--n", type=int, default=2, show_default=True)
@click.option("--j", type=int, default=2, show_default=True)
@click.option("--reps", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--alpha", type=float, default=0.05, show_default=True,
              help="KS rejection level.")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--output", type=click.Path(), default="validate", show_default=True)
def validate(m_list, n, j, reps, seed, alpha, workers, output):
    """KS-test simulated spacings against the true and the claimed law.

    For each shape, Y_j spacings are simulated under Gamma(m, 1) and
    tested against (a) the true spacing law (exact closed form when
    n = j = 2 and m is an integer, quadrature otherwise) and (b) the
    claimed Gamma(m, 1/(n-j+1)) law.  The claim should survive only at
    m = 1.
    """
    shapes = _parse_float_list(m_list, "--m")
    if not 0.0 < alpha < 1.0:
        raise click.UsageError(f"--alpha must be in (0, 1), got {alpha}")
    if n < 2 or not 2 <= j <= n:
        raise click.UsageError(f"need n >= 2 and 2 <= j <= n, got n={n}, j={j}")
    rows = []
    try:
        for m in shapes:
            cfg = _config(n=n, m=m, reps=reps, seed=seed)
            sample = simulate_spacing(cfg, j, workers=workers)
            if n == 2 and j == 2 and float(m).is_integer() and m >= 1:
                truth_route = "exact"
                truth_cdf = lambda g, mi=int(m): y2_cdf_exact(mi, g)
            else:
                truth_route = "numeric"
                idx = SpacingIndex.consecutive(n, j)
                params = GammaParams(m, 1.0)
                ymax = 2.0 * float(gamma_quantile(1.0 - 1e-8, GammaParams(m, 1.0)))
                truth_cdf = MonotoneCdf.from_pdf(
                    lambda g: np.array(
                        [spacing_pdf_numeric(idx, params, float(t), 1e-7) for t in g]
                    ),
                    ymax,
                    points=2049,
                )
            ks_truth = ks_test(sample.values, truth_cdf)
            ks_claim = ks_test(sample.values, lambda g: claimed_cdf_yj(n, j, m, g))
            rows.append({
                "m": m,
                "truth_route": truth_route,
                "truth_d": ks_truth.statistic,
                "truth_p": ks_truth.p_value,
                "claimed_d": ks_claim.statistic,
                "claimed_p": ks_claim.p_value,
                "claimed_rejected": bool(ks_claim.p_value < alpha),
            })
    except QuadratureError as exc:
        raise CliError(str(exc))
    click.echo(f"{'m':>8}  {'truth':>8}  {'truth_d':>10}  {'truth_p':>10}  "
               f"{'claimed_d':>10}  {'claimed_p':>10}  verdict")
    for row in rows:
        verdict = "claim rejected" if row["claimed_rejected"] else "claim consistent"
        click.echo(
            f"{row['m']:>8g}  {row['truth_route']:>8}  {row['truth_d']:>10.5f}  "
            f"{row['truth_p']:>10.4g}  {row['claimed_d']:>10.5f}  "
            f"{row['claimed_p']:>10.4g}  {verdict}"
        )
    params = {"m": m_list, "n": n, "j": j, "reps": reps, "seed": seed,
              "alpha": alpha, "output": output}
    report = {"subcommand": "validate", "parameters": params, "rows": rows}
    path = f"{output}.json"
    Path(path).write_text(json.dumps(report, indent=2) + "\n")
    click.echo(f"wrote {path}")
    _write_manifest(output, "validate", params)


@main.command("critical-values")
@click.option("--n", type=int, required=True)
@click.option("--m", type=float, required=True)
@click.option("--k", type=int, required=True)
@click.option("--stat", type=click.Choice(["zk", "dk"]), default="zk",
              show_default=True)
@click.option("--alpha", "alpha_list", type=str, default="0.01,0.05,0.1",
              show_default=True, help="Comma-separated levels.")
@click.option("--reps", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--output", type=click.Path(), default="critical_values",
              show_default=True)
def critical_values(n, m, k, stat, alpha_list, reps, seed, workers, fmt, output):
    """Tabulate empirical critical values of a statistic's null."""
    alphas = _parse_float_list(alpha_list, "--alpha")
    for a in alphas:
        if not 0.0 < a < 1.0:
            raise click.UsageError(f"--alpha values must be in (0, 1), got {a}")
    cfg = _config(n=n, m=m, reps=reps, seed=seed, k=k)
    sample = simulate_statistic(cfg, stat, workers=workers)
    rows = [(a, critical_value(sample, a)) for a in alphas]
    params = {"n": n, "m": m, "k": k, "stat": stat, "alpha": alpha_list,
              "reps": reps, "seed": seed, "format": fmt, "output": output}
    path = f"{output}.{fmt}"
    if fmt == "csv":
        lines = [f"# {c}" for c in _comment_pairs(
            {key: params[key] for key in ("stat", "n", "m", "k", "reps", "seed")})]
        lines.append("alpha,critical_value")
        lines.extend(f"{a!r},{v!r}" for a, v in rows)
        Path(path).write_text("\n".join(lines) + "\n")
    else:
        Path(path).write_text(json.dumps({
            "statistic": stat,
            "config": sample.config.as_dict(),
            "rows": [{"alpha": a, "critical_value": v} for a, v in rows],
        }, indent=2) + "\n")
    click.echo(f"wrote {path}")
    for a, v in rows:
        click.echo(f"alpha={a:g}  critical_value={v!r}")
    _write_manifest(output, "critical-values", params)


@main.command()
@click.argument("datafile", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", type=int, required=True, help="Number of suspected outliers.")
@click.option("--m", type=float, required=True, help="Null Gamma shape.")
@click.option("--stat", type=click.Choice(["zk", "dk"]), default="zk",
              show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--reps", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--output", type=click.Path(), default=None,
              help="Also write the JSON report (plus manifest) to this stem.")
@click.pass_context
def test(ctx, datafile, k, m, stat, alpha, reps, seed, workers, output):
    """Discordancy test for the k largest values of a data file.

    DATAFILE holds one observation per line (blank lines and '#'
    comments are skipped).  Exits 1 when the sample is discordant at
    level alpha, 0 when it is not, 2 on errors.
    """
    if not 0.0 < alpha < 1.0:
        raise click.UsageError(f"--alpha must be in (0, 1), got {alpha}")
    values = []
    for lineno, raw in enumerate(Path(datafile).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise CliError(f"{datafile}:{lineno}: not a number: {line!r}")
    if len(values) < 2:
        raise CliError(f"{datafile}: need at least 2 observations, got {len(values)}")
    n = len(values)
    if not 1 <= k <= n - 1:
        raise click.UsageError(f"--k must satisfy 1 <= k <= n-1 = {n - 1}, got {k}")
    cfg = _config(n=n, m=m, reps=reps, seed=seed, k=k)
    try:
        observed = _STAT_FNS[stat](np.array(values), k)
    except DegenerateSampleError as exc:
        raise CliError(str(exc))
    null = simulate_statistic(cfg, stat, workers=workers)
    crit = critical_value(null, alpha)
    pval = p_value(null, observed)
    discordant = observed > crit
    report = {
        "statistic": observed,
        "p_value": pval,
        "critical_value": crit,
        "alpha": alpha,
        "decision": "discordant" if discordant else "not discordant",
        "config": {"stat": stat, "n": n, "m": m, "k": k, "reps": reps, "seed": seed},
    }
    click.echo(json.dumps(report, indent=2))
    if output is not None:
        path = f"{output}.json"
        Path(path).write_text(json.dumps(report, indent=2) + "\n")
        click.echo(f"wrote {path}")
        _write_manifest(output, "test", {**report["config"], "alpha": alpha,
                                         "datafile": str(datafile),
                                         "output": output})
    ctx.exit(1 if discordant else 0)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--m", type=float, required=True)
@click.option("--k", type=int, required=True,
              help="Contaminated count; must match the statistic's k.")
@click.option("--b", "b_list", type=str, default="1,1.5,2,3", show_default=True,
              help="Comma-separated slippage factors, each >= 1.")
@click.option("--stat", type=click.Choice(["zk", "dk"]), default="zk",
              show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--reps", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, required=True,
              help="Null-sample seed; sweep row i uses seed+1+i.")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--output", type=click.Path(), default="power", show_default=True)
def power(n, m, k, b_list, stat, alpha, reps, seed, workers, fmt, output):
    """Estimate rejection rates under scale slippage of the top k values."""
    bs = _parse_float_list(b_list, "--b")
    for b in bs:
        if b < 1.0:
            raise click.UsageError(f"--b values must be >= 1, got {b}")
    if not 0.0 < alpha < 1.0:
        raise click.UsageError(f"--alpha must be in (0, 1), got {alpha}")
    null_cfg = _config(n=n, m=m, reps=reps, seed=seed, k=k)
    null = simulate_statistic(null_cfg, stat, workers=workers)
    rows = []
    for i, b in enumerate(bs):
        alt_seed = (seed + 1 + i) % 2**64
        alt_cfg = _config(n=n, m=m, reps=reps, seed=alt_seed, k=k)
        est = simulate_power(alt_cfg, SlippageAlternative(b, k), alpha, null,
                             workers=workers)
        se = math.sqrt(est * (1.0 - est) / reps)
        rows.append((b, est, se))
    params = {"n": n, "m": m, "k": k, "b": b_list, "stat": stat, "alpha": alpha,
              "reps": reps, "seed": seed, "format": fmt, "output": output}
    path = f"{output}.{fmt}"
    if fmt == "csv":
        lines = [f"# {c}" for c in _comment_pairs(
            {key: params[key] for key in ("stat", "n", "m", "k", "alpha", "reps", "seed")})]
        lines.append("b,power,se")
        lines.extend(f"{b!r},{p!r},{s!r}" for b, p, s in rows)
        Path(path).write_text("\n".join(lines) + "\n")
    else:
        Path(path).write_text(json.dumps({
            "statistic": stat,
            "config": null.config.as_dict(),
            "alpha": alpha,
            "rows": [{"b": b, "power": p, "se": s} for b, p, s in rows],
        }, indent=2) + "\n")
    click.echo(f"wrote {path}")
    for b, p, s in rows:
        click.echo(f"b={b:g}  power={p:.4f}  se={s:.4f}")
    _write_manifest(output, "power", params)


if __name__ == "__main__":
    main()
