"""CSV formats: path bundles, memory estimates, sweeps, convergence tables.

All files are UTF-8, comma-separated, with a mandatory header row and "\\n"
line endings.  Floats are printed with 17 significant digits so every value
round-trips losslessly.  Increments (dw, dw_hat) are written on the row of
their right endpoint, leaving an empty cell at t_0.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .equilibrium import SweepRow
from .estimator import MemoryEstimate
from .paths import PathBundle, TimeGrid

__all__ = [
    "fmt",
    "write_path_csv",
    "write_memory_csv",
    "write_sweep_csv",
    "write_convergence_csv",
    "read_t_z_csv",
    "SWEEP_HEADER",
]

PATH_HEADER = ["t", "dw", "w", "Lambda", "lambda", "Z", "D_hat"]
MEMORY_HEADER = ["t", "dw_hat", "Lambda_hat", "lambda_hat"]
SWEEP_HEADER = [
    "y", "p", "Lambda", "region", "n_C", "n_M", "x_star", "r", "mu", "sigma",
    "kappa", "mu_y", "sigma_y", "mu_H", "sigma_H", "mu_G", "D_over_S", "exists",
]
CONVERGENCE_HEADER = ["dt", "median_err_Lambda", "median_err_lambda"]


def fmt(x: float) -> str:
    """17-significant-digit decimal form (lossless for binary64)."""
    return f"{x:.17g}"


def _open_writer(path):
    fh = open(path, "w", encoding="utf-8", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def write_path_csv(path, bundle: PathBundle) -> None:
    """One row per node; the increment column is empty at t_0."""
    t = bundle.grid.nodes()
    fh, w = _open_writer(path)
    with fh:
        w.writerow(PATH_HEADER)
        for n in range(bundle.grid.N + 1):
            dw = "" if n == 0 else fmt(bundle.dw[n - 1])
            w.writerow(
                [
                    fmt(t[n]),
                    dw,
                    fmt(bundle.w[n]),
                    fmt(bundle.Lambda[n]),
                    fmt(bundle.lambda_small[n]),
                    fmt(bundle.Z[n]),
                    fmt(bundle.D_hat[n]),
                ]
            )


def write_memory_csv(path, est: MemoryEstimate) -> None:
    t = est.grid.nodes()
    fh, w = _open_writer(path)
    with fh:
        w.writerow(MEMORY_HEADER)
        for n in range(est.grid.N + 1):
            dw = "" if n == 0 else fmt(est.dw_hat[n - 1])
            w.writerow([fmt(t[n]), dw, fmt(est.Lambda_hat[n]), fmt(est.lambda_hat[n])])


def _sweep_record(row: SweepRow) -> list[str]:
    base = [fmt(row.y), fmt(row.p), fmt(row.Lambda)]
    res = row.result
    if res is None or not res.exists:
        # nonexistent (or failed) rows: region 0, price fields empty
        return base + ["0"] + [""] * 13 + ["0"]
    region = str(res.region)
    vals = [
        res.n_C, res.n_M, res.x_star, res.r, res.mu, res.sigma, res.kappa,
        res.mu_y, res.sigma_y, res.mu_H, res.sigma_H, res.mu_G, res.D_over_S,
    ]
    return base + [region] + [fmt(v) for v in vals] + ["1"]


def write_sweep_csv(path, rows: list[SweepRow]) -> None:
    fh, w = _open_writer(path)
    with fh:
        w.writerow(SWEEP_HEADER)
        for row in rows:
            w.writerow(_sweep_record(row))


def write_convergence_csv(path, report) -> None:
    fh, w = _open_writer(path)
    with fh:
        w.writerow(CONVERGENCE_HEADER)
        for dt, eL, el in zip(report.dt_values, report.median_err_Lambda, report.median_err_lambda):
            w.writerow([fmt(dt), fmt(eL), fmt(el)])


def read_t_z_csv(path, spacing_rtol: float = 1e-9) -> tuple[TimeGrid, np.ndarray]:
    """Read a time series with columns t and Z (extra columns are ignored).

    The grid must be uniform to within spacing_rtol * dt.  Times are taken
    relative to the first sample, so files need not start at t = 0.

    Raises:
        ValueError: on a missing header/column, a malformed row (with its
            1-based line number), too few rows, or non-uniform spacing.
    """
    t: list[float] = []
    z: list[float] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        cols = [c.strip() for c in header]
        if "t" not in cols or "Z" not in cols:
            raise ValueError(f"{path}: header must contain 't' and 'Z' columns, got {header}")
        it, iz = cols.index("t"), cols.index("Z")
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not cell.strip() for cell in rec):
                continue
            try:
                t.append(float(rec[it]))
                z.append(float(rec[iz]))
            except (IndexError, ValueError):
                raise ValueError(f"{path}: line {lineno}: malformed row {rec!r}") from None
    if len(t) < 2:
        raise ValueError(f"{path}: need at least two samples, got {len(t)}")
    ta = np.asarray(t)
    n = len(ta) - 1
    T = ta[-1] - ta[0]
    if T <= 0:
        raise ValueError(f"{path}: times must be increasing")
    dt = T / n
    gaps = np.diff(ta)
    bad = np.nonzero(np.abs(gaps - dt) > spacing_rtol * dt)[0]
    if bad.size:
        i = int(bad[0])
        raise ValueError(
            f"{path}: non-uniform grid at line {i + 3}: spacing {gaps[i]:.17g} vs dt {dt:.17g}"
        )
    if math.isnan(dt) or dt <= 0:
        raise ValueError(f"{path}: invalid grid spacing")
    return TimeGrid(float(T), n), np.asarray(z)
