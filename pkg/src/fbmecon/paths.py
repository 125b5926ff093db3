"""Time grids, Brownian increments, and the approximate-fBm path machinery.

The memory processes are Ito kernel integrals against Brownian increments,

    Lambda_t = sqrt(2H) h       int_0^t (t - s + eps)^(h-1) dw_s,  h = H - 1/2,
    lambda_t = sqrt(2H) h(h-1)  int_0^t (t - s + eps)^(h-2) dw_s,

and the log output Z = ln D follows

    dZ_t = (mu_D + sigma_D Lambda_t - H eps^(2h) sigma_D^2) dt
           + sqrt(2H) eps^h sigma_D dw_t.

All kernel quadrature here evaluates the kernel at the left endpoint of each
subinterval (the non-anticipating Ito convention; midpoint or trapezoid rules
would bias toward the Stratonovich integral).  Run the quadrature on a
refinement of the output grid and the sums serve as the oracle for the exact
laws, with error vanishing as the refinement grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ModelParams

__all__ = [
    "TimeGrid",
    "PathBundle",
    "simulate_brownian",
    "kernel_sums",
    "memory_exact",
    "approx_fbm",
    "output_steps",
    "simulate_output",
    "simulate_bundle",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0 = t_0 < ... < t_N = T with dt = T/N <= 1."""

    T: float
    N: int

    def __post_init__(self):
        if not (self.T > 0 and np.isfinite(self.T)):
            raise ValueError("T must be a positive finite real")
        if not (isinstance(self.N, (int, np.integer)) and self.N >= 1):
            raise ValueError("N must be a positive integer")
        if self.dt > 1.0:
            raise ValueError(f"dt = T/N = {self.dt:g} exceeds 1; refine the grid")

    @property
    def dt(self) -> float:
        return self.T / self.N

    def nodes(self) -> np.ndarray:
        """Node times n * dt, exact at the endpoints."""
        t = np.arange(self.N + 1) * self.dt
        return t

    def refined(self, factor: int) -> "TimeGrid":
        """The factor-fold refinement of this grid."""
        if factor < 1:
            raise ValueError("refinement factor must be >= 1")
        return TimeGrid(self.T, self.N * int(factor))


def simulate_brownian(grid: TimeGrid, seed: int) -> np.ndarray:
    """Draw the N Brownian increments of the grid, reproducibly.

    Generator: numpy PCG64 seeded through SeedSequence(seed); variates are
    Generator.standard_normal (ziggurat) scaled by sqrt(dt).  The same seed
    yields the same array bit-for-bit across runs and platforms.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.standard_normal(grid.N) * np.sqrt(grid.dt)


def kernel_sums(
    dw: np.ndarray,
    dt: float,
    epsilon: float,
    prefactor: float,
    exponent: float,
    stride: int = 1,
) -> np.ndarray:
    """Left-endpoint Ito kernel sums on every stride-th node.

    With M = len(dw) increments on a grid of step dt, returns the array

        out[n] = prefactor * sum_{j < n*stride} (n*stride*dt - j*dt + epsilon)**exponent * dw[j]

    for n = 0 .. M // stride (so out[0] = 0).  stride > 1 evaluates a
    refinement-R quadrature on the coarse grid of step stride * dt.

    This single routine backs every kernel integral in the package, so
    quantities defined as "the same sum" really are computed by the same
    floating-point operations.
    """
    m = len(dw)
    if m % stride:
        raise ValueError(f"len(dw) = {m} is not a multiple of stride {stride}")
    n_out = m // stride
    out = np.zeros(n_out + 1)
    if m == 0 or prefactor == 0.0:
        return out
    # weight at lag j subintervals: prefactor * (j*dt + eps)^exponent, j = 1..M
    lags = prefactor * (dt * np.arange(1, m + 1) + epsilon) ** exponent
    rev = lags[::-1].copy()  # rev[M-1-i] = weight at lag i+1; contiguous for dot
    for n in range(1, n_out + 1):
        j = n * stride
        out[n] = np.dot(dw[:j], rev[m - j:])
    return out


def memory_exact(
    grid: TimeGrid, dw_fine: np.ndarray, params: ModelParams, refine: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Memory processes Lambda and lambda on the grid from refined increments.

    dw_fine must hold grid.N * refine increments of the refine-fold finer
    grid.  At refine = 1 this is exactly the Euler kernel sum over the grid's
    own increments; larger refinements serve as the quadrature oracle for the
    continuous laws (its own error shrinks as refine grows).
    """
    refine = int(refine)
    if len(dw_fine) != grid.N * refine:
        raise ValueError(
            f"expected {grid.N * refine} fine increments (N = {grid.N}, refine = {refine}), "
            f"got {len(dw_fine)}"
        )
    h = params.H - 0.5
    root = np.sqrt(2.0 * params.H)
    dt_f = grid.dt / refine
    lam_big = kernel_sums(dw_fine, dt_f, params.epsilon, root * h, h - 1.0, stride=refine)
    lam_small = kernel_sums(
        dw_fine, dt_f, params.epsilon, root * h * (h - 1.0), h - 2.0, stride=refine
    )
    return lam_big, lam_small


def approx_fbm(
    grid: TimeGrid, dw_fine: np.ndarray, params: ModelParams, refine: int = 1
) -> np.ndarray:
    """The approximate fBm w^H itself on the grid (kernel exponent h).

    Normalized so that Var[w^H_t] -> (t + eps)^(2H) - eps^(2H) as the
    quadrature refines; the defining distribution-matching property.
    """
    refine = int(refine)
    if len(dw_fine) != grid.N * refine:
        raise ValueError("fine increments do not match grid.N * refine")
    h = params.H - 0.5
    root = np.sqrt(2.0 * params.H)
    return kernel_sums(dw_fine, grid.dt / refine, params.epsilon, root, h, stride=refine)


def output_steps(
    grid: TimeGrid, dw: np.ndarray, Lambda: np.ndarray, params: ModelParams
) -> np.ndarray:
    """Per-step increments of the log-output Euler recursion.

    step[n] = (mu_D - H eps^(2h) sigma_D^2) dt + sigma_D dt Lambda[n]
              + sqrt(2H) eps^h sigma_D dw[n]

    with Lambda evaluated at the left node.  Exposed separately so callers
    can inspect the one-step affine form; :func:`simulate_output` is its
    cumulative sum.
    """
    if len(dw) != grid.N:
        raise ValueError(f"expected {grid.N} increments, got {len(dw)}")
    if len(Lambda) < grid.N:
        raise ValueError("Lambda must cover every left node of the grid")
    if not (np.all(np.isfinite(dw)) and np.all(np.isfinite(Lambda[: grid.N]))):
        raise ValueError("non-finite inputs to the output recursion")
    h = params.H - 0.5
    dt = grid.dt
    a0 = (params.mu_D - params.H * params.epsilon ** (2.0 * h) * params.sigma_D**2) * dt
    vol = np.sqrt(2.0 * params.H) * params.epsilon**h * params.sigma_D
    return a0 + (params.sigma_D * dt) * np.asarray(Lambda)[: grid.N] + vol * np.asarray(dw)


def simulate_output(
    grid: TimeGrid,
    dw: np.ndarray,
    Lambda: np.ndarray,
    params: ModelParams,
    D0: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Euler path of the log output and the output level.

    Returns (Z, D_hat), each of length N + 1, with Z[0] = ln(D0).  All
    equilibrium quantities are scale-free in the output, so D0 only shifts
    the reported level.
    """
    if not (D0 > 0 and np.isfinite(D0)):
        raise ValueError("initial output level D0 must be positive and finite")
    steps = output_steps(grid, dw, Lambda, params)
    z0 = np.log(D0)
    Z = z0 + np.concatenate(([0.0], np.cumsum(steps)))
    return Z, np.exp(Z)


@dataclass
class PathBundle:
    """One simulated economy path on a uniform grid.

    Levels (w, Lambda, lambda_small, Z, D_hat) have length N + 1 and
    increments (dw) length N; w[0] = Lambda[0] = lambda_small[0] = 0.  With
    H = 1/2 both memory arrays are identically zero.
    """

    grid: TimeGrid
    seed: int
    dw: np.ndarray
    w: np.ndarray
    Lambda: np.ndarray
    lambda_small: np.ndarray
    Z: np.ndarray
    D_hat: np.ndarray


def simulate_bundle(
    grid: TimeGrid,
    params: ModelParams,
    seed: int,
    refine: int = 64,
    D0: float = 1.0,
) -> PathBundle:
    """Simulate Brownian noise, memory, and output on one grid.

    The Brownian path is drawn on a refine-fold finer grid; the memory
    processes are its quadrature sums at the coarse nodes and the coarse
    increments are the fine ones aggregated, so the bundle's Z follows the
    Euler output recursion driven by oracle-quality memory.  refine = 64
    keeps the quadrature error negligible at typical grid steps.
    """
    refine = int(refine)
    dw_fine = simulate_brownian(grid.refined(refine), seed)
    lam_big, lam_small = memory_exact(grid, dw_fine, params, refine=refine)
    dw = dw_fine.reshape(grid.N, refine).sum(axis=1) if refine > 1 else dw_fine
    w = np.concatenate(([0.0], np.cumsum(dw)))
    Z, D_hat = simulate_output(grid, dw, lam_big, params, D0=D0)
    return PathBundle(
        grid=grid,
        seed=int(seed),
        dw=dw,
        w=w,
        Lambda=lam_big,
        lambda_small=lam_small,
        Z=Z,
        D_hat=D_hat,
    )
