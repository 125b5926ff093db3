"""General-equilibrium asset-price dynamics with investor protection.

Given the sufficient statistics of one instant (consumption share y of the
minority shareholder and memory levels Lambda, lambda), the solver computes
interest rate, stock return and volatility, Sharpe ratio, consumption-share
dynamics, holdings and the diverted-output fraction, together with region
selection and existence detection.

The controlling shareholder's objective, after optimizing consumption and
diversion, is piecewise quadratic in the stock holding n_C with four
candidate optimizers:

    Region 1: interior optimum of the constraint-binding branch
              (x = (1 - p) n_C), a fixed point solved by bracketed bisection;
    Region 2: interior optimum of the cost-tempered branch (x = (1 - n_C)/k),
              in closed form;
    Region 3: the kink n_C = 1 / (1 + (1 - p) k);
    Region 4: full ownership n_C = 1.

A region is self-consistent when its own candidate maximizes the objective
evaluated under that region's prices; if no region passes, the equilibrium
does not exist and the four objective tables are returned as diagnostics.

Everything is scale-free in the output level: prices enter only through the
ratios D/S, D/W_C, S/W_C.  Bond positions need the time integral of the rate
along a path and are therefore not state functions; they are intentionally
not part of the single-state result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .params import (
    AdjustmentFns,
    ModelParams,
    adjustment_eval,
    default_adjustment,
    derive_constants,
)

__all__ = [
    "MarketState",
    "EquilibriumResult",
    "RegionCandidates",
    "Prices",
    "PartialPolicies",
    "SweepRow",
    "EquilibriumError",
    "x_star",
    "protection_binds",
    "region_candidates",
    "equilibrium",
    "benchmark_equilibrium",
    "boundary_equilibrium",
    "benchmark_differences",
    "derived_quantities",
    "partial_policies",
    "sweep",
]

#: Bisection interval tolerance for the Region-1 fixed point.
BISECT_TOL = 1e-12
#: Sign-scan resolution over [0, 1] for bracketing the fixed point.
SCAN_STEP = 1e-3


class EquilibriumError(RuntimeError):
    """A formula produced a non-finite value or an internal guarantee failed."""


@dataclass(frozen=True)
class MarketState:
    """Sufficient statistics at one instant: consumption share and memory."""

    y: float
    Lambda: float = 0.0
    lambda_small: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.y <= 1.0:
            raise ValueError(f"consumption share y must lie in [0, 1], got {self.y!r}")
        if not (math.isfinite(self.Lambda) and math.isfinite(self.lambda_small)):
            raise ValueError("memory levels must be finite")


def x_star(n_C: float, k: float, p: float) -> float:
    """Optimal diverted fraction min{(1 - n_C)/k, (1 - p) n_C}."""
    return min((1.0 - n_C) / k, (1.0 - p) * n_C)


def protection_binds(n_C: float, k: float, p: float) -> bool:
    """True when the protection cap (1 - p) n_C is the binding branch (Region 1)."""
    return (1.0 - p) * n_C <= (1.0 - n_C) / k


# ---------------------------------------------------------------------------
# State-level scalars shared by every formula


@dataclass(frozen=True)
class _Ctx:
    y: float
    Lam: float
    lam: float
    mu_D: float
    sigma_D: float
    H: float
    eps: float
    h: float
    k: float
    p: float
    l_C: float
    l_M: float
    net_l: float
    delta_C: float
    delta_M: float
    theta_C: float
    theta_M: float
    varphi: float
    r1: float
    r2: float
    qC: float  # consumption/wealth ratio of C: rho^(1/delta_C) varphi^theta_C
    qM: float
    C: float  # (1-y)/qC + y/qM, the wealth aggregator
    A: float  # sigma_D - (h/eps) r1 (theta_C (1-y) + theta_M y)
    D_S: float
    D_WC: float
    S_WC: float
    S_WM: float
    sqrt2H: float
    eph: float  # eps^h
    e2h: float  # eps^(2h)


def _context(state: MarketState, params: ModelParams, adjustment: AdjustmentFns) -> _Ctx:
    d = derive_constants(params)
    varphi, r1, r2 = adjustment_eval(adjustment, state.Lambda)
    y = state.y
    qC = params.rho ** (1.0 / d.delta_C) * varphi**d.theta_C
    qM = params.rho ** (1.0 / d.delta_M) * varphi**d.theta_M
    C = (1.0 - y) / qC + y / qM
    net_l = 1.0 - params.l_C - params.l_M
    eps = params.epsilon
    A = params.sigma_D - (d.h / eps) * r1 * (d.theta_C * (1.0 - y) + d.theta_M * y)
    return _Ctx(
        y=y,
        Lam=state.Lambda,
        lam=state.lambda_small,
        mu_D=params.mu_D,
        sigma_D=params.sigma_D,
        H=params.H,
        eps=eps,
        h=d.h,
        k=params.k,
        p=params.p,
        l_C=params.l_C,
        l_M=params.l_M,
        net_l=net_l,
        delta_C=d.delta_C,
        delta_M=d.delta_M,
        theta_C=d.theta_C,
        theta_M=d.theta_M,
        varphi=varphi,
        r1=r1,
        r2=r2,
        qC=qC,
        qM=qM,
        C=C,
        A=A,
        D_S=net_l / C,
        D_WC=net_l * qC / (1.0 - y) if y < 1.0 else math.inf,
        S_WC=C * qC / (1.0 - y) if y < 1.0 else math.inf,
        S_WM=C * qM / y if y > 0.0 else math.inf,
        sqrt2H=math.sqrt(2.0 * params.H),
        eph=eps**d.h,
        e2h=eps ** (2.0 * d.h),
    )


def _B(c: _Ctx, n: float) -> float:
    return n * c.qC + (1.0 - n) * c.qM


def _sigma(c: _Ctx, n_C: float) -> float:
    return c.A / (_B(c, n_C) * c.C)


def _kappa(c: _Ctx, n_C: float) -> float:
    return c.sqrt2H * c.eph * c.delta_M * c.qM * (1.0 - n_C) * c.A / (c.y * _B(c, n_C))


def _rate(c: _Ctx, n_C: float, x: float, kappa: float, sigma: float) -> float:
    t_kC = c.sqrt2H * c.eph * kappa + 2.0 * c.H * c.h * c.eps ** (2.0 * c.h - 1.0) * c.theta_C * c.r1
    t_kM = c.sqrt2H * c.eph * kappa + 2.0 * c.H * c.h * c.eps ** (2.0 * c.h - 1.0) * c.theta_M * c.r1
    wC = (1.0 - c.y) + c.y * (c.qC / c.qM)
    wM = c.y + (1.0 - c.y) * (c.qM / c.qC)
    hh = c.H * c.h * c.h * c.eps ** (2.0 * c.h - 2.0)
    consC = c.qC - c.theta_C * c.lam * c.r1 - hh * c.theta_C * ((c.theta_C - 1.0) * c.r1**2 + c.r2)
    consM = c.qM - c.theta_M * c.lam * c.r1 - hh * c.theta_M * ((c.theta_M - 1.0) * c.r1**2 + c.r2)
    cost = (x - 0.5 * c.k * x * x) * c.net_l * c.qC + 0.5 * c.k * x * x * c.net_l * c.qM
    return (
        c.mu_D
        + c.sigma_D * c.Lam
        - c.l_C * c.qC
        - c.l_M * c.qM
        - n_C * sigma * t_kC * wC
        - (1.0 - n_C) * sigma * t_kM * wM
        + (1.0 - c.y) * consC
        + c.y * consM
        - cost
    )


def _mu(c: _Ctx, r: float, sigma: float, kappa: float, x: float) -> float:
    return r - sigma * c.Lam + c.sqrt2H * c.eph * kappa * sigma - (1.0 - x) * c.D_S


def _sigma_y(c: _Ctx, kappa: float) -> float:
    return c.y * (kappa / (c.sqrt2H * c.eph * c.delta_M) + c.theta_M * (c.h / c.eps) * c.r1 - c.sigma_D)


def _mu_y(c: _Ctx, x: float, kappa: float, r: float, sigma_y: float) -> float:
    hh = c.H * c.h * c.h * c.eps ** (2.0 * c.h - 2.0)
    bracket = (
        r
        - c.mu_D
        - c.sigma_D * c.Lam
        + kappa**2 / c.delta_M
        + c.sqrt2H * c.h * c.eps ** (c.h - 1.0) * c.theta_M * c.r1 * kappa / c.delta_M
        - c.qM
        + c.theta_M * c.lam * c.r1
        + hh * c.theta_M * ((c.theta_M - 1.0) * c.r1**2 + c.r2)
    )
    return (
        -sigma_y * (c.Lam + 2.0 * c.H * c.e2h * c.sigma_D)
        + c.l_M * c.qM
        + 0.5 * c.k * x * x * c.net_l * c.qM
        + c.y * bracket
    )


def _J(c: _Ctx, n: float, x: float, r: float, mu: float, sigma: float) -> float:
    """Controlling shareholder's objective at holding n and diversion x."""
    return (
        n * c.S_WC * (mu - r + (1.0 - x) * c.D_S + sigma * c.Lam)
        + x * c.D_WC
        - 0.5 * c.k * x * x * c.D_WC
        - c.H * c.e2h * c.delta_C * (c.S_WC * sigma) ** 2 * n * n
    )


def _region_prices(c: _Ctx, n_C: float) -> tuple[float, float, float, float, float]:
    """(x, sigma, kappa, r, mu) under the prices generated by holding n_C."""
    x = x_star(n_C, c.k, c.p)
    sigma = _sigma(c, n_C)
    kappa = _kappa(c, n_C)
    r = _rate(c, n_C, x, kappa, sigma)
    mu = _mu(c, r, sigma, kappa, x)
    for name, v in (("sigma", sigma), ("kappa", kappa), ("r", r), ("mu", mu)):
        if not math.isfinite(v):
            raise EquilibriumError(
                f"{name} formula produced a non-finite value at y={c.y:g}, "
                f"Lambda={c.Lam:g}, n_C={n_C:g}"
            )
    return x, sigma, kappa, r, mu


# ---------------------------------------------------------------------------
# Candidate holdings


@dataclass
class RegionCandidates:
    """The four candidate holdings; n[0] is the objective-best fixed-point root."""

    n: tuple[float, float, float, float]
    available: tuple[bool, bool, bool, bool]
    n1_roots: list[float]


def _fixed_point_g(c: _Ctx, n2: float, n3: float):
    """The bracketing function g whose zeros are Region-1 candidates."""
    if c.A == 0.0:
        raise EquilibriumError(
            "volatility numerator sigma_D - (h/eps) (varphi'/varphi) "
            "(theta_C (1-y) + theta_M y) vanished; the fixed point is undefined"
        )
    G = (
        (1.0 - c.p)
        * c.net_l
        * c.y
        / (2.0 * c.H * c.e2h * c.delta_M * c.qM * c.A * c.A)
    )

    def g(n):
        B = n * c.qC + (1.0 - n) * c.qM
        return -n + n2 + n2 * (1.0 - n / n3) * G * B * B

    return g


def _bisect(g, a: float, b: float, ga: float, gb: float) -> float:
    """Plain bisection on a sign-change bracket down to BISECT_TOL width."""
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    while b - a > BISECT_TOL:
        m = 0.5 * (a + b)
        gm = g(m)
        if gm == 0.0:
            return m
        if (ga > 0) != (gm > 0):
            b, gb = m, gm
        else:
            a, ga = m, gm
    return 0.5 * (a + b)


def _n1_roots(c: _Ctx, n2: float, n3: float) -> list[float]:
    """All Region-1 fixed points in [0, 1] caught by sign scan + bisection."""
    if c.p == 1.0:
        # correction coefficient is identically zero: g(n) = n2 - n exactly
        return [n2]
    g = _fixed_point_g(c, n2, n3)
    grid = np.linspace(0.0, 1.0, int(round(1.0 / SCAN_STEP)) + 1)
    B = grid * c.qC + (1.0 - grid) * c.qM
    G = (1.0 - c.p) * c.net_l * c.y / (2.0 * c.H * c.e2h * c.delta_M * c.qM * c.A * c.A)
    vals = -grid + n2 + n2 * (1.0 - grid / n3) * G * B * B
    if not np.all(np.isfinite(vals)):
        raise EquilibriumError("fixed-point function g is non-finite on [0, 1]")
    if not (vals[0] >= 0.0 >= vals[-1]):
        raise EquilibriumError(
            f"bracket guarantee failed: g(0)={vals[0]:g}, g(1)={vals[-1]:g} "
            "(expected g(0) >= 0 >= g(1))"
        )
    roots: list[float] = []
    for i in range(len(grid) - 1):
        ga, gb = vals[i], vals[i + 1]
        if ga == 0.0:
            roots.append(grid[i])
        elif (ga > 0) != (gb > 0):
            roots.append(_bisect(g, grid[i], grid[i + 1], ga, gb))
    if vals[-1] == 0.0:
        roots.append(grid[-1])
    deduped: list[float] = []
    for rt in roots:
        if not deduped or rt - deduped[-1] > 1e-9:
            deduped.append(rt)
    if not deduped:
        raise EquilibriumError(
            "no sign change found on [0, 1] despite the bracket guarantee"
        )
    return deduped


def _candidates(c: _Ctx) -> RegionCandidates:
    aC = (1.0 - c.y) / (c.delta_C * c.qC)
    aM = c.y / (c.delta_M * c.qM)
    n2 = aC / (aC + aM)
    n3 = 1.0 / (1.0 + (1.0 - c.p) * c.k)
    roots = _n1_roots(c, n2, n3)
    if len(roots) == 1:
        n1 = roots[0]
    else:
        # keep the objective-maximizing root under its own Region-1 prices
        best, best_J = roots[0], -math.inf
        for rt in roots:
            x, sig, kap, r, mu = _region_prices(c, rt)
            val = _J(c, rt, x, r, mu, sig)
            if val > best_J:
                best, best_J = rt, val
        n1 = best
    n = (n1, n2, n3, 1.0)
    avail = tuple(math.isfinite(v) and 0.0 <= v <= 1.0 for v in n)
    return RegionCandidates(n=n, available=avail, n1_roots=roots)


def region_candidates(
    state: MarketState, params: ModelParams, adjustment: AdjustmentFns | None = None
) -> RegionCandidates:
    """The four candidate holdings at one state (y strictly interior).

    The Region-1 candidate solves the fixed-point equation by a sign scan at
    resolution 1e-3 plus bisection to interval width 1e-12 on every bracket;
    existence of a root in [0, 1] is guaranteed (g(0) >= 0 >= g(1), asserted)
    but uniqueness is not, so all bracketed roots are retained and the
    objective-best one is reported first.
    """
    if not 0.0 < state.y < 1.0:
        raise ValueError("region candidates require y strictly inside (0, 1)")
    adj = adjustment or default_adjustment(params)
    return _candidates(_context(state, params, adj))


# ---------------------------------------------------------------------------
# Equilibrium results


@dataclass
class EquilibriumResult:
    """Every equilibrium quantity at one state, plus region and existence.

    For a nonexistent equilibrium the price fields are NaN and ``J_tables``
    holds, for each tested region, the objective value of all four
    candidates under that region's prices.  ``region`` is 1-4 for interior
    solves, "boundary" at y in {0, 1}, and "nonexistent" otherwise.
    """

    state: MarketState
    p: float
    region: int | str
    exists: bool
    n_C: float
    n_M: float
    x_star: float
    r: float
    mu: float
    sigma: float
    kappa: float
    mu_y: float
    sigma_y: float
    D_over_S: float
    D_over_WC: float
    S_over_WC: float
    c_coeff_C: float
    c_coeff_M: float
    mu_H: float = math.nan
    sigma_H: float = math.nan
    mu_G: float = math.nan
    J_tables: dict[int, tuple[float, float, float, float]] | None = None
    candidates: tuple[float, float, float, float] | None = None


def derived_quantities(eq: EquilibriumResult, params: ModelParams) -> tuple[float, float, float]:
    """Fill and return the modified return/volatility and the gross return.

    mu_H = mu + sigma Lambda absorbs the memory drift, sigma_H =
    sqrt(2H) eps^h sigma is the volatility actually carried by the Brownian
    shock, and mu_G = mu_H + (1 - x*) D/S adds back the undiverted dividend
    yield.
    """
    h = params.H - 0.5
    eq.mu_H = eq.mu + eq.sigma * eq.state.Lambda
    eq.sigma_H = math.sqrt(2.0 * params.H) * params.epsilon**h * eq.sigma
    eq.mu_G = eq.mu_H + (1.0 - eq.x_star) * eq.D_over_S
    return eq.mu_H, eq.sigma_H, eq.mu_G


def _result_from_prices(
    c: _Ctx,
    params: ModelParams,
    region: int | str,
    n_C: float,
    x: float,
    sigma: float,
    kappa: float,
    r: float,
    mu: float,
    sigma_y: float | None = None,
    J_tables=None,
    candidates=None,
) -> EquilibriumResult:
    sy = _sigma_y(c, kappa) if sigma_y is None else sigma_y
    my = _mu_y(c, x, kappa, r, sy)
    eq = EquilibriumResult(
        state=MarketState(c.y, c.Lam, c.lam),
        p=c.p,
        region=region,
        exists=True,
        n_C=n_C,
        n_M=1.0 - n_C,
        x_star=x,
        r=r,
        mu=mu,
        sigma=sigma,
        kappa=kappa,
        mu_y=my,
        sigma_y=sy,
        D_over_S=c.D_S,
        D_over_WC=c.D_WC,
        S_over_WC=c.S_WC,
        c_coeff_C=c.qC,
        c_coeff_M=c.qM,
        J_tables=J_tables,
        candidates=candidates,
    )
    derived_quantities(eq, params)
    return eq


def equilibrium(
    state: MarketState, params: ModelParams, adjustment: AdjustmentFns | None = None
) -> EquilibriumResult:
    """Full equilibrium at one state, with region selection.

    Each region j in {1, 2, 3, 4} is tested by recomputing prices under its
    candidate holding and evaluating the objective at all four candidates
    under those prices (every candidate pays its own optimal diversion);
    region j is self-consistent when its candidate attains the maximum.  The
    lowest self-consistent region index is returned; at p = 1 a Region-1
    selection coincides with Region 2 (the fixed point degenerates to the
    closed form exactly) and is labeled 2, matching the benchmark economy.
    If no region is self-consistent the result carries exists=False and the
    objective tables of all four regions.

    Boundary states y in {0, 1} are routed to :func:`boundary_equilibrium`.
    """
    if not 0.0 <= params.p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if state.y in (0.0, 1.0):
        return boundary_equilibrium(state, params, adjustment=adjustment)
    adj = adjustment or default_adjustment(params)
    c = _context(state, params, adj)
    cands = _candidates(c)

    J_tables: dict[int, tuple[float, float, float, float]] = {}
    priced: dict[int, tuple[float, float, float, float, float]] = {}
    self_consistent: list[int] = []
    for j in range(1, 5):
        if not cands.available[j - 1]:
            continue
        prices = _region_prices(c, cands.n[j - 1])
        priced[j] = prices
        _, sig_j, _, r_j, mu_j = prices
        table = tuple(
            _J(c, cands.n[i], x_star(cands.n[i], c.k, c.p), r_j, mu_j, sig_j)
            if cands.available[i]
            else math.nan
            for i in range(4)
        )
        J_tables[j] = table
        finite = [v for v in table if math.isfinite(v)]
        if finite and table[j - 1] >= max(finite):
            self_consistent.append(j)

    if not self_consistent:
        nan = math.nan
        return EquilibriumResult(
            state=state,
            p=params.p,
            region="nonexistent",
            exists=False,
            n_C=nan,
            n_M=nan,
            x_star=nan,
            r=nan,
            mu=nan,
            sigma=nan,
            kappa=nan,
            mu_y=nan,
            sigma_y=nan,
            D_over_S=c.D_S,
            D_over_WC=c.D_WC,
            S_over_WC=c.S_WC,
            c_coeff_C=c.qC,
            c_coeff_M=c.qM,
            J_tables=J_tables,
            candidates=cands.n,
        )

    j = self_consistent[0]
    n_C = cands.n[j - 1]
    x, sigma, kappa, r, mu = priced[j]
    region: int = j
    if j == 1 and params.p == 1.0:
        region = 2  # constraint vacuous: Regions 1 and 2 coincide with the benchmark
    return _result_from_prices(
        c, params, region, n_C, x, sigma, kappa, r, mu, J_tables=J_tables, candidates=cands.n
    )


def benchmark_equilibrium(
    state: MarketState, params: ModelParams, adjustment: AdjustmentFns | None = None
) -> EquilibriumResult:
    """The full-protection benchmark economy (p = 1, zero diversion).

    Direct construction from the closed-form holding, labeled Region 2; the
    general solver at p = 1 must agree with it field by field.
    """
    if not 0.0 < state.y < 1.0:
        raise ValueError("benchmark equilibrium requires y strictly inside (0, 1)")
    adj = adjustment or default_adjustment(params)
    c = _context(state, replace(params, p=1.0), adj)
    aC = (1.0 - c.y) / (c.delta_C * c.qC)
    aM = c.y / (c.delta_M * c.qM)
    n_B = aC / (aC + aM)
    x = 0.0
    sigma = _sigma(c, n_B)
    kappa = _kappa(c, n_B)
    r = _rate(c, n_B, x, kappa, sigma)
    mu = _mu(c, r, sigma, kappa, x)
    return _result_from_prices(c, params, 2, n_B, x, sigma, kappa, r, mu)


def boundary_equilibrium(
    state: MarketState,
    params: ModelParams,
    branch_hint: int | None = None,
    adjustment: AdjustmentFns | None = None,
) -> EquilibriumResult:
    """Explicit equilibrium limits at y = 0 (n_C = 1) and y = 1 (n_C = 0).

    At y = 0 with p < 1 the Sharpe ratio is two-valued: the protected branch
    kappa = sqrt(2H) eps^h delta_C sigma(0) applies when the interior
    equilibrium near 0 sits in Regions 1-3, and kappa = 0 when it sits in
    Region 4.  ``branch_hint`` picks the branch directly (2 or 4); by default
    the interior equilibrium at y = 1e-4 is solved and its region inherited.
    """
    if state.y not in (0.0, 1.0):
        raise ValueError("boundary equilibrium requires y exactly 0 or 1")
    if branch_hint is not None and branch_hint not in (1, 2, 3, 4):
        raise ValueError(f"branch_hint must be a region in 1..4, got {branch_hint!r}")
    adj = adjustment or default_adjustment(params)
    c = _context(state, params, adj)

    if state.y == 0.0:
        n_C = 1.0
        sigma = params.sigma_D - (c.h / c.eps) * c.r1 * c.theta_C
        if params.p == 1.0:
            zero_branch = False
        else:
            if branch_hint is None:
                probe = equilibrium(
                    MarketState(1e-4, state.Lambda, state.lambda_small), params, adj
                )
                if not probe.exists:
                    raise EquilibriumError(
                        "cannot infer the y=0 branch: no interior equilibrium at y=1e-4"
                    )
                branch = probe.region
            else:
                branch = branch_hint
            zero_branch = branch == 4
        kappa = 0.0 if zero_branch else c.sqrt2H * c.eph * c.delta_C * sigma
    else:
        n_C = 0.0
        sigma = params.sigma_D - (c.h / c.eps) * c.r1 * c.theta_M
        kappa = c.sqrt2H * c.eph * c.delta_M * sigma

    x = 0.0
    r = _rate(c, n_C, x, kappa, sigma)
    mu = _mu(c, r, sigma, kappa, x)
    return _result_from_prices(
        c, params, "boundary", n_C, x, sigma, kappa, r, mu, sigma_y=0.0
    )


def benchmark_differences(
    state: MarketState,
    params: ModelParams,
    eq: EquilibriumResult,
    bench: EquilibriumResult,
    adjustment: AdjustmentFns | None = None,
) -> tuple[float, float, float]:
    """Closed-form (sigma, kappa, sigma_y) gaps to the benchmark economy.

    All three are proportional to the excess ownership concentration
    n_C - n_C^B; they are a cross-check of the two independent solves, not a
    third solver.  Region-2 states give exactly zero.
    """
    adj = adjustment or default_adjustment(params)
    c = _context(state, params, adj)
    dn = eq.n_C - bench.n_C
    B_eq = _B(c, eq.n_C)
    mix = (1.0 - c.y) / c.delta_C + c.y / c.delta_M
    d_sigma = bench.sigma * (c.qM - c.qC) * dn / B_eq
    d_kappa = -c.sqrt2H * c.eph * c.qC * c.A * dn / (mix * B_eq * bench.n_M)
    d_sigma_y = -c.y * c.qC * c.A * dn / (c.delta_M * mix * B_eq * bench.n_M)
    return d_sigma, d_kappa, d_sigma_y


# ---------------------------------------------------------------------------
# Partial equilibrium: optimal policies at externally given prices


@dataclass(frozen=True)
class Prices:
    """Externally given price system for the partial-equilibrium policies."""

    r: float
    mu: float
    sigma: float
    D_over_S: float
    D_over_WC: float
    S_over_WC: float
    S_over_WM: float


@dataclass
class PartialPolicies:
    """Optimal consumption coefficients, candidate holdings, and diversion."""

    c_coeff_C: float
    c_coeff_M: float
    n_C_candidates: tuple[float, float, float, float]
    available: tuple[bool, bool, bool, bool]
    J_values: tuple[float, float, float, float]
    n_C: float
    n_M: float
    x_star: float


def partial_policies(
    prices: Prices,
    state: MarketState,
    params: ModelParams,
    adjustment: AdjustmentFns | None = None,
) -> PartialPolicies:
    """Optimal policies when (r, mu, sigma) and the ratios are handed in.

    The four candidates come from the price-based first-order conditions; a
    candidate with a vanishing denominator or outside [0, 1] is flagged
    unavailable and excluded from the maximization (its raw value is still
    reported).  The chosen holding maximizes the objective, each candidate
    evaluated with its own optimal diversion.

    Raises:
        ValueError: if sigma is zero or a ratio is not positive.
    """
    if prices.sigma == 0.0:
        raise ValueError("partial policies need sigma != 0")
    if min(prices.D_over_S, prices.D_over_WC, prices.S_over_WC, prices.S_over_WM) <= 0.0:
        raise ValueError("price ratios must be positive")
    adj = adjustment or default_adjustment(params)
    c = _context(state, params, adj)
    # the objective uses the handed ratios, not the state-implied ones
    c = replace(
        c, D_S=prices.D_over_S, D_WC=prices.D_over_WC, S_WC=prices.S_over_WC, S_WM=prices.S_over_WM
    )

    excess = prices.mu - prices.r + prices.sigma * c.Lam
    den0 = 2.0 * c.H * c.e2h * c.delta_C * c.S_WC * prices.sigma**2
    den1 = den0 + (2.0 * (1.0 - c.p) + c.k * (1.0 - c.p) ** 2) * c.D_S
    den2 = den0 - c.D_S / c.k
    n1 = (excess + (2.0 - c.p) * c.D_S) / den1 if den1 != 0.0 else math.nan
    n2 = (excess + (1.0 - 1.0 / c.k) * c.D_S) / den2 if den2 != 0.0 else math.nan
    n3 = 1.0 / (1.0 + (1.0 - c.p) * c.k)
    cands = (n1, n2, n3, 1.0)
    avail = tuple(math.isfinite(v) and 0.0 <= v <= 1.0 for v in cands)
    J_vals = tuple(
        _J(c, cands[i], x_star(cands[i], c.k, c.p), prices.r, prices.mu, prices.sigma)
        if avail[i]
        else math.nan
        for i in range(4)
    )
    if not any(avail):
        raise EquilibriumError("no candidate holding is available at the given prices")
    best = max((i for i in range(4) if avail[i]), key=lambda i: J_vals[i])
    n_C = cands[best]
    x = x_star(n_C, c.k, c.p)
    n_M = (excess + (1.0 - x) * c.D_S) / (2.0 * c.H * c.e2h * c.delta_M * c.S_WM * prices.sigma**2)
    return PartialPolicies(
        c_coeff_C=c.qC,
        c_coeff_M=c.qM,
        n_C_candidates=cands,
        available=avail,
        J_values=J_vals,
        n_C=n_C,
        n_M=n_M,
        x_star=x,
    )


# ---------------------------------------------------------------------------
# Comparative-statics sweeps


@dataclass
class SweepRow:
    """One grid point of a sweep; ``error`` is set when the solve failed."""

    y: float
    p: float
    Lambda: float
    result: EquilibriumResult | None
    error: str | None = None


def sweep(
    params: ModelParams,
    y_values,
    p_values,
    Lambda_values,
    lam: float = 0.0,
    adjustment: AdjustmentFns | None = None,
) -> list[SweepRow]:
    """Cross-product sweep over (y, p, Lambda) with per-row failure capture.

    Rows are emitted in deterministic order: y outermost, then p, then
    Lambda.  The small memory level is held fixed (default 0).
    """
    adj = adjustment or default_adjustment(params)
    rows: list[SweepRow] = []
    for y in y_values:
        for p in p_values:
            for L in Lambda_values:
                pp = replace(params, p=float(p))
                try:
                    res = equilibrium(MarketState(float(y), float(L), lam), pp, adj)
                    rows.append(SweepRow(float(y), float(p), float(L), res))
                except (EquilibriumError, ValueError) as exc:
                    rows.append(SweepRow(float(y), float(p), float(L), None, error=str(exc)))
    return rows
