#!/usr/bin/env python3
"""A tour of the single-state equilibrium solver.

One state is (y, Lambda, lambda): the minority consumption share plus the
two memory levels.  The solver picks the self-consistent region of the
controlling shareholder's piecewise objective, returns every price, and
detects states where no region is self-consistent.
"""

from fbmecon import (
    BASE_PARAMS,
    MarketState,
    ModelParams,
    benchmark_differences,
    benchmark_equilibrium,
    boundary_equilibrium,
    equilibrium,
)


def show(res, label):
    print(f"--- {label}")
    if not res.exists:
        print("    no self-consistent region (equilibrium does not exist)")
        for j, tab in sorted(res.J_tables.items()):
            print(f"    J under region-{j} prices:",
                  ", ".join(f"{v:+.6f}" for v in tab))
        return
    print(f"    region {res.region}: n_C = {res.n_C:.4f}, x* = {res.x_star:.4f}")
    print(f"    r = {res.r:+.4f}, mu = {res.mu:+.4f}, sigma = {res.sigma:.4f}, "
          f"kappa = {res.kappa:.4f}")
    print(f"    modified: mu_H = {res.mu_H:+.4f}, sigma_H = {res.sigma_H:.4f}; "
          f"gross mu_G = {res.mu_G:+.4f}")


# interior state with imperfect protection: cost-tempered region
show(equilibrium(MarketState(0.5), BASE_PARAMS), "y = 0.5, p = 0.6, no memory")

# high consumption share: the protection constraint binds (Region 1)
show(equilibrium(MarketState(0.9), BASE_PARAMS), "y = 0.9, p = 0.6, no memory")

# good memory at the same state
show(equilibrium(MarketState(0.9, 5.0), BASE_PARAMS), "y = 0.9, p = 0.6, Lambda = +5")

# the full-protection benchmark and the closed-form gaps to it
state = MarketState(0.9)
eq = equilibrium(state, BASE_PARAMS)
bench = benchmark_equilibrium(state, BASE_PARAMS)
ds, dk, dsy = benchmark_differences(state, BASE_PARAMS, eq, bench)
show(bench, "benchmark (p = 1) at y = 0.9")
print(f"    closed-form gaps: sigma {ds:+.5f}, kappa {dk:+.5f}, sigma_y {dsy:+.5f}")
print(f"    direct gaps:      sigma {eq.sigma - bench.sigma:+.5f}, "
      f"kappa {eq.kappa - bench.kappa:+.5f}, sigma_y {eq.sigma_y - bench.sigma_y:+.5f}")

# boundary states
show(boundary_equilibrium(MarketState(0.0), BASE_PARAMS), "boundary y = 0")
show(boundary_equilibrium(MarketState(1.0), BASE_PARAMS), "boundary y = 1")

# a calibration with no equilibrium: full ownership beats every interior
# candidate under interior prices, and conversely under full-ownership prices
no_eq = ModelParams(
    mu_D=0.015, sigma_D=0.01, H=0.5, epsilon=0.1, gamma_C=3.0, gamma_M=3.0,
    alpha_C=1.0, alpha_M=1.0, rho=0.01, k=2.0, p=0.5, l_C=0.0, l_M=0.0, beta1=0.1,
)
show(equilibrium(MarketState(0.5), no_eq), "a non-existence calibration")
