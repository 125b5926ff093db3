"""Equilibrium asset pricing with investor protection and path memory.

The package simulates an economy whose output is driven by an approximate
fractional Brownian motion, recovers the memory processes pathwise from
historical log-output data, and computes the full general-equilibrium price
dynamics (holdings, diversion, returns, volatilities, rates) with region
selection, a full-protection benchmark, and comparative-statics sweeps.
"""

from .equilibrium import (
    EquilibriumError,
    EquilibriumResult,
    MarketState,
    PartialPolicies,
    Prices,
    RegionCandidates,
    SweepRow,
    benchmark_differences,
    benchmark_equilibrium,
    boundary_equilibrium,
    derived_quantities,
    equilibrium,
    partial_policies,
    protection_binds,
    region_candidates,
    sweep,
    x_star,
)
from .estimator import (
    ConvergenceReport,
    EulerReference,
    MemoryEstimate,
    classify_memory,
    convergence_study,
    estimate_memory,
    euler_reference,
)
from .params import (
    BASE_PARAMS,
    AdjustmentFns,
    DerivedParams,
    ModelParams,
    ValidationReport,
    adjustment_eval,
    default_adjustment,
    derive_constants,
    exponential_adjustment,
    load_config,
    params_from_config,
    validate,
)
from .paths import (
    PathBundle,
    TimeGrid,
    approx_fbm,
    kernel_sums,
    memory_exact,
    output_steps,
    simulate_brownian,
    simulate_bundle,
    simulate_output,
)

__version__ = "0.1.0"

__all__ = [
    "BASE_PARAMS",
    "AdjustmentFns",
    "ConvergenceReport",
    "DerivedParams",
    "EquilibriumError",
    "EquilibriumResult",
    "EulerReference",
    "MarketState",
    "MemoryEstimate",
    "ModelParams",
    "PartialPolicies",
    "PathBundle",
    "Prices",
    "RegionCandidates",
    "SweepRow",
    "TimeGrid",
    "ValidationReport",
    "adjustment_eval",
    "approx_fbm",
    "benchmark_differences",
    "benchmark_equilibrium",
    "boundary_equilibrium",
    "classify_memory",
    "convergence_study",
    "default_adjustment",
    "derive_constants",
    "derived_quantities",
    "equilibrium",
    "estimate_memory",
    "euler_reference",
    "exponential_adjustment",
    "kernel_sums",
    "load_config",
    "memory_exact",
    "output_steps",
    "params_from_config",
    "partial_policies",
    "protection_binds",
    "region_candidates",
    "simulate_brownian",
    "simulate_bundle",
    "simulate_output",
    "sweep",
    "validate",
    "x_star",
]
