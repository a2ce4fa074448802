"""Isomonodromic deformation of the generalized Lame equation on a torus.

Numerical library and CLI covering: the elliptic kernel (theta series,
Weierstrass functions, lattice invariants), the second-order Lame-type
potential with an extra apparent singularity, the Hamiltonian deformation
flow in tau, exact seed solutions and their monodromy, the correspondence
with Fuchsian systems on the projective line, and the collapse limit where
the apparent singularity hits a half period.
"""
from . import errors
from .elliptic import (
    CurveMap,
    LatticeData,
    LatticePoint,
    OracleSums,
    TauDerivatives,
    WeierstrassValues,
    canonical_representative,
    curve_map,
    curve_map_point,
    dedekind_eta,
    invert_wp,
    lattice_distance,
    lattice_invariants,
    oracle_lattice_sums,
    oracle_lattice_sums_extrapolated,
    reduce_to_cell,
    tau_derivative_suite,
    theta1,
    weierstrass_suite,
    wp,
    wp_prime,
    wsigma,
    wzeta,
)
from .lame import (
    LameParams,
    apparent_B,
    deformation_coeffs,
    hamiltonian_K,
    integrability_residual,
    potential_I,
)
from .flow import (
    FlowState,
    Trajectory,
    a_from_p_dot,
    alphas_from_n,
    elliptic_pvi_residual,
    f_log_derivative_residual,
    integrate_cp1,
    integrate_flow,
    integrate_kawai,
    integrate_manin,
)
from .hitchin import (
    HitchinSeed,
    constraint_residual,
    hitchin_lame_data,
    hitchin_p,
    hitchin_trajectory,
    expected_traces,
)
from .monodromy import (
    MonodromyRep,
    isomonodromy_drift,
    monodromy_rep,
    singular_points,
    standard_loops,
)
from .correspondence import (
    FuchsianParams,
    fuchsian_K,
    fuchsian_coefficients,
    fuchsian_to_lame,
    gauge_transport,
    lame_to_fuchsian,
    riemann_scheme,
    torus_q,
)
from .collapse import (
    CollapseData,
    collapse_constants,
    collapse_seed_state,
    fit_a_series,
    fit_collapse,
    limit_potential,
    limit_potential_residual,
)
from .verify import SUITES, run_suite

__version__ = "0.1.0"

__all__ = [
    "errors",
    "CurveMap",
    "LatticeData",
    "LatticePoint",
    "OracleSums",
    "TauDerivatives",
    "WeierstrassValues",
    "canonical_representative",
    "curve_map",
    "curve_map_point",
    "dedekind_eta",
    "invert_wp",
    "lattice_distance",
    "lattice_invariants",
    "oracle_lattice_sums",
    "oracle_lattice_sums_extrapolated",
    "reduce_to_cell",
    "tau_derivative_suite",
    "theta1",
    "weierstrass_suite",
    "wp",
    "wp_prime",
    "wsigma",
    "wzeta",
    "LameParams",
    "apparent_B",
    "deformation_coeffs",
    "hamiltonian_K",
    "integrability_residual",
    "potential_I",
    "FlowState",
    "Trajectory",
    "a_from_p_dot",
    "alphas_from_n",
    "elliptic_pvi_residual",
    "f_log_derivative_residual",
    "integrate_cp1",
    "integrate_flow",
    "integrate_kawai",
    "integrate_manin",
    "HitchinSeed",
    "constraint_residual",
    "hitchin_lame_data",
    "hitchin_p",
    "hitchin_trajectory",
    "expected_traces",
    "MonodromyRep",
    "isomonodromy_drift",
    "monodromy_rep",
    "singular_points",
    "standard_loops",
    "FuchsianParams",
    "fuchsian_K",
    "fuchsian_coefficients",
    "fuchsian_to_lame",
    "gauge_transport",
    "lame_to_fuchsian",
    "riemann_scheme",
    "torus_q",
    "CollapseData",
    "collapse_constants",
    "collapse_seed_state",
    "fit_a_series",
    "fit_collapse",
    "limit_potential",
    "limit_potential_residual",
    "SUITES",
    "run_suite",
    "__version__",
]
