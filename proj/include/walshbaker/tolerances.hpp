/*
 * Every numerical tolerance used anywhere in the laboratory, pinned in one
 * place.  Verification code and the acceptance suite must reference these
 * constants, never ad-hoc literals, so that the metadata files can list the
 * exact values a run was judged against.
 */
#pragma once

#include <cstddef>

namespace walshbaker::tol {

// Kinematics and dynamics
inline constexpr double unitarity       = 1e-12;  // norm preservation, random states
inline constexpr double exact_period    = 1e-10;  // ‖B^M ψ − ψ‖
inline constexpr double parity_dense    = 1e-10;  // B^{2k} vs parity tensor, dense
inline constexpr double oracle_dense    = 1e-12;  // kernel vs dense-matrix oracles

// Spectral decomposition
inline constexpr double eigen_residual  = 1e-9;   // ‖Bψ − e^{iθ}ψ‖ per basis vector
inline constexpr double reconstruction  = 1e-9;   // Σ e^{iθ_r} Proj_r = B, dense
inline constexpr double cross_overlap   = 1e-10;  // between distinct eigenspaces
inline constexpr double rank_threshold  = 1e-8;   // singular-value cut in projector ranges
inline constexpr double eigenvector_pre = 1e-10;  // residual allowed when an eigenvector is required
inline constexpr double husimi_dynamics = 1e-12;  // shift reindexing of eigenstate Husimi weights
inline constexpr double unitary_pre     = 1e-10;  // entry test admitting a matrix as unitary
inline constexpr double mirror_symmetry = 1e-10;  // |ψ_j| = |ψ_{j̄}| for eigenstates

// Entropy statements
inline constexpr double entropy_bound   = 1e-9;   // h ≥ (k/2)·log D slack
inline constexpr double wehrl_equality  = 1e-9;   // Wehrl(ℓ) vs Shannon, eigenstates
inline constexpr double refined_bound   = 1e-9;   // h_n ≥ (n/2)·log D slack
inline constexpr double invariance      = 1e-10;  // cylinder-mass invariance in l
inline constexpr double mass_total      = 1e-10;  // Husimi weights sum to 1

// Projectors and operator bounds
inline constexpr double projector_norm  = 1e-10;  // ‖P_ε‖ vs D^{-max(0,n−k)/2}
inline constexpr double egorov_exact    = 1e-12;  // defect of the exact identity
inline constexpr double bound_slack     = 1e-9;   // permitted overshoot of norm bounds
inline constexpr double homoclinic      = 1e-12;  // the rectangle-projector identity
inline constexpr double block_constant  = 1e-10;  // c_n((B_k)^k) vs D^{-n/2}

// Eigenstate families
inline constexpr double family_residual = 1e-12;  // explicit eigenstates
inline constexpr double husimi_product  = 1e-12;  // tensor-state weight factorization
inline constexpr double tv_product      = 1e-12;  // TV distance to the product measure
inline constexpr double tensor_shannon  = 1e-10;  // Shannon = k·log 2 for the D=4 state

// Uncertainty principles and statistics
inline constexpr double eup_slack       = 1e-9;   // inequality violation / saturation
inline constexpr double qe_mean         = 1e-10;  // eigenbasis mean vs ∫f
inline constexpr double moment_limit    = 1e-3;   // r→0 moment vs e^{-h}, relative

// Numerical policy
inline constexpr int         power_iterations = 200;    // fixed cap
inline constexpr double      power_tol        = 1e-12;  // relative convergence
inline constexpr std::size_t dense_cap_spectral = 8192; // spectral_decompose
inline constexpr std::size_t dense_cap_norms    = 4096; // dense operator norms
inline constexpr std::size_t dense_cap_refined  = 1024; // materialized refined projectors

}  // namespace walshbaker::tol
