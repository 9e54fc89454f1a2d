/*
 * The Walsh-quantized baker map B_k on (C^D)^{⊗k}.
 *
 * One forward step cycles the qudit axes (axis 1 to the back) and applies F_D*
 * on the new last axis:
 *     B_k (v⁽¹⁾⊗v⁽²⁾⊗…⊗v⁽ᵏ⁾) = v⁽²⁾⊗…⊗v⁽ᵏ⁾⊗F_D* v⁽¹⁾,
 * equivalently B_k = W* (I_D ⊗ W_{k-1}) in terms of Walsh transforms.
 *
 * Finite order: (B_k)^k = (F*)^{⊗k}, so (B_k)^{2k} = (F*²)^{⊗k} = Π^{⊗k} with
 * Π the digit parity e_ε ↦ e_{(D−ε) mod D}.  Hence the quantum period is
 * M = 2k for D = 2 (Π = I) and M = 4k for D ≥ 3.  All D^k eigenphases are
 * M-th roots of unity θ_r = 2πr/M, and the spectral projector at phase r is
 * the exact power average (1/M)·Σ_m e^{-2πi r m/M} (B_k)^m.
 */
#pragma once

#include <optional>
#include <vector>

#include "walshbaker/hilbert.hpp"
#include "walshbaker/tolerances.hpp"

namespace walshbaker::baker {

using hilbert::CoherentIndex;
using hilbert::RegisterShape;
using hilbert::StateVector;

struct BakerOperator {
    RegisterShape shape;
};

// B_k^power · psi; power is reduced modulo the quantum period.
StateVector apply_baker(const StateVector& psi, long long power = 1);

int quantum_period(int D, int k);

struct EigenSpace {
    int r = 0;          // phase index in [0, M)
    double theta = 0.0;  // 2πr/M
    std::vector<StateVector> basis;  // orthonormal, d_r = basis.size()
};

struct EigenDecomposition {
    RegisterShape shape;
    int M = 0;
    std::vector<EigenSpace> spaces;  // one per r, in phase-index order
};

// Full eigenbasis by power-averaged spectral projectors applied to the
// position basis, orthonormalized with singular-value cut 1e-8.
EigenDecomposition spectral_decompose(RegisterShape shape,
                                      std::size_t dense_cap = tol::dense_cap_spectral);

// w^{⊗k} for an eigenvector w of F_D* (checked); exact B_k-eigenstate.
StateVector tensor_eigenstate(const std::vector<Cx>& w, int k);

struct FourierEigenspace {
    Cx lambda;  // one of 1, i, −1, −i
    std::vector<std::vector<Cx>> vectors;  // orthonormal; may be empty
};

// Eigenspaces of F_D* for λ ∈ {1, i, −1, −i} via power averaging of the
// order-4 operator; multiplicities sum to D.
std::vector<FourierEigenspace> fourier_eigenvectors(int D);

// (1/√2)(e₀⊗e₊⊗…⊗e₀ + e₊⊗e₀⊗…⊗e₊) at D = 2, k odd; an exact fixed
// vector of B_k, deliberately not renormalized (its norm tends to 1).
StateVector example3_state(int k);

// Normalized projection of the coherent state at idx onto the θ_r
// eigenspace; empty when the projection norm falls below the rank cut.
std::optional<StateVector> scarred_state(RegisterShape shape, int r,
                                         const CoherentIndex& idx);

// Default seed rectangle: ℓ = ⌊k/2⌋, all-zeros words (the fixed point).
std::optional<StateVector> scarred_state(RegisterShape shape, int r);

}  // namespace walshbaker::baker
