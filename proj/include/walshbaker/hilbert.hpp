/*
 * Quantum kinematics on the qudit register H = (C^D)^{⊗k} of dimension D^k.
 *
 * Index convention (inherited by every other module): the basis index
 * j = Σ ε_i D^{k-i} is the big-endian reading of the digit string ε₁…ε_k, so
 * axis 1 (the first tensor factor) carries the most significant digit and the
 * position eigenstate q_j is e_{ε₁}⊗…⊗e_{ε_k} at q_j = j/D^k.
 *
 * Transforms:
 *   F_D        (j,m) ↦ e^{-2πi jm/D}/√D         (forward kernel)
 *   Walsh  W   reverse the qudit axes, then F_D on every axis; the momentum
 *              basis is p_l = W* q_l = F*e_{ε′_k}⊗…⊗F*e_{ε′₁}.
 *   coherent   |ε′·ε⟩ = e_{ε₁}⊗…⊗e_{ε_ℓ}⊗F*e_{ε′_{k−ℓ}}⊗…⊗F*e_{ε′₁},
 *              strictly localized: its q_j component has modulus D^{-(k-ℓ)/2}
 *              exactly when the first ℓ digits of j equal ε, else 0.
 *
 * All public operations are axis-wise, O(D^k·D) per axis; dense matrices are
 * reserved for small-shape oracles and the eigensolver.
 */
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "walshbaker/common.hpp"
#include "walshbaker/symbolic.hpp"

namespace walshbaker::hilbert {

using symbolic::Word;

struct RegisterShape {
    int D = 2;
    int k = 1;
    std::size_t dimension() const;
    bool operator==(const RegisterShape&) const = default;
};

// Validated constructor: D ≥ 2, k ≥ 1, D^k within the dense/kernel budget.
RegisterShape make_shape(int D, int k);

struct StateVector {
    RegisterShape shape;
    std::vector<Cx> amps;  // length D^k, index j as above
};

StateVector zero_state(RegisterShape shape);
StateVector basis_state(RegisterShape shape, std::size_t j);
double norm(const StateVector& psi);
void normalize(StateVector& psi);

// Unit-norm state with iid complex-Gaussian amplitudes from the given seed.
StateVector random_state(RegisterShape shape, std::uint64_t seed);

// Digit ε_i (1-based) of index j under the shape's big-endian convention.
int digit_at(std::size_t j, int i, RegisterShape shape);

// The integer Σ ε_i D^{n-i} read from a word (big-endian).
long long word_number(const Word& w, int D);

// One quantum rectangle of the ℓ-basis: |eps| = ell, |eps_prime| = k − ell.
struct CoherentIndex {
    int ell = 0;
    Word eps;
    Word eps_prime;
};

void check_coherent_index(const CoherentIndex& idx, RegisterShape shape);

// Lexicographic (ε, ε′) position of the rectangle among the D^k of its basis.
std::size_t coherent_ordinal(const CoherentIndex& idx, RegisterShape shape);
CoherentIndex coherent_from_ordinal(RegisterShape shape, int ell, std::size_t ordinal);

// ── Transforms ───────────────────────────────────────────────────────────────

Eigen::MatrixXcd dft_matrix(int D);

// F_D (forward) or F_D* (inverse) on one tensor factor, axis ∈ [1,k].
StateVector apply_dft_axis(const StateVector& psi, int axis, Direction dir);

// The Walsh transform W (forward) or W* (inverse).
StateVector walsh_transform(const StateVector& psi, Direction dir);

// ── States ───────────────────────────────────────────────────────────────────

StateVector tensor_state(int D, const std::vector<std::vector<Cx>>& factors);
StateVector coherent_state(RegisterShape shape, const CoherentIndex& idx);

// ⟨a|b⟩, conjugate-linear in the first argument.
Cx overlap(const StateVector& a, const StateVector& b);

}  // namespace walshbaker::hilbert
