/*
 * The quantum partition of unity and its refinements under the baker
 * dynamics.
 *
 * Digit projectors π_d act on the first qudit; their baker evolutions
 * P_ε(l) = B^{-l} P_ε B^l compose into the refined projector of a word,
 *     P_ε = P_{εₙ}(n−1) ∘ … ∘ P_{ε₂}(1) ∘ P_{ε₁}
 *         = B^{-(n−1)} ∘ π_{εₙ} B π_{εₙ₋₁} B ⋯ B π_{ε₁},
 * which for n ≤ k collapses to the tensor projector π_{ε₁}⊗…⊗π_{εₙ}⊗I and
 * beyond the Ehrenfest time (n > k) becomes a strict contraction of norm
 * exactly D^{-(n-k)/2}.
 *
 * Weights ‖P_εψ‖² over Σ_n define the refined measures, their entropies, and
 * the cover machinery; rectangle projectors at matched depths give the
 * homoclinic product identity checked in homoclinic_identity_defect.
 */
#pragma once

#include <vector>

#include "walshbaker/baker.hpp"
#include "walshbaker/hilbert.hpp"
#include "walshbaker/tolerances.hpp"

namespace walshbaker::partitions {

using hilbert::RegisterShape;
using hilbert::StateVector;
using symbolic::Word;

struct RefinedProjector {
    RegisterShape shape;
    Word word;
};

// P_ε ψ by alternating digit projections and baker steps; n may exceed k.
StateVector apply_refined_projector(const StateVector& psi, const Word& word);

// P_ε* ψ (the factors are self-adjoint, the order reverses).
StateVector apply_refined_projector_adjoint(const StateVector& psi, const Word& word);

// ‖P_ε‖; equals D^{-max(0,n−k)/2} exactly.
double refined_projector_norm(RegisterShape shape, const Word& word,
                              std::size_t dense_cap = tol::dense_cap_refined);

// ‖P_εψ‖² for n ≤ k, through the tensor form (a prefix mass).
double cylinder_weight(const StateVector& psi, const Word& word);

// Mass of {digits l+1 … l+n of j equal the word}; offset 0 is cylinder_weight.
double cylinder_mass_at_offset(const StateVector& psi, const Word& word, int l);

// h_n(ψ) = −Σ_{|ε|=n} ‖P_εψ‖² log ‖P_εψ‖², n ≤ k.
double refined_entropy(const StateVector& psi, int n);

struct CoverSet {
    int n = 0;
    std::vector<Word> words;  // kept sorted, duplicates removed
};

CoverSet make_cover(int n, std::vector<Word> words, int D);

// ‖Σ_{ε∉W} P_εψ‖ = sqrt of the weight outside the cover (orthogonality).
double cover_defect(const StateVector& psi, const CoverSet& W);

// Smallest cover with defect ≤ theta: weights sorted descending, ties by
// word order; exactly optimal because the projectors are orthogonal.
CoverSet greedy_cover(const StateVector& psi, int n, double theta);

// Does the word spend a ρ-fraction of its length-n_o windows inside W_o?
bool time_fraction_member(const Word& word, const CoverSet& W_o, double rho, int D);

// Projector onto the quantum rectangle [w_p · w_q], |w_q| + |w_p| ≤ k:
// position digits on the leading axes, conjugated digit projectors F*π_dF on
// the trailing axes in reversed word order.
StateVector apply_rectangle_projector(const StateVector& psi, const Word& w_q,
                                      const Word& w_p);

// ‖P_{R_ℓ} P′_R P_{R_ℓ} − D^{-n-n′} P_{R_ℓ}‖ with R_ℓ = [0_ℓ·0_ℓ],
// R = [w_p·w_q], P′_R = B^{-k} P_R B^k; vanishes when ℓ ≥ max(n,n′), 2ℓ ≤ k.
double homoclinic_identity_defect(RegisterShape shape, int ell, const Word& w_q,
                                  const Word& w_p,
                                  std::size_t dense_cap = tol::dense_cap_norms);

}  // namespace walshbaker::partitions
