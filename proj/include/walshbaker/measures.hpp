/*
 * Walsh-Husimi measures and the entropies built on them.
 *
 * The ℓ-basis Husimi weight of ψ at the quantum rectangle [ε′·ε] is
 * |⟨ε′·ε|ψ⟩|²; the associated torus density is D^k times the weight,
 * constant on each rectangle.  ℓ = k gives |⟨q_j|ψ⟩|², the Shannon weights.
 *
 * Entropies are Boltzmann sums −Σ w log w over a weight partition; sums run
 * in descending weight order for reproducibility.  The moments
 * M_r(ψ) = (Σ_j |ψ_j|^{2+2r})^{1/r} interpolate them: log M_r → −h(ψ) as
 * r → 0.
 *
 * Classical references are Bernoulli product measures (Lebesgue as the
 * uniform special case); comparisons happen on cylinder depths coarse enough
 * that the quantum measure assigns exact masses.
 */
#pragma once

#include <string>
#include <vector>

#include "walshbaker/hilbert.hpp"
#include "walshbaker/symbolic.hpp"

namespace walshbaker::measures {

using hilbert::RegisterShape;
using hilbert::StateVector;
using symbolic::BernoulliWeights;
using symbolic::Word;

struct HusimiMeasure {
    RegisterShape shape;
    int ell = 0;
    std::vector<double> weights;  // coherent-ordinal order, sums to 1
};

// All D^k rectangle weights in O(D^k·k) via axis transforms.
HusimiMeasure husimi(const StateVector& psi, int ell);

// Mass of the rectangle [w_p·w_q]; needs |w_q| ≤ ℓ and |w_p| ≤ k−ℓ.
double cylinder_mass(const HusimiMeasure& hm, const Word& w_q, const Word& w_p);

double shannon_entropy(const StateVector& psi);
double wehrl_entropy(const StateVector& psi, int ell);

// M_r(ψ); r > −1, r ≠ 0.
double moments(const StateVector& psi, double r);

// Product measure with independent digit weights on each side.
struct ClassicalMeasure {
    BernoulliWeights q_weights;
    BernoulliWeights p_weights;
};

ClassicalMeasure bernoulli_product(BernoulliWeights q, BernoulliWeights p);
ClassicalMeasure lebesgue_measure(int D);

double classical_mass(const ClassicalMeasure& mu, const Word& w_q, const Word& w_p);

// (1/2)·Σ over depth-(n,n′) rectangles of |quantum − classical| mass.
double tv_distance_on_cylinders(const HusimiMeasure& hm, const ClassicalMeasure& ref,
                                int n, int n_prime);

enum class GridFormat { csv, pgm };

// Phase-space density grid: D^{k−ℓ} rows by D^ℓ columns, top row = highest
// momentum.  CSV holds raw densities; PGM holds the per-file log gray scale
// (0 = zero weight; render inverted for the black = high density convention).
void export_husimi_grid(const HusimiMeasure& hm, const std::string& path,
                        GridFormat format);

struct EntropyReport {
    double shannon = 0.0;
    std::vector<double> wehrl_by_ell;  // ℓ = 0 … k
    std::vector<double> refined_by_n;  // n = 1 … k
    double eup_bound = 0.0;            // (k/2)·log D
    double slack = 0.0;                // shannon − eup_bound
};

EntropyReport entropy_report(const StateVector& psi);

}  // namespace walshbaker::measures
