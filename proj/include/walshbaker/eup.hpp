/*
 * Entropic Uncertainty Principles as a standalone verification engine.
 *
 * Scalar form (any N×N unitary U, unit ψ):
 *     h(ψ) + h(Uψ) ≥ −2 log c(U),      c(U) = sup_{ij} |U_{ij}|,
 * with h the component-modulus entropy in the canonical basis.
 *
 * Vectorial form (partition of unity {P_j}):
 *     h_P(ψ) + h_P(Uψ) ≥ −2 log c_P(U),  c_P(U) = sup_{ij} ‖P_i U P_j‖.
 * Partitions here are families of diagonal index-set projectors, rich enough
 * for the word partitions of the baker register and for random rank-pattern
 * sweeps.
 *
 * Riesz-moment form (contraction T, t ∈ (0,1)):
 *     M_{t/(1−t)}(Tψ) · M_{−t/(1+t)}(ψ) ≤ c(T)²,
 * plus the norm inequality ‖Tψ‖_{2/(1−t)} ≤ c(T)^t ‖ψ‖_{2/(1+t)}; the t → 0
 * limit recovers the scalar EUP.  ‖Tψ‖ may drop below 1 for strict
 * contractions; the formulas are applied verbatim and the drop is flagged.
 */
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "walshbaker/hilbert.hpp"

namespace walshbaker::eup {

struct PartitionOfUnity {
    Eigen::Index dim = 0;
    std::vector<std::vector<Eigen::Index>> blocks;  // disjoint, covering, nonempty
};

// Throws unless the blocks partition [0, dim) exactly.
void check_partition(const PartitionOfUnity& part);

// Blocks by position-word prefix of length n; block order is word order.
PartitionOfUnity word_partition(hilbert::RegisterShape shape, int n);

// dim rank-one blocks: the full resolution of the canonical basis.
PartitionOfUnity full_partition(Eigen::Index dim);

// Seeded random split of [0, dim) into n_blocks nonempty index sets.
PartitionOfUnity random_partition(Eigen::Index dim, int n_blocks, std::uint64_t seed);

// sup |U_{ij}|; rejects non-unitary input.
double c_entry(const Eigen::MatrixXcd& U);

// sup over block pairs of ‖P_i U P_j‖.
double c_block(const Eigen::MatrixXcd& U, const PartitionOfUnity& part);

struct EUPReport {
    double h_in = 0.0;
    double h_out = 0.0;
    double c = 0.0;
    double bound = 0.0;  // −2 log c
    bool satisfied = false;
    double slack = 0.0;  // h_in + h_out − bound
    bool saturated = false;
};

EUPReport scalar_eup_check(const Eigen::MatrixXcd& U, const Eigen::VectorXcd& psi);
EUPReport vector_eup_check(const Eigen::MatrixXcd& U, const PartitionOfUnity& part,
                           const Eigen::VectorXcd& psi);

struct RieszMomentResult {
    double t = 0.0;
    double lhs = 0.0;  // M_{t/(1−t)}(Tψ) · M_{−t/(1+t)}(ψ)
    double rhs = 0.0;  // c(T)²
    bool satisfied = false;
    bool norm_inequality_satisfied = false;
    bool below_unit_norm = false;  // ‖Tψ‖ < 1 − 1e-9 (strict contraction at work)
};

std::vector<RieszMomentResult> riesz_moment_check(const Eigen::MatrixXcd& T,
                                                  const Eigen::VectorXcd& psi,
                                                  const std::vector<double>& t_grid);

// Haar-distributed unitary: QR of a complex Ginibre draw with the R-diagonal
// phase fix; fully determined by the seed.
Eigen::MatrixXcd haar_unitary(Eigen::Index n, std::uint64_t seed);
Eigen::VectorXcd random_unit_vector(Eigen::Index n, std::uint64_t seed);

}  // namespace walshbaker::eup
