/*
 * Dense and matrix-free linear algebra shared by the operator modules.
 * Everything here is deterministic: fixed reduction orders, seeded start
 * vectors for the power iteration.
 */
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "walshbaker/hilbert.hpp"
#include "walshbaker/tolerances.hpp"

namespace walshbaker::linalg {

using hilbert::RegisterShape;
using hilbert::StateVector;

using ApplyFn = std::function<StateVector(const StateVector&)>;

inline Eigen::VectorXcd to_eigen(const StateVector& psi) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.amps.size()));
    for (std::size_t i = 0; i < psi.amps.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = psi.amps[i];
    return v;
}

inline StateVector from_eigen(RegisterShape shape, const Eigen::VectorXcd& v) {
    if (static_cast<std::size_t>(v.size()) != shape.dimension())
        throw std::invalid_argument("from_eigen: length mismatch");
    StateVector psi = hilbert::zero_state(shape);
    for (std::size_t i = 0; i < psi.amps.size(); ++i)
        psi.amps[i] = v(static_cast<Eigen::Index>(i));
    return psi;
}

inline Eigen::MatrixXcd dense_from_apply(const ApplyFn& op, RegisterShape shape) {
    const std::size_t N = shape.dimension();
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t j = 0; j < N; ++j) {
        StateVector col = op(hilbert::basis_state(shape, j));
        for (std::size_t i = 0; i < N; ++i)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col.amps[i];
    }
    return A;
}

inline double spectral_norm_dense(const Eigen::MatrixXcd& A) {
    // Largest singular value through the Hermitian Gram matrix.
    Eigen::MatrixXcd G = A.adjoint() * A;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(G);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_norm_dense: eigensolver failed");
    double top = solver.eigenvalues()(solver.eigenvalues().size() - 1);
    return std::sqrt(std::max(0.0, top));
}

// Power iteration on A*A with a seeded random start; ‖A‖ = sqrt(λ_max).
inline double spectral_norm_power(const ApplyFn& op, const ApplyFn& op_adjoint,
                                  RegisterShape shape,
                                  int max_iters = tol::power_iterations,
                                  double rel_tol = tol::power_tol,
                                  std::uint64_t seed = 0) {
    StateVector v = hilbert::random_state(shape, mix_seed(seed, 0x706f776572ULL));
    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        StateVector w = op_adjoint(op(v));
        double next = 0.0;
        for (std::size_t i = 0; i < v.amps.size(); ++i)
            next += std::real(std::conj(v.amps[i]) * w.amps[i]);
        double wn = hilbert::norm(w);
        if (wn <= 0.0) return 0.0;  // start vector annihilated: norm estimate 0
        for (Cx& a : w.amps) a /= wn;
        v = std::move(w);
        if (it > 0 && std::abs(next - lambda) <= rel_tol * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(0.0, lambda));
}

}  // namespace walshbaker::linalg
