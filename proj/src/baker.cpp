#include "walshbaker/baker.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace walshbaker::baker {

namespace {

using hilbert::apply_dft_axis;
using hilbert::zero_state;

// Axis cycle ε₁…ε_k ↦ ε₂…ε_kε₁ as an index permutation.
StateVector cycle_axes_forward(const StateVector& psi) {
    const RegisterShape shape = psi.shape;
    const std::size_t N = shape.dimension();
    const std::size_t S = N / static_cast<std::size_t>(shape.D);
    StateVector out = zero_state(shape);
    for (std::size_t j = 0; j < N; ++j)
        out.amps[(j % S) * static_cast<std::size_t>(shape.D) + j / S] = psi.amps[j];
    return out;
}

StateVector cycle_axes_inverse(const StateVector& psi) {
    const RegisterShape shape = psi.shape;
    const std::size_t N = shape.dimension();
    const std::size_t S = N / static_cast<std::size_t>(shape.D);
    StateVector out = zero_state(shape);
    for (std::size_t j = 0; j < N; ++j)
        out.amps[j] = psi.amps[(j % S) * static_cast<std::size_t>(shape.D) + j / S];
    return out;
}

StateVector baker_step(const StateVector& psi, Direction dir) {
    if (dir == Direction::forward) {
        StateVector out = cycle_axes_forward(psi);
        return apply_dft_axis(out, psi.shape.k, Direction::inverse);
    }
    StateVector out = apply_dft_axis(psi, psi.shape.k, Direction::forward);
    return cycle_axes_inverse(out);
}

}  // namespace

StateVector apply_baker(const StateVector& psi, long long power) {
    const int M = quantum_period(psi.shape.D, psi.shape.k);
    long long m = power % M;
    if (m < 0) m += M;
    StateVector out = psi;
    if (2 * m <= M) {
        for (long long i = 0; i < m; ++i) out = baker_step(out, Direction::forward);
    } else {
        for (long long i = 0; i < M - m; ++i) out = baker_step(out, Direction::inverse);
    }
    return out;
}

int quantum_period(int D, int k) {
    if (D < 2) throw std::invalid_argument("quantum_period: D must be at least 2");
    if (k < 1) throw std::invalid_argument("quantum_period: k must be at least 1");
    return D == 2 ? 2 * k : 4 * k;
}

EigenDecomposition spectral_decompose(RegisterShape shape, std::size_t dense_cap) {
    const std::size_t N = shape.dimension();
    if (N > dense_cap)
        throw ResourceLimitError("spectral_decompose: dimension exceeds dense cap");
    const int M = quantum_period(shape.D, shape.k);
    const Eigen::Index n = static_cast<Eigen::Index>(N);

    EigenDecomposition dec;
    dec.shape = shape;
    dec.M = M;
    dec.spaces.reserve(static_cast<std::size_t>(M));

    std::size_t total_rank = 0;
    for (int r = 0; r < M; ++r) {
        // Dense projector column by column: P_r e_j = (1/M)·Σ_m phase(m)·B^m e_j.
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t j = 0; j < N; ++j) {
            StateVector traj = hilbert::basis_state(shape, j);
            for (int m = 0; m < M; ++m) {
                double ang = -2.0 * std::numbers::pi * static_cast<double>(r) *
                             static_cast<double>(m) / static_cast<double>(M);
                Cx phase{std::cos(ang), std::sin(ang)};
                for (std::size_t i = 0; i < N; ++i)
                    P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                        phase * traj.amps[i];
                if (m + 1 < M) traj = baker_step(traj, Direction::forward);
            }
        }
        P /= static_cast<double>(M);

        EigenSpace space;
        space.r = r;
        space.theta = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(M);

        // Hermitian PSD, so the eigendecomposition is the singular value
        // decomposition of the projected position vectors.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(P);
        if (solver.info() == Eigen::Success) {
            for (Eigen::Index c = n - 1; c >= 0; --c) {
                if (solver.eigenvalues()(c) <= tol::rank_threshold) break;
                StateVector v = zero_state(shape);
                for (std::size_t i = 0; i < N; ++i)
                    v.amps[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), c);
                space.basis.push_back(std::move(v));
            }
        } else {
            // The QL iteration can stall on a spectrum clustered entirely at
            // 0 and 1 (seen at D=2, k=10, r=18).  P is an exact projector, so
            // a rank-revealing QR of its columns yields the same orthonormal
            // range basis without any iteration to stall.
            Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(P);
            qr.setThreshold(tol::rank_threshold);
            const Eigen::Index rank = qr.rank();
            Eigen::MatrixXcd Q =
                qr.householderQ() * Eigen::MatrixXcd::Identity(n, rank);
            for (Eigen::Index c = 0; c < rank; ++c) {
                StateVector v = zero_state(shape);
                for (std::size_t i = 0; i < N; ++i)
                    v.amps[i] = Q(static_cast<Eigen::Index>(i), c);
                space.basis.push_back(std::move(v));
            }
        }
        total_rank += space.basis.size();
        dec.spaces.push_back(std::move(space));
    }
    if (total_rank != N)
        throw std::runtime_error("spectral_decompose: degeneracies do not sum to the dimension");
    return dec;
}

StateVector tensor_eigenstate(const std::vector<Cx>& w, int k) {
    const int D = static_cast<int>(w.size());
    if (D < 2) throw std::invalid_argument("tensor_eigenstate: vector length must be at least 2");
    if (k < 1) throw std::invalid_argument("tensor_eigenstate: k must be at least 1");

    double nw2 = 0.0;
    for (const Cx& a : w) nw2 += std::norm(a);
    if (nw2 <= 0.0) throw std::invalid_argument("tensor_eigenstate: zero vector");

    Eigen::MatrixXcd F = hilbert::dft_matrix(D);
    std::vector<Cx> fw(static_cast<std::size_t>(D), Cx{0.0, 0.0});
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            fw[static_cast<std::size_t>(i)] +=
                std::conj(F(i, j)) * w[static_cast<std::size_t>(j)];

    Cx lambda{0.0, 0.0};
    for (int i = 0; i < D; ++i)
        lambda += std::conj(w[static_cast<std::size_t>(i)]) * fw[static_cast<std::size_t>(i)];
    lambda /= nw2;

    double resid2 = 0.0;
    for (int i = 0; i < D; ++i)
        resid2 += std::norm(fw[static_cast<std::size_t>(i)] -
                            lambda * w[static_cast<std::size_t>(i)]);
    if (std::sqrt(resid2) > tol::eigenvector_pre * std::sqrt(nw2))
        throw std::invalid_argument("tensor_eigenstate: w is not an eigenvector of the adjoint transform");

    return hilbert::tensor_state(D, std::vector<std::vector<Cx>>(static_cast<std::size_t>(k), w));
}

std::vector<FourierEigenspace> fourier_eigenvectors(int D) {
    Eigen::MatrixXcd F = hilbert::dft_matrix(D);
    Eigen::MatrixXcd Fadj = F.adjoint();
    const Cx lambdas[4] = {Cx{1, 0}, Cx{0, 1}, Cx{-1, 0}, Cx{0, -1}};

    std::vector<FourierEigenspace> out;
    out.reserve(4);
    std::size_t total = 0;
    for (const Cx& lambda : lambdas) {
        // (F*)⁴ = I, so the projector is the exact 4-term power average.
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(D, D);
        Eigen::MatrixXcd X = Eigen::MatrixXcd::Identity(D, D);
        Cx coeff{1.0, 0.0};
        for (int m = 0; m < 4; ++m) {
            P += coeff * X;
            X = Fadj * X;
            coeff /= lambda;
        }
        P /= 4.0;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(P);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("fourier_eigenvectors: eigensolver failed");

        FourierEigenspace space;
        space.lambda = lambda;
        for (Eigen::Index c = D - 1; c >= 0; --c) {
            if (solver.eigenvalues()(c) <= tol::rank_threshold) break;
            std::vector<Cx> v(static_cast<std::size_t>(D));
            for (int i = 0; i < D; ++i)
                v[static_cast<std::size_t>(i)] = solver.eigenvectors()(i, c);
            space.vectors.push_back(std::move(v));
        }
        total += space.vectors.size();
        out.push_back(std::move(space));
    }
    if (total != static_cast<std::size_t>(D))
        throw std::runtime_error("fourier_eigenvectors: multiplicities do not sum to D");
    return out;
}

StateVector example3_state(int k) {
    if (k < 1 || k % 2 == 0)
        throw std::invalid_argument("example3_state: k must be odd and positive");
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<Cx> e0 = {Cx{1, 0}, Cx{0, 0}};
    const std::vector<Cx> ep = {Cx{r, 0}, Cx{r, 0}};

    std::vector<std::vector<Cx>> f1, f2;
    for (int i = 1; i <= k; ++i) {
        f1.push_back(i % 2 == 1 ? e0 : ep);
        f2.push_back(i % 2 == 1 ? ep : e0);
    }
    StateVector a = hilbert::tensor_state(2, f1);
    StateVector b = hilbert::tensor_state(2, f2);
    for (std::size_t j = 0; j < a.amps.size(); ++j)
        a.amps[j] = (a.amps[j] + b.amps[j]) * r;
    return a;
}

std::optional<StateVector> scarred_state(RegisterShape shape, int r,
                                         const CoherentIndex& idx) {
    const int M = quantum_period(shape.D, shape.k);
    if (r < 0 || r >= M) throw std::invalid_argument("scarred_state: phase index out of range");

    StateVector traj = hilbert::coherent_state(shape, idx);
    StateVector acc = zero_state(shape);
    for (int m = 0; m < M; ++m) {
        double ang = -2.0 * std::numbers::pi * static_cast<double>(r) *
                     static_cast<double>(m) / static_cast<double>(M);
        Cx phase{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < acc.amps.size(); ++i)
            acc.amps[i] += phase * traj.amps[i];
        if (m + 1 < M) traj = baker_step(traj, Direction::forward);
    }
    for (Cx& a : acc.amps) a /= static_cast<double>(M);

    if (hilbert::norm(acc) < tol::rank_threshold) return std::nullopt;
    hilbert::normalize(acc);
    return acc;
}

std::optional<StateVector> scarred_state(RegisterShape shape, int r) {
    CoherentIndex idx;
    idx.ell = shape.k / 2;
    idx.eps.assign(static_cast<std::size_t>(idx.ell), 0);
    idx.eps_prime.assign(static_cast<std::size_t>(shape.k - idx.ell), 0);
    return scarred_state(shape, r, idx);
}

}  // namespace walshbaker::baker
