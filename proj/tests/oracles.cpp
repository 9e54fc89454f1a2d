#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracles {

std::vector<int> digits_be(std::size_t j, int D, int k) {
    std::vector<int> d(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
        d[static_cast<std::size_t>(i)] = static_cast<int>(j % static_cast<std::size_t>(D));
        j /= static_cast<std::size_t>(D);
    }
    return d;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    Eigen::MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Eigen::VectorXcd unit_column(int D, int d) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(D);
    e(d) = Cx{1.0, 0.0};
    return e;
}

Eigen::MatrixXcd oracle_dft(int D) {
    Eigen::MatrixXcd F(D, D);
    for (int j = 0; j < D; ++j)
        for (int m = 0; m < D; ++m)
            F(j, m) = std::polar(1.0 / std::sqrt(static_cast<double>(D)),
                                 -2.0 * std::numbers::pi * j * m / D);
    return F;
}

Eigen::MatrixXcd oracle_walsh(int D, int k) {
    if (k == 0) return Eigen::MatrixXcd::Identity(1, 1);
    const Eigen::MatrixXcd F = oracle_dft(D);
    std::size_t dim = 1;
    for (int i = 0; i < k; ++i) dim *= static_cast<std::size_t>(D);
    Eigen::MatrixXcd W(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
        std::vector<int> dj = digits_be(j, D, k);
        for (std::size_t m = 0; m < dim; ++m) {
            std::vector<int> em = digits_be(m, D, k);
            Cx prod{1.0, 0.0};
            for (int i = 1; i <= k; ++i)
                prod *= F(dj[static_cast<std::size_t>(i - 1)],
                          em[static_cast<std::size_t>(k - i)]);
            W(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) = prod;
        }
    }
    return W;
}

Eigen::MatrixXcd oracle_baker(int D, int k) {
    Eigen::MatrixXcd Wk = oracle_walsh(D, k);
    Eigen::MatrixXcd inner = kron(Eigen::MatrixXcd::Identity(D, D), oracle_walsh(D, k - 1));
    return Wk.adjoint() * inner;
}

Eigen::MatrixXcd oracle_digit_projector(int D, int k, int d) {
    Eigen::Index dim = 1;
    for (int i = 0; i < k; ++i) dim *= D;
    Eigen::Index S = dim / D;
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        if (j / S == d) P(j, j) = Cx{1.0, 0.0};
    return P;
}

Eigen::MatrixXcd oracle_refined_projector(int D, int k, const std::vector<int>& word) {
    if (word.empty()) throw std::invalid_argument("oracle_refined_projector: empty word");
    Eigen::MatrixXcd B = oracle_baker(D, k);
    Eigen::MatrixXcd Binv = B.adjoint();
    Eigen::MatrixXcd P = oracle_digit_projector(D, k, word[0]);
    for (std::size_t i = 1; i < word.size(); ++i)
        P = oracle_digit_projector(D, k, word[i]) * B * P;
    for (std::size_t i = 1; i < word.size(); ++i) P = Binv * P;
    return P;
}

Eigen::VectorXcd oracle_coherent(int D, int k, int ell, const std::vector<int>& eps,
                                 const std::vector<int>& eps_prime) {
    const Eigen::MatrixXcd Fadj = oracle_dft(D).adjoint();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
    for (int i = 0; i < ell; ++i)
        acc = kron(acc, unit_column(D, eps[static_cast<std::size_t>(i)]));
    const int m = k - ell;
    for (int i = 0; i < m; ++i)
        acc = kron(acc, Fadj * unit_column(D, eps_prime[static_cast<std::size_t>(m - 1 - i)]));
    return acc.col(0);
}

double oracle_spectral_norm(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

Eigen::VectorXcd to_vec(const walshbaker::hilbert::StateVector& psi) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.amps.size()));
    for (std::size_t i = 0; i < psi.amps.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = psi.amps[i];
    return v;
}

}  // namespace oracles
