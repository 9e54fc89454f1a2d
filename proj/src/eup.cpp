#include "walshbaker/eup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "walshbaker/linalg.hpp"
#include "walshbaker/symbolic.hpp"
#include "walshbaker/tolerances.hpp"

namespace walshbaker::eup {

namespace {

double entry_sup(const Eigen::MatrixXcd& A) {
    double sup = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            sup = std::max(sup, std::abs(A(i, j)));
    return sup;
}

double modulus_entropy(const Eigen::VectorXcd& v) {
    std::vector<double> w(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        w[static_cast<std::size_t>(i)] = std::norm(v(i));
    return symbolic::partition_entropy(w);
}

double power_sum(const Eigen::VectorXcd& v, double exponent) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        s += std::pow(std::norm(v(i)), exponent / 2.0);
    return s;
}

double moment(const Eigen::VectorXcd& v, double r) {
    return std::pow(power_sum(v, 2.0 + 2.0 * r), 1.0 / r);
}

EUPReport finish_report(double h_in, double h_out, double c) {
    EUPReport rep;
    rep.h_in = h_in;
    rep.h_out = h_out;
    rep.c = c;
    rep.bound = -2.0 * std::log(c);
    rep.slack = rep.h_in + rep.h_out - rep.bound;
    rep.satisfied = rep.slack >= -tol::eup_slack;
    rep.saturated = std::abs(rep.slack) < tol::eup_slack;
    return rep;
}

}  // namespace

void check_partition(const PartitionOfUnity& part) {
    if (part.dim <= 0)
        throw std::invalid_argument("check_partition: dimension must be positive");
    std::vector<int> hits(static_cast<std::size_t>(part.dim), 0);
    for (const auto& block : part.blocks) {
        if (block.empty())
            throw std::invalid_argument("check_partition: empty block");
        for (Eigen::Index i : block) {
            if (i < 0 || i >= part.dim)
                throw std::invalid_argument("check_partition: index out of range");
            ++hits[static_cast<std::size_t>(i)];
        }
    }
    for (int h : hits)
        if (h != 1)
            throw std::invalid_argument(
                "check_partition: blocks must cover every index exactly once");
}

PartitionOfUnity word_partition(hilbert::RegisterShape shape, int n) {
    if (n < 1 || n > shape.k)
        throw std::invalid_argument("word_partition: need 1 <= n <= k");
    const std::size_t N = shape.dimension();
    const std::size_t tail = static_cast<std::size_t>(ipow_checked(shape.D, shape.k - n));
    PartitionOfUnity part;
    part.dim = static_cast<Eigen::Index>(N);
    part.blocks.resize(static_cast<std::size_t>(ipow_checked(shape.D, n)));
    for (std::size_t j = 0; j < N; ++j)
        part.blocks[j / tail].push_back(static_cast<Eigen::Index>(j));
    check_partition(part);
    return part;
}

PartitionOfUnity full_partition(Eigen::Index dim) {
    PartitionOfUnity part;
    part.dim = dim;
    part.blocks.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i)
        part.blocks[static_cast<std::size_t>(i)].push_back(i);
    check_partition(part);
    return part;
}

PartitionOfUnity random_partition(Eigen::Index dim, int n_blocks, std::uint64_t seed) {
    if (n_blocks < 1 || static_cast<Eigen::Index>(n_blocks) > dim)
        throw std::invalid_argument("random_partition: need 1 <= n_blocks <= dim");
    std::mt19937_64 gen(seed);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(dim));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::shuffle(perm.begin(), perm.end(), gen);

    std::vector<Eigen::Index> sizes(static_cast<std::size_t>(n_blocks), 1);
    std::uniform_int_distribution<int> pick(0, n_blocks - 1);
    for (Eigen::Index extra = dim - n_blocks; extra > 0; --extra)
        ++sizes[static_cast<std::size_t>(pick(gen))];

    PartitionOfUnity part;
    part.dim = dim;
    std::size_t cursor = 0;
    for (Eigen::Index sz : sizes) {
        std::vector<Eigen::Index> block(perm.begin() + static_cast<std::ptrdiff_t>(cursor),
                                        perm.begin() + static_cast<std::ptrdiff_t>(cursor + static_cast<std::size_t>(sz)));
        std::sort(block.begin(), block.end());
        part.blocks.push_back(std::move(block));
        cursor += static_cast<std::size_t>(sz);
    }
    check_partition(part);
    return part;
}

double c_entry(const Eigen::MatrixXcd& U) {
    if (U.rows() != U.cols())
        throw std::invalid_argument("c_entry: matrix must be square");
    Eigen::MatrixXcd G = U.adjoint() * U;
    G.diagonal().array() -= 1.0;
    if (entry_sup(G) > tol::unitary_pre)
        throw std::invalid_argument("c_entry: matrix is not unitary");
    return entry_sup(U);
}

double c_block(const Eigen::MatrixXcd& U, const PartitionOfUnity& part) {
    check_partition(part);
    if (U.rows() != part.dim || U.cols() != part.dim)
        throw std::invalid_argument("c_block: dimension mismatch");
    double sup = 0.0;
    for (const auto& rows : part.blocks)
        for (const auto& cols : part.blocks) {
            Eigen::MatrixXcd sub(static_cast<Eigen::Index>(rows.size()),
                                 static_cast<Eigen::Index>(cols.size()));
            for (std::size_t a = 0; a < rows.size(); ++a)
                for (std::size_t b = 0; b < cols.size(); ++b)
                    sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                        U(rows[a], cols[b]);
            sup = std::max(sup, linalg::spectral_norm_dense(sub));
        }
    return sup;
}

EUPReport scalar_eup_check(const Eigen::MatrixXcd& U, const Eigen::VectorXcd& psi) {
    if (U.cols() != psi.size())
        throw std::invalid_argument("scalar_eup_check: dimension mismatch");
    double c = c_entry(U);
    return finish_report(modulus_entropy(psi), modulus_entropy(U * psi), c);
}

EUPReport vector_eup_check(const Eigen::MatrixXcd& U, const PartitionOfUnity& part,
                           const Eigen::VectorXcd& psi) {
    if (U.cols() != psi.size() || part.dim != psi.size())
        throw std::invalid_argument("vector_eup_check: dimension mismatch");
    double c = c_block(U, part);
    Eigen::VectorXcd out = U * psi;
    auto block_entropy = [&](const Eigen::VectorXcd& v) {
        std::vector<double> w;
        w.reserve(part.blocks.size());
        for (const auto& block : part.blocks) {
            double mass = 0.0;
            for (Eigen::Index i : block) mass += std::norm(v(i));
            w.push_back(mass);
        }
        return symbolic::partition_entropy(w);
    };
    return finish_report(block_entropy(psi), block_entropy(out), c);
}

std::vector<RieszMomentResult> riesz_moment_check(const Eigen::MatrixXcd& T,
                                                  const Eigen::VectorXcd& psi,
                                                  const std::vector<double>& t_grid) {
    if (T.rows() != T.cols() || T.cols() != psi.size())
        throw std::invalid_argument("riesz_moment_check: dimension mismatch");
    if (linalg::spectral_norm_dense(T) > 1.0 + tol::unitary_pre)
        throw std::invalid_argument("riesz_moment_check: T must be a contraction");

    const double c = entry_sup(T);
    const Eigen::VectorXcd out = T * psi;
    const bool below = out.norm() < 1.0 - tol::eup_slack;

    std::vector<RieszMomentResult> results;
    results.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t <= 0.0 || t >= 1.0)
            throw std::invalid_argument("riesz_moment_check: t must lie in (0,1)");
        RieszMomentResult res;
        res.t = t;
        res.lhs = moment(out, t / (1.0 - t)) * moment(psi, -t / (1.0 + t));
        res.rhs = c * c;
        res.satisfied = res.lhs <= res.rhs + tol::eup_slack;
        // Companion norm form: ‖Tψ‖_{2/(1−t)} ≤ c^t · ‖ψ‖_{2/(1+t)}.
        double lhs_norm = std::pow(power_sum(out, 2.0 / (1.0 - t)), (1.0 - t) / 2.0);
        double rhs_norm =
            std::pow(c, t) * std::pow(power_sum(psi, 2.0 / (1.0 + t)), (1.0 + t) / 2.0);
        res.norm_inequality_satisfied = lhs_norm <= rhs_norm + tol::eup_slack;
        res.below_unit_norm = below;
        results.push_back(res);
    }
    return results;
}

Eigen::MatrixXcd haar_unitary(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("haar_unitary: dimension must be positive");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd G(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            double re = gauss(gen);
            double im = gauss(gen);
            G(i, j) = Cx{re, im};
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
    Eigen::MatrixXcd Q = qr.householderQ();
    Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase gauge so the distribution is exactly Haar.
    for (Eigen::Index j = 0; j < n; ++j) {
        Cx d = R(j, j);
        double a = std::abs(d);
        Q.col(j) *= a > 0.0 ? d / a : Cx{1.0, 0.0};
    }
    return Q;
}

Eigen::VectorXcd random_unit_vector(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_unit_vector: dimension must be positive");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double re = gauss(gen);
        double im = gauss(gen);
        v(i) = Cx{re, im};
    }
    double nn = v.norm();
    if (nn <= 0.0) throw std::runtime_error("random_unit_vector: degenerate draw");
    return v / nn;
}

}  // namespace walshbaker::eup
