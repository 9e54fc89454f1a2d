#include "walshbaker/acceptance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "walshbaker/baker.hpp"
#include "walshbaker/eup.hpp"
#include "walshbaker/experiment.hpp"
#include "walshbaker/linalg.hpp"
#include "walshbaker/measures.hpp"
#include "walshbaker/partitions.hpp"
#include "walshbaker/quantization.hpp"
#include "walshbaker/tolerances.hpp"

namespace walshbaker::acceptance {

namespace fs = std::filesystem;
using hilbert::RegisterShape;
using hilbert::StateVector;
using symbolic::Word;

namespace {

struct Ctx {
    AcceptanceOptions opts;
    std::map<std::pair<int, int>, baker::EigenDecomposition> cache;

    double tol(double base) const { return base * opts.tolerance_scale; }

    bool fits(RegisterShape shape) const {
        return shape.dimension() <= opts.max_dim;
    }

    const baker::EigenDecomposition& decomposition(int D, int k) {
        auto key = std::make_pair(D, k);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, baker::spectral_decompose(
                                        hilbert::make_shape(D, k)))
                     .first;
        return it->second;
    }
};

struct Outcome {
    bool pass = true;
    bool skipped = false;
    std::ostringstream detail;

    void fail(const std::string& what) {
        pass = false;
        detail << " FAIL[" << what << "]";
    }
    void skip_shape(int D, int k) {
        skipped = true;
        detail << " skip(D=" << D << ",k=" << k << ")";
    }
};

std::string fmt(double x) { return format_double(x); }

double dist(const StateVector& a, const StateVector& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.amps.size(); ++j)
        acc += std::norm(a.amps[j] - b.amps[j]);
    return std::sqrt(acc);
}

double eigen_residual(const StateVector& psi, double theta) {
    StateVector b = baker::apply_baker(psi, 1);
    Cx phase = std::exp(Cx(0.0, theta));
    double acc = 0.0;
    for (std::size_t j = 0; j < b.amps.size(); ++j)
        acc += std::norm(b.amps[j] - phase * psi.amps[j]);
    return std::sqrt(acc);
}

// Masses of the pulled-back cylinders B^{-l}[·ε] over all words of length n.
std::vector<double> offset_masses(const StateVector& psi, int n, int l) {
    int D = psi.shape.D;
    int k = psi.shape.k;
    auto window = static_cast<std::size_t>(ipow_checked(D, n));
    auto tail = static_cast<std::size_t>(ipow_checked(D, k - l - n));
    std::vector<double> mass(window, 0.0);
    for (std::size_t j = 0; j < psi.amps.size(); ++j)
        mass[(j / tail) % window] += std::norm(psi.amps[j]);
    return mass;
}

Word random_word(int D, int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> digit(0, D - 1);
    Word w(static_cast<std::size_t>(n));
    for (auto& d : w) d = digit(rng);
    return w;
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ── 1. Unitarity and exact period ────────────────────────────────────────────

Outcome criterion1(Ctx& ctx) {
    Outcome o;
    double worst_period = 0.0;
    for (int D : {2, 3, 4}) {
        for (int k = 1; k <= 7; ++k) {
            RegisterShape shape = hilbert::make_shape(D, k);
            if (!ctx.fits(shape)) {
                o.skip_shape(D, k);
                continue;
            }
            int M = baker::quantum_period(D, k);
            for (int t = 0; t < 20; ++t) {
                std::uint64_t s = mix_seed(
                    ctx.opts.seed, 0x1000u + static_cast<std::uint64_t>(
                                                 (D * 16 + k) * 32 + t));
                StateVector psi = hilbert::random_state(shape, s);
                StateVector cur = psi;
                for (int m = 0; m < M; ++m) cur = baker::apply_baker(cur, 1);
                worst_period = std::max(worst_period, dist(cur, psi));
            }
        }
    }
    if (worst_period > ctx.tol(tol::exact_period)) o.fail("period");

    double worst_parity = 0.0;
    for (int k = 1; k <= 4; ++k) {
        RegisterShape shape = hilbert::make_shape(3, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(3, k);
            continue;
        }
        std::size_t N = shape.dimension();
        for (std::size_t j = 0; j < N; ++j) {
            StateVector col = hilbert::basis_state(shape, j);
            for (int m = 0; m < 2 * k; ++m) col = baker::apply_baker(col, 1);
            std::size_t target = 0;
            for (int i = 1; i <= k; ++i) {
                int eps = hilbert::digit_at(j, i, shape);
                target = target * 3 + static_cast<std::size_t>((3 - eps) % 3);
            }
            for (std::size_t r = 0; r < N; ++r) {
                double want = r == target ? 1.0 : 0.0;
                worst_parity =
                    std::max(worst_parity, std::abs(col.amps[r] - Cx(want)));
            }
        }
    }
    if (worst_parity > ctx.tol(tol::parity_dense)) o.fail("parity");

    o.detail << " worst_period=" << fmt(worst_period) << " (tol "
             << fmt(ctx.tol(tol::exact_period)) << ")"
             << " worst_parity=" << fmt(worst_parity) << " (tol "
             << fmt(ctx.tol(tol::parity_dense)) << ")";
    return o;
}

// ── 2. Spectral completeness ─────────────────────────────────────────────────

Outcome criterion2(Ctx& ctx) {
    Outcome o;
    double worst_res = 0.0;
    double worst_recon = 0.0;
    bool complete = true;
    auto scan = [&](int D, int k, bool dense_recon) {
        RegisterShape shape = hilbert::make_shape(D, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(D, k);
            return;
        }
        const auto& dec = ctx.decomposition(D, k);
        std::size_t total = 0;
        for (const auto& s : dec.spaces) {
            total += s.basis.size();
            for (const auto& v : s.basis)
                worst_res = std::max(worst_res, eigen_residual(v, s.theta));
        }
        if (total != shape.dimension()) complete = false;
        if (!dense_recon) return;

        auto N = static_cast<Eigen::Index>(shape.dimension());
        Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(N, N);
        for (const auto& s : dec.spaces) {
            Cx phase = std::exp(Cx(0.0, s.theta));
            for (const auto& v : s.basis) {
                Eigen::VectorXcd ev = linalg::to_eigen(v);
                R += phase * (ev * ev.adjoint());
            }
        }
        Eigen::MatrixXcd B = linalg::dense_from_apply(
            [](const StateVector& x) { return baker::apply_baker(x, 1); },
            shape);
        worst_recon =
            std::max(worst_recon, linalg::spectral_norm_dense(R - B));
    };
    for (int k = 1; k <= 5; ++k) scan(2, k, true);
    for (int k = 1; k <= 4; ++k) scan(3, k, false);

    if (!complete) o.fail("rank-sum");
    if (worst_res > ctx.tol(tol::eigen_residual)) o.fail("residual");
    if (worst_recon > ctx.tol(tol::reconstruction)) o.fail("reconstruction");
    o.detail << " rank_sums_exact=" << (complete ? "yes" : "no")
             << " worst_residual=" << fmt(worst_res) << " (tol "
             << fmt(ctx.tol(tol::eigen_residual)) << ")"
             << " worst_reconstruction=" << fmt(worst_recon) << " (tol "
             << fmt(ctx.tol(tol::reconstruction)) << ")";
    return o;
}

// Shapes shared by the eigenvector-sweep criteria.
const std::vector<std::pair<int, int>>& eigensweep_shapes() {
    static const std::vector<std::pair<int, int>> shapes = [] {
        std::vector<std::pair<int, int>> v;
        for (int k = 4; k <= 10; ++k) v.emplace_back(2, k);
        for (int k = 3; k <= 6; ++k) v.emplace_back(3, k);
        return v;
    }();
    return shapes;
}

// ── 3. Entropy bound and Wehrl equality ──────────────────────────────────────

Outcome criterion3(Ctx& ctx) {
    Outcome o;
    double min_slack = std::numeric_limits<double>::infinity();
    double worst_wehrl = 0.0;
    std::size_t vectors = 0;
    for (auto [D, k] : eigensweep_shapes()) {
        RegisterShape shape = hilbert::make_shape(D, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(D, k);
            continue;
        }
        double bound = 0.5 * k * std::log(static_cast<double>(D));
        const auto& dec = ctx.decomposition(D, k);
        for (const auto& s : dec.spaces) {
            for (const auto& v : s.basis) {
                ++vectors;
                double h = measures::shannon_entropy(v);
                min_slack = std::min(min_slack, h - bound);
                for (int ell = 0; ell <= k; ++ell)
                    worst_wehrl = std::max(
                        worst_wehrl,
                        std::abs(measures::wehrl_entropy(v, ell) - h));
            }
        }
    }
    if (min_slack < -ctx.tol(tol::entropy_bound)) o.fail("entropy-bound");
    if (worst_wehrl > ctx.tol(tol::wehrl_equality)) o.fail("wehrl");
    o.detail << " vectors=" << vectors << " min_entropy_slack="
             << fmt(min_slack) << " (tol -" << fmt(ctx.tol(tol::entropy_bound))
             << ") worst_wehrl_dev=" << fmt(worst_wehrl) << " (tol "
             << fmt(ctx.tol(tol::wehrl_equality)) << ")";
    return o;
}

// ── 4. Refined-partition bound and subadditivity chain ───────────────────────

Outcome criterion4(Ctx& ctx) {
    Outcome o;
    double min_slack = std::numeric_limits<double>::infinity();
    double worst_chain = -std::numeric_limits<double>::infinity();
    for (auto [D, k] : eigensweep_shapes()) {
        RegisterShape shape = hilbert::make_shape(D, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(D, k);
            continue;
        }
        double logD = std::log(static_cast<double>(D));
        const auto& dec = ctx.decomposition(D, k);
        for (const auto& s : dec.spaces) {
            for (const auto& v : s.basis) {
                double lhs = partitions::refined_entropy(v, k);
                for (int n = 1; n <= k; ++n) {
                    double h = partitions::refined_entropy(v, n);
                    min_slack = std::min(min_slack, h - 0.5 * n * logD);
                    int q = k / n;
                    int r = k % n;
                    double rhs = 0.0;
                    for (int j = 0; j < q; ++j) {
                        auto mass = offset_masses(v, n, j * n);
                        rhs += symbolic::partition_entropy(mass);
                    }
                    if (r > 0) {
                        auto mass = offset_masses(v, r, q * n);
                        rhs += symbolic::partition_entropy(mass);
                    }
                    worst_chain = std::max(worst_chain, lhs - rhs);
                }
            }
        }
    }
    if (min_slack < -ctx.tol(tol::refined_bound)) o.fail("refined-bound");
    if (worst_chain > ctx.tol(tol::refined_bound)) o.fail("subadd-chain");
    o.detail << " min_refined_slack=" << fmt(min_slack) << " (tol -"
             << fmt(ctx.tol(tol::refined_bound)) << ") worst_chain_excess="
             << fmt(worst_chain) << " (tol " << fmt(ctx.tol(tol::refined_bound))
             << ")";
    return o;
}

// ── 5. Projector-norm formula ────────────────────────────────────────────────

Outcome criterion5(Ctx& ctx) {
    Outcome o;
    double worst_formula = 0.0;
    double worst_oracle = 0.0;
    const std::vector<std::pair<int, int>> shapes = {
        {2, 2}, {2, 3}, {2, 4}, {3, 2}};
    for (auto [D, k] : shapes) {
        RegisterShape shape = hilbert::make_shape(D, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(D, k);
            continue;
        }
        std::mt19937_64 rng(mix_seed(
            ctx.opts.seed, 0x5000u + static_cast<std::uint64_t>(D * 32 + k)));
        for (int n = 1; n <= 2 * k + 2; ++n) {
            for (int t = 0; t < 50; ++t) {
                Word w = random_word(D, n, rng);
                double computed = partitions::refined_projector_norm(shape, w);
                double formula = std::pow(static_cast<double>(D),
                                          -0.5 * std::max(0, n - k));
                Eigen::MatrixXcd P = linalg::dense_from_apply(
                    [&](const StateVector& x) {
                        return partitions::apply_refined_projector(x, w);
                    },
                    shape);
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
                double oracle = svd.singularValues()(0);
                worst_formula =
                    std::max(worst_formula, std::abs(computed - formula));
                worst_oracle =
                    std::max(worst_oracle, std::abs(computed - oracle));
            }
        }
    }
    if (worst_formula > ctx.tol(tol::projector_norm)) o.fail("formula");
    if (worst_oracle > ctx.tol(tol::projector_norm)) o.fail("svd-oracle");
    o.detail << " worst_vs_formula=" << fmt(worst_formula)
             << " worst_vs_svd=" << fmt(worst_oracle) << " (tol "
             << fmt(ctx.tol(tol::projector_norm)) << ")";
    return o;
}

// ── 6. Egorov exactness and the quantization bounds ──────────────────────────

std::vector<quantization::Observable> observable_corpus(int D,
                                                        std::uint64_t seed) {
    std::vector<quantization::Observable> corpus;
    const std::vector<std::pair<int, int>> depths = {
        {0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0},
        {0, 2}, {2, 1}, {1, 2}, {2, 2}};
    for (auto [nq, np] : depths) {
        auto cells = static_cast<std::size_t>(ipow_checked(D, nq + np));
        auto pmod = static_cast<std::size_t>(ipow_checked(D, np));
        for (std::size_t c = 0; c < cells; ++c) {
            Word wq(static_cast<std::size_t>(nq));
            Word wp(static_cast<std::size_t>(np));
            std::size_t qnum = c / pmod;
            std::size_t pnum = c % pmod;
            for (int i = nq - 1; i >= 0; --i) {
                wq[static_cast<std::size_t>(i)] = static_cast<int>(qnum % D);
                qnum /= static_cast<std::size_t>(D);
            }
            for (int i = np - 1; i >= 0; --i) {
                wp[static_cast<std::size_t>(i)] = static_cast<int>(pnum % D);
                pnum /= static_cast<std::size_t>(D);
            }
            corpus.push_back(quantization::indicator_observable(D, wq, wp));
        }
    }
    for (int g = 0; g < 2; ++g) {
        int nq = g == 0 ? 2 : 1;
        int np = 2;
        auto cells = static_cast<std::size_t>(ipow_checked(D, nq + np));
        std::mt19937_64 rng(mix_seed(seed, 0x6f627300u + g));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<Cx> values(cells);
        for (auto& v : values) v = Cx(uni(rng), 0.0);
        corpus.push_back(
            quantization::make_observable(D, nq, np, std::move(values)));
    }
    return corpus;
}

Outcome criterion6(Ctx& ctx) {
    Outcome o;
    const int D = 2;
    const int k = 5;
    RegisterShape shape = hilbert::make_shape(D, k);
    if (!ctx.fits(shape)) {
        o.skip_shape(D, k);
        return o;
    }
    auto corpus = observable_corpus(D, ctx.opts.seed);
    double worst_exact = 0.0;
    double worst_p2 = -std::numeric_limits<double>::infinity();
    for (int ell = 0; ell + 1 <= k; ++ell) {
        for (const auto& f : corpus) {
            auto res = quantization::egorov_defect(f, shape, ell);
            if (res.exact_identity)
                worst_exact = std::max(worst_exact, res.defect);
            else
                worst_p2 = std::max(worst_p2, res.defect - res.bound);
        }
    }
    if (worst_exact > ctx.tol(tol::egorov_exact)) o.fail("exact-identity");
    if (worst_p2 > ctx.tol(tol::bound_slack)) o.fail("prop2");

    // Product bound: anti-Wick operators at equal ℓ are simultaneously
    // diagonal, so the defect norm is the worst diagonal mismatch.
    double worst_product = -std::numeric_limits<double>::infinity();
    double worst_diag_dense = 0.0;
    int dense_spotchecks = 0;
    for (int ell : {2, 3}) {
        double shrink =
            std::pow(static_cast<double>(D), -std::min(ell, k - ell));
        for (std::size_t a = 0; a < corpus.size(); ++a) {
            auto Af = quantization::op_anti_wick(corpus[a], shape, ell);
            for (std::size_t bidx = 0; bidx < corpus.size(); ++bidx) {
                auto fg = quantization::multiply(corpus[a], corpus[bidx]);
                auto Afg = quantization::op_anti_wick(fg, shape, ell);
                auto Ag = quantization::op_anti_wick(corpus[bidx], shape, ell);
                double defect = 0.0;
                for (std::size_t j = 0; j < Afg.diag.size(); ++j)
                    defect = std::max(
                        defect, std::abs(Afg.diag[j] - Af.diag[j] * Ag.diag[j]));
                double cap = quantization::lipschitz_bound(corpus[a]) *
                             quantization::lipschitz_bound(corpus[bidx]) *
                             shrink;
                worst_product = std::max(worst_product, defect - cap);
                if (a % 17 == 3 && bidx % 19 == 5 && dense_spotchecks < 6) {
                    ++dense_spotchecks;
                    Eigen::MatrixXcd M =
                        quantization::dense_anti_wick(Afg) -
                        quantization::dense_anti_wick(Af) *
                            quantization::dense_anti_wick(Ag);
                    worst_diag_dense = std::max(
                        worst_diag_dense,
                        std::abs(linalg::spectral_norm_dense(M) - defect));
                }
            }
        }
    }
    if (worst_product > ctx.tol(tol::bound_slack)) o.fail("prop1-ii");
    if (worst_diag_dense > ctx.tol(tol::oracle_dense)) o.fail("diag-vs-dense");

    double worst_change = -std::numeric_limits<double>::infinity();
    for (int ell = 0; ell <= k; ++ell) {
        std::vector<Eigen::MatrixXcd> at_ell;
        for (const auto& f : corpus)
            at_ell.push_back(quantization::dense_anti_wick(
                quantization::op_anti_wick(f, shape, ell)));
        for (int ellp = 0; ellp < ell; ++ellp) {
            for (std::size_t a = 0; a < corpus.size(); ++a) {
                Eigen::MatrixXcd other = quantization::dense_anti_wick(
                    quantization::op_anti_wick(corpus[a], shape, ellp));
                double diffn =
                    linalg::spectral_norm_dense(at_ell[a] - other);
                double cap =
                    2.0 * quantization::lipschitz_bound(corpus[a]) *
                    std::pow(static_cast<double>(D), -std::min(ellp, k - ell));
                worst_change = std::max(worst_change, diffn - cap);
            }
        }
    }
    if (worst_change > ctx.tol(tol::bound_slack)) o.fail("prop1-iii");

    o.detail << " corpus=" << corpus.size() << " worst_exact_defect="
             << fmt(worst_exact) << " (tol " << fmt(ctx.tol(tol::egorov_exact))
             << ") worst_prop2_excess=" << fmt(worst_p2)
             << " worst_product_excess=" << fmt(worst_product)
             << " worst_change_excess=" << fmt(worst_change) << " (tol "
             << fmt(ctx.tol(tol::bound_slack)) << ")";
    return o;
}

// ── 7. Eigenstate families ───────────────────────────────────────────────────

Outcome criterion7(Ctx& ctx) {
    Outcome o;
    const double half = 1.0 / std::sqrt(2.0);
    const std::vector<Cx> w = {Cx(half, 0.0), Cx(0.0, 0.0), Cx(half, 0.0),
                               Cx(0.0, 0.0)};
    const std::array<double, 4> prob = {0.5, 0.0, 0.5, 0.0};
    double worst_res = 0.0;
    double worst_prod = 0.0;
    double worst_tv = 0.0;
    double worst_shannon = 0.0;
    for (int k = 2; k <= 6; ++k) {
        RegisterShape shape = hilbert::make_shape(4, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(4, k);
            continue;
        }
        StateVector psi = baker::tensor_eigenstate(w, k);
        StateVector bpsi = baker::apply_baker(psi, 1);
        Cx lambda = hilbert::overlap(psi, bpsi);
        double acc = 0.0;
        for (std::size_t j = 0; j < psi.amps.size(); ++j)
            acc += std::norm(bpsi.amps[j] - lambda * psi.amps[j]);
        worst_res = std::max(worst_res, std::sqrt(acc));

        for (int ell = 0; ell <= k; ++ell) {
            auto hm = measures::husimi(psi, ell);
            auto S = static_cast<std::size_t>(ipow_checked(4, k - ell));
            for (std::size_t ord = 0; ord < hm.weights.size(); ++ord) {
                double expected = 1.0;
                std::size_t e = ord / S;
                for (int i = 0; i < ell; ++i) {
                    expected *= prob[e % 4];
                    e /= 4;
                }
                std::size_t t = ord % S;
                for (int i = 0; i < k - ell; ++i) {
                    expected *= prob[t % 4];
                    t /= 4;
                }
                worst_prod = std::max(worst_prod,
                                      std::abs(hm.weights[ord] - expected));
            }
        }

        symbolic::BernoulliWeights bw{{0.5, 0.0, 0.5, 0.0}};
        auto ref = measures::bernoulli_product(bw, bw);
        int ell = k / 2;
        auto hm = measures::husimi(psi, ell);
        for (auto [n, np] : std::vector<std::pair<int, int>>{
                 {1, 1}, {std::min(2, ell), std::min(2, k - ell)}}) {
            if (n < 1 || np < 1) continue;
            worst_tv = std::max(
                worst_tv, measures::tv_distance_on_cylinders(hm, ref, n, np));
        }
        worst_shannon =
            std::max(worst_shannon, std::abs(measures::shannon_entropy(psi) -
                                             k * std::log(2.0)));
    }
    if (worst_res > ctx.tol(tol::family_residual)) o.fail("tensor-residual");
    if (worst_prod > ctx.tol(tol::husimi_product)) o.fail("husimi-product");
    if (worst_tv > ctx.tol(tol::tv_product)) o.fail("tv");
    if (worst_shannon > ctx.tol(tol::tensor_shannon)) o.fail("shannon");

    double prev_norm = std::numeric_limits<double>::infinity();
    double worst_ex3 = 0.0;
    bool monotone = true;
    for (int k : {5, 7, 9, 11}) {
        RegisterShape shape = hilbert::make_shape(2, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(2, k);
            continue;
        }
        StateVector psi = baker::example3_state(k);
        StateVector bpsi = baker::apply_baker(psi, 1);
        worst_ex3 = std::max(worst_ex3, dist(bpsi, psi));
        double nn = hilbert::norm(psi);
        if (!(nn < prev_norm) || !(nn > 1.0)) monotone = false;
        prev_norm = nn;
    }
    if (worst_ex3 > ctx.tol(tol::family_residual)) o.fail("example3-residual");
    if (!monotone) o.fail("example3-monotone");

    o.detail << " worst_tensor_residual=" << fmt(worst_res)
             << " worst_husimi_product_dev=" << fmt(worst_prod)
             << " worst_tv=" << fmt(worst_tv)
             << " worst_shannon_dev=" << fmt(worst_shannon)
             << " worst_example3_residual=" << fmt(worst_ex3)
             << " norm_monotone=" << (monotone ? "yes" : "no");
    return o;
}

// ── 8. Invariance lemma ──────────────────────────────────────────────────────

Outcome criterion8(Ctx& ctx) {
    Outcome o;
    double worst = 0.0;
    std::size_t vectors = 0;
    for (int k = 1; k <= 8; ++k) {
        RegisterShape shape = hilbert::make_shape(2, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(2, k);
            continue;
        }
        const auto& dec = ctx.decomposition(2, k);
        for (const auto& s : dec.spaces) {
            for (const auto& v : s.basis) {
                ++vectors;
                for (int n = 1; n <= std::min(4, k); ++n) {
                    auto base = offset_masses(v, n, 0);
                    for (int l = 1; l <= k - n; ++l) {
                        auto shifted = offset_masses(v, n, l);
                        for (std::size_t i = 0; i < base.size(); ++i)
                            worst = std::max(
                                worst, std::abs(shifted[i] - base[i]));
                    }
                }
            }
        }
    }
    if (worst > ctx.tol(tol::invariance)) o.fail("invariance");
    o.detail << " vectors=" << vectors << " worst_mass_shift=" << fmt(worst)
             << " (tol " << fmt(ctx.tol(tol::invariance)) << ")";
    return o;
}

// ── 9. EUP engine ────────────────────────────────────────────────────────────

Outcome criterion9(Ctx& ctx) {
    Outcome o;
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (int N : {4, 8, 16, 64}) {
        auto dim = static_cast<Eigen::Index>(N);
        int blocks = std::max(2, std::min(4, N / 2));
        for (int t = 0; t < 200; ++t) {
            std::uint64_t s = mix_seed(
                ctx.opts.seed,
                0x9000u + static_cast<std::uint64_t>(N) * 4096u +
                    static_cast<std::uint64_t>(t));
            auto U = eup::haar_unitary(dim, mix_seed(s, 1));
            auto psi = eup::random_unit_vector(dim, mix_seed(s, 2));
            auto scalar = eup::scalar_eup_check(U, psi);
            auto part = eup::random_partition(dim, blocks, mix_seed(s, 3));
            auto vec = eup::vector_eup_check(U, part, psi);
            if (!scalar.satisfied) ++violations;
            if (!vec.satisfied) ++violations;
            min_slack = std::min({min_slack, scalar.slack, vec.slack});
        }
    }
    if (violations != 0) o.fail("random-trials");

    RegisterShape shape = hilbert::make_shape(2, 3);
    double worst_cn = 0.0;
    if (ctx.fits(shape)) {
        Eigen::MatrixXcd Bk = linalg::dense_from_apply(
            [&](const StateVector& x) {
                return baker::apply_baker(x, shape.k);
            },
            shape);
        for (int n = 1; n <= 3; ++n) {
            double cb = eup::c_block(Bk, eup::word_partition(shape, n));
            worst_cn =
                std::max(worst_cn, std::abs(cb - std::pow(2.0, -0.5 * n)));
        }
        if (worst_cn > ctx.tol(tol::block_constant)) o.fail("block-constant");
    } else {
        o.skip_shape(2, 3);
    }

    Eigen::MatrixXcd U4 = hilbert::dft_matrix(4).conjugate();
    Eigen::VectorXcd w4(4);
    const double half = 1.0 / std::sqrt(2.0);
    w4 << Cx(half, 0.0), Cx(0.0, 0.0), Cx(half, 0.0), Cx(0.0, 0.0);
    auto sat = eup::scalar_eup_check(U4, w4);
    if (!sat.satisfied || !sat.saturated ||
        std::abs(sat.slack) >= ctx.tol(tol::eup_slack))
        o.fail("saturating-example");

    o.detail << " trial_violations=" << violations
             << " min_trial_slack=" << fmt(min_slack)
             << " worst_block_constant_dev=" << fmt(worst_cn) << " (tol "
             << fmt(ctx.tol(tol::block_constant)) << ") saturating_slack="
             << fmt(sat.slack) << " (tol " << fmt(ctx.tol(tol::eup_slack))
             << ")";
    return o;
}

// ── 10. Homoclinic rectangle identity ────────────────────────────────────────

Outcome criterion10(Ctx& ctx) {
    Outcome o;
    RegisterShape shape = hilbert::make_shape(2, 6);
    if (!ctx.fits(shape)) {
        o.skip_shape(2, 6);
        return o;
    }
    double worst = 0.0;
    for (auto [n, np] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}}) {
        auto qcells = static_cast<std::size_t>(ipow_checked(2, n));
        auto pcells = static_cast<std::size_t>(ipow_checked(2, np));
        for (std::size_t qa = 0; qa < qcells; ++qa) {
            for (std::size_t pa = 0; pa < pcells; ++pa) {
                Word wq(static_cast<std::size_t>(n));
                Word wp(static_cast<std::size_t>(np));
                for (int i = 0; i < n; ++i)
                    wq[static_cast<std::size_t>(i)] =
                        static_cast<int>((qa >> (n - 1 - i)) & 1u);
                for (int i = 0; i < np; ++i)
                    wp[static_cast<std::size_t>(i)] =
                        static_cast<int>((pa >> (np - 1 - i)) & 1u);
                worst = std::max(worst, partitions::homoclinic_identity_defect(
                                            shape, 2, wq, wp));
            }
        }
    }
    if (worst > ctx.tol(tol::homoclinic)) o.fail("identity");
    o.detail << " worst_defect=" << fmt(worst) << " (tol "
             << fmt(ctx.tol(tol::homoclinic)) << ")";
    return o;
}

// ── 11. Quantum ergodicity surrogates ────────────────────────────────────────

Outcome criterion11(Ctx& ctx) {
    Outcome o;
    auto f1 = quantization::indicator_observable(2, Word{0}, Word{});
    auto f2 = quantization::indicator_observable(2, Word{1}, Word{0});
    double worst_mean = 0.0;
    std::array<std::vector<double>, 2> series;
    for (int k = 4; k <= 9; ++k) {
        RegisterShape shape = hilbert::make_shape(2, k);
        if (!ctx.fits(shape)) {
            o.skip_shape(2, k);
            continue;
        }
        const auto& dec = ctx.decomposition(2, k);
        int ell = k / 2;
        int fi = 0;
        for (const auto& f : {f1, f2}) {
            auto stats = quantization::qe_variance(dec, f, ell);
            worst_mean =
                std::max(worst_mean, std::abs(stats.mean - stats.integral));
            series[static_cast<std::size_t>(fi)].push_back(stats.variance);
            ++fi;
        }
    }
    // Trace identity at the remaining shapes the suite already decomposed.
    for (const auto& [key, dec] : ctx.cache) {
        auto [D, k] = key;
        if (D == 2 && k >= 4 && k <= 9) continue;
        auto g = quantization::indicator_observable(D, Word{0}, Word{});
        auto stats = quantization::qe_variance(dec, g, k / 2);
        worst_mean =
            std::max(worst_mean, std::abs(stats.mean - stats.integral));
    }
    if (worst_mean > ctx.tol(tol::qe_mean)) o.fail("trace-identity");
    bool decreasing = true;
    for (const auto& v : series) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (!(v[i] < v[i - 1])) decreasing = false;
        if (v.size() < 2) decreasing = decreasing && v.empty();
    }
    if (!decreasing) o.fail("variance-decrease");
    o.detail << " worst_mean_gap=" << fmt(worst_mean) << " (tol "
             << fmt(ctx.tol(tol::qe_mean)) << ") variance_decreasing="
             << (decreasing ? "yes" : "no");
    if (!series[0].empty()) {
        o.detail << " variance_f1=";
        for (std::size_t i = 0; i < series[0].size(); ++i)
            o.detail << (i ? "," : "") << fmt(series[0][i]);
    }
    return o;
}

// ── 12. Determinism ──────────────────────────────────────────────────────────

using CriterionFn = std::function<Outcome(Ctx&)>;
const std::vector<std::pair<int, CriterionFn>>& criterion_table();

Outcome criterion12(Ctx& ctx) {
    Outcome o;
    for (int id : {1, 5, 9, 10}) {
        const auto& table = criterion_table();
        const auto& fn = table[static_cast<std::size_t>(id - 1)].second;
        Ctx a{ctx.opts, {}};
        Ctx b{ctx.opts, {}};
        Outcome ra = fn(a);
        Outcome rb = fn(b);
        if (!ra.pass || !rb.pass) o.fail("rerun-" + std::to_string(id));
        if (ra.detail.str() != rb.detail.str())
            o.fail("rerun-mismatch-" + std::to_string(id));
        if (ra.skipped) o.skipped = true;
    }

    fs::path root = fs::temp_directory_path() / "walshbaker-acceptance";
    std::error_code ec;
    fs::remove_all(root, ec);
    fs::create_directories(root);

    struct Job {
        std::string label;
        experiment::Manifest m;
        std::string data_file;
    };
    std::vector<Job> jobs;
    {
        experiment::Manifest m = experiment::default_manifest();
        m.seed = ctx.opts.seed;
        m.command = "spectrum";
        m.D = 2;
        m.k = 3;
        jobs.push_back({"spectrum", m, "spectrum.csv"});
        m.command = "husimi";
        m.k = 6;
        m.ell = 3;
        m.format = "csv";
        jobs.push_back({"husimi-csv", m, "husimi.csv"});
        m.format = "pgm";
        jobs.push_back({"husimi-pgm", m, "husimi.pgm"});
        experiment::Manifest e = experiment::default_manifest();
        e.seed = ctx.opts.seed;
        e.command = "eup";
        e.D = 2;
        e.k = 3;
        jobs.push_back({"eup", e, "eup.csv"});
        experiment::Manifest q = experiment::default_manifest();
        q.seed = ctx.opts.seed;
        q.command = "qe-variance";
        q.D = 2;
        q.k = 4;
        jobs.push_back({"qe", q, "qe.csv"});
    }
    experiment::RunOptions ro;
    ro.trials = 20;
    std::ostringstream sink;
    int identical = 0;
    for (const auto& job : jobs) {
        if (!ctx.fits(hilbert::make_shape(job.m.D, job.m.k))) {
            o.skipped = true;
            o.detail << " skip(" << job.label << ")";
            continue;
        }
        experiment::Manifest ma = job.m;
        experiment::Manifest mb = job.m;
        ma.out = (root / (job.label + "-a")).string();
        mb.out = (root / (job.label + "-b")).string();
        int rca = experiment::run_command(ma, ro, sink);
        int rcb = experiment::run_command(mb, ro, sink);
        if (rca != 0 || rcb != 0) o.fail("bundle-run-" + job.label);
        std::string da = file_bytes(fs::path(ma.out) / job.data_file);
        std::string db = file_bytes(fs::path(mb.out) / job.data_file);
        if (da.empty() || da != db) o.fail("bundle-bytes-" + job.label);
        if (!fs::exists(fs::path(ma.out) / "metadata.txt") ||
            !fs::exists(fs::path(mb.out) / "metadata.txt"))
            o.fail("bundle-metadata-" + job.label);
        if (da == db && !da.empty()) ++identical;
    }
    fs::remove_all(root, ec);
    o.detail << " reruns_checked=4 bundles_identical=" << identical << "/"
             << jobs.size();
    return o;
}

const std::vector<std::pair<int, CriterionFn>>& criterion_table() {
    static const std::vector<std::pair<int, CriterionFn>> table = {
        {1, criterion1},  {2, criterion2},  {3, criterion3},
        {4, criterion4},  {5, criterion5},  {6, criterion6},
        {7, criterion7},  {8, criterion8},  {9, criterion9},
        {10, criterion10}, {11, criterion11}, {12, criterion12}};
    return table;
}

const char* criterion_name(int id) {
    switch (id) {
        case 1: return "unitarity-period";
        case 2: return "spectral-completeness";
        case 3: return "entropy-bound";
        case 4: return "refined-bound";
        case 5: return "projector-norms";
        case 6: return "egorov";
        case 7: return "eigenstate-families";
        case 8: return "invariance";
        case 9: return "eup-engine";
        case 10: return "homoclinic-identity";
        case 11: return "quantum-ergodicity";
        case 12: return "determinism";
        default: return "unknown";
    }
}

}  // namespace

bool AcceptanceReport::all_pass() const {
    for (const auto& row : rows)
        if (!row.pass) return false;
    return true;
}

AcceptanceReport run_acceptance_suite(const AcceptanceOptions& opts,
                                      std::ostream& log) {
    AcceptanceReport report;
    Ctx ctx{opts, {}};
    for (const auto& [id, fn] : criterion_table()) {
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), id) ==
                opts.only.end())
            continue;
        Outcome o = fn(ctx);
        CriterionResult row;
        row.id = id;
        row.name = criterion_name(id);
        row.pass = o.pass;
        row.skipped = o.skipped;
        row.detail = o.detail.str();
        const char* label = !row.pass ? "FAIL" : (row.skipped ? "SKIP" : "PASS");
        log << "criterion " << id << " " << label << " " << row.name << ":"
            << row.detail << "\n";
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace walshbaker::acceptance
