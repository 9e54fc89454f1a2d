#include "walshbaker/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "walshbaker/partitions.hpp"
#include "walshbaker/tolerances.hpp"

namespace walshbaker::measures {

namespace {

std::size_t reverse_digits(std::size_t t, int D, int m) {
    std::size_t r = 0;
    for (int i = 0; i < m; ++i) {
        r = r * static_cast<std::size_t>(D) + t % static_cast<std::size_t>(D);
        t /= static_cast<std::size_t>(D);
    }
    return r;
}

}  // namespace

HusimiMeasure husimi(const StateVector& psi, int ell) {
    const RegisterShape shape = psi.shape;
    if (ell < 0 || ell > shape.k)
        throw std::invalid_argument("husimi: ell out of range");
    const int m = shape.k - ell;
    const std::size_t S = static_cast<std::size_t>(ipow_checked(shape.D, m));

    StateVector phi = psi;
    for (int axis = ell + 1; axis <= shape.k; ++axis)
        phi = hilbert::apply_dft_axis(phi, axis, Direction::forward);

    HusimiMeasure hm{shape, ell, std::vector<double>(phi.amps.size(), 0.0)};
    for (std::size_t j = 0; j < phi.amps.size(); ++j) {
        std::size_t e = j / S;
        std::size_t t = j % S;
        // ⟨ε′·ε|ψ⟩ sits at the digit-reversed momentum suffix of the transform.
        hm.weights[e * S + reverse_digits(t, shape.D, m)] = std::norm(phi.amps[j]);
    }
    return hm;
}

double cylinder_mass(const HusimiMeasure& hm, const Word& w_q, const Word& w_p) {
    const RegisterShape shape = hm.shape;
    symbolic::check_word(w_q, shape.D);
    symbolic::check_word(w_p, shape.D);
    const int n = static_cast<int>(w_q.size());
    const int np = static_cast<int>(w_p.size());
    if (n > hm.ell || np > shape.k - hm.ell)
        throw std::invalid_argument("cylinder_mass: words deeper than the rectangle grid");

    const std::size_t S = static_cast<std::size_t>(ipow_checked(shape.D, shape.k - hm.ell));
    const std::size_t qdiv = static_cast<std::size_t>(ipow_checked(shape.D, hm.ell - n));
    const std::size_t pdiv = static_cast<std::size_t>(ipow_checked(shape.D, shape.k - hm.ell - np));
    const std::size_t qv = static_cast<std::size_t>(hilbert::word_number(w_q, shape.D));
    const std::size_t pv = static_cast<std::size_t>(hilbert::word_number(w_p, shape.D));

    double mass = 0.0;
    for (std::size_t ord = 0; ord < hm.weights.size(); ++ord)
        if (ord / S / qdiv == qv && (ord % S) / pdiv == pv) mass += hm.weights[ord];
    return mass;
}

double shannon_entropy(const StateVector& psi) {
    std::vector<double> w(psi.amps.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::norm(psi.amps[j]);
    return symbolic::partition_entropy(w);
}

double wehrl_entropy(const StateVector& psi, int ell) {
    return symbolic::partition_entropy(husimi(psi, ell).weights);
}

double moments(const StateVector& psi, double r) {
    if (r <= -1.0 || r == 0.0)
        throw std::invalid_argument("moments: r must exceed -1 and be nonzero");
    double s = 0.0;
    for (const Cx& a : psi.amps) s += std::pow(std::norm(a), 1.0 + r);
    return std::pow(s, 1.0 / r);
}

ClassicalMeasure bernoulli_product(BernoulliWeights q, BernoulliWeights p) {
    symbolic::check_weights(q);
    symbolic::check_weights(p);
    if (q.p.size() != p.p.size())
        throw std::invalid_argument("bernoulli_product: alphabet mismatch");
    return ClassicalMeasure{std::move(q), std::move(p)};
}

ClassicalMeasure lebesgue_measure(int D) {
    if (D < 2) throw std::invalid_argument("lebesgue_measure: D must be at least 2");
    BernoulliWeights u{std::vector<double>(static_cast<std::size_t>(D),
                                           1.0 / static_cast<double>(D))};
    return ClassicalMeasure{u, u};
}

double classical_mass(const ClassicalMeasure& mu, const Word& w_q, const Word& w_p) {
    const int D = static_cast<int>(mu.q_weights.p.size());
    symbolic::check_word(w_q, D);
    symbolic::check_word(w_p, D);
    double mass = 1.0;
    for (int d : w_q) mass *= mu.q_weights.p[static_cast<std::size_t>(d)];
    for (int d : w_p) mass *= mu.p_weights.p[static_cast<std::size_t>(d)];
    return mass;
}

double tv_distance_on_cylinders(const HusimiMeasure& hm, const ClassicalMeasure& ref,
                                int n, int n_prime) {
    const RegisterShape shape = hm.shape;
    if (static_cast<int>(ref.q_weights.p.size()) != shape.D)
        throw std::invalid_argument("tv_distance_on_cylinders: alphabet mismatch");
    if (n < 0 || n > hm.ell || n_prime < 0 || n_prime > shape.k - hm.ell)
        throw std::invalid_argument("tv_distance_on_cylinders: incompatible depths");

    const std::size_t S = static_cast<std::size_t>(ipow_checked(shape.D, shape.k - hm.ell));
    const std::size_t qdiv = static_cast<std::size_t>(ipow_checked(shape.D, hm.ell - n));
    const std::size_t pdiv =
        static_cast<std::size_t>(ipow_checked(shape.D, shape.k - hm.ell - n_prime));
    const std::size_t pcells = static_cast<std::size_t>(ipow_checked(shape.D, n_prime));

    std::vector<double> quantum(static_cast<std::size_t>(ipow_checked(shape.D, n + n_prime)),
                                0.0);
    for (std::size_t ord = 0; ord < hm.weights.size(); ++ord) {
        std::size_t qpre = ord / S / qdiv;
        std::size_t ppre = (ord % S) / pdiv;
        quantum[qpre * pcells + ppre] += hm.weights[ord];
    }

    double tv = 0.0;
    for (std::size_t cell = 0; cell < quantum.size(); ++cell) {
        double classical = 1.0;
        std::size_t qv = cell / pcells;
        std::size_t pv = cell % pcells;
        for (int i = 0; i < n; ++i) {
            classical *= ref.q_weights.p[qv % static_cast<std::size_t>(shape.D)];
            qv /= static_cast<std::size_t>(shape.D);
        }
        for (int i = 0; i < n_prime; ++i) {
            classical *= ref.p_weights.p[pv % static_cast<std::size_t>(shape.D)];
            pv /= static_cast<std::size_t>(shape.D);
        }
        tv += std::abs(quantum[cell] - classical);
    }
    return 0.5 * tv;
}

void export_husimi_grid(const HusimiMeasure& hm, const std::string& path,
                        GridFormat format) {
    const RegisterShape shape = hm.shape;
    const std::size_t W = static_cast<std::size_t>(ipow_checked(shape.D, hm.ell));
    const std::size_t H = static_cast<std::size_t>(ipow_checked(shape.D, shape.k - hm.ell));
    const double dim = static_cast<double>(shape.dimension());

    // Row r covers the momentum interval just below 1 − r/H, so its p-word
    // value is H−1−r; column c covers q ∈ [c/W, (c+1)/W).
    auto density = [&](std::size_t r, std::size_t c) {
        return dim * hm.weights[c * H + (H - 1 - r)];
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_husimi_grid: cannot open " + path);

    if (format == GridFormat::csv) {
        out << "# walsh-husimi D=" << shape.D << " k=" << shape.k << " ell=" << hm.ell
            << "\n";
        for (std::size_t r = 0; r < H; ++r) {
            for (std::size_t c = 0; c < W; ++c) {
                if (c) out << ",";
                out << format_double(density(r, c));
            }
            out << "\n";
        }
    } else {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (std::size_t r = 0; r < H; ++r)
            for (std::size_t c = 0; c < W; ++c) {
                double v = std::log(density(r, c) + 1e-300);
                lo = first ? v : std::min(lo, v);
                hi = first ? v : std::max(hi, v);
                first = false;
            }
        out << "P2\n";
        out << "# walsh-husimi D=" << shape.D << " k=" << shape.k << " ell=" << hm.ell
            << " log gray scale, 0 = zero weight; invert grays to render high density"
               " as black\n";
        out << W << " " << H << "\n255\n";
        for (std::size_t r = 0; r < H; ++r) {
            for (std::size_t c = 0; c < W; ++c) {
                int gray = 0;
                if (hi > lo) {
                    double v = std::log(density(r, c) + 1e-300);
                    gray = static_cast<int>(std::lround(255.0 * (v - lo) / (hi - lo)));
                }
                if (c) out << " ";
                out << gray;
            }
            out << "\n";
        }
    }
    if (!out) throw std::runtime_error("export_husimi_grid: write failed for " + path);
}

EntropyReport entropy_report(const StateVector& psi) {
    EntropyReport rep;
    rep.shannon = shannon_entropy(psi);
    rep.wehrl_by_ell.reserve(static_cast<std::size_t>(psi.shape.k) + 1);
    for (int ell = 0; ell <= psi.shape.k; ++ell)
        rep.wehrl_by_ell.push_back(wehrl_entropy(psi, ell));
    rep.refined_by_n.reserve(static_cast<std::size_t>(psi.shape.k));
    for (int n = 1; n <= psi.shape.k; ++n)
        rep.refined_by_n.push_back(partitions::refined_entropy(psi, n));
    rep.eup_bound = 0.5 * static_cast<double>(psi.shape.k) *
                    std::log(static_cast<double>(psi.shape.D));
    rep.slack = rep.shannon - rep.eup_bound;
    return rep;
}

}  // namespace walshbaker::measures
