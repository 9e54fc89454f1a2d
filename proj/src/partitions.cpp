#include "walshbaker/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "walshbaker/linalg.hpp"
#include "walshbaker/symbolic.hpp"

namespace walshbaker::partitions {

namespace {

// π_d in place: zero every amplitude whose first digit differs from d.
void project_first_digit(StateVector& psi, int d) {
    const std::size_t S = psi.amps.size() / static_cast<std::size_t>(psi.shape.D);
    for (std::size_t j = 0; j < psi.amps.size(); ++j)
        if (j / S != static_cast<std::size_t>(d)) psi.amps[j] = Cx{0.0, 0.0};
}

void check_projector_word(const Word& word, int D) {
    if (word.empty())
        throw std::invalid_argument("refined projector: word must be nonempty");
    symbolic::check_word(word, D);
}

}  // namespace

StateVector apply_refined_projector(const StateVector& psi, const Word& word) {
    check_projector_word(word, psi.shape.D);
    const int n = static_cast<int>(word.size());
    StateVector out = psi;
    project_first_digit(out, word[0]);
    for (int i = 1; i < n; ++i) {
        out = baker::apply_baker(out, 1);
        project_first_digit(out, word[static_cast<std::size_t>(i)]);
    }
    return baker::apply_baker(out, -(static_cast<long long>(n) - 1));
}

StateVector apply_refined_projector_adjoint(const StateVector& psi, const Word& word) {
    check_projector_word(word, psi.shape.D);
    const int n = static_cast<int>(word.size());
    StateVector out = baker::apply_baker(psi, static_cast<long long>(n) - 1);
    for (int i = n - 1; i >= 1; --i) {
        project_first_digit(out, word[static_cast<std::size_t>(i)]);
        out = baker::apply_baker(out, -1);
    }
    project_first_digit(out, word[0]);
    return out;
}

double refined_projector_norm(RegisterShape shape, const Word& word,
                              std::size_t dense_cap) {
    check_projector_word(word, shape.D);
    auto apply = [&](const StateVector& psi) { return apply_refined_projector(psi, word); };
    auto apply_adj = [&](const StateVector& psi) {
        return apply_refined_projector_adjoint(psi, word);
    };
    if (shape.dimension() <= dense_cap)
        return linalg::spectral_norm_dense(linalg::dense_from_apply(apply, shape));
    return linalg::spectral_norm_power(apply, apply_adj, shape);
}

double cylinder_weight(const StateVector& psi, const Word& word) {
    return cylinder_mass_at_offset(psi, word, 0);
}

double cylinder_mass_at_offset(const StateVector& psi, const Word& word, int l) {
    check_projector_word(word, psi.shape.D);
    const int n = static_cast<int>(word.size());
    if (l < 0) throw std::invalid_argument("cylinder_mass_at_offset: offset must be nonnegative");
    if (l + n > psi.shape.k)
        throw std::invalid_argument("cylinder_mass_at_offset: word overruns the register");
    const int D = psi.shape.D;
    const std::size_t target = static_cast<std::size_t>(hilbert::word_number(word, D));
    const std::size_t tail = static_cast<std::size_t>(ipow_checked(D, psi.shape.k - l - n));
    const std::size_t window = static_cast<std::size_t>(ipow_checked(D, n));
    double mass = 0.0;
    for (std::size_t j = 0; j < psi.amps.size(); ++j)
        if ((j / tail) % window == target) mass += std::norm(psi.amps[j]);
    return mass;
}

double refined_entropy(const StateVector& psi, int n) {
    if (n < 1 || n > psi.shape.k)
        throw std::invalid_argument("refined_entropy: need 1 <= n <= k");
    const std::size_t words = static_cast<std::size_t>(ipow_checked(psi.shape.D, n));
    const std::size_t tail = psi.amps.size() / words;
    std::vector<double> weights(words, 0.0);
    for (std::size_t j = 0; j < psi.amps.size(); ++j)
        weights[j / tail] += std::norm(psi.amps[j]);
    return symbolic::partition_entropy(weights);
}

CoverSet make_cover(int n, std::vector<Word> words, int D) {
    if (n < 1) throw std::invalid_argument("make_cover: need n >= 1");
    for (const Word& w : words) {
        if (static_cast<int>(w.size()) != n)
            throw std::invalid_argument("make_cover: all words must have length n");
        symbolic::check_word(w, D);
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return CoverSet{n, std::move(words)};
}

double cover_defect(const StateVector& psi, const CoverSet& W) {
    if (W.n > psi.shape.k)
        throw std::invalid_argument("cover_defect: cover depth exceeds the register");
    double covered = 0.0;
    for (const Word& w : W.words) covered += cylinder_weight(psi, w);
    double total = 0.0;
    for (const Cx& a : psi.amps) total += std::norm(a);
    return std::sqrt(std::max(0.0, total - covered));
}

CoverSet greedy_cover(const StateVector& psi, int n, double theta) {
    if (n < 1 || n > psi.shape.k)
        throw std::invalid_argument("greedy_cover: need 1 <= n <= k");
    if (theta < 0.0) throw std::invalid_argument("greedy_cover: theta must be nonnegative");
    const int D = psi.shape.D;
    const std::size_t words = static_cast<std::size_t>(ipow_checked(D, n));
    const std::size_t tail = psi.amps.size() / words;
    std::vector<double> weights(words, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < psi.amps.size(); ++j) {
        weights[j / tail] += std::norm(psi.amps[j]);
        total += std::norm(psi.amps[j]);
    }
    std::vector<std::size_t> order(words);
    for (std::size_t i = 0; i < words; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return weights[a] > weights[b];  // stable keeps ties lexicographic
    });

    CoverSet cover{n, {}};
    double residual = total;
    for (std::size_t i : order) {
        if (residual <= theta * theta) break;
        residual -= weights[i];
        Word w(static_cast<std::size_t>(n));
        std::size_t v = i;
        for (int d = n - 1; d >= 0; --d) {
            w[static_cast<std::size_t>(d)] = static_cast<int>(v % static_cast<std::size_t>(D));
            v /= static_cast<std::size_t>(D);
        }
        cover.words.push_back(std::move(w));
    }
    std::sort(cover.words.begin(), cover.words.end());
    return cover;
}

bool time_fraction_member(const Word& word, const CoverSet& W_o, double rho, int D) {
    const int n = static_cast<int>(word.size());
    const int n_o = W_o.n;
    if (n < n_o)
        throw std::invalid_argument("time_fraction_member: word shorter than the window");
    symbolic::check_word(word, D);
    if (rho <= 0.0 || rho > 1.0)
        throw std::invalid_argument("time_fraction_member: rho must lie in (0,1]");
    int hits = 0;
    for (int j = 0; j + n_o <= n; ++j) {
        Word window(word.begin() + j, word.begin() + j + n_o);
        if (std::binary_search(W_o.words.begin(), W_o.words.end(), window)) ++hits;
    }
    double fraction = static_cast<double>(hits) / static_cast<double>(n - n_o + 1);
    return fraction >= rho;
}

StateVector apply_rectangle_projector(const StateVector& psi, const Word& w_q,
                                      const Word& w_p) {
    const RegisterShape shape = psi.shape;
    symbolic::check_word(w_q, shape.D);
    symbolic::check_word(w_p, shape.D);
    const int n = static_cast<int>(w_q.size());
    const int np = static_cast<int>(w_p.size());
    if (n + np > shape.k)
        throw std::invalid_argument("apply_rectangle_projector: depths exceed the register");

    StateVector out = psi;
    for (int i = 1; i <= np; ++i)
        out = hilbert::apply_dft_axis(out, shape.k - np + i, Direction::forward);
    for (std::size_t j = 0; j < out.amps.size(); ++j) {
        bool keep = true;
        for (int i = 1; i <= n && keep; ++i)
            keep = hilbert::digit_at(j, i, shape) == w_q[static_cast<std::size_t>(i - 1)];
        // Momentum digits sit on the trailing axes in reversed word order.
        for (int i = 1; i <= np && keep; ++i)
            keep = hilbert::digit_at(j, shape.k - i + 1, shape) ==
                   w_p[static_cast<std::size_t>(i - 1)];
        if (!keep) out.amps[j] = Cx{0.0, 0.0};
    }
    for (int i = 1; i <= np; ++i)
        out = hilbert::apply_dft_axis(out, shape.k - np + i, Direction::inverse);
    return out;
}

double homoclinic_identity_defect(RegisterShape shape, int ell, const Word& w_q,
                                  const Word& w_p, std::size_t dense_cap) {
    if (ell < 1 || 2 * ell > shape.k)
        throw std::invalid_argument("homoclinic_identity_defect: need 1 <= ell and 2*ell <= k");
    if (shape.dimension() > dense_cap)
        throw ResourceLimitError("homoclinic_identity_defect: dimension exceeds dense cap");
    const Word zeros(static_cast<std::size_t>(ell), 0);
    const double scale =
        std::pow(static_cast<double>(shape.D),
                 -static_cast<double>(w_q.size()) - static_cast<double>(w_p.size()));

    auto corner = [&](const StateVector& psi) {
        StateVector v = apply_rectangle_projector(psi, zeros, zeros);
        StateVector u = baker::apply_baker(v, shape.k);
        u = apply_rectangle_projector(u, w_q, w_p);
        u = baker::apply_baker(u, -static_cast<long long>(shape.k));
        u = apply_rectangle_projector(u, zeros, zeros);
        for (std::size_t i = 0; i < u.amps.size(); ++i)
            u.amps[i] -= scale * v.amps[i];
        return u;
    };
    return linalg::spectral_norm_dense(linalg::dense_from_apply(corner, shape));
}

}  // namespace walshbaker::partitions
