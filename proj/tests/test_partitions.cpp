#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "walshbaker/linalg.hpp"
#include "walshbaker/partitions.hpp"

using namespace walshbaker;
using namespace walshbaker::hilbert;
using namespace walshbaker::partitions;

namespace {

std::vector<Word> all_words(int D, int n) {
    std::vector<Word> out;
    long long total = ipow_checked(D, n);
    for (long long v = 0; v < total; ++v)
        out.push_back(oracles::digits_be(static_cast<std::size_t>(v), D, n));
    return out;
}

}  // namespace

TEST_CASE("single digit projector zeroes mismatched amplitudes") {
    RegisterShape s = make_shape(2, 3);
    StateVector psi = random_state(s, 81);
    for (int d = 0; d < 2; ++d) {
        StateVector out = apply_refined_projector(psi, {d});
        for (std::size_t j = 0; j < psi.amps.size(); ++j) {
            Cx want = digit_at(j, 1, s) == d ? psi.amps[j] : Cx{0, 0};
            CHECK(std::abs(out.amps[j] - want) < 1e-15);
        }
    }
    CHECK_THROWS_AS(apply_refined_projector(psi, {}), std::invalid_argument);
}

TEST_CASE("refined projectors resolve the identity") {
    for (int D : {2, 3}) {
        RegisterShape s = make_shape(D, 3);
        StateVector psi = random_state(s, 82 + D);
        for (int n = 1; n <= 3; ++n) {
            double total = 0.0;
            for (const Word& w : all_words(D, n)) {
                StateVector pw = apply_refined_projector(psi, w);
                double weight = norm(pw) * norm(pw);
                CHECK(weight == doctest::Approx(cylinder_weight(psi, w)).epsilon(1e-12));
                total += weight;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("refined projector matches its matrix form") {
    RegisterShape s = make_shape(2, 4);
    for (const Word& w : {Word{0, 1, 1}, Word{1, 0, 1}}) {
        Eigen::MatrixXcd impl = linalg::dense_from_apply(
            [&](const StateVector& v) { return apply_refined_projector(v, w); }, s);
        Eigen::MatrixXcd want = oracles::oracle_refined_projector(2, 4, w);
        CHECK((impl - want).cwiseAbs().maxCoeff() < 1e-13);

        Eigen::MatrixXcd adj = linalg::dense_from_apply(
            [&](const StateVector& v) { return apply_refined_projector_adjoint(v, w); }, s);
        CHECK((adj - impl.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }

    // Past the Ehrenfest depth the word outruns the register.
    RegisterShape s2 = make_shape(2, 2);
    Word deep{0, 1, 0};
    Eigen::MatrixXcd impl = linalg::dense_from_apply(
        [&](const StateVector& v) { return apply_refined_projector(v, deep); }, s2);
    CHECK((impl - oracles::oracle_refined_projector(2, 2, deep)).cwiseAbs().maxCoeff() < 1e-13);
    Eigen::MatrixXcd adj = linalg::dense_from_apply(
        [&](const StateVector& v) { return apply_refined_projector_adjoint(v, deep); }, s2);
    CHECK((adj - impl.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("refined projector norms") {
    RegisterShape s23 = make_shape(2, 3);
    for (const Word& w : all_words(2, 2))
        CHECK(refined_projector_norm(s23, w) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(refined_projector_norm(s23, Word(6, 0)) ==
          doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-10));
    CHECK(refined_projector_norm(make_shape(3, 2), Word(5, 0)) ==
          doctest::Approx(std::pow(3.0, -1.5)).epsilon(1e-10));

    // Independent singular value computation on the matrix form.
    for (const Word& w : {Word{0, 1}, Word{0, 1, 0, 1}}) {
        double direct = oracles::oracle_spectral_norm(
            oracles::oracle_refined_projector(2, 2, w));
        CHECK(refined_projector_norm(make_shape(2, 2), w) ==
              doctest::Approx(direct).epsilon(1e-9));
    }

    // Forcing the iterative path must agree with the dense path.
    CHECK(refined_projector_norm(s23, Word(5, 1), 1) ==
          doctest::Approx(refined_projector_norm(s23, Word(5, 1))).epsilon(1e-6));
}

TEST_CASE("cylinder weights on reference states") {
    RegisterShape s = make_shape(2, 3);
    StateVector q0 = basis_state(s, 0);
    for (int n = 1; n <= 3; ++n) {
        CHECK(cylinder_weight(q0, Word(n, 0)) == doctest::Approx(1.0));
        Word off(n, 0);
        off[0] = 1;
        CHECK(cylinder_weight(q0, off) == doctest::Approx(0.0));
    }

    StateVector p0 = walsh_transform(basis_state(s, 0), Direction::inverse);
    for (const Word& w : all_words(2, 2))
        CHECK(cylinder_weight(p0, w) == doctest::Approx(0.25).epsilon(1e-12));

    std::vector<Cx> w4 = {Cx{1 / std::sqrt(2.0), 0}, Cx{0, 0},
                          Cx{1 / std::sqrt(2.0), 0}, Cx{0, 0}};
    StateVector prod = tensor_state(4, {w4, w4, w4});
    CHECK(cylinder_weight(prod, {0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cylinder_weight(prod, {1}) == doctest::Approx(0.0));
    CHECK(cylinder_weight(prod, {2}) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(cylinder_weight(q0, Word(4, 0)), std::invalid_argument);
    CHECK_THROWS_AS(cylinder_mass_at_offset(q0, {0}, -1), std::invalid_argument);
    CHECK_THROWS_AS(cylinder_mass_at_offset(q0, {0, 0}, 2), std::invalid_argument);
}

TEST_CASE("refined entropy values and bounds") {
    RegisterShape s = make_shape(2, 4);
    StateVector q5 = basis_state(s, 5);
    for (int n = 1; n <= 4; ++n) CHECK(refined_entropy(q5, n) == doctest::Approx(0.0));

    StateVector psi = random_state(s, 85);
    double shannon = 0.0;
    for (const Cx& a : psi.amps) {
        double p = std::norm(a);
        if (p > 0) shannon -= p * std::log(p);
    }
    CHECK(refined_entropy(psi, 4) == doctest::Approx(shannon).epsilon(1e-12));

    CHECK_THROWS_AS(refined_entropy(psi, 0), std::invalid_argument);
    CHECK_THROWS_AS(refined_entropy(psi, 5), std::invalid_argument);
}

TEST_CASE("eigenstates carry at least half the metric entropy") {
    struct Case {
        int D;
        int k;
    };
    for (Case c : {Case{2, 6}, Case{3, 2}}) {
        baker::EigenDecomposition dec = baker::spectral_decompose(make_shape(c.D, c.k));
        double logD = std::log(static_cast<double>(c.D));
        for (const baker::EigenSpace& sp : dec.spaces)
            for (const StateVector& v : sp.basis) {
                for (int n = 1; n <= c.k; ++n) {
                    double h_n = refined_entropy(v, n);
                    CHECK(h_n >= 0.5 * n * logD - 1e-9);
                }
                // Block subadditivity: stationarity trades depth k for
                // floor(k/n) blocks plus a remainder.
                double h_k = refined_entropy(v, c.k);
                for (int n = 1; n < c.k; ++n) {
                    int q = c.k / n;
                    int r = c.k % n;
                    CHECK(h_k <= q * refined_entropy(v, n) + r * logD + 1e-9);
                }
            }
    }
}

TEST_CASE("cylinder masses are shift invariant on eigenstates") {
    RegisterShape s = make_shape(2, 5);
    baker::EigenDecomposition dec = baker::spectral_decompose(s);
    for (const baker::EigenSpace& sp : dec.spaces)
        for (const StateVector& v : sp.basis)
            for (int n : {1, 2}) {
                for (const Word& w : all_words(2, n)) {
                    double base = cylinder_weight(v, w);
                    for (int l = 1; l + n <= 5; ++l)
                        CHECK(cylinder_mass_at_offset(v, w, l) ==
                              doctest::Approx(base).epsilon(1e-10));
                    // One-step refinement marginalizes back to the word.
                    double sum = 0.0;
                    for (int a = 0; a < 2; ++a) {
                        Word aw;
                        aw.push_back(a);
                        aw.insert(aw.end(), w.begin(), w.end());
                        sum += cylinder_weight(v, aw);
                    }
                    CHECK(sum == doctest::Approx(base).epsilon(1e-10));
                }
            }

    // The pure marginalization identity needs no eigenstate.
    StateVector psi = random_state(s, 86);
    for (const Word& w : all_words(2, 2))
        for (int l = 0; l + 3 <= 5; ++l) {
            double sum = 0.0;
            for (int a = 0; a < 2; ++a) {
                Word aw;
                aw.push_back(a);
                aw.insert(aw.end(), w.begin(), w.end());
                sum += cylinder_mass_at_offset(psi, aw, l);
            }
            CHECK(sum == doctest::Approx(cylinder_mass_at_offset(psi, w, l + 1))
                             .epsilon(1e-13));
        }
}

TEST_CASE("cover defects and the greedy cover") {
    RegisterShape s = make_shape(2, 3);
    StateVector psi = random_state(s, 87);

    CHECK(cover_defect(psi, make_cover(2, all_words(2, 2), 2)) < 1e-7);
    CHECK(cover_defect(psi, make_cover(2, {}, 2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(cover_defect(psi, make_cover(4, {Word(4, 0)}, 2)), std::invalid_argument);

    CoverSet dedup = make_cover(2, {{1, 0}, {0, 1}, {1, 0}}, 2);
    CHECK(dedup.words == std::vector<Word>{{0, 1}, {1, 0}});
    CHECK_THROWS_AS(make_cover(2, {{1}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_cover(2, {{1, 2}}, 2), std::invalid_argument);

    // Exhaustive subset search certifies greedy optimality.
    std::vector<Word> words = all_words(2, 2);
    std::vector<double> weights;
    for (const Word& w : words) weights.push_back(cylinder_weight(psi, w));
    double total = 0.0;
    for (double x : weights) total += x;

    for (double theta : {0.05, 0.2, 0.35, 0.5, 0.7, 0.9}) {
        CoverSet greedy = greedy_cover(psi, 2, theta);
        CHECK(cover_defect(psi, greedy) <= theta + 1e-12);

        std::size_t best = words.size();
        for (unsigned mask = 0; mask < 16u; ++mask) {
            double covered = 0.0;
            std::size_t size = 0;
            for (std::size_t i = 0; i < 4; ++i)
                if (mask & (1u << i)) {
                    covered += weights[i];
                    ++size;
                }
            if (total - covered <= theta * theta) best = std::min(best, size);
        }
        CHECK(greedy.words.size() == best);
        CHECK(std::is_sorted(greedy.words.begin(), greedy.words.end()));
    }

    CHECK_THROWS_AS(greedy_cover(psi, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(greedy_cover(psi, 2, -0.1), std::invalid_argument);
}

TEST_CASE("time fraction membership") {
    CoverSet zeros = make_cover(2, {{0, 0}}, 2);
    CHECK(time_fraction_member(Word(4, 0), zeros, 1.0, 2));
    CHECK_FALSE(time_fraction_member({0, 0, 1, 0}, zeros, 0.5, 2));
    CHECK(time_fraction_member({0, 0, 1, 0}, zeros, 1.0 / 3.0, 2));

    CoverSet empty = make_cover(2, {}, 2);
    CHECK_FALSE(time_fraction_member(Word(4, 0), empty, 0.1, 2));

    CHECK_THROWS_AS(time_fraction_member({0}, zeros, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(time_fraction_member(Word(4, 0), zeros, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(time_fraction_member(Word(4, 0), zeros, 1.5, 2), std::invalid_argument);
}

TEST_CASE("rectangle projectors act diagonally on coherent states") {
    RegisterShape s = make_shape(2, 4);
    const int ell = 2;
    std::vector<Word> qs = {{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (std::size_t ord = 0; ord < s.dimension(); ++ord) {
        CoherentIndex idx = coherent_from_ordinal(s, ell, ord);
        StateVector c = coherent_state(s, idx);
        for (const Word& w_q : qs)
            for (const Word& w_p : qs) {
                bool match_q = std::equal(w_q.begin(), w_q.end(), idx.eps.begin());
                bool match_p = std::equal(w_p.begin(), w_p.end(), idx.eps_prime.begin());
                StateVector out = apply_rectangle_projector(c, w_q, w_p);
                double err = 0.0;
                for (std::size_t j = 0; j < c.amps.size(); ++j) {
                    Cx want = match_q && match_p ? c.amps[j] : Cx{0, 0};
                    err = std::max(err, std::abs(out.amps[j] - want));
                }
                CHECK(err < 1e-13);
            }
    }
    CHECK_THROWS_AS(apply_rectangle_projector(basis_state(s, 0), {0, 0, 0}, {0, 0}),
                    std::invalid_argument);
}

TEST_CASE("homoclinic product identity") {
    RegisterShape s = make_shape(2, 6);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            CHECK(homoclinic_identity_defect(s, 2, {a}, {b}) < 1e-12);
    CHECK(homoclinic_identity_defect(s, 3, {0, 1}, {1, 0}) < 1e-12);

    CHECK_THROWS_AS(homoclinic_identity_defect(s, 0, {0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(homoclinic_identity_defect(s, 4, {0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(homoclinic_identity_defect(s, 2, {0}, {0}, 16), ResourceLimitError);
}
