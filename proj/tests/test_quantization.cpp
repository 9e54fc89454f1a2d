#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "walshbaker/linalg.hpp"
#include "walshbaker/quantization.hpp"

using namespace walshbaker;
using namespace walshbaker::hilbert;
using namespace walshbaker::quantization;

namespace {

Observable random_table(int D, int n_q, int n_p, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Cx> values(static_cast<std::size_t>(ipow_checked(D, n_q + n_p)));
    for (Cx& v : values) v = Cx{u(gen), 0.0};
    return make_observable(D, n_q, n_p, std::move(values));
}

}  // namespace

TEST_CASE("rectangle averages") {
    Observable one = constant_observable(2, Cx{1, 0});
    CHECK(std::abs(rectangle_average(one, {{0, 1}, {1}}) - Cx{1, 0}) < 1e-15);

    Observable ind = indicator_observable(2, {0}, {});
    CHECK(std::abs(rectangle_average(ind, {{}, {}}) - Cx{0.5, 0}) < 1e-15);
    CHECK(std::abs(rectangle_average(ind, {{1, 0}, {}})) < 1e-15);
    CHECK(std::abs(integral(ind) - Cx{0.5, 0}) < 1e-15);
}

TEST_CASE("anti-wick operator basics") {
    RegisterShape s = make_shape(2, 3);

    AntiWickOperator id_op = op_anti_wick(constant_observable(2, Cx{1, 0}), s, 2);
    StateVector v = random_state(s, 61);
    StateVector out = apply_anti_wick(id_op, v);
    double err = 0.0;
    for (std::size_t j = 0; j < v.amps.size(); ++j)
        err = std::max(err, std::abs(out.amps[j] - v.amps[j]));
    CHECK(err < 1e-13);

    AntiWickOperator ind_op = op_anti_wick(indicator_observable(2, {0}, {}), s, 2);
    CHECK(std::abs(trace(ind_op) - Cx{4, 0}) < 1e-12);

    // Real tables quantize to self-adjoint operators.
    AntiWickOperator rnd = op_anti_wick(random_table(2, 1, 1, 62), s, 1);
    Eigen::MatrixXcd A = dense_anti_wick(rnd);
    CHECK((A - A.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("expectation values") {
    RegisterShape s = make_shape(2, 4);
    StateVector v = random_state(s, 63);

    AntiWickOperator one = op_anti_wick(constant_observable(2, Cx{1, 0}), s, 2);
    CHECK(std::abs(expectation(v, one) - Cx{1, 0}) < 1e-12);

    Observable f = random_table(2, 2, 1, 64);
    for (int ell = 0; ell <= 4; ++ell) {
        AntiWickOperator A = op_anti_wick(f, s, ell);

        CoherentIndex idx = coherent_from_ordinal(s, ell, 5 % s.dimension());
        StateVector c = coherent_state(s, idx);
        CHECK(std::abs(expectation(c, A) - A.diag[coherent_ordinal(idx, s)]) < 1e-12);

        Eigen::MatrixXcd dense = dense_anti_wick(A);
        Eigen::VectorXcd ev = oracles::to_vec(v);
        Cx quad = (ev.adjoint() * dense * ev)(0, 0);
        CHECK(std::abs(expectation(v, A) - quad) < 1e-12);
    }
}

TEST_CASE("composition with the classical map") {
    Observable c = constant_observable(3, Cx{0.7, 0});
    Observable cB = compose_with_baker(c, Direction::forward);
    CHECK(sup_distance(c, cB) < 1e-15);

    Observable ind = indicator_observable(2, {0}, {});
    Observable indB = compose_with_baker(ind, Direction::forward);
    CHECK(indB.n_q == 2);
    CHECK(indB.n_p == 0);
    for (int e1 = 0; e1 < 2; ++e1)
        for (int e2 = 0; e2 < 2; ++e2)
            CHECK(std::abs(table_value(indB, {e1, e2}, {}) -
                           Cx{e2 == 0 ? 1.0 : 0.0, 0.0}) < 1e-15);

    Observable f = random_table(2, 2, 1, 65);
    Observable round = compose_with_baker(compose_with_baker(f, Direction::forward),
                                          Direction::inverse);
    CHECK(sup_distance(f, round) < 1e-14);
    Observable round2 = compose_with_baker(compose_with_baker(f, Direction::inverse),
                                           Direction::forward);
    CHECK(sup_distance(f, round2) < 1e-14);
}

TEST_CASE("lipschitz norms by enumeration") {
    Observable ind = indicator_observable(2, {0}, {});
    CHECK(lipschitz_norm(ind) == doctest::Approx(2.0));

    Observable c = constant_observable(2, Cx{0.0, -3.0});
    CHECK(lipschitz_bound(c) == doctest::Approx(3.0));

    Observable f = random_table(2, 2, 2, 66);
    double L = lipschitz_norm(f);
    double sup = 0.0;
    for (const Cx& v : f.values) sup = std::max(sup, std::abs(v));
    double slope = 0.0;
    std::size_t cells = f.values.size();
    for (std::size_t a = 0; a < cells; ++a)
        for (std::size_t b = a + 1; b < cells; ++b) {
            symbolic::CylinderRect ra{oracles::digits_be(a / 4, 2, 2),
                                      oracles::digits_be(a % 4, 2, 2)};
            symbolic::CylinderRect rb{oracles::digits_be(b / 4, 2, 2),
                                      oracles::digits_be(b % 4, 2, 2)};
            double d = symbolic::sigma_distance(ra, rb, 2);
            slope = std::max(slope, std::abs(f.values[a] - f.values[b]) / d);
        }
    CHECK(L == doctest::Approx(sup + slope).epsilon(1e-14));

    // Refining the table leaves the function, hence the seminorm, unchanged.
    CHECK(lipschitz_norm(refine(f, 3, 2)) == doctest::Approx(L).epsilon(1e-14));
}

TEST_CASE("quantization respects products and scales") {
    // Composition bounds on a small corpus, dense norms.
    RegisterShape s = make_shape(2, 4);
    std::vector<Observable> corpus;
    corpus.push_back(indicator_observable(2, {0}, {}));
    corpus.push_back(indicator_observable(2, {1}, {0}));
    corpus.push_back(random_table(2, 1, 1, 67));
    corpus.push_back(random_table(2, 2, 1, 68));

    for (const Observable& f : corpus) {
        double Lf = lipschitz_norm(f);
        for (const Observable& g : corpus) {
            double Lg = lipschitz_norm(g);
            for (int ell = 0; ell <= 4; ++ell) {
                Eigen::MatrixXcd A = dense_anti_wick(op_anti_wick(f, s, ell));
                Eigen::MatrixXcd B = dense_anti_wick(op_anti_wick(g, s, ell));
                Eigen::MatrixXcd P = dense_anti_wick(op_anti_wick(multiply(f, g), s, ell));
                double defect = oracles::oracle_spectral_norm(P - A * B);
                double bound = Lf * Lg * std::pow(2.0, -std::min(ell, 4 - ell));
                CHECK(defect <= bound + 1e-12);
            }
        }

        // Scale comparison across ell.
        for (int ell = 0; ell <= 4; ++ell)
            for (int ellp = 0; ellp <= ell; ++ellp) {
                Eigen::MatrixXcd A = dense_anti_wick(op_anti_wick(f, s, ell));
                Eigen::MatrixXcd B = dense_anti_wick(op_anti_wick(f, s, ellp));
                double diff = oracles::oracle_spectral_norm(A - B);
                CHECK(diff <= 2.0 * Lf * std::pow(2.0, -std::min(ellp, 4 - ell)) + 1e-12);
            }

        // Adjoints and traces.
        for (int ell : {1, 3}) {
            AntiWickOperator A = op_anti_wick(f, s, ell);
            Eigen::MatrixXcd dense = dense_anti_wick(A);
            Cx tr{0, 0};
            for (Eigen::Index i = 0; i < dense.rows(); ++i) tr += dense(i, i);
            CHECK(std::abs(tr - Cx{16, 0} * integral(f)) < 1e-10);
            CHECK(std::abs(trace(A) - tr) < 1e-10);
        }
    }

    // Non-negative tables quantize to positive semidefinite operators.
    Observable pos = random_table(2, 1, 2, 69);
    Eigen::MatrixXcd A = dense_anti_wick(op_anti_wick(pos, s, 2));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("egorov conjugation") {
    Observable ind = indicator_observable(2, {0}, {});

    EgorovResult exact = egorov_defect(ind, make_shape(2, 4), 2);
    CHECK(exact.exact_identity);
    CHECK(exact.defect < 1e-12);
    CHECK(exact.bound == 0.0);

    EgorovResult triv = egorov_defect(constant_observable(2, Cx{1, 0}),
                                      make_shape(2, 3), 1);
    CHECK(triv.exact_identity);
    CHECK(triv.defect < 1e-12);

    // Window violations fall back to the same-scale Lipschitz bound.
    RegisterShape s5 = make_shape(2, 5);
    Observable deep = random_table(2, 2, 2, 70);
    for (int ell = 0; ell <= 4; ++ell) {
        EgorovResult res = egorov_defect(deep, s5, ell);
        bool window = deep.n_q <= ell && deep.n_p <= 5 - ell - 1;
        CHECK(res.exact_identity == window);
        if (window) {
            CHECK(res.defect < 1e-12);
        } else {
            CHECK(res.bound ==
                  doctest::Approx(2.0 * lipschitz_bound(deep) *
                                  std::pow(2.0, 1.0 - std::min(ell, 4 - ell))));
            CHECK(res.defect <= res.bound + 1e-9);
        }
    }

    CHECK_THROWS_AS(egorov_defect(ind, make_shape(2, 1), 1), std::invalid_argument);
}

TEST_CASE("quantum ergodicity statistics") {
    baker::EigenDecomposition dec = baker::spectral_decompose(make_shape(2, 4));

    QEStatistics flat = qe_variance(dec, constant_observable(2, Cx{1, 0}), 2);
    CHECK(flat.variance < 1e-24);
    CHECK(std::abs(flat.mean - Cx{1, 0}) < 1e-12);

    // Inside a degenerate eigenspace the diagonal expectations, and with them
    // the variance, depend on which orthonormal basis the decomposition
    // picked, so individual values beyond k=4 are not portable constants.
    // Pinned instead: the trace identity, agreement with a dense recomputation
    // over the same basis, and the decrease of the variance with k.
    Observable ind = indicator_observable(2, {0}, {});
    std::vector<double> variances;
    for (int k = 4; k <= 6; ++k) {
        baker::EigenDecomposition d = baker::spectral_decompose(make_shape(2, k));
        int ell = k / 2;
        QEStatistics qs = qe_variance(d, ind, ell);
        CHECK(std::abs(qs.mean - qs.integral) < 1e-10);
        CHECK(std::abs(qs.integral - Cx{0.5, 0.0}) < 1e-15);

        Eigen::MatrixXcd A =
            dense_anti_wick(op_anti_wick(ind, make_shape(2, k), ell));
        Cx mean{0.0, 0.0};
        double var = 0.0;
        std::size_t count = 0;
        for (const auto& space : d.spaces)
            for (const auto& v : space.basis) {
                Eigen::VectorXcd ev = oracles::to_vec(v);
                Cx val = (ev.adjoint() * A * ev)(0, 0);
                mean += val;
                var += std::norm(val - qs.integral);
                ++count;
            }
        mean /= static_cast<double>(count);
        var /= static_cast<double>(count);
        CHECK(std::abs(qs.mean - mean) < 1e-12);
        CHECK(qs.variance == doctest::Approx(var).epsilon(1e-12));
        variances.push_back(qs.variance);
    }
    // At k=4 an independent projector-plus-SVD eigenbasis reproduces this
    // value, so it is stable enough to pin.
    CHECK(variances[0] == doctest::Approx(0.0263194).epsilon(1e-4));
    CHECK(variances[0] > variances[1]);
    CHECK(variances[1] > variances[2]);
}

TEST_CASE("observable text format round-trips") {
    Observable f = random_table(2, 1, 2, 71);
    std::ostringstream os;
    save_observable(f, os);
    std::istringstream is(os.str());
    Observable g = load_observable(is, "roundtrip");
    CHECK(g.D == f.D);
    CHECK(g.n_q == f.n_q);
    CHECK(g.n_p == f.n_p);
    CHECK(sup_distance(f, g) == 0.0);

    // Depth-zero sides print as '-', rationals are accepted on input.
    std::istringstream table("# comment\n2 1 0\n0 - 1/4\n1 - 0.75\n");
    Observable h = load_observable(table, "inline");
    CHECK(std::abs(table_value(h, {0}, {}) - Cx{0.25, 0}) < 1e-15);
    CHECK(std::abs(table_value(h, {1}, {}) - Cx{0.75, 0}) < 1e-15);
}

TEST_CASE("observable parser rejects malformed tables") {
    auto load = [](const std::string& text) {
        std::istringstream is(text);
        return load_observable(is, "bad");
    };
    CHECK_THROWS_AS(load(""), std::invalid_argument);
    CHECK_THROWS_AS(load("2 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(load("1 0 0\n- - 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(load("2 1 0\n0 - 1\n0 - 2\n1 - 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(load("2 1 0\n0 - 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(load("2 1 0\n2 - 1\n0 - 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(load("2 1 0\n0 - x\n1 - 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(load("2 1 0\n0 - 1/0\n1 - 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(load("2 1 0\n00 - 1\n1 - 1\n"), std::invalid_argument);
}
