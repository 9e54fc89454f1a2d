#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "walshbaker/symbolic.hpp"

using namespace walshbaker;
using namespace walshbaker::symbolic;

namespace {

CylinderRect random_rect(std::mt19937_64& gen, int D, int max_depth) {
    std::uniform_int_distribution<int> depth(0, max_depth);
    std::uniform_int_distribution<int> digit(0, D - 1);
    CylinderRect r;
    int n = depth(gen), np = depth(gen);
    for (int i = 0; i < n; ++i) r.eps.push_back(digit(gen));
    for (int i = 0; i < np; ++i) r.eps_prime.push_back(digit(gen));
    return r;
}

}  // namespace

TEST_CASE("classical baker on exact rationals") {
    TorusPoint x{make_rational(1, 2), make_rational(1, 3)};
    TorusPoint y = classical_baker(x, 3, Direction::forward);
    CHECK(rat_eq(y.q, make_rational(1, 2)));
    CHECK(rat_eq(y.p, make_rational(4, 9)));

    TorusPoint origin{make_rational(0, 1), make_rational(0, 1)};
    TorusPoint o2 = classical_baker(origin, 2, Direction::forward);
    CHECK(rat_eq(o2.q, origin.q));
    CHECK(rat_eq(o2.p, origin.p));

    TorusPoint z{make_rational(3, 8), make_rational(5, 8)};
    TorusPoint back = classical_baker(classical_baker(z, 2, Direction::inverse), 2,
                                      Direction::forward);
    CHECK(rat_eq(back.q, z.q));
    CHECK(rat_eq(back.p, z.p));
}

TEST_CASE("word_value reads base-D expansions") {
    CHECK(rat_eq(word_value({1, 0, 1}, 2), make_rational(5, 8)));
    CHECK(rat_eq(word_value({}, 3), make_rational(0, 1)));
    CHECK(rat_eq(word_value({2, 1}, 4), make_rational(9, 16)));
}

TEST_CASE("sigma distance on truncated codes") {
    CylinderRect a{{0, 0}, {1}};
    CHECK(sigma_distance(a, a, 2) == 0.0);

    CylinderRect b{{0, 1}, {1}};
    CHECK(sigma_distance(a, b, 2) == doctest::Approx(0.5));

    CylinderRect c{{0, 1}, {2, 0}};
    CylinderRect d{{1, 1}, {0, 0}};
    CHECK(sigma_distance(c, d, 3) == doctest::Approx(1.0));

    CylinderRect e{{0}, {1}};
    CHECK_THROWS_AS(sigma_distance(a, e, 2), std::invalid_argument);
}

TEST_CASE("sigma distance is a metric on truncated codes") {
    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 200; ++trial) {
        int D = 2 + static_cast<int>(gen() % 3);
        CylinderRect a = random_rect(gen, D, 4);
        CylinderRect b = a, c = a;
        std::uniform_int_distribution<int> digit(0, D - 1);
        for (int& x : b.eps) x = digit(gen);
        for (int& x : b.eps_prime) x = digit(gen);
        for (int& x : c.eps) x = digit(gen);
        for (int& x : c.eps_prime) x = digit(gen);
        double ab = sigma_distance(a, b, D);
        double ba = sigma_distance(b, a, D);
        double ac = sigma_distance(a, c, D);
        double cb = sigma_distance(c, b, D);
        CHECK(ab == ba);
        CHECK(ab <= ac + cb + 1e-15);
    }
}

TEST_CASE("shift conjugacy with the classical map") {
    // Forward baker sends the lower-left corner of a rectangle to the
    // lower-left corner of the shifted rectangle, exactly.
    std::mt19937_64 gen(42);
    for (int D : {2, 3}) {
        for (int trial = 0; trial < 100; ++trial) {
            CylinderRect r = random_rect(gen, D, 6);
            if (r.eps.empty()) r.eps.push_back(0);
            TorusPoint corner = cylinder_left_endpoint(r, D);
            TorusPoint mapped = classical_baker(corner, D, Direction::forward);
            TorusPoint target = cylinder_left_endpoint(shift_cylinder(r), D);
            CHECK(rat_eq(mapped.q, target.q));
            CHECK(rat_eq(mapped.p, target.p));
        }
    }
}

TEST_CASE("bernoulli cylinder weights") {
    BernoulliWeights uniform2{{0.5, 0.5}};
    CHECK(bernoulli_cylinder_weight(uniform2, {{0}, {0}}) == doctest::Approx(0.25));

    BernoulliWeights half4{{0.5, 0.0, 0.5, 0.0}};
    CHECK(bernoulli_cylinder_weight(half4, {{0, 2}, {}}) == doctest::Approx(0.25));

    BernoulliWeights delta{{1.0, 0.0}};
    CHECK(bernoulli_cylinder_weight(delta, {{0, 1, 0}, {}}) == 0.0);
}

TEST_CASE("one-digit extensions partition a cylinder") {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        int D = 2 + static_cast<int>(gen() % 3);
        std::vector<double> p(static_cast<std::size_t>(D));
        double s = 0.0;
        for (double& x : p) { x = u(gen) + 1e-3; s += x; }
        for (double& x : p) x /= s;
        BernoulliWeights w{p};
        CylinderRect r = random_rect(gen, D, 3);
        double parent = bernoulli_cylinder_weight(w, r);
        double sum = 0.0;
        for (int d = 0; d < D; ++d) {
            CylinderRect ext = r;
            ext.eps.push_back(d);
            sum += bernoulli_cylinder_weight(w, ext);
        }
        CHECK(sum == doctest::Approx(parent).epsilon(1e-12));
    }
}

TEST_CASE("entropies of bernoulli measures") {
    for (int D : {2, 3, 5}) {
        BernoulliWeights uniform{std::vector<double>(static_cast<std::size_t>(D),
                                                     1.0 / D)};
        CHECK(ks_entropy_bernoulli(uniform) == doctest::Approx(std::log(double(D))));
    }
    BernoulliWeights delta{{0.0, 1.0, 0.0}};
    CHECK(ks_entropy_bernoulli(delta) == doctest::Approx(0.0));

    BernoulliWeights half{{0.5, 0.0, 0.5, 0.0}};
    CHECK(ks_entropy_bernoulli(half) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("ks entropy stays inside [0, log D] on the simplex") {
    std::mt19937_64 gen(44);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        int D = 2 + static_cast<int>(gen() % 4);
        std::vector<double> p(static_cast<std::size_t>(D));
        double s = 0.0;
        for (double& x : p) { x = u(gen); s += x; }
        for (double& x : p) x /= s;
        double h = ks_entropy_bernoulli(BernoulliWeights{p});
        CHECK(h >= -1e-12);
        CHECK(h <= std::log(static_cast<double>(D)) + 1e-12);
    }
}

TEST_CASE("partition entropy") {
    std::vector<double> point{1.0, 0.0, 0.0};
    CHECK(partition_entropy(point) == doctest::Approx(0.0));

    for (int M : {2, 7, 16}) {
        std::vector<double> uniform(static_cast<std::size_t>(M), 1.0 / M);
        CHECK(partition_entropy(uniform) == doctest::Approx(std::log(double(M))));
    }

    std::vector<double> mix{0.5, 0.25, 0.25};
    CHECK(partition_entropy(mix) == doctest::Approx(1.5 * std::log(2.0)));

    std::vector<double> bad{1.25, -0.25};
    CHECK_THROWS_AS(partition_entropy(bad), std::invalid_argument);
}

TEST_CASE("topological entropy of subalphabets") {
    CHECK(htop_subalphabet({2}) == doctest::Approx(0.0));
    CHECK(htop_subalphabet({0, 1, 2}) == doctest::Approx(std::log(3.0)));
    CHECK(htop_subalphabet({0, 2}) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(htop_subalphabet({}), std::invalid_argument);
}
