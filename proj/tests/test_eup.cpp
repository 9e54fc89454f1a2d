#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "walshbaker/baker.hpp"
#include "walshbaker/eup.hpp"
#include "walshbaker/linalg.hpp"

using namespace walshbaker;
using namespace walshbaker::eup;

namespace {

Eigen::MatrixXcd dense_baker_power(hilbert::RegisterShape shape, long long power) {
    return linalg::dense_from_apply(
        [&](const hilbert::StateVector& v) { return baker::apply_baker(v, power); }, shape);
}

}  // namespace

TEST_CASE("partitions of unity") {
    PartitionOfUnity words = word_partition(hilbert::make_shape(2, 3), 2);
    REQUIRE(words.blocks.size() == 4);
    for (std::size_t b = 0; b < 4; ++b) {
        REQUIRE(words.blocks[b].size() == 2);
        CHECK(words.blocks[b][0] == static_cast<Eigen::Index>(2 * b));
        CHECK(words.blocks[b][1] == static_cast<Eigen::Index>(2 * b + 1));
    }

    PartitionOfUnity full = full_partition(5);
    REQUIRE(full.blocks.size() == 5);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(full.blocks[static_cast<std::size_t>(i)][0] == i);

    PartitionOfUnity r1 = random_partition(16, 5, 321);
    PartitionOfUnity r2 = random_partition(16, 5, 321);
    CHECK(r1.blocks == r2.blocks);
    CHECK(r1.blocks.size() == 5);

    CHECK_THROWS_AS(word_partition(hilbert::make_shape(2, 3), 0), std::invalid_argument);
    CHECK_THROWS_AS(word_partition(hilbert::make_shape(2, 3), 4), std::invalid_argument);
    CHECK_THROWS_AS(random_partition(4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_partition(4, 5, 1), std::invalid_argument);

    PartitionOfUnity bad;
    bad.dim = 2;
    bad.blocks = {{0}, {0, 1}};
    CHECK_THROWS_AS(check_partition(bad), std::invalid_argument);
    bad.blocks = {{0}};
    CHECK_THROWS_AS(check_partition(bad), std::invalid_argument);
    bad.blocks = {{0}, {}};
    CHECK_THROWS_AS(check_partition(bad), std::invalid_argument);
    bad.blocks = {{0}, {2}};
    CHECK_THROWS_AS(check_partition(bad), std::invalid_argument);
}

TEST_CASE("entrywise uncertainty constants") {
    CHECK(c_entry(Eigen::MatrixXcd::Identity(4, 4)) == doctest::Approx(1.0));
    for (int D : {2, 3, 5})
        CHECK(c_entry(oracles::oracle_dft(D)) ==
              doctest::Approx(1.0 / std::sqrt(static_cast<double>(D))).epsilon(1e-12));

    // k baker steps land on the tensor Fourier transform, flat of modulus
    // 2^{-3/2} at k = 3.
    hilbert::RegisterShape s = hilbert::make_shape(2, 3);
    CHECK(c_entry(dense_baker_power(s, 3)) ==
          doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));

    CHECK_THROWS_AS(c_entry(2.0 * Eigen::MatrixXcd::Identity(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(c_entry(Eigen::MatrixXcd::Zero(2, 3)), std::invalid_argument);

    // Entry constants can never undercut N^{-1/2}, with equality exactly on
    // flat-modulus matrices.
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        Eigen::MatrixXcd U = haar_unitary(8, seed);
        CHECK(c_entry(U) >= 1.0 / std::sqrt(8.0) - 1e-12);
    }
    CHECK(c_entry(oracles::oracle_walsh(2, 3)) ==
          doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));
}

TEST_CASE("block uncertainty constants") {
    hilbert::RegisterShape s = hilbert::make_shape(2, 3);
    Eigen::MatrixXcd Bk = dense_baker_power(s, 3);

    CHECK(c_block(Eigen::MatrixXcd::Identity(8, 8), word_partition(s, 2)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 1; n <= 3; ++n)
        CHECK(c_block(Bk, word_partition(s, n)) ==
              doctest::Approx(std::pow(2.0, -0.5 * n)).epsilon(1e-10));

    // Brute force over block pairs with an independent SVD.
    for (const Eigen::MatrixXcd& U : {Bk, haar_unitary(8, 14)}) {
        PartitionOfUnity part = word_partition(s, 2);
        double brute = 0.0;
        for (const auto& rows : part.blocks)
            for (const auto& cols : part.blocks) {
                Eigen::MatrixXcd sub(rows.size(), cols.size());
                for (std::size_t a = 0; a < rows.size(); ++a)
                    for (std::size_t b = 0; b < cols.size(); ++b)
                        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                            U(rows[a], cols[b]);
                brute = std::max(brute, oracles::oracle_spectral_norm(sub));
            }
        CHECK(c_block(U, part) == doctest::Approx(brute).epsilon(1e-11));
    }

    CHECK_THROWS_AS(c_block(Bk, full_partition(4)), std::invalid_argument);
}

TEST_CASE("scalar entropic uncertainty") {
    Eigen::MatrixXcd F4adj = oracles::oracle_dft(4).adjoint();
    Eigen::VectorXcd w(4);
    w << Cx{1 / std::sqrt(2.0), 0}, Cx{0, 0}, Cx{1 / std::sqrt(2.0), 0}, Cx{0, 0};
    EUPReport rep = scalar_eup_check(F4adj, w);
    CHECK(rep.h_in == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(rep.h_out == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(rep.c == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.bound == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(rep.satisfied);
    CHECK(rep.saturated);
    CHECK(std::abs(rep.slack) < 1e-12);

    // The identity bound is vacuous; a basis vector even saturates it.
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(4, 4);
    EUPReport basis = scalar_eup_check(I, Eigen::VectorXcd::Unit(4, 0));
    CHECK(basis.bound == doctest::Approx(0.0));
    CHECK(basis.satisfied);
    CHECK(basis.saturated);
    EUPReport spread = scalar_eup_check(I, random_unit_vector(4, 15));
    CHECK(spread.satisfied);
    CHECK_FALSE(spread.saturated);

    const Eigen::Index Ns[3] = {4, 8, 16};
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Index N = Ns[trial % 3];
        Eigen::MatrixXcd U = haar_unitary(N, 1000 + static_cast<std::uint64_t>(trial));
        Eigen::VectorXcd psi = random_unit_vector(N, 2000 + static_cast<std::uint64_t>(trial));
        EUPReport r = scalar_eup_check(U, psi);
        CHECK(r.satisfied);
        if (r.saturated) CHECK(r.satisfied);
    }

    CHECK_THROWS_AS(scalar_eup_check(F4adj, random_unit_vector(5, 1)), std::invalid_argument);
}

TEST_CASE("vector entropic uncertainty on eigenstates") {
    hilbert::RegisterShape s = hilbert::make_shape(2, 5);
    Eigen::MatrixXcd Bk = dense_baker_power(s, 5);
    baker::EigenDecomposition dec = baker::spectral_decompose(s);
    for (const baker::EigenSpace& sp : dec.spaces)
        for (const hilbert::StateVector& v : sp.basis)
            for (int n = 1; n <= 5; ++n) {
                EUPReport rep = vector_eup_check(Bk, word_partition(s, n), oracles::to_vec(v));
                CHECK(rep.satisfied);
                CHECK(rep.h_in == doctest::Approx(rep.h_out).epsilon(1e-9));
                CHECK(rep.h_in >= 0.5 * n * std::log(2.0) - 1e-9);
            }
}

TEST_CASE("full resolution reduces the vector check to the scalar one") {
    Eigen::MatrixXcd U = haar_unitary(16, 16);
    Eigen::VectorXcd psi = random_unit_vector(16, 17);
    EUPReport vec = vector_eup_check(U, full_partition(16), psi);
    EUPReport sc = scalar_eup_check(U, psi);
    CHECK(vec.h_in == doctest::Approx(sc.h_in).epsilon(1e-12));
    CHECK(vec.h_out == doctest::Approx(sc.h_out).epsilon(1e-12));
    CHECK(vec.c == doctest::Approx(sc.c).epsilon(1e-12));
    CHECK(vec.bound == doctest::Approx(sc.bound).epsilon(1e-12));
}

TEST_CASE("vector uncertainty across random partitions") {
    const int sizes[3] = {2, 4, 8};
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::MatrixXcd U = haar_unitary(16, 3000 + static_cast<std::uint64_t>(trial));
        Eigen::VectorXcd psi = random_unit_vector(16, 4000 + static_cast<std::uint64_t>(trial));
        PartitionOfUnity part =
            random_partition(16, sizes[trial % 3], 5000 + static_cast<std::uint64_t>(trial));
        EUPReport rep = vector_eup_check(U, part, psi);
        CHECK(rep.satisfied);
    }
    CHECK_THROWS_AS(
        vector_eup_check(haar_unitary(8, 1), full_partition(16), random_unit_vector(16, 2)),
        std::invalid_argument);
}

TEST_CASE("block entropies refine monotonically") {
    hilbert::RegisterShape s = hilbert::make_shape(2, 5);
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(32, 32);
    Eigen::VectorXcd psi = oracles::to_vec(hilbert::random_state(s, 18));
    double prev = 0.0;
    for (int n = 1; n <= 5; ++n) {
        EUPReport rep = vector_eup_check(I, word_partition(s, n), psi);
        CHECK(rep.h_in >= prev - 1e-12);
        prev = rep.h_in;
    }
}

TEST_CASE("riesz moment closed form") {
    Eigen::MatrixXcd F2 = oracles::oracle_dft(2);
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Unit(2, 0);
    std::vector<RieszMomentResult> res = riesz_moment_check(F2, e0, {0.5});
    REQUIRE(res.size() == 1);
    CHECK(res[0].t == 0.5);
    CHECK(res[0].lhs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res[0].rhs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res[0].satisfied);
    CHECK(res[0].norm_inequality_satisfied);
    CHECK_FALSE(res[0].below_unit_norm);
}

TEST_CASE("riesz moments recover the scalar bound as t vanishes") {
    for (std::uint64_t seed : {19u, 20u, 21u}) {
        Eigen::MatrixXcd U = haar_unitary(8, seed);
        Eigen::VectorXcd psi = random_unit_vector(8, seed + 100);
        EUPReport sc = scalar_eup_check(U, psi);
        std::vector<RieszMomentResult> res = riesz_moment_check(U, psi, {1e-4});
        REQUIRE(res.size() == 1);
        CHECK(res[0].satisfied);
        double sum = sc.h_in + sc.h_out;
        CHECK(std::abs(-std::log(res[0].lhs) - sum) < 1e-3 * (sum + 1.0));
        CHECK(-std::log(res[0].rhs) == doctest::Approx(sc.bound).epsilon(1e-12));
    }
}

TEST_CASE("riesz moments on contractions and bad inputs") {
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(4, 4);
    Eigen::VectorXcd psi = random_unit_vector(4, 22);
    std::vector<RieszMomentResult> res = riesz_moment_check(I, psi, {0.3, 0.7});
    REQUIRE(res.size() == 2);
    for (const RieszMomentResult& r : res) {
        CHECK(r.rhs == doctest::Approx(1.0));
        CHECK(r.lhs <= 1.0 + 1e-12);
        CHECK(r.satisfied);
        CHECK_FALSE(r.below_unit_norm);
    }

    std::vector<RieszMomentResult> half = riesz_moment_check(0.5 * I, psi, {0.25});
    REQUIRE(half.size() == 1);
    CHECK(half[0].below_unit_norm);
    CHECK(half[0].satisfied);

    CHECK_THROWS_AS(riesz_moment_check(2.0 * I, psi, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(riesz_moment_check(I, psi, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(riesz_moment_check(I, psi, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(riesz_moment_check(I, random_unit_vector(3, 1), {0.5}),
                    std::invalid_argument);
}
