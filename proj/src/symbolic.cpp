#include "walshbaker/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace walshbaker::symbolic {

// ── Rationals ────────────────────────────────────────────────────────────────

namespace {

long long mul_checked(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    __int128 p = static_cast<__int128>(a) * b;
    if (p > (static_cast<__int128>(1) << 62) || p < -(static_cast<__int128>(1) << 62))
        throw std::overflow_error("Rational: product exceeds 2^62");
    return static_cast<long long>(p);
}

}  // namespace

Rational make_rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    return {num, den};
}

Rational rat_add(Rational a, Rational b) {
    return make_rational(mul_checked(a.num, b.den) + mul_checked(b.num, a.den),
                         mul_checked(a.den, b.den));
}

Rational rat_mul_int(Rational a, long long m) {
    return make_rational(mul_checked(a.num, m), a.den);
}

Rational rat_div_int(Rational a, long long m) {
    if (m == 0) throw std::invalid_argument("rat_div_int: division by zero");
    return make_rational(a.num, mul_checked(a.den, m));
}

bool rat_eq(Rational a, Rational b) {
    a = make_rational(a.num, a.den);
    b = make_rational(b.num, b.den);
    return a.num == b.num && a.den == b.den;
}

double rat_value(Rational a) {
    return static_cast<double>(a.num) / static_cast<double>(a.den);
}

long long rat_floor(Rational a) {
    long long q = a.num / a.den;
    if (a.num < 0 && a.num % a.den != 0) --q;
    return q;
}

// ── Validation ───────────────────────────────────────────────────────────────

void check_word(const Word& w, int D) {
    if (D < 2) throw std::invalid_argument("check_word: D must be >= 2");
    for (int d : w)
        if (d < 0 || d >= D)
            throw std::invalid_argument("check_word: digit out of range [0,D)");
}

void check_weights(const BernoulliWeights& w) {
    if (w.p.empty()) throw std::invalid_argument("check_weights: empty weight list");
    double sum = 0.0;
    for (double x : w.p) {
        if (x < 0.0) throw std::invalid_argument("check_weights: negative weight");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("check_weights: weights must sum to 1");
}

// ── The classical map ────────────────────────────────────────────────────────

namespace {

void check_torus(const TorusPoint& x) {
    auto in01 = [](Rational r) { return r.num >= 0 && r.num < r.den; };
    if (!in01(x.q) || !in01(x.p))
        throw std::invalid_argument("classical_baker: point outside [0,1)^2");
}

}  // namespace

TorusPoint classical_baker(const TorusPoint& x, int D, Direction dir) {
    if (D < 2) throw std::invalid_argument("classical_baker: D must be >= 2");
    check_torus(x);
    if (dir == Direction::forward) {
        Rational dq = rat_mul_int(x.q, D);
        long long digit = rat_floor(dq);               // first q-digit ε₁
        Rational q2 = rat_add(dq, make_rational(-digit, 1));
        Rational p2 = rat_div_int(rat_add(x.p, make_rational(digit, 1)), D);
        return {q2, p2};
    }
    Rational dp = rat_mul_int(x.p, D);
    long long digit = rat_floor(dp);                   // first p-digit ε′₁
    Rational p2 = rat_add(dp, make_rational(-digit, 1));
    Rational q2 = rat_div_int(rat_add(x.q, make_rational(digit, 1)), D);
    return {q2, p2};
}

// ── Words, rectangles, metric ────────────────────────────────────────────────

Rational word_value(const Word& w, int D) {
    check_word(w, D);
    long long num = 0;
    for (int d : w) num = mul_checked(num, D) + d;
    return make_rational(num, ipow_checked(D, static_cast<int>(w.size())));
}

TorusPoint cylinder_left_endpoint(const CylinderRect& rect, int D) {
    return {word_value(rect.eps, D), word_value(rect.eps_prime, D)};
}

CylinderRect shift_cylinder(const CylinderRect& rect) {
    if (rect.eps.empty())
        throw std::invalid_argument("shift_cylinder: empty position side");
    CylinderRect out;
    out.eps.assign(rect.eps.begin() + 1, rect.eps.end());
    out.eps_prime.reserve(rect.eps_prime.size() + 1);
    out.eps_prime.push_back(rect.eps.front());
    out.eps_prime.insert(out.eps_prime.end(), rect.eps_prime.begin(),
                         rect.eps_prime.end());
    return out;
}

double sigma_distance(const CylinderRect& a, const CylinderRect& b, int D) {
    if (a.eps.size() != b.eps.size() || a.eps_prime.size() != b.eps_prime.size())
        throw std::invalid_argument("sigma_distance: mismatched truncation depths");
    check_word(a.eps, D); check_word(a.eps_prime, D);
    check_word(b.eps, D); check_word(b.eps_prime, D);
    auto side = [&](const Word& u, const Word& v) -> double {
        for (std::size_t i = 0; i < u.size(); ++i)
            if (u[i] != v[i]) return std::pow(D, -static_cast<double>(i));
        return 0.0;  // agreement to the truncation depth
    };
    return std::max(side(a.eps, b.eps), side(a.eps_prime, b.eps_prime));
}

// ── Measures and entropies ───────────────────────────────────────────────────

double bernoulli_cylinder_weight(const BernoulliWeights& w, const CylinderRect& rect) {
    check_weights(w);
    const int D = static_cast<int>(w.p.size());
    check_word(rect.eps, D);
    check_word(rect.eps_prime, D);
    double prod = 1.0;
    for (int d : rect.eps) prod *= w.p[d];
    for (int d : rect.eps_prime) prod *= w.p[d];
    return prod;
}

double ks_entropy_bernoulli(const BernoulliWeights& w) {
    check_weights(w);
    return partition_entropy(w.p);
}

double partition_entropy(std::span<const double> mu_weights) {
    double sum = 0.0;
    for (double x : mu_weights) {
        if (x < 0.0) throw std::invalid_argument("partition_entropy: negative weight");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("partition_entropy: weights must sum to 1");
    std::vector<double> sorted(mu_weights.begin(), mu_weights.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double h = 0.0;
    for (double x : sorted) {
        if (x <= 0.0) break;  // 0·log 0 = 0, and the tail is all zeros
        h -= x * std::log(x);
    }
    return h;
}

double htop_subalphabet(const std::vector<int>& S) {
    if (S.empty()) throw std::invalid_argument("htop_subalphabet: empty subalphabet");
    std::vector<int> u(S);
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return std::log(static_cast<double>(u.size()));
}

}  // namespace walshbaker::symbolic
