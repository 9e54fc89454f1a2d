/*
 * Classical side of the laboratory: the D-baker's map on the torus, D-ary
 * symbolic coding, cylinders/rectangles, the symbolic metric d_Σ, and
 * entropies of Bernoulli measures.
 *
 * Coding conventions:
 *   a torus point is x = (q,p) with q = 0.ε₁ε₂…, p = 0.ε′₁ε′₂… in base D;
 *   a cylinder [ε′·ε] prescribes the leading digits of q (right side, eps)
 *   and of p (left side, eps_prime);
 *   the baker acts as the two-sided shift …ε′₂ε′₁·ε₁ε₂… ↦ …ε′₁ε₁·ε₂ε₃….
 *
 * Cylinder endpoints are exact rationals; only entropies and distances are
 * floating point.  Entropies are in nats, with 0·log 0 = 0.
 */
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "walshbaker/common.hpp"

namespace walshbaker::symbolic {

// ── Exact rationals for cylinder endpoints ───────────────────────────────────
// Normalized: den > 0, gcd(|num|, den) = 1.  Arithmetic throws on overflow,
// which cannot happen at desk scale (denominators are powers of D).
struct Rational {
    long long num = 0;
    long long den = 1;
};

Rational make_rational(long long num, long long den);
Rational rat_add(Rational a, Rational b);
Rational rat_mul_int(Rational a, long long m);
Rational rat_div_int(Rational a, long long m);
bool rat_eq(Rational a, Rational b);
double rat_value(Rational a);
long long rat_floor(Rational a);

// ── Words and rectangles ─────────────────────────────────────────────────────

// A finite word of digits in [0,D); the empty word is allowed.
using Word = std::vector<int>;

void check_word(const Word& w, int D);

// The rectangle [ε′·ε]: eps prescribes position digits, eps_prime momentum
// digits.  Either side may be empty.
struct CylinderRect {
    Word eps;        // right side, |eps| = n
    Word eps_prime;  // left side, |eps_prime| = n′
};

struct TorusPoint {
    Rational q;
    Rational p;
};

// Probability weights (p_0,…,p_{D-1}): non-negative, summing to 1 (1e-12).
struct BernoulliWeights {
    std::vector<double> p;
};

void check_weights(const BernoulliWeights& w);

// ── Operations ───────────────────────────────────────────────────────────────

// (q,p) ↦ (Dq mod 1, (p+⌊Dq⌋)/D); inverse swaps the roles of q and p.
// Exact on rationals, so forward∘inverse is the identity.
TorusPoint classical_baker(const TorusPoint& x, int D, Direction dir);

// 0.ε₁…εₙ as the exact rational j/Dⁿ.
Rational word_value(const Word& w, int D);

// Lower-left corner (0.ε, 0.ε′) of the rectangle.
TorusPoint cylinder_left_endpoint(const CylinderRect& rect, int D);

// One application of the shift to a rectangle: [ε′·ε] ↦ [ε₁ε′·ε₂…εₙ]
// (the image of the rectangle under the forward baker).
CylinderRect shift_cylinder(const CylinderRect& rect);

// d_Σ between two pairs truncated to a common depth: max(D^{-n₀′}, D^{-n₀})
// with n₀ (resp. n₀′) the number of leading right-side (left-side) digits in
// agreement; a side in full agreement contributes 0.
double sigma_distance(const CylinderRect& a, const CylinderRect& b, int D);

// Product-measure weight Π p_{ε_i} · Π p_{ε′_i} of the rectangle.
double bernoulli_cylinder_weight(const BernoulliWeights& w, const CylinderRect& rect);

// Kolmogorov-Sinai entropy −Σ p_ε log p_ε of the Bernoulli measure.
double ks_entropy_bernoulli(const BernoulliWeights& w);

// −Σ μ_i log μ_i for non-negative weights summing to 1 (1e-9).  Accumulates
// in descending weight order for deterministic, low-drift sums.
double partition_entropy(std::span<const double> mu_weights);

// log |S| for a non-empty subalphabet S ⊆ Z_D (the topological entropy of the
// full shift restricted to S).
double htop_subalphabet(const std::vector<int>& S);

}  // namespace walshbaker::symbolic
