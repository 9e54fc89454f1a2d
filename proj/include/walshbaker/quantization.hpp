/*
 * Cylinder observables on the symbol space and their Walsh-anti-Wick
 * quantization.
 *
 * An observable of depths (n_q, n_p) is a function constant on every rectangle
 * [ε′·ε] with |ε| = n_q, |ε′| = n_p; it is stored as the table of those
 * D^{n_q+n_p} values.  All rectangle averages and the torus integral are then
 * exact uniform averages, no quadrature enters anywhere.
 *
 * Quantization at scale ℓ:
 *     Op_{k,ℓ}(f) = Σ_R |R⟩⟨R| f̄^R   over the quantum rectangles R of the
 * ℓ-basis, a diagonal operator in that basis.  Conjugation by one baker step
 * is exact on cylinder functions:
 *     B_k⁻¹ Op_{k,ℓ}(f) B_k = Op_{k,ℓ+1}(f∘B)   whenever n_q ≤ ℓ and
 * n_p ≤ k−ℓ−1; outside that window the defect obeys the Lipschitz bound
 *     ‖B_k⁻¹ Op_{k,ℓ}(f) B_k − Op_{k,ℓ}(f∘B)‖ ≤ 2‖f‖_Lip D^{1−min(ℓ,k−ℓ−1)}.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "walshbaker/baker.hpp"
#include "walshbaker/hilbert.hpp"
#include "walshbaker/symbolic.hpp"
#include "walshbaker/tolerances.hpp"

namespace walshbaker::quantization {

using hilbert::RegisterShape;
using hilbert::StateVector;
using symbolic::CylinderRect;
using symbolic::Word;

struct Observable {
    int D = 2;
    int n_q = 0;
    int n_p = 0;
    // Row-major over (word_q, word_p): index = value(word_q)·D^{n_p} + value(word_p).
    std::vector<Cx> values;
    std::optional<double> lip_declared;
};

Observable make_observable(int D, int n_q, int n_p, std::vector<Cx> values,
                           std::optional<double> lip_declared = std::nullopt);
Observable constant_observable(int D, Cx value);

// Indicator of the rectangle [w_p · w_q]; depths are the word lengths.
Observable indicator_observable(int D, const Word& w_q, const Word& w_p);

// Table lookup at exact depths.
Cx table_value(const Observable& f, const Word& w_q, const Word& w_p);

// Exact uniform average of f over a rectangle of any depths.
Cx rectangle_average(const Observable& f, const CylinderRect& rect);

// ∫ f over the torus (average of the full table).
Cx integral(const Observable& f);

// sup|f| + max over distinct cells of |Δf| / d_Σ, by enumeration.
double lipschitz_norm(const Observable& f);

// Declared constant when present, else the computed norm.
double lipschitz_bound(const Observable& f);

// Same function on a finer table; m_q ≥ n_q, m_p ≥ n_p.
Observable refine(const Observable& f, int m_q, int m_p);

// Pointwise product on the common refinement.
Observable multiply(const Observable& f, const Observable& g);

// max |f − g| over the common refinement (they are step functions).
double sup_distance(const Observable& f, const Observable& g);

// f∘B (forward): depths (n_q+1, max(n_p−1,0)); f∘B⁻¹ mirrors them.
Observable compose_with_baker(const Observable& f, Direction dir);

// Text table: header "D n_q n_p", then one line "word_q word_p value" per
// cell, `-` for the empty word, values decimal or rational p/q.
Observable load_observable(std::istream& in, const std::string& source = "observable");
Observable load_observable_file(const std::string& path);
void save_observable(const Observable& f, std::ostream& out);
void save_observable_file(const Observable& f, const std::string& path);

// ── The quantized operator ───────────────────────────────────────────────────

struct AntiWickOperator {
    RegisterShape shape;
    int ell = 0;
    std::vector<Cx> diag;  // rectangle averages, coherent-ordinal order
};

AntiWickOperator op_anti_wick(const Observable& f, RegisterShape shape, int ell);

Cx trace(const AntiWickOperator& A);
StateVector apply_anti_wick(const AntiWickOperator& A, const StateVector& psi,
                            bool conjugate_diag = false);
Cx expectation(const StateVector& psi, const AntiWickOperator& A);
Eigen::MatrixXcd dense_anti_wick(const AntiWickOperator& A);

// ── Egorov ───────────────────────────────────────────────────────────────────

struct EgorovResult {
    bool exact_identity = false;  // depth window admits the exact conjugation identity
    double defect = 0.0;          // ‖B⁻¹ Op_ℓ(f) B − Op(f∘B)‖, rhs at ℓ+1 (exact) or ℓ
    double bound = 0.0;           // 0 when exact, else the Lipschitz bound
};

EgorovResult egorov_defect(const Observable& f, RegisterShape shape, int ell,
                           std::size_t dense_cap = tol::dense_cap_norms);

// ── Quantum ergodicity statistic ─────────────────────────────────────────────

struct QEStatistics {
    Cx mean;          // (1/D^k) Σ_j ⟨ψ_j|Op f|ψ_j⟩
    Cx integral;      // ∫ f; the trace identity forces mean = integral
    double variance;  // (1/D^k) Σ_j |⟨ψ_j|Op f|ψ_j⟩ − ∫f|²
};

QEStatistics qe_variance(const baker::EigenDecomposition& dec, const Observable& f,
                         int ell);

}  // namespace walshbaker::quantization
