#include "walshbaker/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "walshbaker/tolerances.hpp"

namespace walshbaker::hilbert {

std::size_t RegisterShape::dimension() const {
    return static_cast<std::size_t>(ipow_checked(D, k));
}

RegisterShape make_shape(int D, int k) {
    if (D < 2) throw std::invalid_argument("make_shape: D must be at least 2");
    if (k < 1) throw std::invalid_argument("make_shape: k must be at least 1");
    RegisterShape shape{D, k};
    shape.dimension();  // throws on overflow
    return shape;
}

StateVector zero_state(RegisterShape shape) {
    return StateVector{shape, std::vector<Cx>(shape.dimension(), Cx{0.0, 0.0})};
}

StateVector basis_state(RegisterShape shape, std::size_t j) {
    StateVector psi = zero_state(shape);
    if (j >= psi.amps.size())
        throw std::invalid_argument("basis_state: index out of range");
    psi.amps[j] = Cx{1.0, 0.0};
    return psi;
}

double norm(const StateVector& psi) {
    double s = 0.0;
    for (const Cx& a : psi.amps) s += std::norm(a);
    return std::sqrt(s);
}

void normalize(StateVector& psi) {
    double n = norm(psi);
    if (n <= 0.0) throw std::invalid_argument("normalize: zero state");
    for (Cx& a : psi.amps) a /= n;
}

StateVector random_state(RegisterShape shape, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector psi = zero_state(shape);
    for (Cx& a : psi.amps) {
        double re = gauss(gen);
        double im = gauss(gen);
        a = Cx{re, im};
    }
    normalize(psi);
    return psi;
}

int digit_at(std::size_t j, int i, RegisterShape shape) {
    if (i < 1 || i > shape.k)
        throw std::invalid_argument("digit_at: axis out of range");
    std::size_t stride = static_cast<std::size_t>(ipow_checked(shape.D, shape.k - i));
    return static_cast<int>((j / stride) % static_cast<std::size_t>(shape.D));
}

long long word_number(const Word& w, int D) {
    long long v = 0;
    for (int d : w) {
        if (d < 0 || d >= D)
            throw std::invalid_argument("word_number: digit out of range");
        v = v * D + d;
    }
    return v;
}

void check_coherent_index(const CoherentIndex& idx, RegisterShape shape) {
    if (idx.ell < 0 || idx.ell > shape.k)
        throw std::invalid_argument("check_coherent_index: ell out of range");
    if (static_cast<int>(idx.eps.size()) != idx.ell)
        throw std::invalid_argument("check_coherent_index: |eps| must equal ell");
    if (static_cast<int>(idx.eps_prime.size()) != shape.k - idx.ell)
        throw std::invalid_argument("check_coherent_index: |eps_prime| must equal k - ell");
    symbolic::check_word(idx.eps, shape.D);
    symbolic::check_word(idx.eps_prime, shape.D);
}

std::size_t coherent_ordinal(const CoherentIndex& idx, RegisterShape shape) {
    check_coherent_index(idx, shape);
    std::size_t stride = static_cast<std::size_t>(ipow_checked(shape.D, shape.k - idx.ell));
    return static_cast<std::size_t>(word_number(idx.eps, shape.D)) * stride +
           static_cast<std::size_t>(word_number(idx.eps_prime, shape.D));
}

CoherentIndex coherent_from_ordinal(RegisterShape shape, int ell, std::size_t ordinal) {
    if (ell < 0 || ell > shape.k)
        throw std::invalid_argument("coherent_from_ordinal: ell out of range");
    if (ordinal >= shape.dimension())
        throw std::invalid_argument("coherent_from_ordinal: ordinal out of range");
    CoherentIndex idx;
    idx.ell = ell;
    idx.eps.resize(ell);
    idx.eps_prime.resize(shape.k - ell);
    std::size_t stride = static_cast<std::size_t>(ipow_checked(shape.D, shape.k - ell));
    std::size_t e = ordinal / stride;
    std::size_t ep = ordinal % stride;
    for (int i = ell - 1; i >= 0; --i) {
        idx.eps[i] = static_cast<int>(e % shape.D);
        e /= shape.D;
    }
    for (int i = shape.k - ell - 1; i >= 0; --i) {
        idx.eps_prime[i] = static_cast<int>(ep % shape.D);
        ep /= shape.D;
    }
    return idx;
}

// ── Transforms ───────────────────────────────────────────────────────────────

Eigen::MatrixXcd dft_matrix(int D) {
    if (D < 2) throw std::invalid_argument("dft_matrix: D must be at least 2");
    Eigen::MatrixXcd F(D, D);
    const double scale = 1.0 / std::sqrt(static_cast<double>(D));
    for (int j = 0; j < D; ++j)
        for (int m = 0; m < D; ++m) {
            double phase = -2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>(m) / static_cast<double>(D);
            F(j, m) = scale * Cx{std::cos(phase), std::sin(phase)};
        }
    return F;
}

StateVector apply_dft_axis(const StateVector& psi, int axis, Direction dir) {
    const RegisterShape shape = psi.shape;
    if (axis < 1 || axis > shape.k)
        throw std::invalid_argument("apply_dft_axis: axis out of range");
    const int D = shape.D;
    const std::size_t N = shape.dimension();
    const std::size_t stride = static_cast<std::size_t>(ipow_checked(D, shape.k - axis));
    const std::size_t block = stride * static_cast<std::size_t>(D);

    // Row-major kernel; F_D is symmetric, so the adjoint is the conjugate.
    Eigen::MatrixXcd F = dft_matrix(D);
    std::vector<Cx> kernel(static_cast<std::size_t>(D) * D);
    for (int r = 0; r < D; ++r)
        for (int c = 0; c < D; ++c) {
            Cx v = F(r, c);
            kernel[static_cast<std::size_t>(r) * D + c] =
                dir == Direction::forward ? v : std::conj(v);
        }

    StateVector out = zero_state(shape);
    std::vector<Cx> slot(D);
    for (std::size_t base = 0; base < N; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            for (int d = 0; d < D; ++d)
                slot[d] = psi.amps[base + off + stride * static_cast<std::size_t>(d)];
            for (int r = 0; r < D; ++r) {
                Cx acc{0.0, 0.0};
                for (int c = 0; c < D; ++c)
                    acc += kernel[static_cast<std::size_t>(r) * D + c] * slot[c];
                out.amps[base + off + stride * static_cast<std::size_t>(r)] = acc;
            }
        }
    }
    return out;
}

namespace {

// Permutation j = (ε₁…ε_k) ↦ (ε_k…ε₁); an involution.
StateVector reverse_axes(const StateVector& psi) {
    const RegisterShape shape = psi.shape;
    const int D = shape.D;
    const std::size_t N = shape.dimension();
    StateVector out = zero_state(shape);
    for (std::size_t j = 0; j < N; ++j) {
        std::size_t r = 0;
        std::size_t v = j;
        for (int i = 0; i < shape.k; ++i) {
            r = r * static_cast<std::size_t>(D) + v % static_cast<std::size_t>(D);
            v /= static_cast<std::size_t>(D);
        }
        out.amps[r] = psi.amps[j];
    }
    return out;
}

}  // namespace

StateVector walsh_transform(const StateVector& psi, Direction dir) {
    // W = R ∘ F^{⊗k} with R the axis reversal; W* = R ∘ (F*)^{⊗k}.  The two
    // factors commute (R conjugates F^{⊗k} into itself), so a single formula
    // with the kernel direction flipped covers both.
    StateVector out = reverse_axes(psi);
    for (int axis = 1; axis <= psi.shape.k; ++axis)
        out = apply_dft_axis(out, axis, dir);
    return out;
}

// ── States ───────────────────────────────────────────────────────────────────

StateVector tensor_state(int D, const std::vector<std::vector<Cx>>& factors) {
    if (factors.empty())
        throw std::invalid_argument("tensor_state: need at least one factor");
    for (const auto& f : factors)
        if (static_cast<int>(f.size()) != D)
            throw std::invalid_argument("tensor_state: factor length must equal D");
    RegisterShape shape = make_shape(D, static_cast<int>(factors.size()));
    StateVector psi = zero_state(shape);
    const std::size_t N = shape.dimension();
    for (std::size_t j = 0; j < N; ++j) {
        Cx prod{1.0, 0.0};
        std::size_t v = j;
        for (int i = shape.k - 1; i >= 0; --i) {
            prod *= factors[static_cast<std::size_t>(i)][v % static_cast<std::size_t>(D)];
            v /= static_cast<std::size_t>(D);
        }
        psi.amps[j] = prod;
    }
    return psi;
}

StateVector coherent_state(RegisterShape shape, const CoherentIndex& idx) {
    check_coherent_index(idx, shape);
    const int D = shape.D;
    Eigen::MatrixXcd F = dft_matrix(D);
    std::vector<std::vector<Cx>> factors;
    factors.reserve(static_cast<std::size_t>(shape.k));
    for (int i = 0; i < idx.ell; ++i) {
        std::vector<Cx> e(D, Cx{0.0, 0.0});
        e[static_cast<std::size_t>(idx.eps[static_cast<std::size_t>(i)])] = Cx{1.0, 0.0};
        factors.push_back(std::move(e));
    }
    // Momentum half in reversed digit order: factor ℓ+i carries ε′_{k−ℓ+1−i}.
    const int m = shape.k - idx.ell;
    for (int i = 0; i < m; ++i) {
        int digit = idx.eps_prime[static_cast<std::size_t>(m - 1 - i)];
        std::vector<Cx> col(D);
        for (int r = 0; r < D; ++r) col[static_cast<std::size_t>(r)] = std::conj(F(r, digit));
        factors.push_back(std::move(col));
    }
    return tensor_state(D, factors);
}

Cx overlap(const StateVector& a, const StateVector& b) {
    if (!(a.shape == b.shape))
        throw std::invalid_argument("overlap: shape mismatch");
    Cx acc{0.0, 0.0};
    for (std::size_t j = 0; j < a.amps.size(); ++j)
        acc += std::conj(a.amps[j]) * b.amps[j];
    return acc;
}

}  // namespace walshbaker::hilbert
