#include "walshbaker/quantization.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "walshbaker/linalg.hpp"

namespace walshbaker::quantization {

namespace {

using hilbert::word_number;

Word number_to_word(long long v, int D, int len) {
    Word w(static_cast<std::size_t>(len));
    for (int i = len - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<int>(v % D);
        v /= D;
    }
    return w;
}

long long cells_q(const Observable& f) { return ipow_checked(f.D, f.n_q); }
long long cells_p(const Observable& f) { return ipow_checked(f.D, f.n_p); }

std::size_t cell_index(const Observable& f, long long qnum, long long pnum) {
    return static_cast<std::size_t>(qnum * cells_p(f) + pnum);
}

}  // namespace

Observable make_observable(int D, int n_q, int n_p, std::vector<Cx> values,
                           std::optional<double> lip_declared) {
    if (D < 2) throw std::invalid_argument("make_observable: D must be at least 2");
    if (n_q < 0 || n_p < 0)
        throw std::invalid_argument("make_observable: depths must be nonnegative");
    long long need = ipow_checked(D, n_q + n_p);
    if (static_cast<long long>(values.size()) != need)
        throw std::invalid_argument("make_observable: table must have D^(n_q+n_p) entries");
    if (lip_declared && *lip_declared < 0.0)
        throw std::invalid_argument("make_observable: declared Lipschitz constant must be nonnegative");
    return Observable{D, n_q, n_p, std::move(values), lip_declared};
}

Observable constant_observable(int D, Cx value) {
    return make_observable(D, 0, 0, {value}, std::abs(value));
}

Observable indicator_observable(int D, const Word& w_q, const Word& w_p) {
    symbolic::check_word(w_q, D);
    symbolic::check_word(w_p, D);
    int n_q = static_cast<int>(w_q.size());
    int n_p = static_cast<int>(w_p.size());
    std::vector<Cx> values(static_cast<std::size_t>(ipow_checked(D, n_q + n_p)),
                           Cx{0.0, 0.0});
    Observable f{D, n_q, n_p, std::move(values), std::nullopt};
    f.values[cell_index(f, word_number(w_q, D), word_number(w_p, D))] = Cx{1.0, 0.0};
    return f;
}

Cx table_value(const Observable& f, const Word& w_q, const Word& w_p) {
    if (static_cast<int>(w_q.size()) != f.n_q || static_cast<int>(w_p.size()) != f.n_p)
        throw std::invalid_argument("table_value: word lengths must match the table depths");
    symbolic::check_word(w_q, f.D);
    symbolic::check_word(w_p, f.D);
    return f.values[cell_index(f, word_number(w_q, f.D), word_number(w_p, f.D))];
}

Cx rectangle_average(const Observable& f, const CylinderRect& rect) {
    symbolic::check_word(rect.eps, f.D);
    symbolic::check_word(rect.eps_prime, f.D);
    // Table cells consistent with the rectangle form a contiguous index range
    // on each side: a single cell when the rectangle is at least as deep, all
    // refinements of the rectangle word otherwise.
    auto side_span = [&](const Word& w, int depth) -> std::pair<long long, long long> {
        if (static_cast<int>(w.size()) >= depth) {
            Word head(w.begin(), w.begin() + depth);
            return {word_number(head, f.D), 1};
        }
        long long mult = ipow_checked(f.D, depth - static_cast<int>(w.size()));
        return {word_number(w, f.D) * mult, mult};
    };
    auto [q0, qc] = side_span(rect.eps, f.n_q);
    auto [p0, pc] = side_span(rect.eps_prime, f.n_p);
    Cx acc{0.0, 0.0};
    for (long long qi = q0; qi < q0 + qc; ++qi)
        for (long long pi = p0; pi < p0 + pc; ++pi)
            acc += f.values[cell_index(f, qi, pi)];
    return acc / static_cast<double>(qc * pc);
}

Cx integral(const Observable& f) {
    Cx acc{0.0, 0.0};
    for (const Cx& v : f.values) acc += v;
    return acc / static_cast<double>(f.values.size());
}

double lipschitz_norm(const Observable& f) {
    double sup = 0.0;
    for (const Cx& v : f.values) sup = std::max(sup, std::abs(v));
    const long long cq = cells_q(f);
    const long long cp = cells_p(f);
    const long long n = cq * cp;
    double slope = 0.0;
    for (long long a = 0; a < n; ++a) {
        CylinderRect ra{number_to_word(a / cp, f.D, f.n_q),
                        number_to_word(a % cp, f.D, f.n_p)};
        for (long long b = a + 1; b < n; ++b) {
            CylinderRect rb{number_to_word(b / cp, f.D, f.n_q),
                            number_to_word(b % cp, f.D, f.n_p)};
            double d = symbolic::sigma_distance(ra, rb, f.D);
            double df = std::abs(f.values[static_cast<std::size_t>(a)] -
                                 f.values[static_cast<std::size_t>(b)]);
            slope = std::max(slope, df / d);
        }
    }
    return sup + slope;
}

double lipschitz_bound(const Observable& f) {
    return f.lip_declared ? *f.lip_declared : lipschitz_norm(f);
}

Observable refine(const Observable& f, int m_q, int m_p) {
    if (m_q < f.n_q || m_p < f.n_p)
        throw std::invalid_argument("refine: target depths must not decrease");
    std::vector<Cx> values(static_cast<std::size_t>(ipow_checked(f.D, m_q + m_p)));
    long long cp_new = ipow_checked(f.D, m_p);
    long long shift_q = ipow_checked(f.D, m_q - f.n_q);
    long long shift_p = ipow_checked(f.D, m_p - f.n_p);
    for (long long qi = 0; qi < ipow_checked(f.D, m_q); ++qi)
        for (long long pi = 0; pi < cp_new; ++pi)
            values[static_cast<std::size_t>(qi * cp_new + pi)] =
                f.values[cell_index(f, qi / shift_q, pi / shift_p)];
    return Observable{f.D, m_q, m_p, std::move(values), f.lip_declared};
}

Observable multiply(const Observable& f, const Observable& g) {
    if (f.D != g.D) throw std::invalid_argument("multiply: alphabet mismatch");
    int m_q = std::max(f.n_q, g.n_q);
    int m_p = std::max(f.n_p, g.n_p);
    Observable a = refine(f, m_q, m_p);
    Observable b = refine(g, m_q, m_p);
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] *= b.values[i];
    a.lip_declared.reset();
    return a;
}

double sup_distance(const Observable& f, const Observable& g) {
    if (f.D != g.D) throw std::invalid_argument("sup_distance: alphabet mismatch");
    int m_q = std::max(f.n_q, g.n_q);
    int m_p = std::max(f.n_p, g.n_p);
    Observable a = refine(f, m_q, m_p);
    Observable b = refine(g, m_q, m_p);
    double sup = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        sup = std::max(sup, std::abs(a.values[i] - b.values[i]));
    return sup;
}

Observable compose_with_baker(const Observable& f, Direction dir) {
    std::optional<double> lip;
    if (f.lip_declared) lip = *f.lip_declared * static_cast<double>(f.D);

    if (dir == Direction::forward) {
        // (f∘B)(ε′·ε) = f(ε₂…·(ε₁,ε′₁,…)): one digit deeper in q, one
        // shallower in p.
        int g_q = f.n_q + 1;
        int g_p = std::max(f.n_p - 1, 0);
        long long cq = ipow_checked(f.D, g_q);
        long long cp = ipow_checked(f.D, g_p);
        std::vector<Cx> values(static_cast<std::size_t>(cq * cp));
        for (long long qi = 0; qi < cq; ++qi) {
            Word Q = number_to_word(qi, f.D, g_q);
            for (long long pi = 0; pi < cp; ++pi) {
                Word P = number_to_word(pi, f.D, g_p);
                Word fq(Q.begin() + 1, Q.end());
                Word fp;
                if (f.n_p > 0) {
                    fp.push_back(Q.front());
                    fp.insert(fp.end(), P.begin(), P.begin() + (f.n_p - 1));
                }
                values[static_cast<std::size_t>(qi * cp + pi)] = table_value(f, fq, fp);
            }
        }
        return Observable{f.D, g_q, g_p, std::move(values), lip};
    }

    int h_q = std::max(f.n_q - 1, 0);
    int h_p = f.n_p + 1;
    long long cq = ipow_checked(f.D, h_q);
    long long cp = ipow_checked(f.D, h_p);
    std::vector<Cx> values(static_cast<std::size_t>(cq * cp));
    for (long long qi = 0; qi < cq; ++qi) {
        Word Q = number_to_word(qi, f.D, h_q);
        for (long long pi = 0; pi < cp; ++pi) {
            Word P = number_to_word(pi, f.D, h_p);
            Word fq;
            if (f.n_q > 0) {
                fq.push_back(P.front());
                fq.insert(fq.end(), Q.begin(), Q.begin() + (f.n_q - 1));
            }
            Word fp(P.begin() + 1, P.begin() + 1 + f.n_p);
            values[static_cast<std::size_t>(qi * cp + pi)] = table_value(f, fq, fp);
        }
    }
    return Observable{f.D, h_q, h_p, std::move(values), lip};
}

// ── Text format ──────────────────────────────────────────────────────────────

namespace {

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& msg) {
    std::ostringstream os;
    os << "load_observable: " << source << ":" << line << ": " << msg;
    throw std::invalid_argument(os.str());
}

Word parse_word(const std::string& tok, int D, int depth, const std::string& source,
                int line) {
    if (tok == "-") {
        if (depth != 0) parse_fail(source, line, "empty word where depth is nonzero");
        return {};
    }
    if (static_cast<int>(tok.size()) != depth)
        parse_fail(source, line, "word length does not match the declared depth");
    Word w;
    w.reserve(tok.size());
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            parse_fail(source, line, "word must be a digit string");
        int d = c - '0';
        if (d >= D) parse_fail(source, line, "digit out of range for the alphabet");
        w.push_back(d);
    }
    return w;
}

double parse_value(const std::string& tok, const std::string& source, int line) {
    std::size_t slash = tok.find('/');
    if (slash != std::string::npos) {
        std::string ns = tok.substr(0, slash), ds = tok.substr(slash + 1);
        std::size_t npos = 0, dpos = 0;
        long long num = 0, den = 0;
        try {
            num = std::stoll(ns, &npos);
            den = std::stoll(ds, &dpos);
        } catch (const std::exception&) {
            parse_fail(source, line, "malformed rational value");
        }
        if (npos != ns.size() || dpos != ds.size() || den == 0)
            parse_fail(source, line, "malformed rational value");
        return static_cast<double>(num) / static_cast<double>(den);
    }
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == nullptr || *end != '\0' || end == tok.c_str())
        parse_fail(source, line, "malformed numeric value");
    return v;
}

}  // namespace

Observable load_observable(std::istream& in, const std::string& source) {
    std::string line;
    int lineno = 0;
    auto next_content = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos) continue;
            if (line[i] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_content(header)) parse_fail(source, lineno, "missing header line");
    std::istringstream hs(header);
    int D = 0, n_q = -1, n_p = -1;
    std::string extra;
    if (!(hs >> D >> n_q >> n_p) || (hs >> extra))
        parse_fail(source, lineno, "header must be 'D n_q n_p'");
    if (D < 2) parse_fail(source, lineno, "D must be at least 2");
    if (D > 10) parse_fail(source, lineno, "the text format supports D up to 10");
    if (n_q < 0 || n_p < 0) parse_fail(source, lineno, "depths must be nonnegative");

    long long total = ipow_checked(D, n_q + n_p);
    std::vector<Cx> values(static_cast<std::size_t>(total), Cx{0.0, 0.0});
    std::vector<bool> seen(static_cast<std::size_t>(total), false);
    long long filled = 0;

    std::string content;
    while (next_content(content)) {
        std::istringstream ls(content);
        std::string tq, tp, tv;
        if (!(ls >> tq >> tp >> tv) || (ls >> extra))
            parse_fail(source, lineno, "expected 'word_q word_p value'");
        Word wq = parse_word(tq, D, n_q, source, lineno);
        Word wp = parse_word(tp, D, n_p, source, lineno);
        long long cp = ipow_checked(D, n_p);
        std::size_t idx =
            static_cast<std::size_t>(word_number(wq, D) * cp + word_number(wp, D));
        if (seen[idx]) parse_fail(source, lineno, "duplicate table cell");
        seen[idx] = true;
        values[idx] = Cx{parse_value(tv, source, lineno), 0.0};
        ++filled;
    }
    if (filled != total)
        parse_fail(source, lineno, "table is incomplete: every cell needs one line");
    return make_observable(D, n_q, n_p, std::move(values));
}

Observable load_observable_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_observable: cannot open " + path);
    return load_observable(in, path);
}

void save_observable(const Observable& f, std::ostream& out) {
    for (const Cx& v : f.values)
        if (v.imag() != 0.0)
            throw std::invalid_argument("save_observable: complex tables have no text form");
    out << f.D << " " << f.n_q << " " << f.n_p << "\n";
    const long long cq = cells_q(f);
    const long long cp = cells_p(f);
    for (long long qi = 0; qi < cq; ++qi)
        for (long long pi = 0; pi < cp; ++pi) {
            std::string sq, sp;
            for (int d : number_to_word(qi, f.D, f.n_q)) sq.push_back(static_cast<char>('0' + d));
            for (int d : number_to_word(pi, f.D, f.n_p)) sp.push_back(static_cast<char>('0' + d));
            if (sq.empty()) sq = "-";
            if (sp.empty()) sp = "-";
            out << sq << " " << sp << " "
                << format_double(f.values[cell_index(f, qi, pi)].real()) << "\n";
        }
}

void save_observable_file(const Observable& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_observable: cannot open " + path);
    save_observable(f, out);
}

// ── The quantized operator ───────────────────────────────────────────────────

AntiWickOperator op_anti_wick(const Observable& f, RegisterShape shape, int ell) {
    if (f.D != shape.D) throw std::invalid_argument("op_anti_wick: alphabet mismatch");
    if (ell < 0 || ell > shape.k)
        throw std::invalid_argument("op_anti_wick: ell out of range");
    const std::size_t N = shape.dimension();
    AntiWickOperator A{shape, ell, std::vector<Cx>(N)};
    for (std::size_t ord = 0; ord < N; ++ord) {
        hilbert::CoherentIndex idx = hilbert::coherent_from_ordinal(shape, ell, ord);
        A.diag[ord] = rectangle_average(f, CylinderRect{idx.eps, idx.eps_prime});
    }
    return A;
}

Cx trace(const AntiWickOperator& A) {
    Cx acc{0.0, 0.0};
    for (const Cx& v : A.diag) acc += v;
    return acc;
}

namespace {

// Suffix digit reversal linking position order to coherent order: the
// momentum half of a coherent state carries ε′ in reversed digit positions.
std::size_t reverse_digits(std::size_t t, int D, int m) {
    std::size_t r = 0;
    for (int i = 0; i < m; ++i) {
        r = r * static_cast<std::size_t>(D) + t % static_cast<std::size_t>(D);
        t /= static_cast<std::size_t>(D);
    }
    return r;
}

}  // namespace

StateVector apply_anti_wick(const AntiWickOperator& A, const StateVector& psi,
                            bool conjugate_diag) {
    if (!(psi.shape == A.shape))
        throw std::invalid_argument("apply_anti_wick: shape mismatch");
    const int m = A.shape.k - A.ell;
    const std::size_t S = static_cast<std::size_t>(ipow_checked(A.shape.D, m));

    StateVector phi = psi;
    for (int axis = A.ell + 1; axis <= A.shape.k; ++axis)
        phi = hilbert::apply_dft_axis(phi, axis, Direction::forward);
    for (std::size_t j = 0; j < phi.amps.size(); ++j) {
        std::size_t e = j / S;
        std::size_t t = j % S;
        Cx d = A.diag[e * S + reverse_digits(t, A.shape.D, m)];
        phi.amps[j] *= conjugate_diag ? std::conj(d) : d;
    }
    for (int axis = A.ell + 1; axis <= A.shape.k; ++axis)
        phi = hilbert::apply_dft_axis(phi, axis, Direction::inverse);
    return phi;
}

Cx expectation(const StateVector& psi, const AntiWickOperator& A) {
    if (!(psi.shape == A.shape))
        throw std::invalid_argument("expectation: shape mismatch");
    const int m = A.shape.k - A.ell;
    const std::size_t S = static_cast<std::size_t>(ipow_checked(A.shape.D, m));
    StateVector phi = psi;
    for (int axis = A.ell + 1; axis <= A.shape.k; ++axis)
        phi = hilbert::apply_dft_axis(phi, axis, Direction::forward);
    Cx acc{0.0, 0.0};
    for (std::size_t j = 0; j < phi.amps.size(); ++j) {
        std::size_t e = j / S;
        std::size_t t = j % S;
        acc += std::norm(phi.amps[j]) * A.diag[e * S + reverse_digits(t, A.shape.D, m)];
    }
    return acc;
}

Eigen::MatrixXcd dense_anti_wick(const AntiWickOperator& A) {
    return linalg::dense_from_apply(
        [&](const StateVector& psi) { return apply_anti_wick(A, psi); }, A.shape);
}

// ── Egorov ───────────────────────────────────────────────────────────────────

EgorovResult egorov_defect(const Observable& f, RegisterShape shape, int ell,
                           std::size_t dense_cap) {
    if (f.D != shape.D) throw std::invalid_argument("egorov_defect: alphabet mismatch");
    if (ell < 0 || ell + 1 > shape.k)
        throw std::invalid_argument("egorov_defect: need 0 <= ell and ell + 1 <= k");

    const bool compatible = f.n_q <= ell && f.n_p <= shape.k - ell - 1;
    Observable fB = compose_with_baker(f, Direction::forward);
    AntiWickOperator lhs_op = op_anti_wick(f, shape, ell);
    AntiWickOperator rhs_op = op_anti_wick(fB, shape, compatible ? ell + 1 : ell);

    auto diff = [&](const StateVector& psi) {
        StateVector lhs = baker::apply_baker(psi, 1);
        lhs = apply_anti_wick(lhs_op, lhs);
        lhs = baker::apply_baker(lhs, -1);
        StateVector rhs = apply_anti_wick(rhs_op, psi);
        for (std::size_t i = 0; i < lhs.amps.size(); ++i) lhs.amps[i] -= rhs.amps[i];
        return lhs;
    };
    auto diff_adj = [&](const StateVector& psi) {
        StateVector lhs = baker::apply_baker(psi, 1);
        lhs = apply_anti_wick(lhs_op, lhs, true);
        lhs = baker::apply_baker(lhs, -1);
        StateVector rhs = apply_anti_wick(rhs_op, psi, true);
        for (std::size_t i = 0; i < lhs.amps.size(); ++i) lhs.amps[i] -= rhs.amps[i];
        return lhs;
    };

    EgorovResult res;
    res.exact_identity = compatible;
    res.defect = shape.dimension() <= dense_cap
                     ? linalg::spectral_norm_dense(linalg::dense_from_apply(diff, shape))
                     : linalg::spectral_norm_power(diff, diff_adj, shape);
    res.bound = compatible
                    ? 0.0
                    : 2.0 * lipschitz_bound(f) *
                          std::pow(static_cast<double>(shape.D),
                                   1.0 - static_cast<double>(
                                             std::min(ell, shape.k - ell - 1)));
    return res;
}

// ── Quantum ergodicity statistic ─────────────────────────────────────────────

QEStatistics qe_variance(const baker::EigenDecomposition& dec, const Observable& f,
                         int ell) {
    const std::size_t N = dec.shape.dimension();
    std::size_t total = 0;
    for (const auto& space : dec.spaces) total += space.basis.size();
    if (total != N)
        throw std::invalid_argument("qe_variance: eigenbasis is not complete");

    AntiWickOperator A = op_anti_wick(f, dec.shape, ell);
    Cx target = integral(f);
    Cx mean{0.0, 0.0};
    double var = 0.0;
    for (const auto& space : dec.spaces)
        for (const StateVector& psi : space.basis) {
            Cx val = expectation(psi, A);
            mean += val;
            var += std::norm(val - target);
        }
    mean /= static_cast<double>(N);
    var /= static_cast<double>(N);
    return QEStatistics{mean, target, var};
}

}  // namespace walshbaker::quantization
