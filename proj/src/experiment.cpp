#include "walshbaker/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "walshbaker/acceptance.hpp"
#include "walshbaker/baker.hpp"
#include "walshbaker/eup.hpp"
#include "walshbaker/linalg.hpp"
#include "walshbaker/measures.hpp"
#include "walshbaker/partitions.hpp"
#include "walshbaker/quantization.hpp"
#include "walshbaker/tolerances.hpp"

namespace walshbaker::experiment {

namespace fs = std::filesystem;
using hilbert::RegisterShape;
using hilbert::StateVector;
using symbolic::Word;

namespace {

const std::set<std::string>& known_commands() {
    static const std::set<std::string> cmds = {
        "spectrum", "eigenstate", "husimi",      "entropy", "egorov",
        "norms",    "eup",        "qe-variance", "verify"};
    return cmds;
}

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

long long parse_int_value(const std::string& text, bool& ok) {
    ok = false;
    if (text.empty()) return 0;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(text.c_str(), &end, 10);
    if (errno != 0 || end != text.c_str() + text.size()) return 0;
    ok = true;
    return v;
}

std::uint64_t parse_seed_value(const std::string& text, bool& ok) {
    ok = false;
    if (text.empty() || text[0] == '-') return 0;
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (errno != 0 || end != text.c_str() + text.size()) return 0;
    ok = true;
    return static_cast<std::uint64_t>(v);
}

[[noreturn]] void parse_fail(const std::string& source, int line,
                             const std::string& message) {
    std::ostringstream os;
    os << "load_manifest: " << source << ":" << line << ": " << message;
    throw std::invalid_argument(os.str());
}

// ── Result bundles ───────────────────────────────────────────────────────────

struct Bundle {
    fs::path dir;
    std::vector<std::pair<std::string, std::string>> extra;
    std::chrono::steady_clock::time_point start;
    bool active = false;
};

Bundle open_bundle(const Manifest& m) {
    Bundle b;
    if (m.out.empty()) return b;
    b.dir = fs::path(m.out);
    std::error_code ec;
    fs::create_directories(b.dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + m.out);
    // Drop any stale completeness marker before data files are touched, so an
    // interrupted rerun cannot leave metadata describing a previous run.
    fs::remove(b.dir / "metadata.txt", ec);
    b.start = std::chrono::steady_clock::now();
    b.active = true;
    return b;
}

void note(Bundle& b, const std::string& key, const std::string& value) {
    if (b.active) b.extra.emplace_back(key, value);
}

void write_tolerance_table(std::ostream& out) {
    out << "tolerance.unitarity=" << format_double(tol::unitarity) << "\n"
        << "tolerance.exact_period=" << format_double(tol::exact_period) << "\n"
        << "tolerance.parity_dense=" << format_double(tol::parity_dense) << "\n"
        << "tolerance.oracle_dense=" << format_double(tol::oracle_dense) << "\n"
        << "tolerance.eigen_residual=" << format_double(tol::eigen_residual) << "\n"
        << "tolerance.reconstruction=" << format_double(tol::reconstruction) << "\n"
        << "tolerance.cross_overlap=" << format_double(tol::cross_overlap) << "\n"
        << "tolerance.rank_threshold=" << format_double(tol::rank_threshold) << "\n"
        << "tolerance.eigenvector_pre=" << format_double(tol::eigenvector_pre) << "\n"
        << "tolerance.husimi_dynamics=" << format_double(tol::husimi_dynamics) << "\n"
        << "tolerance.unitary_pre=" << format_double(tol::unitary_pre) << "\n"
        << "tolerance.mirror_symmetry=" << format_double(tol::mirror_symmetry) << "\n"
        << "tolerance.entropy_bound=" << format_double(tol::entropy_bound) << "\n"
        << "tolerance.wehrl_equality=" << format_double(tol::wehrl_equality) << "\n"
        << "tolerance.refined_bound=" << format_double(tol::refined_bound) << "\n"
        << "tolerance.invariance=" << format_double(tol::invariance) << "\n"
        << "tolerance.mass_total=" << format_double(tol::mass_total) << "\n"
        << "tolerance.projector_norm=" << format_double(tol::projector_norm) << "\n"
        << "tolerance.egorov_exact=" << format_double(tol::egorov_exact) << "\n"
        << "tolerance.bound_slack=" << format_double(tol::bound_slack) << "\n"
        << "tolerance.homoclinic=" << format_double(tol::homoclinic) << "\n"
        << "tolerance.block_constant=" << format_double(tol::block_constant) << "\n"
        << "tolerance.family_residual=" << format_double(tol::family_residual) << "\n"
        << "tolerance.husimi_product=" << format_double(tol::husimi_product) << "\n"
        << "tolerance.tv_product=" << format_double(tol::tv_product) << "\n"
        << "tolerance.tensor_shannon=" << format_double(tol::tensor_shannon) << "\n"
        << "tolerance.eup_slack=" << format_double(tol::eup_slack) << "\n"
        << "tolerance.qe_mean=" << format_double(tol::qe_mean) << "\n"
        << "tolerance.moment_limit=" << format_double(tol::moment_limit) << "\n"
        << "tolerance.power_tol=" << format_double(tol::power_tol) << "\n"
        << "tolerance.power_iterations=" << tol::power_iterations << "\n"
        << "tolerance.dense_cap_spectral=" << tol::dense_cap_spectral << "\n"
        << "tolerance.dense_cap_norms=" << tol::dense_cap_norms << "\n"
        << "tolerance.dense_cap_refined=" << tol::dense_cap_refined << "\n";
}

// Metadata goes last, through a rename, so its presence certifies the bundle.
void close_bundle(Bundle& b, const Manifest& m) {
    if (!b.active) return;
    double wall = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - b.start)
                      .count();
    std::ostringstream meta;
    meta << "schema=1\n";
    meta << "tool=" << tool_name << "\n";
    meta << "version=" << tool_version << "\n";
    std::ostringstream ms;
    save_manifest(m, ms);
    std::istringstream lines(ms.str());
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) meta << "manifest." << line << "\n";
    meta << "resolved.ell=" << effective_ell(m) << "\n";
    meta << "wall_time_seconds=" << format_double(wall) << "\n";
    for (const auto& [key, value] : b.extra) meta << key << "=" << value << "\n";
    write_tolerance_table(meta);

    fs::path tmp = b.dir / "metadata.txt.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << meta.str();
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, b.dir / "metadata.txt");
}

std::ofstream open_data_file(const Bundle& b, const std::string& name) {
    fs::path p = b.dir / name;
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

quantization::Observable default_observable(int D) {
    // Indicator of the cylinder [·0]; depth (1, 0).
    return quantization::indicator_observable(D, Word{0}, Word{});
}

quantization::Observable resolve_observable(const Manifest& m) {
    if (m.observable.empty()) return default_observable(m.D);
    quantization::Observable f = quantization::load_observable_file(m.observable);
    if (f.D != m.D)
        throw std::invalid_argument(
            "observable alphabet D=" + std::to_string(f.D) +
            " does not match manifest D=" + std::to_string(m.D));
    return f;
}

const StateVector& pick_eigenstate(const baker::EigenDecomposition& dec,
                                   const Manifest& m) {
    if (m.phase < 0 || m.phase >= dec.M)
        throw std::invalid_argument("manifest: phase " + std::to_string(m.phase) +
                                    " outside [0, " + std::to_string(dec.M) + ")");
    const auto& space = dec.spaces.at(static_cast<std::size_t>(m.phase));
    if (m.index < 0 ||
        static_cast<std::size_t>(m.index) >= space.basis.size())
        throw std::invalid_argument(
            "manifest: index " + std::to_string(m.index) +
            " exceeds degeneracy " + std::to_string(space.basis.size()) +
            " of phase " + std::to_string(m.phase));
    return space.basis[static_cast<std::size_t>(m.index)];
}

double eigen_residual(const StateVector& psi, double theta) {
    StateVector b = baker::apply_baker(psi, 1);
    Cx phase = std::exp(Cx(0.0, theta));
    double acc = 0.0;
    for (std::size_t j = 0; j < b.amps.size(); ++j)
        acc += std::norm(b.amps[j] - phase * psi.amps[j]);
    return std::sqrt(acc);
}

// ── Commands ─────────────────────────────────────────────────────────────────

int cmd_spectrum(const Manifest& m, std::ostream& out) {
    RegisterShape shape = hilbert::make_shape(m.D, m.k);
    auto dec = baker::spectral_decompose(shape);
    std::size_t total = 0;
    for (const auto& s : dec.spaces) total += s.basis.size();
    out << "spectrum D=" << m.D << " k=" << m.k << " M=" << dec.M
        << " dim=" << shape.dimension() << "\n";
    for (const auto& s : dec.spaces)
        out << "r=" << s.r << " theta=" << format_double(s.theta)
            << " degeneracy=" << s.basis.size() << "\n";
    out << "total_rank=" << total << "\n";

    Bundle b = open_bundle(m);
    if (b.active) {
        auto csv = open_data_file(b, "spectrum.csv");
        csv << "# walsh-spectrum D=" << m.D << " k=" << m.k << " M=" << dec.M
            << "\n";
        csv << "r,theta,degeneracy\n";
        for (const auto& s : dec.spaces)
            csv << s.r << "," << format_double(s.theta) << ","
                << s.basis.size() << "\n";
        note(b, "spectrum.total_rank", std::to_string(total));
        close_bundle(b, m);
    }
    return total == shape.dimension() ? 0 : 2;
}

int cmd_eigenstate(const Manifest& m, std::ostream& out) {
    RegisterShape shape = hilbert::make_shape(m.D, m.k);
    auto dec = baker::spectral_decompose(shape);
    const StateVector& psi = pick_eigenstate(dec, m);
    double theta = dec.spaces[static_cast<std::size_t>(m.phase)].theta;
    double res = eigen_residual(psi, theta);
    double h = measures::shannon_entropy(psi);
    out << "eigenstate D=" << m.D << " k=" << m.k << " phase=" << m.phase
        << " index=" << m.index << "\n";
    out << "theta=" << format_double(theta) << "\n";
    out << "residual=" << format_double(res) << "\n";
    out << "shannon_entropy=" << format_double(h) << "\n";

    Bundle b = open_bundle(m);
    if (b.active) {
        auto csv = open_data_file(b, "eigenstate.csv");
        csv << "# walsh-eigenstate D=" << m.D << " k=" << m.k
            << " phase=" << m.phase << " index=" << m.index
            << " theta=" << format_double(theta) << "\n";
        csv << "j,re,im\n";
        for (std::size_t j = 0; j < psi.amps.size(); ++j)
            csv << j << "," << format_double(psi.amps[j].real()) << ","
                << format_double(psi.amps[j].imag()) << "\n";
        note(b, "eigenstate.residual", format_double(res));
        note(b, "eigenstate.shannon_entropy", format_double(h));
        close_bundle(b, m);
    }
    return res <= tol::eigen_residual ? 0 : 2;
}

int cmd_husimi(const Manifest& m, std::ostream& out) {
    RegisterShape shape = hilbert::make_shape(m.D, m.k);
    int ell = effective_ell(m);
    auto dec = baker::spectral_decompose(shape);
    const StateVector& psi = pick_eigenstate(dec, m);
    auto hm = measures::husimi(psi, ell);
    double total = 0.0;
    for (double w : hm.weights) total += w;
    double wehrl = symbolic::partition_entropy(hm.weights);
    out << "husimi D=" << m.D << " k=" << m.k << " ell=" << ell
        << " phase=" << m.phase << " index=" << m.index << "\n";
    out << "weight_total=" << format_double(total) << "\n";
    out << "wehrl_entropy=" << format_double(wehrl) << "\n";

    Bundle b = open_bundle(m);
    if (b.active) {
        std::string name =
            m.format == "pgm" ? std::string("husimi.pgm") : std::string("husimi.csv");
        measures::export_husimi_grid(
            hm, (b.dir / name).string(),
            m.format == "pgm" ? measures::GridFormat::pgm
                              : measures::GridFormat::csv);
        note(b, "husimi.weight_total", format_double(total));
        note(b, "husimi.wehrl_entropy", format_double(wehrl));
        close_bundle(b, m);
    }
    return std::abs(total - 1.0) <= tol::mass_total ? 0 : 2;
}

int cmd_entropy(const Manifest& m, std::ostream& out) {
    RegisterShape shape = hilbert::make_shape(m.D, m.k);
    auto dec = baker::spectral_decompose(shape);
    const StateVector& psi = pick_eigenstate(dec, m);
    auto report = measures::entropy_report(psi);
    out << "entropy D=" << m.D << " k=" << m.k << " phase=" << m.phase
        << " index=" << m.index << "\n";
    out << "shannon=" << format_double(report.shannon) << "\n";
    out << "bound=" << format_double(report.eup_bound) << "\n";
    out << "slack=" << format_double(report.slack) << "\n";
    for (std::size_t l = 0; l < report.wehrl_by_ell.size(); ++l)
        out << "wehrl_ell_" << l << "=" << format_double(report.wehrl_by_ell[l])
            << "\n";
    for (std::size_t i = 0; i < report.refined_by_n.size(); ++i)
        out << "refined_n_" << (i + 1) << "="
            << format_double(report.refined_by_n[i]) << "\n";

    Bundle b = open_bundle(m);
    if (b.active) {
        auto csv = open_data_file(b, "entropy.csv");
        csv << "# walsh-entropy D=" << m.D << " k=" << m.k
            << " phase=" << m.phase << " index=" << m.index << "\n";
        csv << "quantity,value\n";
        csv << "shannon," << format_double(report.shannon) << "\n";
        csv << "bound," << format_double(report.eup_bound) << "\n";
        csv << "slack," << format_double(report.slack) << "\n";
        for (std::size_t l = 0; l < report.wehrl_by_ell.size(); ++l)
            csv << "wehrl_ell_" << l << ","
                << format_double(report.wehrl_by_ell[l]) << "\n";
        for (std::size_t i = 0; i < report.refined_by_n.size(); ++i)
            csv << "refined_n_" << (i + 1) << ","
                << format_double(report.refined_by_n[i]) << "\n";
        note(b, "entropy.shannon", format_double(report.shannon));
        note(b, "entropy.slack", format_double(report.slack));
        close_bundle(b, m);
    }
    return report.slack >= -tol::entropy_bound ? 0 : 2;
}

int cmd_egorov(const Manifest& m, std::ostream& out) {
    RegisterShape shape = hilbert::make_shape(m.D, m.k);
    int ell = effective_ell(m);
    auto f = resolve_observable(m);
    auto res = quantization::egorov_defect(f, shape, ell);
    out << "egorov D=" << m.D << " k=" << m.k << " ell=" << ell << " n_q="
        << f.n_q << " n_p=" << f.n_p << "\n";
    out << "exact_identity=" << (res.exact_identity ? "true" : "false") << "\n";
    out << "defect=" << format_double(res.defect) << "\n";
    out << "bound=" << format_double(res.bound) << "\n";

    bool pass = res.exact_identity ? res.defect <= tol::egorov_exact
                                   : res.defect <= res.bound + tol::bound_slack;
    Bundle b = open_bundle(m);
    if (b.active) {
        auto csv = open_data_file(b, "egorov.csv");
        csv << "# walsh-egorov D=" << m.D << " k=" << m.k << " ell=" << ell
            << "\n";
        csv << "exact,defect,bound\n";
        csv << (res.exact_identity ? 1 : 0) << "," << format_double(res.defect)
            << "," << format_double(res.bound) << "\n";
        note(b, "egorov.pass", pass ? "true" : "false");
        close_bundle(b, m);
    }
    return pass ? 0 : 2;
}

int cmd_norms(const Manifest& m, const RunOptions& opts, std::ostream& out) {
    RegisterShape shape = hilbert::make_shape(m.D, m.k);
    Word word;
    if (!opts.word.empty()) {
        for (char c : opts.word) {
            if (c < '0' || c > '9')
                throw std::invalid_argument("norms: word must be a digit string");
            int d = c - '0';
            if (d >= m.D)
                throw std::invalid_argument(
                    "norms: word digit " + std::string(1, c) +
                    " out of range for D=" + std::to_string(m.D));
            word.push_back(d);
        }
    } else {
        word.assign(static_cast<std::size_t>(m.n.value_or(m.k)), 0);
    }
    int n = static_cast<int>(word.size());
    double computed = partitions::refined_projector_norm(shape, word);
    double formula = std::pow(static_cast<double>(m.D),
                              -0.5 * std::max(0, n - m.k));
    double diff = std::abs(computed - formula);
    out << "norms D=" << m.D << " k=" << m.k << " word=" << opts.word
        << " n=" << n << "\n";
    out << "computed=" << format_double(computed) << "\n";
    out << "formula=" << format_double(formula) << "\n";
    out << "difference=" << format_double(diff) << "\n";

    bool pass = diff <= tol::projector_norm;
    Bundle b = open_bundle(m);
    if (b.active) {
        auto csv = open_data_file(b, "norms.csv");
        csv << "# walsh-norms D=" << m.D << " k=" << m.k << "\n";
        csv << "word,computed,formula\n";
        std::string digits;
        for (int d : word) digits += static_cast<char>('0' + d);
        csv << digits << "," << format_double(computed) << ","
            << format_double(formula) << "\n";
        note(b, "norms.pass", pass ? "true" : "false");
        close_bundle(b, m);
    }
    return pass ? 0 : 2;
}

int cmd_eup(const Manifest& m, const RunOptions& opts, std::ostream& out) {
    RegisterShape shape = hilbert::make_shape(m.D, m.k);
    std::size_t N = shape.dimension();
    if (N > tol::dense_cap_norms)
        throw ResourceLimitError("eup: dimension " + std::to_string(N) +
                                 " exceeds dense cap " +
                                 std::to_string(tol::dense_cap_norms));
    auto dim = static_cast<Eigen::Index>(N);
    int blocks = m.n.value_or(std::min<int>(4, static_cast<int>(N)));
    int violations = 0;
    int saturated = 0;
    double min_slack = std::numeric_limits<double>::infinity();

    Bundle b = open_bundle(m);
    std::ofstream csv;
    if (b.active) {
        csv = open_data_file(b, "eup.csv");
        csv << "# walsh-eup N=" << N << " trials=" << opts.trials << "\n";
        csv << "seed,N,h_in,h_out,bound,slack\n";
    }
    for (int t = 0; t < opts.trials; ++t) {
        std::uint64_t trial_seed = mix_seed(m.seed, static_cast<std::uint64_t>(t));
        auto U = eup::haar_unitary(dim, mix_seed(trial_seed, 1));
        auto psi = eup::random_unit_vector(dim, mix_seed(trial_seed, 2));
        auto scalar = eup::scalar_eup_check(U, psi);
        auto part = eup::random_partition(dim, blocks, mix_seed(trial_seed, 3));
        auto vec = eup::vector_eup_check(U, part, psi);
        if (!scalar.satisfied) ++violations;
        if (!vec.satisfied) ++violations;
        if (scalar.saturated) ++saturated;
        min_slack = std::min({min_slack, scalar.slack, vec.slack});
        if (b.active)
            csv << trial_seed << "," << N << "," << format_double(scalar.h_in)
                << "," << format_double(scalar.h_out) << ","
                << format_double(scalar.bound) << ","
                << format_double(scalar.slack) << "\n";
    }
    out << "eup N=" << N << " trials=" << opts.trials << " blocks=" << blocks
        << "\n";
    out << "violations=" << violations << "\n";
    out << "saturated=" << saturated << "\n";
    out << "min_slack=" << format_double(min_slack) << "\n";

    if (b.active) {
        csv.flush();
        if (!csv) throw std::runtime_error("write failed for eup.csv");
        csv.close();
        note(b, "eup.violations", std::to_string(violations));
        note(b, "eup.min_slack", format_double(min_slack));
        close_bundle(b, m);
    }
    return violations == 0 ? 0 : 2;
}

int cmd_qe_variance(const Manifest& m, std::ostream& out) {
    RegisterShape shape = hilbert::make_shape(m.D, m.k);
    int ell = effective_ell(m);
    auto f = resolve_observable(m);
    auto dec = baker::spectral_decompose(shape);
    auto stats = quantization::qe_variance(dec, f, ell);
    double mean_gap = std::abs(stats.mean - stats.integral);
    out << "qe-variance D=" << m.D << " k=" << m.k << " ell=" << ell << "\n";
    out << "mean=" << format_complex(stats.mean) << "\n";
    out << "integral=" << format_complex(stats.integral) << "\n";
    out << "variance=" << format_double(stats.variance) << "\n";
    out << "mean_gap=" << format_double(mean_gap) << "\n";

    bool pass = mean_gap <= tol::qe_mean;
    Bundle b = open_bundle(m);
    if (b.active) {
        auto csv = open_data_file(b, "qe.csv");
        csv << "# walsh-qe D=" << m.D << " k=" << m.k << " ell=" << ell << "\n";
        csv << "mean_re,mean_im,integral_re,integral_im,variance\n";
        csv << format_double(stats.mean.real()) << ","
            << format_double(stats.mean.imag()) << ","
            << format_double(stats.integral.real()) << ","
            << format_double(stats.integral.imag()) << ","
            << format_double(stats.variance) << "\n";
        note(b, "qe.mean_gap", format_double(mean_gap));
        close_bundle(b, m);
    }
    return pass ? 0 : 2;
}

int cmd_verify(const Manifest& m, const RunOptions& opts, std::ostream& out) {
    if (opts.verify_shape) {
        RegisterShape shape = hilbert::make_shape(m.D, m.k);
        bool ok = run_shape_verification(shape, m.seed, out);
        return ok ? 0 : 2;
    }
    acceptance::AcceptanceOptions a;
    a.max_dim = opts.max_dim;
    a.seed = m.seed;
    a.tolerance_scale = opts.tolerance_scale;
    auto report = acceptance::run_acceptance_suite(a, out);
    return report.all_pass() ? 0 : 2;
}

}  // namespace

// ── Manifest plumbing ────────────────────────────────────────────────────────

Manifest default_manifest() {
    Manifest m;
    m.seed = default_seed();
    return m;
}

int effective_ell(const Manifest& m) { return m.ell.value_or(m.k / 2); }

void validate_manifest(const Manifest& m) {
    if (!m.command.empty() && known_commands().count(m.command) == 0)
        throw std::invalid_argument("manifest: unknown command '" + m.command +
                                    "'");
    if (m.D < 2)
        throw std::invalid_argument("manifest: D must be at least 2, got " +
                                    std::to_string(m.D));
    if (m.k < 1)
        throw std::invalid_argument("manifest: k must be at least 1, got " +
                                    std::to_string(m.k));
    if (m.ell && (*m.ell < 0 || *m.ell > m.k))
        throw std::invalid_argument("manifest: ell must lie in [0, k], got " +
                                    std::to_string(*m.ell));
    if (m.n && *m.n < 1)
        throw std::invalid_argument("manifest: n must be at least 1, got " +
                                    std::to_string(*m.n));
    if (m.phase < 0)
        throw std::invalid_argument("manifest: phase must be nonnegative");
    if (m.index < 0)
        throw std::invalid_argument("manifest: index must be nonnegative");
    if (m.format != "csv" && m.format != "pgm")
        throw std::invalid_argument("manifest: format must be csv or pgm, got '" +
                                    m.format + "'");
}

Manifest load_manifest_stream(std::istream& in, const std::string& source) {
    Manifest m = default_manifest();
    std::set<std::string> seen;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(source, lineno, "expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) parse_fail(source, lineno, "empty key");
        if (!seen.insert(key).second)
            parse_fail(source, lineno, "duplicate key '" + key + "'");

        bool ok = false;
        if (key == "command") {
            m.command = value;
        } else if (key == "D") {
            m.D = static_cast<int>(parse_int_value(value, ok));
            if (!ok) parse_fail(source, lineno, "D must be an integer");
        } else if (key == "k") {
            m.k = static_cast<int>(parse_int_value(value, ok));
            if (!ok) parse_fail(source, lineno, "k must be an integer");
        } else if (key == "ell") {
            m.ell = static_cast<int>(parse_int_value(value, ok));
            if (!ok) parse_fail(source, lineno, "ell must be an integer");
        } else if (key == "n") {
            m.n = static_cast<int>(parse_int_value(value, ok));
            if (!ok) parse_fail(source, lineno, "n must be an integer");
        } else if (key == "phase") {
            m.phase = static_cast<int>(parse_int_value(value, ok));
            if (!ok) parse_fail(source, lineno, "phase must be an integer");
        } else if (key == "index") {
            m.index = static_cast<int>(parse_int_value(value, ok));
            if (!ok) parse_fail(source, lineno, "index must be an integer");
        } else if (key == "observable") {
            m.observable = value;
        } else if (key == "out") {
            m.out = value;
        } else if (key == "seed") {
            m.seed = parse_seed_value(value, ok);
            if (!ok)
                parse_fail(source, lineno, "seed must be a decimal uint64");
        } else if (key == "format") {
            m.format = value;
        } else {
            parse_fail(source, lineno, "unknown key '" + key + "'");
        }
    }
    try {
        validate_manifest(m);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("load_manifest: " + source + ": " +
                                    e.what());
    }
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("load_manifest: cannot open " + path);
    return load_manifest_stream(in, path);
}

void save_manifest(const Manifest& m, std::ostream& out) {
    if (!m.command.empty()) out << "command=" << m.command << "\n";
    out << "D=" << m.D << "\n";
    out << "k=" << m.k << "\n";
    if (m.ell) out << "ell=" << *m.ell << "\n";
    if (m.n) out << "n=" << *m.n << "\n";
    out << "phase=" << m.phase << "\n";
    out << "index=" << m.index << "\n";
    if (!m.observable.empty()) out << "observable=" << m.observable << "\n";
    if (!m.out.empty()) out << "out=" << m.out << "\n";
    out << "seed=" << m.seed << "\n";
    out << "format=" << m.format << "\n";
}

int run_command(const Manifest& m, const RunOptions& opts, std::ostream& out) {
    validate_manifest(m);
    if (m.command == "spectrum") return cmd_spectrum(m, out);
    if (m.command == "eigenstate") return cmd_eigenstate(m, out);
    if (m.command == "husimi") return cmd_husimi(m, out);
    if (m.command == "entropy") return cmd_entropy(m, out);
    if (m.command == "egorov") return cmd_egorov(m, out);
    if (m.command == "norms") return cmd_norms(m, opts, out);
    if (m.command == "eup") return cmd_eup(m, opts, out);
    if (m.command == "qe-variance") return cmd_qe_variance(m, out);
    if (m.command == "verify") return cmd_verify(m, opts, out);
    throw std::invalid_argument("manifest: no command given");
}

// ── Per-shape invariant suite ────────────────────────────────────────────────

bool run_shape_verification(RegisterShape shape, std::uint64_t seed,
                            std::ostream& out) {
    bool all_ok = true;
    auto check = [&](const std::string& name, bool ok, double value) {
        out << "check " << name << ": " << (ok ? "ok" : "FAIL") << " ("
            << format_double(value) << ")\n";
        all_ok = all_ok && ok;
    };
    int M = baker::quantum_period(shape.D, shape.k);

    double worst_unit = 0.0;
    double worst_round = 0.0;
    for (int t = 0; t < 5; ++t) {
        StateVector psi =
            hilbert::random_state(shape, mix_seed(seed, 100 + t));
        StateVector fwd = baker::apply_baker(psi, 1);
        worst_unit = std::max(worst_unit, std::abs(hilbert::norm(fwd) - 1.0));
        StateVector back = baker::apply_baker(fwd, -1);
        double acc = 0.0;
        for (std::size_t j = 0; j < psi.amps.size(); ++j)
            acc += std::norm(back.amps[j] - psi.amps[j]);
        worst_round = std::max(worst_round, std::sqrt(acc));
    }
    check("unitarity", worst_unit <= tol::unitarity, worst_unit);
    check("round_trip", worst_round <= tol::unitarity, worst_round);

    double worst_period = 0.0;
    for (int t = 0; t < 3; ++t) {
        StateVector psi =
            hilbert::random_state(shape, mix_seed(seed, 200 + t));
        StateVector cur = psi;
        for (int s = 0; s < M; ++s) cur = baker::apply_baker(cur, 1);
        double acc = 0.0;
        for (std::size_t j = 0; j < psi.amps.size(); ++j)
            acc += std::norm(cur.amps[j] - psi.amps[j]);
        worst_period = std::max(worst_period, std::sqrt(acc));
    }
    check("exact_period", worst_period <= tol::exact_period, worst_period);

    {
        StateVector psi = hilbert::random_state(shape, mix_seed(seed, 300));
        StateVector w = hilbert::walsh_transform(psi, Direction::forward);
        StateVector back = hilbert::walsh_transform(w, Direction::inverse);
        double acc = 0.0;
        for (std::size_t j = 0; j < psi.amps.size(); ++j)
            acc += std::norm(back.amps[j] - psi.amps[j]);
        double v = std::sqrt(acc);
        check("walsh_inverse", v <= tol::unitarity, v);

        auto hm = measures::husimi(psi, shape.k / 2);
        double total = 0.0;
        for (double x : hm.weights) total += x;
        check("husimi_total", std::abs(total - 1.0) <= tol::mass_total,
              std::abs(total - 1.0));
    }

    {
        Word word(static_cast<std::size_t>(shape.k + 1), 0);
        double computed = partitions::refined_projector_norm(shape, word);
        double formula = std::pow(static_cast<double>(shape.D), -0.5);
        check("refined_norm", std::abs(computed - formula) <= tol::projector_norm,
              std::abs(computed - formula));
    }

    if (shape.dimension() <= 1024) {
        auto dec = baker::spectral_decompose(shape);
        std::size_t total = 0;
        double worst_res = 0.0;
        double worst_slack = 0.0;
        double bound = 0.5 * shape.k * std::log(static_cast<double>(shape.D));
        for (const auto& s : dec.spaces) {
            total += s.basis.size();
            for (const auto& v : s.basis) {
                worst_res = std::max(worst_res, eigen_residual(v, s.theta));
                double h = measures::shannon_entropy(v);
                worst_slack = std::max(worst_slack, bound - h);
            }
        }
        check("spectral_completeness", total == shape.dimension(),
              static_cast<double>(total));
        check("eigen_residual", worst_res <= tol::eigen_residual, worst_res);
        check("entropy_bound", worst_slack <= tol::entropy_bound, worst_slack);

        const StateVector& psi0 = dec.spaces.front().basis.front();
        double worst_inv = 0.0;
        Word word{0};
        double base = partitions::cylinder_weight(psi0, word);
        for (int l = 1; l + 1 <= shape.k; ++l)
            worst_inv = std::max(
                worst_inv,
                std::abs(partitions::cylinder_mass_at_offset(psi0, word, l) -
                         base));
        check("invariance", worst_inv <= tol::invariance, worst_inv);
    }

    if (shape.dimension() <= tol::dense_cap_norms) {
        auto Bk = linalg::dense_from_apply(
            [&](const StateVector& v) {
                return baker::apply_baker(v, shape.k);
            },
            shape);
        auto psi = eup::random_unit_vector(
            static_cast<Eigen::Index>(shape.dimension()), mix_seed(seed, 400));
        auto scalar = eup::scalar_eup_check(Bk, psi);
        check("eup_scalar", scalar.satisfied, scalar.slack);
        auto part = eup::word_partition(shape, 1);
        auto vec = eup::vector_eup_check(Bk, part, psi);
        check("eup_vector", vec.satisfied, vec.slack);
    }

    out << (all_ok ? "verify ok" : "verify FAILED") << "\n";
    return all_ok;
}

}  // namespace walshbaker::experiment
