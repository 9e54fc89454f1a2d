#include <cstdint>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "walshbaker/common.hpp"
#include "walshbaker/experiment.hpp"

namespace {

using walshbaker::experiment::Manifest;
using walshbaker::experiment::RunOptions;

struct Flags {
    std::string manifest_path;
    int d = 0;
    int k = 0;
    int ell = 0;
    int n = 0;
    int phase = 0;
    int index = 0;
    std::string observable;
    std::string out;
    std::uint64_t seed = 0;
    std::string format;
    std::string word;
    int trials = 0;
    std::size_t max_dim = 0;
    double tolerance_scale = 1.0;

    CLI::Option* o_manifest = nullptr;
    CLI::Option* o_d = nullptr;
    CLI::Option* o_k = nullptr;
    CLI::Option* o_ell = nullptr;
    CLI::Option* o_n = nullptr;
    CLI::Option* o_phase = nullptr;
    CLI::Option* o_index = nullptr;
    CLI::Option* o_observable = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_format = nullptr;
    CLI::Option* o_word = nullptr;
    CLI::Option* o_trials = nullptr;
    CLI::Option* o_max_dim = nullptr;
    CLI::Option* o_tolerance_scale = nullptr;
};

void add_common(CLI::App* cmd, Flags& f) {
    f.o_manifest =
        cmd->add_option("--manifest", f.manifest_path,
                        "config file (key=value); flags override its values");
    f.o_d = cmd->add_option("--d", f.d, "alphabet size D (at least 2)");
    f.o_k = cmd->add_option("--k", f.k, "number of qudits");
    f.o_ell = cmd->add_option("--ell", f.ell,
                              "position depth; default is floor(k/2)");
    f.o_n = cmd->add_option("--n", f.n, "word length / block count");
    f.o_phase = cmd->add_option("--phase", f.phase, "eigenphase index r");
    f.o_index =
        cmd->add_option("--index", f.index, "eigenvector index in the phase");
    f.o_observable =
        cmd->add_option("--observable", f.observable, "observable table file");
    f.o_out = cmd->add_option("--out", f.out, "output directory for the bundle");
    f.o_seed = cmd->add_option("--seed", f.seed,
                               "seed (overrides WALSHBAKER_SEED)");
    f.o_format = cmd->add_option("--format", f.format, "csv or pgm");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walsh-quantized baker map laboratory"};
    app.set_version_flag("--version", walshbaker::experiment::tool_version);
    app.require_subcommand(1);

    std::map<std::string, Flags> flags;
    const std::map<std::string, std::string> commands = {
        {"spectrum", "eigenphases and degeneracies"},
        {"eigenstate", "one eigenvector with residual and entropy"},
        {"husimi", "phase-space weight grid of an eigenstate"},
        {"entropy", "Shannon, Wehrl, and refined entropies of an eigenstate"},
        {"egorov", "conjugation defect of a quantized observable"},
        {"norms", "refined projector norm against the closed formula"},
        {"eup", "entropic uncertainty sweep with random unitaries"},
        {"qe-variance", "eigenbasis mean and variance of an observable"},
        {"verify", "invariant suite at a shape, or the full acceptance run"}};
    for (const auto& [name, help] : commands) {
        CLI::App* cmd = app.add_subcommand(name, help);
        Flags& f = flags[name];
        add_common(cmd, f);
        if (name == "norms")
            f.o_word = cmd->add_option("--word", f.word,
                                       "digit string for the refined word");
        if (name == "eup")
            f.o_trials =
                cmd->add_option("--trials", f.trials, "sweep size (default 200)");
        if (name == "verify") {
            f.o_max_dim = cmd->add_option(
                "--max-dim", f.max_dim,
                "skip acceptance items above this dimension");
            f.o_tolerance_scale = cmd->add_option(
                "--tolerance-scale", f.tolerance_scale,
                "test hook: scale every tolerance before checking");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    Flags& f = flags[name];

    try {
        Manifest m = f.o_manifest->count() > 0
                         ? walshbaker::experiment::load_manifest(f.manifest_path)
                         : walshbaker::experiment::default_manifest();
        m.command = name;
        if (f.o_d->count() > 0) m.D = f.d;
        if (f.o_k->count() > 0) m.k = f.k;
        if (f.o_ell->count() > 0) m.ell = f.ell;
        if (f.o_n->count() > 0) m.n = f.n;
        if (f.o_phase->count() > 0) m.phase = f.phase;
        if (f.o_index->count() > 0) m.index = f.index;
        if (f.o_observable->count() > 0) m.observable = f.observable;
        if (f.o_out->count() > 0) m.out = f.out;
        if (f.o_seed->count() > 0) m.seed = f.seed;
        if (f.o_format->count() > 0) m.format = f.format;

        RunOptions ro;
        ro.word = f.word;
        if (f.o_trials && f.o_trials->count() > 0) ro.trials = f.trials;
        if (f.o_max_dim && f.o_max_dim->count() > 0) ro.max_dim = f.max_dim;
        if (f.o_tolerance_scale && f.o_tolerance_scale->count() > 0)
            ro.tolerance_scale = f.tolerance_scale;
        if (name == "verify") {
            bool has_d = f.o_d->count() > 0;
            bool has_k = f.o_k->count() > 0;
            if (has_d != has_k)
                throw std::invalid_argument(
                    "verify: the shape suite needs both --d and --k");
            ro.verify_shape = has_d && has_k;
        }
        return walshbaker::experiment::run_command(m, ro, std::cout);
    } catch (const walshbaker::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
