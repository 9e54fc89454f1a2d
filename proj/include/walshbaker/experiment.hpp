/*
 * Experiment driver: manifests, result bundles, and the command
 * implementations behind the CLI.
 *
 * A manifest is a flat key=value description of one experiment; the CLI
 * builds it from a config file and flag overrides, validates ranges before
 * any computation, and hands it to run_command.  Commands write their data
 * files into the output directory first and the metadata file last, via a
 * temp-file rename, so an interrupted run never leaves a metadata file
 * claiming completeness.  Data files are byte-deterministic for a fixed
 * manifest and seed.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "walshbaker/hilbert.hpp"

namespace walshbaker::experiment {

inline constexpr const char* tool_name = "walshbaker";
inline constexpr const char* tool_version = "0.1.0";

struct Manifest {
    std::string command;
    int D = 2;
    int k = 1;
    std::optional<int> ell;  // defaults to ⌊k/2⌋ at use time
    std::optional<int> n;
    int phase = 0;   // eigenphase index r
    int index = 0;   // eigenvector index within the phase
    std::string observable;  // path to an observable table, may be empty
    std::string out;         // output directory, may be empty
    std::uint64_t seed = 0;
    std::string format = "csv";  // csv | pgm
};

// Seed prefilled from WALSHBAKER_SEED (default 0).
Manifest default_manifest();

// Throws invalid_argument naming the offending field.
void validate_manifest(const Manifest& m);

int effective_ell(const Manifest& m);

Manifest load_manifest(const std::string& path);
Manifest load_manifest_stream(std::istream& in, const std::string& source);
void save_manifest(const Manifest& m, std::ostream& out);

// Extra CLI-only knobs that are not part of the manifest key set.
struct RunOptions {
    std::string word;        // norms: explicit digit string
    int trials = 200;        // eup sweep size per kind
    std::size_t max_dim = std::size_t{1} << 20;  // verify: acceptance budget
    bool verify_shape = false;      // verify: run the per-shape suite instead
    double tolerance_scale = 1.0;   // verify: test hook, < 1 tightens tolerances
};

// Executes m.command, writing any bundle under m.out; returns the process
// exit code (0 ok, 2 failed verification; resource limits throw).
int run_command(const Manifest& m, const RunOptions& opts, std::ostream& out);

// The fixed invariant battery behind `verify --d D --k K`.
bool run_shape_verification(hilbert::RegisterShape shape, std::uint64_t seed,
                            std::ostream& out);

}  // namespace walshbaker::experiment
