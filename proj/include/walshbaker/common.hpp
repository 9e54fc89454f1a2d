/*
 * Shared basics for the Walsh-baker laboratory: scalar type, direction tags,
 * error categories, checked integer powers, and the deterministic seeding
 * protocol used by every randomized sweep.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace walshbaker {

using Cx = std::complex<double>;

// Direction of a map or transform application.  For unitary transforms
// `inverse` is the adjoint.
enum class Direction { forward, inverse };

// A requested computation exceeds a configured dense cap.  Mapped to its own
// process exit code by the CLI.
struct ResourceLimitError : std::runtime_error {
    explicit ResourceLimitError(const std::string& what)
        : std::runtime_error(what) {}
};

// D^n as a non-negative 64-bit integer; throws on overflow (desk-scale guard).
long long ipow_checked(long long D, int n);

// ── Seeding protocol ─────────────────────────────────────────────────────────
// All randomized sweeps derive their engines from one 64-bit base seed:
// the WALSHBAKER_SEED environment variable (decimal, default 0), overridable
// per invocation.  Independent streams are split off with splitmix64 so that
// per-trial results do not depend on evaluation order.

std::uint64_t default_seed();                                   // env or 0
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// Fixed-width decimal formatting with enough digits to round-trip a double.
std::string format_double(double x);   // %.17g
std::string format_complex(Cx z);      // "re+imi" with %.17g parts

}  // namespace walshbaker
