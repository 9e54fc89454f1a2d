#include "walshbaker/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace walshbaker {

long long ipow_checked(long long D, int n) {
    if (D < 1 || n < 0) throw std::invalid_argument("ipow_checked: bad base or exponent");
    long long out = 1;
    for (int i = 0; i < n; ++i) {
        if (out > (1LL << 62) / D)
            throw std::overflow_error("ipow_checked: " + std::to_string(D) + "^" +
                                      std::to_string(n) + " exceeds 2^62");
        out *= D;
    }
    return out;
}

std::uint64_t default_seed() {
    const char* env = std::getenv("WALSHBAKER_SEED");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0')
        throw std::invalid_argument("WALSHBAKER_SEED: not a decimal unsigned integer");
    return static_cast<std::uint64_t>(v);
}

// splitmix64: a fixed, well-mixed stream splitter.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(Cx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

}  // namespace walshbaker
