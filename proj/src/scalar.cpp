#include "ballproj/scalar.hpp"

#include <algorithm>
#include <cmath>

namespace ballproj {

namespace {

// Mirrors Boost's digits10 -> bits conversion (detail::digits10_2_2).
unsigned boost_bits_for_digits10(unsigned d) {
    return static_cast<unsigned>((d * 1000uL) / 301uL + ((d * 1000uL) % 301 ? 2u : 1u));
}

}  // namespace

unsigned digits10_for_bits(unsigned bits) {
    unsigned d = static_cast<unsigned>((static_cast<unsigned long>(bits) * 301uL) / 1000uL);
    if (d == 0) d = 1;
    while (boost_bits_for_digits10(d) < bits) ++d;
    return d;
}

unsigned current_precision_bits() {
    real probe(0);
    return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(real::default_precision()) {
    real::default_precision(digits10_for_bits(std::max(bits, kMinPrecisionBits)));
}

PrecisionScope::~PrecisionScope() { real::default_precision(saved_digits10_); }

std::string to_decimal_string(const real& x) {
    unsigned bits = static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
    unsigned digits = static_cast<unsigned>(std::ceil(bits * 0.30103)) + 4u;
    return x.str(digits, std::ios_base::scientific);
}

real pairwise_sum(std::span<const real> values) {
    const std::size_t n = values.size();
    if (n == 0) return real(0);
    if (n <= 8) {
        real acc = values[0];
        for (std::size_t i = 1; i < n; ++i) acc += values[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

real relative_deviation(const real& a, const real& b, const real& floor_scale) {
    real denom = (std::max)({abs(a), abs(b), abs(floor_scale)});
    if (denom == 0) return real(0);
    return abs(a - b) / denom;
}

std::uint64_t DeterministicRng::next_u64() {
    // splitmix64
    state_ += 0x9e3779b97f4a7c15uLL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9uLL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebuLL;
    return z ^ (z >> 31);
}

double DeterministicRng::next_symmetric() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;  // [0,1)
    return 2.0 * u - 1.0;
}

std::uint64_t DeterministicRng::next_below(std::uint64_t n) {
    return n == 0 ? 0 : next_u64() % n;
}

}  // namespace ballproj
