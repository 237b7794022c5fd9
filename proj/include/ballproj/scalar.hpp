// Working scalar type and precision control.
//
// All numerical kernels run on an arbitrary-precision float (MPFR through
// Boost.Multiprecision) because monomial Gram matrices are exponentially
// ill-conditioned in the degree: double precision cannot certify
// orthonormality beyond degree ~10 even in one dimension.
//
// Precision is managed in bits.  Boost tracks a thread-local default in
// decimal digits; PrecisionScope converts and restores on exit.  Note that
// in this Boost version arithmetic results inherit the *operand* precision,
// so escalating precision means rebuilding values from exact seeds
// (integers, binary doubles), which is what every build routine here does.

#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ballproj {

// Expression templates are off: callbacks and lambdas return `real` all over
// this codebase, and a deduced expression-template return type would dangle
// (it references its operands).  The immediate-evaluation type is safe and
// the hot loops use raw mpfr kernels anyway.
using real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Minimum working precision used anywhere in the project.
inline constexpr unsigned kMinPrecisionBits = 64;
// Hard cap for the basis-build escalation loop.
inline constexpr unsigned kMaxPrecisionBits = 4096;

// Smallest decimal-digit count whose Boost-internal bit conversion is >= bits.
unsigned digits10_for_bits(unsigned bits);

// Actual mpfr bit precision that new scalars receive right now.
unsigned current_precision_bits();

// Starting precision for a degree-N orthonormal basis build.
inline unsigned basis_start_bits(int max_degree) {
    unsigned wanted = 6u * static_cast<unsigned>(max_degree < 0 ? 0 : max_degree) + 60u;
    return wanted < kMinPrecisionBits ? kMinPrecisionBits : wanted;
}

// RAII guard: sets the thread-default precision, restores the previous one.
class PrecisionScope {
  public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

  private:
    unsigned saved_digits10_;
};

inline double to_double(const real& x) { return x.convert_to<double>(); }

// Decimal string with enough digits to round-trip at the value's own precision.
std::string to_decimal_string(const real& x);

// Sum with a fixed pairwise reduction tree; deterministic for a fixed input order.
real pairwise_sum(std::span<const real> values);

// |a - b| / max(|a|, |b|, floor).  floor guards identities whose both sides
// are legitimately ~0.
real relative_deviation(const real& a, const real& b, const real& floor_scale);

// Small deterministic generator (splitmix64) so reports do not depend on
// libstdc++'s distribution internals.
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    // uniform on [-1, 1]
    double next_symmetric();
    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n);

  private:
    std::uint64_t state_;
};

}  // namespace ballproj
