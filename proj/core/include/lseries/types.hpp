#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lseries {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Relative slack applied to every rigorous bound the library reports, so that
// acceptance-level tolerances (>= 1e-9) dominate double roundoff.
inline constexpr double kBoundInflation = 1e-12;

// Thrown when a stated hypothesis of a construction fails (maps to CLI exit 2).
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSpanning : HypothesisError {
    NotSpanning() : HypothesisError("not-spanning") {}
    explicit NotSpanning(const std::string& what) : HypothesisError(what) {}
};

struct NotApplicable : HypothesisError {
    explicit NotApplicable(const std::string& reason) : HypothesisError(reason) {}
};

// The exponent search ran out of room before reaching the requested accuracy.
struct HorizonExhausted : std::runtime_error {
    explicit HorizonExhausted(const std::string& what) : std::runtime_error(what) {}
};

// No admissible evaluation point was found inside the region after repeatedly
// shrinking the search neighborhood.
struct RegionTooThin : std::runtime_error {
    explicit RegionTooThin(const std::string& what) : std::runtime_error(what) {}
};

// An internal sampled self-check failed; indicates a formula bug, not a state
// a caller can reach with valid inputs.
struct VerificationFailed : std::runtime_error {
    explicit VerificationFailed(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidZeta : std::invalid_argument {
    explicit InvalidZeta(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument of z in [0, 2*pi). The convention is fixed project-wide.
inline double arg2pi(cplx z) {
    double a = std::arg(z);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

/// Circular distance between two angles in radians, result in [0, pi].
inline double circ_dist(double a, double b) {
    double d = std::fmod(std::fabs(a - b), kTwoPi);
    return d > kPi ? kTwoPi - d : d;
}

/// z^n by binary exponentiation. Deterministic and accurate for the huge
/// exponents certificates routinely carry (the error grows with log n, not n).
inline cplx cpow_u64(cplx z, std::uint64_t n) {
    cplx acc{1.0, 0.0};
    cplx base = z;
    while (n != 0) {
        if (n & 1u) acc *= base;
        n >>= 1u;
        if (n != 0) base *= base;
    }
    return acc;
}

inline bool nearly_equal(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace lseries
