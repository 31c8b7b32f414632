#pragma once

#include <optional>
#include <string>

#include "lseries/core.hpp"
#include "lseries/geometry.hpp"
#include "lseries/nets.hpp"

namespace lseries::engines {

/// Coefficients pinned for the leading indices 0..values.size()-1.
struct PrefixConstraint {
    std::vector<cplx> values;
    std::size_t length() const { return values.size(); }
};

struct EngineParams {
    double delta_cap = 0.4;             // |tau - zeta| budget, at most 2/5
    std::uint64_t horizon_cap = 1u << 20;
    double epsilon0 = 0.0;              // > 0 overrides the engine's annulus scale
    std::uint64_t seed = 0;
};

struct ModulusTarget {
    enum class Kind { None, Exact, Interval } kind = Kind::None;
    double value = 0.0;  // Exact: |tau|^M = value
    double lo = 0.0;     // Interval: lo < |tau|^M < hi
    double hi = 0.0;

    static ModulusTarget none() { return {}; }
    static ModulusTarget exact(double v) { return {Kind::Exact, v, 0.0, 0.0}; }
    static ModulusTarget interval(double lo, double hi) { return {Kind::Interval, 0.0, lo, hi}; }
};

struct TauChoice {
    cplx tau;
    std::optional<std::uint64_t> power;  // M, when a modulus target was given
};

/// Picks tau in the region with |tau - zeta| < delta. With an exact modulus
/// target the radial coordinate is solved so that |tau|^M hits the target for
/// an integer M; with an interval target M is chosen after tau. Throws
/// RegionTooThin after shrinking the search 40 times.
TauChoice select_tau(const RegionSpec& region, double delta, const ModulusTarget& target);

struct EngineDiagnostics {
    std::string branch;
    std::optional<std::uint64_t> power;       // M
    double annulus_lo = 0.0, annulus_hi = 0.0;
    double epsilon0 = 0.0;
    double net_epsilon = 0.0;                 // working budget of the net stage
    SparseAssignment scheduled;               // descent-scheduled indices (plus-one engine)
    double schedule_bound = 0.0;              // R*
    std::uint64_t reserved_lo = 0, reserved_hi = 0;  // reserved exponent window
};

struct EngineResult {
    Certificate certificate;
    EngineDiagnostics diagnostics;
};

/// Accumulation point anywhere on the circle except +-1: reduce to a set
/// containing {0,1}, approximate the shifted target by a sum of distinct
/// powers of zeta (greedy for generic zeta, lattice rounding through an
/// annulus power shift for +-i, +-omega, +-omega^2), then move tau toward
/// zeta until the finite sum settles. Works for any set with two elements.
EngineResult approximate_generic(const CoefficientSet& lambda, const RegionSpec& region,
                                 const PrefixConstraint& prefix, cplx target, double eps,
                                 const EngineParams& params = {});

/// Accumulation point -1: requires the set not to lie on a real line. Builds
/// the integer lattice spanned by 1 and an element with nonzero imaginary
/// part, realizes the rounded lattice point by exponent parity at tau near -1
/// with |tau|^M equal to the lattice scale.
EngineResult approximate_near_minus_one(const CoefficientSet& lambda, const RegionSpec& region,
                                        const PrefixConstraint& prefix, cplx target, double eps,
                                        const EngineParams& params = {});

/// Accumulation point +1: requires a spanning set. Covers the target disk by
/// an m-fold Minkowski sum of the descent quadruple, keeps every other index
/// under the R* partial-sum bound with the descent scheduler, and shifts the
/// reserved block by M with |tau|^M equal to the net scale.
EngineResult approximate_near_plus_one(const CoefficientSet& lambda, const RegionSpec& region,
                                       const PrefixConstraint& prefix, cplx target, double eps,
                                       const EngineParams& params = {});

/// Dispatch on the accumulation point: +-1 route to the dedicated engines,
/// everything else to the generic one.
EngineResult approximate(const CoefficientSet& lambda, const RegionSpec& region,
                         const PrefixConstraint& prefix, cplx target, double eps,
                         const EngineParams& params = {});

struct VerifyReport {
    bool valid = false;
    double margin = 0.0;
    bool tau_in_region = false;
    std::string reason;  // first failed check, empty when valid
};

/// Recomputes everything a certificate claims: the achieved error from the
/// listed terms, the tail bound from the set and the largest index (zero when
/// 0 is an element, so gaps and the truncated tail can be completed by
/// zeros), membership of tau, and membership of every value in the set.
/// Reports, never throws.
VerifyReport verify_certificate(const CoefficientSet& lambda, const Certificate& cert,
                                const RegionSpec& region);

}  // namespace lseries::engines
