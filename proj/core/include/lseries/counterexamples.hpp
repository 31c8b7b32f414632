#pragma once

#include <iosfwd>
#include <utility>

#include "lseries/core.hpp"

namespace lseries::cex {

enum class WedgeSide { AtMinusOne, AtPlusOne };

/// One wedge of the counterexample family: a sliver pinched toward -1 (or
/// mirrored toward +1), thin enough that the tail beyond twice the block
/// length stays below 1 and the first 2*block_len powers keep their arguments
/// within arcsin(1/block_len) of the axis.
struct WedgeRegion {
    int k = 2;
    double re_lo = 0.0;
    double re_hi = 0.0;
    double half_angle = 0.0;
    std::uint64_t block_len = 0;
    WedgeSide side = WedgeSide::AtMinusOne;

    bool contains(cplx z) const;
    /// sup |z| over the wedge: (k-1) / (k cos half_angle).
    double sup_abs() const;
    Wedge as_piece() const;
    bool satisfies_invariants() const;
};

/// Fixed-point search: start at half-angle pi/64, derive the minimal block
/// length with tail < 1, and halve the angle until the argument-control
/// constraint 2 * block_len * half_angle < arcsin(1/block_len) holds.
WedgeRegion build_wedge(int k, WedgeSide side);

struct EvasionReport {
    double extreme = 0.0;  // max imaginary part resp. min real part observed
    double bound = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t z_samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;
    // per wedge point: the extreme over all sampled sequences, tail included
    std::vector<std::pair<cplx, double>> sample_extremes;
};

/// CSV dump of the per-point extrema: z_re, z_im, extreme.
void write_extremes_csv(const EvasionReport& report, std::ostream& os);

/// Samples random coefficient sequences over a real set and random points of
/// an AtMinusOne wedge; reports max Im(prefix) + tail bound against
/// 3 * sup_modulus.
EvasionReport imag_bound_check(const CoefficientSet& lambda, const WedgeRegion& wedge,
                               std::uint64_t trials, std::uint64_t z_samples,
                               std::uint64_t prefix_len, std::uint64_t seed);

/// Mirror check for a set inside {Re >= 0} and an AtPlusOne wedge: reports
/// min Re(prefix) - tail bound against -3 * sup_modulus. The constant mirrors
/// the two-block argument of the imaginary bound; sampling confirms it.
EvasionReport real_bound_check(const CoefficientSet& lambda, const WedgeRegion& wedge,
                               std::uint64_t trials, std::uint64_t z_samples,
                               std::uint64_t prefix_len, std::uint64_t seed);

/// Closed forms of the odd-indicator series and its shift by -1/2:
/// z/(1-z^2) and -1/(2(1+z)). Regression oracle for eval_prefix.
std::pair<cplx, cplx> odd_series_closed_forms(cplx z);

}  // namespace lseries::cex
