#pragma once

#include <iosfwd>
#include <vector>

#include "lseries/core.hpp"

namespace lseries::sampler {

struct GridSpec {
    Disk disk{{0.0, 0.0}, 2.0};
    std::uint32_t resolution = 100;
    std::vector<double> eps_levels{1.0, 0.3, 0.1};
};

struct ImageSample {
    cplx z;
    cplx f;      // truncated series value
    double tail;  // rigorous bound on what the truncation dropped
};

/// Point cloud of truncated random series over a region, with grid coverage
/// flags per tolerance level.
struct ImageCloud {
    GridSpec grid;
    std::uint64_t trials = 0;
    std::uint64_t prefix_len = 0;
    std::uint64_t seed = 0;
    std::vector<ImageSample> samples;
    std::vector<std::vector<std::uint8_t>> hits;  // [level][cell], row-major

    /// Fraction of in-disk cells hit at the given tolerance level.
    double coverage(std::size_t level) const;
    std::uint64_t cells_inside() const;
};

/// Draws `trials` independent (coefficient sequence, region point) pairs,
/// records the truncated value and its tail bound, and marks which grid cells
/// the values approach at each tolerance. Same seed, same cloud.
ImageCloud sample_image(const CoefficientSet& lambda, const RegionSpec& region,
                        std::uint64_t prefix_len, std::uint64_t trials, const GridSpec& grid,
                        std::uint64_t seed);

/// CSV dump: z_re, z_im, f_re, f_im, tail.
void write_csv(const ImageCloud& cloud, std::ostream& os);

}  // namespace lseries::sampler
