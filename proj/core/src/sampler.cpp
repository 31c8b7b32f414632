#include "lseries/sampler.hpp"

#include <cmath>
#include <ostream>
#include <random>

namespace lseries::sampler {

namespace {

struct BBox {
    double x0, x1, y0, y1;
};

BBox piece_bbox(const RegionPiece& p) {
    if (const auto* d = std::get_if<Disk>(&p)) {
        return {std::max(-1.0, d->center.real() - d->radius),
                std::min(1.0, d->center.real() + d->radius),
                std::max(-1.0, d->center.imag() - d->radius),
                std::min(1.0, d->center.imag() + d->radius)};
    }
    const auto& w = std::get<Wedge>(p);
    return {std::max(-1.0, w.re_lo), std::min(1.0, w.re_hi), -1.0, 1.0};
}

}  // namespace

double ImageCloud::coverage(std::size_t level) const {
    if (level >= hits.size()) return 0.0;
    std::uint64_t inside = 0, hit = 0;
    std::uint32_t res = grid.resolution;
    for (std::uint32_t i = 0; i < res; ++i) {
        for (std::uint32_t j = 0; j < res; ++j) {
            cplx c = grid.disk.center +
                     cplx{(2.0 * (i + 0.5) / res - 1.0) * grid.disk.radius,
                          (2.0 * (j + 0.5) / res - 1.0) * grid.disk.radius};
            if (!grid.disk.contains(c)) continue;
            ++inside;
            if (hits[level][i * res + j]) ++hit;
        }
    }
    return inside == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(inside);
}

std::uint64_t ImageCloud::cells_inside() const {
    std::uint64_t inside = 0;
    std::uint32_t res = grid.resolution;
    for (std::uint32_t i = 0; i < res; ++i)
        for (std::uint32_t j = 0; j < res; ++j) {
            cplx c = grid.disk.center +
                     cplx{(2.0 * (i + 0.5) / res - 1.0) * grid.disk.radius,
                          (2.0 * (j + 0.5) / res - 1.0) * grid.disk.radius};
            if (grid.disk.contains(c)) ++inside;
        }
    return inside;
}

ImageCloud sample_image(const CoefficientSet& lambda, const RegionSpec& region,
                        std::uint64_t prefix_len, std::uint64_t trials, const GridSpec& grid,
                        std::uint64_t seed) {
    if (prefix_len == 0) throw std::invalid_argument("sample_image: prefix_len must be positive");
    if (grid.resolution == 0 || grid.resolution > 4096)
        throw std::invalid_argument("sample_image: bad grid resolution");

    ImageCloud cloud;
    cloud.grid = grid;
    cloud.trials = trials;
    cloud.prefix_len = prefix_len;
    cloud.seed = seed;
    cloud.hits.assign(grid.eps_levels.size(),
                      std::vector<std::uint8_t>(static_cast<std::size_t>(grid.resolution) *
                                                    grid.resolution,
                                                0));
    cloud.samples.reserve(trials);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_el(0, lambda.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_piece(0, region.pieces().size() - 1);

    const double sup = lambda.sup_modulus();
    const std::uint32_t res = grid.resolution;
    const double cell = 2.0 * grid.disk.radius / res;

    for (std::uint64_t t = 0; t < trials; ++t) {
        // Region point by rejection from the bounding box of a random piece.
        cplx z{0.0, 0.0};
        bool found = false;
        for (int tries = 0; tries < 10000 && !found; ++tries) {
            BBox bb = piece_bbox(region.pieces()[pick_piece(rng)]);
            std::uniform_real_distribution<double> ux(bb.x0, bb.x1), uy(bb.y0, bb.y1);
            cplx cand{ux(rng), uy(rng)};
            if (region.contains(cand)) {
                z = cand;
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("sample_image: region rejection sampling starved");

        cplx f{0.0, 0.0};
        cplx zp{1.0, 0.0};
        for (std::uint64_t n = 0; n < prefix_len; ++n) {
            f += lambda.elements()[pick_el(rng)] * zp;
            zp *= z;
        }
        double tl = tail_bound(sup, std::abs(z), prefix_len);
        cloud.samples.push_back({z, f, tl});

        // Mark every cell whose center lies within eps of the value.
        for (std::size_t lev = 0; lev < grid.eps_levels.size(); ++lev) {
            double eps = grid.eps_levels[lev];
            auto reach = static_cast<long>(std::ceil(eps / cell)) + 1;
            double fx = (f.real() - (grid.disk.center.real() - grid.disk.radius)) / cell - 0.5;
            double fy = (f.imag() - (grid.disk.center.imag() - grid.disk.radius)) / cell - 0.5;
            long ci = std::lround(fx), cj = std::lround(fy);
            for (long i = ci - reach; i <= ci + reach; ++i) {
                if (i < 0 || i >= static_cast<long>(res)) continue;
                for (long j = cj - reach; j <= cj + reach; ++j) {
                    if (j < 0 || j >= static_cast<long>(res)) continue;
                    cplx c = grid.disk.center + cplx{(2.0 * (i + 0.5) / res - 1.0) * grid.disk.radius,
                                                     (2.0 * (j + 0.5) / res - 1.0) * grid.disk.radius};
                    if (std::abs(f - c) < eps) cloud.hits[lev][static_cast<std::size_t>(i) * res + j] = 1;
                }
            }
        }
    }
    return cloud;
}

void write_csv(const ImageCloud& cloud, std::ostream& os) {
    os << "z_re,z_im,f_re,f_im,tail\n";
    for (const auto& s : cloud.samples)
        os << s.z.real() << ',' << s.z.imag() << ',' << s.f.real() << ',' << s.f.imag() << ','
           << s.tail << '\n';
}

}  // namespace lseries::sampler
