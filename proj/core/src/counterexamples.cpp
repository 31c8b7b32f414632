#include "lseries/counterexamples.hpp"

#include <cmath>
#include <ostream>
#include <random>

namespace lseries::cex {

bool WedgeRegion::contains(cplx z) const { return as_piece().contains(z); }

double WedgeRegion::sup_abs() const {
    return (static_cast<double>(k - 1) / k) / std::cos(half_angle);
}

Wedge WedgeRegion::as_piece() const {
    double center = side == WedgeSide::AtMinusOne ? kPi : 0.0;
    return Wedge{re_lo, re_hi, center, half_angle};
}

bool WedgeRegion::satisfies_invariants() const {
    if (k < 2 || block_len == 0 || half_angle <= 0.0) return false;
    double frac = static_cast<double>(k - 1) / k;
    if (side == WedgeSide::AtMinusOne) {
        if (re_lo != -frac || re_hi != 0.0) return false;
    } else {
        if (re_lo != 0.0 || re_hi != frac) return false;
    }
    double rhat = sup_abs();
    if (!(rhat < 1.0)) return false;
    double n = static_cast<double>(block_len);
    double tail = std::pow(rhat, 2.0 * n) / (1.0 - rhat);
    if (!(tail < 1.0)) return false;
    return 2.0 * n * half_angle < std::asin(1.0 / n);
}

WedgeRegion build_wedge(int k, WedgeSide side) {
    if (k < 2) throw std::invalid_argument("build_wedge: k must be >= 2");
    double frac = static_cast<double>(k - 1) / k;
    double alpha = kPi / 64.0;
    for (int round = 0; round < 4096; ++round) {
        double rhat = frac / std::cos(alpha);
        if (rhat >= 1.0) {
            alpha /= 2.0;
            continue;
        }
        // Minimal block length with geometric tail below 1 from index 2n.
        double bound = std::log(1.0 - rhat) / std::log(rhat);
        std::uint64_t n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(bound / 2.0)));
        while (std::pow(rhat, 2.0 * static_cast<double>(n)) / (1.0 - rhat) >= 1.0) ++n;
        double dn = static_cast<double>(n);
        if (2.0 * dn * alpha < std::asin(1.0 / dn)) {
            WedgeRegion w;
            w.k = k;
            w.half_angle = alpha;
            w.block_len = n;
            w.side = side;
            if (side == WedgeSide::AtMinusOne) {
                w.re_lo = -frac;
                w.re_hi = 0.0;
            } else {
                w.re_lo = 0.0;
                w.re_hi = frac;
            }
            if (!w.satisfies_invariants())
                throw VerificationFailed("build_wedge: constructed wedge violates invariants");
            return w;
        }
        alpha /= 2.0;
    }
    throw VerificationFailed("build_wedge: fixed point search did not settle");
}

namespace {

std::vector<cplx> sample_wedge_points(const WedgeRegion& wedge, std::uint64_t count,
                                      std::mt19937_64& rng) {
    double center = wedge.side == WedgeSide::AtMinusOne ? kPi : 0.0;
    std::uniform_real_distribution<double> uangle(-wedge.half_angle, wedge.half_angle);
    std::uniform_real_distribution<double> uradial(0.0, 1.0);
    std::vector<cplx> pts;
    pts.reserve(count);
    double frac = std::fabs(wedge.side == WedgeSide::AtMinusOne ? wedge.re_lo : wedge.re_hi);
    while (pts.size() < count) {
        double theta = center + uangle(rng);
        double rho_max = frac / std::fabs(std::cos(theta));
        cplx z = std::polar(uradial(rng) * rho_max, theta);
        if (wedge.contains(z)) pts.push_back(z);
    }
    return pts;
}

void check_sampling_preconditions(const CoefficientSet& lambda, const WedgeRegion& wedge,
                                  std::uint64_t prefix_len) {
    if (prefix_len < 2 * wedge.block_len)
        throw std::invalid_argument("evasion check: prefix_len must cover both blocks (>= 2N)");
    double sup = lambda.sup_modulus();
    if (sup > 0.0 && tail_bound(sup, wedge.sup_abs(), prefix_len) >= 0.01 * sup)
        throw std::invalid_argument("evasion check: prefix too short for the wedge tail");
}

}  // namespace

EvasionReport imag_bound_check(const CoefficientSet& lambda, const WedgeRegion& wedge,
                               std::uint64_t trials, std::uint64_t z_samples,
                               std::uint64_t prefix_len, std::uint64_t seed) {
    double sup = lambda.sup_modulus();
    for (cplx v : lambda.elements())
        if (std::fabs(v.imag()) > 1e-12 * std::max(1.0, sup))
            throw std::invalid_argument("imag_bound_check: requires a real coefficient set");
    if (wedge.side != WedgeSide::AtMinusOne)
        throw std::invalid_argument("imag_bound_check: wedge must sit at -1");
    check_sampling_preconditions(lambda, wedge, prefix_len);

    std::mt19937_64 rng(seed);
    auto points = sample_wedge_points(wedge, z_samples, rng);

    // Im(sum lambda_n z^n) with real lambda_n needs only Im(z^n).
    std::vector<std::vector<double>> impow(points.size());
    std::vector<double> tails(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        impow[i].resize(prefix_len);
        cplx p{1.0, 0.0};
        for (std::uint64_t n = 0; n < prefix_len; ++n) {
            impow[i][n] = p.imag();
            p *= points[i];
        }
        tails[i] = tail_bound(sup, std::abs(points[i]), prefix_len);
    }

    std::vector<double> reals;
    for (cplx v : lambda.elements()) reals.push_back(v.real());
    std::uniform_int_distribution<std::size_t> pick(0, reals.size() - 1);

    std::vector<double> per_point(points.size(), -std::numeric_limits<double>::infinity());
    std::vector<double> coeff(prefix_len);
    for (std::uint64_t t = 0; t < trials; ++t) {
        for (auto& c : coeff) c = reals[pick(rng)];
        for (std::size_t i = 0; i < points.size(); ++i) {
            double im = 0.0;
            const auto& pow = impow[i];
            for (std::uint64_t n = 0; n < prefix_len; ++n) im += coeff[n] * pow[n];
            per_point[i] = std::max(per_point[i], im + tails[i]);
        }
    }

    EvasionReport rep;
    rep.extreme = 0.0;
    if (trials > 0 && !points.empty()) {
        rep.extreme = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            rep.extreme = std::max(rep.extreme, per_point[i]);
            rep.sample_extremes.emplace_back(points[i], per_point[i]);
        }
    }
    rep.bound = 3.0 * sup;
    rep.trials = trials;
    rep.z_samples = z_samples;
    rep.seed = seed;
    rep.pass = rep.extreme <= rep.bound + 1e-9;
    return rep;
}

EvasionReport real_bound_check(const CoefficientSet& lambda, const WedgeRegion& wedge,
                               std::uint64_t trials, std::uint64_t z_samples,
                               std::uint64_t prefix_len, std::uint64_t seed) {
    double sup = lambda.sup_modulus();
    for (cplx v : lambda.elements())
        if (v.real() < -1e-12 * std::max(1.0, sup))
            throw std::invalid_argument(
                "real_bound_check: rotate the set so the containing half-plane is {Re >= 0}");
    if (wedge.side != WedgeSide::AtPlusOne)
        throw std::invalid_argument("real_bound_check: wedge must sit at +1");
    check_sampling_preconditions(lambda, wedge, prefix_len);

    std::mt19937_64 rng(seed);
    auto points = sample_wedge_points(wedge, z_samples, rng);

    std::vector<std::vector<cplx>> pows(points.size());
    std::vector<double> tails(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        pows[i].resize(prefix_len);
        cplx p{1.0, 0.0};
        for (std::uint64_t n = 0; n < prefix_len; ++n) {
            pows[i][n] = p;
            p *= points[i];
        }
        tails[i] = tail_bound(sup, std::abs(points[i]), prefix_len);
    }

    const auto& el = lambda.elements();
    std::uniform_int_distribution<std::size_t> pick(0, el.size() - 1);

    std::vector<double> per_point(points.size(), std::numeric_limits<double>::infinity());
    std::vector<cplx> coeff(prefix_len);
    for (std::uint64_t t = 0; t < trials; ++t) {
        for (auto& c : coeff) c = el[pick(rng)];
        for (std::size_t i = 0; i < points.size(); ++i) {
            double re = 0.0;
            const auto& pow = pows[i];
            for (std::uint64_t n = 0; n < prefix_len; ++n)
                re += coeff[n].real() * pow[n].real() - coeff[n].imag() * pow[n].imag();
            per_point[i] = std::min(per_point[i], re - tails[i]);
        }
    }

    EvasionReport rep;
    rep.extreme = 0.0;
    if (trials > 0 && !points.empty()) {
        rep.extreme = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            rep.extreme = std::min(rep.extreme, per_point[i]);
            rep.sample_extremes.emplace_back(points[i], per_point[i]);
        }
    }
    rep.bound = -3.0 * sup;
    rep.trials = trials;
    rep.z_samples = z_samples;
    rep.seed = seed;
    rep.pass = rep.extreme >= rep.bound - 1e-9;
    return rep;
}

void write_extremes_csv(const EvasionReport& report, std::ostream& os) {
    os << "z_re,z_im,extreme\n";
    for (const auto& [z, x] : report.sample_extremes)
        os << z.real() << ',' << z.imag() << ',' << x << '\n';
}

std::pair<cplx, cplx> odd_series_closed_forms(cplx z) {
    if (std::abs(z) >= 1.0)
        throw std::invalid_argument("odd_series_closed_forms: |z| must be < 1");
    cplx one{1.0, 0.0};
    return {z / (one - z * z), -one / (2.0 * (one + z))};
}

}  // namespace lseries::cex
