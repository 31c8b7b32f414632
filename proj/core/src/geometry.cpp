#include "lseries/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace lseries::geometry {

double DescentQuadruple::gap(int j) const {
    return arg2pi(elements[(j + 1) % 4] / elements[j]);
}

bool DescentQuadruple::satisfies_invariants() const {
    double mx = 0.0;
    for (int j = 0; j < 4; ++j) {
        if (elements[j] == cplx{0.0, 0.0}) return false;
        double g = gap(j);
        if (!(g < kPi)) return false;
        mx = std::max(mx, g);
    }
    return std::abs(mx - max_arg_gap) <= 1e-12 && max_arg_gap < kPi;
}

namespace {

double class_tol(const CoefficientSet& lambda) {
    return 1e-12 * std::max(1.0, lambda.sup_modulus());
}

// Supporting angle alpha with all nonzero elements in {alpha <= arg <= alpha+pi},
// i.e. Im(lambda * e^{-i alpha}) >= 0 for all of them.
std::optional<std::pair<double, cplx>> find_half_plane(const CoefficientSet& lambda) {
    double tol = class_tol(lambda);
    auto admissible = [&](double alpha) {
        cplx rot = std::polar(1.0, -alpha);
        for (cplx v : lambda.elements()) {
            if (std::abs(v) <= tol) continue;
            if ((v * rot).imag() < -tol) return false;
        }
        return true;
    };
    for (cplx v : lambda.elements()) {
        if (std::abs(v) <= tol) continue;
        double a = arg2pi(v);
        if (admissible(a)) return std::make_pair(a, v);
        double b = a >= kPi ? a - kPi : a + kPi;
        if (admissible(b)) return std::make_pair(b, v);
    }
    return std::nullopt;
}

}  // namespace

LambdaClass classify_lambda(const CoefficientSet& lambda) {
    double tol = class_tol(lambda);
    const auto& el = lambda.elements();

    LambdaClass out;
    auto hp = find_half_plane(lambda);
    if (hp) out.half_plane_alpha = hp->first;

    // Collinearity: anchor at the first element, direction toward the farthest.
    cplx p = el.front();
    cplx q = p;
    double best = 0.0;
    for (cplx v : el) {
        double d = std::abs(v - p);
        if (d > best) {
            best = d;
            q = v;
        }
    }
    bool line = true;
    cplx dir{1.0, 0.0};
    if (best > tol) {
        dir = (q - p) / std::abs(q - p);
        for (cplx v : el) {
            if (std::abs(((v - p) * std::conj(dir)).imag()) > tol) {
                line = false;
                break;
            }
        }
    }
    if (line) {
        out.kind = LambdaClass::Kind::ContainedInLine;
        out.line_direction = dir;
        double t = -((std::conj(dir) * p).real());
        out.line_offset = p + t * dir;
        out.witness = {p, q};
        return out;
    }
    if (hp) {
        out.kind = LambdaClass::Kind::ContainedInHalfPlane;
        out.witness = {hp->second};
        return out;
    }
    out.kind = LambdaClass::Kind::Spanning;
    return out;
}

DescentQuadruple find_descent_quadruple(const CoefficientSet& lambda) {
    if (classify_lambda(lambda).kind != LambdaClass::Kind::Spanning) throw NotSpanning();
    const auto& el = lambda.elements();

    // Scale so the reference element becomes 1; ratios, and hence the gap
    // conditions, are unchanged. Reference: largest modulus, first occurrence.
    cplx mu = el.front();
    for (cplx v : el)
        if (std::abs(v) > std::abs(mu)) mu = v;

    auto narg = [&](cplx v) { return arg2pi(v / mu); };

    // beta = max argument among elements above the reference line.
    cplx d1{};
    double beta = -1.0;
    for (cplx v : el) {
        cplx w = v / mu;
        if (w.imag() > 0.0 && narg(v) > beta) {
            beta = narg(v);
            d1 = v;
        }
    }
    if (beta < 0.0) throw NotSpanning("no element above the reference line");

    // Some element with argument in [pi, beta + pi).
    cplx d2{};
    bool found2 = false;
    for (cplx v : el) {
        double a = narg(v);
        if (std::abs(v) > 0.0 && a >= kPi && a < beta + kPi) {
            d2 = v;
            found2 = true;
            break;
        }
    }
    if (!found2) throw NotSpanning("no element opposing the upper extreme");

    cplx d3{};
    if (narg(d2) > kPi) {
        d3 = d2;
    } else {
        bool found3 = false;
        for (cplx v : el) {
            if ((v / mu).imag() < 0.0) {
                d3 = v;
                found3 = true;
                break;
            }
        }
        if (!found3) throw NotSpanning("no element below the reference line");
    }

    DescentQuadruple quad;
    quad.elements = {mu, d1, d2, d3};
    double mx = 0.0;
    for (int j = 0; j < 4; ++j) mx = std::max(mx, quad.gap(j));
    quad.max_arg_gap = mx;
    if (!quad.satisfies_invariants())
        throw VerificationFailed("find_descent_quadruple: constructed quadruple violates gaps");
    return quad;
}

namespace {

struct Dir {
    double angle;
    double modulus;
};

// min over elements of |lambda| / (2 cos(angular distance)), the radius above
// which that element strictly decreases |z| for z antipodal at angle psi.
double envelope(const std::vector<Dir>& dirs, double psi) {
    double best = std::numeric_limits<double>::infinity();
    for (const Dir& d : dirs) {
        double dist = circ_dist(d.angle, psi);
        if (dist >= kPi / 2.0) continue;
        double c = std::cos(dist);
        if (c <= 0.0) continue;
        best = std::min(best, d.modulus / (2.0 * c));
    }
    return best;
}

}  // namespace

double descent_radius(const CoefficientSet& lambda) {
    if (classify_lambda(lambda).kind != LambdaClass::Kind::Spanning) throw NotSpanning();
    std::vector<Dir> dirs;
    for (cplx v : lambda.elements())
        if (std::abs(v) > 0.0) dirs.push_back({arg2pi(v), std::abs(v)});

    // The sup of the lower envelope sits at a crossing of two branches (each
    // branch is a U growing to infinity at +-pi/2 from its direction), so the
    // candidate list of crossings plus the directions themselves is exhaustive.
    std::vector<double> candidates;
    for (const Dir& d : dirs) {
        candidates.push_back(d.angle);
        candidates.push_back(d.angle + kPi / 2.0 * 0.999999);
        candidates.push_back(d.angle - kPi / 2.0 * 0.999999);
    }
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            double A = dirs[i].modulus * std::cos(dirs[j].angle) -
                       dirs[j].modulus * std::cos(dirs[i].angle);
            double B = dirs[i].modulus * std::sin(dirs[j].angle) -
                       dirs[j].modulus * std::sin(dirs[i].angle);
            if (A == 0.0 && B == 0.0) continue;
            double psi = std::atan2(-A, B);
            candidates.push_back(psi);
            candidates.push_back(psi + kPi);
        }
    }
    double sup = 0.0;
    for (double psi : candidates) {
        double v = envelope(dirs, psi);
        if (std::isfinite(v)) sup = std::max(sup, v);
    }
    if (!(sup > 0.0) || !std::isfinite(sup))
        throw VerificationFailed("descent_radius: degenerate envelope");
    double R = sup * 1.01;

    // Sampled confirmation of the formula on the circle |z| = R.
    for (int t = 0; t < 10000; ++t) {
        cplx z = std::polar(R, kTwoPi * t / 10000.0);
        bool ok = false;
        for (cplx v : lambda.elements()) {
            if (std::abs(z + v) < R) {
                ok = true;
                break;
            }
        }
        if (!ok) throw VerificationFailed("descent_radius: sampled direction admits no descent");
    }
    return R;
}

std::pair<SparseAssignment, double> bounded_tail_schedule_with_radius(
    const CoefficientSet& lambda, cplx z, const std::vector<std::uint64_t>& indices,
    double descent_r) {
    if (std::abs(z) >= 1.0)
        throw std::invalid_argument("bounded_tail_schedule: |z| must be < 1");
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (indices[i - 1] >= indices[i])
            throw std::invalid_argument("bounded_tail_schedule: indices must increase");

    const double R = descent_r;
    const double rstar = R + lambda.sup_modulus();
    const cplx rest = lambda.min_modulus_element();

    SparseAssignment out;
    cplx partial{0.0, 0.0};
    cplx zpow{1.0, 0.0};
    std::uint64_t prev = 0;
    bool first = true;
    for (std::uint64_t n : indices) {
        zpow = first ? cpow_u64(z, n) : zpow * cpow_u64(z, n - prev);
        first = false;
        prev = n;
        cplx chosen = rest;
        if (std::abs(partial) > R) {
            // Descent choice for the scaled set z^n * Lambda; the same R works
            // because |z^n| < 1. At z^n = 0 every choice ties, which is fine:
            // the partial sum cannot move at all.
            double best = std::numeric_limits<double>::infinity();
            for (cplx v : lambda.elements()) {
                double cand = std::abs(partial + v * zpow);
                if (cand < best) {
                    best = cand;
                    chosen = v;
                }
            }
            if (best > std::abs(partial) * (1.0 + kBoundInflation))
                throw VerificationFailed("bounded_tail_schedule: descent step failed");
        }
        partial += chosen * zpow;
        out.append(n, chosen);
        if (std::abs(partial) > rstar * (1.0 + kBoundInflation))
            throw VerificationFailed("bounded_tail_schedule: partial sum escaped R*");
    }
    return {std::move(out), rstar};
}

std::pair<SparseAssignment, double> bounded_tail_schedule(
    const CoefficientSet& lambda, cplx z, const std::vector<std::uint64_t>& indices) {
    return bounded_tail_schedule_with_radius(lambda, z, indices, descent_radius(lambda));
}

}  // namespace lseries::geometry
