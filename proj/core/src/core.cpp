#include "lseries/core.hpp"

#include <algorithm>
#include <cmath>

namespace lseries {

CoefficientSet::CoefficientSet(std::vector<cplx> elements) {
    if (elements.empty()) throw std::invalid_argument("CoefficientSet: empty element list");
    for (cplx v : elements) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("CoefficientSet: non-finite element");
        if (std::find(elements_.begin(), elements_.end(), v) == elements_.end())
            elements_.push_back(v);
    }
    for (cplx v : elements_) sup_modulus_ = std::max(sup_modulus_, std::abs(v));
}

bool CoefficientSet::contains(cplx v, double tol) const {
    for (cplx e : elements_)
        if (std::abs(e - v) <= tol) return true;
    return false;
}

bool CoefficientSet::has_zero() const {
    for (cplx e : elements_)
        if (e.real() == 0.0 && e.imag() == 0.0) return true;
    return false;
}

cplx CoefficientSet::min_modulus_element() const {
    cplx best = elements_.front();
    double bm = std::abs(best);
    for (cplx e : elements_) {
        double m = std::abs(e);
        if (m < bm) {
            bm = m;
            best = e;
        }
    }
    return best;
}

void CoefficientSet::require_two_distinct() const {
    if (elements_.size() < 2)
        throw std::invalid_argument("coefficient set must have at least two distinct elements");
}

SparseAssignment::SparseAssignment(std::vector<Term> terms) : terms_(std::move(terms)) {
    for (std::size_t i = 1; i < terms_.size(); ++i)
        if (terms_[i - 1].index >= terms_[i].index)
            throw std::invalid_argument("SparseAssignment: indices must be strictly increasing");
}

std::optional<std::uint64_t> SparseAssignment::max_index() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.back().index;
}

void SparseAssignment::append(std::uint64_t index, cplx value) {
    if (!terms_.empty() && terms_.back().index >= index)
        throw std::invalid_argument("SparseAssignment::append: index not increasing");
    terms_.push_back({index, value});
}

SparseAssignment SparseAssignment::from_unsorted(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.index < b.index; });
    return SparseAssignment(std::move(terms));
}

cplx eval_prefix(const SparseAssignment& assignment, cplx z) {
    if (std::abs(z) >= 1.0) throw std::invalid_argument("eval_prefix: |z| must be < 1");
    const auto& terms = assignment.terms();
    if (terms.empty()) return {0.0, 0.0};
    // value = (((v_k z^{g_k} + v_{k-1}) z^{g_{k-1}} + ...) + v_0) z^{n_0}
    cplx acc = terms.back().value;
    for (std::size_t i = terms.size() - 1; i-- > 0;) {
        std::uint64_t gap = terms[i + 1].index - terms[i].index;
        acc = acc * cpow_u64(z, gap) + terms[i].value;
    }
    return acc * cpow_u64(z, terms.front().index);
}

double tail_bound(double sup_modulus, double r, std::uint64_t start_index) {
    if (sup_modulus < 0.0) throw std::invalid_argument("tail_bound: negative sup_modulus");
    if (r < 0.0 || r >= 1.0) throw std::invalid_argument("tail_bound: r must lie in [0, 1)");
    if (sup_modulus == 0.0) return 0.0;
    double rn = std::pow(r, static_cast<double>(start_index));
    return sup_modulus * rn / (1.0 - r) * (1.0 + kBoundInflation);
}

std::pair<CoefficientSet, AffineTransform> normalize_affine(const CoefficientSet& lambda,
                                                            cplx a, cplx b) {
    if (a == b) throw std::invalid_argument("normalize_affine: a and b must differ");
    if (!lambda.contains(a, 0.0) || !lambda.contains(b, 0.0))
        throw std::invalid_argument("normalize_affine: a and b must be elements of the set");
    AffineTransform t{b - a, a};
    std::vector<cplx> mapped;
    mapped.reserve(lambda.size());
    for (cplx v : lambda.elements()) {
        cplx m = t.forward(v);
        if (v == a) m = {0.0, 0.0};  // pin the two anchors exactly
        if (v == b) m = {1.0, 0.0};
        mapped.push_back(m);
    }
    return {CoefficientSet(std::move(mapped)), t};
}

cplx transport_target(cplx w, cplx tau, const AffineTransform& t) {
    if (std::abs(tau) >= 1.0) throw std::invalid_argument("transport_target: |tau| must be < 1");
    return (w - t.shift / (cplx{1.0, 0.0} - tau)) / t.scale;
}

SparseAssignment back_transport_dense(const SparseAssignment& normalized,
                                      const AffineTransform& t, std::uint64_t upto) {
    SparseAssignment out;
    auto it = normalized.terms().begin();
    const auto end = normalized.terms().end();
    for (std::uint64_t n = 0; n <= upto; ++n) {
        cplx mu{0.0, 0.0};
        if (it != end && it->index == n) {
            mu = it->value;
            ++it;
        }
        out.append(n, t.backward(mu));
    }
    return out;
}

bool Wedge::contains(cplx z) const {
    double re = z.real();
    if (!(re > re_lo && re < re_hi)) return false;
    if (z == cplx{0.0, 0.0}) return false;
    return circ_dist(arg2pi(z), arg_center) < half_angle;
}

namespace {

bool piece_contains(const RegionPiece& p, cplx z) {
    return std::visit([z](const auto& piece) { return piece.contains(z); }, p);
}

bool piece_meets_unit_disk(const RegionPiece& p) {
    if (const auto* d = std::get_if<Disk>(&p)) {
        if (d->radius <= 0.0) return false;
        return std::abs(d->center) < 1.0 + d->radius;
    }
    const auto& w = std::get<Wedge>(p);
    if (!(w.re_lo < w.re_hi) || w.half_angle <= 0.0) return false;
    // Probe: wedge geometry is awkward to intersect symbolically, a grid does.
    for (int i = 0; i < 64; ++i) {
        double theta = w.arg_center + w.half_angle * (2.0 * (i % 8) / 7.0 - 1.0) * 0.96;
        double rho = (0.5 + i / 8) / 8.5;
        cplx z = std::polar(rho, theta);
        if (std::abs(z) < 1.0 && w.contains(z)) return true;
    }
    return false;
}

}  // namespace

RegionSpec::RegionSpec(std::vector<RegionPiece> pieces, UnitAngle accumulation_point)
    : pieces_(std::move(pieces)), accumulation_(accumulation_point) {
    if (pieces_.empty()) throw std::invalid_argument("RegionSpec: no pieces");
    for (const auto& p : pieces_)
        if (!piece_meets_unit_disk(p))
            throw std::invalid_argument("RegionSpec: piece does not meet the open unit disk");
}

bool RegionSpec::contains(cplx z) const {
    if (std::abs(z) >= 1.0) return false;
    for (const auto& p : pieces_)
        if (piece_contains(p, z)) return true;
    return false;
}

bool RegionSpec::check_accumulation(int max_k) const {
    cplx zeta = accumulation_.value();
    for (int k = 1; k <= max_k; ++k) {
        double d = std::pow(10.0, -k);
        bool found = false;
        // Radial probes first, then a small tangential fan.
        for (int i = 1; i <= 8 && !found; ++i) {
            cplx z = zeta * (1.0 - d / (1 << i));
            if (std::abs(z - zeta) < d && contains(z)) found = true;
        }
        for (int i = 0; i < 64 && !found; ++i) {
            double off = d * 0.5 * ((i % 8) - 3.5) / 4.0;
            double in = d * 0.5 * (1 + i / 8) / 9.0;
            cplx z = zeta * std::polar(1.0 - in, off);
            if (std::abs(z - zeta) < d && contains(z)) found = true;
        }
        if (!found) return false;
    }
    return true;
}

double RegionSpec::sup_abs() const {
    double best = 0.0;
    for (const auto& p : pieces_) {
        if (const auto* d = std::get_if<Disk>(&p)) {
            best = std::max(best, std::min(1.0, std::abs(d->center) + d->radius));
        } else {
            const auto& w = std::get<Wedge>(p);
            for (int i = 0; i <= 1024; ++i) {
                double theta = w.arg_center + w.half_angle * (2.0 * i / 1024.0 - 1.0);
                double c = std::cos(theta);
                double rho = 1.0;
                if (c > 1e-15)
                    rho = w.re_hi / c;
                else if (c < -1e-15)
                    rho = w.re_lo / c;
                best = std::max(best, std::min(1.0, rho));
            }
        }
    }
    return best;
}

RegionSpec RegionSpec::default_disk(UnitAngle zeta) {
    return RegionSpec({Disk{0.95 * zeta.value(), 0.1}}, zeta);
}

}  // namespace lseries
