#include "lseries/engines.hpp"

#include <algorithm>
#include <cmath>

namespace lseries::engines {

namespace {

constexpr std::uint64_t kPowerCap = 1ull << 50;
constexpr std::uint64_t kDenseCap = 1ull << 23;

SparseAssignment prefix_assignment(const PrefixConstraint& prefix) {
    SparseAssignment a;
    for (std::size_t n = 0; n < prefix.values.size(); ++n) a.append(n, prefix.values[n]);
    return a;
}

void validate_inputs(const CoefficientSet& lambda, const PrefixConstraint& prefix, double eps) {
    lambda.require_two_distinct();
    if (!(eps > 0.0)) throw std::invalid_argument("engine: eps must be positive");
    for (cplx v : prefix.values)
        if (!lambda.contains(v, 1e-12))
            throw std::invalid_argument("engine: prefix value outside the coefficient set");
}

/// sum_{n=lo}^{hi} tau^n (hi inclusive); 0 for an empty window.
cplx geom_window(cplx tau, std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) return {0.0, 0.0};
    cplx one{1.0, 0.0};
    return cpow_u64(tau, lo) * (one - cpow_u64(tau, hi - lo + 1)) / (one - tau);
}

struct NormalizationPair {
    cplx a, b;
};

// The two elements mapped to {0,1}. Default policy: widest pair for the best
// conditioned transform; pairs anchored at 0 win ties so certificates can
// leave gaps instead of carrying a dense filler.
NormalizationPair pick_pair(const CoefficientSet& lambda, bool prefer_zero_anchor) {
    const auto& el = lambda.elements();
    NormalizationPair best{};
    double best_gap = -1.0;
    auto lex = [](cplx x, cplx y) {
        return std::tuple(x.real(), x.imag()) < std::tuple(y.real(), y.imag());
    };
    bool have = false;
    auto consider = [&](cplx a, cplx b) {
        double gap = std::abs(b - a);
        if (gap == 0.0) return;
        bool zero_a = a == cplx{0.0, 0.0};
        bool best_zero_a = best.a == cplx{0.0, 0.0};
        bool better;
        if (!have)
            better = true;
        else if (prefer_zero_anchor && zero_a != best_zero_a)
            better = zero_a;
        else if (gap != best_gap)
            better = gap > best_gap;
        else
            better = lex(a, best.a) || (a == best.a && lex(b, best.b));
        if (better) {
            best = {a, b};
            best_gap = gap;
            have = true;
        }
    };
    if (prefer_zero_anchor && lambda.has_zero()) {
        for (cplx b : el)
            if (b != cplx{0.0, 0.0}) consider({0.0, 0.0}, b);
    } else {
        for (cplx a : el)
            for (cplx b : el) consider(a, b);
    }
    if (!have) throw std::invalid_argument("engine: coefficient set has no two distinct elements");
    return best;
}

struct Emission {
    bool ok = false;
    Certificate cert;
};

Emission try_emit(const CoefficientSet& lambda, cplx tau, SparseAssignment assignment, cplx w,
                  double eps) {
    double err = std::abs(eval_prefix(assignment, tau) - w);
    double tail = 0.0;
    if (!lambda.has_zero()) {
        std::uint64_t start = assignment.max_index() ? *assignment.max_index() + 1 : 0;
        tail = tail_bound(lambda.sup_modulus(), std::abs(tau), start);
    }
    Emission e;
    e.ok = err + tail < eps;
    e.cert = Certificate{tau, std::move(assignment), w, eps, err, tail};
    return e;
}

std::vector<cplx> probe_points(cplx zeta_value, double g) {
    std::vector<cplx> pts;
    for (double f : {0.5, 0.25, 0.125, 0.0625}) {
        pts.push_back(zeta_value * (1.0 - g * f));
        for (double t : {0.25, -0.25, 0.5, -0.5})
            pts.push_back(zeta_value * std::polar(1.0 - g * f, g * t));
    }
    return pts;
}

}  // namespace

TauChoice select_tau(const RegionSpec& region, double delta, const ModulusTarget& target) {
    if (!(delta > 0.0) || delta > 0.4 + 1e-12)
        throw std::invalid_argument("select_tau: delta must lie in (0, 2/5]");
    cplx zv = region.accumulation_point().value();

    auto feasible = [&](double g) -> std::optional<cplx> {
        for (cplx z : probe_points(zv, g))
            if (std::abs(z - zv) < delta && region.contains(z)) return z;
        return std::nullopt;
    };

    switch (target.kind) {
        case ModulusTarget::Kind::None: {
            for (int s = 0; s < 40; ++s)
                if (auto z = feasible(delta / static_cast<double>(1ull << s))) return {*z, {}};
            throw RegionTooThin("select_tau: no admissible point near the accumulation point");
        }
        case ModulusTarget::Kind::Exact: {
            double v = target.value;
            if (!(v > 0.0 && v < 1.0))
                throw std::invalid_argument("select_tau: modulus target must lie in (0,1)");
            double lv = std::log(v);
            auto m0 = static_cast<std::uint64_t>(
                std::max(1.0, std::ceil(lv / std::log1p(-delta))));
            for (std::uint64_t m = m0; m < m0 + 400000 && m < kPowerCap; ++m) {
                double rho = std::exp(lv / static_cast<double>(m));
                cplx tau = zv * rho;
                if (1.0 - rho < delta && region.contains(tau)) return {tau, m};
            }
            throw RegionTooThin("select_tau: no radial point matches the modulus target");
        }
        case ModulusTarget::Kind::Interval: {
            if (!(target.lo > 0.0 && target.lo < target.hi && target.hi < 1.0))
                throw std::invalid_argument("select_tau: bad modulus interval");
            for (int s = 0; s < 40; ++s) {
                auto z = feasible(delta / static_cast<double>(1ull << s));
                if (!z) continue;
                double rho = std::abs(*z);
                double m0 = std::log(target.hi) / std::log(rho);
                auto lo_m = static_cast<std::uint64_t>(std::max(1.0, std::floor(m0) - 2.0));
                for (std::uint64_t m = lo_m; m < lo_m + 64; ++m) {
                    double pw = std::pow(rho, static_cast<double>(m));
                    if (pw > target.lo && pw < target.hi) return {*z, m};
                }
            }
            throw RegionTooThin("select_tau: no power lands in the modulus interval");
        }
    }
    throw std::logic_error("select_tau: bad target kind");
}

namespace {

// Shared final assembly: prefix + dense filler value `fill` over the window
// [window_lo, cut] with `slots` overriding individual indices. When the set
// contains 0 and fill == 0 the filler is left implicit (gaps mean zero).
SparseAssignment assemble(const PrefixConstraint& prefix, cplx fill, bool fill_explicit,
                          std::uint64_t window_lo, std::uint64_t cut,
                          const std::vector<SparseAssignment::Term>& slots) {
    std::vector<SparseAssignment::Term> terms;
    for (std::size_t n = 0; n < prefix.values.size(); ++n)
        terms.push_back({n, prefix.values[n]});
    if (fill_explicit) {
        if (cut >= window_lo && cut - window_lo + 1 > kDenseCap)
            throw std::runtime_error("engine: dense filler window exceeds the size cap");
        auto slot_it = slots.begin();
        for (std::uint64_t n = window_lo; n <= cut; ++n) {
            while (slot_it != slots.end() && slot_it->index < n) ++slot_it;
            if (slot_it != slots.end() && slot_it->index == n)
                terms.push_back(*slot_it);
            else
                terms.push_back({n, fill});
        }
    } else {
        for (const auto& t : slots) terms.push_back(t);
    }
    return SparseAssignment::from_unsorted(std::move(terms));
}

std::uint64_t dense_cut(double sup, double rho, double tail_budget, std::uint64_t at_least) {
    // smallest cut with tail_bound(sup, rho, cut+1) below the budget
    double need = std::log(tail_budget * (1.0 - rho) / (sup * (1.0 + 2e-12))) / std::log(rho);
    auto cut = static_cast<std::uint64_t>(std::max(1.0, std::ceil(need)));
    while (tail_bound(sup, rho, cut + 1) >= tail_budget) ++cut;
    return std::max(cut, at_least);
}

}  // namespace

EngineResult approximate_generic(const CoefficientSet& lambda, const RegionSpec& region,
                                 const PrefixConstraint& prefix, cplx target, double eps,
                                 const EngineParams& params) {
    validate_inputs(lambda, prefix, eps);
    const UnitAngle& zeta = region.accumulation_point();
    if (zeta.real_axis())
        throw std::invalid_argument("approximate_generic: accumulation point must not be +-1");

    const double delta0 = std::min(params.delta_cap, 0.4);
    const auto P = static_cast<std::uint64_t>(prefix.length());
    SparseAssignment pref = prefix_assignment(prefix);

    // Empty-construction shortcut: the prefix alone may already certify.
    if (lambda.has_zero()) {
        cplx tau0 = select_tau(region, delta0, ModulusTarget::none()).tau;
        auto e = try_emit(lambda, tau0, pref, target, eps);
        if (e.ok) {
            EngineDiagnostics d;
            d.branch = "prefix-only";
            return {std::move(e.cert), std::move(d)};
        }
    }

    auto pair = pick_pair(lambda, false);
    const cplx a = pair.a, s = pair.b - pair.a;
    const bool fill = a != cplx{0.0, 0.0};
    const double sup = lambda.sup_modulus();

    if (zeta.lattice_root()) {
        // Root-of-unity branch: lattice 1-net pushed through the annulus power.
        auto root = *nets::lattice_root_of(zeta);
        const double eps_net = (eps / 2.0) / std::abs(s);
        double lo = eps_net / 5.0, hi = eps_net / 3.0;
        if (hi >= 1.0) {  // oversized eps: any window with the 5/3 ratio works
            hi = 0.8;
            lo = 0.48;
        }
        for (int shrink = 0; shrink < 40; ++shrink) {
            auto choice = select_tau(region, delta0 / static_cast<double>(1ull << shrink),
                                     ModulusTarget::interval(lo, hi));
            cplx tau = choice.tau;
            std::uint64_t M = *choice.power;
            double rho = std::abs(tau);
            cplx tauM = cpow_u64(tau, M);

            std::uint64_t cut = P;
            for (int round = 0; round < 4; ++round) {
                cplx gw = fill ? geom_window(tau, P, cut) : cplx{0.0, 0.0};
                cplx u = (target - eval_prefix(pref, tau) - a * gw) / (s * tauM);
                if (std::abs(u) > static_cast<double>(1 << 20))
                    throw std::runtime_error(
                        "approximate_generic: scaled target past the expansion size cap");
                nets::LatticePoint base = nets::lattice_round(u, root);

                Emission best;
                double best_err = std::numeric_limits<double>::infinity();
                std::uint64_t max_exp = cut;
                for (std::int64_t da = -1; da <= 1; ++da) {
                    for (std::int64_t db = -1; db <= 1; ++db) {
                        nets::LatticePoint cand{base.a + da, base.b + db, root};
                        auto exp_sum = nets::expand_nonneg(cand, P);
                        std::vector<SparseAssignment::Term> slots;
                        slots.reserve(exp_sum.exponents.size());
                        for (std::uint64_t e : exp_sum.exponents)
                            slots.push_back({e + M, pair.b});
                        std::uint64_t top =
                            slots.empty() ? P : slots.back().index;
                        std::uint64_t c2 = fill ? std::max(cut, top) : top;
                        auto asg = assemble(prefix, a, fill, P, c2, slots);
                        auto em = try_emit(lambda, tau, std::move(asg), target, eps);
                        if (em.cert.achieved_error < best_err) {
                            best_err = em.cert.achieved_error;
                            best = std::move(em);
                            max_exp = c2;
                        }
                    }
                }
                if (best.ok) {
                    EngineDiagnostics d;
                    d.branch = "lattice-annulus";
                    d.power = M;
                    d.annulus_lo = lo;
                    d.annulus_hi = hi;
                    d.net_epsilon = eps_net;
                    return {std::move(best.cert), std::move(d)};
                }
                if (!fill) break;
                std::uint64_t want = dense_cut(sup, rho, eps / 20.0, max_exp);
                if (want == cut) break;
                cut = want;
            }
        }
        throw RegionTooThin("approximate_generic: annulus construction did not settle");
    }

    // Generic branch: greedy power sums at zeta, then walk tau toward zeta
    // until the finite evaluation settles.
    const double eps_net = (eps / 2.0) * 0.98 / std::abs(s);
    std::optional<nets::ExponentSum> net;
    cplx net_target{0.0, 0.0};
    for (int shrink = 0; shrink < 60; ++shrink) {
        double g = delta0 / std::pow(2.0, shrink);
        if (g < 1e-14) break;  // closer would round tau onto the circle
        cplx tau = select_tau(region, g, ModulusTarget::none()).tau;
        double rho = std::abs(tau);

        std::uint64_t cut = P;
        for (int round = 0; round < 4; ++round) {
            cplx gw = fill ? geom_window(tau, P, cut) : cplx{0.0, 0.0};
            cplx w2 = (target - eval_prefix(pref, tau) - a * gw) / s;
            if (!net || std::abs(w2 - net_target) > 0.05 * eps_net) {
                net = nets::unimodular_sum_approx(w2, zeta, P, eps_net, params.horizon_cap);
                net_target = w2;
            }
            std::vector<SparseAssignment::Term> slots;
            slots.reserve(net->exponents.size());
            for (std::uint64_t e : net->exponents) slots.push_back({e, pair.b});
            std::uint64_t top = slots.empty() ? P : slots.back().index;
            std::uint64_t c2 = fill ? std::max(cut, top) : top;
            auto asg = assemble(prefix, a, fill, P, c2, slots);
            auto em = try_emit(lambda, tau, std::move(asg), target, eps);
            if (em.ok) {
                EngineDiagnostics d;
                d.branch = "greedy-powers";
                d.net_epsilon = eps_net * std::abs(s);
                return {std::move(em.cert), std::move(d)};
            }
            if (!fill) break;
            std::uint64_t want = dense_cut(sup, rho, eps / 20.0, c2);
            if (want == cut) break;
            cut = want;
        }
    }
    throw RegionTooThin("approximate_generic: tau walk exhausted without settling");
}

EngineResult approximate_near_minus_one(const CoefficientSet& lambda, const RegionSpec& region,
                                        const PrefixConstraint& prefix, cplx target, double eps,
                                        const EngineParams& params) {
    validate_inputs(lambda, prefix, eps);
    if (!(region.accumulation_point() == UnitAngle::rational(1, 2)))
        throw std::invalid_argument("approximate_near_minus_one: accumulation point must be -1");
    if (geometry::classify_lambda(lambda).kind == geometry::LambdaClass::Kind::ContainedInLine)
        throw NotApplicable("line-contained");

    const double delta0 = std::min(params.delta_cap, 0.4);
    const auto P = static_cast<std::uint64_t>(prefix.length());
    SparseAssignment pref = prefix_assignment(prefix);

    if (lambda.has_zero()) {
        cplx tau0 = select_tau(region, delta0, ModulusTarget::none()).tau;
        auto e = try_emit(lambda, tau0, pref, target, eps);
        if (e.ok) {
            EngineDiagnostics d;
            d.branch = "prefix-only";
            return {std::move(e.cert), std::move(d)};
        }
    }

    auto pair = pick_pair(lambda, true);
    const cplx a = pair.a, s = pair.b - pair.a;
    const bool fill = a != cplx{0.0, 0.0};
    const double sup = lambda.sup_modulus();

    // The lattice generator: normalized element of largest |Im|, kept with its
    // original so slots can carry an exact element of the set.
    cplx gen{0.0, 0.0}, gen_original{0.0, 0.0};
    for (cplx v : lambda.elements()) {
        cplx mu = (v - a) / s;
        if (std::abs(mu.imag()) > std::abs(gen.imag())) {
            gen = mu;
            gen_original = v;
        }
    }
    if (std::abs(gen.imag()) < 1e-13)
        throw NotApplicable("line-contained");

    const double cover = std::max(std::abs(cplx{1.0, 0.0} + gen), std::abs(cplx{1.0, 0.0} - gen)) / 2.0;
    const double eps_net = (eps / 2.0) / std::abs(s);
    const double eps0 =
        params.epsilon0 > 0.0 ? params.epsilon0 : std::min(0.8, 0.98 * (eps_net / 2.0) / cover);

    std::uint64_t m_base =
        *select_tau(region, delta0, ModulusTarget::exact(eps0)).power;

    for (int attempt = 0; attempt < 44; ++attempt) {
        std::uint64_t m_try = m_base << attempt;
        if (m_try > kPowerCap) break;
        // Crawl up from the doubled power until the radial point re-enters.
        std::optional<std::pair<cplx, std::uint64_t>> chosen;
        for (std::uint64_t m = m_try; m < m_try + 4096; ++m) {
            double rho = std::exp(std::log(eps0) / static_cast<double>(m));
            cplx tau{-rho, 0.0};
            if (1.0 - rho < delta0 && region.contains(tau)) {
                chosen = {tau, m};
                break;
            }
        }
        if (!chosen) continue;
        auto [tau, M] = *chosen;
        double rho = std::abs(tau);
        cplx tauM = cpow_u64(tau, M);

        std::uint64_t cut = P;
        for (int round = 0; round < 4; ++round) {
            cplx gw = fill ? geom_window(tau, P, cut) : cplx{0.0, 0.0};
            cplx u = (target - eval_prefix(pref, tau) - a * gw) / (s * tauM);

            // Round onto {p + q*gen} (3x3 refinement around the coordinate solve).
            double qs = u.imag() / gen.imag();
            double ps = u.real() - qs * gen.real();
            if (std::fabs(qs) + std::fabs(ps) > static_cast<double>(1 << 22))
                throw std::runtime_error(
                    "approximate_near_minus_one: lattice coordinates past the size cap "
                    "(set nearly collinear?)");
            std::int64_t q0 = std::llround(qs), p0 = std::llround(ps);
            std::int64_t bp = p0, bq = q0;
            double bd = std::numeric_limits<double>::infinity();
            for (std::int64_t dq = -1; dq <= 1; ++dq)
                for (std::int64_t dp = -1; dp <= 1; ++dp) {
                    cplx v = cplx{static_cast<double>(p0 + dp), 0.0} +
                             static_cast<double>(q0 + dq) * gen;
                    double d = std::abs(u - v);
                    if (d < bd) {
                        bd = d;
                        bp = p0 + dp;
                        bq = q0 + dq;
                    }
                }

            // Realize p + q*gen by exponent parity: (-1)^n = +1 on even n.
            std::vector<SparseAssignment::Term> slots;
            std::uint64_t next_even = P + (P % 2);
            std::uint64_t next_odd = P + 1 - (P % 2);
            auto take = [&](bool even) {
                std::uint64_t n = even ? next_even : next_odd;
                (even ? next_even : next_odd) += 2;
                return n;
            };
            for (std::int64_t j = 0; j < std::llabs(bq); ++j)
                slots.push_back({take(bq > 0) + M, gen_original});
            for (std::int64_t j = 0; j < std::llabs(bp); ++j)
                slots.push_back({take(bp > 0) + M, pair.b});
            std::sort(slots.begin(), slots.end(),
                      [](const auto& x, const auto& y) { return x.index < y.index; });

            std::uint64_t top = slots.empty() ? P : slots.back().index;
            std::uint64_t c2 = fill ? std::max(cut, top) : top;
            auto asg = assemble(prefix, a, fill, P, c2, slots);
            auto em = try_emit(lambda, tau, std::move(asg), target, eps);
            if (em.ok) {
                EngineDiagnostics d;
                d.branch = "parity-lattice";
                d.power = M;
                d.epsilon0 = eps0;
                d.net_epsilon = eps_net * std::abs(s);
                return {std::move(em.cert), std::move(d)};
            }
            if (!fill) break;
            std::uint64_t want = dense_cut(sup, rho, eps / 20.0, c2);
            if (want == cut) break;
            cut = want;
        }
    }
    throw RegionTooThin("approximate_near_minus_one: power escalation did not settle");
}

namespace {

double cross3(cplx o, cplx p, cplx q) {
    return (p.real() - o.real()) * (q.imag() - o.imag()) -
           (p.imag() - o.imag()) * (q.real() - o.real());
}

// Monotone-chain convex hull; the inputs are at most four points.
std::vector<cplx> small_hull(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), [](cplx x, cplx y) {
        return std::tuple(x.real(), x.imag()) < std::tuple(y.real(), y.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<cplx> h;
    for (cplx p : pts) {
        while (h.size() >= 2 && cross3(h[h.size() - 2], h.back(), p) <= 0.0) h.pop_back();
        h.push_back(p);
    }
    std::size_t lower = h.size() + 1;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (h.size() >= lower && cross3(h[h.size() - 2], h.back(), *it) <= 0.0) h.pop_back();
        h.push_back(*it);
    }
    h.pop_back();
    return h;
}

double dist_point_segment(cplx p, cplx a, cplx b) {
    cplx ab = b - a;
    double t = ((p - a) * std::conj(ab)).real() / std::norm(ab);
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

// Barycentric coordinates of p over triangle (A, B, C).
std::array<double, 3> barycentric(cplx p, cplx A, cplx B, cplx C) {
    double det = cross3(A, B, C);
    double l1 = cross3(p, B, C) / det;
    double l2 = cross3(A, p, C) / det;
    return {l1, l2, 1.0 - l1 - l2};
}

// Composition (k_0..k_3), sum m, with sum k_j * delta_j near u: the net
// induction peels the vertex with the largest barycentric weight of
// v/remaining (so v stays inside the shrinking polygon sum), finishes the
// last three slots exactly, then polishes with pairwise transfers.
std::array<std::int64_t, 4> pick_combination(const std::array<cplx, 4>& d,
                                             const std::vector<cplx>& hull, std::int64_t m,
                                             cplx u) {
    // Fan triangulation of the hull; vertices mapped back to quadruple slots.
    std::vector<int> hull_slot(hull.size(), 0);
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (int j = 0; j < 4; ++j)
            if (d[j] == hull[i]) {
                hull_slot[i] = j;
                break;
            }

    std::array<std::int64_t, 4> k{0, 0, 0, 0};
    cplx v = u;
    std::int64_t remaining = m;
    while (remaining > 3) {
        cplx p = v / static_cast<double>(remaining);
        int best_vertex = 0;
        double best_coord = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 1; t + 1 < hull.size(); ++t) {
            auto bc = barycentric(p, hull[0], hull[t], hull[t + 1]);
            double lowest = std::min({bc[0], bc[1], bc[2]});
            if (lowest < -1e-12) continue;  // p outside this triangle
            std::array<std::size_t, 3> vid{0, t, t + 1};
            for (int c = 0; c < 3; ++c)
                if (bc[c] > best_coord) {
                    best_coord = bc[c];
                    best_vertex = static_cast<int>(vid[c]);
                }
        }
        if (best_coord < 0.0) {
            // Numerical spill outside the polygon: peel the nearest vertex.
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < hull.size(); ++i) {
                double cand = std::abs(p - hull[i]);
                if (cand < bd) {
                    bd = cand;
                    best_vertex = static_cast<int>(i);
                }
            }
        }
        int slot = hull_slot[static_cast<std::size_t>(best_vertex)];
        k[slot] += 1;
        v -= d[slot];
        remaining -= 1;
    }
    // Exhaust the final <= 3 picks exactly.
    std::array<std::int64_t, 4> add{0, 0, 0, 0};
    double bd = std::numeric_limits<double>::infinity();
    std::array<std::int64_t, 4> btail{0, 0, 0, 0};
    auto rec = [&](auto&& self, int j, std::int64_t left, cplx rem) -> void {
        if (j == 4) {
            if (left != 0) return;
            double cand = std::abs(rem);
            if (cand < bd) {
                bd = cand;
                btail = add;
            }
            return;
        }
        for (std::int64_t t = 0; t <= left; ++t) {
            add[j] = t;
            self(self, j + 1, left - t, rem - static_cast<double>(t) * d[j]);
        }
        add[j] = 0;
    };
    rec(rec, 0, remaining, v);
    for (int j = 0; j < 4; ++j) k[j] += btail[j];

    // Local polish: transfer one unit between groups while it improves.
    auto value = [&](const std::array<std::int64_t, 4>& kk) {
        cplx acc{0.0, 0.0};
        for (int j = 0; j < 4; ++j) acc += static_cast<double>(kk[j]) * d[j];
        return acc;
    };
    double cur = std::abs(value(k) - u);
    for (int round = 0; round < 256; ++round) {
        bool improved = false;
        for (int from = 0; from < 4; ++from) {
            if (k[from] == 0) continue;
            for (int to = 0; to < 4; ++to) {
                if (to == from) continue;
                k[from] -= 1;
                k[to] += 1;
                double cand = std::abs(value(k) - u);
                if (cand < cur - 1e-15) {
                    cur = cand;
                    improved = true;
                } else {
                    k[from] += 1;
                    k[to] -= 1;
                }
            }
        }
        if (!improved) break;
    }
    return k;
}

}  // namespace

EngineResult approximate_near_plus_one(const CoefficientSet& lambda, const RegionSpec& region,
                                       const PrefixConstraint& prefix, cplx target, double eps,
                                       const EngineParams& params) {
    validate_inputs(lambda, prefix, eps);
    if (!(region.accumulation_point() == UnitAngle::rational(0, 1)))
        throw std::invalid_argument("approximate_near_plus_one: accumulation point must be 1");
    if (geometry::classify_lambda(lambda).kind != geometry::LambdaClass::Kind::Spanning)
        throw NotApplicable("half-plane-contained");

    const double delta0 = std::min(params.delta_cap, 0.4);
    const auto P = static_cast<std::uint64_t>(prefix.length());
    SparseAssignment pref = prefix_assignment(prefix);
    const double sup = lambda.sup_modulus();

    auto quad = geometry::find_descent_quadruple(lambda);
    auto hull = small_hull({quad.elements[0], quad.elements[1], quad.elements[2],
                            quad.elements[3]});
    if (hull.size() < 3)
        throw VerificationFailed("approximate_near_plus_one: degenerate quadruple hull");
    double inscribed = std::numeric_limits<double>::infinity();
    double diam = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        inscribed = std::min(
            inscribed, dist_point_segment({0.0, 0.0}, hull[i], hull[(i + 1) % hull.size()]));
        for (std::size_t j = i + 1; j < hull.size(); ++j)
            diam = std::max(diam, std::abs(hull[i] - hull[j]));
    }
    if (!(inscribed > 0.0))
        throw VerificationFailed("approximate_near_plus_one: origin not interior to the hull");

    const double R = geometry::descent_radius(lambda);
    const double rstar = R + sup;
    const double eps_w = eps / 2.0;
    const double eps0 =
        params.epsilon0 > 0.0 ? params.epsilon0 : std::min(0.8, 0.98 * (eps_w / 2.0) / diam);
    const double reach = std::abs(target) + sup * static_cast<double>(P) + rstar;
    if (reach / (eps0 * inscribed) > static_cast<double>(1 << 22))
        throw std::runtime_error(
            "approximate_near_plus_one: reserved block past the size cap "
            "(inscribed radius too small for this target/eps)");
    const auto m = static_cast<std::int64_t>(std::ceil(reach / (eps0 * inscribed))) + 4;

    std::uint64_t m_base = *select_tau(region, delta0, ModulusTarget::exact(eps0)).power;

    for (int attempt = 0; attempt < 44; ++attempt) {
        std::uint64_t m_try = m_base << attempt;
        if (m_try > (1ull << 32)) break;
        std::optional<std::pair<cplx, std::uint64_t>> chosen;
        for (std::uint64_t mm = m_try; mm < m_try + 4096; ++mm) {
            double rho = std::exp(std::log(eps0) / static_cast<double>(mm));
            cplx tau{rho, 0.0};
            if (1.0 - rho < delta0 && region.contains(tau)) {
                chosen = {tau, mm};
                break;
            }
        }
        if (!chosen) continue;
        auto [tau, M] = *chosen;
        double rho = std::abs(tau);
        cplx tauM = cpow_u64(tau, M);

        // Index layout: scheduled [P, P+M), reserved [P+M, P+M+m), scheduled
        // tail up to the truncation cut (skipped when zeros are available).
        std::uint64_t res_lo = P + M;
        std::uint64_t res_hi = res_lo + static_cast<std::uint64_t>(m);  // exclusive
        std::uint64_t cut;
        if (lambda.has_zero())
            cut = res_hi - 1;
        else
            cut = dense_cut(sup, rho, eps / 10.0, res_hi);
        if (cut - P > (1ull << 24)) break;  // escalation made the window absurd

        std::vector<std::uint64_t> sched_idx;
        sched_idx.reserve(static_cast<std::size_t>(M + cut - res_hi + 1));
        for (std::uint64_t n = P; n < res_lo; ++n) sched_idx.push_back(n);
        for (std::uint64_t n = res_hi; n <= cut; ++n) sched_idx.push_back(n);

        auto [sched, bound] =
            geometry::bounded_tail_schedule_with_radius(lambda, tau, sched_idx, R);
        cplx w1 = eval_prefix(sched, tau);
        cplx u = (target - eval_prefix(pref, tau) - w1) / tauM;
        if (!(std::abs(u) < static_cast<double>(m) * inscribed)) continue;

        auto k = pick_combination(quad.elements, hull, m, u);
        std::vector<SparseAssignment::Term> terms;
        terms.reserve(pref.size() + sched.size() + static_cast<std::size_t>(m));
        for (const auto& t : pref.terms()) terms.push_back(t);
        for (const auto& t : sched.terms()) terms.push_back(t);
        std::uint64_t n = res_lo;
        for (int j = 0; j < 4; ++j)
            for (std::int64_t c = 0; c < k[j]; ++c) terms.push_back({n++, quad.elements[j]});
        auto asg = SparseAssignment::from_unsorted(std::move(terms));

        auto em = try_emit(lambda, tau, std::move(asg), target, eps);
        if (em.ok) {
            EngineDiagnostics d;
            d.branch = "minkowski-block";
            d.power = M;
            d.epsilon0 = eps0;
            d.net_epsilon = eps_w;
            d.scheduled = std::move(sched);
            d.schedule_bound = bound;
            d.reserved_lo = res_lo;
            d.reserved_hi = res_hi;
            return {std::move(em.cert), std::move(d)};
        }
    }
    throw RegionTooThin("approximate_near_plus_one: power escalation did not settle");
}

EngineResult approximate(const CoefficientSet& lambda, const RegionSpec& region,
                         const PrefixConstraint& prefix, cplx target, double eps,
                         const EngineParams& params) {
    const UnitAngle& zeta = region.accumulation_point();
    if (zeta.exact() && zeta.den() == 1)
        return approximate_near_plus_one(lambda, region, prefix, target, eps, params);
    if (zeta.exact() && zeta.den() == 2)
        return approximate_near_minus_one(lambda, region, prefix, target, eps, params);
    return approximate_generic(lambda, region, prefix, target, eps, params);
}

VerifyReport verify_certificate(const CoefficientSet& lambda, const Certificate& cert,
                                const RegionSpec& region) {
    VerifyReport rep;
    rep.tau_in_region = region.contains(cert.tau);
    auto fail = [&](const std::string& why) {
        if (rep.reason.empty()) rep.reason = why;
    };

    if (!(std::abs(cert.tau) < 1.0)) {
        fail("tau-outside-unit-disk");
        rep.margin = -std::numeric_limits<double>::infinity();
        return rep;
    }
    if (!rep.tau_in_region) fail("tau-outside-region");

    for (const auto& t : cert.assignment.terms())
        if (!lambda.contains(t.value, 1e-12)) fail("value-not-in-set");

    // Unlisted indices below the top one require 0 in the set to be fillable.
    if (!lambda.has_zero() && !cert.assignment.empty() &&
        cert.assignment.size() != *cert.assignment.max_index() + 1)
        fail("gap-without-zero-element");

    double err = std::abs(eval_prefix(cert.assignment, cert.tau) - cert.target);
    double tail = 0.0;
    if (!lambda.has_zero()) {
        std::uint64_t start = cert.assignment.max_index() ? *cert.assignment.max_index() + 1 : 0;
        tail = tail_bound(lambda.sup_modulus(), std::abs(cert.tau), start);
    }
    if (std::abs(err - cert.achieved_error) > 1e-12 * (1.0 + std::abs(cert.target)))
        fail("stored-error-mismatch");

    rep.margin = cert.epsilon - err - tail;
    if (!(rep.margin > 0.0)) fail("error-and-tail-exceed-epsilon");
    rep.valid = rep.reason.empty();
    return rep;
}

}  // namespace lseries::engines
