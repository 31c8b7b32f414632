#include "lseries/nets.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lseries::nets {

std::optional<LatticeRoot> lattice_root_of(const UnitAngle& zeta) {
    if (!zeta.exact()) return std::nullopt;
    std::int64_t p = zeta.num(), q = zeta.den();
    if (q == 4) return p == 1 ? LatticeRoot::I : LatticeRoot::MinusI;
    if (q == 3) return p == 1 ? LatticeRoot::Omega : LatticeRoot::OmegaSq;
    if (q == 6) return p == 1 ? LatticeRoot::MinusOmegaSq : LatticeRoot::MinusOmega;
    return std::nullopt;
}

UnitAngle angle_of(LatticeRoot root) {
    switch (root) {
        case LatticeRoot::I: return UnitAngle::rational(1, 4);
        case LatticeRoot::MinusI: return UnitAngle::rational(3, 4);
        case LatticeRoot::Omega: return UnitAngle::rational(1, 3);
        case LatticeRoot::MinusOmega: return UnitAngle::rational(5, 6);
        case LatticeRoot::OmegaSq: return UnitAngle::rational(2, 3);
        case LatticeRoot::MinusOmegaSq: return UnitAngle::rational(1, 6);
    }
    throw std::logic_error("angle_of: bad root");
}

cplx value_of(LatticeRoot root) { return angle_of(root).value(); }

int order_of(LatticeRoot root) {
    switch (root) {
        case LatticeRoot::I:
        case LatticeRoot::MinusI: return 4;
        case LatticeRoot::Omega:
        case LatticeRoot::OmegaSq: return 3;
        case LatticeRoot::MinusOmega:
        case LatticeRoot::MinusOmegaSq: return 6;
    }
    throw std::logic_error("order_of: bad root");
}

RingElem RingElem::operator+(const RingElem& o) const {
    if (eisenstein != o.eisenstein) throw std::logic_error("RingElem: mixed rings");
    return {x + o.x, y + o.y, eisenstein};
}

cplx RingElem::value() const {
    if (eisenstein) {
        const double h = std::sqrt(3.0) / 2.0;
        return {static_cast<double>(x) - 0.5 * static_cast<double>(y),
                h * static_cast<double>(y)};
    }
    return {static_cast<double>(x), static_cast<double>(y)};
}

namespace {

using Tbl = std::array<std::pair<std::int64_t, std::int64_t>, 6>;

// Power tables of each root over its ring basis; index = n mod order.
const Tbl& power_table(LatticeRoot root, int& order, bool& eisen) {
    static const Tbl ti{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {0, 0}, {0, 0}}};
    static const Tbl tmi{{{1, 0}, {0, -1}, {-1, 0}, {0, 1}, {0, 0}, {0, 0}}};
    static const Tbl tw{{{1, 0}, {0, 1}, {-1, -1}, {0, 0}, {0, 0}, {0, 0}}};
    static const Tbl tw2{{{1, 0}, {-1, -1}, {0, 1}, {0, 0}, {0, 0}, {0, 0}}};
    static const Tbl tmw{{{1, 0}, {0, -1}, {-1, -1}, {-1, 0}, {0, 1}, {1, 1}}};
    static const Tbl tmw2{{{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}};
    order = order_of(root);
    eisen = order != 4;
    switch (root) {
        case LatticeRoot::I: return ti;
        case LatticeRoot::MinusI: return tmi;
        case LatticeRoot::Omega: return tw;
        case LatticeRoot::OmegaSq: return tw2;
        case LatticeRoot::MinusOmega: return tmw;
        case LatticeRoot::MinusOmegaSq: return tmw2;
    }
    throw std::logic_error("power_table: bad root");
}

}  // namespace

RingElem unit_power(LatticeRoot root, std::uint64_t n) {
    int order = 0;
    bool eisen = false;
    const Tbl& t = power_table(root, order, eisen);
    auto [x, y] = t[n % static_cast<std::uint64_t>(order)];
    return {x, y, eisen};
}

RingElem lattice_value(LatticeRoot root, std::int64_t a, std::int64_t b) {
    RingElem u = unit_power(root, 1);
    return {a + b * u.x, b * u.y, u.eisenstein};
}

cplx LatticePoint::value() const { return lattice_value(zeta, a, b).value(); }

cplx ExponentSum::value() const {
    cplx s{0.0, 0.0};
    for (std::uint64_t n : exponents) s += zeta.power(n);
    return s;
}

RingElem ExponentSum::exact_value() const {
    auto root = lattice_root_of(zeta);
    if (!root) throw std::invalid_argument("exact_value: zeta is not a lattice root");
    RingElem acc = unit_power(*root, 0);
    acc.x = 0;
    acc.y = 0;
    for (std::uint64_t n : exponents) acc = acc + unit_power(*root, n);
    return acc;
}

LatticePoint lattice_round(cplx w, LatticeRoot zeta) {
    if (!(std::abs(w) < 9e15))
        throw std::invalid_argument("lattice_round: target too large for exact coordinates");
    cplx zv = value_of(zeta);
    double bs = w.imag() / zv.imag();
    double as = w.real() - bs * zv.real();
    std::int64_t a0 = static_cast<std::int64_t>(std::floor(as));
    std::int64_t b0 = static_cast<std::int64_t>(std::floor(bs));
    LatticePoint best{a0, b0, zeta};
    double best_d = std::norm(w - best.value());
    auto better = [&](const LatticePoint& c, double d) {
        if (d < best_d) return true;
        if (d > best_d) return false;
        auto key = [](const LatticePoint& p) {
            return std::tuple(std::llabs(p.a) + std::llabs(p.b), p.a, p.b);
        };
        return key(c) < key(best);
    };
    for (std::int64_t da = -1; da <= 2; ++da) {
        for (std::int64_t db = -1; db <= 2; ++db) {
            LatticePoint c{a0 + da, b0 + db, zeta};
            double d = std::norm(w - c.value());
            if (better(c, d)) {
                best = c;
                best_d = d;
            }
        }
    }
    const bool gaussian = order_of(zeta) == 4;
    double cover = gaussian ? std::sqrt(0.5) : 1.0 / std::sqrt(3.0);
    if (std::sqrt(best_d) > cover * (1.0 + 1e-9))
        throw VerificationFailed("lattice_round: covering radius exceeded");
    return best;
}

ExponentSum expand_nonneg(const LatticePoint& p, std::uint64_t N) {
    // Base residues mod 12; every admissible root satisfies zeta^12 = 1, so a
    // residue can be lifted by any multiple of 12 without changing its value.
    std::vector<int> base;
    auto push_block = [&base](int from, int to, std::int64_t copies) {
        for (std::int64_t c = 0; c < copies; ++c)
            for (int j = from; j <= to; ++j) base.push_back(j % 12);
    };
    if (p.a > 0)
        push_block(0, 0, p.a);
    else if (p.a < 0)
        push_block(1, 11, -p.a);  // -1 = sum_{j=1..11} zeta^j
    if (p.b > 0)
        push_block(1, 1, p.b);
    else if (p.b < 0)
        push_block(2, 12, -p.b);  // -zeta = sum_{j=2..12} zeta^j

    std::array<std::uint64_t, 12> next{};
    for (int r = 0; r < 12; ++r) {
        std::uint64_t rem = N % 12;
        std::uint64_t ur = static_cast<std::uint64_t>(r);
        next[r] = N + (ur >= rem ? ur - rem : ur + 12 - rem);
    }
    std::vector<std::uint64_t> exps;
    exps.reserve(base.size());
    for (int r : base) {
        exps.push_back(next[r]);
        next[r] += 12;
    }
    std::sort(exps.begin(), exps.end());
    return ExponentSum{angle_of(p.zeta), N, std::move(exps)};
}

namespace {

constexpr double kMaxStepAngle = kPi / 3.0;  // beyond this the step no longer descends
constexpr double kMinStepGain = 0.05;

struct ScanHit {
    std::uint64_t exponent;
    double angle_error;
};

// Candidate source for "the unused exponent whose power points closest to a
// given direction". Rational angles with a small cycle enumerate residue
// classes; everything else scans exponents linearly with an incrementally
// updated angle.
class PowerScanner {
public:
    PowerScanner(const UnitAngle& zeta, std::uint64_t N, std::uint64_t horizon)
        : zeta_(zeta), base_(N), horizon_(horizon) {
        if (zeta.exact() && zeta.den() <= 4096) cycle_ = zeta.den();
    }

    void set_horizon(std::uint64_t h) { horizon_ = h; }
    std::uint64_t horizon() const { return horizon_; }
    int cycle() const { return static_cast<int>(cycle_); }

    bool used(std::uint64_t n) const {
        return std::binary_search(used_.begin(), used_.end(), n);
    }
    void take(std::uint64_t n) { used_.insert(std::upper_bound(used_.begin(), used_.end(), n), n); }
    void release(std::uint64_t n) {
        auto it = std::lower_bound(used_.begin(), used_.end(), n);
        if (it != used_.end() && *it == n) used_.erase(it);
    }
    void reset() { used_.clear(); }

    /// First free exponent congruent to c modulo the cycle (rational only).
    std::optional<std::uint64_t> class_free(std::uint64_t c) const {
        std::uint64_t rem = base_ % cycle_;
        std::uint64_t n = base_ + (c >= rem ? c - rem : c + cycle_ - rem);
        while (n <= horizon_ && used(n)) n += cycle_;
        if (n > horizon_) return std::nullopt;
        return n;
    }

    std::optional<ScanHit> best_toward(double target_angle) const {
        if (cycle_ > 0) {
            std::optional<ScanHit> best;
            for (std::uint64_t c = 0; c < cycle_; ++c) {
                auto n = class_free(c);
                if (!n) continue;
                double ang = arg2pi(zeta_.power(c));
                double err = circ_dist(ang, target_angle);
                if (!best || err < best->angle_error ||
                    (err == best->angle_error && *n < best->exponent))
                    best = ScanHit{*n, err};
            }
            return best;
        }
        double step = kTwoPi * zeta_.turns();
        double ang = arg2pi(zeta_.power(base_));
        std::optional<ScanHit> best;
        auto skip = used_.begin();
        for (std::uint64_t n = base_; n <= horizon_; ++n) {
            while (skip != used_.end() && *skip < n) ++skip;
            bool taken = skip != used_.end() && *skip == n;
            if (!taken) {
                double err = circ_dist(ang, target_angle);
                if (!best || err < best->angle_error) best = ScanHit{n, err};
            }
            ang += step;
            if (ang >= kTwoPi) ang -= kTwoPi;
        }
        return best;
    }

    cplx power(std::uint64_t n) const { return zeta_.power(n); }

private:
    UnitAngle zeta_;
    std::uint64_t base_;
    std::uint64_t horizon_;
    std::uint64_t cycle_ = 0;
    std::vector<std::uint64_t> used_;
};

// One- and two-term closures for a residual with |r| <= 2. Returns the chosen
// exponents (already marked used in the scanner) or nullopt.
std::optional<std::vector<std::uint64_t>> close_residual(PowerScanner& sc, cplx r, double eps) {
    if (std::abs(r) < eps) return std::vector<std::uint64_t>{};

    std::optional<std::vector<std::uint64_t>> best;
    double best_err = eps;
    auto consider = [&](std::vector<std::uint64_t> exps, cplx val) {
        double err = std::abs(r - val);
        if (err < best_err) {
            best_err = err;
            best = std::move(exps);
        }
    };

    if (sc.cycle() > 0 && sc.cycle() <= 1024) {
        // Small cyclic group: exact search over direction pairs and singles.
        int q = sc.cycle();
        std::vector<cplx> dir(q);
        for (int c = 0; c < q; ++c) dir[c] = sc.power(static_cast<std::uint64_t>(c));
        for (int c = 0; c < q; ++c) {
            auto n = sc.class_free(static_cast<std::uint64_t>(c));
            if (n) consider({*n}, dir[c]);
        }
        for (int c1 = 0; c1 < q; ++c1) {
            auto n1 = sc.class_free(static_cast<std::uint64_t>(c1));
            if (!n1) continue;
            for (int c2 = c1; c2 < q; ++c2) {
                std::uint64_t m2;
                if (c2 == c1) {
                    auto probe = *n1 + static_cast<std::uint64_t>(q);
                    while (probe <= sc.horizon() && sc.used(probe))
                        probe += static_cast<std::uint64_t>(q);
                    if (probe > sc.horizon()) continue;
                    m2 = probe;
                } else {
                    auto n2 = sc.class_free(static_cast<std::uint64_t>(c2));
                    if (!n2) continue;
                    m2 = *n2;
                }
                consider({*n1, m2}, dir[c1] + dir[c2]);
            }
        }
    } else {
        double mod = std::min(std::abs(r), 2.0);
        double theta = std::acos(std::clamp(mod / 2.0, 0.0, 1.0));
        double base = arg2pi(r);
        // Single term.
        if (auto h = sc.best_toward(base)) consider({h->exponent}, sc.power(h->exponent));
        // Two terms, both orderings, then a couple of alternation rounds.
        for (double sgn : {1.0, -1.0}) {
            auto h1 = sc.best_toward(base + sgn * theta);
            if (!h1) continue;
            std::uint64_t n1 = h1->exponent;
            for (int round = 0; round < 3; ++round) {
                cplx u2 = r - sc.power(n1);
                sc.take(n1);
                auto h2 = sc.best_toward(arg2pi(u2));
                sc.release(n1);
                if (!h2) break;
                std::uint64_t n2 = h2->exponent;
                consider({n1, n2}, sc.power(n1) + sc.power(n2));
                // Re-solve the first term against the second.
                cplx u1 = r - sc.power(n2);
                sc.take(n2);
                auto h1b = sc.best_toward(arg2pi(u1));
                sc.release(n2);
                if (!h1b || h1b->exponent == n1) break;
                n1 = h1b->exponent;
            }
        }
    }
    if (best)
        for (std::uint64_t n : *best) sc.take(n);
    return best;
}

}  // namespace

ExponentSum unimodular_sum_approx(cplx w, const UnitAngle& zeta, std::uint64_t N, double eps,
                                  std::uint64_t horizon_cap, GreedyTrace* trace) {
    if (eps <= 0.0) throw std::invalid_argument("unimodular_sum_approx: eps must be positive");
    if (zeta.low_degree_root())
        throw InvalidZeta("unimodular_sum_approx: zeta must not be +-1, +-i, +-omega, +-omega^2");
    if (horizon_cap <= N) throw std::invalid_argument("unimodular_sum_approx: cap below min index");

    if (std::abs(w) < eps) {
        if (trace) *trace = GreedyTrace{};
        return ExponentSum{zeta, N, {}};
    }

    std::uint64_t h = std::min(horizon_cap, std::max(N + 2048, std::uint64_t{4096}));
    PowerScanner sc(zeta, N, h);

    while (true) {
        sc.reset();
        GreedyTrace local;
        local.horizon_used = sc.horizon();
        std::vector<std::uint64_t> exps;
        cplx r = w;
        bool need_growth = false;

        while (std::abs(r) > 1.0) {
            auto hit = sc.best_toward(arg2pi(r));
            if (!hit || hit->angle_error >= kMaxStepAngle) {
                need_growth = true;
                break;
            }
            double before = std::abs(r);
            cplx u = sc.power(hit->exponent);
            double after = std::abs(r - u);
            if (before - after < kMinStepGain) {
                need_growth = true;
                break;
            }
            sc.take(hit->exponent);
            exps.push_back(hit->exponent);
            r -= u;
            local.reduction_steps.push_back({hit->exponent, hit->angle_error, before, after});
        }

        if (!need_growth) {
            auto closure = close_residual(sc, r, eps);
            if (closure) {
                exps.insert(exps.end(), closure->begin(), closure->end());
                std::sort(exps.begin(), exps.end());
                ExponentSum out{zeta, N, std::move(exps)};
                if (std::abs(out.value() - w) < eps) {
                    if (trace) *trace = std::move(local);
                    return out;
                }
            }
            need_growth = true;
        }

        if (need_growth) {
            if (sc.horizon() >= horizon_cap)
                throw HorizonExhausted(
                    "unimodular_sum_approx: angular accuracy unreachable below the horizon cap");
            sc.set_horizon(std::min(horizon_cap, sc.horizon() * 2));
        }
    }
}

ExponentSum one_net_sum(cplx w, const UnitAngle& zeta, std::uint64_t N,
                        std::uint64_t horizon_cap) {
    if (zeta.real_axis())
        throw InvalidZeta("one_net_sum: zeta = +-1 has no planar net (values lie on a line)");
    if (auto root = lattice_root_of(zeta)) {
        LatticePoint p = lattice_round(w, *root);
        return expand_nonneg(p, N);
    }
    return unimodular_sum_approx(w, zeta, N, 0.99, horizon_cap);
}

}  // namespace lseries::nets
