// Acceptance suite: one criterion per invocation (argument 1..10), or all
// when no argument is given. Prints one [PASS]/[FAIL] line per criterion and
// exits nonzero on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lseries/counterexamples.hpp"
#include "lseries/engines.hpp"
#include "lseries/geometry.hpp"
#include "lseries/nets.hpp"
#include "lseries/oracle.hpp"

using namespace lseries;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

cplx random_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), kTwoPi * u(rng));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Generic-branch soundness: 100 random targets in the 10-disk, eps in
//    {0.1, 0.01}, binary set, zeta = e(sqrt(2)/10), 8-term random prefixes;
//    every certificate verifies with positive margin, under 60 s total.
Outcome criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    CoefficientSet lam({{0, 0}, {1, 0}});
    auto zeta = UnitAngle::floating(std::sqrt(2.0) / 10.0);
    auto region = RegionSpec::default_disk(zeta);
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> bit(0, 1);
    double worst_margin = 1e300;
    for (int i = 0; i < 100; ++i) {
        cplx w = random_in_disk(rng, 10.0);
        double eps = (i % 2 == 0) ? 0.1 : 0.01;
        engines::PrefixConstraint prefix;
        for (int n = 0; n < 8; ++n)
            prefix.values.push_back({static_cast<double>(bit(rng)), 0.0});
        auto res = engines::approximate_generic(lam, region, prefix, w, eps);
        auto rep = engines::verify_certificate(lam, res.certificate, region);
        if (!rep.valid || !(rep.margin > 0.0)) {
            std::ostringstream os;
            os << "run " << i << " invalid (reason " << rep.reason << ", margin " << rep.margin
               << ")";
            return {false, os.str()};
        }
        worst_margin = std::min(worst_margin, rep.margin);
    }
    double el = seconds_since(t0);
    std::ostringstream os;
    os << "100/100 verified, worst margin " << worst_margin << ", " << el << " s";
    return {el < 60.0, os.str()};
}

// 2. Root-of-unity branch: 50 random targets in the 5-disk at eps 0.3 over
//    zeta in {i, omega}; certificates verify and the recorded (tau, M) lands
//    strictly inside the working annulus (eps_net/5, eps_net/3).
Outcome criterion2() {
    CoefficientSet lam({{0, 0}, {1, 0}});
    std::mt19937_64 rng(1002);
    int run = 0;
    for (auto zeta : {UnitAngle::rational(1, 4), UnitAngle::rational(1, 3)}) {
        auto region = RegionSpec::default_disk(zeta);
        for (int i = 0; i < 25; ++i, ++run) {
            cplx w = random_in_disk(rng, 5.0);
            auto res = engines::approximate_generic(lam, region, {}, w, 0.3);
            auto rep = engines::verify_certificate(lam, res.certificate, region);
            if (!rep.valid) return {false, "run " + std::to_string(run) + " failed verification"};
            if (!res.diagnostics.power)
                return {false, "run " + std::to_string(run) + " recorded no power"};
            double p = std::pow(std::abs(res.certificate.tau),
                                static_cast<double>(*res.diagnostics.power));
            double lo = res.diagnostics.net_epsilon / 5.0;
            double hi = res.diagnostics.net_epsilon / 3.0;
            if (!(p > lo && p < hi))
                return {false, "run " + std::to_string(run) + " annulus violated"};
        }
    }
    return {true, "50/50 verified, annulus constraint holds at every recorded (tau, M)"};
}

// 3. Accumulation at -1: 50 random targets in the 5-disk at eps 0.2 over
//    {0, 1, i}; certificates verify and |tau|^M matches the engine's
//    epsilon_0 to 1e-9 relative.
Outcome criterion3() {
    CoefficientSet lam({{0, 0}, {1, 0}, {0, 1}});
    auto region = RegionSpec::default_disk(UnitAngle::rational(1, 2));
    std::mt19937_64 rng(1003);
    for (int i = 0; i < 50; ++i) {
        cplx w = random_in_disk(rng, 5.0);
        auto res = engines::approximate_near_minus_one(lam, region, {}, w, 0.2);
        auto rep = engines::verify_certificate(lam, res.certificate, region);
        if (!rep.valid) return {false, "run " + std::to_string(i) + " failed verification"};
        double p = std::pow(std::abs(res.certificate.tau),
                            static_cast<double>(*res.diagnostics.power));
        if (std::abs(p / res.diagnostics.epsilon0 - 1.0) > 1e-9)
            return {false, "run " + std::to_string(i) + " |tau|^M misses epsilon0"};
    }
    return {true, "50/50 verified, |tau|^M within 1e-9 of epsilon0 everywhere"};
}

// 4. Accumulation at +1: 50 random targets in the 5-disk at eps 0.2 over the
//    fourth roots; certificates verify and every scheduled partial sum stays
//    within R* + 1e-9.
Outcome criterion4() {
    CoefficientSet lam({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    auto region = RegionSpec::default_disk(UnitAngle::rational(0, 1));
    std::mt19937_64 rng(1004);
    for (int i = 0; i < 50; ++i) {
        cplx w = random_in_disk(rng, 5.0);
        auto res = engines::approximate_near_plus_one(lam, region, {}, w, 0.2);
        auto rep = engines::verify_certificate(lam, res.certificate, region);
        if (!rep.valid) return {false, "run " + std::to_string(i) + " failed verification"};
        cplx tau = res.certificate.tau;
        cplx partial{0, 0}, zpow{1, 0};
        std::uint64_t prev = 0;
        bool first = true;
        for (const auto& t : res.diagnostics.scheduled.terms()) {
            zpow = first ? cpow_u64(tau, t.index) : zpow * cpow_u64(tau, t.index - prev);
            first = false;
            prev = t.index;
            partial += t.value * zpow;
            if (std::abs(partial) > res.diagnostics.schedule_bound + 1e-9)
                return {false, "run " + std::to_string(i) + " partial sum escaped R*"};
        }
    }
    return {true, "50/50 verified, all scheduled partial sums within R* + 1e-9"};
}

// 5. Exactness of the nonnegative expansion over both integer rings, and the
//    11-term identity for -1 at all six excluded roots.
Outcome criterion5() {
    using namespace nets;
    const LatticeRoot roots[] = {LatticeRoot::I,       LatticeRoot::MinusI,
                                 LatticeRoot::Omega,   LatticeRoot::MinusOmega,
                                 LatticeRoot::OmegaSq, LatticeRoot::MinusOmegaSq};
    for (auto root : roots) {
        RingElem acc = lattice_value(root, 0, 0);
        for (std::uint64_t j = 1; j <= 11; ++j) acc = acc + unit_power(root, j);
        if (!(acc == lattice_value(root, -1, 0)))
            return {false, "11-term identity failed"};
    }
    std::mt19937_64 rng(1005);
    std::uniform_int_distribution<std::int64_t> coord(-20, 20);
    std::uniform_int_distribution<std::uint64_t> floor_d(0, 30);
    for (int i = 0; i < 1000; ++i) {
        auto root = roots[static_cast<std::size_t>(i) % 6];
        LatticePoint p{coord(rng), coord(rng), root};
        auto e = expand_nonneg(p, floor_d(rng));
        if (!(e.exact_value() == lattice_value(root, p.a, p.b)))
            return {false, "expansion not exact at trial " + std::to_string(i)};
        for (std::size_t j = 1; j < e.exponents.size(); ++j)
            if (e.exponents[j - 1] >= e.exponents[j]) return {false, "duplicate exponent"};
    }
    return {true, "1000/1000 expansions exact in Z[i] / Z[omega]; -1 identity holds at all six roots"};
}

// 6. Evasion at -1: binary set, wedges k in {2,3,5}, 1e4 sequences x 1e2
//    points, prefix 512: max(Im + tail) <= 3 + 1e-9, under 120 s.
Outcome criterion6() {
    auto t0 = std::chrono::steady_clock::now();
    CoefficientSet lam({{0, 0}, {1, 0}});
    double worst = -1e300;
    for (int k : {2, 3, 5}) {
        auto wedge = cex::build_wedge(k, cex::WedgeSide::AtMinusOne);
        auto rep = cex::imag_bound_check(lam, wedge, 10000, 100, 512, 600 + k);
        if (!rep.pass) return {false, "k=" + std::to_string(k) + " exceeded the bound"};
        worst = std::max(worst, rep.extreme);
    }
    double el = seconds_since(t0);
    std::ostringstream os;
    os << "max(Im prefix + tail) = " << worst << " <= 3 + 1e-9 across k in {2,3,5}, " << el
       << " s";
    return {el < 120.0, os.str()};
}

// 7. Evasion at +1 under the derived constant: {0,1,i}, wedges k in {2,3}:
//    min(Re - tail) >= -3 - 1e-9.
Outcome criterion7() {
    CoefficientSet lam({{0, 0}, {1, 0}, {0, 1}});
    double worst = 1e300;
    for (int k : {2, 3}) {
        auto wedge = cex::build_wedge(k, cex::WedgeSide::AtPlusOne);
        auto rep = cex::real_bound_check(lam, wedge, 10000, 100, 512, 700 + k);
        if (!rep.pass) return {false, "k=" + std::to_string(k) + " fell below the bound"};
        worst = std::min(worst, rep.extreme);
    }
    std::ostringstream os;
    os << "min(Re prefix - tail) = " << worst << " >= -3 - 1e-9 across k in {2,3}";
    return {true, os.str()};
}

// 8. Oracle dominance: 20 generic-branch instances capped at exponent 15, so
//    the certificate support fits the oracle window [0,16); the engine error
//    never beats the exact optimum, and the two oracle routes agree to 1e-12.
Outcome criterion8() {
    CoefficientSet lam({{0, 0}, {1, 0}});
    auto zeta = UnitAngle::floating(std::sqrt(2.0) / 10.0);
    auto region = RegionSpec::default_disk(zeta);
    engines::EngineParams params;
    params.horizon_cap = 15;
    std::mt19937_64 rng(1008);
    int done = 0, attempts = 0;
    while (done < 20 && attempts < 500) {
        ++attempts;
        cplx w = random_in_disk(rng, 1.2);
        engines::EngineResult res;
        try {
            res = engines::approximate_generic(lam, region, {}, w, 0.35, params);
        } catch (const HorizonExhausted&) {
            continue;
        } catch (const RegionTooThin&) {
            continue;
        }
        if (auto top = res.certificate.assignment.max_index(); top && *top > 15)
            return {false, "engine exceeded the exponent budget"};
        auto direct = oracle::best_prefix_error_direct(lam, res.certificate.tau, w, 16);
        auto mim = oracle::best_prefix_error_mim(lam, res.certificate.tau, w, 16);
        if (std::abs(direct.best_error - mim.best_error) > 1e-12)
            return {false, "oracle routes disagree"};
        if (res.certificate.achieved_error < direct.best_error - 1e-12)
            return {false, "engine beat the exhaustive optimum (impossible)"};
        ++done;
    }
    if (done < 20) return {false, "only " + std::to_string(done) + " instances settled"};
    std::ostringstream os;
    os << "20 instances: engine error >= oracle optimum, direct == meet-in-the-middle to 1e-12 ("
       << attempts << " attempts)";
    return {true, os.str()};
}

// 9. Closed-form regression at 20 points |z| <= 0.9: the truncated odd
//    series matches z/(1-z^2), and its shift matches -1/(2(1+z)), within the
//    geometric tail bound (plus the double-evaluation roundoff floor).
Outcome criterion9() {
    for (int i = 0; i < 20; ++i) {
        double r = 0.9 * (i + 1) / 20.0;
        cplx z = std::polar(r, kTwoPi * i / 20.0 + 0.05);
        const std::uint64_t L = 80;
        SparseAssignment odd;
        std::vector<SparseAssignment::Term> shifted;
        for (std::uint64_t n = 0; n <= L; ++n) {
            if (n % 2 == 1) odd.append(n, {1.0, 0.0});
            shifted.push_back({n, cplx{n % 2 == 1 ? 0.5 : -0.5, 0.0}});
        }
        auto [f, fs] = cex::odd_series_closed_forms(z);
        double floor9 = 1e-12 * (1.0 + std::abs(f));
        if (std::abs(eval_prefix(odd, z) - f) > tail_bound(1.0, r, L + 1) + floor9)
            return {false, "odd series regression failed at point " + std::to_string(i)};
        if (std::abs(eval_prefix(SparseAssignment(shifted), z) - fs) >
            tail_bound(0.5, r, L + 1) + floor9)
            return {false, "shifted series regression failed at point " + std::to_string(i)};
    }
    return {true, "20/20 sample points within the truncation bounds"};
}

// 10. Descent radius for the fourth roots: the sampled 1e4-direction check
//     holds at |z| = R and R <= 1.02/sqrt(2).
Outcome criterion10() {
    CoefficientSet lam({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    double R = geometry::descent_radius(lam);  // throws if its own sampling fails
    if (!(R <= 1.02 / std::sqrt(2.0)))
        return {false, "R = " + std::to_string(R) + " exceeds 1.02/sqrt(2)"};
    for (int t = 0; t < 10000; ++t) {
        cplx z = std::polar(R, kTwoPi * t / 10000.0);
        bool ok = false;
        for (cplx v : lam.elements())
            if (std::abs(z + v) < std::abs(z)) {
                ok = true;
                break;
            }
        if (!ok) return {false, "sampled direction admits no descent"};
    }
    std::ostringstream os;
    os << "R = " << R << " <= " << 1.02 / std::sqrt(2.0) << ", 10^4-direction check holds";
    return {true, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"generic-branch certificate soundness", criterion1},
        {"root-of-unity branch soundness and annulus", criterion2},
        {"minus-one engine soundness and |tau|^M = eps0", criterion3},
        {"plus-one engine soundness and R* partial sums", criterion4},
        {"exact lattice expansion in Z[i] / Z[omega]", criterion5},
        {"imaginary evasion bound at -1", criterion6},
        {"real evasion bound at +1", criterion7},
        {"oracle dominance and meet-in-the-middle agreement", criterion8},
        {"closed-form series regression", criterion9},
        {"descent radius for the fourth roots", criterion10},
    };

    int lo = 1, hi = static_cast<int>(criteria.size());
    if (argc > 1) {
        lo = hi = std::atoi(argv[1]);
        if (lo < 1 || lo > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [1..%zu]\n", argv[0], criteria.size());
            return 2;
        }
    }
    bool all_pass = true;
    for (int i = lo; i <= hi; ++i) {
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(i - 1)].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %d: %s — %s\n", o.pass ? "PASS" : "FAIL", i,
                    criteria[static_cast<std::size_t>(i - 1)].first, o.detail.c_str());
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
