#include <doctest.h>

#include <random>

#include "lseries/engines.hpp"
#include "lseries/serialization.hpp"

using namespace lseries;
using namespace lseries::engines;

namespace {

CoefficientSet binary() { return CoefficientSet({{0, 0}, {1, 0}}); }
CoefficientSet binary_i() { return CoefficientSet({{0, 0}, {1, 0}, {0, 1}}); }
CoefficientSet fourth_roots() { return CoefficientSet({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }

cplx random_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), kTwoPi * u(rng));
}

PrefixConstraint random_prefix(std::mt19937_64& rng, const CoefficientSet& lam, std::size_t n) {
    PrefixConstraint p;
    std::uniform_int_distribution<std::size_t> pick(0, lam.size() - 1);
    for (std::size_t i = 0; i < n; ++i) p.values.push_back(lam.elements()[pick(rng)]);
    return p;
}

}  // namespace

TEST_CASE("select_tau feasibility") {
    auto zeta = UnitAngle::floating(1.0 / 8.0);
    RegionSpec region({Disk{0.9 * zeta.value(), 0.2}}, zeta);
    auto choice = select_tau(region, 0.2, ModulusTarget::none());
    CHECK(region.contains(choice.tau));
    CHECK(std::abs(choice.tau - zeta.value()) < 0.2);
    CHECK_FALSE(choice.power.has_value());
}

TEST_CASE("select_tau exact modulus target solves the smallest admissible power") {
    auto zeta = UnitAngle::rational(1, 2);
    auto region = RegionSpec::default_disk(zeta);
    auto choice = select_tau(region, 0.1, ModulusTarget::exact(0.5));
    REQUIRE(choice.power.has_value());
    CHECK(*choice.power == 7);  // 0.5^(1/7) ~ 0.9057 is the first radius above 0.9
    CHECK(std::abs(choice.tau - cplx{-std::pow(0.5, 1.0 / 7.0), 0.0}) < 1e-12);
    double p = std::pow(std::abs(choice.tau), 7);
    CHECK(p == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("select_tau interval target lands a power in the annulus") {
    auto zeta = UnitAngle::floating(0.3);
    RegionSpec region({Disk{0.995 * zeta.value(), 0.02}}, zeta);
    auto choice = select_tau(region, 0.02, ModulusTarget::interval(0.2, 1.0 / 3.0));
    REQUIRE(choice.power.has_value());
    double rho = std::abs(choice.tau);
    CHECK(rho > 0.97);
    double p = std::pow(rho, static_cast<double>(*choice.power));
    CHECK(p > 0.2);
    CHECK(p < 1.0 / 3.0);
}

TEST_CASE("select_tau guards") {
    auto zeta = UnitAngle::rational(1, 2);
    // Wedge bounded away from -1: nothing to find.
    RegionSpec thin({Wedge{-0.5, 0.0, kPi, 0.05}}, zeta);
    CHECK_THROWS_AS(select_tau(thin, 0.3, ModulusTarget::none()), RegionTooThin);
    auto region = RegionSpec::default_disk(zeta);
    CHECK_THROWS_AS(select_tau(region, 0.5, ModulusTarget::none()), std::invalid_argument);
    CHECK_THROWS_AS(select_tau(region, 0.1, ModulusTarget::exact(1.5)), std::invalid_argument);
}

TEST_CASE("generic engine: trivial and constructed targets") {
    auto lam = binary();
    auto zeta = UnitAngle::floating(std::sqrt(2.0) / 10.0);
    auto region = RegionSpec::default_disk(zeta);

    SUBCASE("zero target with empty prefix emits the empty certificate") {
        auto res = approximate_generic(lam, region, {}, {0, 0}, 0.1);
        CHECK(res.certificate.assignment.empty());
        CHECK(res.certificate.achieved_error == 0.0);
        CHECK(res.certificate.tail_bound == 0.0);
        CHECK(verify_certificate(lam, res.certificate, region).valid);
    }
    SUBCASE("generic target verifies with margin") {
        auto res = approximate_generic(lam, region, {}, {2, 1}, 0.05);
        auto rep = verify_certificate(lam, res.certificate, region);
        CHECK(rep.valid);
        CHECK(rep.margin > 0.0);
        CHECK(rep.tau_in_region);
    }
    SUBCASE("values beyond the prefix live in the normalized pair") {
        std::mt19937_64 rng(2);
        auto prefix = random_prefix(rng, lam, 8);
        auto res = approximate_generic(lam, region, prefix, {1.5, -0.5}, 0.1);
        REQUIRE(res.certificate.assignment.size() >= prefix.values.size());
        for (std::size_t i = 0; i < prefix.values.size(); ++i) {
            CHECK(res.certificate.assignment.terms()[i].index == i);
            CHECK(res.certificate.assignment.terms()[i].value == prefix.values[i]);
        }
        for (std::size_t i = prefix.values.size(); i < res.certificate.assignment.size(); ++i)
            CHECK(res.certificate.assignment.terms()[i].value == cplx{1, 0});
    }
    SUBCASE("rejects accumulation at the real axis") {
        auto bad = RegionSpec::default_disk(UnitAngle::rational(0, 1));
        CHECK_THROWS_AS(approximate_generic(lam, bad, {}, {1, 0}, 0.1), std::invalid_argument);
    }
}

TEST_CASE("generic engine: root-of-unity branch") {
    auto lam = binary();
    auto zeta = UnitAngle::rational(1, 4);
    auto region = RegionSpec::default_disk(zeta);
    auto res = approximate_generic(lam, region, {}, {4, 0}, 0.3);
    CHECK(res.diagnostics.branch == "lattice-annulus");
    REQUIRE(res.diagnostics.power.has_value());
    auto rep = verify_certificate(lam, res.certificate, region);
    CHECK(rep.valid);
    // the annulus constraint on the recorded (tau, M)
    double p = std::pow(std::abs(res.certificate.tau),
                        static_cast<double>(*res.diagnostics.power));
    CHECK(p > res.diagnostics.annulus_lo);
    CHECK(p < res.diagnostics.annulus_hi);
    CHECK(res.diagnostics.annulus_lo == doctest::Approx(0.15 / 5.0));
    CHECK(res.diagnostics.annulus_hi == doctest::Approx(0.15 / 3.0));
}

TEST_CASE("generic engine with a set missing zero fills the gaps") {
    CoefficientSet lam({{1, 0}, {-1, 0}});
    auto zeta = UnitAngle::floating(std::sqrt(2.0) / 10.0);
    auto region = RegionSpec::default_disk(zeta);
    auto res = approximate_generic(lam, region, {}, {1, 0}, 0.4);
    auto rep = verify_certificate(lam, res.certificate, region);
    CHECK(rep.valid);
    // gap-free: every index up to the top one is listed
    CHECK(res.certificate.assignment.size() == *res.certificate.assignment.max_index() + 1);
    CHECK(res.certificate.tail_bound > 0.0);
}

TEST_CASE("minus-one engine") {
    auto lam = binary_i();
    auto zeta = UnitAngle::rational(1, 2);
    auto region = RegionSpec::default_disk(zeta);

    SUBCASE("zero target, empty prefix") {
        auto res = approximate_near_minus_one(lam, region, {}, {0, 0}, 0.1);
        CHECK(verify_certificate(lam, res.certificate, region).valid);
        CHECK(res.certificate.assignment.empty());
    }
    SUBCASE("generic target") {
        auto res = approximate_near_minus_one(lam, region, {}, {3, -2}, 0.1);
        auto rep = verify_certificate(lam, res.certificate, region);
        CHECK(rep.valid);
        CHECK(rep.margin > 0.0);
        // |tau|^M hits the engine's lattice scale to high accuracy
        double p = std::pow(std::abs(res.certificate.tau),
                            static_cast<double>(*res.diagnostics.power));
        CHECK(std::abs(p / res.diagnostics.epsilon0 - 1.0) <= 1e-9);
    }
    SUBCASE("real-line sets are out of hypothesis") {
        CHECK_THROWS_AS(approximate_near_minus_one(binary(), region, {}, {1, 0}, 0.2),
                        NotApplicable);
        try {
            approximate_near_minus_one(binary(), region, {}, {1, 0}, 0.2);
        } catch (const NotApplicable& e) {
            CHECK(std::string(e.what()) == "line-contained");
        }
    }
    SUBCASE("prefix respected") {
        std::mt19937_64 rng(3);
        auto prefix = random_prefix(rng, lam, 5);
        auto res = approximate_near_minus_one(lam, region, prefix, {-1, 1}, 0.15);
        for (std::size_t i = 0; i < prefix.values.size(); ++i) {
            CHECK(res.certificate.assignment.terms()[i].index == i);
            CHECK(res.certificate.assignment.terms()[i].value == prefix.values[i]);
        }
        CHECK(verify_certificate(lam, res.certificate, region).valid);
    }
}

TEST_CASE("plus-one engine") {
    auto lam = fourth_roots();
    auto zeta = UnitAngle::rational(0, 1);
    auto region = RegionSpec::default_disk(zeta);

    SUBCASE("zero target still runs the full pipeline") {
        auto res = approximate_near_plus_one(lam, region, {}, {0, 0}, 0.5);
        auto rep = verify_certificate(lam, res.certificate, region);
        CHECK(rep.valid);
        CHECK(res.diagnostics.branch == "minkowski-block");
    }
    SUBCASE("generic target with schedule audit") {
        auto res = approximate_near_plus_one(lam, region, {}, {-5, 2}, 0.2);
        auto rep = verify_certificate(lam, res.certificate, region);
        CHECK(rep.valid);
        CHECK(rep.margin > 0.0);
        // every scheduled partial sum within R*
        cplx partial{0, 0};
        cplx tau = res.certificate.tau;
        cplx zpow{1, 0};
        std::uint64_t prev = 0;
        bool first = true;
        for (const auto& t : res.diagnostics.scheduled.terms()) {
            zpow = first ? cpow_u64(tau, t.index) : zpow * cpow_u64(tau, t.index - prev);
            first = false;
            prev = t.index;
            partial += t.value * zpow;
            CHECK(std::abs(partial) <= res.diagnostics.schedule_bound + 1e-9);
        }
        // every emitted value is a set member
        for (const auto& t : res.certificate.assignment.terms())
            CHECK(lam.contains(t.value, 0.0));
    }
    SUBCASE("half-plane sets are out of hypothesis") {
        CHECK_THROWS_AS(approximate_near_plus_one(binary_i(), region, {}, {1, 0}, 0.2),
                        NotApplicable);
        try {
            approximate_near_plus_one(binary_i(), region, {}, {1, 0}, 0.2);
        } catch (const NotApplicable& e) {
            CHECK(std::string(e.what()) == "half-plane-contained");
        }
    }
    SUBCASE("spanning set containing zero skips the dense tail") {
        CoefficientSet lam0({{0, 0}, {1, 0}, {-0.5, 1}, {-0.5, -1}});
        auto res = approximate_near_plus_one(lam0, region, {}, {2, -1}, 0.4);
        CHECK(verify_certificate(lam0, res.certificate, region).valid);
        CHECK(res.certificate.tail_bound == 0.0);
    }
}

TEST_CASE("minus-one engine with a set missing zero fills the gaps") {
    CoefficientSet lam({{1, 0}, {1, 1}, {2, 0}});
    auto region = RegionSpec::default_disk(UnitAngle::rational(1, 2));
    auto res = approximate_near_minus_one(lam, region, {}, {0.5, 0.0}, 0.5);
    auto rep = verify_certificate(lam, res.certificate, region);
    CHECK(rep.valid);
    CHECK(res.certificate.assignment.size() == *res.certificate.assignment.max_index() + 1);
    CHECK(res.certificate.tail_bound > 0.0);
}

TEST_CASE("generic engine through a degree-four root of unity") {
    // e(1/5) is admissible for the greedy branch; the direction grid is
    // coarse, so only modest accuracies are reachable.
    auto lam = binary();
    auto zeta = UnitAngle::rational(1, 5);
    auto region = RegionSpec::default_disk(zeta);
    auto res = approximate_generic(lam, region, {}, {1.0, 0.5}, 0.9);
    CHECK(res.diagnostics.branch == "greedy-powers");
    CHECK(verify_certificate(lam, res.certificate, region).valid);
}

TEST_CASE("engine dispatch follows the accumulation point") {
    CHECK(approximate(binary(), RegionSpec::default_disk(UnitAngle::floating(0.1414)), {},
                      {1, 0}, 0.3)
              .diagnostics.branch == "greedy-powers");
    CHECK(approximate(binary_i(), RegionSpec::default_disk(UnitAngle::rational(1, 2)), {},
                      {1, 0}, 0.3)
              .diagnostics.branch == "parity-lattice");
    CHECK(approximate(fourth_roots(), RegionSpec::default_disk(UnitAngle::rational(0, 1)), {},
                      {1, 0}, 0.3)
              .diagnostics.branch == "minkowski-block");
}

TEST_CASE("randomized end-to-end certificates verify") {
    std::mt19937_64 rng(41);
    auto zeta1 = UnitAngle::floating(std::sqrt(2.0) / 10.0);
    auto region1 = RegionSpec::default_disk(zeta1);
    auto lam1 = binary();
    for (int i = 0; i < 30; ++i) {
        cplx w = random_in_disk(rng, 6.0);
        auto res = approximate_generic(lam1, region1, random_prefix(rng, lam1, i % 5), w, 0.1);
        CHECK(verify_certificate(lam1, res.certificate, region1).valid);
    }
    auto region2 = RegionSpec::default_disk(UnitAngle::rational(1, 2));
    auto lam2 = binary_i();
    for (int i = 0; i < 30; ++i) {
        cplx w = random_in_disk(rng, 4.0);
        auto res = approximate_near_minus_one(lam2, region2, {}, w, 0.2);
        CHECK(verify_certificate(lam2, res.certificate, region2).valid);
    }
    auto region3 = RegionSpec::default_disk(UnitAngle::rational(0, 1));
    auto lam3 = fourth_roots();
    for (int i = 0; i < 30; ++i) {
        cplx w = random_in_disk(rng, 4.0);
        auto res = approximate_near_plus_one(lam3, region3, {}, w, 0.25);
        CHECK(verify_certificate(lam3, res.certificate, region3).valid);
    }
}

TEST_CASE("engines are deterministic") {
    auto lam = binary();
    auto region = RegionSpec::default_disk(UnitAngle::floating(std::sqrt(2.0) / 10.0));
    PrefixConstraint prefix;
    prefix.values = {{1, 0}, {0, 0}, {1, 0}};
    auto a = approximate_generic(lam, region, prefix, {2, 1}, 0.05);
    auto b = approximate_generic(lam, region, prefix, {2, 1}, 0.05);
    CHECK(to_json(a.certificate) == to_json(b.certificate));

    auto lam3 = fourth_roots();
    auto region3 = RegionSpec::default_disk(UnitAngle::rational(0, 1));
    auto c = approximate_near_plus_one(lam3, region3, {}, {1, 2}, 0.3);
    auto d = approximate_near_plus_one(lam3, region3, {}, {1, 2}, 0.3);
    CHECK(to_json(c.certificate) == to_json(d.certificate));
}

TEST_CASE("monotone feasibility over an eps ladder") {
    auto lam = binary();
    auto region = RegionSpec::default_disk(UnitAngle::floating(std::sqrt(2.0) / 10.0));
    cplx w{3.0, -2.0};
    bool succeeded = false;
    for (double eps : {0.02, 0.05, 0.1, 0.3, 0.8}) {
        bool ok = true;
        try {
            auto res = approximate_generic(lam, region, {}, w, eps);
            ok = verify_certificate(lam, res.certificate, region).valid;
        } catch (const std::exception&) {
            ok = false;
        }
        if (succeeded) CHECK(ok);  // no non-monotone failures up the ladder
        succeeded = succeeded || ok;
    }
    CHECK(succeeded);
}

TEST_CASE("verify_certificate mutation detection") {
    auto lam = binary();
    auto region = RegionSpec::default_disk(UnitAngle::floating(std::sqrt(2.0) / 10.0));
    auto res = approximate_generic(lam, region, {}, {1.5, 0.5}, 0.1);
    REQUIRE(verify_certificate(lam, res.certificate, region).valid);

    SUBCASE("foreign coefficient value") {
        Certificate bad = res.certificate;
        auto terms = bad.assignment.terms();
        REQUIRE_FALSE(terms.empty());
        terms.front().value = {0.5, 0.0};
        bad.assignment = SparseAssignment(terms);
        bad.achieved_error = std::abs(eval_prefix(bad.assignment, bad.tau) - bad.target);
        auto rep = verify_certificate(lam, bad, region);
        CHECK_FALSE(rep.valid);
        CHECK(rep.reason == "value-not-in-set");
    }
    SUBCASE("epsilon below the achieved error") {
        Certificate bad = res.certificate;
        bad.epsilon = bad.achieved_error / 2.0;
        auto rep = verify_certificate(lam, bad, region);
        CHECK_FALSE(rep.valid);
        CHECK(rep.margin < 0.0);
    }
    SUBCASE("tau dragged outside the region") {
        Certificate bad = res.certificate;
        bad.tau = {0.1, 0.1};
        bad.achieved_error = std::abs(eval_prefix(bad.assignment, bad.tau) - bad.target);
        auto rep = verify_certificate(lam, bad, region);
        CHECK_FALSE(rep.valid);
        CHECK_FALSE(rep.tau_in_region);
    }
    SUBCASE("tampered stored error") {
        Certificate bad = res.certificate;
        bad.achieved_error = 0.0;
        if (res.certificate.achieved_error > 1e-10) {
            auto rep = verify_certificate(lam, bad, region);
            CHECK_FALSE(rep.valid);
            CHECK(rep.reason == "stored-error-mismatch");
        }
    }
    SUBCASE("gap without a zero element") {
        CoefficientSet lam2({{1, 0}, {-1, 0}});
        Certificate gap;
        gap.tau = {0.5, 0.0};
        gap.assignment = SparseAssignment({{0, {1, 0}}, {2, {-1, 0}}});
        gap.target = eval_prefix(gap.assignment, gap.tau);
        gap.epsilon = 10.0;
        gap.achieved_error = 0.0;
        gap.tail_bound = tail_bound(1.0, 0.5, 3);
        auto rep = verify_certificate(
            lam2, gap, RegionSpec({Disk{{0.5, 0.0}, 0.2}}, UnitAngle::floating(0.9)));
        CHECK_FALSE(rep.valid);
        CHECK(rep.reason == "gap-without-zero-element");
    }
}
