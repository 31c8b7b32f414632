#pragma once

#include <optional>
#include <vector>

#include "lseries/core.hpp"

namespace lseries::nets {

/// The six unimodular generators of the Gaussian / Eisenstein lattices.
enum class LatticeRoot { I, MinusI, Omega, MinusOmega, OmegaSq, MinusOmegaSq };

std::optional<LatticeRoot> lattice_root_of(const UnitAngle& zeta);
UnitAngle angle_of(LatticeRoot root);
cplx value_of(LatticeRoot root);
/// Multiplicative order (3, 4 or 6; always divides 12).
int order_of(LatticeRoot root);

/// Exact element of Z[i] or Z[omega], stored as integer coordinates over the
/// basis (1, i) respectively (1, omega). No floating error, ever.
struct RingElem {
    std::int64_t x = 0;
    std::int64_t y = 0;
    bool eisenstein = false;

    RingElem operator+(const RingElem& o) const;
    bool operator==(const RingElem&) const = default;
    cplx value() const;
};

/// zeta^n as an exact ring element (n arbitrary).
RingElem unit_power(LatticeRoot root, std::uint64_t n);
/// a + b*zeta as an exact ring element.
RingElem lattice_value(LatticeRoot root, std::int64_t a, std::int64_t b);

struct LatticePoint {
    std::int64_t a = 0;
    std::int64_t b = 0;
    LatticeRoot zeta = LatticeRoot::I;
    cplx value() const;
};

/// Finite sum of distinct powers zeta^n with n >= min_index.
struct ExponentSum {
    UnitAngle zeta;
    std::uint64_t min_index = 0;
    std::vector<std::uint64_t> exponents;  // strictly increasing

    cplx value() const;
    /// Exact value when zeta is a lattice root.
    RingElem exact_value() const;
};

/// Per-step record of the greedy phase-matching loop, for property audits.
struct GreedyTrace {
    struct Step {
        std::uint64_t exponent;
        double angle_error;  // radians between zeta^n and the residual direction
        double before;       // |residual| before the step
        double after;        // |residual| after subtracting zeta^n
    };
    std::vector<Step> reduction_steps;
    std::uint64_t horizon_used = 0;
};

/// Greedy approximation of w by a sum of distinct powers of zeta with
/// exponents >= N: unit steps toward the residual while |residual| > 1, then
/// a one- or two-term closure at angles +-acos(|r|/2) around arg r.
///
/// zeta must not be one of +-1, +-i, +-omega, +-omega^2 when its angle is
/// rational (InvalidZeta). Throws HorizonExhausted when no exponent below
/// horizon_cap reaches the needed angular accuracy.
ExponentSum unimodular_sum_approx(cplx w, const UnitAngle& zeta, std::uint64_t N, double eps,
                                  std::uint64_t horizon_cap, GreedyTrace* trace = nullptr);

/// Integer pair (a, b) with |w - (a + b*zeta)| at most the lattice covering
/// radius (sqrt(2)/2 Gaussian, 1/sqrt(3) Eisenstein). Ties broken toward
/// smaller |a|+|b|, then smaller a, then smaller b.
LatticePoint lattice_round(cplx w, LatticeRoot zeta);

/// Distinct exponents >= N whose power sum equals a + b*zeta exactly in the
/// ring: a and b are expanded through the 11-term identity for -1 and
/// duplicates are lifted by multiples of 12.
ExponentSum expand_nonneg(const LatticePoint& p, std::uint64_t N);

/// 1-net driver: lattice rounding + exact expansion on the six excluded
/// roots, greedy approximation with eps = 0.99 everywhere else. zeta = +-1 is
/// rejected (the values lie on a line).
ExponentSum one_net_sum(cplx w, const UnitAngle& zeta, std::uint64_t N,
                        std::uint64_t horizon_cap = (1u << 20));

}  // namespace lseries::nets
