#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "lseries/angle.hpp"
#include "lseries/types.hpp"

namespace lseries {

/// Finite set of admissible power-series coefficients, with the maximum
/// modulus cached. Exact duplicates in the input are dropped.
class CoefficientSet {
public:
    explicit CoefficientSet(std::vector<cplx> elements);

    const std::vector<cplx>& elements() const { return elements_; }
    double sup_modulus() const { return sup_modulus_; }
    std::size_t size() const { return elements_.size(); }

    bool contains(cplx v, double tol = 1e-12) const;
    /// True when 0 is an element, exactly. Used to decide whether a truncated
    /// assignment can be completed by zeros (tail contribution exactly 0).
    bool has_zero() const;
    /// Element of minimal modulus; ties broken by first occurrence.
    cplx min_modulus_element() const;

    /// Enforces the standing assumption of every approximation construction:
    /// at least two distinct coefficients.
    void require_two_distinct() const;

private:
    std::vector<cplx> elements_;
    double sup_modulus_ = 0.0;
};

/// Coefficient choices for finitely many indices, strictly increasing.
/// Indices not listed are unconstrained; whether they mean "coefficient 0"
/// depends on the set (see verify_certificate).
class SparseAssignment {
public:
    struct Term {
        std::uint64_t index;
        cplx value;
        bool operator==(const Term&) const = default;
    };

    SparseAssignment() = default;
    explicit SparseAssignment(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    std::optional<std::uint64_t> max_index() const;

    /// Appends a term; its index must exceed every present index.
    void append(std::uint64_t index, cplx value);

    /// Sorts a batch of terms and validates strict index growth.
    static SparseAssignment from_unsorted(std::vector<Term> terms);

private:
    std::vector<Term> terms_;
};

/// Evaluates the listed terms at z (|z| < 1): sum of value * z^index,
/// accumulated Horner-style over the index gaps.
cplx eval_prefix(const SparseAssignment& assignment, cplx z);

/// Rigorous bound on |sum_{n >= start_index} c_n r^n| for any coefficients
/// with |c_n| <= sup_modulus: sup * r^start / (1 - r), inflated by 1 + 1e-12.
double tail_bound(double sup_modulus, double r, std::uint64_t start_index);

/// The affine change of coefficients mu = (lambda - shift) / scale and its
/// inverse lambda = shift + scale * mu.
struct AffineTransform {
    cplx scale{1.0, 0.0};
    cplx shift{0.0, 0.0};

    cplx forward(cplx lambda) const { return (lambda - shift) / scale; }
    cplx backward(cplx mu) const { return shift + scale * mu; }
    bool identity() const { return scale == cplx{1.0, 0.0} && shift == cplx{0.0, 0.0}; }
};

/// Maps the set through (lambda - a)/(b - a), so a |-> 0 and b |-> 1, and
/// returns the transform that undoes it. Requires a, b in the set, a != b.
std::pair<CoefficientSet, AffineTransform> normalize_affine(const CoefficientSet& lambda,
                                                            cplx a, cplx b);

/// Target seen from normalized coordinates: a certificate for the returned
/// value under the normalized set at tau back-transports to one for w under
/// the original set at tau. w' = (w - shift/(1-tau)) / scale.
cplx transport_target(cplx w, cplx tau, const AffineTransform& t);

/// Dense back-transport of a normalized assignment: every index 0..upto gets
/// shift + scale * (listed normalized value, or 0).
SparseAssignment back_transport_dense(const SparseAssignment& normalized,
                                      const AffineTransform& t, std::uint64_t upto);

struct Disk {
    cplx center;
    double radius;
    bool contains(cplx z) const { return std::abs(z - center) < radius; }
};

/// Open set {re_lo < Re z < re_hi} cut to an angular sector around arg_center.
struct Wedge {
    double re_lo;
    double re_hi;
    double arg_center;
    double half_angle;
    bool contains(cplx z) const;
};

using RegionPiece = std::variant<Disk, Wedge>;

/// Finite union of open pieces, always taken inside the open unit disk, with
/// a designated accumulation point on the circle.
class RegionSpec {
public:
    RegionSpec(std::vector<RegionPiece> pieces, UnitAngle accumulation_point);

    const std::vector<RegionPiece>& pieces() const { return pieces_; }
    const UnitAngle& accumulation_point() const { return accumulation_; }

    bool contains(cplx z) const;

    /// Sampled check of the accumulation invariant: the region has points
    /// within 10^-k of the accumulation point for k = 1..max_k.
    bool check_accumulation(int max_k = 6) const;

    /// Measured sup of |z| over the region (grid estimate, capped at 1).
    double sup_abs() const;

    /// Disk(0.95 zeta, 0.1) cut to the unit disk; the default engine region.
    static RegionSpec default_disk(UnitAngle zeta);

private:
    std::vector<RegionPiece> pieces_;
    UnitAngle accumulation_;
};

/// The unit of truth this library produces: a finite, independently
/// re-checkable witness that some admissible series comes within epsilon of
/// the target at tau.
struct Certificate {
    cplx tau;
    SparseAssignment assignment;
    cplx target;
    double epsilon = 0.0;
    double achieved_error = 0.0;
    double tail_bound = 0.0;
};

}  // namespace lseries
