#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lseries/core.hpp"

namespace lseries::geometry {

/// Four coefficients whose arguments advance around the circle with every
/// successive gap in [0, pi); the engine of the modulus-descent argument.
struct DescentQuadruple {
    std::array<cplx, 4> elements;
    double max_arg_gap = 0.0;  // largest of the four gaps, < pi

    /// Gap arg(elements[(j+1)%4] / elements[j]) taken in [0, 2*pi).
    double gap(int j) const;
    bool satisfies_invariants() const;
};

struct LambdaClass {
    enum class Kind { ContainedInLine, ContainedInHalfPlane, Spanning };
    Kind kind = Kind::Spanning;

    // Line case: the set lies on {line_offset + t * line_direction : t real}.
    cplx line_direction{1.0, 0.0};
    cplx line_offset{0.0, 0.0};

    // Set whenever some closed half-plane {alpha <= arg z <= alpha + pi}
    // contains the set (also reported for line-contained sets).
    std::optional<double> half_plane_alpha;

    // Elements substantiating the call: the two points spanning the line, or
    // the element whose argument realizes the supporting angle.
    std::vector<cplx> witness;
};

/// Exact classification: collinearity first, then a convex-cone test on the
/// arguments of the nonzero elements (the supporting line passes through 0).
LambdaClass classify_lambda(const CoefficientSet& lambda);

/// Constructs a DescentQuadruple from a spanning set, following the argument
/// chain beta = max{arg : Im > 0}. Throws NotSpanning.
DescentQuadruple find_descent_quadruple(const CoefficientSet& lambda);

/// Radius R such that every |z| > R admits an element with |z + lambda| < |z|.
/// Computed as the exact sup over directions of the triangle bound
/// |lambda| / (2 cos(angular error)), inflated by 1%, then verified on 10^4
/// sampled directions of the circle |z| = R. Throws NotSpanning or
/// VerificationFailed.
double descent_radius(const CoefficientSet& lambda);

/// Assigns a coefficient to every listed index so that each partial sum stays
/// within R* = descent_radius + sup_modulus: free slots take the element of
/// minimal modulus, slots with |partial| > R take the best descent step.
/// Returns the assignment and R*.
std::pair<SparseAssignment, double> bounded_tail_schedule(const CoefficientSet& lambda, cplx z,
                                                          const std::vector<std::uint64_t>& indices);

/// bounded_tail_schedule against a precomputed radius (engines reuse R across
/// retries; results are identical).
std::pair<SparseAssignment, double> bounded_tail_schedule_with_radius(
    const CoefficientSet& lambda, cplx z, const std::vector<std::uint64_t>& indices,
    double descent_r);

}  // namespace lseries::geometry
