#pragma once

#include <cstdint>
#include <iosfwd>

#include "lseries/types.hpp"

namespace lseries {

/// A point of the unit circle stored as a fraction of a full turn,
/// zeta = exp(2*pi*i*turns).
///
/// Rational turns are kept as a reduced fraction so roots of unity are
/// recognized exactly; floating turns are treated as irrational throughout.
/// Powers of exact angles are computed with modular integer arithmetic, so
/// zeta^n keeps full precision for arbitrarily large n.
class UnitAngle {
public:
    static UnitAngle rational(std::int64_t num, std::int64_t den);
    static UnitAngle floating(double turns);

    bool exact() const { return exact_; }
    double turns() const;
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    cplx value() const { return power(1); }
    cplx power(std::uint64_t n) const;

    /// True for the roots of unity of degree <= 2 over the rationals:
    /// +-1, +-i, +-omega, +-omega^2 (reduced denominator in {1,2,3,4,6}).
    bool low_degree_root() const;
    /// True for +-1.
    bool real_axis() const;
    /// True for the six roots spanning the Gaussian / Eisenstein lattices.
    bool lattice_root() const { return low_degree_root() && !real_axis(); }

    bool operator==(const UnitAngle& o) const;

    friend std::ostream& operator<<(std::ostream& os, const UnitAngle& a);

private:
    bool exact_ = false;
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    double turns_ = 0.0;
};

}  // namespace lseries
