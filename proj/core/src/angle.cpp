#include "lseries/angle.hpp"

#include <numeric>
#include <ostream>

namespace lseries {

UnitAngle UnitAngle::rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("UnitAngle: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    // keeps (n mod den) * (num mod den) inside 64 bits for any power
    if (den > (std::int64_t{1} << 31))
        throw std::invalid_argument("UnitAngle: denominator too large for exact power arithmetic");
    num %= den;
    if (num < 0) num += den;
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    UnitAngle a;
    a.exact_ = true;
    a.num_ = num / g;
    a.den_ = den / g;
    a.turns_ = static_cast<double>(a.num_) / static_cast<double>(a.den_);
    return a;
}

UnitAngle UnitAngle::floating(double turns) {
    if (!std::isfinite(turns)) throw std::invalid_argument("UnitAngle: non-finite turns");
    turns = turns - std::floor(turns);
    UnitAngle a;
    a.exact_ = false;
    a.turns_ = turns;
    return a;
}

double UnitAngle::turns() const { return turns_; }

namespace {

// Exact values for the quadrant and sextant points, where sin/cos of the
// rounded double angle would carry avoidable error.
bool special_value(std::int64_t num, std::int64_t den, cplx& out) {
    const double h = std::sqrt(3.0) / 2.0;
    if (den == 1) {
        out = {1.0, 0.0};
        return true;
    }
    if (den == 2) {
        out = {-1.0, 0.0};
        return true;
    }
    if (den == 4) {
        out = (num == 1) ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
        return true;
    }
    if (den == 3) {
        out = (num == 1) ? cplx{-0.5, h} : cplx{-0.5, -h};
        return true;
    }
    if (den == 6) {
        out = (num == 1) ? cplx{0.5, h} : cplx{0.5, -h};
        return true;
    }
    return false;
}

}  // namespace

cplx UnitAngle::power(std::uint64_t n) const {
    if (exact_) {
        const auto den = static_cast<std::uint64_t>(den_);
        // (n mod q) * (p mod q) stays below 2^63 for den <= ~3e9.
        std::uint64_t r = (n % den) * (static_cast<std::uint64_t>(num_) % den) % den;
        cplx v;
        std::int64_t g = std::gcd(static_cast<std::int64_t>(r), den_);
        if (g == 0) g = den_;
        if (special_value(static_cast<std::int64_t>(r) / g, den_ / g, v)) return v;
        double t = static_cast<double>(r) / static_cast<double>(den_);
        return std::polar(1.0, kTwoPi * t);
    }
    double t = std::fmod(static_cast<double>(n) * turns_, 1.0);
    return std::polar(1.0, kTwoPi * t);
}

bool UnitAngle::low_degree_root() const {
    return exact_ && (den_ == 1 || den_ == 2 || den_ == 3 || den_ == 4 || den_ == 6);
}

bool UnitAngle::real_axis() const { return exact_ && (den_ == 1 || den_ == 2); }

bool UnitAngle::operator==(const UnitAngle& o) const {
    if (exact_ != o.exact_) return false;
    if (exact_) return num_ == o.num_ && den_ == o.den_;
    return turns_ == o.turns_;
}

std::ostream& operator<<(std::ostream& os, const UnitAngle& a) {
    if (a.exact_) return os << "turns:" << a.num_ << "/" << a.den_;
    return os << "turns:" << a.turns_;
}

}  // namespace lseries
