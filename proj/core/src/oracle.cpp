#include "lseries/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace lseries::oracle {

namespace {

constexpr std::uint64_t kDirectBudget = 1ull << 26;
constexpr std::uint64_t kHalfBudget = 1ull << 22;

std::uint64_t space_size(std::size_t base, std::uint32_t len, std::uint64_t cap) {
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i < len; ++i) {
        if (n > cap / base + 1) return cap + 1;
        n *= base;
        if (n > cap) return cap + 1;
    }
    return n;
}

std::vector<cplx> tau_powers(cplx tau, std::uint32_t L) {
    std::vector<cplx> p(L);
    cplx acc{1.0, 0.0};
    for (std::uint32_t n = 0; n < L; ++n) {
        p[n] = acc;
        acc *= tau;
    }
    return p;
}

// Depth-first enumeration over positions [from, to); calls sink(value) at the
// leaves together with the digit stack. Visits in lexicographic digit order.
template <typename Sink>
void enumerate(const std::vector<cplx>& el, const std::vector<cplx>& pow, std::uint32_t from,
               std::uint32_t to, std::vector<std::uint8_t>& digits, cplx value, Sink&& sink) {
    if (from == to) {
        sink(value, digits);
        return;
    }
    for (std::uint8_t d = 0; d < el.size(); ++d) {
        digits[from] = d;
        enumerate(el, pow, from + 1, to, digits, value + el[d] * pow[from],
                  std::forward<Sink>(sink));
    }
}

SparseAssignment digits_to_assignment(const CoefficientSet& lambda,
                                      const std::vector<std::uint8_t>& digits) {
    SparseAssignment a;
    for (std::size_t n = 0; n < digits.size(); ++n)
        a.append(n, lambda.elements()[digits[n]]);
    return a;
}

}  // namespace

OracleResult best_prefix_error_direct(const CoefficientSet& lambda, cplx tau, cplx w,
                                      std::uint32_t L) {
    if (std::abs(tau) >= 1.0) throw std::invalid_argument("oracle: |tau| must be < 1");
    std::uint64_t total = space_size(lambda.size(), L, kDirectBudget);
    if (total > kDirectBudget) throw BudgetExceeded("oracle: direct enumeration over budget");

    auto pow = tau_powers(tau, L);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> digits(L), best_digits(L);
    enumerate(lambda.elements(), pow, 0, L, digits, cplx{0.0, 0.0},
              [&](cplx value, const std::vector<std::uint8_t>& d) {
                  double err = std::abs(value - w);
                  if (err < best) {
                      best = err;
                      best_digits = d;
                  }
              });
    if (L == 0) best = std::abs(w);
    return {best, digits_to_assignment(lambda, best_digits), total};
}

OracleResult best_prefix_error_mim(const CoefficientSet& lambda, cplx tau, cplx w,
                                   std::uint32_t L) {
    if (std::abs(tau) >= 1.0) throw std::invalid_argument("oracle: |tau| must be < 1");
    std::uint32_t l1 = L / 2;
    std::uint32_t l2 = L - l1;
    std::uint64_t n1 = space_size(lambda.size(), l1, kHalfBudget);
    std::uint64_t n2 = space_size(lambda.size(), l2, kHalfBudget);
    if (n1 > kHalfBudget || n2 > kHalfBudget)
        throw BudgetExceeded("oracle: meet-in-the-middle halves over budget");

    auto pow = tau_powers(tau, L);

    struct Half {
        cplx value;
        std::uint64_t code;  // digits packed little-endian in base |set|
    };
    auto build = [&](std::uint32_t from, std::uint32_t to) {
        std::vector<Half> out;
        out.reserve(static_cast<std::size_t>(space_size(lambda.size(), to - from, kHalfBudget)));
        std::vector<std::uint8_t> digits(to);
        std::uint64_t base = lambda.size();
        enumerate(lambda.elements(), pow, from, to, digits, cplx{0.0, 0.0},
                  [&](cplx value, const std::vector<std::uint8_t>& d) {
                      std::uint64_t code = 0;
                      for (std::uint32_t i = to; i-- > from;) code = code * base + d[i];
                      out.push_back({value, code});
                  });
        return out;
    };
    auto low = build(0, l1);
    auto high = build(l1, L);

    std::sort(low.begin(), low.end(), [](const Half& a, const Half& b) {
        return a.value.real() < b.value.real();
    });

    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_lo = 0, best_hi = 0;
    for (const Half& h : high) {
        cplx t = w - h.value;
        // Sweep the band |Re - Re(t)| <= best around the insertion point.
        auto it = std::lower_bound(low.begin(), low.end(), t.real() - best,
                                   [](const Half& a, double x) { return a.value.real() < x; });
        for (; it != low.end() && it->value.real() <= t.real() + best; ++it) {
            double err = std::abs(it->value - t);
            if (err < best) {
                best = err;
                best_lo = it->code;
                best_hi = h.code;
            }
        }
    }
    if (L == 0) best = std::abs(w);

    std::vector<std::uint8_t> digits(L);
    std::uint64_t base = lambda.size();
    for (std::uint32_t i = 0; i < l1; ++i) {
        digits[i] = static_cast<std::uint8_t>(best_lo % base);
        best_lo /= base;
    }
    for (std::uint32_t i = l1; i < L; ++i) {
        digits[i] = static_cast<std::uint8_t>(best_hi % base);
        best_hi /= base;
    }
    return {best, digits_to_assignment(lambda, digits),
            space_size(lambda.size(), L, ~0ull >> 1)};
}

OracleResult best_prefix_error(const CoefficientSet& lambda, cplx tau, cplx w, std::uint32_t L) {
    if (space_size(lambda.size(), L, kDirectBudget) <= kDirectBudget)
        return best_prefix_error_direct(lambda, tau, w, L);
    return best_prefix_error_mim(lambda, tau, w, L);
}

double net_coverage(const std::vector<cplx>& points, double eps, const Disk& region) {
    if (eps <= 0.0) throw std::invalid_argument("net_coverage: eps must be positive");
    const int res = 100;
    std::uint64_t inside = 0, covered = 0;
    for (int i = 0; i < res; ++i) {
        for (int j = 0; j < res; ++j) {
            cplx g = region.center + cplx{(2.0 * (i + 0.5) / res - 1.0) * region.radius,
                                          (2.0 * (j + 0.5) / res - 1.0) * region.radius};
            if (!region.contains(g)) continue;
            ++inside;
            for (cplx p : points) {
                if (std::abs(p - g) < eps) {
                    ++covered;
                    break;
                }
            }
        }
    }
    return inside == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(inside);
}

}  // namespace lseries::oracle
