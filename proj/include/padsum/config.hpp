#ifndef PADSUM_CONFIG_HPP
#define PADSUM_CONFIG_HPP

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace padsum {

inline constexpr const char* kVersion = "0.1.0";

// Thrown when an enumeration or lift would exceed the configured budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a ring element has no inverse (e.g. p divides a coefficient
// denominator).
struct NonInvertible : std::runtime_error {
    explicit NonInvertible(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::invalid_argument {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& what)
        : std::invalid_argument(what + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

struct RunConfig {
    // Max points per enumeration.
    std::int64_t budget = 10'000'000;
    // Max entries held by the list-based Hensel lift.
    std::int64_t hensel_list_budget = 10'000'000;
    // Mantissa bits aimed at by the floating side (long double on x86-64).
    int precision_bits = 64;
    // Truncation order for series.
    int truncation_order = 8;
    // Degree bound for denominator reconstruction.
    int reconstruction_dmax = 3;
    // Consecutive exact zeros that declare eventual vanishing.
    int vanishing_window = 3;
    // Slope tolerance when comparing a fitted decay exponent to a bound.
    double slope_tolerance = 0.25;
    // Worker threads for per-prime / per-level work items.
    int jobs = 1;

    void validate() const {
        if (budget < 1000) throw std::invalid_argument("budget must be >= 1000");
        if (budget > (std::int64_t{1} << 33))
            throw std::invalid_argument("budget above 2^33 is not supported");
        if (truncation_order < 1) throw std::invalid_argument("truncation order must be >= 1");
        if (reconstruction_dmax < 0) throw std::invalid_argument("dmax must be >= 0");
        if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    }

    static RunConfig with_env_overrides() {
        RunConfig c;
        if (const char* s = std::getenv("PADSUM_BUDGET")) c.budget = std::atoll(s);
        return c;
    }
};

}  // namespace padsum

#endif
