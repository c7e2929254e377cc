#ifndef PADSUM_MODULUS_HPP
#define PADSUM_MODULUS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "padsum/config.hpp"
#include "padsum/numeric.hpp"

namespace padsum {

// The ring Z/p^m.
struct ModulusSpec {
    std::int64_t p;
    int m;
    Int modulus;  // p^m

    ModulusSpec(std::int64_t p_, int m_) : p(p_), m(m_) {
        if (!is_prime_i64(p_)) throw std::invalid_argument(std::to_string(p_) + " is not prime");
        if (m_ < 1) throw std::invalid_argument("level m must be >= 1");
        modulus = int_pow(p_, static_cast<unsigned long>(m_));
    }

    bool fits_machine() const { return modulus < Int(1) << 62; }
    std::uint64_t modulus_u64() const {
        if (!fits_machine()) throw std::overflow_error("modulus " + modulus.get_str() + " too large");
        return modulus.get_ui();
    }
};

// One coordinate of an enumeration domain: the arithmetic progression
// start + step*i, 0 <= i < count.
struct CoordRange {
    std::uint64_t start = 0;
    std::uint64_t step = 1;
    std::int64_t count = 0;
};

inline Int domain_size(const std::vector<CoordRange>& domain) {
    Int total = 1;
    for (const auto& c : domain) total *= Int(c.count);
    return total;
}

inline void check_budget(const Int& points, std::int64_t budget, const char* what) {
    if (points > Int(budget))
        throw BudgetError(std::string(what) + ": " + points.get_str() +
                          " points exceed budget " + std::to_string(budget));
}

// Streams all tuples of a product of coordinate ranges in odometer order:
// the first coordinate varies slowest, the last fastest. Tuples with a
// first-coordinate index in [first_lo, first_hi) only, which is the
// partitioning hook for parallel workers.
class TupleStream {
  public:
    TupleStream(std::vector<CoordRange> domain, std::int64_t first_lo, std::int64_t first_hi)
        : domain_(std::move(domain)), idx_(domain_.size(), 0), point_(domain_.size(), 0),
          first_hi_(first_hi) {
        idx_[0] = first_lo;
        done_ = first_lo >= first_hi;
        for (std::size_t i = 1; i < domain_.size() && !done_; ++i)
            if (domain_[i].count == 0) done_ = true;
        if (!done_)
            for (std::size_t i = 0; i < domain_.size(); ++i)
                point_[i] = domain_[i].start + domain_[i].step * idx_[i];
    }

    explicit TupleStream(std::vector<CoordRange> domain)
        : TupleStream(domain, 0, domain.empty() ? 0 : domain[0].count) {}

    bool done() const { return done_; }
    const std::vector<std::uint64_t>& point() const { return point_; }

    void next() {
        for (std::size_t i = domain_.size(); i-- > 0;) {
            ++idx_[i];
            std::int64_t limit = (i == 0) ? first_hi_ : domain_[i].count;
            if (idx_[i] < limit) {
                point_[i] = domain_[i].start + domain_[i].step * static_cast<std::uint64_t>(idx_[i]);
                return;
            }
            if (i == 0) { done_ = true; return; }
            idx_[i] = 0;
            point_[i] = domain_[i].start;
        }
        done_ = true;  // zero-dimensional domain
    }

  private:
    std::vector<CoordRange> domain_;
    std::vector<std::int64_t> idx_;
    std::vector<std::uint64_t> point_;
    std::int64_t first_hi_;
    bool done_ = false;
};

}  // namespace padsum

#endif
