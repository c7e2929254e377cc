#ifndef PADSUM_CYCLOTOMIC_HPP
#define PADSUM_CYCLOTOMIC_HPP

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>

#include "padsum/config.hpp"
#include "padsum/numeric.hpp"

namespace padsum {

// Elements of Z[zeta] for zeta a primitive p^m-th root of unity, reduced to
// the power basis zeta^j, 0 <= j < phi(p^m) = p^(m-1)(p-1), using
// Phi_{p^m}(x) = sum_i x^(i p^(m-1)). A sum is exactly zero iff every
// reduced coefficient vanishes.
class CycloSum {
  public:
    CycloSum(std::int64_t p, int m) : p_(p), m_(m) {
        Int ord = int_pow(p, static_cast<unsigned long>(m));
        if (ord >= (Int(1) << 62)) throw BudgetError("cyclotomic order too large");
        order_ = static_cast<std::int64_t>(ord.get_ui());
        sub_ = order_ / p_;       // p^(m-1)
        phi_ = sub_ * (p_ - 1);
    }

    std::int64_t p() const { return p_; }
    int m() const { return m_; }
    std::int64_t order() const { return order_; }

    void add(std::int64_t exponent, const Int& count) {
        if (count == 0) return;
        std::int64_t j = exponent % order_;
        if (j < 0) j += order_;
        if (j < phi_) {
            bump(j, count);
        } else {
            // zeta^(phi + t) = -sum_{i<p-1} zeta^(i p^(m-1) + t)
            std::int64_t t = j - phi_;
            for (std::int64_t i = 0; i < p_ - 1; ++i) bump(i * sub_ + t, -count);
        }
    }

    void add_sum(const CycloSum& other, const Int& scale = Int(1),
                 std::int64_t exponent_scale = 1) {
        if (other.p_ != p_) throw std::invalid_argument("root-of-unity mismatch");
        for (const auto& [j, c] : other.c_) add(j * exponent_scale, c * scale);
    }

    bool is_zero() const { return c_.empty(); }

    // Rational iff supported on zeta^0 after reduction.
    std::optional<Int> rational_value() const {
        if (c_.empty()) return Int(0);
        if (c_.size() == 1 && c_.begin()->first == 0) return c_.begin()->second;
        return std::nullopt;
    }

    // Galois action zeta -> zeta^k for k prime to p.
    CycloSum galois(std::int64_t k) const {
        Int g;
        mpz_gcd(g.get_mpz_t(), Int(k).get_mpz_t(), Int(p_).get_mpz_t());
        if (g != 1) throw std::invalid_argument("k must be prime to p");
        CycloSum out(p_, m_);
        for (const auto& [j, c] : c_) out.add(j * (k % order_), c);
        return out;
    }

    const std::map<std::int64_t, Int>& coeffs() const { return c_; }

    Int l1_norm() const {
        Int s = 0;
        for (const auto& [j, c] : c_) s += abs(c);
        return s;
    }

    struct FloatValue {
        double re = 0, im = 0, magnitude = 0, error = 0;
    };

    // Floating evaluation of scale * sum c_j zeta^j with a tracked absolute
    // error bound: per-entry table error plus accumulation rounding, summed
    // against the L1 mass, as coarse but safe upper bounds.
    FloatValue evaluate(const Rat& scale) const {
        const long double tau = 6.283185307179586476925286766559L;
        long double re = 0, im = 0, l1 = 0;
        for (const auto& [j, c] : c_) {
            long double w = fabsl(mpz_get_d(c.get_mpz_t()));
            long double ang = tau * static_cast<long double>(j) / static_cast<long double>(order_);
            long double cv = mpz_get_d(c.get_mpz_t());
            re += cv * cosl(ang);
            im += cv * sinl(ang);
            l1 += w;
        }
        long double s = fabsl(mpq_get_d(scale.get_mpq_t()));
        FloatValue out;
        out.re = static_cast<double>(re * mpq_get_d(scale.get_mpq_t()));
        out.im = static_cast<double>(im * mpq_get_d(scale.get_mpq_t()));
        out.magnitude = static_cast<double>(hypotl(re, im) * s);
        // per entry: libm + argument reduction in long double, plus the
        // double-precision conversion of the (possibly huge) coefficient;
        // per accumulation step: one rounding against the running L1 mass
        long double per_entry = 16.0L * LDBL_EPSILON + 4.0L * DBL_EPSILON;
        std::size_t nterms = c_.size() + 2;
        out.error = static_cast<double>(
            l1 * s * (per_entry + 2.0L * LDBL_EPSILON * static_cast<long double>(nterms)));
        return out;
    }

  private:
    void bump(std::int64_t j, const Int& v) {
        auto [it, fresh] = c_.try_emplace(j, 0);
        it->second += v;
        if (it->second == 0) c_.erase(it);
    }

    std::int64_t p_;
    int m_;
    std::int64_t order_, sub_, phi_;
    std::map<std::int64_t, Int> c_;
};

}  // namespace padsum

#endif
