#ifndef PADSUM_RINGS_HPP
#define PADSUM_RINGS_HPP

#include <cstdint>
#include <string>

#include "padsum/config.hpp"
#include "padsum/numeric.hpp"

namespace padsum {

// Coefficient-ring descriptors for Polynomial::evaluate. A ring supplies
// Elem, zero/one, add/mul/neg, eq, from_int and from_rational; the latter
// throws NonInvertible when the denominator has no inverse.

struct IntRing {
    using Elem = Int;
    Elem zero() const { return Int(0); }
    Elem one() const { return Int(1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem from_int(const Int& v) const { return v; }
    Elem from_rational(const Rat& q) const {
        if (q.get_den() != 1)
            throw NonInvertible("denominator " + q.get_den().get_str() +
                                " is not invertible over Z");
        return q.get_num();
    }
};

struct RatRing {
    using Elem = Rat;
    Elem zero() const { return Rat(0); }
    Elem one() const { return Rat(1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem from_int(const Int& v) const { return Rat(v); }
    Elem from_rational(const Rat& q) const { return q; }
};

// Z/M with M < 2^62 so products fit in unsigned 128-bit intermediates.
class ZnRing {
  public:
    using Elem = std::uint64_t;

    explicit ZnRing(std::uint64_t modulus) : m_(modulus) {
        if (modulus < 2 || modulus >= (std::uint64_t{1} << 62))
            throw std::invalid_argument("modulus out of supported range");
    }

    std::uint64_t modulus() const { return m_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % m_; }
    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        if (s >= m_) s -= m_;
        return s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + m_ - b; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % m_);
    }
    Elem neg(Elem a) const { return a == 0 ? 0 : m_ - a; }
    bool eq(Elem a, Elem b) const { return a == b; }

    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    Elem inverse(Elem a) const {
        // Extended gcd over the integers.
        std::int64_t t = 0, newt = 1;
        std::int64_t r = static_cast<std::int64_t>(m_), newr = static_cast<std::int64_t>(a % m_);
        while (newr != 0) {
            std::int64_t q = r / newr;
            std::int64_t tmp = t - q * newt;
            t = newt; newt = tmp;
            tmp = r - q * newr;
            r = newr; newr = tmp;
        }
        if (r != 1)
            throw NonInvertible(std::to_string(a) + " is not invertible mod " +
                                std::to_string(m_));
        return t < 0 ? static_cast<Elem>(t + static_cast<std::int64_t>(m_))
                     : static_cast<Elem>(t);
    }

    Elem from_int(const Int& v) const {
        Int r = v % Int(static_cast<unsigned long>(m_));
        if (r < 0) r += Int(static_cast<unsigned long>(m_));
        return static_cast<Elem>(r.get_ui());
    }

    Elem from_rational(const Rat& q) const {
        Elem num = from_int(q.get_num());
        Elem den = from_int(q.get_den());
        return mul(num, inverse(den));
    }

  private:
    std::uint64_t m_;
};

}  // namespace padsum

#endif
