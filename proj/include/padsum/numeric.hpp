#ifndef PADSUM_NUMERIC_HPP
#define PADSUM_NUMERIC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace padsum {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int int_pow(std::int64_t base, unsigned long e) {
    return int_pow(Int(base), e);
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Rat b = e < 0 ? Rat(1) / base : base;
    unsigned long k = e < 0 ? -static_cast<unsigned long>(e) : e;
    Rat r(1);
    while (k) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

// p-adic valuation of a nonzero integer; caller guards x != 0.
inline unsigned long valuation(const Int& x, const Int& p) {
    Int q;
    return mpz_remove(q.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline double rat_to_double(const Rat& q) { return q.get_d(); }

inline std::int64_t to_int64(const Int& x) {
    if (!x.fits_slong_p())
        throw std::overflow_error("integer does not fit in 64 bits: " + x.get_str());
    return static_cast<std::int64_t>(x.get_si());
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_i64(std::int64_t v) {
    if (v < 2) return false;
    for (std::int64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (v == q) return true;
        if (v % q == 0) return false;
    }
    auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t mod) -> std::uint64_t {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % mod);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t mod) -> std::uint64_t {
        std::uint64_t r = 1 % mod;
        a %= mod;
        while (e) {
            if (e & 1) r = mulmod(r, a, mod);
            a = mulmod(a, a, mod);
            e >>= 1;
        }
        return r;
    };
    std::uint64_t n = static_cast<std::uint64_t>(v);
    std::uint64_t d = n - 1;
    int s = 0;
    while (!(d & 1)) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace padsum

#endif
