#ifndef PADSUM_FQ_HPP
#define PADSUM_FQ_HPP

#include <cstdint>
#include <memory>
#include <numeric>
#include <vector>

#include "padsum/config.hpp"
#include "padsum/numeric.hpp"

namespace padsum {

namespace fpx {

// Minimal F_p[x] helpers on coefficient vectors (index = degree, trimmed).
using Poly = std::vector<std::int64_t>;

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    trim(r);
    return r;
}

inline Poly mod(Poly a, const Poly& f, std::int64_t p) {
    // f monic
    trim(a);
    while (a.size() >= f.size()) {
        std::int64_t c = a.back();
        std::size_t shift = a.size() - f.size();
        for (std::size_t i = 0; i < f.size(); ++i) {
            a[shift + i] = ((a[shift + i] - c * f[i]) % p + p) % p;
        }
        trim(a);
    }
    return a;
}

inline Poly powmod(Poly base, Int e, const Poly& f, std::int64_t p) {
    Poly r{1};
    base = mod(std::move(base), f, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mod(mul(r, base, p), f, p);
        base = mod(mul(base, base, p), f, p);
        e >>= 1;
    }
    return r;
}

inline Poly gcd(Poly a, Poly b, std::int64_t p) {
    trim(a); trim(b);
    while (!b.empty()) {
        // make b monic before reducing
        std::int64_t lc = b.back();
        if (lc != 1) {
            std::int64_t inv = 1, base = lc, e = p - 2;
            while (e) { if (e & 1) inv = inv * base % p; base = base * base % p; e >>= 1; }
            for (auto& c : b) c = c * inv % p;
        }
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Rabin irreducibility test for a monic polynomial of degree k over F_p.
inline bool is_irreducible(const Poly& f, std::int64_t p) {
    std::size_t k = f.size() - 1;
    if (k == 0) return false;
    Poly x{0, 1};
    // x^(p^k) == x mod f
    Poly xq = powmod(x, int_pow(p, static_cast<unsigned long>(k)), f, p);
    Poly diff = xq;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    trim(diff);
    if (!diff.empty()) return false;
    // gcd(x^(p^(k/l)) - x, f) == 1 for every prime l | k
    for (std::size_t l = 2; l <= k; ++l) {
        if (k % l != 0) continue;
        bool lprime = true;
        for (std::size_t d = 2; d * d <= l; ++d)
            if (l % d == 0) { lprime = false; break; }
        if (!lprime) continue;
        Poly xq2 = powmod(x, int_pow(p, static_cast<unsigned long>(k / l)), f, p);
        Poly d2 = xq2;
        d2.resize(std::max<std::size_t>(d2.size(), 2), 0);
        d2[1] = ((d2[1] - 1) % p + p) % p;
        trim(d2);
        Poly g = gcd(f, d2, p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace fpx

// Monic irreducible of degree k over F_p with the lexicographically
// smallest coefficient vector, scanning x^k + a_{k-1}x^{k-1} + ... + a_0
// by increasing value of sum a_i p^i. Deterministic across runs.
inline std::vector<std::int64_t> find_irreducible(std::int64_t p, int k) {
    if (k < 2) throw std::invalid_argument("find_irreducible needs degree >= 2");
    Int total = int_pow(p, static_cast<unsigned long>(k));
    for (Int code = 0; code < total; ++code) {
        fpx::Poly f(static_cast<std::size_t>(k) + 1, 0);
        Int rest = code;
        for (int i = 0; i < k; ++i) {
            f[static_cast<std::size_t>(i)] = mpz_fdiv_ui(rest.get_mpz_t(),
                                                         static_cast<unsigned long>(p));
            rest /= p;
        }
        f[static_cast<std::size_t>(k)] = 1;
        if (fpx::is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
}

// F_{p^k} with element codes in [0, q): code = sum c_i p^i for the residue
// class sum c_i x^i. Multiplication runs on discrete log tables.
class FqField {
  public:
    using Elem = std::uint32_t;

    FqField(std::int64_t p, int k) : p_(p), k_(k) {
        if (!is_prime_i64(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
        if (k < 1) throw std::invalid_argument("extension degree must be >= 1");
        Int q = int_pow(p, static_cast<unsigned long>(k));
        if (q > (1 << 22)) throw BudgetError("field with " + q.get_str() + " elements is too large");
        q_ = static_cast<std::uint32_t>(q.get_ui());
        if (k == 1) {
            modulus_ = {0, 1};  // x - 0 convention
        } else {
            modulus_ = find_irreducible(p, k);
        }
        build_tables();
    }

    std::int64_t p() const { return p_; }
    int k() const { return k_; }
    std::uint32_t q() const { return q_; }
    const std::vector<std::int64_t>& modulus() const { return modulus_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }

    Elem add(Elem a, Elem b) const {
        if (k_ == 1) {
            std::uint32_t s = a + b;
            return s >= q_ ? s - q_ : s;
        }
        Elem r = 0;
        std::uint32_t mul = 1;
        for (int i = 0; i < k_; ++i) {
            std::uint32_t da = a % p_, db = b % p_;
            std::uint32_t ds = da + db;
            if (ds >= p_) ds -= p_;
            r += ds * mul;
            a /= static_cast<std::uint32_t>(p_);
            b /= static_cast<std::uint32_t>(p_);
            mul *= static_cast<std::uint32_t>(p_);
        }
        return r;
    }

    Elem neg(Elem a) const {
        if (k_ == 1) return a == 0 ? 0 : q_ - a;
        Elem r = 0;
        std::uint32_t mul = 1;
        for (int i = 0; i < k_; ++i) {
            std::uint32_t d = a % p_;
            r += (d == 0 ? 0 : static_cast<std::uint32_t>(p_) - d) * mul;
            a /= static_cast<std::uint32_t>(p_);
            mul *= static_cast<std::uint32_t>(p_);
        }
        return r;
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        std::uint32_t e = log_[a] + log_[b];
        if (e >= q_ - 1) e -= q_ - 1;
        return exp_[e];
    }

    Elem inverse(Elem a) const {
        if (a == 0) throw NonInvertible("zero has no inverse");
        std::uint32_t e = log_[a];
        return exp_[e == 0 ? 0 : q_ - 1 - e];
    }

    Elem pow(Elem a, Int e) const {
        if (a == 0) {
            if (e == 0) return 1;
            if (e < 0) throw NonInvertible("zero has no inverse");
            return 0;
        }
        Int ord(q_ - 1);
        Int r = e % ord;
        if (r < 0) r += ord;
        std::uint64_t re = r.get_ui();
        return exp_[static_cast<std::uint32_t>((static_cast<std::uint64_t>(log_[a]) * re) %
                                               (q_ - 1))];
    }

    Elem frobenius(Elem a) const { return pow(a, Int(p_)); }

    // Tr(x) = x + x^p + ... + x^(p^(k-1)), an element of the prime field,
    // returned as an integer in [0, p).
    std::int64_t trace(Elem a) const { return trace_[a]; }

    bool eq(Elem a, Elem b) const { return a == b; }

    Elem from_int(const Int& v) const {
        std::int64_t r = static_cast<std::int64_t>(
            mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p_)));
        return static_cast<Elem>(r);
    }

    Elem from_rational(const Rat& c) const {
        Elem num = from_int(c.get_num());
        Elem den = from_int(c.get_den());
        if (den == 0)
            throw NonInvertible("denominator " + c.get_den().get_str() +
                                " is divisible by p=" + std::to_string(p_));
        return mul(num, inverse(den));
    }

    // Multiplicative generator used by the log tables.
    Elem generator() const { return exp_[1]; }

  private:
    void build_tables() {
        // polynomial multiplication used only while building the tables
        auto poly_of = [&](Elem a) {
            fpx::Poly f;
            while (a) { f.push_back(a % p_); a /= static_cast<std::uint32_t>(p_); }
            return f;
        };
        auto code_of = [&](const fpx::Poly& f) {
            Elem c = 0;
            for (std::size_t i = f.size(); i-- > 0;)
                c = c * static_cast<std::uint32_t>(p_) + static_cast<std::uint32_t>(f[i]);
            return c;
        };
        auto slow_mul = [&](Elem a, Elem b) {
            return code_of(fpx::mod(fpx::mul(poly_of(a), poly_of(b), p_), modulus_, p_));
        };

        // find a generator: order q-1 exactly
        std::vector<std::uint32_t> prime_factors;
        {
            std::uint32_t v = q_ - 1;
            for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= v; ++d)
                while (v % d == 0) {
                    if (prime_factors.empty() || prime_factors.back() != d)
                        prime_factors.push_back(d);
                    v /= d;
                }
            if (v > 1) prime_factors.push_back(v);
        }
        auto slow_pow = [&](Elem a, std::uint32_t e) {
            Elem r = 1;
            while (e) {
                if (e & 1) r = slow_mul(r, a);
                a = slow_mul(a, a);
                e >>= 1;
            }
            return r;
        };
        Elem g = 0;
        for (Elem cand = 1; cand < q_; ++cand) {
            bool ok = true;
            for (std::uint32_t l : prime_factors)
                if (slow_pow(cand, (q_ - 1) / l) == 1) { ok = false; break; }
            if (ok) { g = cand; break; }
        }

        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        Elem cur = 1;
        for (std::uint32_t i = 0; i < q_ - 1; ++i) {
            exp_[i] = cur;
            log_[cur] = i;
            cur = slow_mul(cur, g);
        }

        trace_.assign(q_, 0);
        for (Elem a = 0; a < q_; ++a) {
            Elem acc = 0, t = a;
            for (int i = 0; i < k_; ++i) {
                acc = add(acc, t);
                t = (t == 0) ? 0 : exp_[static_cast<std::uint32_t>(
                                       (static_cast<std::uint64_t>(log_[t]) * p_) % (q_ - 1))];
            }
            // the trace lies in the prime field, i.e. its code is < p
            if (acc >= static_cast<std::uint32_t>(p_))
                throw std::logic_error("trace left the prime field");
            trace_[a] = acc;
        }
    }

    std::int64_t p_;
    int k_;
    std::uint32_t q_;
    std::vector<std::int64_t> modulus_;
    std::vector<std::uint32_t> exp_, log_;
    std::vector<std::int64_t> trace_;
};

// Ring adapter so Polynomial::evaluate works over F_q.
struct FqRing {
    using Elem = FqField::Elem;
    const FqField* field;
    explicit FqRing(const FqField& f) : field(&f) {}
    Elem zero() const { return field->zero(); }
    Elem one() const { return field->one(); }
    Elem add(Elem a, Elem b) const { return field->add(a, b); }
    Elem mul(Elem a, Elem b) const { return field->mul(a, b); }
    Elem neg(Elem a) const { return field->neg(a); }
    bool eq(Elem a, Elem b) const { return a == b; }
    Elem from_int(const Int& v) const { return field->from_int(v); }
    Elem from_rational(const Rat& q) const { return field->from_rational(q); }
};

}  // namespace padsum

#endif
