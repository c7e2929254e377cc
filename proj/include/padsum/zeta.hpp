#ifndef PADSUM_ZETA_HPP
#define PADSUM_ZETA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padsum/config.hpp"
#include "padsum/counting.hpp"
#include "padsum/numeric.hpp"
#include "padsum/polynomial.hpp"
#include "padsum/ratfn.hpp"
#include "padsum/support.hpp"

namespace padsum {

enum class SeriesMethod { kBrute, kLift };

inline SeriesMethod series_method_from(const std::string& s) {
    if (s == "brute") return SeriesMethod::kBrute;
    if (s == "hensel" || s == "lift") return SeriesMethod::kLift;
    throw std::invalid_argument("unknown series method: " + s);
}

// P_{f,p}(T) truncated: coefficients N_0 = 1, N_1, ..., N_M.
struct PoincareSeries {
    std::int64_t p;
    std::vector<Rat> coeffs;

    void validate() const {
        if (coeffs.empty() || coeffs[0] != 1)
            throw std::logic_error("Poincare series must start with N_0 = 1");
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i] < 0 || coeffs[i] > 1)
                throw std::logic_error("N_m out of [0,1]");
            if (i > 0 && coeffs[i] > coeffs[i - 1])
                throw std::logic_error("N_m must be nonincreasing");
        }
    }
};

inline PoincareSeries poincare_truncation(const Polynomial& f, std::int64_t p, int M,
                                          SeriesMethod method, const RunConfig& cfg) {
    if (!f.prime_ok(Int(p)))
        throw NonInvertible("p=" + std::to_string(p) + " divides a coefficient denominator");
    PoincareSeries P{p, {Rat(1)}};
    if (method == SeriesMethod::kBrute) {
        for (int m = 1; m <= M; ++m)
            P.coeffs.push_back(count_bruteforce(f, ModulusSpec(p, m), cfg).normalized);
    } else {
        LiftCounter lc(p, f.nvars(), cfg);
        for (int m = 1; m <= M; ++m) {
            Rat nm(lc.count(f, m),
                   int_pow(p, static_cast<unsigned long>(m) *
                                  static_cast<unsigned long>(f.nvars())));
            nm.canonicalize();
            P.coeffs.push_back(nm);
        }
    }
    P.validate();
    return P;
}

// Coefficients z_m = measure{x in the support : v(f(x)) = m}, m < M, plus
// the tail mass at valuation >= M.
struct ZetaTruncation {
    std::int64_t p;
    int order;  // M
    BasicStepSupport support;
    std::vector<Rat> z;  // z_0 .. z_{M-1}
    Rat tail;            // N_M^{supp}

    Rat coefficient_sum() const {
        Rat s(0);
        for (const auto& c : z) s += c;
        return s;
    }
};

inline ZetaTruncation zeta_truncation(const Polynomial& f, std::int64_t p, int M,
                                      const BasicStepSupport& support, SeriesMethod method,
                                      const RunConfig& cfg) {
    int n = f.nvars();
    support.validate(p, n);
    if (!f.prime_ok(Int(p)))
        throw NonInvertible("p=" + std::to_string(p) + " divides a coefficient denominator");
    ZetaTruncation out{p, M, support, {}, Rat(0)};

    if (method == SeriesMethod::kBrute) {
        // independent route: one pass over the support mod p^M, reading off
        // the valuation of each value
        ModulusSpec spec(p, M);
        auto domain = support.domain(p, M);
        check_budget(domain_size(domain), cfg.budget, "zeta_truncation");
        ModPoly g = ModPoly::reduce(f, spec.modulus_u64());
        std::vector<Int> val_counts(static_cast<std::size_t>(M) + 1, Int(0));
        for (TupleStream ts(domain); !ts.done(); ts.next()) {
            std::uint64_t v = g.eval(ts.point());
            int val = 0;
            while (val < M && v % static_cast<std::uint64_t>(p) == 0) {
                if (v == 0) { val = M; break; }
                v /= static_cast<std::uint64_t>(p);
                ++val;
            }
            val_counts[static_cast<std::size_t>(val)] += 1;
        }
        Int total = int_pow(p, static_cast<unsigned long>(M) * static_cast<unsigned long>(n));
        for (int m = 0; m < M; ++m) {
            Rat zm(val_counts[static_cast<std::size_t>(m)], total);
            zm.canonicalize();
            out.z.push_back(zm);
        }
        Rat tail(val_counts[static_cast<std::size_t>(M)], total);
        tail.canonicalize();
        out.tail = tail;
    } else {
        // z_m = N_m^supp - N_(m+1)^supp from the lift recursion; the m = 0
        // mass is the measure of the support itself
        LiftCounter lc(p, n, cfg);
        std::vector<Rat> N{support.measure(p)};
        for (int m = 1; m <= M; ++m) {
            Rat nm(lc.count(f, m, &support),
                   int_pow(p, static_cast<unsigned long>(m) * static_cast<unsigned long>(n)));
            nm.canonicalize();
            N.push_back(nm);
        }
        for (int m = 0; m < M; ++m) out.z.push_back(N[static_cast<std::size_t>(m)] -
                                                    N[static_cast<std::size_t>(m) + 1]);
        out.tail = N[static_cast<std::size_t>(M)];
    }
    return out;
}

// P(T)(1-T) = 1 - T Z(T), coefficient by coefficient, exactly.
struct PZCheck {
    bool holds = true;
    int first_bad_index = -1;
};

inline PZCheck check_PZ_relation(const PoincareSeries& P, const ZetaTruncation& Z) {
    if (P.p != Z.p) throw std::invalid_argument("prime mismatch");
    if (!Z.support.is_full())
        throw std::invalid_argument("the P<->Z relation uses the full support");
    PZCheck out;
    int M = std::min(static_cast<int>(P.coeffs.size()) - 1, Z.order);
    if (P.coeffs[0] != 1) {
        out.holds = false;
        out.first_bad_index = 0;
        return out;
    }
    for (int m = 1; m <= M; ++m) {
        Rat lhs = P.coeffs[static_cast<std::size_t>(m)] - P.coeffs[static_cast<std::size_t>(m) - 1];
        Rat rhs = -Z.z[static_cast<std::size_t>(m) - 1];
        if (lhs != rhs) {
            out.holds = false;
            out.first_bad_index = m;
            return out;
        }
    }
    return out;
}

// Z restricted to (c + pZ_p) x O^(n-1) against q^(-1) Z of the fiber
// polynomial f_c. The paper guarantees equality only away from finitely
// many bad c, so the outcome is reported, never asserted.
struct FiberProductCheck {
    bool equal = true;
    int first_bad_index = -1;
    std::vector<Rat> lhs, rhs;
};

inline FiberProductCheck check_fiber_product(const Polynomial& f, const Rat& c,
                                             std::int64_t p, int M, SeriesMethod method,
                                             const RunConfig& cfg) {
    int n = f.nvars();
    if (n < 2) throw std::invalid_argument("fiber product check needs n >= 2");
    if (mpz_divisible_p(c.get_den().get_mpz_t(), Int(p).get_mpz_t()))
        throw std::invalid_argument("shift c must be integral at p");

    BasicStepSupport left = BasicStepSupport::full_support(n);
    left.factors[0].full = false;
    ZnRing Fp(static_cast<std::uint64_t>(p));
    left.factors[0].residue = static_cast<std::int64_t>(Fp.from_rational(c));

    ZetaTruncation zl = zeta_truncation(f, p, M, left, method, cfg);
    Polynomial fc = f.specialize_first(c);
    ZetaTruncation zr = zeta_truncation(fc, p, M, BasicStepSupport::full_support(n - 1),
                                        method, cfg);
    FiberProductCheck out;
    for (int m = 0; m < M; ++m) {
        Rat lhs = zl.z[static_cast<std::size_t>(m)];
        Rat rhs = zr.z[static_cast<std::size_t>(m)] / p;
        out.lhs.push_back(lhs);
        out.rhs.push_back(rhs);
        if (lhs != rhs && out.equal) {
            out.equal = false;
            out.first_bad_index = m;
        }
    }
    return out;
}

}  // namespace padsum

#endif
