#ifndef PADSUM_TESTS_HELPERS_HPP
#define PADSUM_TESTS_HELPERS_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "padsum/counting.hpp"
#include "padsum/modulus.hpp"
#include "padsum/polynomial.hpp"
#include "padsum/support.hpp"

namespace padsum::test {

// Deterministic random polynomials for property tests.
inline Polynomial random_polynomial(std::mt19937& rng, int n, int max_deg, int max_terms,
                                    bool homogeneous = false) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> coeff(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> expd(0, max_deg);
    Polynomial f(n);
    int hom_deg = homogeneous ? std::max(1, expd(rng)) : 0;
    int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
        Monomial m(static_cast<std::size_t>(n));
        if (homogeneous) {
            // split hom_deg over the variables
            int remaining = hom_deg;
            for (int i = 0; i < n - 1; ++i) {
                std::uniform_int_distribution<int> part(0, remaining);
                int e = part(rng);
                m.exps[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(e);
                remaining -= e;
            }
            m.exps[static_cast<std::size_t>(n - 1)] = static_cast<std::uint32_t>(remaining);
        } else {
            for (int i = 0; i < n; ++i)
                m.exps[static_cast<std::size_t>(i)] =
                    static_cast<std::uint32_t>(expd(rng) % (max_deg + 1));
        }
        int c = coeff(rng);
        if (c == 0) c = 1;
        Rat q(c, den(rng));
        q.canonicalize();
        f.add_term(m, q);
    }
    return f;
}

// Independent complex-arithmetic oracle for exponential sums: direct
// summation of exp(2 pi i u f(x) / p^m) over the (possibly restricted)
// domain, normalized by p^(mn). No cyclotomic machinery involved.
inline std::complex<long double> oracle_expsum(const Polynomial& f, std::int64_t p, int m,
                                               const BasicStepSupport* support = nullptr,
                                               std::int64_t u = 1) {
    int n = f.nvars();
    ModulusSpec spec(p, m);
    std::uint64_t M = spec.modulus_u64();
    BasicStepSupport full = BasicStepSupport::full_support(n);
    const BasicStepSupport& supp = support ? *support : full;
    auto domain = supp.domain(p, m);
    ModPoly g = ModPoly::reduce(f, M);
    const long double tau = 6.283185307179586476925286766559L;
    std::complex<long double> acc(0.0L, 0.0L);
    for (TupleStream ts(domain); !ts.done(); ts.next()) {
        std::uint64_t v = g.eval(ts.point());
        v = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(v) * static_cast<std::uint64_t>(u)) % M);
        long double ang = tau * static_cast<long double>(v) / static_cast<long double>(M);
        acc += std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    long double scale = std::pow(static_cast<long double>(p),
                                 -static_cast<long double>(m) * static_cast<long double>(n));
    return acc * scale;
}

}  // namespace padsum::test

#endif
