#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "padsum/expsum.hpp"

#include "helpers.hpp"

using namespace padsum;

static RunConfig cfg() {
    RunConfig c;
    c.budget = 2'000'000;
    return c;
}

TEST_CASE("full additive character sums vanish exactly") {
    for (std::int64_t p : {2, 3, 5, 7}) {
        auto r = expsum_level(Polynomial::parse("x1", 1), p, 1, cfg());
        REQUIRE(r.exact_zero);
        REQUIRE(r.magnitude == 0.0);
    }
}

TEST_CASE("Gauss sum magnitude at p=3") {
    auto r = expsum_level(Polynomial::parse("x1^2", 1), 3, 1, cfg());
    REQUIRE_FALSE(r.exact_zero);
    REQUIRE(std::abs(r.magnitude - 1.0 / std::sqrt(3.0)) < 1e-12);
}

TEST_CASE("the running example takes the exact value 1/3 at level 1 and dies at level 2") {
    Polynomial f = Polynomial::parse("x1^2*x2 - x1", 2);
    auto r1 = expsum_level(f, 3, 1, cfg());
    REQUIRE_FALSE(r1.exact_zero);
    REQUIRE(r1.exact_rational.has_value());
    REQUIRE(*r1.exact_rational == Rat(1, 3));
    REQUIRE(std::abs(r1.re - 1.0 / 3.0) < 1e-15);
    REQUIRE(std::abs(r1.im) < 1e-15);

    for (std::int64_t p : {3, 5, 7}) {
        for (int m : {2, 3}) {
            auto r = expsum_level(f, p, m, cfg());
            INFO("p=" << p << " m=" << m);
            REQUIRE(r.exact_zero);
        }
        auto r1p = expsum_level(f, p, 1, cfg());
        REQUIRE_FALSE(r1p.exact_zero);
    }
}

TEST_CASE("floating value agrees with the direct complex oracle") {
    std::vector<std::pair<std::string, int>> corpus = {
        {"x1^2", 1}, {"x1*x2", 2}, {"x1^2+x2^2", 2}, {"x1^3+x2^3", 2},
        {"x1^2*x2 - x1", 2}, {"x1^2*x2^2", 2},
    };
    for (const auto& [text, n] : corpus) {
        Polynomial f = Polynomial::parse(text, n);
        for (std::int64_t p : {3, 5}) {
            for (int m = 1; m <= 3; ++m) {
                auto r = expsum_level(f, p, m, cfg());
                auto oracle = test::oracle_expsum(f, p, m);
                INFO(text << " p=" << p << " m=" << m);
                REQUIRE(std::abs(r.re - static_cast<double>(oracle.real())) < 1e-10);
                REQUIRE(std::abs(r.im - static_cast<double>(oracle.imag())) < 1e-10);
            }
        }
    }
}

TEST_CASE("brute and lift-tree routes agree exactly on reduced vectors") {
    std::vector<std::pair<std::string, int>> corpus = {
        {"x1^2", 1}, {"x1*x2", 2}, {"x1^2+x2^2", 2}, {"x1^3+x2^3", 2},
        {"x1^2*x2 - x1", 2}, {"x1^2*x2^2", 2}, {"x1*x2*x3", 3},
    };
    for (const auto& [text, n] : corpus) {
        Polynomial f = Polynomial::parse(text, n);
        for (std::int64_t p : {2, 3, 5}) {
            for (int m = 1; m <= (n == 3 ? 2 : 3); ++m) {
                auto rb = expsum_level(f, p, m, BasicStepSupport::full_support(n), Int(1),
                                       cfg(), ExpSumMethod::kBrute);
                auto rt = expsum_level(f, p, m, BasicStepSupport::full_support(n), Int(1),
                                       cfg(), ExpSumMethod::kLiftTree);
                INFO(text << " p=" << p << " m=" << m);
                REQUIRE(rb.cyclo->coeffs() == rt.cyclo->coeffs());
            }
        }
    }
}

TEST_CASE("restricted supports and unit multipliers agree with the oracle") {
    Polynomial f = Polynomial::parse("x1^2*x2 - x1", 2);
    BasicStepSupport s = BasicStepSupport::parse("1,full", 2);
    for (std::int64_t u : {1, 2, 7}) {
        auto r = expsum_level(f, 3, 2, s, Int(u), cfg());
        auto oracle = test::oracle_expsum(f, 3, 2, &s, u);
        REQUIRE(std::abs(r.re - static_cast<double>(oracle.real())) < 1e-10);
        REQUIRE(std::abs(r.im - static_cast<double>(oracle.imag())) < 1e-10);
        // tree route gives the identical cyclotomic element
        auto rt = expsum_level(f, 3, 2, s, Int(u), cfg(), ExpSumMethod::kLiftTree);
        REQUIRE(r.cyclo->coeffs() == rt.cyclo->coeffs());
    }
    REQUIRE_THROWS_AS(expsum_level(f, 3, 2, s, Int(3), cfg()), std::invalid_argument);
}

TEST_CASE("conjugation symmetry: u -> -u is the Galois action zeta -> zeta^-1") {
    std::mt19937 rng(2718);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 2;
        Polynomial f = test::random_polynomial(rng, n, 3, 4);
        std::int64_t p = trial % 2 ? 3 : 5;
        if (!f.prime_ok(Int(p))) continue;
        int m = 1 + trial % 3;
        auto plus = expsum_level(f, p, m, BasicStepSupport::full_support(n), Int(1), cfg());
        auto minus = expsum_level(f, p, m, BasicStepSupport::full_support(n), Int(-1), cfg());
        REQUIRE(minus.cyclo->coeffs() == plus.cyclo->galois(-1).coeffs());
        REQUIRE(std::abs(plus.magnitude - minus.magnitude) <
                plus.error_bound + minus.error_bound + 1e-15);
    }
}

TEST_CASE("trivial bound: magnitude never exceeds the support measure") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 1 + trial % 2;
        Polynomial f = test::random_polynomial(rng, n, 3, 4);
        if (!f.prime_ok(Int(3))) continue;
        BasicStepSupport s = BasicStepSupport::full_support(n);
        if (trial % 3 == 0) s.factors[0] = {false, trial % 3};
        auto r = expsum_level(f, 3, 2, s, Int(1), cfg());
        REQUIRE(r.magnitude <= rat_to_double(s.measure(3)) + r.error_bound + 1e-15);
    }
}

TEST_CASE("finite field sums") {
    RunConfig c = cfg();
    // full character sum over F_9
    FqField F9(3, 2);
    auto r1 = finite_field_sum(Polynomial::parse("x1", 1), F9, 1, c);
    REQUIRE(r1.exact_zero);

    // Gauss sum over F_5
    FqField F5(5, 1);
    auto r2 = finite_field_sum(Polynomial::parse("x1^2", 1), F5, 1, c);
    REQUIRE(std::abs(r2.magnitude - 1.0 / std::sqrt(5.0)) < 1e-12);

    // |E| = 1/q for the smooth quadric in two variables
    for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
        FqField F(p, k);
        auto r = finite_field_sum(Polynomial::parse("x1^2+x2^2", 2), F, 1, c);
        INFO("q=" << F.q());
        REQUIRE(std::abs(r.magnitude - 1.0 / F.q()) < 1e-12);
    }

    // q = p^k sums match the level-1 Q_p sums when k = 1
    auto ff = finite_field_sum(Polynomial::parse("x1^3+x2^3", 2), FqField(7, 1), 1, c);
    auto zp = expsum_level(Polynomial::parse("x1^3+x2^3", 2), 7, 1, c);
    REQUIRE(ff.cyclo->coeffs() == zp.cyclo->coeffs());
}

TEST_CASE("global sums multiply along CRT") {
    RunConfig c = cfg();
    auto one = global_sum(Polynomial::parse("x1^2", 1), Int(1), c);
    REQUIRE(one.magnitude == 1.0);

    auto g12 = global_sum(Polynomial::parse("x1^2", 1), Int(12), c);
    REQUIRE(g12.direct_checked);
    REQUIRE(g12.direct_difference < 1e-10);

    for (std::int64_t N = 2; N <= 60; ++N) {
        auto g = global_sum(Polynomial::parse("x1^2*x2 - x1", 2), Int(N), c);
        INFO("N=" << N);
        REQUIRE(g.direct_checked);
        REQUIRE(g.direct_difference < 1e-9);
    }

    auto gz = global_sum(Polynomial::parse("x1", 1), Int(30), c);
    REQUIRE(gz.exact_zero);
    REQUIRE_THROWS_AS(global_sum(Polynomial::parse("x1", 1), Int(0), c),
                      std::invalid_argument);
}

TEST_CASE("level-2 decomposition") {
    RunConfig c = cfg();
    // empty critical locus: both parts vanish, E(p^2) = 0
    auto d1 = decomposition_m2(Polynomial::parse("x1^2*x2 - x1", 2), 5, Int(1), c);
    REQUIRE(d1.a_count == 0);
    REQUIRE(d1.b_part_zero);
    REQUIRE(d1.total.exact_zero);

    // smooth quadric: B vanishes, |E(49)| = 1/49
    auto d2 = decomposition_m2(Polynomial::parse("x1^2+x2^2", 2), 7, Int(1), c);
    REQUIRE(d2.b_part_zero);
    REQUIRE(d2.a_count == 1);
    REQUIRE(std::abs(d2.total.magnitude - 1.0 / 49.0) < 1e-12);
    REQUIRE(d2.bound_holds);

    // n = 1 linear: A empty for every p
    for (std::int64_t p : {2, 3, 5}) {
        auto d = decomposition_m2(Polynomial::parse("x1", 1), p, Int(1), c);
        REQUIRE(d.a_count == 0);
        REQUIRE(d.total.exact_zero);
    }

    // decomposition total equals the plain level-2 sum, exactly
    for (const auto& [text, n] : std::vector<std::pair<std::string, int>>{
             {"x1^2*x2^2", 2}, {"x1*x2*x3", 3}, {"x1^3+x2^3", 2}}) {
        Polynomial f = Polynomial::parse(text, n);
        for (std::int64_t p : {3, 5}) {
            auto d = decomposition_m2(f, p, Int(1), c);
            auto e = expsum_level(f, p, 2, c);
            INFO(text << " p=" << p);
            REQUIRE(d.total.cyclo->coeffs() == e.cyclo->coeffs());
            REQUIRE(d.b_part_zero);
        }
    }
}

TEST_CASE("level-2 sums of the multi-component critical loci are exactly rational") {
    // every singular residue of these monomial products has value exactly 0,
    // so E(p^2) equals the Haar measure of A_f on the nose
    RunConfig c = cfg();
    for (std::int64_t p : {5, 7, 11}) {
        auto d2 = decomposition_m2(Polynomial::parse("x1^2*x2^2", 2), p, Int(1), c);
        REQUIRE(d2.total.exact_rational.has_value());
        Rat expect2(2 * p - 1, p * p);
        expect2.canonicalize();
        REQUIRE(*d2.total.exact_rational == expect2);
        REQUIRE(d2.a_measure == expect2);

        auto d3 = decomposition_m2(Polynomial::parse("x1*x2*x3", 3), p, Int(1), c);
        REQUIRE(d3.total.exact_rational.has_value());
        Rat expect3(3 * p - 2, p * p * p);
        expect3.canonicalize();
        REQUIRE(*d3.total.exact_rational == expect3);
    }
}

TEST_CASE("exact zero iff tiny magnitude, across a random sweep") {
    std::mt19937 rng(5150);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + trial % 2;
        Polynomial f = test::random_polynomial(rng, n, 3, 3);
        std::int64_t p = (trial % 3 == 0) ? 2 : (trial % 3 == 1 ? 3 : 5);
        if (!f.prime_ok(Int(p))) continue;
        auto r = expsum_level(f, p, 1 + trial % 3, cfg());
        REQUIRE(r.exact_zero == (r.magnitude < 1e-9));
    }
}
