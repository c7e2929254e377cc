#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "padsum/polynomial.hpp"
#include "padsum/rings.hpp"

#include "helpers.hpp"

using namespace padsum;

static Monomial mono(std::vector<std::uint32_t> e) { return Monomial(std::move(e)); }

TEST_CASE("parse canonical examples") {
    Polynomial f = Polynomial::parse("x1^2*x2 - x1", 2);
    REQUIRE(f.term_count() == 2);
    REQUIRE(f.coefficient(mono({2, 1})) == Rat(1));
    REQUIRE(f.coefficient(mono({1, 0})) == Rat(-1));

    Polynomial z = Polynomial::parse("0", 3);
    REQUIRE(z.is_zero());
    REQUIRE(z.degree() == kDegNegInf);

    Polynomial g = Polynomial::parse("x1^2 + x2^2", 2);
    REQUIRE(g.term_count() == 2);
    REQUIRE(g.degree() == 2);
}

TEST_CASE("parse accepts rational coefficients and juxtaposition") {
    Polynomial f = Polynomial::parse("1/2*x1", 1);
    REQUIRE(f.coefficient(mono({1})) == Rat(1, 2));
    Polynomial g = Polynomial::parse("3x1 + 2/4 x2", 2);
    REQUIRE(g.coefficient(mono({1, 0})) == Rat(3));
    REQUIRE(g.coefficient(mono({0, 1})) == Rat(1, 2));
    // repeated factors multiply
    Polynomial h = Polynomial::parse("x1*x1*x2", 2);
    REQUIRE(h.coefficient(mono({2, 1})) == Rat(1));
}

TEST_CASE("parse errors carry a position") {
    REQUIRE_THROWS_AS(Polynomial::parse("x3", 2), ParseError);
    REQUIRE_THROWS_AS(Polynomial::parse("x1 + ", 2), ParseError);
    REQUIRE_THROWS_AS(Polynomial::parse("x1 & x2", 2), ParseError);
    REQUIRE_THROWS_AS(Polynomial::parse("x1*", 2), ParseError);
    REQUIRE_THROWS_AS(Polynomial::parse("1/0", 1), ParseError);
    try {
        Polynomial::parse("x1 + x9", 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.position > 0);
    }
}

TEST_CASE("print/parse round trip on canonical form") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + trial % 3;
        Polynomial f = test::random_polynomial(rng, n, 4, 5);
        std::string s = f.to_string();
        Polynomial g = Polynomial::parse(s, n);
        REQUIRE(g == f);
        REQUIRE(g.to_string() == s);
    }
    REQUIRE(Polynomial::parse("x1^2*x2 - x1", 2).to_string() == "x1^2*x2 - x1");
    REQUIRE(Polynomial::zero(2).to_string() == "0");
}

TEST_CASE("evaluate over Z, Z/9 and Z/3") {
    Polynomial f = Polynomial::parse("x1^2*x2 - x1", 2);
    IntRing Z;
    std::vector<Int> pt{Int(1), Int(1)};
    REQUIRE(f.evaluate(Z, std::span<const Int>(pt)) == 0);

    ZnRing Z9(9);
    std::vector<std::uint64_t> pt9{2, 3};
    REQUIRE(f.evaluate(Z9, std::span<const std::uint64_t>(pt9)) == 1);  // 10 mod 9

    Polynomial half = Polynomial::parse("1/2*x1", 1);
    ZnRing Z3(3);
    std::vector<std::uint64_t> pt3{1};
    REQUIRE(half.evaluate(Z3, std::span<const std::uint64_t>(pt3)) == 2);

    ZnRing Z4(4);
    std::vector<std::uint64_t> pt4{1};
    REQUIRE_THROWS_AS(half.evaluate(Z4, std::span<const std::uint64_t>(pt4)), NonInvertible);
}

TEST_CASE("evaluation agrees with term-by-term substitution") {
    std::mt19937 rng(7);
    RatRing Q;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + trial % 3;
        Polynomial f = test::random_polynomial(rng, n, 4, 6);
        std::uniform_int_distribution<int> v(-5, 5);
        std::vector<Rat> pt;
        for (int i = 0; i < n; ++i) {
            Rat q(v(rng), 1 + trial % 2);
            q.canonicalize();
            pt.push_back(q);
        }
        Rat direct = 0;
        for (const auto& [m, c] : f.terms()) {
            Rat t = c;
            for (std::size_t i = 0; i < m.exps.size(); ++i)
                t *= rat_pow(pt[i], static_cast<long>(m.exps[i]));
            direct += t;
        }
        REQUIRE(f.evaluate(Q, std::span<const Rat>(pt)) == direct);
    }
}

TEST_CASE("gradient basics") {
    Polynomial f = Polynomial::parse("x1^2+x2^2", 2);
    auto g = f.gradient();
    REQUIRE(g[0] == Polynomial::parse("2x1", 2));
    REQUIRE(g[1] == Polynomial::parse("2x2", 2));

    Polynomial h = Polynomial::parse("x1^2*x2 - x1", 2);
    auto gh = h.gradient();
    REQUIRE(gh[0] == Polynomial::parse("2*x1*x2 - 1", 2));
    REQUIRE(gh[1] == Polynomial::parse("x1^2", 2));

    Polynomial c = Polynomial::constant(3, Rat(7));
    for (const auto& d : c.gradient()) REQUIRE(d.is_zero());
}

TEST_CASE("gradient is linear") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + trial % 3;
        Polynomial f = test::random_polynomial(rng, n, 4, 4);
        Polynomial g = test::random_polynomial(rng, n, 4, 4);
        auto gf = f.gradient(), gg = g.gradient(), gs = (f + g).gradient();
        for (int i = 0; i < n; ++i) REQUIRE(gs[static_cast<std::size_t>(i)] ==
                                            gf[static_cast<std::size_t>(i)] + gg[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("leading form") {
    REQUIRE(Polynomial::parse("x1^2*x2 - x1", 2).leading_form() ==
            Polynomial::parse("x1^2*x2", 2));
    Polynomial hom = Polynomial::parse("x1^3 + x2^3", 2);
    REQUIRE(hom.leading_form() == hom);
    REQUIRE(Polynomial::parse("x1 + x2 + 1", 2).leading_form() ==
            Polynomial::parse("x1 + x2", 2));
    REQUIRE_THROWS_AS(Polynomial::zero(2).leading_form(), std::invalid_argument);
}

TEST_CASE("specialize_first") {
    Polynomial f = Polynomial::parse("x1^2*x2 - x1", 2);
    Polynomial fa = f.specialize_first(Rat(1));
    REQUIRE(fa == Polynomial::parse("x1 - 1", 1));  // x2 becomes x1 in n-1 vars

    REQUIRE(Polynomial::parse("x1^2+x2^2", 2).specialize_first(Rat(0)) ==
            Polynomial::parse("x1^2", 1));
    REQUIRE_THROWS_AS(Polynomial::parse("x1", 1).specialize_first(Rat(1)),
                      std::invalid_argument);
}

TEST_CASE("specializing a homogeneous form at 0 keeps exactly the x1-free terms") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + trial % 2;
        Polynomial f = test::random_polynomial(rng, n, 4, 5, /*homogeneous=*/true);
        Polynomial direct = f.specialize_first(Rat(0));
        // oracle: drop terms containing x1, strip the first exponent
        Polynomial expect(n - 1);
        for (const auto& [m, c] : f.terms()) {
            if (m.exps[0] != 0) continue;
            expect.add_term(
                Monomial(std::vector<std::uint32_t>(m.exps.begin() + 1, m.exps.end())), c);
        }
        REQUIRE(direct == expect);
    }
}

TEST_CASE("is_homogeneous") {
    long d = 0;
    REQUIRE(Polynomial::parse("x1^2+x2^2", 2).is_homogeneous(&d));
    REQUIRE(d == 2);
    REQUIRE_FALSE(Polynomial::parse("x1^2*x2 - x1", 2).is_homogeneous());
    REQUIRE(Polynomial::zero(2).is_homogeneous(&d));
    REQUIRE(d == kDegNegInf);
}

TEST_CASE("Euler identity on homogeneous polynomials") {
    std::mt19937 rng(424242);
    IntRing Z;
    for (int trial = 0; trial < 80; ++trial) {
        int n = 1 + trial % 3;
        Polynomial f = test::random_polynomial(rng, n, 5, 4, /*homogeneous=*/true);
        long d = 0;
        REQUIRE(f.is_homogeneous(&d));
        // clear denominators so the identity runs over Z
        Int lcm = 1;
        for (const auto& [m, c] : f.terms())
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
        Polynomial fz = Rat(lcm) * f;
        std::uniform_int_distribution<int> v(-7, 7);
        std::vector<Int> pt;
        for (int i = 0; i < n; ++i) pt.emplace_back(v(rng));
        auto grad = fz.gradient();
        Int lhs = 0;
        for (int i = 0; i < n; ++i)
            lhs += pt[static_cast<std::size_t>(i)] *
                   grad[static_cast<std::size_t>(i)].evaluate(Z, std::span<const Int>(pt));
        Int rhs = Int(d) * fz.evaluate(Z, std::span<const Int>(pt));
        REQUIRE(lhs == rhs);
    }
}
