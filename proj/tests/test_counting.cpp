#include <catch2/catch_amalgamated.hpp>

#include "padsum/counting.hpp"

#include "helpers.hpp"

using namespace padsum;

static RunConfig cfg() {
    RunConfig c;
    c.budget = 2'000'000;
    return c;
}

TEST_CASE("brute-force counts match frozen oracle values") {
    // x^2 = 0 mod 27 has the solutions 0, 9, 18
    auto c1 = count_bruteforce(Polynomial::parse("x1^2", 1), ModulusSpec(3, 3), cfg());
    REQUIRE(c1.raw == 3);
    REQUIRE(c1.normalized == Rat(1, 9));

    // x1 x2 = 0 mod 4: 8 of the 16 points
    auto c2 = count_bruteforce(Polynomial::parse("x1*x2", 2), ModulusSpec(2, 2), cfg());
    REQUIRE(c2.raw == 8);
    REQUIRE(c2.normalized == Rat(1, 2));

    // a unit constant never vanishes
    auto c3 = count_bruteforce(Polynomial::parse("1", 1), ModulusSpec(5, 2), cfg());
    REQUIRE(c3.raw == 0);
}

TEST_CASE("hensel lift walks the spec'd chain for x^2 at p=3") {
    Polynomial f = Polynomial::parse("x1^2", 1);
    REQUIRE(count_hensel(f, ModulusSpec(3, 1), cfg()).raw == 1);
    REQUIRE(count_hensel(f, ModulusSpec(3, 2), cfg()).raw == 3);
    REQUIRE(count_hensel(f, ModulusSpec(3, 3), cfg()).raw == 3);
}

TEST_CASE("smooth linear polynomial: N_m = p^(n-1)m ... one lift chain per level") {
    Polynomial f = Polynomial::parse("x1", 1);
    for (int m = 1; m <= 6; ++m) {
        auto c = count_hensel(f, ModulusSpec(5, m), cfg());
        REQUIRE(c.raw == 1);
        REQUIRE(c.normalized == Rat(Int(1), int_pow(5, static_cast<unsigned long>(m))));
    }
}

TEST_CASE("three counting routes agree across a mini corpus") {
    std::vector<std::pair<std::string, int>> corpus = {
        {"x1", 1},       {"x1^2", 1},         {"1", 1},
        {"x1*x2", 2},    {"x1^2+x2^2", 2},    {"x1^3+x2^3", 2},
        {"x1^2*x2^2", 2}, {"x1^2*x2 - x1", 2}, {"x1*x2*x3", 3},
        {"x1^3+x2^3+x3^3", 3}, {"1/2*x1^2 + x2", 2},
    };
    for (const auto& [text, n] : corpus) {
        Polynomial f = Polynomial::parse(text, n);
        for (std::int64_t p : {2, 3, 5}) {
            if (!f.prime_ok(Int(p))) continue;
            for (int m = 1; m <= 4; ++m) {
                Int points = int_pow(p, static_cast<unsigned long>(m) *
                                            static_cast<unsigned long>(n));
                if (points > 200000) break;
                ModulusSpec spec(p, m);
                Int brute = count_bruteforce(f, spec, cfg()).raw;
                Int hensel = count_hensel(f, spec, cfg()).raw;
                LiftCounter lc(p, n, cfg());
                Int tree = lc.count(f, m);
                INFO(text << " p=" << p << " m=" << m);
                REQUIRE(brute == hensel);
                REQUIRE(brute == tree);
            }
        }
    }
}

TEST_CASE("lift tree handles deep levels where lists would explode") {
    // x1 x2 x3 mod 5^8: solution lists have ~10^10 entries, the tree copes
    Polynomial f = Polynomial::parse("x1*x2*x3", 3);
    LiftCounter lc(5, 3, cfg());
    Int deep = lc.count(f, 8);
    // oracle: x1 x2 x3 = 0 mod 5^m iff the truncated valuations satisfy
    // v1+v2+v3 >= m; #{x mod 5^m : v(x) = j} is 4*5^(m-j-1) for j < m and 1
    // for x = 0
    auto raw_oracle = [&](int m) {
        auto residues_with_val = [&](int j) {
            return j < m ? Int(4) * int_pow(5, static_cast<unsigned long>(m - j - 1)) : Int(1);
        };
        Int total = 0;
        for (int j1 = 0; j1 <= m; ++j1)
            for (int j2 = 0; j2 <= m; ++j2)
                for (int j3 = 0; j3 <= m; ++j3)
                    if (j1 + j2 + j3 >= m)
                        total += residues_with_val(j1) * residues_with_val(j2) *
                                 residues_with_val(j3);
        return total;
    };
    REQUIRE(deep == raw_oracle(8));
    // and the tree agrees with brute force where brute force is possible
    RunConfig c = cfg();
    for (int m = 1; m <= 2; ++m) {
        ModulusSpec spec(5, m);
        REQUIRE(LiftCounter(5, 3, c).count(f, m) == count_bruteforce(f, spec, c).raw);
    }
}

TEST_CASE("support-restricted lift counts match restricted brute force") {
    std::mt19937 rng(909);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 1 + trial % 2;
        Polynomial f = test::random_polynomial(rng, n, 3, 4);
        std::int64_t p = trial % 2 ? 3 : 5;
        if (!f.prime_ok(Int(p))) continue;
        BasicStepSupport s = BasicStepSupport::full_support(n);
        s.factors[0] = {false, trial % p};
        for (int m = 1; m <= 3; ++m) {
            ModulusSpec spec(p, m);
            Int brute = count_bruteforce_raw(f, spec, cfg(), &s);
            LiftCounter lc(p, n, cfg());
            INFO(f.to_string() << " p=" << p << " m=" << m << " supp=" << s.to_string());
            REQUIRE(lc.count(f, m, &s) == brute);
        }
    }
}

TEST_CASE("lift tree matches brute force on random polynomials") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + trial % 2;
        Polynomial f = test::random_polynomial(rng, n, 4, 4);
        std::int64_t p = (trial % 3 == 0) ? 2 : (trial % 3 == 1 ? 3 : 5);
        if (!f.prime_ok(Int(p))) continue;
        int m = 1 + trial % 4;
        if (int_pow(p, static_cast<unsigned long>(m) * static_cast<unsigned long>(n)) >
            200000)
            continue;
        ModulusSpec spec(p, m);
        LiftCounter lc(p, n, cfg());
        INFO(f.to_string() << " p=" << p << " m=" << m);
        REQUIRE(lc.count(f, m) == count_bruteforce(f, spec, cfg()).raw);
    }
}

TEST_CASE("hensel list budget falls back or errors") {
    Polynomial f = Polynomial::parse("x1*x2*x3", 3);
    RunConfig tiny = cfg();
    tiny.hensel_list_budget = 10;
    REQUIRE_THROWS_AS(count_hensel(f, ModulusSpec(3, 3), tiny), BudgetError);
    // with fallback, the brute-force result comes back instead
    Int via_fallback = count_hensel_raw(f, ModulusSpec(3, 3), tiny, true);
    REQUIRE(via_fallback == count_bruteforce(f, ModulusSpec(3, 3), cfg()).raw);
}

TEST_CASE("value histograms") {
    auto h1 = value_histogram(Polynomial::parse("x1", 1), ModulusSpec(3, 1), cfg());
    REQUIRE(h1.counts == std::vector<std::int64_t>{1, 1, 1});

    auto h2 = value_histogram(Polynomial::parse("x1^2", 1), ModulusSpec(3, 1), cfg());
    REQUIRE(h2.counts == std::vector<std::int64_t>{1, 2, 0});

    auto h3 = value_histogram(Polynomial::parse("x1^2*x2 - x1", 2), ModulusSpec(3, 1), cfg());
    REQUIRE(h3.counts[0] == 5);
    REQUIRE(h3.total() == 9);

    // c_0 always equals the raw solution count
    Polynomial f = Polynomial::parse("x1^3+x2^3", 2);
    for (std::int64_t p : {2, 3, 5}) {
        auto h = value_histogram(f, ModulusSpec(p, 2), cfg());
        REQUIRE(h.counts[0] == count_bruteforce(f, ModulusSpec(p, 2), cfg()).raw);
        REQUIRE(h.total() == int_pow(p, 4));
    }
}

TEST_CASE("reduction mod p^m commutes with evaluation") {
    std::mt19937 rng(606);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + trial % 3;
        Polynomial f = test::random_polynomial(rng, n, 4, 5);
        std::int64_t p = trial % 2 ? 3 : 7;
        if (!f.prime_ok(Int(p))) continue;
        int m = 1 + trial % 3;
        ModulusSpec spec(p, m);
        std::uint64_t M = spec.modulus_u64();
        ModPoly g = ModPoly::reduce(f, M);
        ZnRing R(M);
        std::uniform_int_distribution<std::uint64_t> v(0, M - 1);
        std::vector<std::uint64_t> pt;
        for (int i = 0; i < n; ++i) pt.push_back(v(rng));
        // rational evaluation followed by reduction
        RatRing Q;
        std::vector<Rat> qpt;
        for (auto x : pt) qpt.emplace_back(static_cast<unsigned long>(x));
        Rat exact = f.evaluate(Q, std::span<const Rat>(qpt));
        REQUIRE(g.eval(pt) == R.from_rational(exact));
    }
}

TEST_CASE("normalized counts are monotone in m") {
    for (const char* text : {"x1^2", "x1*x2", "x1^2*x2 - x1"}) {
        Polynomial f = Polynomial::parse(text, infer_nvars(text));
        LiftCounter lc(3, f.nvars(), cfg());
        Rat prev(1);
        for (int m = 1; m <= 6; ++m) {
            Rat nm(lc.count(f, m), int_pow(3, static_cast<unsigned long>(m) *
                                                  static_cast<unsigned long>(f.nvars())));
            nm.canonicalize();
            REQUIRE(nm <= prev);
            prev = nm;
        }
    }
}

TEST_CASE("locus counts") {
    RunConfig c = cfg();
    // C_f for x1^2+x2^2: the gradient system is linear, only the origin
    {
        auto sys = critical_system(Polynomial::parse("x1^2+x2^2", 2));
        FqField F(5, 1);
        REQUIRE(locus_count(sys, F, false, c) == 1);
    }
    // C_f for x1^2 x2 - x1 is empty over every tested field
    {
        auto sys = critical_system(Polynomial::parse("x1^2*x2 - x1", 2));
        for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{3, 1}, {3, 2}, {5, 1}, {5, 2}}) {
            FqField F(p, k);
            REQUIRE(locus_count(sys, F, false, c) == 0);
        }
    }
    // S_f for x1 x2 over F_7: the origin
    {
        auto sys = singular_system(Polynomial::parse("x1*x2", 2));
        FqField F(7, 1);
        REQUIRE(locus_count(sys, F, false, c) == 1);
    }
    // projective rejects non-homogeneous systems
    {
        std::vector<Polynomial> sys{Polynomial::parse("x1^2 + x2", 2)};
        FqField F(5, 1);
        REQUIRE_THROWS_AS(locus_count(sys, F, true, c), std::invalid_argument);
    }
}

TEST_CASE("singular locus at infinity") {
    RunConfig c = cfg();
    // smooth conic at infinity: empty singular locus
    {
        auto sys = singular_locus_at_infinity(Polynomial::parse("x1^2+x2^2", 2));
        REQUIRE(sys.size() == 3);
        FqField F(5, 1);
        REQUIRE(locus_count(sys, F, true, c) == 0);
    }
    // leading form x1^2 x2: one singular projective point [0:1]
    {
        auto sys = singular_locus_at_infinity(Polynomial::parse("x1^2*x2 - x1", 2));
        FqField F(5, 1);
        REQUIRE(locus_count(sys, F, true, c) == 1);
    }
    REQUIRE_THROWS_AS(singular_locus_at_infinity(Polynomial::constant(2, Rat(3))),
                      std::invalid_argument);
}

TEST_CASE("dimension estimation") {
    // all counts zero: empty scheme
    std::map<std::int64_t, std::vector<Int>> zero{{5, {0, 0, 0}}, {7, {0, 0, 0}}};
    REQUIRE(estimate_dimension(zero).consensus == kDegNegInf);

    // a single point over every field: dimension 0
    std::map<std::int64_t, std::vector<Int>> pt{{5, {1, 1, 1}}, {7, {1, 1, 1}}};
    REQUIRE(estimate_dimension(pt).consensus == 0);

    // exact power growth q, q^2, q^3 read as dimension 1
    std::map<std::int64_t, std::vector<Int>> line{
        {5, {5, 25, 125}}, {7, {7, 49, 343}}};
    auto est = estimate_dimension(line);
    REQUIRE(est.consensus == 1);
    REQUIRE_FALSE(est.ambiguous);

    // disagreement across primes is flagged
    std::map<std::int64_t, std::vector<Int>> bad{{5, {1, 1, 1}}, {7, {7, 49, 343}}};
    REQUIRE(estimate_dimension(bad).ambiguous);

    // insufficient data errors
    std::map<std::int64_t, std::vector<Int>> few{{5, {1, 1, 1}}};
    REQUIRE_THROWS_AS(estimate_dimension(few), std::invalid_argument);
    std::map<std::int64_t, std::vector<Int>> shallow{{5, {1, 1}}, {7, {1, 1}}};
    REQUIRE_THROWS_AS(estimate_dimension(shallow), std::invalid_argument);
}

TEST_CASE("locus summaries estimate the dimensions from the key examples") {
    RunConfig c = cfg();
    std::vector<std::int64_t> primes{5, 7};
    auto d0 = build_locus_summary(critical_system(Polynomial::parse("x1^2+x2^2", 2)), "C_f",
                                  false, primes, 3, c);
    REQUIRE(d0.dims.consensus == 0);

    auto d1 = build_locus_summary(critical_system(Polynomial::parse("x1^2*x2^2", 2)), "C_f",
                                  false, primes, 3, c);
    REQUIRE(d1.dims.consensus == 1);

    auto dempty = build_locus_summary(critical_system(Polynomial::parse("x1^2*x2 - x1", 2)),
                                      "C_f", false, primes, 3, c);
    REQUIRE(dempty.dims.consensus == kDegNegInf);

    auto ds = build_locus_summary(singular_system(Polynomial::parse("x1*x2", 2)), "S_f",
                                  false, primes, 3, c);
    REQUIRE(ds.dims.consensus == 0);
}

TEST_CASE("lift surjectivity") {
    RunConfig c = cfg();
    REQUIRE(check_lift_surjectivity(Polynomial::parse("x1^2+x2^2", 2), 5, c));
    // x^2 - 5 at p = 5: 0 solves mod 5 but nothing lifts mod 25
    REQUIRE_FALSE(check_lift_surjectivity(Polynomial::parse("x1^2 - 5", 1), 5, c));
    for (std::int64_t p : {2, 3, 5, 7})
        REQUIRE(check_lift_surjectivity(Polynomial::parse("x1", 1), p, c));
}

TEST_CASE("proof identities") {
    RunConfig c = cfg();
    // f = x1 x2 at p = 5: #S = 1, #Y = 8, N1 = 9/25, N2 = 13/125
    auto r = proof_identity_check(Polynomial::parse("x1*x2", 2), 5, c);
    REQUIRE(r.s_count == 1);
    REQUIRE(r.y_count == 8);
    REQUIRE(r.n1 == Rat(9, 25));
    REQUIRE(r.n2 == Rat(13, 125));
    REQUIRE(r.n1_identity);
    REQUIRE(r.n2_identity);

    // smooth case: N2 = N1/q
    auto s = proof_identity_check(Polynomial::parse("x1", 1), 5, c);
    REQUIRE(s.s_count == 0);
    REQUIRE(s.n2 == s.n1 / 5);
    REQUIRE(s.n1_identity);
    REQUIRE(s.n2_identity);

    // x^2 - 3 at p = 3: the singular point does not lift, so the N2
    // identity genuinely fails and is reported as such
    auto t = proof_identity_check(Polynomial::parse("x1^2 - 3", 1), 3, c);
    REQUIRE(t.s_count == 1);
    REQUIRE(t.n1_identity);
    REQUIRE_FALSE(t.n2_identity);

    // x^2 at p = 3: both identities hold (all lifts of 0 stay solutions)
    auto u = proof_identity_check(Polynomial::parse("x1^2", 1), 3, c);
    REQUIRE(u.s_count == 1);
    REQUIRE(u.y_count == 0);
    REQUIRE(u.n1_identity);
    REQUIRE(u.n2_identity);
}
