#ifndef PADSUM_EXPSUM_HPP
#define PADSUM_EXPSUM_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "padsum/config.hpp"
#include "padsum/counting.hpp"
#include "padsum/cyclotomic.hpp"
#include "padsum/fq.hpp"
#include "padsum/modulus.hpp"
#include "padsum/numeric.hpp"
#include "padsum/polynomial.hpp"
#include "padsum/support.hpp"

namespace padsum {

struct ExpSumResult {
    std::int64_t p = 0;
    int m = 0;
    int n = 0;
    std::string support;
    Int unit = 1;
    Rat scale;  // p^(-mn)
    bool exact_zero = false;
    double re = 0, im = 0;
    double magnitude = 0;
    double error_bound = 0;
    std::optional<Rat> exact_rational;  // set when the sum lies in Q
    std::shared_ptr<CycloSum> cyclo;    // the unscaled exact sum
    std::string method;

    void finish() {
        exact_zero = cyclo->is_zero();
        auto v = cyclo->evaluate(scale);
        re = v.re;
        im = v.im;
        magnitude = v.magnitude;
        error_bound = v.error;
        if (auto r = cyclo->rational_value()) {
            Rat ex = Rat(*r) * scale;
            ex.canonicalize();
            exact_rational = ex;
        }
    }
};

enum class ExpSumMethod { kAuto, kBrute, kLiftTree };

namespace detail {

// Sparse exponent histogram of Sigma zeta_{p^m'}^{g(y)} over y mod p^(m'),
// by the same recenter-and-renormalize recursion as the point counter. For
// m' >= 2 every residue with a unit gradient contributes zero (the top
// digit runs through a full nontrivial character sum), so only singular
// residues recurse.
class ExpSumLift {
  public:
    ExpSumLift(std::int64_t p, int n, const RunConfig& cfg) : p_(p), n_(n), cfg_(cfg) {
        check_budget(int_pow(p, static_cast<unsigned long>(n)), cfg.budget,
                     "expsum lift fanout");
    }

    using Hist = std::map<std::int64_t, Int>;

    // exponent histogram at level m of sum over y = a mod p (a restricted
    // by the support when given)
    Hist top(const Polynomial& f, int m, const Int& u, const BasicStepSupport* support) {
        std::uint64_t M = checked_pow(m);
        ZnRing R(M);
        PolyMap g;
        std::uint64_t uc = R.from_int(u);
        for (const auto& [mono, c] : f.terms()) {
            std::uint64_t v = R.mul(R.from_rational(c), uc);
            if (v != 0) g.emplace(mono, v);
        }
        Hist out;
        if (m == 0) {
            out[0] = 1;
            return out;
        }
        Model mo = build_model(g, m);
        forall_first_digits(support, [&](std::span<const std::uint64_t> a) {
            accumulate_digit(out, mo, g, m, a);
        });
        return out;
    }

  private:
    using PolyMap = padsum::detail::PolyMap;

    struct Model {
        ModPoly gm;
        std::vector<PolyMap> grad_p;
    };

    std::uint64_t checked_pow(int r) const {
        Int M = int_pow(p_, static_cast<unsigned long>(r));
        if (M >= (Int(1) << 62))
            throw BudgetError("modulus p^" + std::to_string(r) + " exceeds machine range");
        return M.get_ui();
    }

    Model build_model(const PolyMap& g, int r) const {
        Model mo;
        mo.gm = padsum::detail::to_modpoly(g, n_, checked_pow(r));
        PolyMap gp = padsum::detail::reduce_map(g, static_cast<std::uint64_t>(p_));
        for (int i = 0; i < n_; ++i)
            mo.grad_p.push_back(
                padsum::detail::derivative_map(gp, i, static_cast<std::uint64_t>(p_)));
        return mo;
    }

    template <class Fn>
    void forall_first_digits(const BasicStepSupport* support, Fn fn) const {
        std::vector<CoordRange> dom(static_cast<std::size_t>(n_), CoordRange{0, 1, p_});
        if (support)
            for (int i = 0; i < n_; ++i)
                if (!support->factors[static_cast<std::size_t>(i)].full)
                    dom[static_cast<std::size_t>(i)] = CoordRange{
                        static_cast<std::uint64_t>(
                            support->factors[static_cast<std::size_t>(i)].residue),
                        1, 1};
        for (TupleStream ts(dom); !ts.done(); ts.next()) fn(ts.point());
    }

    std::uint64_t eval_map_mod_p(const PolyMap& g, std::span<const std::uint64_t> a) const {
        ZnRing Fp(static_cast<std::uint64_t>(p_));
        std::uint64_t acc = 0;
        for (const auto& [m, c] : g) {
            std::uint64_t t = c % static_cast<std::uint64_t>(p_);
            for (std::size_t i = 0; i < m.exps.size(); ++i)
                t = Fp.mul(t, Fp.pow(a[i] % static_cast<std::uint64_t>(p_), m.exps[i]));
            acc = Fp.add(acc, t);
        }
        return acc;
    }

    // contribution of the residue class y = a mod p to the level-m histogram
    void accumulate_digit(Hist& out, const Model& mo, const PolyMap& g, int m,
                          std::span<const std::uint64_t> a) {
        std::uint64_t M = checked_pow(m);
        std::uint64_t ga = mo.gm.eval(a);
        if (m == 1) {
            out[static_cast<std::int64_t>(ga)] += 1;
            return;
        }
        bool unit_grad = false;
        for (int i = 0; i < n_ && !unit_grad; ++i)
            if (eval_map_mod_p(mo.grad_p[static_cast<std::size_t>(i)], a) != 0)
                unit_grad = true;
        if (unit_grad) return;  // full character sum over the top digit

        // recenter; split off the constant as a phase so the nonconstant
        // part h1 has content >= 2 and the level strictly drops
        PolyMap h = padsum::detail::taylor_shift(g, a, static_cast<std::uint64_t>(p_), M, n_);
        PolyMap h1 = h;
        h1.erase(Monomial(static_cast<std::size_t>(n_)));
        int e = content_valuation(h1, m);
        if (e >= m) {
            out[static_cast<std::int64_t>(ga)] +=
                int_pow(p_, static_cast<unsigned long>(n_) * static_cast<unsigned long>(m - 1));
            return;
        }
        std::uint64_t M2 = checked_pow(m - e);
        PolyMap h2 = divided(h1, e, M2);
        const Hist& sub = memo_hist(h2, m - e);
        Int mult = int_pow(p_, static_cast<unsigned long>(n_) * static_cast<unsigned long>(e - 1));
        Int pe = int_pow(p_, static_cast<unsigned long>(e));
        std::int64_t pe64 = static_cast<std::int64_t>(pe.get_ui());
        for (const auto& [j, c] : sub) {
            unsigned __int128 shifted =
                static_cast<unsigned __int128>(static_cast<std::uint64_t>(j)) *
                static_cast<std::uint64_t>(pe64);
            std::int64_t jj = static_cast<std::int64_t>(
                (static_cast<unsigned __int128>(ga) + shifted) % M);
            out[jj] += c * mult;
        }
    }

    int content_valuation(const PolyMap& g, int r) const {
        int best = r;
        for (const auto& [m, c] : g) {
            std::uint64_t v = c;
            int e = 0;
            while (v % static_cast<std::uint64_t>(p_) == 0 && e < r) {
                v /= static_cast<std::uint64_t>(p_);
                ++e;
            }
            best = std::min(best, e);
            if (best == 0) break;
        }
        return best;
    }

    PolyMap divided(const PolyMap& g, int e, std::uint64_t new_modulus) const {
        PolyMap out;
        Int pe = int_pow(p_, static_cast<unsigned long>(e));
        std::uint64_t d = pe.get_ui();
        for (const auto& [m, c] : g) {
            std::uint64_t v = (c / d) % new_modulus;
            if (v != 0) out.emplace(m, v);
        }
        return out;
    }

    const Hist& memo_hist(const PolyMap& g, int r) {
        Key key = make_key(g, r);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        if (memo_.size() > kMemoCap) throw BudgetError("expsum lift memo exceeded cap");
        Hist out;
        Model mo = build_model(g, r);
        forall_first_digits(nullptr, [&](std::span<const std::uint64_t> a) {
            accumulate_digit(out, mo, g, r, a);
        });
        return memo_.emplace(std::move(key), std::move(out)).first->second;
    }

    using Key = std::pair<int, std::vector<std::uint64_t>>;
    Key make_key(const PolyMap& g, int r) const {
        std::vector<std::uint64_t> blob;
        blob.reserve(g.size() * (static_cast<std::size_t>(n_) + 1));
        for (const auto& [m, c] : g) {
            for (auto e : m.exps) blob.push_back(e);
            blob.push_back(c);
        }
        return {r, std::move(blob)};
    }

    static constexpr std::size_t kMemoCap = 1 << 20;

    std::int64_t p_;
    int n_;
    RunConfig cfg_;
    std::map<Key, Hist> memo_;
};

}  // namespace detail

// The normalized complete sum p^(-mn) sum_x exp(2 pi i u f(x) / p^m) over
// the support, as an exact cyclotomic integer plus floating views.
inline ExpSumResult expsum_level(const Polynomial& f, std::int64_t p, int m,
                                 const BasicStepSupport& support, const Int& u,
                                 const RunConfig& cfg,
                                 ExpSumMethod method = ExpSumMethod::kAuto) {
    int n = f.nvars();
    support.validate(p, n);
    ModulusSpec spec(p, m);
    if (!f.prime_ok(Int(p)))
        throw NonInvertible("p=" + std::to_string(p) + " divides a coefficient denominator");
    Int g;
    mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), Int(p).get_mpz_t());
    if (g != 1) throw std::invalid_argument("u must be a unit mod p^m");

    ExpSumResult out;
    out.p = p;
    out.m = m;
    out.n = n;
    out.support = support.to_string();
    out.unit = u % spec.modulus;
    if (out.unit < 0) out.unit += spec.modulus;
    out.scale = Rat(Int(1), int_pow(p, static_cast<unsigned long>(m) *
                                           static_cast<unsigned long>(n)));
    out.scale.canonicalize();
    out.cyclo = std::make_shared<CycloSum>(p, m);

    Int points = domain_size(support.domain(p, m));
    bool brute_ok = points <= Int(cfg.budget) && spec.fits_machine() &&
                    spec.modulus <= Int(cfg.budget);
    if (method == ExpSumMethod::kBrute && !brute_ok)
        throw BudgetError("expsum enumeration over " + points.get_str() +
                          " points exceeds budget");
    if (method == ExpSumMethod::kAuto) method = brute_ok ? ExpSumMethod::kBrute
                                                         : ExpSumMethod::kLiftTree;

    if (method == ExpSumMethod::kBrute) {
        // histogram of u f over the support, then one reduction pass
        std::uint64_t M = spec.modulus_u64();
        ZnRing R(M);
        std::uint64_t uc = R.from_int(u);
        ModPoly gm = ModPoly::reduce(f, M);
        std::vector<std::int64_t> hist(M, 0);
        auto domain = support.domain(p, m);
        for (TupleStream ts(domain); !ts.done(); ts.next())
            ++hist[R.mul(gm.eval(ts.point()), uc)];
        for (std::uint64_t j = 0; j < M; ++j)
            if (hist[j]) out.cyclo->add(static_cast<std::int64_t>(j), Int(hist[j]));
        out.method = "brute";
    } else {
        detail::ExpSumLift lift(p, n, cfg);
        auto hist = lift.top(f, m, u, &support);
        for (const auto& [j, c] : hist) out.cyclo->add(j, c);
        out.method = "lift-tree";
    }
    out.finish();
    return out;
}

inline ExpSumResult expsum_level(const Polynomial& f, std::int64_t p, int m,
                                 const RunConfig& cfg,
                                 ExpSumMethod method = ExpSumMethod::kAuto) {
    return expsum_level(f, p, m, BasicStepSupport::full_support(f.nvars()), Int(1), cfg,
                        method);
}

// q^(-n) sum over F_q^n of zeta_p^(Tr(u f(x))).
inline ExpSumResult finite_field_sum(const Polynomial& f, const FqField& F,
                                     FqField::Elem u, const RunConfig& cfg) {
    int n = f.nvars();
    Int points = int_pow(Int(F.q()), static_cast<unsigned long>(n));
    check_budget(points, cfg.budget, "finite_field_sum");
    if (u == 0) throw std::invalid_argument("u must be nonzero");

    struct FqPoly {
        std::vector<std::pair<Monomial, FqField::Elem>> terms;
    };
    FqPoly g;
    for (const auto& [mono, c] : f.terms()) {
        FqField::Elem e = F.from_rational(c);
        if (e != 0) g.terms.emplace_back(mono, e);
    }

    std::vector<Int> hist(static_cast<std::size_t>(F.p()), Int(0));
    std::vector<CoordRange> dom(static_cast<std::size_t>(n), CoordRange{0, 1, F.q()});
    for (TupleStream ts(dom); !ts.done(); ts.next()) {
        const auto& x = ts.point();
        FqField::Elem acc = 0;
        for (const auto& [mono, c] : g.terms) {
            FqField::Elem t = c;
            for (std::size_t i = 0; i < mono.exps.size(); ++i)
                for (std::uint32_t e = 0; e < mono.exps[i]; ++e)
                    t = F.mul(t, static_cast<FqField::Elem>(x[i]));
            acc = F.add(acc, t);
        }
        ++hist[static_cast<std::size_t>(F.trace(F.mul(u, acc)))];
    }

    ExpSumResult out;
    out.p = F.p();
    out.m = 1;
    out.n = n;
    out.support = "F_" + std::to_string(F.q()) + "^" + std::to_string(n);
    out.unit = Int(u);
    out.scale = Rat(Int(1), points);
    out.scale.canonicalize();
    out.cyclo = std::make_shared<CycloSum>(F.p(), 1);
    for (std::size_t j = 0; j < hist.size(); ++j)
        if (hist[j] != 0) out.cyclo->add(static_cast<std::int64_t>(j), hist[j]);
    out.method = "fq-brute";
    out.finish();
    return out;
}

// ---------------------------------------------------------------------------
// Level-2 decomposition along A_f (singular residues) and B_f (unit-gradient
// residues). For every a in B the inner sum over lifts is a full nontrivial
// character sum; the machinery computes it and reports whether it is exactly
// zero rather than assuming so.
// ---------------------------------------------------------------------------

struct M2Decomposition {
    std::int64_t p;
    Int a_count;       // #A_f(F_p) = #C_f(F_p)
    Rat a_measure;     // #A_f * p^-n
    bool b_part_zero;
    ExpSumResult total;  // E_f(p^2)
    bool bound_holds;    // |E_f(p^2)| <= measure(A_f) within float error
};

inline M2Decomposition decomposition_m2(const Polynomial& f, std::int64_t p, const Int& u,
                                        const RunConfig& cfg) {
    int n = f.nvars();
    ModulusSpec spec(p, 2);
    check_budget(int_pow(p, static_cast<unsigned long>(n)), cfg.budget, "decomposition_m2");
    if (!f.prime_ok(Int(p)))
        throw NonInvertible("p=" + std::to_string(p) + " divides a coefficient denominator");
    std::uint64_t M2 = spec.modulus_u64();
    ZnRing R(M2);
    ZnRing Fp(static_cast<std::uint64_t>(p));
    std::uint64_t uc = R.from_int(u);
    ModPoly g2 = ModPoly::reduce(f, M2);
    std::vector<ModPoly> grad1;
    for (const auto& d : f.gradient())
        grad1.push_back(ModPoly::reduce(d, static_cast<std::uint64_t>(p)));

    CycloSum a_part(p, 2), b_part(p, 2);
    Int a_count = 0;
    Int pn1 = int_pow(p, static_cast<unsigned long>(n - 1));
    Int pn = pn1 * p;
    std::vector<CoordRange> dom(static_cast<std::size_t>(n), CoordRange{0, 1, p});
    for (TupleStream ts(dom); !ts.done(); ts.next()) {
        const auto& a = ts.point();
        // exact Taylor identity at level 2: f(a + p t) = f(a) + p grad f(a).t
        std::uint64_t val = R.mul(g2.eval(a), uc);
        bool singular = true;
        for (const auto& d : grad1)
            if (d.eval(a) != 0) { singular = false; break; }
        if (singular) {
            a_part.add(static_cast<std::int64_t>(val), pn);
            a_count += 1;
        } else {
            // u grad f(a).t sweeps every residue s mod p with multiplicity
            // p^(n-1)
            for (std::int64_t s = 0; s < p; ++s)
                b_part.add(static_cast<std::int64_t>(R.add(
                               val, static_cast<std::uint64_t>(s * p) % M2)),
                           pn1);
        }
    }

    M2Decomposition out{p, a_count, Rat(a_count, pn), false, ExpSumResult{}, false};
    out.a_measure.canonicalize();
    out.b_part_zero = b_part.is_zero();

    ExpSumResult total;
    total.p = p;
    total.m = 2;
    total.n = n;
    total.support = BasicStepSupport::full_support(n).to_string();
    total.unit = u % spec.modulus;
    if (total.unit < 0) total.unit += spec.modulus;
    total.scale = Rat(Int(1), int_pow(p, 2ul * static_cast<unsigned long>(n)));
    total.scale.canonicalize();
    total.cyclo = std::make_shared<CycloSum>(p, 2);
    total.cyclo->add_sum(a_part);
    total.cyclo->add_sum(b_part);
    total.method = "m2-taylor";
    total.finish();
    out.total = total;
    out.bound_holds =
        total.magnitude <= rat_to_double(out.a_measure) + total.error_bound;
    return out;
}

// ---------------------------------------------------------------------------
// E_f(N) by CRT: the product over prime powers p^m || N of the local sums
// with unit multiplier (N/p^m)^(-1) mod p^m. When the direct N^n-point sum
// fits the budget it is computed too and must agree within error bounds.
// ---------------------------------------------------------------------------

struct GlobalSumResult {
    Int N;
    bool exact_zero = false;
    double re = 0, im = 0, magnitude = 0, error_bound = 0;
    std::vector<ExpSumResult> local_factors;
    bool direct_checked = false;
    double direct_difference = 0;
};

inline GlobalSumResult global_sum(const Polynomial& f, const Int& N, const RunConfig& cfg) {
    if (N <= 0) throw std::invalid_argument("N must be positive");
    GlobalSumResult out;
    out.N = N;
    if (N == 1) {
        out.re = 1;
        out.magnitude = 1;
        return out;
    }
    // factor N
    std::vector<std::pair<std::int64_t, int>> factors;
    Int rest = N;
    for (Int d = 2; d * d <= rest; ++d)
        if (rest % d == 0) {
            int e = 0;
            while (rest % d == 0) { rest /= d; ++e; }
            factors.emplace_back(to_int64(d), e);
        }
    if (rest > 1) factors.emplace_back(to_int64(rest), 1);

    long double re = 1, im = 0, err = 0;
    bool any_zero = false;
    for (auto [p, m] : factors) {
        Int pm = int_pow(p, static_cast<unsigned long>(m));
        Int cof = N / pm;
        Int u;
        if (mpz_invert(u.get_mpz_t(), cof.get_mpz_t(), pm.get_mpz_t()) == 0)
            throw std::logic_error("cofactor not invertible");
        ExpSumResult local =
            expsum_level(f, p, m, BasicStepSupport::full_support(f.nvars()), u, cfg);
        any_zero = any_zero || local.exact_zero;
        long double lr = local.re, li = local.im;
        long double nre = re * lr - im * li;
        long double nim = re * li + im * lr;
        // |ab| error: |a| err_b + |b| err_a + err_a err_b
        long double mag_prev = hypotl(re, im);
        err = mag_prev * local.error_bound + local.magnitude * err +
              err * local.error_bound;
        re = nre;
        im = nim;
        out.local_factors.push_back(std::move(local));
    }
    out.exact_zero = any_zero;
    out.re = static_cast<double>(re);
    out.im = static_cast<double>(im);
    out.magnitude = static_cast<double>(hypotl(re, im));
    out.error_bound = static_cast<double>(err) + 1e-18;

    // direct oracle when affordable
    Int points;
    mpz_pow_ui(points.get_mpz_t(), N.get_mpz_t(), static_cast<unsigned long>(f.nvars()));
    if (points <= Int(cfg.budget) && N < Int(1) << 31) {
        std::uint64_t Nu = N.get_ui();
        ZnRing R(Nu);
        ModPoly g = ModPoly::reduce(f, Nu);
        const long double tau = 6.283185307179586476925286766559L;
        long double dre = 0, dim_ = 0;
        std::vector<CoordRange> dom(static_cast<std::size_t>(f.nvars()),
                                    CoordRange{0, 1, static_cast<std::int64_t>(Nu)});
        for (TupleStream ts(dom); !ts.done(); ts.next()) {
            std::uint64_t v = g.eval(ts.point());
            long double ang = tau * static_cast<long double>(v) / static_cast<long double>(Nu);
            dre += cosl(ang);
            dim_ += sinl(ang);
        }
        long double scale = 1.0L;
        for (int i = 0; i < f.nvars(); ++i) scale /= static_cast<long double>(Nu);
        dre *= scale;
        dim_ *= scale;
        out.direct_checked = true;
        out.direct_difference = static_cast<double>(hypotl(re - dre, im - dim_));
        if (out.direct_difference > out.error_bound + 1e-9)
            throw std::logic_error("CRT product disagrees with the direct sum by " +
                                   std::to_string(out.direct_difference));
    }
    return out;
}

}  // namespace padsum

#endif
