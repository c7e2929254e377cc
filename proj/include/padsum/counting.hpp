#ifndef PADSUM_COUNTING_HPP
#define PADSUM_COUNTING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padsum/config.hpp"
#include "padsum/fq.hpp"
#include "padsum/modulus.hpp"
#include "padsum/numeric.hpp"
#include "padsum/parallel.hpp"
#include "padsum/polynomial.hpp"
#include "padsum/rings.hpp"
#include "padsum/support.hpp"

namespace padsum {

// ---------------------------------------------------------------------------
// Reduced integer polynomials mod M, the workhorse of the enumeration loops.
// ---------------------------------------------------------------------------

struct ModPoly {
    int n = 1;
    std::uint64_t modulus = 2;
    // sorted grlex-descending, coefficients in [1, M)
    std::vector<std::pair<Monomial, std::uint64_t>> terms;

    static ModPoly reduce(const Polynomial& f, std::uint64_t modulus) {
        ZnRing R(modulus);
        ModPoly g;
        g.n = f.nvars();
        g.modulus = modulus;
        for (const auto& [m, c] : f.terms()) {
            std::uint64_t v = R.from_rational(c);
            if (v != 0) g.terms.emplace_back(m, v);
        }
        return g;
    }

    bool is_zero() const { return terms.empty(); }

    std::uint64_t eval(std::span<const std::uint64_t> x) const {
        ZnRing R(modulus);
        std::uint64_t acc = 0;
        for (const auto& [m, c] : terms) {
            std::uint64_t t = c;
            for (std::size_t i = 0; i < m.exps.size(); ++i) {
                std::uint64_t b = x[i] % modulus;
                for (std::uint32_t e = 0; e < m.exps[i]; ++e) t = R.mul(t, b);
            }
            acc = R.add(acc, t);
        }
        return acc;
    }
};

namespace detail {

using PolyMap = std::map<Monomial, std::uint64_t, GrlexDesc>;

inline PolyMap to_map(const ModPoly& g) {
    PolyMap m;
    for (const auto& t : g.terms) m.insert(t);
    return m;
}

inline ModPoly to_modpoly(const PolyMap& m, int n, std::uint64_t modulus) {
    ModPoly g;
    g.n = n;
    g.modulus = modulus;
    for (const auto& t : m)
        if (t.second != 0) g.terms.push_back(t);
    return g;
}

inline PolyMap reduce_map(const PolyMap& g, std::uint64_t M) {
    PolyMap out;
    for (const auto& [m, c] : g) {
        std::uint64_t v = c % M;
        if (v != 0) out.emplace(m, v);
    }
    return out;
}

inline PolyMap derivative_map(const PolyMap& g, int var, std::uint64_t M) {
    ZnRing R(M);
    PolyMap out;
    for (const auto& [m, c] : g) {
        std::uint32_t e = m.exps[static_cast<std::size_t>(var)];
        if (e == 0) continue;
        std::uint64_t v = R.mul(c % M, static_cast<std::uint64_t>(e) % M);
        if (v == 0) continue;
        Monomial d = m;
        d.exps[static_cast<std::size_t>(var)] -= 1;
        auto [it, fresh] = out.try_emplace(d, 0);
        it->second = R.add(it->second, v);
        if (it->second == 0) out.erase(it);
    }
    return out;
}

// h(z) = g(a + p z) mod M, one variable at a time via binomial expansion.
inline PolyMap taylor_shift(const PolyMap& g, std::span<const std::uint64_t> a,
                            std::uint64_t p, std::uint64_t M, int n) {
    ZnRing R(M);
    PolyMap cur = g;
    for (int var = 0; var < n; ++var) {
        std::uint64_t av = a[static_cast<std::size_t>(var)] % M;
        PolyMap next;
        auto accumulate = [&](Monomial m, std::uint64_t c) {
            if (c == 0) return;
            auto [it, fresh] = next.try_emplace(std::move(m), 0);
            it->second = R.add(it->second, c);
            if (it->second == 0) next.erase(it);
        };
        for (const auto& [mono, c] : cur) {
            std::uint32_t e = mono.exps[static_cast<std::size_t>(var)];
            if (e == 0) {
                accumulate(mono, c);
                continue;
            }
            // (a + p z)^e = sum_j C(e,j) a^(e-j) p^j z^j
            std::uint64_t binom = 1;
            for (std::uint32_t j = 0; j <= e; ++j) {
                std::uint64_t coef = R.mul(c, binom % M);
                coef = R.mul(coef, R.pow(av, e - j));
                coef = R.mul(coef, R.pow(p % M, j));
                Monomial m2 = mono;
                m2.exps[static_cast<std::size_t>(var)] = j;
                accumulate(std::move(m2), coef);
                if (j < e) binom = binom * (e - j) / (j + 1);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact solution counts N_{f,p,m}
// ---------------------------------------------------------------------------

struct SolutionCount {
    std::int64_t p;
    int m;
    int n;
    Int raw;         // #solutions in (Z/p^m)^n (restricted to the support, if any)
    Rat normalized;  // raw / p^(mn)
    std::string method;

    SolutionCount(std::int64_t p_, int m_, int n_, Int raw_, std::string method_)
        : p(p_), m(m_), n(n_), raw(std::move(raw_)), method(std::move(method_)) {
        Int total = int_pow(p_, static_cast<unsigned long>(m_) * static_cast<unsigned long>(n_));
        if (raw < 0 || raw > total) throw std::logic_error("raw count out of range");
        normalized = Rat(raw, total);
        normalized.canonicalize();
    }
};

enum class CountMethod { kBrute, kHenselList, kLiftTree };

inline const char* count_method_name(CountMethod m) {
    switch (m) {
        case CountMethod::kBrute: return "brute";
        case CountMethod::kHenselList: return "hensel";
        case CountMethod::kLiftTree: return "lift-tree";
    }
    return "?";
}

inline Int count_bruteforce_raw(const Polynomial& f, const ModulusSpec& spec,
                                const RunConfig& cfg,
                                const BasicStepSupport* support = nullptr) {
    int n = f.nvars();
    BasicStepSupport full = BasicStepSupport::full_support(n);
    const BasicStepSupport& supp = support ? *support : full;
    supp.validate(spec.p, n);
    auto domain = supp.domain(spec.p, spec.m);
    check_budget(domain_size(domain), cfg.budget, "count_bruteforce");
    ModPoly g = ModPoly::reduce(f, spec.modulus_u64());

    std::int64_t first_count = domain[0].count;
    int chunks = static_cast<int>(std::min<std::int64_t>(std::max(1, cfg.jobs * 4), first_count));
    auto partial = parallel_map<Int>(cfg.jobs, chunks, [&](int chunk) {
        std::int64_t lo = first_count * chunk / chunks;
        std::int64_t hi = first_count * (chunk + 1) / chunks;
        long local = 0;
        for (TupleStream ts(domain, lo, hi); !ts.done(); ts.next())
            if (g.eval(ts.point()) == 0) ++local;
        return Int(local);
    });
    Int total = 0;
    for (const auto& c : partial) total += c;
    return total;
}

inline SolutionCount count_bruteforce(const Polynomial& f, const ModulusSpec& spec,
                                      const RunConfig& cfg) {
    return SolutionCount(spec.p, spec.m, f.nvars(),
                         count_bruteforce_raw(f, spec, cfg), "brute");
}

// ---------------------------------------------------------------------------
// Value histograms c_j = #{x : f(x) = j mod p^m}
// ---------------------------------------------------------------------------

struct ValueHistogram {
    std::int64_t p;
    int m;
    int n;
    std::vector<std::int64_t> counts;  // length p^m

    Int total() const {
        Int t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

inline ValueHistogram value_histogram(const Polynomial& f, const ModulusSpec& spec,
                                      const RunConfig& cfg,
                                      const BasicStepSupport* support = nullptr) {
    int n = f.nvars();
    BasicStepSupport full = BasicStepSupport::full_support(n);
    const BasicStepSupport& supp = support ? *support : full;
    supp.validate(spec.p, n);
    auto domain = supp.domain(spec.p, spec.m);
    check_budget(domain_size(domain), cfg.budget, "value_histogram");
    std::uint64_t M = spec.modulus_u64();
    check_budget(Int(M), cfg.budget, "value_histogram (bins)");
    ModPoly g = ModPoly::reduce(f, M);

    std::int64_t first_count = domain[0].count;
    int chunks = static_cast<int>(std::min<std::int64_t>(std::max(1, cfg.jobs), first_count));
    auto partial = parallel_map<std::vector<std::int64_t>>(cfg.jobs, chunks, [&](int chunk) {
        std::int64_t lo = first_count * chunk / chunks;
        std::int64_t hi = first_count * (chunk + 1) / chunks;
        std::vector<std::int64_t> h(M, 0);
        for (TupleStream ts(domain, lo, hi); !ts.done(); ts.next())
            ++h[g.eval(ts.point())];
        return h;
    });
    ValueHistogram out{spec.p, spec.m, n, std::vector<std::int64_t>(M, 0)};
    for (const auto& h : partial)
        for (std::uint64_t j = 0; j < M; ++j) out.counts[j] += h[j];
    return out;
}

// ---------------------------------------------------------------------------
// Hensel lifting with explicit per-level solution lists.
//
// A solution x mod p^(m-1), m >= 2, lifts to p^(n-1) solutions mod p^m when
// grad f(x) is a unit mod p; otherwise it lifts to p^n solutions when
// f(x) = 0 mod p^m and to none otherwise.
// ---------------------------------------------------------------------------

inline Int count_hensel_raw(const Polynomial& f, const ModulusSpec& spec,
                            const RunConfig& cfg, bool fallback_to_brute = false) {
    int n = f.nvars();
    std::int64_t p = spec.p;
    if (!spec.fits_machine()) throw BudgetError("modulus too large for the list-based lift");

    try {
        check_budget(int_pow(p, static_cast<unsigned long>(n)), cfg.budget, "count_hensel base");
        ModPoly g1 = ModPoly::reduce(f, static_cast<std::uint64_t>(p));
        std::vector<ModPoly> grad1;
        for (const auto& d : f.gradient())
            grad1.push_back(ModPoly::reduce(d, static_cast<std::uint64_t>(p)));

        std::vector<std::uint64_t> list;  // n packed coords per solution
        {
            std::vector<CoordRange> dom(static_cast<std::size_t>(n), CoordRange{0, 1, p});
            for (TupleStream ts(dom); !ts.done(); ts.next())
                if (g1.eval(ts.point()) == 0)
                    list.insert(list.end(), ts.point().begin(), ts.point().end());
        }

        auto guard = [&](std::size_t entries) {
            if (static_cast<std::int64_t>(entries) > cfg.hensel_list_budget)
                throw BudgetError("hensel solution list exceeds budget");
        };

        ZnRing Fp(static_cast<std::uint64_t>(p));
        std::uint64_t pj = static_cast<std::uint64_t>(p);  // p^(j-1) while lifting to level j
        std::vector<std::uint64_t> x(static_cast<std::size_t>(n));
        std::vector<std::uint64_t> grad_val(static_cast<std::size_t>(n));
        std::vector<std::uint64_t> child(static_cast<std::size_t>(n));
        for (int j = 2; j <= spec.m; ++j) {
            std::uint64_t pj_next = pj * static_cast<std::uint64_t>(p);
            ModPoly gj = ModPoly::reduce(f, pj_next);
            std::vector<std::uint64_t> next;
            for (std::size_t off = 0; off < list.size(); off += static_cast<std::size_t>(n)) {
                for (int i = 0; i < n; ++i)
                    x[static_cast<std::size_t>(i)] = list[off + static_cast<std::size_t>(i)];
                int pivot = -1;
                for (int i = 0; i < n; ++i) {
                    grad_val[static_cast<std::size_t>(i)] =
                        grad1[static_cast<std::size_t>(i)].eval(x);
                    if (pivot < 0 && grad_val[static_cast<std::size_t>(i)] != 0) pivot = i;
                }
                std::uint64_t fx = gj.eval(x);
                if (pivot >= 0) {
                    // unit gradient: p^(n-1) lifts solving a linear congruence
                    std::uint64_t val = (fx / pj) % static_cast<std::uint64_t>(p);
                    std::uint64_t ginv = Fp.inverse(grad_val[static_cast<std::size_t>(pivot)]);
                    std::vector<CoordRange> tdom(static_cast<std::size_t>(n),
                                                 CoordRange{0, 1, p});
                    tdom[static_cast<std::size_t>(pivot)] = CoordRange{0, 1, 1};
                    for (TupleStream ts(tdom); !ts.done(); ts.next()) {
                        std::uint64_t rhs = val;
                        for (int i = 0; i < n; ++i)
                            if (i != pivot)
                                rhs = Fp.add(rhs,
                                             Fp.mul(grad_val[static_cast<std::size_t>(i)],
                                                    ts.point()[static_cast<std::size_t>(i)]));
                        std::uint64_t tpiv = Fp.mul(ginv, Fp.neg(rhs));
                        for (int i = 0; i < n; ++i) {
                            std::uint64_t t =
                                (i == pivot) ? tpiv : ts.point()[static_cast<std::size_t>(i)];
                            child[static_cast<std::size_t>(i)] =
                                x[static_cast<std::size_t>(i)] + pj * t;
                        }
                        next.insert(next.end(), child.begin(), child.end());
                    }
                } else if (fx == 0) {
                    // degenerate solution still vanishing at this level: every
                    // one of the p^n lifts is a solution
                    std::vector<CoordRange> tdom(static_cast<std::size_t>(n),
                                                 CoordRange{0, 1, p});
                    for (TupleStream ts(tdom); !ts.done(); ts.next()) {
                        for (int i = 0; i < n; ++i)
                            child[static_cast<std::size_t>(i)] =
                                x[static_cast<std::size_t>(i)] +
                                pj * ts.point()[static_cast<std::size_t>(i)];
                        next.insert(next.end(), child.begin(), child.end());
                    }
                }
                guard(next.size() / static_cast<std::size_t>(n));
            }
            list = std::move(next);
            pj = pj_next;
        }
        return Int(static_cast<unsigned long>(list.size() / static_cast<std::size_t>(n)));
    } catch (const BudgetError&) {
        if (fallback_to_brute) return count_bruteforce_raw(f, spec, cfg);
        throw;
    }
}

inline SolutionCount count_hensel(const Polynomial& f, const ModulusSpec& spec,
                                  const RunConfig& cfg, bool fallback_to_brute = false) {
    return SolutionCount(spec.p, spec.m, f.nvars(),
                         count_hensel_raw(f, spec, cfg, fallback_to_brute), "hensel");
}

// ---------------------------------------------------------------------------
// Renormalizing lift recursion.
//
// Residue classes with a unit gradient close in one step (Hensel); singular
// classes are recentered, x = a + p z, the content p^e of the shifted
// polynomial is divided out, and the count mod p^(r-e) is resolved through
// a memo table keyed on the reduced local model. This reaches truncation
// orders far beyond what explicit solution lists can hold.
// ---------------------------------------------------------------------------

class LiftCounter {
  public:
    LiftCounter(std::int64_t p, int n, const RunConfig& cfg) : p_(p), n_(n), cfg_(cfg) {
        check_budget(int_pow(p, static_cast<unsigned long>(n)), cfg.budget, "lift tree fanout");
        pn_ = int_pow(p_, static_cast<unsigned long>(n_));
    }

    // #solutions of f = 0 mod p^m, optionally restricted to the first
    // digits allowed by a basic step support.
    Int count(const Polynomial& f, int m, const BasicStepSupport* support = nullptr) {
        if (m == 0) return Int(1);
        std::uint64_t M = checked_pow(m);
        detail::PolyMap g = detail::to_map(ModPoly::reduce(f, M));
        return top_count(g, m, support);
    }

    std::size_t memo_size() const { return memo_.size(); }

  private:
    struct Model {
        ModPoly gm;                          // mod p^r
        std::vector<detail::PolyMap> grad_p;  // gradient mod p
    };

    Model build_model(const detail::PolyMap& g, int r) const {
        Model mo;
        mo.gm = detail::to_modpoly(g, n_, checked_pow(r));
        detail::PolyMap gp = detail::reduce_map(g, static_cast<std::uint64_t>(p_));
        for (int i = 0; i < n_; ++i)
            mo.grad_p.push_back(detail::derivative_map(gp, i, static_cast<std::uint64_t>(p_)));
        return mo;
    }

    std::uint64_t checked_pow(int r) const {
        Int M = int_pow(p_, static_cast<unsigned long>(r));
        if (M >= (Int(1) << 62))
            throw BudgetError("modulus p^" + std::to_string(r) + " exceeds machine range");
        return M.get_ui();
    }

    static int content_valuation(const detail::PolyMap& g, std::int64_t p, int r) {
        int best = r;
        for (const auto& [m, c] : g) {
            std::uint64_t v = c;
            int e = 0;
            while (v % static_cast<std::uint64_t>(p) == 0 && e < r) {
                v /= static_cast<std::uint64_t>(p);
                ++e;
            }
            best = std::min(best, e);
            if (best == 0) break;
        }
        return best;
    }

    static detail::PolyMap divided(const detail::PolyMap& g, std::int64_t p, int e,
                                   std::uint64_t new_modulus) {
        detail::PolyMap out;
        Int pe = int_pow(p, static_cast<unsigned long>(e));
        std::uint64_t d = pe.get_ui();
        for (const auto& [m, c] : g) {
            std::uint64_t v = (c / d) % new_modulus;
            if (v != 0) out.emplace(m, v);
        }
        return out;
    }

    Int top_count(const detail::PolyMap& g, int m, const BasicStepSupport* support) {
        Int allowed = 1;
        if (support) {
            for (const auto& fct : support->factors)
                if (fct.full) allowed *= p_;
        } else {
            allowed = pn_;
        }
        int e0 = content_valuation(g, p_, m);
        if (e0 >= m)
            return allowed * int_pow(p_, static_cast<unsigned long>(n_) *
                                             static_cast<unsigned long>(m - 1));
        int r = m - e0;
        detail::PolyMap g0 =
            e0 == 0 ? detail::reduce_map(g, checked_pow(r)) : divided(g, p_, e0, checked_pow(r));
        Model mo = build_model(g0, r);
        Int total = 0;
        forall_first_digits(support, [&](std::span<const std::uint64_t> a) {
            total += digit_contribution(mo, g0, r, a);
        });
        return total * int_pow(p_, static_cast<unsigned long>(n_) *
                                       static_cast<unsigned long>(e0));
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

    std::uint64_t eval_map_mod_p(const detail::PolyMap& g,
                                 std::span<const std::uint64_t> a) const {
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

    // #solutions y = a mod p of g = 0 mod p^r, for g with unit content.
    Int digit_contribution(const Model& mo, const detail::PolyMap& g, int r,
                           std::span<const std::uint64_t> a) {
        std::uint64_t fa = mo.gm.eval(a);
        if (fa % static_cast<std::uint64_t>(p_) != 0) return Int(0);
        if (r == 1) return Int(1);
        bool unit_grad = false;
        for (int i = 0; i < n_ && !unit_grad; ++i)
            if (eval_map_mod_p(mo.grad_p[static_cast<std::size_t>(i)], a) != 0) unit_grad = true;
        if (unit_grad)
            return int_pow(p_, static_cast<unsigned long>(n_ - 1) *
                                   static_cast<unsigned long>(r - 1));
        // singular: recenter and renormalize
        std::uint64_t M = checked_pow(r);
        detail::PolyMap h =
            detail::taylor_shift(g, a, static_cast<std::uint64_t>(p_), M, n_);
        int e = content_valuation(h, p_, r);
        if (e >= r)
            return int_pow(p_, static_cast<unsigned long>(n_) *
                                   static_cast<unsigned long>(r - 1));
        detail::PolyMap h2 = divided(h, p_, e, checked_pow(r - e));
        return int_pow(p_, static_cast<unsigned long>(n_) *
                               static_cast<unsigned long>(e - 1)) *
               memo_count(h2, r - e);
    }

    Int memo_count(const detail::PolyMap& g, int r) {
        Key key = make_key(g, r);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        if (memo_.size() > kMemoCap)
            throw BudgetError("lift tree memo exceeded " + std::to_string(kMemoCap) +
                              " states");
        Model mo = build_model(g, r);
        Int total = 0;
        forall_first_digits(nullptr, [&](std::span<const std::uint64_t> a) {
            total += digit_contribution(mo, g, r, a);
        });
        memo_.emplace(std::move(key), total);
        return total;
    }

    using Key = std::pair<int, std::vector<std::uint64_t>>;
    Key make_key(const detail::PolyMap& g, int r) const {
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
    Int pn_;
    std::map<Key, Int> memo_;
};

inline SolutionCount count_points(const Polynomial& f, const ModulusSpec& spec,
                                  CountMethod method, const RunConfig& cfg) {
    if (!f.prime_ok(Int(spec.p)))
        throw NonInvertible("p=" + std::to_string(spec.p) +
                            " divides a coefficient denominator of f");
    switch (method) {
        case CountMethod::kBrute: return count_bruteforce(f, spec, cfg);
        case CountMethod::kHenselList: return count_hensel(f, spec, cfg);
        case CountMethod::kLiftTree: {
            LiftCounter lc(spec.p, f.nvars(), cfg);
            return SolutionCount(spec.p, spec.m, f.nvars(), lc.count(f, spec.m), "lift-tree");
        }
    }
    throw std::logic_error("bad method");
}

// ---------------------------------------------------------------------------
// Point counts of loci over F_q and dimension estimation
// ---------------------------------------------------------------------------

inline Int locus_count(const std::vector<Polynomial>& system, const FqField& F,
                       bool projective, const RunConfig& cfg) {
    if (system.empty()) throw std::invalid_argument("empty system");
    int n = system.front().nvars();
    for (const auto& f : system) {
        if (f.nvars() != n) throw std::invalid_argument("system arity mismatch");
        if (projective && !f.is_homogeneous())
            throw std::invalid_argument("projective counting needs a homogeneous system");
    }
    Int points = int_pow(Int(F.q()), static_cast<unsigned long>(n));
    check_budget(points, cfg.budget, "locus_count");

    struct FqPoly {
        std::vector<std::pair<Monomial, FqField::Elem>> terms;
    };
    std::vector<FqPoly> sys;
    for (const auto& f : system) {
        FqPoly g;
        for (const auto& [m, c] : f.terms()) {
            FqField::Elem e = F.from_rational(c);
            if (e != 0) g.terms.emplace_back(m, e);
        }
        sys.push_back(std::move(g));
    }

    std::int64_t q = F.q();
    std::vector<CoordRange> dom(static_cast<std::size_t>(n), CoordRange{0, 1, q});
    int chunks = static_cast<int>(std::min<std::int64_t>(std::max(1, cfg.jobs * 4), q));
    auto partial = parallel_map<Int>(cfg.jobs, chunks, [&](int chunk) {
        std::int64_t lo = q * chunk / chunks;
        std::int64_t hi = q * (chunk + 1) / chunks;
        long local = 0;
        for (TupleStream ts(dom, lo, hi); !ts.done(); ts.next()) {
            const auto& x = ts.point();
            if (projective) {
                bool all_zero = true;
                for (auto v : x)
                    if (v != 0) { all_zero = false; break; }
                if (all_zero) continue;
            }
            bool vanishes = true;
            for (const auto& g : sys) {
                FqField::Elem acc = 0;
                for (const auto& [m, c] : g.terms) {
                    FqField::Elem t = c;
                    for (std::size_t i = 0; i < m.exps.size(); ++i)
                        for (std::uint32_t e = 0; e < m.exps[i]; ++e)
                            t = F.mul(t, static_cast<FqField::Elem>(x[i]));
                    acc = F.add(acc, t);
                }
                if (acc != 0) { vanishes = false; break; }
            }
            if (vanishes) ++local;
        }
        return Int(local);
    });
    Int total = 0;
    for (const auto& c : partial) total += c;
    if (projective) {
        if (total % Int(q - 1) != 0)
            throw std::logic_error("projective count not divisible by q-1");
        total /= Int(q - 1);
    }
    return total;
}

// System cutting out the singular locus of the scheme at infinity: the
// leading form together with its gradient, to be counted projectively in
// P^(n-1). Only meaningful when the residue characteristic exceeds deg f.
inline std::vector<Polynomial> singular_locus_at_infinity(const Polynomial& f) {
    if (f.is_zero() || f.degree() < 1)
        throw std::invalid_argument("needs a nonconstant polynomial");
    Polynomial fd = f.leading_form();
    std::vector<Polynomial> sys = fd.gradient();
    sys.push_back(fd);
    return sys;
}

// ---------------------------------------------------------------------------
// Dimension from point-count growth: d = round(log_q(count)) at the largest
// extension degree with a nonzero count, per prime, plus a consensus.
// ---------------------------------------------------------------------------

struct DimensionEstimate {
    std::map<std::int64_t, long> per_prime;  // kDegNegInf for empty loci
    bool ambiguous = false;
    long consensus = kDegNegInf;
};

inline DimensionEstimate estimate_dimension(
    const std::map<std::int64_t, std::vector<Int>>& counts_per_prime) {
    if (counts_per_prime.size() < 2)
        throw std::invalid_argument("dimension estimation needs at least 2 primes");
    DimensionEstimate out;
    for (const auto& [p, counts] : counts_per_prime) {
        if (counts.size() < 3)
            throw std::invalid_argument("dimension estimation needs counts for k=1..K, K>=3");
        long dim = kDegNegInf;
        for (std::size_t k = counts.size(); k-- > 0;) {
            if (counts[k] > 0) {
                double logc = std::log(counts[k].get_d());
                double logq = static_cast<double>(k + 1) * std::log(static_cast<double>(p));
                dim = std::lround(logc / logq);
                break;
            }
        }
        out.per_prime[p] = dim;
    }
    bool first = true;
    for (const auto& [p, d] : out.per_prime) {
        if (first) { out.consensus = d; first = false; }
        else if (d != out.consensus) out.ambiguous = true;
    }
    if (out.ambiguous) out.consensus = kDegNegInf;
    return out;
}

struct LocusSummary {
    std::string tag;
    bool projective = false;
    std::map<std::int64_t, std::vector<Int>> counts;  // per prime, k = 1..K
    DimensionEstimate dims;
};

inline LocusSummary build_locus_summary(const std::vector<Polynomial>& system,
                                        const std::string& tag, bool projective,
                                        const std::vector<std::int64_t>& primes, int K,
                                        const RunConfig& cfg) {
    LocusSummary s;
    s.tag = tag;
    s.projective = projective;
    for (std::int64_t p : primes) {
        std::vector<Int> row;
        for (int k = 1; k <= K; ++k) {
            FqField F(p, k);
            row.push_back(locus_count(system, F, projective, cfg));
        }
        s.counts[p] = std::move(row);
    }
    s.dims = estimate_dimension(s.counts);
    return s;
}

// C_f: grad f = 0; S_f: f = grad f = 0.
inline std::vector<Polynomial> critical_system(const Polynomial& f) { return f.gradient(); }

inline std::vector<Polynomial> singular_system(const Polynomial& f) {
    auto sys = f.gradient();
    sys.push_back(f);
    return sys;
}

// ---------------------------------------------------------------------------
// Checks feeding the theorem harnesses
// ---------------------------------------------------------------------------

// Does every solution mod p lift to a solution mod p^2?
inline bool check_lift_surjectivity(const Polynomial& f, std::int64_t p, const RunConfig& cfg) {
    int n = f.nvars();
    ModulusSpec level2(p, 2);
    check_budget(int_pow(p, 2ul * static_cast<unsigned long>(n)), cfg.budget,
                 "check_lift_surjectivity");
    std::uint64_t M2 = level2.modulus_u64();
    ModPoly g1 = ModPoly::reduce(f, static_cast<std::uint64_t>(p));
    ModPoly g2 = ModPoly::reduce(f, M2);

    Int pn = int_pow(p, static_cast<unsigned long>(n));
    std::vector<bool> solution_mod_p(pn.get_ui(), false);
    std::vector<bool> lifted(pn.get_ui(), false);
    auto residue_code = [&](std::span<const std::uint64_t> x) {
        std::uint64_t c = 0;
        for (std::size_t i = x.size(); i-- > 0;)
            c = c * static_cast<std::uint64_t>(p) + x[i] % static_cast<std::uint64_t>(p);
        return c;
    };
    {
        std::vector<CoordRange> dom(static_cast<std::size_t>(n), CoordRange{0, 1, p});
        for (TupleStream ts(dom); !ts.done(); ts.next())
            if (g1.eval(ts.point()) == 0) solution_mod_p[residue_code(ts.point())] = true;
    }
    {
        std::vector<CoordRange> dom(static_cast<std::size_t>(n),
                                    CoordRange{0, 1, static_cast<std::int64_t>(M2)});
        for (TupleStream ts(dom); !ts.done(); ts.next())
            if (g2.eval(ts.point()) == 0) lifted[residue_code(ts.point())] = true;
    }
    for (std::size_t c = 0; c < solution_mod_p.size(); ++c)
        if (solution_mod_p[c] && !lifted[c]) return false;
    return true;
}

// The exact counting identities behind the nontrivial-pole argument:
//   N_1 = (#Y + #S) / q^n,   N_2 = #Y/q^(n+1) + #S/q^n,
// with Y the smooth and S the singular points of f = 0 over F_p. The second
// identity can genuinely fail at bad primes; both are reported, not asserted.
struct ProofIdentityRecord {
    std::int64_t p;
    Int y_count, s_count;
    Rat n1, n2;
    bool n1_identity;
    bool n2_identity;
};

inline ProofIdentityRecord proof_identity_check(const Polynomial& f, std::int64_t p,
                                                const RunConfig& cfg) {
    int n = f.nvars();
    check_budget(int_pow(p, static_cast<unsigned long>(n)), cfg.budget, "proof_identity_check");
    ModPoly g1 = ModPoly::reduce(f, static_cast<std::uint64_t>(p));
    std::vector<ModPoly> grad1;
    for (const auto& d : f.gradient())
        grad1.push_back(ModPoly::reduce(d, static_cast<std::uint64_t>(p)));

    Int y = 0, s = 0;
    std::vector<CoordRange> dom(static_cast<std::size_t>(n), CoordRange{0, 1, p});
    for (TupleStream ts(dom); !ts.done(); ts.next()) {
        if (g1.eval(ts.point()) != 0) continue;
        bool unit = false;
        for (const auto& d : grad1)
            if (d.eval(ts.point()) != 0) { unit = true; break; }
        (unit ? y : s) += 1;
    }

    LiftCounter lc(p, n, cfg);
    Int qn = int_pow(p, static_cast<unsigned long>(n));
    Rat n1(lc.count(f, 1), qn);
    n1.canonicalize();
    Rat n2(lc.count(f, 2), qn * qn);
    n2.canonicalize();

    Rat rhs1(y + s, qn);
    rhs1.canonicalize();
    Rat rhs2 = Rat(y, qn * p) + Rat(s, qn);
    rhs2.canonicalize();
    return ProofIdentityRecord{p, y, s, n1, n2, n1 == rhs1, n2 == rhs2};
}

}  // namespace padsum

#endif
