#ifndef PADSUM_RATFN_HPP
#define PADSUM_RATFN_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padsum/config.hpp"
#include "padsum/numeric.hpp"

namespace padsum {

// Polynomials in T over Q, coefficients ascending, no trailing zeros.
using QPoly = std::vector<Rat>;

inline void qp_trim(QPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline long qp_degree(const QPoly& f) { return static_cast<long>(f.size()) - 1; }

inline Rat qp_eval(const QPoly& f, const Rat& t) {
    Rat acc(0);
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * t + f[i];
    return acc;
}

inline QPoly qp_add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    qp_trim(r);
    return r;
}

inline QPoly qp_scale(const Rat& c, const QPoly& a) {
    if (c == 0) return {};
    QPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

inline QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    qp_trim(r);
    return r;
}

inline std::pair<QPoly, QPoly> qp_divmod(QPoly a, const QPoly& b) {
    if (b.empty()) throw std::invalid_argument("division by the zero polynomial");
    QPoly q;
    qp_trim(a);
    if (a.size() < b.size()) return {q, a};
    q.assign(a.size() - b.size() + 1, Rat(0));
    while (a.size() >= b.size() && !a.empty()) {
        // the leading term cancels exactly, so a shrinks every round
        Rat c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        qp_trim(a);
    }
    qp_trim(q);
    return {q, a};
}

inline QPoly qp_derivative(const QPoly& f) {
    QPoly r;
    for (std::size_t i = 1; i < f.size(); ++i) r.push_back(Rat(static_cast<long>(i)) * f[i]);
    qp_trim(r);
    return r;
}

inline QPoly qp_monic(QPoly f) {
    qp_trim(f);
    if (f.empty()) return f;
    Rat lead = f.back();
    for (auto& c : f) c /= lead;
    return f;
}

inline QPoly qp_gcd(QPoly a, QPoly b) {
    qp_trim(a);
    qp_trim(b);
    while (!b.empty()) {
        auto [q, r] = qp_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return qp_monic(a);
}

inline std::string qp_to_string(const QPoly& f, const std::string& var = "T") {
    if (f.empty()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        Rat c = f[i];
        if (first) {
            if (c < 0) { out += "-"; c = -c; }
        } else {
            out += c < 0 ? " - " : " + ";
            if (c < 0) c = -c;
        }
        first = false;
        if (i == 0 || c != 1) out += c.get_str();
        if (i > 0) {
            if (c != 1) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

// num/den with den(0) = 1 and gcd(num, den) = 1.
struct RationalFn {
    QPoly num;
    QPoly den;

    void normalize() {
        qp_trim(num);
        qp_trim(den);
        if (den.empty()) throw std::invalid_argument("zero denominator");
        if (num.empty()) {
            den = {Rat(1)};
            return;
        }
        QPoly g = qp_gcd(num, den);
        if (qp_degree(g) >= 1) {
            num = qp_divmod(num, g).first;
            den = qp_divmod(den, g).first;
        }
        if (den.empty() || den[0] == 0)
            throw std::invalid_argument("denominator vanishes at T = 0");
        Rat c = den[0];
        for (auto& x : den) x /= c;
        for (auto& x : num) x /= c;
    }

    // Power series expansion to order M (inclusive).
    std::vector<Rat> expand(int order) const {
        std::vector<Rat> c(static_cast<std::size_t>(order) + 1, Rat(0));
        for (int m = 0; m <= order; ++m) {
            Rat acc = m < static_cast<int>(num.size()) ? num[static_cast<std::size_t>(m)] : Rat(0);
            for (int k = 1; k <= m && k < static_cast<int>(den.size()); ++k)
                acc -= den[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(m - k)];
            c[static_cast<std::size_t>(m)] = acc / den[0];
        }
        return c;
    }
};

// ---------------------------------------------------------------------------
// Exact reconstruction: smallest d <= d_max such that a denominator of
// degree d fits all supplied coefficients. The linear system
//   sum_k b_k a_(j-k) = 0  for all j in (d, M]
// is solved exactly; any nullvector with b_0 != 0 normalizes to a candidate,
// which must then reproduce the full input series on re-expansion.
// ---------------------------------------------------------------------------

inline std::optional<std::vector<Rat>> nullspace_vector_with_unit_head(
    std::vector<std::vector<Rat>> rows, int ncols) {
    // Gauss-Jordan to reduced row echelon form.
    int nrows = static_cast<int>(rows.size());
    std::vector<int> pivot_col(static_cast<std::size_t>(nrows), -1);
    int rank = 0;
    for (int col = 0; col < ncols && rank < nrows; ++col) {
        int sel = -1;
        for (int r = rank; r < nrows; ++r)
            if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(rows[static_cast<std::size_t>(sel)], rows[static_cast<std::size_t>(rank)]);
        Rat inv = rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
        for (auto& x : rows[static_cast<std::size_t>(rank)]) x /= inv;
        for (int r = 0; r < nrows; ++r) {
            if (r == rank) continue;
            Rat c = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (c == 0) continue;
            for (int cc = 0; cc < ncols; ++cc)
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
                    c * rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(cc)];
        }
        pivot_col[static_cast<std::size_t>(rank)] = col;
        ++rank;
    }
    std::vector<bool> is_pivot(static_cast<std::size_t>(ncols), false);
    for (int r = 0; r < rank; ++r) is_pivot[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(r)])] = true;

    // Free-variable basis vectors; return the first with nonzero leading entry.
    for (int free = 0; free < ncols; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        std::vector<Rat> v(static_cast<std::size_t>(ncols), Rat(0));
        v[static_cast<std::size_t>(free)] = 1;
        for (int r = 0; r < rank; ++r) {
            int pc = pivot_col[static_cast<std::size_t>(r)];
            v[static_cast<std::size_t>(pc)] =
                -rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(free)];
        }
        if (v[0] != 0) return v;
    }
    return std::nullopt;
}

struct ReconstructionFailure {
    std::string reason;
};

inline std::optional<RationalFn> reconstruct_rational(const std::vector<Rat>& a, int d_max,
                                                      ReconstructionFailure* why = nullptr) {
    int M = static_cast<int>(a.size()) - 1;
    if (static_cast<int>(a.size()) < 2 * d_max + 2)
        throw std::invalid_argument("need at least 2*d_max+2 coefficients");
    for (int d = 0; d <= d_max; ++d) {
        // rows j = d+1 .. M over unknowns b_0..b_d
        std::vector<std::vector<Rat>> rows;
        for (int j = d + 1; j <= M; ++j) {
            std::vector<Rat> row;
            for (int k = 0; k <= d; ++k)
                row.push_back(j - k >= 0 ? a[static_cast<std::size_t>(j - k)] : Rat(0));
            rows.push_back(std::move(row));
        }
        // rows is nonempty: a.size() >= 2d+2 forces M - d >= d + 1 >= 1
        auto b = nullspace_vector_with_unit_head(std::move(rows), d + 1);
        if (!b) continue;
        // normalize b_0 = 1
        Rat b0 = (*b)[0];
        for (auto& x : *b) x /= b0;
        RationalFn R;
        R.den = *b;
        qp_trim(R.den);
        for (int j = 0; j <= d; ++j) {
            Rat c(0);
            for (int k = 0; k <= std::min(j, d); ++k)
                c += (*b)[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(j - k)];
            R.num.push_back(c);
        }
        qp_trim(R.num);
        R.normalize();
        // soundness: the reconstruction must reproduce every supplied
        // coefficient, not only the fitting window
        std::vector<Rat> back = R.expand(M);
        bool ok = true;
        for (int j = 0; j <= M; ++j)
            if (back[static_cast<std::size_t>(j)] != a[static_cast<std::size_t>(j)]) {
                ok = false;
                break;
            }
        if (ok) return R;
    }
    if (why)
        why->reason = "no linear recurrence of order <= " + std::to_string(d_max) +
                      " fits the " + std::to_string(M + 1) + " supplied coefficients";
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pole classification. The trivial pole is a simple pole at T = p; anything
// else (another location, or multiplicity >= 2 at T = p) is nontrivial.
// ---------------------------------------------------------------------------

struct PoleFactor {
    QPoly poly;        // normalized constant term 1
    int multiplicity;
    bool at_T_eq_p;
};

struct PoleReport {
    std::vector<PoleFactor> factors;
    int trivial_multiplicity = 0;  // multiplicity of the root T = p
    bool has_trivial_simple_pole_at_p = false;
    bool has_nontrivial_pole = false;
};

namespace detail {

// Trial-division factorization for the rational root search; gives up on
// large leftover cofactors (classification does not depend on it).
inline std::optional<std::map<Int, int>> try_factor(Int v) {
    std::map<Int, int> f;
    if (v < 0) v = -v;
    if (v == 0) return std::nullopt;
    for (Int d = 2; d * d <= v && d < 1000000; ++d)
        while (v % d == 0) {
            ++f[d];
            v /= d;
        }
    if (v > 1) {
        if (v.fits_slong_p() && is_prime_i64(v.get_si())) ++f[v];
        else return std::nullopt;  // leftover cofactor out of reach
    }
    return f;
}

inline std::vector<Int> divisors(const std::map<Int, int>& f, std::size_t cap = 4096) {
    std::vector<Int> ds{Int(1)};
    for (const auto& [pr, e] : f) {
        std::vector<Int> next;
        Int pk = 1;
        for (int i = 0; i <= e; ++i) {
            for (const auto& d : ds) next.push_back(d * pk);
            pk *= pr;
            if (next.size() > cap) return ds;  // enough candidates
        }
        ds = std::move(next);
    }
    return ds;
}

// All rational roots of f (exact), found via the rational root theorem on
// the integer-cleared polynomial; empty optional if the coefficient
// factorizations are out of reach.
inline std::optional<std::vector<Rat>> rational_roots(const QPoly& f) {
    if (qp_degree(f) < 1) return std::vector<Rat>{};
    Int lcm = 1;
    for (const auto& c : f) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Int> z;
    for (const auto& c : f) {
        Rat t = c * Rat(lcm);
        t.canonicalize();
        z.push_back(t.get_num());
    }
    // strip powers of T
    std::size_t low = 0;
    while (low < z.size() && z[low] == 0) ++low;
    std::vector<Int> zz(z.begin() + static_cast<long>(low), z.end());
    std::vector<Rat> roots;
    if (low > 0) roots.emplace_back(0);
    if (zz.size() < 2) return roots;
    auto f0 = try_factor(zz.front());
    auto fl = try_factor(zz.back());
    if (!f0 || !fl) return std::nullopt;
    for (const auto& u : divisors(*f0))
        for (const auto& v : divisors(*fl))
            for (int sign : {1, -1}) {
                Rat r(sign * u, v);
                r.canonicalize();
                if (qp_eval(f, r) == 0 &&
                    std::find(roots.begin(), roots.end(), r) == roots.end())
                    roots.push_back(r);
            }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

inline PoleReport classify_poles(const RationalFn& R_in, std::int64_t p) {
    RationalFn R = R_in;
    R.normalize();
    PoleReport report;
    QPoly den = R.den;
    // (1 - T/p) factors first
    QPoly trivial_factor{Rat(1), Rat(-1, static_cast<long>(p))};
    int e = 0;
    while (qp_degree(den) >= 1 && qp_eval(den, Rat(p)) == 0) {
        auto [q, r] = qp_divmod(den, trivial_factor);
        if (!r.empty()) throw std::logic_error("exact division failed");
        den = q;
        ++e;
    }
    report.trivial_multiplicity = e;
    report.has_trivial_simple_pole_at_p = (e == 1);
    if (e > 0) {
        report.factors.push_back(PoleFactor{trivial_factor, e, true});
    }
    // Yun's squarefree decomposition of what remains
    QPoly rest = den;
    if (qp_degree(rest) >= 1) {
        QPoly d = qp_derivative(rest);
        QPoly a = qp_gcd(rest, d);
        QPoly b = qp_divmod(rest, a).first;
        QPoly c = qp_divmod(d, a).first;
        int mult = 1;
        long cap = qp_degree(rest) + 1;
        // b holds the product of squarefree parts still to emit
        while (qp_degree(b) >= 1 && mult <= cap) {
            QPoly db = qp_derivative(b);
            QPoly diff = qp_add(c, qp_scale(Rat(-1), db));
            QPoly g = qp_gcd(b, diff);
            if (qp_degree(g) >= 1) {
                // g appears with multiplicity `mult`; split off rational
                // linear factors when the coefficients factor
                QPoly gn = g;
                auto roots = detail::rational_roots(gn);
                if (roots) {
                    for (const auto& r : *roots) {
                        if (r == 0) continue;  // impossible; den(0) = 1
                        QPoly lin{Rat(1), Rat(-1) / r};
                        int k = 0;
                        for (;;) {
                            auto [q2, r2] = qp_divmod(gn, lin);
                            if (!r2.empty()) break;
                            gn = q2;
                            ++k;
                        }
                        if (k > 0)
                            report.factors.push_back(PoleFactor{lin, mult * k, r == Rat(p)});
                    }
                }
                if (qp_degree(gn) >= 1) {
                    // normalize constant term to 1 (nonzero since den(0)=1)
                    QPoly gg = gn;
                    if (gg[0] != 0) {
                        Rat c0 = gg[0];
                        for (auto& x : gg) x /= c0;
                    }
                    report.factors.push_back(PoleFactor{gg, mult, false});
                }
            }
            b = qp_divmod(b, g).first;
            c = qp_divmod(diff, g).first;
            ++mult;
        }
    }
    bool nontrivial = (report.trivial_multiplicity >= 2) || qp_degree(den) >= 1;
    report.has_nontrivial_pole = nontrivial;
    return report;
}

}  // namespace padsum

#endif
