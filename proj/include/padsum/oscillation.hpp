#ifndef PADSUM_OSCILLATION_HPP
#define PADSUM_OSCILLATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "padsum/config.hpp"
#include "padsum/counting.hpp"
#include "padsum/expsum.hpp"
#include "padsum/numeric.hpp"
#include "padsum/parallel.hpp"
#include "padsum/polynomial.hpp"
#include "padsum/ratfn.hpp"
#include "padsum/zeta.hpp"

namespace padsum {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Resolution data supplied by the user: pairs (N_i, nu_i).
// ---------------------------------------------------------------------------

struct NumericalData {
    std::vector<std::pair<long, long>> pairs;  // (N_i, nu_i)
    bool essential_only = true;
    int n = 1;

    void validate() const {
        if (n < 1) throw std::invalid_argument("ambient dimension must be >= 1");
        for (const auto& [N, nu] : pairs)
            if (N < 1 || nu < 1) throw std::invalid_argument("numerical data must be >= 1");
    }
};

// -min nu_i/N_i over the essential set, or -2n when it is empty.
inline Rat alpha_pi(const NumericalData& data) {
    data.validate();
    if (data.pairs.empty()) return Rat(-2 * data.n);
    Rat best;
    bool first = true;
    for (const auto& [N, nu] : data.pairs) {
        Rat r(nu, N);
        r.canonicalize();
        if (first || r < best) { best = r; first = false; }
    }
    return -best;
}

// Chain of blow-ups from Remark-style refinement: (N, nu) with nu/N > 1
// yields (N+j, nu+j), j = 1..k, with ratios strictly decreasing toward 1.
inline std::vector<std::pair<long, long>> blowup_refine(std::pair<long, long> pair, int steps) {
    auto [N, nu] = pair;
    if (N < 1 || nu < 1) throw std::invalid_argument("numerical data must be >= 1");
    if (nu <= N) throw std::invalid_argument("refinement needs nu/N > 1");
    std::vector<std::pair<long, long>> out;
    for (int j = 1; j <= steps; ++j) out.emplace_back(N + j, nu + j);
    return out;
}

// ---------------------------------------------------------------------------
// Per-prime decay estimation
// ---------------------------------------------------------------------------

struct AlphaRow {
    int m;
    bool exact_zero;
    double magnitude;
    double error;
};

struct AlphaEstimate {
    std::int64_t p;
    int n;
    int m_lo, m_hi;
    std::vector<AlphaRow> rows;
    std::optional<double> slope;  // least-squares slope of log_p|E| against m
    bool vanishing_detected = false;
    bool alpha_neg_inf = false;
    std::optional<double> alpha_hat;

    ordered_json to_json() const {
        ordered_json rows_j = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json row;
            row["m"] = r.m;
            row["exact_zero"] = r.exact_zero;
            row["magnitude"] = r.magnitude;
            row["error_bound"] = r.error;
            if (!r.exact_zero && r.magnitude > 0)
                row["logp_magnitude_over_m"] =
                    std::log(r.magnitude) / (std::log(static_cast<double>(p)) * r.m);
            // the polynomial factor m^(n-1) of the generic bound, reported
            // in the same log_p units but never fitted
            row["logp_m_factor"] =
                (n - 1) * std::log(static_cast<double>(r.m)) / std::log(static_cast<double>(p));
            rows_j.push_back(row);
        }
        ordered_json j;
        j["p"] = p;
        j["rows"] = rows_j;
        if (slope) j["slope"] = *slope;
        j["vanishing_detected"] = vanishing_detected;
        if (alpha_neg_inf) j["alpha_hat"] = "-inf";
        else if (alpha_hat) j["alpha_hat"] = *alpha_hat;
        else j["alpha_hat"] = nullptr;
        return j;
    }
};

inline AlphaEstimate estimate_alpha(const Polynomial& f, std::int64_t p, int m_lo, int m_hi,
                                    const BasicStepSupport& support, const Int& u,
                                    const RunConfig& cfg) {
    if (m_lo < 1 || m_hi - m_lo + 1 < 3)
        throw std::invalid_argument("need at least 3 levels to estimate a decay exponent");
    AlphaEstimate est;
    est.p = p;
    est.n = f.nvars();
    est.m_lo = m_lo;
    est.m_hi = m_hi;
    for (int m = m_lo; m <= m_hi; ++m) {
        auto r = expsum_level(f, p, m, support, u, cfg);
        est.rows.push_back(AlphaRow{m, r.exact_zero, r.magnitude, r.error_bound});
    }
    // trailing run of exact zeros
    int zeros = 0;
    for (auto it = est.rows.rbegin(); it != est.rows.rend() && it->exact_zero; ++it) ++zeros;
    est.vanishing_detected = zeros >= std::min<int>(cfg.vanishing_window,
                                                    static_cast<int>(est.rows.size()));
    if (est.vanishing_detected) {
        est.alpha_neg_inf = true;
        return est;
    }
    // least squares on the nonvanishing rows
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    double logp = std::log(static_cast<double>(p));
    for (const auto& r : est.rows) {
        if (r.exact_zero || r.magnitude <= 0) continue;
        double x = r.m, y = std::log(r.magnitude) / logp;
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++k;
    }
    if (k >= 2) {
        double denom = k * sxx - sx * sx;
        if (denom != 0) {
            est.slope = (k * sxy - sx * sy) / denom;
            est.alpha_hat = est.slope;
        }
    } else if (k == 1) {
        // single usable level: report the ratio as the estimate
        for (const auto& r : est.rows)
            if (!r.exact_zero && r.magnitude > 0)
                est.alpha_hat = std::log(r.magnitude) / (logp * r.m);
    }
    return est;
}

inline AlphaEstimate estimate_alpha(const Polynomial& f, std::int64_t p, int m_lo, int m_hi,
                                    const RunConfig& cfg) {
    return estimate_alpha(f, p, m_lo, m_hi, BasicStepSupport::full_support(f.nvars()), Int(1),
                          cfg);
}

// Residues c = f(x) mod p at points of C_f(F_p); the shifts f - c carry the
// oscillation away from the zero fiber.
inline std::vector<std::int64_t> critical_shifts(const Polynomial& f, std::int64_t p,
                                                 const RunConfig& cfg) {
    int n = f.nvars();
    check_budget(int_pow(p, static_cast<unsigned long>(n)), cfg.budget, "critical_shifts");
    ModPoly g = ModPoly::reduce(f, static_cast<std::uint64_t>(p));
    std::vector<ModPoly> grad;
    for (const auto& d : f.gradient())
        grad.push_back(ModPoly::reduce(d, static_cast<std::uint64_t>(p)));
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    std::vector<CoordRange> dom(static_cast<std::size_t>(n), CoordRange{0, 1, p});
    for (TupleStream ts(dom); !ts.done(); ts.next()) {
        bool crit = true;
        for (const auto& d : grad)
            if (d.eval(ts.point()) != 0) { crit = false; break; }
        if (crit) seen[g.eval(ts.point())] = true;
    }
    std::vector<std::int64_t> out;
    for (std::int64_t c = 0; c < p; ++c)
        if (seen[static_cast<std::size_t>(c)]) out.push_back(c);
    return out;
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

struct PrimeVerdict {
    std::int64_t p;
    ordered_json quantities;
    std::string verdict;  // "pass" | "fail" | "inconclusive" | "skipped"
};

struct BoundReport {
    std::string theorem;
    std::vector<PrimeVerdict> primes;
    ordered_json constants = ordered_json::object();
    std::string overall;  // "pass" | "fail" | "inconclusive"

    void settle() {
        bool any_fail = false, any_inconclusive = false;
        for (const auto& pv : primes) {
            if (pv.verdict == "fail") any_fail = true;
            if (pv.verdict == "inconclusive") any_inconclusive = true;
        }
        overall = any_fail ? "fail" : (any_inconclusive ? "inconclusive" : "pass");
    }

    ordered_json to_json() const {
        ordered_json j;
        j["theorem"] = theorem;
        ordered_json arr = ordered_json::array();
        for (const auto& pv : primes) {
            ordered_json e;
            e["p"] = pv.p;
            e["quantities"] = pv.quantities;
            e["verdict"] = pv.verdict;
            arr.push_back(e);
        }
        j["per_prime"] = arr;
        j["constants"] = constants;
        j["overall"] = overall;
        return j;
    }
};

// Dimension of C_f from point counts at fixed estimation primes. Returns
// kDegNegInf for an empty locus.
inline long estimate_delta_f(const Polynomial& f, const RunConfig& cfg,
                             const std::vector<std::int64_t>& est_primes = {5, 7},
                             int K = 3) {
    auto summary = build_locus_summary(critical_system(f), "C_f", false, est_primes, K, cfg);
    return summary.dims.consensus;
}

// Nontrivial pole of the reconstructed Poincare series iff S_f(F_p) != 0.
inline BoundReport verify_pole_theorem(const Polynomial& f,
                                       const std::vector<std::int64_t>& primes,
                                       const RunConfig& cfg) {
    BoundReport rep;
    rep.theorem = "nontrivial-pole criterion";
    int M = std::max(cfg.truncation_order, 2 * cfg.reconstruction_dmax + 2);
    auto results = parallel_map<PrimeVerdict>(
        cfg.jobs, static_cast<int>(primes.size()), [&](int i) {
            std::int64_t p = primes[static_cast<std::size_t>(i)];
            PrimeVerdict pv;
            pv.p = p;
            auto P = poincare_truncation(f, p, M, SeriesMethod::kLift, cfg);
            ReconstructionFailure why;
            auto R = reconstruct_rational(P.coeffs, cfg.reconstruction_dmax, &why);
            Int s_count = f.is_zero()
                              ? int_pow(p, static_cast<unsigned long>(f.nvars()))
                              : locus_count(singular_system(f), FqField(p, 1), false, cfg);
            pv.quantities["S_f_count"] = s_count.get_str();
            if (!R) {
                pv.quantities["reconstruction"] = "inconclusive: " + why.reason;
                pv.verdict = "inconclusive";
                return pv;
            }
            auto poles = classify_poles(*R, p);
            pv.quantities["numerator"] = qp_to_string(R->num);
            pv.quantities["denominator"] = qp_to_string(R->den);
            pv.quantities["has_nontrivial_pole"] = poles.has_nontrivial_pole;
            bool equivalent = poles.has_nontrivial_pole == (s_count > 0);
            pv.verdict = equivalent ? "pass" : "fail";
            return pv;
        });
    rep.primes = results;
    rep.settle();
    return rep;
}

// (-n + delta_f)/2 <= alpha_f, read through per-prime decay estimates. A
// vanishing sum is consistent only when C_f(F_p) is empty.
inline BoundReport verify_lower_bound(const Polynomial& f,
                                      const std::vector<std::int64_t>& primes, int m_lo,
                                      int m_hi, const RunConfig& cfg,
                                      const std::vector<std::int64_t>& est_primes = {5, 7}) {
    BoundReport rep;
    rep.theorem = "oscillation-index lower bound";
    long delta_f = estimate_delta_f(f, cfg, est_primes);
    int n = f.nvars();
    rep.constants["delta_f_hat"] =
        delta_f == kDegNegInf ? ordered_json("-inf") : ordered_json(delta_f);
    double fitted_c = 0;  // max slack needed, in log_p units
    bool have_bound = delta_f != kDegNegInf;
    double bound = have_bound ? (static_cast<double>(-n) + static_cast<double>(delta_f)) / 2.0
                              : 0.0;
    if (have_bound) rep.constants["bound_exponent"] = bound;

    auto results = parallel_map<PrimeVerdict>(
        cfg.jobs, static_cast<int>(primes.size()), [&](int i) {
            std::int64_t p = primes[static_cast<std::size_t>(i)];
            PrimeVerdict pv;
            pv.p = p;
            auto est = estimate_alpha(f, p, m_lo, m_hi, cfg);
            pv.quantities["alpha"] = est.to_json();
            Int cf = locus_count(critical_system(f), FqField(p, 1), false, cfg);
            pv.quantities["C_f_count"] = cf.get_str();
            if (est.alpha_neg_inf) {
                // eventual vanishing must be matched by an empty critical locus
                pv.verdict = (cf == 0) ? "pass" : "fail";
                return pv;
            }
            if (!have_bound) {
                // empty critical scheme puts no lower constraint here
                pv.verdict = "pass";
                return pv;
            }
            int usable = 0;
            for (const auto& row : est.rows)
                if (!row.exact_zero && row.magnitude > 0) ++usable;
            if (!est.slope || usable < 3) {
                // too few non-vanishing levels to judge a decay exponent;
                // the measurements stand on their own
                pv.verdict = "reported";
                return pv;
            }
            pv.quantities["slope"] = *est.slope;
            pv.verdict = (*est.slope >= bound - cfg.slope_tolerance) ? "pass" : "fail";
            return pv;
        });
    rep.primes = results;
    // single fitted slack constant across primes and levels
    for (const auto& pv : rep.primes) {
        if (!pv.quantities.contains("alpha")) continue;
        for (const auto& row : pv.quantities["alpha"]["rows"]) {
            if (row["exact_zero"].get<bool>()) continue;
            double mag = row["magnitude"].get<double>();
            if (mag <= 0 || !have_bound) continue;
            double m = row["m"].get<double>();
            double slack =
                bound * m - std::log(mag) / std::log(static_cast<double>(pv.p));
            fitted_c = std::max(fitted_c, slack);
        }
    }
    rep.constants["fitted_slack"] = fitted_c;
    rep.settle();
    return rep;
}

// Katz-form level-1 bound and the level-2 bound with a single constant each
// across the tested primes. The level-1 clause applies to homogeneous f and
// to tame nonhomogeneous f; the level-2 clause to every polynomial.
inline BoundReport verify_m1_m2(const Polynomial& f, const std::vector<std::int64_t>& primes,
                                const RunConfig& cfg, bool m1_applicable_hint = false,
                                const std::vector<std::int64_t>& est_primes = {5, 7}) {
    BoundReport rep;
    rep.theorem = "level-1 and level-2 uniform bounds";
    int n = f.nvars();
    long delta_f = estimate_delta_f(f, cfg, est_primes);
    bool m1_applicable = f.is_homogeneous() || m1_applicable_hint;
    rep.constants["delta_f_hat"] =
        delta_f == kDegNegInf ? ordered_json("-inf") : ordered_json(delta_f);
    rep.constants["m1_clause_applicable"] = m1_applicable;

    long deg = f.is_zero() ? kDegNegInf : f.degree();
    double C = 0, D = 0;
    auto results = parallel_map<PrimeVerdict>(
        cfg.jobs, static_cast<int>(primes.size()), [&](int i) {
            std::int64_t p = primes[static_cast<std::size_t>(i)];
            PrimeVerdict pv;
            pv.p = p;
            if (deg != kDegNegInf && p <= deg) {
                pv.verdict = "skipped";
                pv.quantities["reason"] = "p <= deg f";
                return pv;
            }
            auto e1 = expsum_level(f, p, 1, cfg);
            auto d2 = decomposition_m2(f, p, Int(1), cfg);
            pv.quantities["E_p_magnitude"] = e1.magnitude;
            pv.quantities["E_p2_magnitude"] = d2.total.magnitude;
            pv.quantities["B_part_zero"] = d2.b_part_zero;
            bool ok = d2.b_part_zero;
            if (delta_f == kDegNegInf) {
                // bound exponent -inf: the sums must vanish outright
                pv.quantities["bound"] = "-inf";
                if (m1_applicable) ok = ok && e1.exact_zero;
                ok = ok && d2.total.exact_zero;
                pv.verdict = ok ? "pass" : "fail";
                return pv;
            }
            double b1 = std::pow(static_cast<double>(p),
                                 (static_cast<double>(-n) + static_cast<double>(delta_f)) / 2.0);
            double b2 = std::pow(static_cast<double>(p),
                                 static_cast<double>(-n) + static_cast<double>(delta_f));
            if (m1_applicable) pv.quantities["m1_ratio"] = e1.magnitude / b1;
            pv.quantities["m2_ratio"] = d2.total.magnitude / b2;
            pv.verdict = ok ? "pass" : "fail";
            return pv;
        });
    rep.primes = results;
    for (const auto& pv : rep.primes) {
        if (pv.quantities.contains("m1_ratio"))
            C = std::max(C, pv.quantities["m1_ratio"].get<double>());
        if (pv.quantities.contains("m2_ratio"))
            D = std::max(D, pv.quantities["m2_ratio"].get<double>());
    }
    if (m1_applicable) rep.constants["C"] = C;
    rep.constants["D"] = D;
    rep.settle();
    return rep;
}

// ---------------------------------------------------------------------------
// Tameness: dimension of C_f against the singular locus at infinity.
// ---------------------------------------------------------------------------

struct TamenessReport {
    long delta_f_hat = kDegNegInf;  // kDegNegInf encodes -inf
    long delta_hat = -1;            // -1 when smooth (or empty) at infinity
    bool condition_holds = false;
    std::optional<bool> homogeneous_identity_holds;  // only homogeneous deg >= 2
    bool degenerate = false;  // linear input: no at-infinity analysis runs
    LocusSummary cf_summary;
    LocusSummary infinity_summary;

    ordered_json to_json() const {
        ordered_json j;
        j["delta_f_hat"] = delta_f_hat == kDegNegInf ? ordered_json("-inf")
                                                     : ordered_json(delta_f_hat);
        j["delta_hat"] = delta_hat;
        j["condition_holds"] = condition_holds;
        if (homogeneous_identity_holds)
            j["homogeneous_identity_holds"] = *homogeneous_identity_holds;
        j["degenerate"] = degenerate;
        return j;
    }
};

inline TamenessReport tameness_check(const Polynomial& f,
                                     const std::vector<std::int64_t>& primes,
                                     const RunConfig& cfg, int K = 3) {
    if (f.is_zero() || f.degree() == 0)
        throw std::invalid_argument("tameness analysis needs a nonconstant polynomial");
    long deg = f.degree();
    for (std::int64_t p : primes)
        if (p <= deg)
            throw std::invalid_argument("tameness analysis needs p > deg f for every prime");
    TamenessReport rep;
    rep.cf_summary = build_locus_summary(critical_system(f), "C_f", false, primes, K, cfg);
    rep.delta_f_hat = rep.cf_summary.dims.consensus;
    if (deg == 1) {
        // the scheme at infinity of a hyperplane is smooth; no scan needed
        rep.degenerate = true;
        rep.delta_hat = -1;
    } else {
        rep.infinity_summary = build_locus_summary(singular_locus_at_infinity(f), "Xf_sing",
                                                   true, primes, K, cfg);
        rep.delta_hat =
            rep.infinity_summary.dims.consensus == kDegNegInf
                ? -1
                : rep.infinity_summary.dims.consensus;
    }
    rep.condition_holds =
        rep.delta_f_hat != kDegNegInf && rep.delta_f_hat >= rep.delta_hat + 1;
    if (deg >= 2 && f.is_homogeneous())
        rep.homogeneous_identity_holds = (rep.delta_hat + 1 == rep.delta_f_hat);
    return rep;
}

// Eventual exact vanishing of E_f(p^m) iff C_f(F_p) is empty.
inline BoundReport verify_nontriviality(const Polynomial& f,
                                        const std::vector<std::int64_t>& primes, int m_lo,
                                        int m_hi, const RunConfig& cfg) {
    BoundReport rep;
    rep.theorem = "vanishing iff empty critical locus";
    auto results = parallel_map<PrimeVerdict>(
        cfg.jobs, static_cast<int>(primes.size()), [&](int i) {
            std::int64_t p = primes[static_cast<std::size_t>(i)];
            PrimeVerdict pv;
            pv.p = p;
            auto est = estimate_alpha(f, p, m_lo, m_hi, cfg);
            Int cf = f.is_zero()
                         ? int_pow(p, static_cast<unsigned long>(f.nvars()))
                         : locus_count(critical_system(f), FqField(p, 1), false, cfg);
            pv.quantities["C_f_count"] = cf.get_str();
            pv.quantities["vanishing"] = est.alpha_neg_inf;
            pv.verdict = (est.alpha_neg_inf == (cf == 0)) ? "pass" : "fail";
            return pv;
        });
    rep.primes = results;
    rep.settle();
    return rep;
}

// ---------------------------------------------------------------------------
// Empirical flaw: the worst observed excess over m^(n-1) p^(alpha m).
// ---------------------------------------------------------------------------

struct FlawEstimate {
    bool defined = false;
    double beta_hat = 0;
    std::int64_t witness_p = 0;
    int witness_m = 0;

    ordered_json to_json() const {
        ordered_json j;
        if (!defined) {
            j["beta_hat"] = "-inf";
            return j;
        }
        j["beta_hat"] = beta_hat;
        j["witness"] = {{"p", witness_p}, {"m", witness_m}};
        return j;
    }
};

inline FlawEstimate estimate_flaw(const Polynomial& f, const std::vector<std::int64_t>& primes,
                                  int m_lo, int m_hi, double alpha, const RunConfig& cfg) {
    FlawEstimate out;
    int n = f.nvars();
    for (std::int64_t p : primes) {
        double logp = std::log(static_cast<double>(p));
        for (int m = m_lo; m <= m_hi; ++m) {
            auto r = expsum_level(f, p, m, cfg);
            if (r.exact_zero || r.magnitude <= 0) continue;
            double beta = std::log(r.magnitude) / logp -
                          (n - 1) * std::log(static_cast<double>(m)) / logp - alpha * m;
            if (!out.defined || beta > out.beta_hat) {
                out.defined = true;
                out.beta_hat = beta;
                out.witness_p = p;
                out.witness_m = m;
            }
        }
    }
    if (out.defined && out.beta_hat < 0) out.beta_hat = 0;  // clamp at the definition floor
    return out;
}

}  // namespace padsum

#endif
