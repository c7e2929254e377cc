#ifndef PADSUM_REPORT_HPP
#define PADSUM_REPORT_HPP

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "padsum/config.hpp"
#include "padsum/counting.hpp"
#include "padsum/expsum.hpp"
#include "padsum/oscillation.hpp"
#include "padsum/ratfn.hpp"
#include "padsum/zeta.hpp"

namespace padsum {

inline ordered_json to_json(const SolutionCount& c) {
    ordered_json j;
    j["p"] = c.p;
    j["m"] = c.m;
    j["n"] = c.n;
    j["raw"] = c.raw.get_str();
    j["normalized"] = rat_str(c.normalized);
    j["method"] = c.method;
    return j;
}

inline ordered_json to_json(const PoincareSeries& P) {
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : P.coeffs) coeffs.push_back(rat_str(c));
    ordered_json j;
    j["p"] = P.p;
    j["coefficients"] = coeffs;
    return j;
}

inline ordered_json to_json(const QPoly& f) {
    ordered_json a = ordered_json::array();
    for (const auto& c : f) a.push_back(rat_str(c));
    return a;
}

inline ordered_json to_json(const RationalFn& R) {
    ordered_json j;
    j["numerator"] = to_json(R.num);
    j["denominator"] = to_json(R.den);
    return j;
}

inline ordered_json to_json(const PoleReport& r) {
    ordered_json factors = ordered_json::array();
    for (const auto& f : r.factors) {
        ordered_json e;
        e["factor"] = to_json(f.poly);
        e["display"] = qp_to_string(f.poly);
        e["multiplicity"] = f.multiplicity;
        e["at_T_eq_p"] = f.at_T_eq_p;
        factors.push_back(e);
    }
    ordered_json j;
    j["factors"] = factors;
    j["trivial_pole_multiplicity"] = r.trivial_multiplicity;
    j["has_trivial_simple_pole_at_p"] = r.has_trivial_simple_pole_at_p;
    j["has_nontrivial_pole"] = r.has_nontrivial_pole;
    return j;
}

inline ordered_json to_json(const ZetaTruncation& Z) {
    ordered_json z = ordered_json::array();
    for (const auto& c : Z.z) z.push_back(rat_str(c));
    ordered_json j;
    j["p"] = Z.p;
    j["order"] = Z.order;
    j["support"] = Z.support.to_string();
    j["z"] = z;
    j["tail_mass"] = rat_str(Z.tail);
    return j;
}

inline ordered_json to_json(const ExpSumResult& r) {
    ordered_json j;
    j["p"] = r.p;
    j["m"] = r.m;
    j["n"] = r.n;
    j["support"] = r.support;
    j["unit"] = r.unit.get_str();
    j["exact_zero"] = r.exact_zero;
    j["re"] = r.re;
    j["im"] = r.im;
    j["magnitude"] = r.magnitude;
    j["error_bound"] = r.error_bound;
    if (r.exact_rational) j["exact_value"] = rat_str(*r.exact_rational);
    j["method"] = r.method;
    return j;
}

inline ordered_json to_json(const GlobalSumResult& r) {
    ordered_json j;
    j["N"] = r.N.get_str();
    j["exact_zero"] = r.exact_zero;
    j["re"] = r.re;
    j["im"] = r.im;
    j["magnitude"] = r.magnitude;
    j["error_bound"] = r.error_bound;
    ordered_json locals = ordered_json::array();
    for (const auto& l : r.local_factors) locals.push_back(to_json(l));
    j["local_factors"] = locals;
    j["direct_checked"] = r.direct_checked;
    if (r.direct_checked) j["direct_difference"] = r.direct_difference;
    return j;
}

inline ordered_json to_json(const LocusSummary& s) {
    ordered_json counts = ordered_json::object();
    for (const auto& [p, row] : s.counts) {
        ordered_json r = ordered_json::array();
        for (const auto& c : row) r.push_back(c.get_str());
        counts[std::to_string(p)] = r;
    }
    ordered_json dims = ordered_json::object();
    for (const auto& [p, d] : s.dims.per_prime)
        dims[std::to_string(p)] =
            d == kDegNegInf ? ordered_json("-inf") : ordered_json(d);
    ordered_json j;
    j["tag"] = s.tag;
    j["projective"] = s.projective;
    j["counts"] = counts;
    j["dimension_per_prime"] = dims;
    j["ambiguous"] = s.dims.ambiguous;
    j["consensus"] = s.dims.consensus == kDegNegInf ? ordered_json("-inf")
                                                    : ordered_json(s.dims.consensus);
    return j;
}

inline ordered_json to_json(const ProofIdentityRecord& r) {
    ordered_json j;
    j["p"] = r.p;
    j["Y_count"] = r.y_count.get_str();
    j["S_count"] = r.s_count.get_str();
    j["N1"] = rat_str(r.n1);
    j["N2"] = rat_str(r.n2);
    j["N1_identity"] = r.n1_identity;
    j["N2_identity"] = r.n2_identity;
    return j;
}

inline ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["budget"] = c.budget;
    j["hensel_list_budget"] = c.hensel_list_budget;
    j["precision_bits"] = c.precision_bits;
    j["truncation_order"] = c.truncation_order;
    j["reconstruction_dmax"] = c.reconstruction_dmax;
    j["vanishing_window"] = c.vanishing_window;
    j["slope_tolerance"] = c.slope_tolerance;
    // the worker count never affects results and is deliberately not echoed
    return j;
}

// Top-level report envelope: identical (config, version) must serialize to
// identical bytes regardless of the worker count.
struct Report {
    RunConfig config;
    ordered_json checks = ordered_json::array();
    std::string overall = "pass";

    void merge_verdict(const std::string& v) {
        if (v == "fail")
            overall = "fail";
        else if (v == "inconclusive" && overall == "pass")
            overall = "inconclusive";
    }

    ordered_json to_json() const {
        ordered_json j;
        j["tool"] = "padsum";
        j["version"] = kVersion;
        j["config"] = config_json(config);
        j["checks"] = checks;
        j["overall"] = overall;
        return j;
    }

    std::string dump() const { return to_json().dump(2) + "\n"; }

    int exit_code() const {
        if (overall == "pass") return 0;
        if (overall == "inconclusive") return 3;
        return 1;
    }
};

// Markdown rendering of a BoundReport, derived from the same records as the
// JSON output.
inline std::string markdown_table(const BoundReport& rep) {
    std::ostringstream os;
    os << "### " << rep.theorem << "\n\n";
    os << "| p | verdict | quantities |\n|---|---|---|\n";
    for (const auto& pv : rep.primes)
        os << "| " << pv.p << " | " << pv.verdict << " | `" << pv.quantities.dump()
           << "` |\n";
    os << "\nconstants: `" << rep.constants.dump() << "`\n\noverall: **" << rep.overall
       << "**\n";
    return os.str();
}

}  // namespace padsum

#endif
