#ifndef PADSUM_CORPUS_HPP
#define PADSUM_CORPUS_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "padsum/numeric.hpp"
#include "padsum/polynomial.hpp"

namespace padsum {

// A named polynomial with its declared expectations, so the harnesses can
// tell "check failed" from "expected counterexample confirmed".
struct CorpusEntry {
    std::string name;
    std::string text;
    int n = 1;
    Polynomial f{1};
    bool homogeneous = false;
    std::optional<long> delta_f;      // expected dim C_f; empty encodes -inf
    bool delta_f_neg_inf = false;
    std::optional<bool> tameness;     // expected tameness verdict, when sensible
    std::optional<bool> nontrivial_pole;  // expected for big enough p
};

inline std::vector<CorpusEntry> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    std::vector<CorpusEntry> out;
    for (const auto& e : doc.at("entries")) {
        CorpusEntry c;
        c.name = e.at("name").get<std::string>();
        c.text = e.at("poly").get<std::string>();
        c.n = e.at("n").get<int>();
        c.f = Polynomial::parse(c.text, c.n);
        c.homogeneous = e.value("homogeneous", false);
        if (e.contains("delta_f")) {
            if (e["delta_f"].is_string())
                c.delta_f_neg_inf = true;
            else
                c.delta_f = e["delta_f"].get<long>();
        }
        if (e.contains("tameness")) c.tameness = e["tameness"].get<bool>();
        if (e.contains("nontrivial_pole"))
            c.nontrivial_pole = e["nontrivial_pole"].get<bool>();
        if (c.homogeneous != c.f.is_homogeneous())
            throw std::runtime_error("corpus entry " + c.name +
                                     ": homogeneity flag disagrees with the polynomial");
        out.push_back(std::move(c));
    }
    if (out.size() < 10) throw std::runtime_error("corpus must have at least 10 entries");
    return out;
}

}  // namespace padsum

#endif
