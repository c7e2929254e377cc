#ifndef PADSUM_SUPPORT_HPP
#define PADSUM_SUPPORT_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "padsum/modulus.hpp"
#include "padsum/numeric.hpp"

namespace padsum {

// Characteristic function of a Cartesian product of factors, each either
// all of Z_p (lifted as the full residue ring) or a single residue coset
// a + pZ_p.
struct BasicStepSupport {
    struct Factor {
        bool full = true;
        std::int64_t residue = 0;  // in [0, p) when !full
    };
    std::vector<Factor> factors;

    static BasicStepSupport full_support(int n) {
        BasicStepSupport s;
        s.factors.assign(static_cast<std::size_t>(n), Factor{});
        return s;
    }

    int arity() const { return static_cast<int>(factors.size()); }

    int residue_count() const {
        int r = 0;
        for (const auto& f : factors)
            if (!f.full) ++r;
        return r;
    }

    bool is_full() const { return residue_count() == 0; }

    // Haar measure of the support inside Z_p^n.
    Rat measure(std::int64_t p) const {
        return Rat(1, int_pow(p, static_cast<unsigned long>(residue_count())));
    }

    void validate(std::int64_t p, int n) const {
        if (arity() != n) throw std::invalid_argument("support arity mismatch");
        for (const auto& f : factors)
            if (!f.full && (f.residue < 0 || f.residue >= p))
                throw std::invalid_argument("support residue out of range");
    }

    // Enumeration domain inside (Z/p^m)^n.
    std::vector<CoordRange> domain(std::int64_t p, int m) const {
        Int level = int_pow(p, static_cast<unsigned long>(m));
        Int sub = m >= 1 ? int_pow(p, static_cast<unsigned long>(m - 1)) : Int(1);
        std::vector<CoordRange> d;
        d.reserve(factors.size());
        for (const auto& f : factors) {
            if (f.full)
                d.push_back({0, 1, static_cast<std::int64_t>(level.get_ui())});
            else
                d.push_back({static_cast<std::uint64_t>(f.residue),
                             static_cast<std::uint64_t>(p),
                             static_cast<std::int64_t>(sub.get_ui())});
        }
        return d;
    }

    // "full,1,full" or "*,1,*"
    static BasicStepSupport parse(const std::string& text, int n) {
        BasicStepSupport s;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            Factor f;
            if (item == "full" || item == "*" || item == "O") {
                f.full = true;
            } else {
                f.full = false;
                f.residue = std::stoll(item);
            }
            s.factors.push_back(f);
        }
        if (s.arity() != n)
            throw std::invalid_argument("support has " + std::to_string(s.arity()) +
                                        " factors, expected " + std::to_string(n));
        return s;
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out += ",";
            out += factors[i].full ? "full" : std::to_string(factors[i].residue);
        }
        return out;
    }
};

}  // namespace padsum

#endif
