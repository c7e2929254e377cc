#ifndef PADSUM_POLYNOMIAL_HPP
#define PADSUM_POLYNOMIAL_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "padsum/config.hpp"
#include "padsum/numeric.hpp"

namespace padsum {

// Exponent vector of length n; total degree is the sum of entries.
struct Monomial {
    std::vector<std::uint32_t> exps;

    Monomial() = default;
    explicit Monomial(std::size_t n) : exps(n, 0) {}
    explicit Monomial(std::vector<std::uint32_t> e) : exps(std::move(e)) {}

    std::uint64_t total_degree() const {
        return std::accumulate(exps.begin(), exps.end(), std::uint64_t{0});
    }
    bool operator==(const Monomial& o) const { return exps == o.exps; }
};

// Graded lexicographic, larger first, so map iteration prints the leading
// term first and printing is deterministic.
struct GrlexDesc {
    bool operator()(const Monomial& a, const Monomial& b) const {
        std::uint64_t da = a.total_degree(), db = b.total_degree();
        if (da != db) return da > db;
        return a.exps > b.exps;
    }
};

inline constexpr long kDegNegInf = std::numeric_limits<long>::min();

class Polynomial {
  public:
    using TermMap = std::map<Monomial, Rat, GrlexDesc>;

    explicit Polynomial(int n = 1) : n_(n) {
        if (n < 1) throw std::invalid_argument("variable count must be >= 1");
    }

    static Polynomial zero(int n) { return Polynomial(n); }

    static Polynomial constant(int n, const Rat& c) {
        Polynomial f(n);
        f.add_term(Monomial(static_cast<std::size_t>(n)), c);
        return f;
    }

    static Polynomial variable(int n, int i) {
        if (i < 1 || i > n) throw std::invalid_argument("variable index out of range");
        Polynomial f(n);
        Monomial m(static_cast<std::size_t>(n));
        m.exps[static_cast<std::size_t>(i - 1)] = 1;
        f.add_term(m, Rat(1));
        return f;
    }

    int nvars() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // -inf (kDegNegInf) for the zero polynomial.
    long degree() const {
        if (terms_.empty()) return kDegNegInf;
        return static_cast<long>(terms_.begin()->first.total_degree());
    }

    void add_term(const Monomial& m, const Rat& c) {
        if (m.exps.size() != static_cast<std::size_t>(n_))
            throw std::invalid_argument("monomial arity mismatch");
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Rat coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Polynomial& operator+=(const Polynomial& g) {
        check_same_arity(g);
        for (const auto& [m, c] : g.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& g) {
        check_same_arity(g);
        for (const auto& [m, c] : g.terms_) add_term(m, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same_arity(b);
        Polynomial r(a.n_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(ma.exps);
                for (std::size_t i = 0; i < m.exps.size(); ++i) m.exps[i] += mb.exps[i];
                r.add_term(m, ca * cb);
            }
        return r;
    }

    friend Polynomial operator*(const Rat& c, const Polynomial& f) {
        Polynomial r(f.n_);
        for (const auto& [m, a] : f.terms_) r.add_term(m, c * a);
        return r;
    }

    bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    std::vector<Polynomial> gradient() const {
        std::vector<Polynomial> g;
        g.reserve(static_cast<std::size_t>(n_));
        for (int i = 1; i <= n_; ++i) g.push_back(partial(i));
        return g;
    }

    Polynomial partial(int i) const {
        if (i < 1 || i > n_) throw std::invalid_argument("variable index out of range");
        std::size_t k = static_cast<std::size_t>(i - 1);
        Polynomial r(n_);
        for (const auto& [m, c] : terms_) {
            if (m.exps[k] == 0) continue;
            Monomial d = m;
            d.exps[k] -= 1;
            r.add_term(d, c * Rat(m.exps[k]));
        }
        return r;
    }

    // Sum of the terms of maximal total degree; requires a nonzero input.
    Polynomial leading_form() const {
        if (terms_.empty()) throw std::invalid_argument("leading form of the zero polynomial");
        std::uint64_t d = terms_.begin()->first.total_degree();
        Polynomial r(n_);
        for (const auto& [m, c] : terms_) {
            if (m.total_degree() == d) r.add_term(m, c);
        }
        return r;
    }

    // f(a, x2, ..., xn) as a polynomial in n-1 variables.
    Polynomial specialize_first(const Rat& a) const {
        if (n_ < 2) throw std::invalid_argument("specialize_first needs at least 2 variables");
        Polynomial r(n_ - 1);
        for (const auto& [m, c] : terms_) {
            Rat coeff = c * rat_pow(a, static_cast<long>(m.exps[0]));
            Monomial rest(std::vector<std::uint32_t>(m.exps.begin() + 1, m.exps.end()));
            r.add_term(rest, coeff);
        }
        return r;
    }

    // The zero polynomial counts as homogeneous (degree -inf).
    bool is_homogeneous(long* degree_out = nullptr) const {
        if (terms_.empty()) {
            if (degree_out) *degree_out = kDegNegInf;
            return true;
        }
        std::uint64_t d = terms_.begin()->first.total_degree();
        for (const auto& [m, c] : terms_)
            if (m.total_degree() != d) return false;
        if (degree_out) *degree_out = static_cast<long>(d);
        return true;
    }

    // Largest prime-power-free part check helper: true iff p divides no
    // coefficient denominator.
    bool prime_ok(const Int& p) const {
        for (const auto& [m, c] : terms_) {
            if (mpz_divisible_p(c.get_den().get_mpz_t(), p.get_mpz_t())) return false;
        }
        return true;
    }

    // Nested Horner evaluation; exact in any commutative ring supplied by
    // the descriptor (see rings.hpp for the duck-typed interface).
    template <class Ring>
    typename Ring::Elem evaluate(const Ring& ring,
                                 std::span<const typename Ring::Elem> point) const {
        if (point.size() != static_cast<std::size_t>(n_))
            throw std::invalid_argument("point arity mismatch");
        std::vector<const std::pair<const Monomial, Rat>*> all;
        all.reserve(terms_.size());
        for (const auto& t : terms_) all.push_back(&t);
        return eval_rec(ring, point, all, 0);
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Rat a = c;
            if (first) {
                if (a < 0) { os << "-"; a = -a; }
            } else {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            bool has_vars = m.total_degree() > 0;
            if (!has_vars || a != 1) {
                os << a.get_str();
                if (has_vars) os << "*";
            }
            bool first_var = true;
            for (std::size_t i = 0; i < m.exps.size(); ++i) {
                if (m.exps[i] == 0) continue;
                if (!first_var) os << "*";
                first_var = false;
                os << "x" << (i + 1);
                if (m.exps[i] > 1) os << "^" << m.exps[i];
            }
        }
        return os.str();
    }

    static Polynomial parse(const std::string& text, int n);

  private:
    void check_same_arity(const Polynomial& o) const {
        if (n_ != o.n_) throw std::invalid_argument("variable count mismatch");
    }

    template <class Ring>
    typename Ring::Elem eval_rec(const Ring& ring,
                                 std::span<const typename Ring::Elem> point,
                                 const std::vector<const std::pair<const Monomial, Rat>*>& ts,
                                 std::size_t var) const {
        using Elem = typename Ring::Elem;
        if (ts.empty()) return ring.zero();
        if (var == static_cast<std::size_t>(n_)) {
            Elem acc = ring.zero();
            for (auto* t : ts) acc = ring.add(acc, ring.from_rational(t->second));
            return acc;
        }
        // Group by the exponent of this variable, descending, then Horner.
        std::map<std::uint32_t, std::vector<const std::pair<const Monomial, Rat>*>,
                 std::greater<>> groups;
        for (auto* t : ts) groups[t->first.exps[var]].push_back(t);
        Elem acc = ring.zero();
        std::uint32_t prev_exp = 0;
        bool started = false;
        for (const auto& [e, group] : groups) {
            if (started) {
                for (std::uint32_t k = e; k < prev_exp; ++k) acc = ring.mul(acc, point[var]);
            }
            acc = ring.add(acc, eval_rec(ring, point, group, var + 1));
            prev_exp = e;
            started = true;
        }
        for (std::uint32_t k = 0; k < prev_exp; ++k) acc = ring.mul(acc, point[var]);
        return acc;
    }

    int n_;
    TermMap terms_;
};

namespace detail {

class PolyParser {
  public:
    PolyParser(const std::string& s, int n) : s_(s), n_(n) {}

    Polynomial run() {
        Polynomial f(n_);
        skip_ws();
        bool negative = eat_sign();
        f += term(negative);
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size()) break;
            char c = s_[pos_];
            if (c == '+' || c == '-') {
                ++pos_;
                f += term(c == '-');
            } else {
                throw ParseError(pos_, std::string("unexpected character '") + c + "'");
            }
        }
        return f;
    }

  private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat_sign() {
        skip_ws();
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
            bool neg = s_[pos_] == '-';
            ++pos_;
            return neg;
        }
        return false;
    }

    // term := factor (['*'] factor)*, factor := rational | x<i>[^e]
    Polynomial term(bool negative) {
        skip_ws();
        Rat coeff(1);
        Monomial mono(static_cast<std::size_t>(n_));
        bool any = false;
        for (;;) {
            skip_ws();
            bool star = false;
            if (any && pos_ < s_.size() && s_[pos_] == '*') {
                star = true;
                ++pos_;
                skip_ws();
            }
            if (pos_ >= s_.size()) {
                if (star) throw ParseError(pos_, "dangling '*'");
                break;
            }
            char c = s_[pos_];
            if (c == 'x') {
                ++pos_;
                long idx = integer("variable index");
                if (idx < 1 || idx > n_)
                    throw ParseError(pos_, "variable index out of range (have x1..x" +
                                               std::to_string(n_) + ")");
                long e = 1;
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == '^') {
                    ++pos_;
                    e = integer("exponent");
                    if (e < 0) throw ParseError(pos_, "negative exponent");
                }
                mono.exps[static_cast<std::size_t>(idx - 1)] +=
                    static_cast<std::uint32_t>(e);
                any = true;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                coeff *= rational();
                any = true;
            } else {
                if (star) throw ParseError(pos_, "expected a factor after '*'");
                break;
            }
        }
        if (!any) throw ParseError(pos_, "expected a term");
        Polynomial t(n_);
        t.add_term(mono, negative ? -coeff : coeff);
        return t;
    }

    long integer(const char* what) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError(pos_, std::string("expected ") + what);
        return std::stol(s_.substr(start, pos_ - start));
    }

    Rat rational() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        Int num(s_.substr(start, pos_ - start));
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            skip_ws();
            std::size_t dstart = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == dstart) throw ParseError(pos_, "expected denominator");
            Int den(s_.substr(dstart, pos_ - dstart));
            if (den == 0) throw ParseError(dstart, "zero denominator");
            Rat q(num, den);
            q.canonicalize();
            return q;
        }
        return Rat(num);
    }

    const std::string& s_;
    int n_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial Polynomial::parse(const std::string& text, int n) {
    if (n < 1) throw std::invalid_argument("variable count must be >= 1");
    return detail::PolyParser(text, n).run();
}

// Largest variable index mentioned in the text; used by the CLI to infer n.
inline int infer_nvars(const std::string& text) {
    int best = 1;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] == 'x' && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            std::size_t j = i + 1, k = 0;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            k = std::stoul(text.substr(i + 1, j - i - 1));
            best = std::max(best, static_cast<int>(k));
        }
    }
    return best;
}

}  // namespace padsum

#endif
