#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "milnor/error.hpp"
#include "milnor/polyring/interval.hpp"

namespace milnor {

using Rational = mpq_class;

/// Hard cap on the number of variables: four space variables plus one parameter.
inline constexpr std::size_t kMaxVars = 5;

/// Exponent vector. Entries at positions >= nvars are always zero.
using Exponent = std::array<std::uint16_t, kMaxVars>;

inline unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms with zero coefficient are never stored, so structural equality is
/// mathematical equality.
class Polynomial {
public:
    using TermMap = std::map<Exponent, Rational>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {
        if (nvars > kMaxVars)
            throw Error("polyring", "at most " + std::to_string(kMaxVars) + " variables are supported");
    }

    static Polynomial constant(std::size_t nvars, const Rational& c) {
        Polynomial p(nvars);
        p.add_term(Exponent{}, c);
        return p;
    }
    static Polynomial variable(std::size_t nvars, std::size_t i) {
        Polynomial p(nvars);
        if (i >= nvars) throw DimensionMismatch("polyring", nvars, i + 1);
        Exponent e{};
        e[i] = 1;
        p.add_term(e, 1);
        return p;
    }
    static Polynomial monomial(std::size_t nvars, const Exponent& e, const Rational& c) {
        Polynomial p(nvars);
        p.add_term(e, c);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    /// Largest exponent of variable i.
    unsigned degree_in(std::size_t i) const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max<unsigned>(d, e[i]);
        return d;
    }

    Rational coefficient(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational constant_term() const { return coefficient(Exponent{}); }

    /// Adds c * x^e in place, keeping the no-zero-coefficient invariant.
    void add_term(const Exponent& e, const Rational& c) {
        for (std::size_t i = nvars_; i < kMaxVars; ++i)
            if (e[i] != 0) throw Error("polyring", "exponent refers to a variable beyond nvars");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(*this);
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_same(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_same(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Polynomial& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same(b);
        Polynomial r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e{};
                for (std::size_t i = 0; i < kMaxVars; ++i) {
                    unsigned s = unsigned(ea[i]) + eb[i];
                    if (s > 0xFFFF) throw Error("polyring", "exponent overflow");
                    e[i] = static_cast<std::uint16_t>(s);
                }
                r.add_term(e, ca * cb);
            }
        return r;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial pow(unsigned n) const {
        Polynomial r = constant(nvars_, 1);
        Polynomial base = *this;
        while (n > 0) {
            if (n & 1u) r *= base;
            n >>= 1;
            if (n) base *= base;
        }
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    /// Exact evaluation at a rational point.
    Rational evaluate(std::span<const Rational> x) const {
        check_point(x.size());
        Rational sum = 0;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
            sum += t;
        }
        return sum;
    }

    /// Evaluation at a floating-point point, correctly rounded to nearest:
    /// the point is converted exactly, evaluated in rationals, then rounded once.
    double evaluate(std::span<const double> x) const {
        check_point(x.size());
        std::vector<Rational> q;
        q.reserve(x.size());
        for (double v : x) q.emplace_back(v);
        return round_to_nearest(evaluate(std::span<const Rational>(q)));
    }

    /// Enclosure of the range over a box, monomial by monomial with power-aware bounds.
    Interval evaluate(std::span<const Interval> box) const {
        check_point(box.size());
        Interval sum(0.0);
        for (const auto& [e, c] : terms_) {
            Interval t = Interval::from_rational(c);
            for (std::size_t i = 0; i < nvars_; ++i)
                if (e[i]) t *= milnor::pow(box[i], e[i]);
            sum += t;
        }
        return sum;
    }

    Polynomial derivative(std::size_t i) const {
        if (i >= nvars_) throw DimensionMismatch("polyring", nvars_, i + 1);
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Exponent d = e;
            --d[i];
            r.add_term(d, c * e[i]);
        }
        return r;
    }

    /// Substitutes values for the trailing variables x_{keep}, ..., x_{nvars-1}
    /// and returns a polynomial in the first `keep` variables.
    Polynomial specialize_tail(std::size_t keep, std::span<const Rational> values) const {
        if (keep + values.size() != nvars_) throw DimensionMismatch("polyring", nvars_ - keep, values.size());
        Polynomial r(keep);
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            Exponent head{};
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (i < keep) {
                    head[i] = e[i];
                } else {
                    for (unsigned k = 0; k < e[i]; ++k) t *= values[i - keep];
                }
            }
            r.add_term(head, t);
        }
        return r;
    }

    /// Same polynomial viewed in a ring with more (trailing) variables.
    Polynomial extend(std::size_t nvars) const {
        if (nvars < nvars_) throw DimensionMismatch("polyring", nvars_, nvars);
        Polynomial r(nvars);
        r.terms_ = terms_;
        return r;
    }

    /// Human-readable form using the given variable names; deterministic
    /// (graded order, highest degree first).
    std::string to_string(std::span<const std::string> names) const {
        if (names.size() < nvars_) throw DimensionMismatch("polyring", nvars_, names.size());
        if (terms_.empty()) return "0";
        std::vector<std::pair<Exponent, Rational>> ts(terms_.begin(), terms_.end());
        std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
            unsigned da = total_degree(a.first), db = total_degree(b.first);
            if (da != db) return da > db;
            return a.first > b.first;
        });
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : ts) {
            Rational mag = abs(c);
            if (first) {
                if (c < 0) os << '-';
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            bool constant = total_degree(e) == 0;
            bool print_coef = constant || mag != 1;
            if (print_coef) os << mag.get_str();
            bool need_star = print_coef;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (!e[i]) continue;
                if (need_star) os << '*';
                os << names[i];
                if (e[i] > 1) os << '^' << e[i];
                need_star = true;
            }
        }
        return os.str();
    }

    static double round_to_nearest(const Rational& q) {
        Interval enc = Interval::from_rational(q);
        if (enc.lo() == enc.hi()) return enc.lo();
        Rational dl = q - Rational(enc.lo());
        Rational dh = Rational(enc.hi()) - q;
        if (dl < dh) return enc.lo();
        if (dh < dl) return enc.hi();
        // Tie: pick the even mantissa.
        std::int64_t bits;
        double lo = enc.lo();
        std::memcpy(&bits, &lo, sizeof bits);
        return (bits & 1) ? enc.hi() : enc.lo();
    }

private:
    void check_same(const Polynomial& o) const {
        if (o.nvars_ != nvars_) throw DimensionMismatch("polyring", nvars_, o.nvars_);
    }
    void check_point(std::size_t n) const {
        if (n != nvars_) throw DimensionMismatch("polyring", nvars_, n);
    }

    std::size_t nvars_;
    TermMap terms_;
};

inline std::vector<Polynomial> gradient(const Polynomial& p) {
    std::vector<Polynomial> g;
    g.reserve(p.nvars());
    for (std::size_t i = 0; i < p.nvars(); ++i) g.push_back(p.derivative(i));
    return g;
}

/// Symmetric matrix of second partials; entry (j, i) is the same object as (i, j).
inline std::vector<std::vector<Polynomial>> hessian(const Polynomial& p) {
    const std::size_t n = p.nvars();
    std::vector<std::vector<Polynomial>> h(n, std::vector<Polynomial>(n, Polynomial(n)));
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial di = p.derivative(i);
        for (std::size_t j = i; j < n; ++j) {
            h[i][j] = di.derivative(j);
            h[j][i] = h[i][j];
        }
    }
    return h;
}

/// Double-precision evaluator compiled from a polynomial, for hot loops where
/// a rounded (not certified) value suffices, such as grid classification.
class FastEvaluator {
public:
    FastEvaluator() = default;
    explicit FastEvaluator(const Polynomial& p) : nvars_(p.nvars()) {
        for (const auto& [e, c] : p.terms()) {
            terms_.push_back({c.get_d(), e});
            for (std::size_t i = 0; i < nvars_; ++i) maxdeg_ = std::max<unsigned>(maxdeg_, e[i]);
        }
    }

    std::size_t nvars() const { return nvars_; }

    double operator()(std::span<const double> x) const {
        std::array<std::array<double, 32>, kMaxVars> pw{};
        unsigned md = std::min(maxdeg_, 31u);
        for (std::size_t i = 0; i < nvars_; ++i) {
            pw[i][0] = 1.0;
            for (unsigned k = 1; k <= md; ++k) pw[i][k] = pw[i][k - 1] * x[i];
        }
        double s = 0;
        for (const auto& t : terms_) {
            double v = t.coef;
            for (std::size_t i = 0; i < nvars_; ++i) {
                unsigned k = t.exp[i];
                v *= k <= 31 ? pw[i][k] : std::pow(x[i], double(k));
            }
            s += v;
        }
        return s;
    }

private:
    struct Term {
        double coef;
        Exponent exp;
    };
    std::size_t nvars_ = 0;
    unsigned maxdeg_ = 0;
    std::vector<Term> terms_;
};

}  // namespace milnor
