#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace milnor {

// Directed rounding is emulated with error-free transformations: the exact
// rounding error of + and * is recovered (TwoSum / FMA) and the result is
// nudged one ulp only when it is inexact in the wrong direction. Exactly
// representable results therefore stay exact.
namespace rounding {

inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

inline double two_sum_err(double a, double b, double s) {
    double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

inline double add_down(double a, double b) {
    double s = a + b;
    if (!std::isfinite(s)) return s;
    return two_sum_err(a, b, s) < 0 ? down(s) : s;
}
inline double add_up(double a, double b) {
    double s = a + b;
    if (!std::isfinite(s)) return s;
    return two_sum_err(a, b, s) > 0 ? up(s) : s;
}
inline double mul_down(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    double p = a * b;
    if (!std::isfinite(p)) return p;
    double e = std::fma(a, b, -p);
    // Subnormal products may lose bits that fma cannot see; widen unconditionally.
    if (std::abs(p) < 4 * std::numeric_limits<double>::min()) return down(p);
    return e < 0 ? down(p) : p;
}
inline double mul_up(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    double p = a * b;
    if (!std::isfinite(p)) return p;
    double e = std::fma(a, b, -p);
    if (std::abs(p) < 4 * std::numeric_limits<double>::min()) return up(p);
    return e > 0 ? up(p) : p;
}
inline double div_down(double a, double b) {
    double q = a / b;
    if (!std::isfinite(q)) return q;
    // a - q*b has the sign of (a/b - q) when b > 0.
    double r = std::fma(-q, b, a);
    if (std::abs(q) < 4 * std::numeric_limits<double>::min()) return down(q);
    if (b < 0) r = -r;
    return r < 0 ? down(q) : q;
}
inline double div_up(double a, double b) {
    double q = a / b;
    if (!std::isfinite(q)) return q;
    double r = std::fma(-q, b, a);
    if (std::abs(q) < 4 * std::numeric_limits<double>::min()) return up(q);
    if (b < 0) r = -r;
    return r > 0 ? up(q) : q;
}
inline double pow_down(double base, unsigned n) {  // base >= 0
    double r = 1.0;
    for (unsigned i = 0; i < n; ++i) r = mul_down(r, base);
    return r;
}
inline double pow_up(double base, unsigned n) {  // base >= 0
    double r = 1.0;
    for (unsigned i = 0; i < n; ++i) r = mul_up(r, base);
    return r;
}

}  // namespace rounding

/// Closed interval [lo, hi] of doubles with outward-rounded arithmetic.
class Interval {
public:
    constexpr Interval() = default;
    constexpr Interval(double x) : lo_(x), hi_(x) {}  // NOLINT(google-explicit-constructor)
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo <= hi)) throw std::invalid_argument("Interval: lo > hi");
    }

    /// Tightest double enclosure of an exact rational.
    static Interval from_rational(const mpq_class& q) {
        double d = q.get_d();  // truncates toward zero
        mpq_class back(d);
        if (back == q) return Interval(d);
        if (back < q) return Interval(d, rounding::up(d));
        return Interval(rounding::down(d), d);
    }

    static Interval hull(double a, double b) { return Interval(std::min(a, b), std::max(a, b)); }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double mid() const {
        double m = 0.5 * lo_ + 0.5 * hi_;
        return std::clamp(m, lo_, hi_);
    }
    double width() const { return rounding::add_up(hi_, -lo_); }
    double mag() const { return std::max(std::abs(lo_), std::abs(hi_)); }

    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains_zero() const { return contains(0.0); }
    bool subset_of(const Interval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
    bool interior_subset_of(const Interval& o) const { return o.lo_ < lo_ && hi_ < o.hi_; }
    bool intersects(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
    bool positive() const { return lo_ > 0; }
    bool negative() const { return hi_ < 0; }

    Interval operator-() const { return Interval(-hi_, -lo_); }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(rounding::add_down(a.lo_, b.lo_), rounding::add_up(a.hi_, b.hi_));
    }
    friend Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }
    friend Interval operator*(const Interval& a, const Interval& b) {
        using namespace rounding;
        double l = std::min({mul_down(a.lo_, b.lo_), mul_down(a.lo_, b.hi_), mul_down(a.hi_, b.lo_),
                             mul_down(a.hi_, b.hi_)});
        double h = std::max({mul_up(a.lo_, b.lo_), mul_up(a.lo_, b.hi_), mul_up(a.hi_, b.lo_),
                             mul_up(a.hi_, b.hi_)});
        return Interval(l, h);
    }
    /// Division by an interval that excludes zero.
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero()) throw std::domain_error("Interval: division by interval containing 0");
        using namespace rounding;
        double l = std::min({div_down(a.lo_, b.lo_), div_down(a.lo_, b.hi_), div_down(a.hi_, b.lo_),
                             div_down(a.hi_, b.hi_)});
        double h = std::max({div_up(a.lo_, b.lo_), div_up(a.lo_, b.hi_), div_up(a.hi_, b.lo_),
                             div_up(a.hi_, b.hi_)});
        return Interval(l, h);
    }
    Interval& operator+=(const Interval& o) { return *this = *this + o; }
    Interval& operator-=(const Interval& o) { return *this = *this - o; }
    Interval& operator*=(const Interval& o) { return *this = *this * o; }

    friend bool operator==(const Interval&, const Interval&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
        return os << '[' << x.lo_ << ", " << x.hi_ << ']';
    }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

/// Power-aware integer power: even powers of intervals straddling zero are
/// bounded below by 0.
inline Interval pow(const Interval& x, unsigned n) {
    using namespace rounding;
    if (n == 0) return Interval(1.0);
    if (n == 1) return x;
    double a = x.lo(), b = x.hi();
    if (n % 2 == 0) {
        if (a >= 0) return Interval(pow_down(a, n), pow_up(b, n));
        if (b <= 0) return Interval(pow_down(-b, n), pow_up(-a, n));
        return Interval(0.0, pow_up(std::max(-a, b), n));
    }
    double l = a >= 0 ? pow_down(a, n) : -pow_up(-a, n);
    double h = b >= 0 ? pow_up(b, n) : -pow_down(-b, n);
    return Interval(l, h);
}

inline Interval sqr(const Interval& x) { return pow(x, 2); }

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    double l = std::max(a.lo(), b.lo());
    double h = std::min(a.hi(), b.hi());
    if (l > h) return std::nullopt;
    return Interval(l, h);
}

/// Axis-aligned box: one interval per variable.
using IntervalBox = std::vector<Interval>;

inline std::vector<double> midpoint(std::span<const Interval> box) {
    std::vector<double> m(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) m[i] = box[i].mid();
    return m;
}

inline double max_width(std::span<const Interval> box) {
    double w = 0;
    for (const auto& x : box) w = std::max(w, x.width());
    return w;
}

inline bool box_subset(std::span<const Interval> inner, std::span<const Interval> outer) {
    for (std::size_t i = 0; i < inner.size(); ++i)
        if (!inner[i].subset_of(outer[i])) return false;
    return true;
}

inline bool box_intersects(std::span<const Interval> a, std::span<const Interval> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].intersects(b[i])) return false;
    return true;
}

inline IntervalBox box_hull(std::span<const Interval> a, std::span<const Interval> b) {
    IntervalBox h;
    h.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        h.emplace_back(std::min(a[i].lo(), b[i].lo()), std::max(a[i].hi(), b[i].hi()));
    return h;
}

/// Enclosure of the squared Euclidean norm over a box.
inline Interval norm2(std::span<const Interval> box) {
    Interval s(0.0);
    for (const auto& x : box) s += sqr(x);
    return s;
}

}  // namespace milnor
