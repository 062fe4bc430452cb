#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "milnor/certfind.hpp"
#include "milnor/cubeoracle/complex.hpp"
#include "milnor/cubeoracle/homology.hpp"
#include "milnor/cubeoracle/snf.hpp"
#include "milnor/fibretop.hpp"

namespace milnor {

enum class Nonemptiness { Nonempty, Empty, Undecided };

inline const char* to_string(Nonemptiness v) {
    switch (v) {
        case Nonemptiness::Nonempty: return "nonempty";
        case Nonemptiness::Empty: return "empty";
        case Nonemptiness::Undecided: return "undecided";
    }
    return "?";
}

struct NonemptyResult {
    Nonemptiness verdict = Nonemptiness::Undecided;
    std::optional<IntervalBox> witness;  // contains a point of g = level with |x| < delta
};

namespace detail {

inline std::vector<Rational> exact_point(std::span<const double> x) { return {x.begin(), x.end()}; }

inline bool inside_open_ball(std::span<const Rational> x, const Rational& d2) {
    Rational s = 0;
    for (const auto& v : x) s += v * v;
    return s < d2;
}

}  // namespace detail

/// Decides whether {g = level} meets the closed ball of radius delta.
/// Nonempty comes with a certified witness: a sign change of g - level
/// between two points of the open ball (exact rational evaluation), narrowed
/// by bisection of the segment joining them. Empty is returned only when
/// interval subdivision excludes the level from every box meeting the ball.
inline NonemptyResult fibre_nonempty(const Polynomial& g, double level, double delta, std::size_t max_boxes = 200'000,
                                     int max_depth = 40) {
    if (!(delta > 0)) throw Error("cubeoracle", "ball radius must be positive");
    const std::size_t d = g.nvars();
    const Rational lev(level), d2 = Rational(delta) * Rational(delta);
    auto sign_at = [&](std::span<const double> x) {
        auto q = detail::exact_point(x);
        return sgn(Rational(g.evaluate(std::span<const Rational>(q)) - lev));
    };
    auto in_ball = [&](std::span<const double> x) {
        auto q = detail::exact_point(x);
        return detail::inside_open_ball(q, d2);
    };

    std::optional<std::vector<double>> neg, pos;
    auto witness_from = [&](std::vector<double> p, std::vector<double> q) {
        // g - level < 0 at p, > 0 at q
        for (int it = 0; it < 80; ++it) {
            std::vector<double> m(d);
            bool moved = false;
            for (std::size_t i = 0; i < d; ++i) {
                m[i] = 0.5 * p[i] + 0.5 * q[i];
                if (m[i] != p[i] && m[i] != q[i]) moved = true;
            }
            if (!moved) break;
            int s = sign_at(m);
            if (s == 0) return NonemptyResult{Nonemptiness::Nonempty, detail::point_box(m)};
            (s < 0 ? p : q) = std::move(m);
        }
        IntervalBox w(d);
        for (std::size_t i = 0; i < d; ++i) w[i] = Interval::hull(p[i], q[i]);
        return NonemptyResult{Nonemptiness::Nonempty, w};
    };

    struct Item {
        IntervalBox box;
        int depth;
    };
    std::vector<Item> stack{{IntervalBox(d, Interval(-delta, delta)), 0}};
    bool undecided = false;
    std::size_t processed = 0;
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        if (++processed > max_boxes) return {Nonemptiness::Undecided, std::nullopt};
        if (detail::ball_side(it.box, delta) == detail::BallSide::Outside) continue;
        Interval v = g.evaluate(std::span<const Interval>(it.box));
        if (!v.contains(level)) continue;
        std::vector<double> c = midpoint(it.box);
        if (in_ball(c)) {
            int s = sign_at(c);
            if (s == 0) return {Nonemptiness::Nonempty, detail::point_box(c)};
            if (s < 0 && !neg) neg = c;
            if (s > 0 && !pos) pos = c;
            if (neg && pos) return witness_from(*neg, *pos);
        }
        if (it.depth >= max_depth) {
            undecided = true;
            continue;
        }
        std::size_t split = 0;
        for (std::size_t i = 1; i < d; ++i)
            if (it.box[i].width() > it.box[split].width()) split = i;
        double mid = it.box[split].mid();
        IntervalBox l = it.box, r = it.box;
        l[split] = Interval(it.box[split].lo(), mid);
        r[split] = Interval(mid, it.box[split].hi());
        // Upper halves are searched first.
        stack.push_back({std::move(l), it.depth + 1});
        stack.push_back({std::move(r), it.depth + 1});
    }
    return {undecided ? Nonemptiness::Undecided : Nonemptiness::Empty, std::nullopt};
}

/// One oracle-vs-formula comparison on a band {a <= f_t <= b} in the ball.
struct ChiComparison {
    std::string region;  // "positive", "negative" or "filled"
    double a = 0;
    double b = 0;
    long long formula = 0;
    std::size_t resolution = 0;  // N; the second run uses 2N
    long long oracle_n = 0;
    long long oracle_2n = 0;

    bool converged() const { return oracle_n == oracle_2n; }
    bool agrees() const { return converged() && oracle_n == formula; }
};

struct ChiVerification {
    std::vector<ChiComparison> checks;
    double window_halfwidth = 0;
    CubeMode mode = CubeMode::Center;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.agrees(); });
    }
};

class Unconverged : public Error {
public:
    explicit Unconverged(ChiVerification record)
        : Error("cubeoracle", "oracle Euler characteristic differs between N and 2N",
                "rerun with a higher resolution or a wider window"),
          record_(std::move(record)) {}
    const ChiVerification& record() const { return record_; }

private:
    ChiVerification record_;
};

struct VerifyOptions {
    std::size_t resolution = 0;  // 0: dimension default
    CubeMode mode = CubeMode::Center;
    std::optional<std::pair<double, double>> window_plus;
    std::optional<std::pair<double, double>> window_minus;
    bool filled = true;
};

inline std::size_t default_resolution(std::size_t d) {
    switch (d) {
        case 1: return 512;
        case 2: return 128;
        case 3: return 24;
        default: return 12;
    }
}

/// Window half-width min(eta/4, half the smallest distance from +-eta to a
/// certified critical value).
inline double default_window_halfwidth(std::span<const CertifiedCriticalPoint> points, double eta) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& p : points)
        for (double level : {eta, -eta}) {
            double dist = p.value.contains(level) ? 0.0 : std::min(std::abs(p.value.lo() - level), std::abs(p.value.hi() - level));
            gap = std::min(gap, dist);
        }
    return std::min(eta / 4, gap / 2);
}

/// Oracle Euler characteristics of the thickened positive and negative
/// fibres (and of the filled region f_t^{-1}[-eta, eta], expected 1) at N
/// and 2N, compared with the Khimshiashvili values. Throws Unconverged when
/// some N/2N pair disagrees.
inline ChiVerification verify_chi(const Polynomial& ft, double delta, double eta,
                                  std::span<const CertifiedCriticalPoint> points, const VerifyOptions& opt = {}) {
    const std::size_t d = ft.nvars();
    if (d == 0 || d > kMaxCubeDim) throw Error("cubeoracle", "the oracle handles 1 to 4 variables");
    std::vector<int> idx;
    for (const auto& p : points) {
        if (!p.index) throw Error("cubeoracle", "critical point without a certified Morse index");
        idx.push_back(*p.index);
    }
    auto [chi_plus, chi_minus] = khimshiashvili_chi(idx, d - 1);

    ChiVerification rec;
    rec.mode = opt.mode;
    rec.window_halfwidth = default_window_halfwidth(points, eta);
    const double w = rec.window_halfwidth;
    if (!(w > 0) && (!opt.window_plus || !opt.window_minus))
        throw Error("cubeoracle", "a critical value lies on +-eta; no critical-value-free window");
    auto window_plus = opt.window_plus.value_or(std::pair{eta - w, eta + w});
    auto window_minus = opt.window_minus.value_or(std::pair{-eta - w, -eta + w});
    for (const auto& win : {window_plus, window_minus})
        for (const auto& p : points)
            if (p.value.hi() >= win.first && p.value.lo() <= win.second)
                throw Error("cubeoracle", "window [" + std::to_string(win.first) + ", " + std::to_string(win.second) +
                                              "] contains a certified critical value");

    const std::size_t n = opt.resolution ? opt.resolution : default_resolution(d);
    auto run = [&](const std::string& name, std::pair<double, double> win, long long formula) {
        ChiComparison c{name, win.first, win.second, formula, n, 0, 0};
        c.oracle_n = euler_characteristic(build_region_complex({ft, win.first, win.second, delta, n}, opt.mode));
        c.oracle_2n = euler_characteristic(build_region_complex({ft, win.first, win.second, delta, 2 * n}, opt.mode));
        rec.checks.push_back(c);
    };
    run("positive", window_plus, chi_plus);
    run("negative", window_minus, chi_minus);
    if (opt.filled) run("filled", {-eta, eta}, 1);
    for (const auto& c : rec.checks)
        if (!c.converged()) throw Unconverged(rec);
    return rec;
}

}  // namespace milnor
