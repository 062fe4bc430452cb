#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "milnor/certfind/linalg.hpp"
#include "milnor/error.hpp"
#include "milnor/morsify.hpp"
#include "milnor/polyring.hpp"

namespace milnor {

/// Tolerances for certified critical-point enumeration.
struct CertConfig {
    double exclusion_floor = 1e-10;  // boxes narrower than this are not split further
    double newton_width = 1e-8;      // target width of refined enclosures
    double value_sep = 1e-9;         // critical value intervals must be narrower than this
    int max_depth = 64;              // bisections along any branch
    int retry_budget = 8;            // fresh seeds for generic families
    int refine_budget = 8;           // enclosure refinements when certifying a Morse index
    std::size_t max_boxes = 2'000'000;
};

enum class Certificate { NewtonUnique, Uncertified };

inline const char* to_string(Certificate c) {
    return c == Certificate::NewtonUnique ? "newton_unique" : "uncertified";
}

struct CertifiedCriticalPoint {
    IntervalBox enclosure;  // contains the critical point
    IntervalBox region;     // the point is the only critical point in this box
    std::vector<double> midpoint;
    Interval value;
    std::optional<int> index;
    Certificate certificate = Certificate::Uncertified;
};

class CertificationError : public Error {
public:
    using Error::Error;
};

/// Branch-and-prune gave up on some boxes.
class MaxDepthExceeded : public CertificationError {
public:
    MaxDepthExceeded(std::vector<IntervalBox> residual)
        : CertificationError("certfind",
                             std::to_string(residual.size()) + " box(es) could be neither excluded nor certified",
                             "t may be near a degenerate parameter; try another t or seed"),
          residual_(std::move(residual)) {}
    const std::vector<IntervalBox>& residual() const { return residual_; }

private:
    std::vector<IntervalBox> residual_;
};

class ValueCollision : public CertificationError {
public:
    explicit ValueCollision(const std::string& what)
        : CertificationError("certfind", what, "critical values are not distinct; perturb t or the direction") {}
};

class SphereStraddle : public CertificationError {
public:
    explicit SphereStraddle(const std::string& what)
        : CertificationError("certfind", what, "a critical point sits on the sphere |x| = delta; change delta") {}
};

class DegenerateHessian : public CertificationError {
public:
    explicit DegenerateHessian(const std::string& what)
        : CertificationError("certfind", what, "the critical point is not Morse at this t") {}
};

namespace detail {

/// f_t together with its derivatives, in exact and fast floating form.
struct CriticalSystem {
    Polynomial f;
    std::vector<Polynomial> grad;
    std::vector<std::vector<Polynomial>> hess;
    std::vector<FastEvaluator> fgrad;
    std::vector<std::vector<FastEvaluator>> fhess;

    explicit CriticalSystem(const Polynomial& p) : f(p), grad(gradient(p)), hess(hessian(p)) {
        const std::size_t n = p.nvars();
        for (const auto& g : grad) fgrad.emplace_back(g);
        fhess.assign(n, std::vector<FastEvaluator>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) fhess[i][j] = FastEvaluator(hess[i][j]);
    }

    std::size_t dim() const { return f.nvars(); }

    std::vector<Interval> grad_box(std::span<const Interval> box) const {
        std::vector<Interval> g;
        g.reserve(grad.size());
        for (const auto& gi : grad) g.push_back(gi.evaluate(box));
        return g;
    }

    linalg::IntervalMatrix hess_box(std::span<const Interval> box) const {
        const std::size_t n = dim();
        linalg::IntervalMatrix h(n, std::vector<Interval>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) h[i][j] = h[j][i] = hess[i][j].evaluate(box);
        return h;
    }
};

inline IntervalBox point_box(std::span<const double> x) {
    IntervalBox b;
    b.reserve(x.size());
    for (double v : x) b.emplace_back(v);
    return b;
}

/// Krawczyk operator K(X) = m - Y g(m) + (I - Y J(X)) (X - m).
/// Returns nullopt when the midpoint Jacobian is numerically singular.
inline std::optional<IntervalBox> krawczyk(const CriticalSystem& sys, std::span<const Interval> box) {
    const std::size_t n = sys.dim();
    std::vector<double> m = midpoint(box);
    linalg::IntervalMatrix jac = sys.hess_box(box);
    auto y = linalg::inverse(linalg::midpoint(jac));
    if (!y) return std::nullopt;
    IntervalBox mbox = point_box(m);
    std::vector<Interval> gm = sys.grad_box(mbox);
    IntervalBox k(n);
    for (std::size_t i = 0; i < n; ++i) {
        Interval acc(m[i]);
        for (std::size_t j = 0; j < n; ++j) acc -= Interval((*y)[i][j]) * gm[j];
        for (std::size_t j = 0; j < n; ++j) {
            Interval c = Interval(i == j ? 1.0 : 0.0);
            for (std::size_t l = 0; l < n; ++l) c -= Interval((*y)[i][l]) * jac[l][j];
            acc += c * (box[j] - Interval(m[j]));
        }
        k[i] = acc;
    }
    return k;
}

inline bool interior_subset(std::span<const Interval> inner, std::span<const Interval> outer) {
    for (std::size_t i = 0; i < inner.size(); ++i)
        if (!inner[i].interior_subset_of(outer[i])) return false;
    return true;
}

/// True when K(X) lies in the interior of X: X holds exactly one zero of grad f.
inline bool krawczyk_unique(const CriticalSystem& sys, std::span<const Interval> box) {
    auto k = krawczyk(sys, box);
    return k && interior_subset(*k, box);
}

/// Contracts an enclosure with X <- K(X) ∩ X until it is narrower than
/// `width` or stops shrinking. The input must already be certified.
inline IntervalBox refine(const CriticalSystem& sys, IntervalBox x, double width, int max_iter = 60) {
    for (int it = 0; it < max_iter && max_width(x) > width; ++it) {
        auto k = krawczyk(sys, x);
        if (!k) break;
        IntervalBox next(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto c = intersect((*k)[i], x[i]);
            if (!c) return x;  // cannot happen for a certified box; keep the last sound one
            next[i] = *c;
        }
        if (!(max_width(next) < max_width(x))) break;
        x = std::move(next);
    }
    return x;
}

/// Plain floating Newton iteration on grad f; nullopt if it does not converge.
inline std::optional<std::vector<double>> float_newton(const CriticalSystem& sys, std::vector<double> x) {
    const std::size_t n = sys.dim();
    for (int it = 0; it < 40; ++it) {
        linalg::Matrix h(n, std::vector<double>(n));
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = sys.fgrad[i](x);
            for (std::size_t j = 0; j < n; ++j) h[i][j] = sys.fhess[i][j](x);
        }
        auto y = linalg::inverse(h);
        if (!y) return std::nullopt;
        double step = 0, scale = 1;
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0;
            for (std::size_t j = 0; j < n; ++j) d += (*y)[i][j] * g[j];
            x[i] -= d;
            step = std::max(step, std::abs(d));
            scale = std::max(scale, std::abs(x[i]));
        }
        if (!std::isfinite(step)) return std::nullopt;
        if (step <= 1e-15 * scale) return x;
    }
    return x;  // may still be good enough for the interval test
}

/// Mean-value enclosure of f over a small box, intersected with the direct one.
inline Interval value_enclosure(const CriticalSystem& sys, std::span<const Interval> box) {
    std::vector<double> m = midpoint(box);
    IntervalBox mb = point_box(m);
    Interval mv = sys.f.evaluate(std::span<const Interval>(mb));
    auto g = sys.grad_box(box);
    for (std::size_t i = 0; i < box.size(); ++i) mv += g[i] * (box[i] - Interval(m[i]));
    Interval direct = sys.f.evaluate(box);
    auto both = intersect(mv, direct);
    return both ? *both : mv;
}

inline Interval squared(double x) { return sqr(Interval(x)); }

enum class BallSide { Inside, Outside, Straddle };

inline BallSide ball_side(std::span<const Interval> box, double delta) {
    Interval n2 = norm2(box), d2 = squared(delta);
    if (n2.hi() < d2.lo()) return BallSide::Inside;
    if (n2.lo() > d2.hi()) return BallSide::Outside;
    return BallSide::Straddle;
}

inline std::string box_string(std::span<const Interval> b) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? ", " : "") << b[i];
    os << ')';
    return os.str();
}

}  // namespace detail

/// Certified Morse index: the number of negative eigenvalues of Hess f_t over
/// the point's enclosure. Certified enclosures are refined by Krawczyk
/// contraction when a pivot straddles 0; uncertified candidates are shrunk
/// around their midpoint. Throws DegenerateHessian if the budget runs out.
inline int morse_index(const Polynomial& ft, const CertifiedCriticalPoint& point, const CertConfig& cfg = {}) {
    detail::CriticalSystem sys(ft);
    IntervalBox box = point.enclosure;
    if (box.size() != ft.nvars()) throw DimensionMismatch("certfind", ft.nvars(), box.size());
    double target = max_width(box);
    for (int attempt = 0; attempt <= cfg.refine_budget; ++attempt) {
        if (auto in = linalg::certified_inertia(sys.hess_box(box))) return static_cast<int>(in->negative);
        target = std::max(target * 1e-3, 0.0);
        if (point.certificate == Certificate::NewtonUnique) {
            IntervalBox next = detail::refine(sys, box, target);
            if (max_width(next) >= max_width(box)) break;
            box = std::move(next);
        } else {
            std::vector<double> m = midpoint(box);
            for (std::size_t i = 0; i < box.size(); ++i) {
                double r = box[i].width() / 8;
                box[i] = Interval(m[i] - r, m[i] + r);
            }
        }
    }
    throw DegenerateHessian("Hessian inertia could not be certified near " + detail::box_string(point.enclosure));
}

/// Certified enumeration of the critical points of f_t in the closed ball of
/// radius delta. Results are sorted by critical value with pairwise disjoint
/// value intervals; Morse indices are not filled in (see morse_index).
inline std::vector<CertifiedCriticalPoint> find_critical_points(const Polynomial& ft, double delta,
                                                                const CertConfig& cfg = {}) {
    if (ft.is_constant()) throw Error("certfind", "f_t is constant");
    if (!(delta > 0)) throw Error("certfind", "delta must be positive");
    detail::CriticalSystem sys(ft);
    const std::size_t n = sys.dim();

    struct Known {
        IntervalBox region;     // unique root in here
        IntervalBox enclosure;  // refined enclosure of that root
    };
    std::vector<Known> known;  // every certified root, inside the ball or not
    std::vector<CertifiedCriticalPoint> found;
    std::vector<IntervalBox> residual;

    auto known_region = [&](std::span<const Interval> b) {
        for (const auto& k : known)
            if (box_subset(b, k.region)) return true;
        return false;
    };

    // Registers a certified uniqueness region unless it duplicates a known root.
    auto accept = [&](IntervalBox region) {
        IntervalBox enc = detail::refine(sys, region, cfg.newton_width);
        for (const auto& k : known) {
            if (box_subset(enc, k.region) || box_subset(k.enclosure, region)) return;
            if (box_intersects(enc, k.enclosure) && detail::krawczyk_unique(sys, box_hull(enc, k.enclosure)))
                return;
        }
        known.push_back({region, enc});
        switch (detail::ball_side(enc, delta)) {
            case detail::BallSide::Outside: return;
            case detail::BallSide::Straddle:
                throw SphereStraddle("critical point enclosure " + detail::box_string(enc) +
                                     " meets the sphere |x| = " + std::to_string(delta));
            case detail::BallSide::Inside: break;
        }
        CertifiedCriticalPoint p;
        p.region = std::move(region);
        p.enclosure = enc;
        p.midpoint = midpoint(enc);
        p.value = detail::value_enclosure(sys, enc);
        if (p.value.width() >= cfg.value_sep) {
            p.enclosure = detail::refine(sys, p.enclosure, 0.0, 200);
            p.value = detail::value_enclosure(sys, p.enclosure);
        }
        p.certificate = Certificate::NewtonUnique;
        found.push_back(std::move(p));
    };

    struct Item {
        IntervalBox box;
        int depth;
    };
    std::vector<Item> stack;
    stack.push_back({IntervalBox(n, Interval(-delta, delta)), 0});
    std::size_t processed = 0;

    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        if (++processed > cfg.max_boxes) {
            residual.push_back(std::move(it.box));
            for (auto& rest : stack) residual.push_back(std::move(rest.box));
            break;
        }
        const IntervalBox& box = it.box;
        if (detail::ball_side(box, delta) == detail::BallSide::Outside) continue;
        if (known_region(box)) continue;
        auto g = sys.grad_box(box);
        if (std::any_of(g.begin(), g.end(), [](const Interval& x) { return !x.contains_zero(); })) continue;

        auto k = detail::krawczyk(sys, box);
        if (k) {
            bool disjoint = false;
            for (std::size_t i = 0; i < n; ++i)
                if (!(*k)[i].intersects(box[i])) disjoint = true;
            if (disjoint) continue;
            if (detail::interior_subset(*k, box)) {
                accept(box);
                continue;
            }
        }

        // Inflation around a Newton point catches roots on bisection planes.
        double w = max_width(box);
        if (w <= delta / 8) {
            if (auto x = detail::float_newton(sys, midpoint(box))) {
                double dist = 0;
                for (std::size_t i = 0; i < n; ++i)
                    dist = std::max(dist, std::max(box[i].lo() - (*x)[i], (*x)[i] - box[i].hi()));
                IntervalBox xb = detail::point_box(*x);
                if (dist <= w && !known_region(xb)) {
                    double scale = 1;
                    for (double v : *x) scale = std::max(scale, std::abs(v));
                    for (double r : {w / 2, w / 16, 1e-7 * scale, 1e-11 * scale}) {
                        IntervalBox cand(n);
                        for (std::size_t i = 0; i < n; ++i)
                            cand[i] = Interval(rounding::down((*x)[i] - r), rounding::up((*x)[i] + r));
                        if (detail::krawczyk_unique(sys, cand)) {
                            accept(std::move(cand));
                            break;
                        }
                    }
                    if (known_region(box)) continue;
                }
            }
        }

        if (it.depth >= cfg.max_depth || w < cfg.exclusion_floor) {
            residual.push_back(box);
            continue;
        }
        std::size_t split = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (box[i].width() > box[split].width()) split = i;
        double mid = box[split].mid();
        IntervalBox left = box, right = box;
        left[split] = Interval(box[split].lo(), mid);
        right[split] = Interval(mid, box[split].hi());
        stack.push_back({std::move(right), it.depth + 1});
        stack.push_back({std::move(left), it.depth + 1});
    }

    // Boxes that ended up inside a certified region after being queued are harmless.
    std::erase_if(residual, [&](const IntervalBox& b) { return known_region(b); });
    if (!residual.empty()) throw MaxDepthExceeded(std::move(residual));

    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.value.mid() != b.value.mid()) return a.value.mid() < b.value.mid();
        return a.midpoint < b.midpoint;
    });
    for (const auto& p : found)
        if (p.value.width() >= cfg.value_sep)
            throw ValueCollision("critical value enclosure " + detail::box_string(std::span(&p.value, 1)) +
                                 " is wider than value_sep");
    for (std::size_t i = 1; i < found.size(); ++i)
        if (found[i - 1].value.intersects(found[i].value))
            throw ValueCollision("critical values " + detail::box_string(std::span(&found[i - 1].value, 1)) +
                                 " and " + detail::box_string(std::span(&found[i].value, 1)) + " overlap");
    return found;
}

/// find_critical_points followed by morse_index for every point.
inline std::vector<CertifiedCriticalPoint> find_morse_points(const Polynomial& ft, double delta,
                                                             const CertConfig& cfg = {}) {
    auto pts = find_critical_points(ft, delta, cfg);
    for (auto& p : pts) p.index = morse_index(ft, p, cfg);
    return pts;
}

/// Diagnoses residual boxes left by a failed enumeration: the hull of the
/// residual boxes is treated as a Morse candidate. Throws DegenerateHessian
/// when its Hessian is singular, otherwise returns the (uncertified) index.
inline int diagnose_residual(const Polynomial& ft, const std::vector<IntervalBox>& residual,
                             const CertConfig& cfg = {}) {
    if (residual.empty()) throw Error("certfind", "no residual boxes to diagnose");
    IntervalBox hull = residual.front();
    for (const auto& b : residual) hull = box_hull(hull, b);
    CertifiedCriticalPoint cand;
    cand.enclosure = hull;
    cand.region = hull;
    cand.midpoint = midpoint(hull);
    cand.certificate = Certificate::Uncertified;
    return morse_index(ft, cand, cfg);
}

// ---------------------------------------------------------------------------
// Scale selection

struct ValidationReport {
    bool isolated_singularity_ok = false;
    bool values_inside_eta_ok = false;
    bool eta_regular_ok = false;
    bool distinct_values_ok = false;
    std::optional<bool> sphere_transversality_ok;
    std::vector<std::string> notes;

    bool all_ok() const {
        return isolated_singularity_ok && values_inside_eta_ok && eta_regular_ok && distinct_values_ok &&
               sphere_transversality_ok.value_or(true);
    }
};

struct ScaleSelection {
    double delta = 0;
    double eta = 0;
    std::vector<Rational> t;
    ValidationReport validation;
    std::vector<CertifiedCriticalPoint> points;  // certified, with Morse indices
};

struct ScaleOverrides {
    std::optional<double> delta;
    std::optional<double> eta;
    std::optional<std::vector<Rational>> t;
    bool check_transversality = false;
    int budget = 20;
};

class BudgetExhausted : public CertificationError {
public:
    BudgetExhausted(const std::string& what, ValidationReport last)
        : CertificationError("certfind", what, "supply explicit delta/eta/t or relax tolerances"),
          last_(std::move(last)) {}
    const ValidationReport& last_report() const { return last_; }

private:
    ValidationReport last_;
};

/// Certifies that grad f has no zero on the closed ball minus a small cube
/// of half-width `hole` around the origin.
inline bool certify_isolated(const Polynomial& f, double delta, double hole, std::size_t max_boxes = 400'000) {
    detail::CriticalSystem sys(f);
    const std::size_t n = sys.dim();
    IntervalBox origin_box(n, Interval(-hole, hole));
    std::vector<IntervalBox> stack{IntervalBox(n, Interval(-delta, delta))};
    std::size_t processed = 0;
    while (!stack.empty()) {
        IntervalBox box = std::move(stack.back());
        stack.pop_back();
        if (++processed > max_boxes) return false;
        if (detail::ball_side(box, delta) == detail::BallSide::Outside) continue;
        if (box_subset(box, origin_box)) continue;
        auto g = sys.grad_box(box);
        if (std::any_of(g.begin(), g.end(), [](const Interval& x) { return !x.contains_zero(); })) continue;
        if (max_width(box) < hole * 1e-3) return false;
        std::size_t split = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (box[i].width() > box[split].width()) split = i;
        double mid = box[split].mid();
        // Split at the origin-box faces when possible so the hole is tiled exactly.
        if (box[split].lo() < -hole && -hole < box[split].hi() && box[split].width() < 4 * hole) mid = -hole;
        if (box[split].lo() < hole && hole < box[split].hi() && box[split].width() < 4 * hole) mid = hole;
        IntervalBox a = box, b = box;
        a[split] = Interval(box[split].lo(), mid);
        b[split] = Interval(mid, box[split].hi());
        stack.push_back(std::move(a));
        stack.push_back(std::move(b));
    }
    return true;
}

/// Certified check that the level set {f = level} meets the sphere |x| = delta
/// transversally: on every box touching both, grad f is not parallel to x.
inline bool check_sphere_transversality(const Polynomial& f, double delta, double level,
                                        std::size_t max_boxes = 400'000) {
    detail::CriticalSystem sys(f);
    const std::size_t n = sys.dim();
    Polynomial shifted = f - Polynomial::constant(n, Rational(level));
    std::vector<std::pair<IntervalBox, int>> stack{{IntervalBox(n, Interval(-delta, delta)), 0}};
    std::size_t processed = 0;
    Interval d2 = detail::squared(delta);
    while (!stack.empty()) {
        auto [box, depth] = std::move(stack.back());
        stack.pop_back();
        if (++processed > max_boxes) return false;
        Interval n2 = norm2(box);
        if (!n2.intersects(d2)) continue;
        if (!shifted.evaluate(std::span<const Interval>(box)).contains_zero()) continue;
        if (n >= 2) {
            auto g = sys.grad_box(box);
            bool transverse = false;
            for (std::size_t i = 0; i < n && !transverse; ++i)
                for (std::size_t j = i + 1; j < n && !transverse; ++j)
                    if (!(box[i] * g[j] - box[j] * g[i]).contains_zero()) transverse = true;
            if (transverse) continue;
        }
        if (depth >= 60) return false;
        std::size_t split = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (box[i].width() > box[split].width()) split = i;
        double mid = box[split].mid();
        IntervalBox a = box, b = box;
        a[split] = Interval(box[split].lo(), mid);
        b[split] = Interval(mid, box[split].hi());
        stack.push_back({std::move(a), depth + 1});
        stack.push_back({std::move(b), depth + 1});
    }
    return true;
}

/// Chooses and validates (delta, eta, t). Delta is certified first (isolated
/// singularity on the ball), then |t| is shrunk geometrically until the
/// critical points of f_t certify with distinct values inside (-eta, eta).
inline ScaleSelection select_scales(const DeformationFamily& family, const ScaleOverrides& ov = {},
                                    const CertConfig& cfg = {}) {
    if (family.base.is_constant()) throw Error("certfind", "germ is constant");
    ValidationReport report;

    double delta = ov.delta.value_or(1.0);
    bool iso = false;
    for (int i = 0; i < ov.budget; ++i) {
        if (certify_isolated(family.base, delta, delta * 1e-3)) {
            iso = true;
            break;
        }
        report.notes.push_back("gradient zero not excluded at delta = " + std::to_string(delta));
        if (ov.delta) break;
        delta /= 2;
    }
    report.isolated_singularity_ok = iso;
    if (!iso) throw BudgetExhausted("could not certify an isolated singularity at the origin", report);

    double eta = ov.eta.value_or(delta * delta / 4);
    std::vector<Rational> t;
    if (ov.t) {
        t = *ov.t;
        if (t.size() != family.param_dim()) throw DimensionMismatch("certfind", family.param_dim(), t.size());
    } else {
        t.assign(family.param_dim(), Rational(delta) / 10);
    }

    for (int attempt = 0; attempt < ov.budget; ++attempt) {
        ValidationReport r = report;
        Polynomial ft = specialize(family, t);
        std::vector<CertifiedCriticalPoint> pts;
        bool ok = true;
        try {
            pts = find_morse_points(ft, delta, cfg);
            r.distinct_values_ok = true;
        } catch (const CertificationError& e) {
            r.notes.push_back(std::string("t = ") + (t.empty() ? "-" : t[0].get_str()) + ": " + e.what());
            ok = false;
        }
        if (ok) {
            r.values_inside_eta_ok = std::all_of(pts.begin(), pts.end(), [&](const auto& p) {
                return p.value.lo() > -eta && p.value.hi() < eta;
            });
            r.eta_regular_ok = std::none_of(pts.begin(), pts.end(), [&](const auto& p) {
                return p.value.contains(eta) || p.value.contains(-eta);
            });
            if (ov.check_transversality)
                r.sphere_transversality_ok = check_sphere_transversality(ft, delta, eta) &&
                                             check_sphere_transversality(ft, delta, -eta);
            if (r.all_ok()) return ScaleSelection{delta, eta, t, std::move(r), std::move(pts)};
            if (!r.values_inside_eta_ok) r.notes.push_back("critical values leave (-eta, eta)");
        }
        report = r;
        if (ov.t) break;
        for (auto& ti : t) ti /= 2;
    }
    throw BudgetExhausted("no accepted (delta, eta, t) triple", report);
}

struct StabilitySample {
    Rational t;
    std::optional<std::size_t> m;
    std::optional<std::string> error;
};

struct StabilityScan {
    std::vector<StabilitySample> samples;
    bool stable = false;
};

/// Counts certified critical points at `samples` log-spaced parameter values
/// from |t|/100 up to |t| along the ray of the selected t. t = 0 is never used.
inline StabilityScan stability_scan(const DeformationFamily& family, const ScaleSelection& scales,
                                    std::size_t samples, const CertConfig& cfg = {}) {
    if (samples < 2) throw Error("certfind", "stability_scan needs at least 2 samples");
    StabilityScan out;
    for (std::size_t k = 0; k < samples; ++k) {
        double expo = -2.0 * double(samples - 1 - k) / double(samples - 1);
        Rational factor(std::pow(10.0, expo));
        if (k + 1 == samples) factor = 1;
        StabilitySample s;
        std::vector<Rational> t = scales.t;
        for (auto& ti : t) ti *= factor;
        s.t = t.empty() ? Rational(0) : t[0];
        try {
            auto pts = find_critical_points(specialize(family, t), scales.delta, cfg);
            s.m = pts.size();
        } catch (const CertificationError& e) {
            s.error = e.what();
        }
        out.samples.push_back(std::move(s));
    }
    out.stable = std::all_of(out.samples.begin(), out.samples.end(), [&](const auto& s) {
        return s.m && s.m == out.samples.front().m;
    });
    return out;
}

}  // namespace milnor
