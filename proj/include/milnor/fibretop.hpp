#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "milnor/certfind.hpp"
#include "milnor/error.hpp"

namespace milnor {

enum class Side { Positive, Negative };

inline const char* to_string(Side s) { return s == Side::Positive ? "positive" : "negative"; }

/// Polynomial in u with integer coefficients; coeffs[k] multiplies u^k.
class UPolynomial {
public:
    UPolynomial() = default;
    explicit UPolynomial(std::vector<long long> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UPolynomial constant(long long c) { return UPolynomial({c}); }
    /// c0 + c * u^k
    static UPolynomial binomial(long long c0, long long c, std::size_t k) {
        std::vector<long long> v(k + 1, 0);
        v[0] += c0;
        v[k] += c;
        return UPolynomial(std::move(v));
    }

    const std::vector<long long>& coeffs() const { return c_; }
    long long coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : 0; }
    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }

    long long evaluate(long long u) const {
        long long r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * u + *it;
        return r;
    }

    /// "1 + 3u", "1 + u^2", "2", "0".
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            long long c = c_[k];
            if (c == 0) continue;
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << '-';
            long long a = c < 0 ? -c : c;
            if (k == 0 || a != 1) os << a;
            if (k >= 1) os << 'u';
            if (k >= 2) os << '^' << k;
            first = false;
        }
        return first ? "0" : os.str();
    }

    friend bool operator==(const UPolynomial&, const UPolynomial&) = default;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<long long> c_;
};

struct Handle {
    double value;  // critical value midpoint s_i
    int index;     // λ_i
    std::pair<int, int> dims;

    friend bool operator==(const Handle&, const Handle&) = default;
};

struct HandleDecomposition {
    std::size_t n = 0;
    Side side = Side::Positive;
    std::vector<Handle> handles;

    /// No critical points: both fibres are contractible.
    bool contractible() const { return handles.empty(); }
};

/// Marker returned in place of a result whose topological hypotheses fail.
struct HypothesisNotMet {
    std::string reason;
    friend bool operator==(const HypothesisNotMet&, const HypothesisNotMet&) = default;
};

/// Marker for a Poincare polynomial of an empty fibre.
struct EmptyFibre {
    friend bool operator==(const EmptyFibre&, const EmptyFibre&) = default;
};

using PoincareResult = std::variant<UPolynomial, EmptyFibre, HypothesisNotMet>;

inline std::string to_string(const PoincareResult& p) {
    if (auto* u = std::get_if<UPolynomial>(&p)) return u->to_string();
    if (std::holds_alternative<EmptyFibre>(p)) return "empty";
    return "hypothesis not met: " + std::get<HypothesisNotMet>(p).reason;
}

/// Value at u = -1 (0 for an empty fibre); nullopt when no polynomial is available.
inline std::optional<long long> euler_characteristic(const PoincareResult& p) {
    if (auto* u = std::get_if<UPolynomial>(&p)) return u->evaluate(-1);
    if (std::holds_alternative<EmptyFibre>(p)) return 0;
    return std::nullopt;
}

struct HomologyGroup {
    long long rank = 0;
    std::vector<long long> torsion;

    friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

using HomologyTable = std::vector<HomologyGroup>;  // H_0 .. H_n
using BouquetResult = std::variant<HomologyTable, HypothesisNotMet>;

struct VanishingCycle {
    std::optional<int> positive_degree;
    std::optional<int> negative_degree;

    friend bool operator==(const VanishingCycle&, const VanishingCycle&) = default;
};

namespace detail {

inline void check_index(int lambda, std::size_t n) {
    if (lambda < 0 || lambda > static_cast<int>(n) + 1)
        throw Error("fibretop", "Morse index " + std::to_string(lambda) + " outside [0, " + std::to_string(n + 1) + "]");
}

inline int sign_power(int k) { return k % 2 == 0 ? 1 : -1; }

}  // namespace detail

/// Euler characteristics of the positive and negative closed Milnor fibres
/// from the Morse indices of a morsification.
inline std::pair<long long, long long> khimshiashvili_chi(std::span<const int> indices, std::size_t n) {
    long long plus = 1, minus = 1;
    for (int l : indices) {
        detail::check_index(l, n);
        plus -= detail::sign_power(static_cast<int>(n) + 1 - l);
        minus -= detail::sign_power(l);
    }
    return {plus, minus};
}

inline std::pair<int, int> handle_dims(int lambda, std::size_t n, Side side) {
    detail::check_index(lambda, n);
    int co = static_cast<int>(n) + 1 - lambda;
    return side == Side::Positive ? std::pair{lambda, co} : std::pair{co, lambda};
}

inline HandleDecomposition handle_decomposition(std::span<const CertifiedCriticalPoint> points, std::size_t n,
                                                Side side) {
    HandleDecomposition hd;
    hd.n = n;
    hd.side = side;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!p.index) throw Error("fibretop", "critical point without a certified Morse index");
        if (i > 0 && !(points[i - 1].value.hi() < p.value.lo()))
            throw Error("fibretop", "critical values are unsorted or overlapping");
        hd.handles.push_back({p.value.mid(), *p.index, handle_dims(*p.index, n, side)});
    }
    return hd;
}

/// Poincare polynomial of a fibre when f_t has a single critical point.
inline PoincareResult poincare_single(int lambda, std::size_t n, Side side, bool fibre_nonempty) {
    detail::check_index(lambda, n);
    if (!fibre_nonempty) return EmptyFibre{};
    const int nn = static_cast<int>(n);
    if (side == Side::Positive)
        return lambda <= nn ? UPolynomial::binomial(1, 1, static_cast<std::size_t>(nn - lambda))
                            : UPolynomial::constant(1);
    return lambda >= 1 ? UPolynomial::binomial(1, 1, static_cast<std::size_t>(lambda - 1)) : UPolynomial::constant(1);
}

/// Homology of a bouquet of m spheres of dimension (n-1)/2, valid when n is
/// odd, n > 1, every index equals (n+1)/2 and the fibres are nonempty.
inline BouquetResult bouquet_homology(std::size_t m, std::span<const int> indices, std::size_t n, bool fibres_nonempty) {
    if (n % 2 == 0) return HypothesisNotMet{"n even"};
    if (n <= 1) return HypothesisNotMet{"n must exceed 1"};
    if (indices.size() != m) return HypothesisNotMet{"index count differs from m"};
    const int half = static_cast<int>(n + 1) / 2;
    for (int l : indices)
        if (l != half) return HypothesisNotMet{"index " + std::to_string(l) + " != (n+1)/2 = " + std::to_string(half)};
    if (!fibres_nonempty) return HypothesisNotMet{"fibre empty"};
    HomologyTable h(n + 1);
    h[0].rank = 1;
    h[(n - 1) / 2].rank += static_cast<long long>(m);
    return h;
}

/// (beta_plus, beta_minus) = (1 + m u^(n-λ), 1 + m u^(λ-1)).
inline std::pair<UPolynomial, UPolynomial> poincare_bouquet(std::size_t m, int lambda, std::size_t n) {
    if (m == 0) return {UPolynomial::constant(1), UPolynomial::constant(1)};
    detail::check_index(lambda, n);
    if (lambda < 1 || lambda > static_cast<int>(n)) throw Error("fibretop", "bouquet index must lie in [1, n]");
    const auto mm = static_cast<long long>(m);
    return {UPolynomial::binomial(1, mm, n - static_cast<std::size_t>(lambda)),
            UPolynomial::binomial(1, mm, static_cast<std::size_t>(lambda - 1))};
}

inline VanishingCycle vanishing_cycle(int lambda, std::size_t n) {
    detail::check_index(lambda, n);
    VanishingCycle v;
    if (lambda <= static_cast<int>(n)) v.positive_degree = static_cast<int>(n) - lambda;
    if (lambda >= 1) v.negative_degree = lambda - 1;
    return v;
}

inline std::vector<VanishingCycle> vanishing_cycles(std::span<const CertifiedCriticalPoint> points, std::size_t n) {
    std::vector<VanishingCycle> out;
    for (const auto& p : points) {
        if (!p.index) throw Error("fibretop", "critical point without a certified Morse index");
        out.push_back(vanishing_cycle(*p.index, n));
    }
    return out;
}

struct TopologyReport {
    std::size_t n = 0;
    long long chi_plus = 1;
    long long chi_minus = 1;
    PoincareResult poincare_plus = UPolynomial::constant(1);
    PoincareResult poincare_minus = UPolynomial::constant(1);
    BouquetResult homology = HypothesisNotMet{"not evaluated"};
    std::vector<VanishingCycle> vanishing;
    HandleDecomposition handles_plus;
    HandleDecomposition handles_minus;
};

/// Assembles every fibre-level conclusion from certified Morse points.
/// Nonemptiness of each fibre must be supplied (see fibre_nonempty).
inline TopologyReport topology_report(std::span<const CertifiedCriticalPoint> points, std::size_t n,
                                      bool plus_nonempty, bool minus_nonempty) {
    TopologyReport r;
    r.n = n;
    std::vector<int> idx;
    for (const auto& p : points) {
        if (!p.index) throw Error("fibretop", "critical point without a certified Morse index");
        idx.push_back(*p.index);
    }
    std::tie(r.chi_plus, r.chi_minus) = khimshiashvili_chi(idx, n);
    r.handles_plus = handle_decomposition(points, n, Side::Positive);
    r.handles_minus = handle_decomposition(points, n, Side::Negative);
    r.vanishing = vanishing_cycles(points, n);
    r.homology = bouquet_homology(idx.size(), idx, n, plus_nonempty && minus_nonempty);

    if (idx.empty()) {
        r.poincare_plus = r.poincare_minus = UPolynomial::constant(1);
    } else if (idx.size() == 1) {
        r.poincare_plus = poincare_single(idx[0], n, Side::Positive, plus_nonempty);
        r.poincare_minus = poincare_single(idx[0], n, Side::Negative, minus_nonempty);
    } else if (std::holds_alternative<HomologyTable>(r.homology)) {
        auto [bp, bm] = poincare_bouquet(idx.size(), idx[0], n);
        r.poincare_plus = bp;
        r.poincare_minus = bm;
    } else {
        r.poincare_plus = r.poincare_minus = std::get<HypothesisNotMet>(r.homology);
    }
    return r;
}

}  // namespace milnor
