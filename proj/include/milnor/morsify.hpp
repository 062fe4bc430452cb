#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "milnor/error.hpp"
#include "milnor/polyring.hpp"

namespace milnor {

/// A polynomial family F(x, t): the space variables come first, the k
/// parameter variables last. Specializing every parameter to 0 gives `base`.
struct DeformationFamily {
    Polynomial base;
    Polynomial deformation;
    std::vector<std::string> space_vars;
    std::vector<std::string> param_vars;
    std::optional<int> milnor_number;
    std::optional<std::string> ade_type;
    // Set for generic linear families.
    std::optional<std::vector<double>> direction;
    std::optional<std::uint64_t> seed;

    std::size_t space_dim() const { return space_vars.size(); }
    std::size_t param_dim() const { return param_vars.size(); }
    /// Fibre dimension n, where the germ lives on R^{n+1}.
    std::size_t fibre_dim() const { return space_dim() - 1; }
};

enum class Strength { Strong, Weak, Unknown };

inline const char* to_string(Strength s) {
    switch (s) {
        case Strength::Strong: return "strong";
        case Strength::Weak: return "weak";
        case Strength::Unknown: return "unknown";
    }
    return "?";
}

struct StrengthVerdict {
    Strength kind = Strength::Unknown;
    std::size_t m = 0;
    std::optional<int> mu;
};

/// Returns f_t for the given parameter values, as a polynomial in the space variables.
inline Polynomial specialize(const DeformationFamily& family, std::span<const Rational> t) {
    if (t.size() != family.param_dim()) throw DimensionMismatch("morsify", family.param_dim(), t.size());
    return family.deformation.specialize_tail(family.space_dim(), t);
}

inline Polynomial specialize(const DeformationFamily& family, const Rational& t) {
    return specialize(family, std::span<const Rational>(&t, 1));
}

/// Validates and assembles a family. Throws when F(x, 0) != f or f(0) != 0.
inline DeformationFamily make_family(Polynomial base, Polynomial deformation, std::vector<std::string> space_vars,
                                     std::vector<std::string> param_vars, std::optional<int> mu = std::nullopt,
                                     std::optional<std::string> ade = std::nullopt) {
    if (base.nvars() != space_vars.size()) throw DimensionMismatch("morsify", space_vars.size(), base.nvars());
    if (deformation.nvars() != space_vars.size() + param_vars.size())
        throw DimensionMismatch("morsify", space_vars.size() + param_vars.size(), deformation.nvars());
    if (base.constant_term() != 0) throw Error("morsify", "germ must vanish at the origin (f(0) = 0)");
    if (mu && *mu <= 0) throw Error("morsify", "Milnor number must be positive");
    DeformationFamily fam{std::move(base), std::move(deformation), std::move(space_vars), std::move(param_vars),
                          mu, std::move(ade), std::nullopt, std::nullopt};
    std::vector<Rational> zero(fam.param_dim(), Rational(0));
    if (!(specialize(fam, zero) == fam.base))
        throw Error("morsify", "deformation does not restrict to the germ at t = 0");
    return fam;
}

/// F(x, t) = f(x) + t * sum_i a_i x_i for an explicit direction a.
inline DeformationFamily make_linear_family(const Polynomial& f, std::span<const Rational> direction,
                                            std::vector<std::string> space_vars, std::string param = "t") {
    const std::size_t n = f.nvars();
    if (direction.size() != n) throw DimensionMismatch("morsify", n, direction.size());
    Polynomial F = f.extend(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        Exponent e{};
        e[i] = 1;
        e[n] = 1;
        F.add_term(e, direction[i]);
    }
    return make_family(f, std::move(F), std::move(space_vars), {std::move(param)});
}

/// Unit vector drawn uniformly from the sphere S^{d-1}. Uses mt19937_64 with an
/// explicit Box-Muller transform so the draw is identical on every platform.
inline std::vector<double> unit_sphere_direction(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return (double(rng() >> 11) + 0.5) * 0x1.0p-53; };
    for (;;) {
        std::vector<double> v(d);
        for (std::size_t i = 0; i < d; i += 2) {
            double r = std::sqrt(-2.0 * std::log(uniform()));
            double th = 2.0 * M_PI * uniform();
            v[i] = r * std::cos(th);
            if (i + 1 < d) v[i + 1] = r * std::sin(th);
        }
        double s = 0;
        for (double x : v) s += x * x;
        if (s < 1e-300) continue;
        double inv = 1.0 / std::sqrt(s);
        for (double& x : v) x *= inv;
        return v;
    }
}

/// Generic linear perturbation f + t * <a, x> with a drawn from the unit
/// sphere by a seeded generator. Morse validity for particular t is left to
/// certification.
inline DeformationFamily make_generic_linear_family(const Polynomial& f, std::uint64_t seed,
                                                    std::vector<std::string> space_vars, std::string param = "t") {
    if (f.degree() <= 1) throw Error("morsify", "germ is constant or linear: no isolated critical point to deform");
    if (f.constant_term() != 0) throw Error("morsify", "germ must vanish at the origin (f(0) = 0)");
    std::vector<Rational> origin(f.nvars(), Rational(0));
    for (const auto& g : gradient(f))
        if (g.evaluate(std::span<const Rational>(origin)) != 0)
            throw Error("morsify", "gradient does not vanish at the origin");
    auto a = unit_sphere_direction(f.nvars(), seed);
    std::vector<Rational> dir(a.begin(), a.end());
    DeformationFamily fam = make_linear_family(f, dir, std::move(space_vars), std::move(param));
    fam.direction = std::move(a);
    fam.seed = seed;
    return fam;
}

/// Milnor number of an ADE singularity from its label (A3, A_3, D4, E8, ...).
inline int ade_milnor_number(const std::string& label) {
    static const std::regex re(R"(^\s*([ADEade])_?(\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(label, m, re)) throw Error("morsify", "malformed ADE label '" + label + "'");
    char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(m[1].str()[0])));
    if (m[2].str().size() > 6) throw Error("morsify", "malformed ADE label '" + label + "'");
    int k = std::stoi(m[2].str());
    switch (kind) {
        case 'A':
            if (k >= 1) return k;
            break;
        case 'D':
            if (k >= 4) return k;
            break;
        case 'E':
            if (k >= 6 && k <= 8) return k;
            break;
    }
    throw Error("morsify", "no ADE singularity named '" + label + "'");
}

/// Milnor number when the gradient ideal is generated by monomials: the
/// number of monomials outside the ideal (its staircase). Returns nullopt when
/// some partial derivative is not a single term or the quotient is infinite.
inline std::optional<int> staircase_milnor_number(const Polynomial& f) {
    const std::size_t n = f.nvars();
    if (n == 0) return std::nullopt;
    std::vector<Exponent> gens;
    for (const auto& g : gradient(f)) {
        if (g.terms().size() != 1) return std::nullopt;
        gens.push_back(g.terms().begin()->first);
    }
    std::vector<unsigned> bound(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : gens) {
            bool pure = true;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && e[j] != 0) pure = false;
            if (pure && (bound[i] == 0 || e[i] < bound[i])) bound[i] = e[i];
        }
        if (bound[i] == 0) {
            // A constant generator means the ideal is the unit ideal.
            for (const auto& e : gens)
                if (total_degree(e) == 0) return 0;
            return std::nullopt;
        }
    }
    int count = 0;
    Exponent cur{};
    for (;;) {
        bool divisible = false;
        for (const auto& e : gens) {
            bool d = true;
            for (std::size_t j = 0; j < n; ++j)
                if (cur[j] < e[j]) d = false;
            if (d) {
                divisible = true;
                break;
            }
        }
        if (!divisible) ++count;
        std::size_t j = 0;
        while (j < n) {
            if (++cur[j] < bound[j]) break;
            cur[j] = 0;
            ++j;
        }
        if (j == n) break;
    }
    return count;
}

/// Milnor number from, in order of preference: the explicit value, the ADE
/// label, or the monomial staircase.
inline std::optional<int> resolve_milnor_number(const DeformationFamily& family) {
    if (family.milnor_number) return family.milnor_number;
    if (family.ade_type) return ade_milnor_number(*family.ade_type);
    return staircase_milnor_number(family.base);
}

inline StrengthVerdict classify_strength(const DeformationFamily& family, std::size_t m) {
    StrengthVerdict v;
    v.m = m;
    v.mu = resolve_milnor_number(family);
    if (!v.mu) return v;
    if (m > static_cast<std::size_t>(*v.mu))
        throw Error("morsify",
                    "observed " + std::to_string(m) + " critical points but mu = " + std::to_string(*v.mu),
                    "check the Milnor number or shrink the ball radius");
    v.kind = m == static_cast<std::size_t>(*v.mu) ? Strength::Strong : Strength::Weak;
    return v;
}

}  // namespace milnor
