#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "milnor/cli/config.hpp"
#include "milnor/cubeoracle.hpp"
#include "milnor/fibretop.hpp"

namespace nlohmann {
template <class T>
struct adl_serializer<std::optional<T>> {
    static void to_json(json& j, const std::optional<T>& v) {
        if (v) j = *v;
        else j = nullptr;
    }
    static void from_json(const json& j, std::optional<T>& v) {
        if (j.is_null()) v.reset();
        else v = j.get<T>();
    }
};
}  // namespace nlohmann

namespace milnor::cli {

using Bounds = std::array<double, 2>;

struct ReportFamily {
    std::string germ;
    std::string deformation;
    std::vector<std::string> space_vars;
    std::vector<std::string> param_vars;
    std::optional<int> milnor_number;
    std::optional<std::string> ade;
    std::optional<std::vector<double>> direction;
    std::optional<std::uint64_t> seed;
    friend bool operator==(const ReportFamily&, const ReportFamily&) = default;
};

struct ReportScales {
    double delta = 0;
    double eta = 0;
    std::vector<std::string> t;
    bool isolated_singularity_ok = false;
    bool values_inside_eta_ok = false;
    bool eta_regular_ok = false;
    bool distinct_values_ok = false;
    std::optional<bool> sphere_transversality_ok;
    std::vector<std::string> notes;
    friend bool operator==(const ReportScales&, const ReportScales&) = default;
};

struct ReportPoint {
    std::vector<Bounds> enclosure;
    std::vector<Bounds> region;
    std::vector<double> midpoint;
    Bounds value{};
    std::optional<int> index;
    std::string certificate;
    friend bool operator==(const ReportPoint&, const ReportPoint&) = default;
};

struct ReportStrength {
    std::string kind;
    std::size_t m = 0;
    std::optional<int> mu;
    friend bool operator==(const ReportStrength&, const ReportStrength&) = default;
};

struct ReportHandle {
    double value = 0;
    int index = 0;
    std::array<int, 2> dims{};
    friend bool operator==(const ReportHandle&, const ReportHandle&) = default;
};

struct ReportHandles {
    std::string side;
    std::size_t n = 0;
    bool contractible = false;
    std::vector<ReportHandle> handles;
    friend bool operator==(const ReportHandles&, const ReportHandles&) = default;
};

struct ReportPoincare {
    std::string kind;  // "polynomial", "empty" or "hypothesis_not_met"
    std::vector<long long> coefficients;
    std::string text;
    friend bool operator==(const ReportPoincare&, const ReportPoincare&) = default;
};

struct ReportHomology {
    bool available = false;
    std::string reason;
    std::vector<long long> ranks;
    std::vector<std::vector<std::string>> torsion;
    friend bool operator==(const ReportHomology&, const ReportHomology&) = default;
};

struct ReportVanishing {
    std::optional<int> positive_degree;
    std::optional<int> negative_degree;
    friend bool operator==(const ReportVanishing&, const ReportVanishing&) = default;
};

struct ReportNonempty {
    std::string verdict;
    std::optional<std::vector<Bounds>> witness;
    friend bool operator==(const ReportNonempty&, const ReportNonempty&) = default;
};

struct ReportTopology {
    std::size_t n = 0;
    long long chi_plus = 0;
    long long chi_minus = 0;
    ReportPoincare poincare_plus;
    ReportPoincare poincare_minus;
    ReportHomology homology;
    std::vector<ReportVanishing> vanishing_cycles;
    ReportNonempty nonempty_plus;
    ReportNonempty nonempty_minus;
    friend bool operator==(const ReportTopology&, const ReportTopology&) = default;
};

struct ReportChiCheck {
    std::string region;
    double a = 0;
    double b = 0;
    long long formula = 0;
    std::size_t resolution = 0;
    long long oracle_n = 0;
    long long oracle_2n = 0;
    bool converged = false;
    bool agrees = false;
    friend bool operator==(const ReportChiCheck&, const ReportChiCheck&) = default;
};

struct ReportBetti {
    std::string region;
    double a = 0;
    double b = 0;
    std::size_t resolution = 0;
    std::vector<long long> betti;
    std::vector<std::vector<std::string>> torsion;
    long long euler_characteristic = 0;
    std::optional<std::vector<long long>> expected;
    bool agrees = false;
    friend bool operator==(const ReportBetti&, const ReportBetti&) = default;
};

struct ReportOracle {
    std::string mode;
    double window_halfwidth = 0;
    std::vector<ReportChiCheck> chi;
    std::vector<ReportBetti> betti;
    std::string status;  // "agree", "disagree" or "unconverged"
    friend bool operator==(const ReportOracle&, const ReportOracle&) = default;
};

struct RunReport {
    int schema = 1;
    ConfigSections config;
    ReportFamily family;
    ReportScales scales;
    std::vector<ReportPoint> critical_points;
    ReportStrength strength;
    ReportHandles handles_plus;
    ReportHandles handles_minus;
    ReportTopology topology;
    std::optional<ReportOracle> oracle;
    std::optional<std::map<std::string, double>> timings;
    friend bool operator==(const RunReport&, const RunReport&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportFamily, germ, deformation, space_vars, param_vars, milnor_number, ade,
                                   direction, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportScales, delta, eta, t, isolated_singularity_ok, values_inside_eta_ok,
                                   eta_regular_ok, distinct_values_ok, sphere_transversality_ok, notes)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportPoint, enclosure, region, midpoint, value, index, certificate)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportStrength, kind, m, mu)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportHandle, value, index, dims)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportHandles, side, n, contractible, handles)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportPoincare, kind, coefficients, text)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportHomology, available, reason, ranks, torsion)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportVanishing, positive_degree, negative_degree)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportNonempty, verdict, witness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportTopology, n, chi_plus, chi_minus, poincare_plus, poincare_minus, homology,
                                   vanishing_cycles, nonempty_plus, nonempty_minus)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportChiCheck, region, a, b, formula, resolution, oracle_n, oracle_2n, converged,
                                   agrees)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportBetti, region, a, b, resolution, betti, torsion, euler_characteristic,
                                   expected, agrees)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportOracle, mode, window_halfwidth, chi, betti, status)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunReport, schema, config, family, scales, critical_points, strength, handles_plus,
                                   handles_minus, topology, oracle, timings)

/// Serialized report; timings are dropped when `with_timings` is false.
inline std::string dump_report(const RunReport& r, bool with_timings = true) {
    nlohmann::json j = r;
    if (!with_timings) j.erase("timings");
    return j.dump(2) + "\n";
}

inline RunReport parse_report(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("timings")) j["timings"] = nullptr;
    if (j.value("schema", 0) != 1) throw Error("cli", "unsupported report schema");
    return j.get<RunReport>();
}

// Conversions from library results.

inline Bounds bounds(const Interval& x) { return {x.lo(), x.hi()}; }

inline std::vector<Bounds> bounds(std::span<const Interval> box) {
    std::vector<Bounds> b;
    for (const auto& x : box) b.push_back(bounds(x));
    return b;
}

inline ReportPoint to_report(const CertifiedCriticalPoint& p) {
    return {bounds(p.enclosure), bounds(p.region), p.midpoint, bounds(p.value), p.index, to_string(p.certificate)};
}

inline ReportHandles to_report(const HandleDecomposition& hd) {
    ReportHandles r{to_string(hd.side), hd.n, hd.contractible(), {}};
    for (const auto& h : hd.handles) r.handles.push_back({h.value, h.index, {h.dims.first, h.dims.second}});
    return r;
}

inline ReportPoincare to_report(const PoincareResult& p) {
    if (auto* u = std::get_if<UPolynomial>(&p)) return {"polynomial", u->coeffs(), u->to_string()};
    if (std::holds_alternative<EmptyFibre>(p)) return {"empty", {}, "empty"};
    return {"hypothesis_not_met", {}, std::get<HypothesisNotMet>(p).reason};
}

inline std::vector<std::vector<std::string>> torsion_strings(const std::vector<std::vector<mpz_class>>& t) {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : t) {
        out.emplace_back();
        for (const auto& v : row) out.back().push_back(v.get_str());
    }
    return out;
}

inline ReportHomology to_report(const BouquetResult& b) {
    ReportHomology r;
    if (auto* h = std::get_if<HomologyTable>(&b)) {
        r.available = true;
        for (const auto& g : *h) {
            r.ranks.push_back(g.rank);
            r.torsion.emplace_back();
            for (long long t : g.torsion) r.torsion.back().push_back(std::to_string(t));
        }
    } else {
        r.reason = std::get<HypothesisNotMet>(b).reason;
    }
    return r;
}

inline ReportNonempty to_report(const NonemptyResult& n) {
    ReportNonempty r{to_string(n.verdict), std::nullopt};
    if (n.witness) r.witness = bounds(*n.witness);
    return r;
}

inline ReportChiCheck to_report(const ChiComparison& c) {
    return {c.region, c.a, c.b, c.formula, c.resolution, c.oracle_n, c.oracle_2n, c.converged(), c.agrees()};
}

}  // namespace milnor::cli
