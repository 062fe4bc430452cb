#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "milnor/certfind.hpp"
#include "milnor/cli/config.hpp"
#include "milnor/cli/report.hpp"
#include "milnor/cubeoracle.hpp"
#include "milnor/fibretop.hpp"
#include "milnor/morsify.hpp"
#include "milnor/polyring.hpp"

namespace milnor::cli {

enum ExitCode : int { kOk = 0, kConfigFailure = 1, kCertificationFailure = 2, kOracleDisagreement = 3 };

/// Command-line overrides of config values.
struct Overrides {
    std::optional<double> delta;
    std::optional<double> eta;
    std::optional<std::string> t;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> resolution;
    std::optional<std::string> mode;
};

/// Applies overrides to both the typed config and its raw echo.
inline void apply_overrides(RunConfig& c, const Overrides& o) {
    auto fmt = [](double v) {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    if (o.delta) {
        c.scales.delta = *o.delta;
        c.raw["scales"]["delta"] = fmt(*o.delta);
    }
    if (o.eta) {
        c.scales.eta = *o.eta;
        c.raw["scales"]["eta"] = fmt(*o.eta);
    }
    if (o.t) {
        c.scales.t = detail::split_list(*o.t);
        c.raw["scales"]["t"] = *o.t;
    }
    if (o.seed) {
        c.family.seed = *o.seed;
        c.raw["family"]["seed"] = std::to_string(*o.seed);
    }
    if (o.resolution) {
        c.oracle.resolution = *o.resolution;
        c.raw["oracle"]["resolution"] = std::to_string(*o.resolution);
    }
    if (o.mode) {
        c.oracle.mode = detail::to_mode(*o.mode);
        c.raw["oracle"]["mode"] = *o.mode;
    }
}

/// Every intermediate result of one run, plus the report built from them.
struct PipelineRun {
    RunConfig config;
    DeformationFamily family;
    ScaleSelection scales;
    Polynomial ft;
    StrengthVerdict strength;
    NonemptyResult nonempty_plus;
    NonemptyResult nonempty_minus;
    TopologyReport topology;
    RunReport report;
    int exit_code = kOk;
};

inline DeformationFamily build_family(const RunConfig& c) {
    const auto& vars = c.germ.variables;
    Polynomial f = parse_polynomial(c.germ.polynomial, vars);
    if (c.family.generic) {
        auto fam = make_generic_linear_family(f, c.family.seed, vars, "t");
        fam.milnor_number = c.family.mu;
        fam.ade_type = c.family.ade;
        return fam;
    }
    std::vector<std::string> all = vars;
    all.insert(all.end(), c.family.parameters.begin(), c.family.parameters.end());
    Polynomial F = parse_polynomial(*c.family.deformation, all);
    return make_family(std::move(f), std::move(F), vars, c.family.parameters, c.family.mu, c.family.ade);
}

namespace detail {

class Stopwatch {
public:
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline ReportFamily family_report(const RunConfig& c, const DeformationFamily& fam) {
    ReportFamily r;
    r.germ = c.germ.polynomial;
    r.deformation = c.family.deformation.value_or("generic linear");
    r.space_vars = fam.space_vars;
    r.param_vars = fam.param_vars;
    r.milnor_number = fam.milnor_number;
    r.ade = fam.ade_type;
    r.direction = fam.direction;
    r.seed = fam.seed;
    return r;
}

inline ReportScales scales_report(const ScaleSelection& s) {
    ReportScales r;
    r.delta = s.delta;
    r.eta = s.eta;
    for (const auto& t : s.t) r.t.push_back(t.get_str());
    r.isolated_singularity_ok = s.validation.isolated_singularity_ok;
    r.values_inside_eta_ok = s.validation.values_inside_eta_ok;
    r.eta_regular_ok = s.validation.eta_regular_ok;
    r.distinct_values_ok = s.validation.distinct_values_ok;
    r.sphere_transversality_ok = s.validation.sphere_transversality_ok;
    r.notes = s.validation.notes;
    return r;
}

}  // namespace detail

/// Parse, family, scales, certified points with indices, strength.
inline PipelineRun run_certification(RunConfig config) {
    PipelineRun run;
    run.config = std::move(config);
    const auto& c = run.config;
    detail::Stopwatch clock;
    std::map<std::string, double> timings;

    run.family = build_family(c);
    timings["family"] = clock.lap();

    ScaleOverrides ov;
    ov.delta = c.scales.delta;
    ov.eta = c.scales.eta;
    if (c.scales.t) {
        std::vector<Rational> t;
        for (const auto& s : *c.scales.t) t.push_back(parse_rational(s));
        ov.t = std::move(t);
    }
    ov.check_transversality = c.scales.transversality;
    ov.budget = c.scales.budget;
    run.scales = select_scales(run.family, ov, c.scales.tolerances);
    run.ft = specialize(run.family, run.scales.t);
    for (const auto& p : run.scales.points)
        if (p.certificate != Certificate::NewtonUnique || !p.index)
            throw CertificationError("certfind", "critical point without a uniqueness certificate and index");
    timings["scales"] = clock.lap();

    run.strength = classify_strength(run.family, run.scales.points.size());

    auto& r = run.report;
    r.config = c.raw;
    r.family = detail::family_report(c, run.family);
    r.scales = detail::scales_report(run.scales);
    for (const auto& p : run.scales.points) r.critical_points.push_back(to_report(p));
    r.strength = {to_string(run.strength.kind), run.strength.m, run.strength.mu};
    r.timings = timings;
    return run;
}

/// Fibre nonemptiness, handles, Euler characteristics, Poincare polynomials
/// and bouquet homology. An undecided nonemptiness test leaves the affected
/// Poincare polynomial unevaluated.
inline void run_topology(PipelineRun& run) {
    detail::Stopwatch clock;
    const std::size_t n = run.family.fibre_dim();
    const double delta = run.scales.delta, eta = run.scales.eta;
    run.nonempty_plus = fibre_nonempty(run.ft, eta, delta);
    run.nonempty_minus = fibre_nonempty(run.ft, -eta, delta);
    const bool plus = run.nonempty_plus.verdict != Nonemptiness::Empty;
    const bool minus = run.nonempty_minus.verdict != Nonemptiness::Empty;
    run.topology = topology_report(run.scales.points, n, plus, minus);
    const HypothesisNotMet undecided{"fibre nonemptiness undecided"};
    if (run.nonempty_plus.verdict == Nonemptiness::Undecided) run.topology.poincare_plus = undecided;
    if (run.nonempty_minus.verdict == Nonemptiness::Undecided) run.topology.poincare_minus = undecided;
    if ((run.nonempty_plus.verdict == Nonemptiness::Undecided ||
         run.nonempty_minus.verdict == Nonemptiness::Undecided) &&
        std::holds_alternative<HomologyTable>(run.topology.homology))
        run.topology.homology = undecided;

    auto& r = run.report;
    r.handles_plus = to_report(run.topology.handles_plus);
    r.handles_minus = to_report(run.topology.handles_minus);
    auto& t = r.topology;
    t.n = n;
    t.chi_plus = run.topology.chi_plus;
    t.chi_minus = run.topology.chi_minus;
    t.poincare_plus = to_report(run.topology.poincare_plus);
    t.poincare_minus = to_report(run.topology.poincare_minus);
    t.homology = to_report(run.topology.homology);
    t.vanishing_cycles.clear();
    for (const auto& v : run.topology.vanishing) t.vanishing_cycles.push_back({v.positive_degree, v.negative_degree});
    t.nonempty_plus = to_report(run.nonempty_plus);
    t.nonempty_minus = to_report(run.nonempty_minus);
    if (r.timings) (*r.timings)["topology"] = clock.lap();
}

inline ReportOracle& oracle_section(PipelineRun& run) {
    if (!run.report.oracle) {
        run.report.oracle = ReportOracle{};
        run.report.oracle->mode = to_string(run.config.oracle.mode);
        run.report.oracle->status = "agree";
    }
    return *run.report.oracle;
}

/// Oracle Euler characteristics against the formula. `forced_indices`
/// replaces the certified Morse indices, which makes the formula side wrong
/// on purpose when the indices are.
inline void run_chi_oracle(PipelineRun& run, const std::optional<std::vector<int>>& forced_indices = std::nullopt) {
    detail::Stopwatch clock;
    const auto& oc = run.config.oracle;
    std::vector<CertifiedCriticalPoint> pts = run.scales.points;
    if (forced_indices) {
        if (forced_indices->size() != pts.size())
            throw ConfigError("--indices lists " + std::to_string(forced_indices->size()) + " indices but m = " +
                              std::to_string(pts.size()));
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i].index = (*forced_indices)[i];
    }
    VerifyOptions opt{oc.resolution, oc.mode, oc.window_plus, oc.window_minus, true};
    auto& o = oracle_section(run);
    ChiVerification rec;
    bool unconverged = false;
    try {
        rec = verify_chi(run.ft, run.scales.delta, run.scales.eta, pts, opt);
    } catch (const Unconverged& e) {
        rec = e.record();
        unconverged = true;
    }
    o.window_halfwidth = rec.window_halfwidth;
    o.chi.clear();
    for (const auto& c : rec.checks) o.chi.push_back(to_report(c));
    if (unconverged) {
        o.status = "unconverged";
        run.exit_code = kOracleDisagreement;
    } else if (!rec.ok()) {
        if (o.status == "agree") o.status = "disagree";
        run.exit_code = kOracleDisagreement;
    }
    if (run.report.timings) (*run.report.timings)["oracle_chi"] = clock.lap();
}

/// Cubical homology of both thickened fibres after collapse, compared with
/// the Poincare polynomial coefficients where those are available.
inline void run_betti_oracle(PipelineRun& run) {
    detail::Stopwatch clock;
    const auto& oc = run.config.oracle;
    const std::size_t d = run.ft.nvars();
    const std::size_t res = oc.betti_resolution ? oc.betti_resolution : default_resolution(d);
    const double eta = run.scales.eta;
    const double w = default_window_halfwidth(run.scales.points, eta);
    if (!(w > 0) && (!oc.window_plus || !oc.window_minus))
        throw Error("cubeoracle", "a critical value lies on +-eta; no critical-value-free window");
    auto& o = oracle_section(run);
    o.betti.clear();
    struct Side {
        const char* name;
        std::pair<double, double> window;
        const ReportPoincare* poincare;
    };
    const Side sides[] = {
        {"positive", oc.window_plus.value_or(std::pair{eta - w, eta + w}), &run.report.topology.poincare_plus},
        {"negative", oc.window_minus.value_or(std::pair{-eta - w, -eta + w}), &run.report.topology.poincare_minus},
    };
    for (const auto& s : sides) {
        auto cx = build_region_complex({run.ft, s.window.first, s.window.second, run.scales.delta, res}, oc.mode);
        cx = collapse(std::move(cx));
        HomologyResult h = cubical_homology(cx);
        ReportBetti b{s.name, s.window.first, s.window.second, res, h.betti, torsion_strings(h.torsion),
                      h.euler_characteristic(), std::nullopt, false};
        if (s.poincare->kind != "hypothesis_not_met") {
            std::vector<long long> expected(d + 1, 0);
            for (std::size_t k = 0; k < s.poincare->coefficients.size() && k <= d; ++k)
                expected[k] = s.poincare->coefficients[k];
            b.expected = expected;
            b.agrees = h.torsion_free() && h.betti == expected;
            if (!b.agrees) {
                o.status = "disagree";
                run.exit_code = kOracleDisagreement;
            }
        }
        o.betti.push_back(std::move(b));
    }
    if (run.report.timings) (*run.report.timings)["oracle_betti"] = clock.lap();
}

/// The full analysis: certification, topology and the oracle checks the
/// config enables.
inline PipelineRun analyze(RunConfig config) {
    PipelineRun run = run_certification(std::move(config));
    run_topology(run);
    if (run.config.oracle.enabled) run_chi_oracle(run);
    if (run.config.oracle.betti) run_betti_oracle(run);
    return run;
}

/// Maps an exception escaping the pipeline onto the exit-code contract.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const Unconverged*>(&e)) return kOracleDisagreement;
    if (dynamic_cast<const CertificationError*>(&e)) return kCertificationFailure;
    if (auto* err = dynamic_cast<const Error*>(&e)) {
        if (err->module() == "certfind" || err->module() == "fibretop") return kCertificationFailure;
    }
    return kConfigFailure;
}

inline std::string describe_error(const std::exception& e) {
    std::string s = "error";
    if (auto* err = dynamic_cast<const Error*>(&e)) {
        s += " [" + err->module() + "]: " + e.what();
        if (!err->hint().empty()) s += "\n  hint: " + err->hint();
    } else {
        s += ": " + std::string(e.what());
    }
    return s + "\n";
}

// Text sections printed by the subcommands.

namespace detail {

inline std::string num(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string box_text(const std::vector<Bounds>& box) {
    std::string s;
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (i) s += " x ";
        s += "[" + num(box[i][0], 15) + ", " + num(box[i][1], 15) + "]";
    }
    return s;
}

}  // namespace detail

inline std::string format_chi(const RunReport& r) {
    std::string s = "χ⁺=" + std::to_string(r.topology.chi_plus) + " χ⁻=" + std::to_string(r.topology.chi_minus) + "\n";
    if (r.oracle)
        for (const auto& c : r.oracle->chi)
            s += "  oracle " + c.region + " [" + detail::num(c.a) + ", " + detail::num(c.b) + "]: formula " +
                 std::to_string(c.formula) + ", N=" + std::to_string(c.resolution) + " -> " +
                 std::to_string(c.oracle_n) + ", 2N -> " + std::to_string(c.oracle_2n) +
                 (c.agrees ? "  ok" : "  MISMATCH") + "\n";
    return s;
}

inline std::string format_critical(const RunReport& r) {
    std::string s = "m = " + std::to_string(r.critical_points.size()) + "\n";
    for (std::size_t i = 0; i < r.critical_points.size(); ++i) {
        const auto& p = r.critical_points[i];
        s += "p" + std::to_string(i + 1) + "  " + detail::box_text(p.enclosure) + "  value " +
             detail::box_text({p.value}) + "  λ=" + (p.index ? std::to_string(*p.index) : "?") + "  " +
             p.certificate + "\n";
    }
    return s;
}

inline std::string format_handles(const RunReport& r) {
    std::string s;
    for (const auto* h : {&r.handles_plus, &r.handles_minus}) {
        s += h->side + " side: ";
        if (h->contractible) {
            s += "contractible (no handles)\n";
            continue;
        }
        for (std::size_t i = 0; i < h->handles.size(); ++i) {
            const auto& x = h->handles[i];
            if (i) s += ", ";
            s += "(" + std::to_string(x.dims[0]) + "," + std::to_string(x.dims[1]) + ")@" + detail::num(x.value);
        }
        s += "\n";
    }
    return s;
}

inline std::string poincare_text(const ReportPoincare& p) {
    if (p.kind == "empty") return "0 (empty fibre)";
    if (p.kind == "hypothesis_not_met") return "not evaluated (" + p.text + ")";
    return p.text;
}

inline std::string format_topology(const RunReport& r) {
    const auto& t = r.topology;
    std::string s = format_chi(r);
    s += "P⁺(u) = " + poincare_text(t.poincare_plus) + "\nP⁻(u) = " + poincare_text(t.poincare_minus) + "\n";
    if (t.homology.available) {
        s += "bouquet:";
        for (std::size_t k = 0; k < t.homology.ranks.size(); ++k)
            if (t.homology.ranks[k]) s += " H_" + std::to_string(k) + "=Z^" + std::to_string(t.homology.ranks[k]);
        s += "\n";
    } else {
        s += "bouquet: not available (" + t.homology.reason + ")\n";
    }
    return s;
}

inline std::string format_betti(const RunReport& r) {
    std::string s;
    if (!r.oracle) return s;
    for (const auto& b : r.oracle->betti) {
        s += b.region + " [" + detail::num(b.a) + ", " + detail::num(b.b) + "] N=" + std::to_string(b.resolution) +
             ": betti (";
        for (std::size_t k = 0; k < b.betti.size(); ++k) s += (k ? "," : "") + std::to_string(b.betti[k]);
        s += ")";
        bool torsion = false;
        for (const auto& row : b.torsion) torsion = torsion || !row.empty();
        s += torsion ? " with torsion" : " torsion-free";
        if (b.expected) s += b.agrees ? "  ok" : "  MISMATCH";
        s += "\n";
    }
    return s;
}

inline std::string format_summary(const RunReport& r) {
    std::string s = "germ " + r.family.germ + ", family " + r.family.deformation + "\n";
    s += "δ=" + detail::num(r.scales.delta) + " η=" + detail::num(r.scales.eta) + " t=";
    for (std::size_t i = 0; i < r.scales.t.size(); ++i) s += (i ? "," : "") + r.scales.t[i];
    s += "\n";
    s += format_critical(r);
    s += "strength: " + r.strength.kind + (r.strength.mu ? " (mu=" + std::to_string(*r.strength.mu) + ")" : "") + "\n";
    s += format_handles(r);
    s += format_topology(r);
    s += format_betti(r);
    if (r.oracle) s += "oracle: " + r.oracle->status + "\n";
    return s;
}

}  // namespace milnor::cli
