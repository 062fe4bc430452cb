#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "milnor/cli/config.hpp"
#include "milnor/cli/pipeline.hpp"
#include "milnor/cli/render.hpp"

using namespace milnor;
using namespace milnor::cli;

namespace {

struct Common {
    std::string config;
    Overrides ov;
    bool no_timings = false;
    std::optional<std::string> report;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("config", c.config, "config file")->required();
    sub->add_option("--delta", c.ov.delta, "ball radius");
    sub->add_option("--eta", c.ov.eta, "level eta");
    sub->add_option("--t", c.ov.t, "deformation parameter(s), exact rationals, comma separated");
    sub->add_option("--seed", c.ov.seed, "seed of the generic family");
    sub->add_option("--resolution", c.ov.resolution, "oracle grid resolution N");
    sub->add_option("--mode", c.ov.mode, "oracle cube mode")->check(CLI::IsMember({"center", "interval"}));
    sub->add_flag("--no-timings", c.no_timings, "omit timings from the JSON report");
    sub->add_option("--report", c.report, "write the JSON report here");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

RunConfig load(const Common& c) {
    RunConfig cfg = load_config(c.config);
    apply_overrides(cfg, c.ov);
    return cfg;
}

void finish(const PipelineRun& run, const Common& c, const std::optional<std::string>& config_path) {
    if (auto path = c.report ? c.report : config_path) write_file(*path, dump_report(run.report, !c.no_timings));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Milnor fibre topology from certified morsifications"};
    app.require_subcommand(1);

    Common common;
    std::string side = "both";
    std::optional<std::string> svg;
    std::vector<int> indices;

    auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline; report to file, summary to stdout");
    auto* morsify_cmd = app.add_subcommand("morsify", "family, scales, strength and m(t) stability");
    auto* critical_cmd = app.add_subcommand("critical", "certified critical points with Morse indices");
    auto* chi_cmd = app.add_subcommand("chi", "Euler characteristics of both fibres");
    auto* betti_cmd = app.add_subcommand("betti", "cubical homology of both thickened fibres");
    auto* handles_cmd = app.add_subcommand("handles", "handle decompositions of both fibres");
    auto* verify_cmd = app.add_subcommand("verify", "oracle check of the Euler characteristics");
    auto* render_cmd = app.add_subcommand("render", "SVG cross-section for plane curve germs");
    for (auto* s : {analyze_cmd, morsify_cmd, critical_cmd, chi_cmd, betti_cmd, handles_cmd, verify_cmd, render_cmd})
        add_common(s, common);
    verify_cmd->add_option("--indices", indices, "replace the certified Morse indices (comma separated)")
        ->delimiter(',');
    render_cmd->add_option("--side", side, "fibres to draw")->check(CLI::IsMember({"both", "positive", "negative"}));
    render_cmd->add_option("--svg", svg, "output path (default: [output] svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigFailure;
    }

    try {
        RunConfig cfg = load(common);
        if (analyze_cmd->parsed()) {
            auto svg_path = cfg.output.svg;
            auto report_path = cfg.output.report;
            PipelineRun run = analyze(std::move(cfg));
            std::cout << format_summary(run.report);
            finish(run, common, report_path);
            if (svg_path && run.ft.nvars() == 2)
                write_file(*svg_path, render_svg({run.ft, run.scales.delta, run.scales.eta, run.scales.points}));
            return run.exit_code;
        }
        if (morsify_cmd->parsed()) {
            PipelineRun run = run_certification(cfg);
            const auto& r = run.report;
            std::cout << "family " << r.family.deformation << " (parameters";
            for (const auto& p : r.family.param_vars) std::cout << ' ' << p;
            std::cout << ")\n";
            std::cout << "m = " << r.strength.m << ", strength: " << r.strength.kind;
            if (r.strength.mu) std::cout << " (mu=" << *r.strength.mu << ")";
            std::cout << "\n";
            auto scan = stability_scan(run.family, run.scales, 5, cfg.scales.tolerances);
            for (const auto& s : scan.samples) {
                std::cout << "  t=" << milnor::cli::detail::num(s.t.get_d()) << ": ";
                if (s.m) std::cout << "m=" << *s.m << "\n";
                else std::cout << "failed (" << *s.error << ")\n";
            }
            std::cout << "m(t) " << (scan.stable ? "stable" : "NOT stable") << "\n";
            finish(run, common, std::nullopt);
            return scan.stable ? kOk : kCertificationFailure;
        }
        if (critical_cmd->parsed()) {
            PipelineRun run = run_certification(cfg);
            std::cout << format_critical(run.report);
            finish(run, common, std::nullopt);
            return run.exit_code;
        }
        if (chi_cmd->parsed()) {
            PipelineRun run = run_certification(cfg);
            run_topology(run);
            if (run.config.oracle.enabled) run_chi_oracle(run);
            std::cout << format_chi(run.report);
            finish(run, common, std::nullopt);
            return run.exit_code;
        }
        if (handles_cmd->parsed()) {
            PipelineRun run = run_certification(cfg);
            run_topology(run);
            std::cout << format_handles(run.report);
            finish(run, common, std::nullopt);
            return run.exit_code;
        }
        if (betti_cmd->parsed()) {
            PipelineRun run = run_certification(cfg);
            run_topology(run);
            run_betti_oracle(run);
            std::cout << format_betti(run.report);
            finish(run, common, std::nullopt);
            return run.exit_code;
        }
        if (verify_cmd->parsed()) {
            PipelineRun run = run_certification(cfg);
            run_topology(run);
            std::optional<std::vector<int>> forced;
            if (!indices.empty()) forced = indices;
            run_chi_oracle(run, forced);
            std::cout << format_chi(run.report) << "oracle: " << run.report.oracle->status << "\n";
            finish(run, common, std::nullopt);
            return run.exit_code;
        }
        if (render_cmd->parsed()) {
            auto path = svg ? svg : cfg.output.svg;
            if (!path) throw ConfigError("no SVG path: pass --svg or set [output] svg");
            const std::size_t d = cfg.germ.variables.size();
            if (d != 2)
                throw ConfigError("render needs a plane curve germ (n = 1); this germ has " + std::to_string(d) +
                                  " variables");
            PipelineRun run = run_certification(cfg);
            RenderSide rs = side == "positive"   ? RenderSide::Positive
                            : side == "negative" ? RenderSide::Negative
                                                 : RenderSide::Both;
            write_file(*path, render_svg({run.ft, run.scales.delta, run.scales.eta, run.scales.points, rs}));
            std::cout << "wrote " << *path << "\n";
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << describe_error(e);
        return exit_code_for(e);
    }
    return kOk;
}
