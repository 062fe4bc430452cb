#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "milnor/cli/config.hpp"
#include "milnor/cli/pipeline.hpp"
#include "milnor/cli/render.hpp"
#include "milnor/cli/report.hpp"

using namespace milnor;
using namespace milnor::cli;
namespace fs = std::filesystem;

namespace {

const std::string kCli = MILNOR_CLI_PATH;
const std::string kConfigs = MILNOR_CONFIG_DIR;

std::string cfg(const std::string& name) { return kConfigs + "/" + name + ".cfg"; }

fs::path scratch() {
    fs::path dir = fs::temp_directory_path() / "milnor_test_cli";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::path out = scratch() / ("stdout_" + std::to_string(counter++) + ".txt");
    std::string cmd = "\"" + kCli + "\" " + args + " > \"" + out.string() + "\" 2>&1";
    int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    return r;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

const char* kMinimal = R"(
[germ]
polynomial = x*y
variables = x, y
[family]
generic = true
)";

}  // namespace

// ---- config --------------------------------------------------------------

TEST(Config, ParsesAllSections) {
    auto c = parse_config(R"(
# comment
[germ]
polynomial = y^2 - x^3
variables = x, y
[family]
deformation = y^2 - x^3 + t*x   ; trailing comment
ade = A2
[scales]
delta = 0.5
t = 1/10
transversality = yes
value_sep = 1e-8
[oracle]
enabled = true
mode = interval
window_plus = 0.1, 0.2
[output]
report = out.json
)");
    EXPECT_EQ(c.germ.variables, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(*c.family.deformation, "y^2 - x^3 + t*x");
    EXPECT_EQ(*c.family.ade, "A2");
    EXPECT_DOUBLE_EQ(*c.scales.delta, 0.5);
    EXPECT_EQ(*c.scales.t, std::vector<std::string>{"1/10"});
    EXPECT_TRUE(c.scales.transversality);
    EXPECT_DOUBLE_EQ(c.scales.tolerances.value_sep, 1e-8);
    EXPECT_TRUE(c.oracle.enabled);
    EXPECT_EQ(c.oracle.mode, CubeMode::Interval);
    EXPECT_EQ(*c.oracle.window_plus, (std::pair{0.1, 0.2}));
    EXPECT_EQ(*c.output.report, "out.json");
    EXPECT_EQ(c.raw.at("scales").at("delta"), "0.5");
}

TEST(Config, RejectsMalformedInput) {
    const std::string germ = "[germ]\npolynomial = x*y\nvariables = x, y\n";
    EXPECT_THROW(parse_config(germ + "[family]\ngeneric = true\n[bogus]\n"), ConfigError);
    EXPECT_THROW(parse_config(germ + "[family]\ngeneric = true\ncolour = red\n"), ConfigError);
    EXPECT_THROW(parse_config(germ + "[family]\ngeneric = true\ngeneric = false\n"), ConfigError);
    EXPECT_THROW(parse_config(germ + "[family]\ngeneric = true\ndeformation = x*y + t*x\n"), ConfigError);
    EXPECT_THROW(parse_config(germ + "[family]\nade = A1\n"), ConfigError);
    EXPECT_THROW(parse_config("[family]\ngeneric = true\n"), ConfigError);
    EXPECT_THROW(parse_config(germ + "[family]\ngeneric = maybe\n"), ConfigError);
    EXPECT_THROW(parse_config(germ + "[family]\ngeneric = true\n[scales]\ndelta = abc\n"), ConfigError);
    EXPECT_THROW(parse_config(germ + "[family]\ngeneric = true\n[oracle]\nwindow_plus = 0.3, 0.1\n"), ConfigError);
    EXPECT_THROW(parse_config(germ + "[family]\ngeneric = true\n[oracle]\nmode = fuzzy\n"), ConfigError);
    EXPECT_THROW(parse_config("polynomial = x\n"), ConfigError);
    EXPECT_THROW(parse_config("[germ\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/milnor.cfg"), ConfigError);
}

TEST(Config, SuiteConfigsLoad) {
    for (const auto& e : fs::directory_iterator(kConfigs))
        if (e.path().extension() == ".cfg") EXPECT_NO_THROW(load_config(e.path().string())) << e.path();
}

TEST(Config, ParsesExactRationals) {
    EXPECT_EQ(parse_rational("1/10"), Rational(1, 10));
    EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
    EXPECT_EQ(parse_rational("-0.1"), Rational(-1, 10));
    EXPECT_EQ(parse_rational(" -3 "), Rational(-3));
    EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
    EXPECT_THROW(parse_rational("abc"), ConfigError);
    EXPECT_THROW(parse_rational("1/0"), ConfigError);
    EXPECT_THROW(parse_rational(""), ConfigError);
}

TEST(Config, OverridesReachConfigAndEcho) {
    auto c = parse_config(kMinimal);
    Overrides o;
    o.delta = 0.5;
    o.t = "1/20";
    o.seed = 7;
    o.mode = "interval";
    apply_overrides(c, o);
    EXPECT_DOUBLE_EQ(*c.scales.delta, 0.5);
    EXPECT_EQ(*c.scales.t, std::vector<std::string>{"1/20"});
    EXPECT_EQ(c.family.seed, 7u);
    EXPECT_EQ(c.oracle.mode, CubeMode::Interval);
    EXPECT_EQ(c.raw.at("scales").at("t"), "1/20");
    EXPECT_EQ(c.raw.at("family").at("seed"), "7");
}

// ---- pipeline and report ---------------------------------------------------

TEST(Pipeline, SaddleReport) {
    auto run = analyze(load_config(cfg("xy")));
    const auto& r = run.report;
    EXPECT_EQ(run.exit_code, kOk);
    ASSERT_EQ(r.critical_points.size(), 1u);
    EXPECT_EQ(r.critical_points[0].index, 1);
    EXPECT_EQ(r.critical_points[0].certificate, "newton_unique");
    EXPECT_EQ(r.topology.chi_plus, 2);
    EXPECT_EQ(r.topology.chi_minus, 2);
    ASSERT_EQ(r.handles_plus.handles.size(), 1u);
    EXPECT_EQ(r.handles_plus.handles[0].dims, (std::array<int, 2>{1, 1}));
    ASSERT_TRUE(r.oracle);
    EXPECT_EQ(r.oracle->status, "agree");
    EXPECT_EQ(r.schema, 1);
}

TEST(Pipeline, CertifiedQuantitiesCarryIntervals) {
    auto r = analyze(load_config(cfg("cusp_plus"))).report;
    for (const auto& p : r.critical_points) {
        ASSERT_EQ(p.enclosure.size(), 2u);
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_LE(p.enclosure[i][0], p.midpoint[i]);
            EXPECT_GE(p.enclosure[i][1], p.midpoint[i]);
            EXPECT_LE(p.region[i][0], p.enclosure[i][0]);
            EXPECT_GE(p.region[i][1], p.enclosure[i][1]);
        }
        EXPECT_LE(p.value[0], p.value[1]);
    }
}

TEST(Pipeline, CuspWithoutCriticalPointsIsContractible) {
    auto r = analyze(load_config(cfg("cusp_minus"))).report;
    EXPECT_TRUE(r.critical_points.empty());
    EXPECT_TRUE(r.handles_plus.contractible);
    EXPECT_TRUE(r.handles_minus.contractible);
    EXPECT_EQ(r.topology.poincare_plus.text, "1");
    EXPECT_EQ(r.topology.poincare_minus.text, "1");
}

TEST(Pipeline, EmptyNegativeFibre) {
    auto r = analyze(load_config(cfg("x2_plus_y2"))).report;
    EXPECT_EQ(r.topology.nonempty_minus.verdict, "empty");
    EXPECT_EQ(r.topology.poincare_minus.kind, "empty");
    EXPECT_EQ(r.topology.nonempty_plus.verdict, "nonempty");
    ASSERT_TRUE(r.topology.nonempty_plus.witness);
}

TEST(Pipeline, ForcedWrongIndicesDisagree) {
    auto run = run_certification(load_config(cfg("cusp_plus")));
    run_topology(run);
    run_chi_oracle(run, std::vector<int>{0, 0});
    EXPECT_EQ(run.exit_code, kOracleDisagreement);
    EXPECT_EQ(run.report.oracle->status, "disagree");
    EXPECT_THROW(run_chi_oracle(run, std::vector<int>{0}), ConfigError);
}

TEST(Pipeline, ExplicitScalesMustValidate) {
    auto c = parse_config(R"(
[germ]
polynomial = x^2
variables = x
[family]
deformation = x^2 + t*x^3
[scales]
delta = 1
eta = 0.1
t = 1
)");
    // The second critical point x = -2/3 has value 4/27 > eta.
    EXPECT_THROW(run_certification(c), BudgetExhausted);
}

TEST(Report, RoundTripIsIdentity) {
    for (const char* name : {"xy", "cusp_plus", "cusp_minus", "x2_plus_y2", "a3_strong"}) {
        auto r = analyze(load_config(cfg(name))).report;
        auto back = parse_report(dump_report(r));
        EXPECT_TRUE(back == r) << name;
        EXPECT_EQ(dump_report(back), dump_report(r)) << name;
        auto no_t = parse_report(dump_report(r, false));
        EXPECT_FALSE(no_t.timings);
        no_t.timings = r.timings;
        EXPECT_TRUE(no_t == r) << name;
    }
}

TEST(Report, SchemaFieldIsChecked) {
    auto r = analyze(load_config(cfg("xy"))).report;
    auto j = nlohmann::json::parse(dump_report(r));
    EXPECT_EQ(j.at("schema"), 1);
    j["schema"] = 2;
    EXPECT_THROW(parse_report(j.dump()), Error);
}

TEST(ExitCodes, Mapping) {
    EXPECT_EQ(exit_code_for(ConfigError("x")), kConfigFailure);
    EXPECT_EQ(exit_code_for(ParseError(0, "bad")), kConfigFailure);
    EXPECT_EQ(exit_code_for(DegenerateHessian("singular")), kCertificationFailure);
    EXPECT_EQ(exit_code_for(Unconverged(ChiVerification{})), kOracleDisagreement);
    EXPECT_EQ(exit_code_for(std::runtime_error("x")), kConfigFailure);
}

// ---- rendering -------------------------------------------------------------

TEST(Render, CircleLevelIsOneClosedCurve) {
    Polynomial f = parse_polynomial("x^2 + y^2", {"x", "y"});
    auto lines = level_curves(f, 0.25, 1.0, 128);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0].front(), lines[0].back());
    for (const auto& p : lines[0]) EXPECT_NEAR(std::hypot(p[0], p[1]), 0.5, 1e-3);
}

TEST(Render, ArcsEndOnTheCircle) {
    Polynomial f = parse_polynomial("x*y", {"x", "y"});
    for (double level : {0.3, -0.3}) {
        auto lines = level_curves(f, level, 1.0, 200);
        ASSERT_EQ(lines.size(), 2u);
        for (const auto& l : lines) {
            EXPECT_NEAR(std::hypot(l.front()[0], l.front()[1]), 1.0, 1e-9);
            EXPECT_NEAR(std::hypot(l.back()[0], l.back()[1]), 1.0, 1e-9);
            for (const auto& p : l) {
                EXPECT_LE(std::hypot(p[0], p[1]), 1.0 + 1e-12);
                EXPECT_NEAR(p[0] * p[1], level, 2e-3);
            }
        }
    }
}

TEST(Render, ClosedCurveCutByCircleIsRejoined) {
    // Circle of radius 1 centred at (1, 0) meets the unit disc in one arc.
    Polynomial f = parse_polynomial("x^2 - 2*x + y^2", {"x", "y"});
    auto lines = level_curves(f, 0.0, 1.0, 160);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_NEAR(std::hypot(lines[0].front()[0], lines[0].front()[1]), 1.0, 1e-9);
    EXPECT_NEAR(std::hypot(lines[0].back()[0], lines[0].back()[1]), 1.0, 1e-9);
}

TEST(Render, SaddleFigure) {
    auto run = run_certification(load_config(cfg("xy")));
    auto svg = render_svg({run.ft, run.scales.delta, 0.3, run.scales.points});
    EXPECT_EQ(count(svg, "class=\"level-plus\""), 2u);
    EXPECT_EQ(count(svg, "class=\"level-minus\""), 2u);
    EXPECT_EQ(count(svg, "class=\"ball\""), 1u);
    EXPECT_EQ(count(svg, "λ=1"), 1u);
    EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
}

TEST(Render, CuspMarkersOnTheAxis) {
    auto run = run_certification(load_config(cfg("cusp_plus")));
    auto svg = render_svg({run.ft, run.scales.delta, run.scales.eta, run.scales.points});
    EXPECT_EQ(count(svg, "class=\"critical\""), 2u);
    EXPECT_EQ(count(svg, "λ=1"), 1u);
    EXPECT_EQ(count(svg, "λ=0"), 1u);
    // Points (+-sqrt(t/3), 0) sit on the horizontal axis y = 240 in pixels.
    EXPECT_EQ(count(svg, "cy=\"240.000\" r=\"4\""), 2u);
}

TEST(Render, EmptyNegativeFibreHasNoCurves) {
    auto run = run_certification(load_config(cfg("x2_plus_y2")));
    auto svg = render_svg({run.ft, run.scales.delta, run.scales.eta, run.scales.points, RenderSide::Negative});
    EXPECT_EQ(count(svg, "<polyline"), 0u);
    EXPECT_EQ(count(svg, "class=\"ball\""), 1u);
    EXPECT_EQ(count(svg, "class=\"critical\""), 1u);
}

TEST(Render, RefusesOtherDimensions) {
    Polynomial f = parse_polynomial("x^4", {"x"});
    EXPECT_THROW(render_svg({f, 1.0, 0.1, {}}), Error);
}

// ---- executable ------------------------------------------------------------

TEST(Executable, ExitCodeContract) {
    auto dir = scratch();
    EXPECT_EQ(run_cli("analyze " + cfg("xy") + " --report " + (dir / "xy.json").string()).code, 0);
    EXPECT_EQ(run_cli("analyze /nonexistent.cfg").code, 1);
    EXPECT_EQ(run_cli("frobnicate").code, 1);
    EXPECT_EQ(run_cli("verify " + cfg("cusp_plus") + " --indices 0,0").code, 3);
    EXPECT_EQ(run_cli("verify " + cfg("cusp_plus") + " --indices 0").code, 1);
    EXPECT_EQ(run_cli("render " + cfg("a3_weak") + " --svg " + (dir / "no.svg").string()).code, 1);

    fs::path bad = dir / "uncertifiable.cfg";
    std::ofstream(bad) << "[germ]\npolynomial = x^2\nvariables = x\n[family]\ndeformation = x^2 + t*x^3\n"
                          "[scales]\ndelta = 1\neta = 0.1\nt = 1\n";
    EXPECT_EQ(run_cli("critical " + bad.string()).code, 2);
}

TEST(Executable, SubcommandSections) {
    auto chi = run_cli("chi " + cfg("a3_strong"));
    EXPECT_EQ(chi.code, 0);
    EXPECT_EQ(chi.out.substr(0, chi.out.find('\n')), "χ⁺=2 χ⁻=0");

    auto crit = run_cli("critical " + cfg("cusp_plus"));
    EXPECT_EQ(crit.code, 0);
    EXPECT_EQ(count(crit.out, "newton_unique"), 2u);
    EXPECT_EQ(count(crit.out, "λ=1"), 1u);
    EXPECT_EQ(count(crit.out, "λ=0"), 1u);

    auto handles = run_cli("handles " + cfg("xy"));
    EXPECT_NE(handles.out.find("positive side: (1,1)"), std::string::npos);

    auto mors = run_cli("morsify " + cfg("cusp_minus"));
    EXPECT_EQ(mors.code, 0);
    EXPECT_EQ(count(mors.out, "m=0"), 5u);
    EXPECT_NE(mors.out.find("m(t) stable"), std::string::npos);

    auto over = run_cli("critical " + cfg("cusp_plus") + " --delta 0.5 --t 1/20");
    EXPECT_EQ(over.code, 0);
    EXPECT_EQ(count(over.out, "newton_unique"), 2u);
}

TEST(Executable, DeterministicReportsAndFigures) {
    auto dir = scratch();
    for (const char* name : {"xy", "cusp_plus", "a3_strong"}) {
        std::string a = (dir / (std::string(name) + "_a.json")).string();
        std::string b = (dir / (std::string(name) + "_b.json")).string();
        ASSERT_EQ(run_cli("analyze " + cfg(name) + " --no-timings --report " + a).code, 0);
        ASSERT_EQ(run_cli("analyze " + cfg(name) + " --no-timings --report " + b).code, 0);
        EXPECT_EQ(slurp(a), slurp(b)) << name;
        EXPECT_EQ(slurp(a).find("\"timings\""), std::string::npos);
    }
    std::string with = (dir / "timed.json").string();
    ASSERT_EQ(run_cli("analyze " + cfg("xy") + " --report " + with).code, 0);
    EXPECT_NE(slurp(with).find("\"timings\""), std::string::npos);

    std::string s1 = (dir / "1.svg").string(), s2 = (dir / "2.svg").string();
    ASSERT_EQ(run_cli("render " + cfg("cusp_plus") + " --svg " + s1).code, 0);
    ASSERT_EQ(run_cli("render " + cfg("cusp_plus") + " --svg " + s2).code, 0);
    EXPECT_EQ(slurp(s1), slurp(s2));
    EXPECT_FALSE(slurp(s1).empty());
}

TEST(Executable, BouquetFourVariables) {
    auto dir = scratch();
    std::string rep = (dir / "quad4.json").string();
    auto res = run_cli("analyze " + cfg("quad4") + " --no-timings --report " + rep);
    ASSERT_EQ(res.code, 0) << res.out;
    auto r = parse_report(slurp(rep));
    ASSERT_TRUE(r.topology.homology.available);
    EXPECT_EQ(r.topology.homology.ranks, (std::vector<long long>{1, 1, 0, 0}));
    ASSERT_TRUE(r.oracle);
    ASSERT_EQ(r.oracle->betti.size(), 2u);
    for (const auto& b : r.oracle->betti) {
        EXPECT_EQ(b.betti, (std::vector<long long>{1, 1, 0, 0, 0}));
        EXPECT_TRUE(b.agrees);
    }
}
