#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dressedspec/cli/commands.hpp"
#include "dressedspec/cli/config.hpp"
#include "dressedspec/cli/presets.hpp"
#include "dressedspec/cli/serialize.hpp"

using namespace dressedspec;
using namespace dressedspec::cli;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(layout:
  mode: geometric
  positions: [[0, 0, 0]]
drive:
  rabi: 5
)";

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("dressedspec_test_" + name);
    fs::remove_all(p);
    return p;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr)
{
    args.insert(args.begin(), "dressedspec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::string error_of(const std::string& yaml)
{
    try {
        parse_config(yaml, "test.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("bundled presets")
{
    const auto eq = load_config("equilateral_fig1");
    CHECK(eq.drive.rabi == 200.0);
    CHECK(eq.drive.detuning == 0.0);
    REQUIRE(eq.layout.size() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) {
                CHECK(eq.layout.pair_kr(i, j) == 0.01);
                CHECK(std::acos(eq.layout.pair_cos_theta(i, j)) == doctest::Approx(std::acos(1.0 / std::sqrt(3.0))).epsilon(1e-15));
            }

    const auto iso = load_config("isosceles_fig2");
    CHECK(iso.drive.rabi == 200.0);
    CHECK(iso.layout.pair_kr(0, 2) == 0.01);
    CHECK(iso.layout.pair_kr(1, 2) == 0.01);
    // Law of cosines with a right angle at the apex.
    CHECK(iso.layout.pair_kr(0, 1) == doctest::Approx(std::hypot(0.01, 0.01)).epsilon(1e-15));

    CHECK(load_config("mollow").layout.size() == 1);
    CHECK(find_preset("dimer_magic").has_value());
    CHECK_FALSE(find_preset("nope").has_value());
    for (const auto& p : presets()) CHECK_NOTHROW(parse_config(p.yaml, p.name));
}

TEST_CASE("config defaults and options")
{
    const auto c = parse_config(kMinimal);
    CHECK(c.spectrum.tau_step == 2.5e-4);
    CHECK(c.spectrum.tau_length == 40.0);
    CHECK(c.spectrum.method == SpectrumMethod::WindowedFourier);
    CHECK(c.peaks.min_prominence == 0.1);
    CHECK(c.peaks.min_separation == 2.0);
    CHECK(c.output.csv);
    CHECK_FALSE(c.output.json);
    CHECK(c.output.plot);

    const auto t = parse_config(R"(layout:
  mode: pairwise
  atoms: 2
  kr: 0.5
  theta: magic
drive: {rabi: 3, detuning: -1, k_direction: [0, 0, 2]}
spectrum: {method: eigen, omega_max: 50, omega_step: 0.1}
output: {formats: [json], plot: false, directory: res}
)");
    CHECK(t.layout.pair_cos_theta(0, 1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(t.drive.wave_vector_direction == Vec3::UnitZ());
    CHECK(t.spectrum.method == SpectrumMethod::EigenDecomposition);
    CHECK(t.output.json);
    CHECK_FALSE(t.output.csv);
    CHECK(t.output.directory == "res");
}

TEST_CASE("config errors carry locations")
{
    const std::string rabi = error_of("layout:\n  mode: geometric\n  positions: [[0,0,0]]\ndrive:\n  rabi: -1\n");
    CHECK(rabi.find("test.yaml:5:") == 0);
    CHECK(rabi.find("rabi") != std::string::npos);

    const std::string typo = error_of("layout:\n  mode: geometric\n  positions: [[0,0,0]]\n  dipol: [0,0,1]\ndrive: {rabi: 1}\n");
    CHECK(typo.find("test.yaml:4:3") == 0);
    CHECK(typo.find("unknown key 'dipol'") != std::string::npos);

    CHECK(error_of("layout: [unclosed\n").find("test.yaml:") == 0);
    CHECK(error_of(std::string(kMinimal) + "extra: 1\n").find("unknown key 'extra'") != std::string::npos);
    CHECK(error_of("layout:\n  mode: pairwise\n  atoms: 2\n  kr: 0.1\n  cos_theta: 0.1\n  theta: 1\ndrive: {rabi: 1}\n")
              .find("not both") != std::string::npos);
    CHECK(error_of("layout:\n  mode: pairwise\n  atoms: 2\n  kr: -0.1\n  cos_theta: 0\ndrive: {rabi: 1}\n")
              .find("pair_kr") != std::string::npos);
    CHECK(error_of("layout:\n  mode: pairwise\n  atoms: 2\n  kr: abc\n  cos_theta: 0\ndrive: {rabi: 1}\n")
              .find("must be a number") != std::string::npos);
    CHECK(error_of("layout:\n  mode: geometric\n  positions: [[0,0,0], [0,0,0]]\ndrive: {rabi: 1}\n")
              .find("degenerate geometry") != std::string::npos);
    CHECK(error_of(std::string(kMinimal) + "spectrum: {tau_step: 0.01, omega_max: 700}\n").find("Nyquist") !=
          std::string::npos);
    CHECK(error_of(std::string(kMinimal) + "peaks: {tolerance: 0.01}\n").find("omega_step") != std::string::npos);
    CHECK(error_of(std::string(kMinimal) + "spectrum: {method: magic}\n").find("fourier") != std::string::npos);
    CHECK(error_of("layout:\n  mode: geometric\n  positions: [[0,0,0],[1,0,0],[2,0,0],[3,0,0],[4,0,0],[5,0,0],[6,0,0]]\n"
                   "drive: {rabi: 1}\n")
              .find("at most 6") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("scan values")
{
    const auto c = parse_config(kMinimal);
    CHECK(with_scan_value(c, "rabi", 7.0).drive.rabi == 7.0);
    CHECK(with_scan_value(c, "detuning", -2.0).drive.detuning == -2.0);
    const auto eq = load_config("equilateral_fig1");
    const auto scaled = with_scan_value(eq, "kr_scale", 2.0);
    CHECK(scaled.layout.pair_kr(0, 1) == 0.02);
    CHECK(build_couplings(scaled.layout).omega(0, 1) ==
          doctest::Approx(0.5 * build_couplings(eq.layout).omega(0, 1)).epsilon(1e-3));
    CHECK(with_scan_value(eq, "theta", 0.0).layout.pair_cos_theta(0, 2) == 1.0);
    CHECK_THROWS_AS(with_scan_value(c, "theta", 0.5), DomainError);
    CHECK_THROWS_AS(with_scan_value(c, "rabi", -1.0), DomainError);
    CHECK_THROWS_AS(with_scan_value(c, "bogus", 1.0), DomainError);
    CHECK(parse_value_list("") == std::vector<double>{});
    CHECK(parse_value_list(" 1, 2.5 ,-3") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK_THROWS_AS(parse_value_list("1,x"), DomainError);
    CHECK_THROWS_AS(parse_value_list("1,inf"), DomainError);
}

TEST_CASE("serialization")
{
    Spectrum s;
    s.omega = (RealVector(3) << -1.0, 0.0, 1.0 / 3.0).finished();
    s.values = (RealVector(3) << 1e-7, 2.0, 0.123456789012345).finished();
    const std::string csv = spectrum_csv(s);
    CHECK(csv == "omega,S\n-1,1e-07\n0,2\n0.333333333333,0.123456789012\n");

    const PeakSet peaks{{-200.00000000001, 0.6666, 0.75, 2.3}, {1.0 / 3.0, 2.0, 0.5, 3.1}};
    const json doc = peaks_json(peaks, s);
    CHECK(doc.at("schema_version") == kSchemaVersion);
    const PeakSet back = peaks_from_json(json::parse(dump(doc)));
    REQUIRE(back.size() == peaks.size());
    for (std::size_t k = 0; k < peaks.size(); ++k) {
        CHECK(back[k].center == peaks[k].center);
        CHECK(back[k].height == peaks[k].height);
        CHECK(back[k].half_width == peaks[k].half_width);
        CHECK(back[k].prominence == peaks[k].prominence);
    }
    json wrong = doc;
    wrong["schema_version"] = 99;
    CHECK_THROWS_AS(peaks_from_json(wrong), DomainError);

    const fs::path dir = scratch("atomic");
    write_atomic(dir / "a" / "f.txt", "hello");
    CHECK(read_file(dir / "a" / "f.txt") == "hello");
    CHECK_FALSE(fs::exists(dir / "a" / "f.txt.tmp"));
}

TEST_CASE("spectrum command")
{
    SUBCASE("mollow preset")
    {
        const fs::path dir = scratch("mollow");
        std::string out;
        REQUIRE(run({"spectrum", "mollow", "--out", dir.string()}, &out) == 0);
        for (const char* f : {"spectrum.csv", "peaks.json", "assignment.json", "strong_regime.json", "spectrum.svg"})
            CHECK(fs::exists(dir / f));
        const auto peaks = peaks_from_json(json::parse(read_file(dir / "peaks.json")));
        REQUIRE(peaks.size() == 3);
        const double want[] = {-200.0, 0.0, 200.0};
        for (int k = 0; k < 3; ++k) CHECK(std::abs(peaks[k].center - want[k]) <= 0.5);
        CHECK(read_file(dir / "spectrum.csv").rfind("omega,S\n", 0) == 0);
        const auto assignment = json::parse(read_file(dir / "assignment.json"));
        CHECK(assignment.at("schema_version") == kSchemaVersion);
        CHECK(assignment.at("all_matched") == true);
        CHECK(read_file(dir / "spectrum.svg").find("T1") != std::string::npos);
    }
    SUBCASE("flags")
    {
        const fs::path dir = scratch("flags");
        REQUIRE(run({"spectrum", "mollow", "--out", dir.string(), "--no-plot", "--format", "json"}) == 0);
        CHECK_FALSE(fs::exists(dir / "spectrum.svg"));
        CHECK_FALSE(fs::exists(dir / "spectrum.csv"));
        const auto doc = json::parse(read_file(dir / "spectrum.json"));
        CHECK(doc.at("omega").size() == doc.at("S").size());
        CHECK(run({"spectrum", "mollow", "--format", "xml"}) == 1);
    }
    SUBCASE("three-atom presets")
    {
        for (const auto& [name, count] : std::vector<std::pair<std::string, std::size_t>>{{"equilateral_fig1", 15},
                                                                                         {"isosceles_fig2", 25}}) {
            const fs::path dir = scratch(name);
            REQUIRE(run({"spectrum", name, "--out", dir.string(), "--no-plot"}) == 0);
            const auto doc = json::parse(read_file(dir / "peaks.json"));
            CHECK(doc.at("peaks").size() == count);
            CHECK(json::parse(read_file(dir / "strong_regime.json")).at("pairs").size() == 3);
        }
    }
    SUBCASE("identical runs produce identical bytes")
    {
        const fs::path a = scratch("det_a"), b = scratch("det_b");
        REQUIRE(run({"spectrum", "dimer_magic", "--out", a.string()}) == 0);
        REQUIRE(run({"spectrum", "dimer_magic", "--out", b.string()}) == 0);
        for (const char* f : {"spectrum.csv", "peaks.json", "assignment.json", "strong_regime.json", "spectrum.svg"})
            CHECK(read_file(a / f) == read_file(b / f));
    }
}

TEST_CASE("dressed command")
{
    const auto blocks_of = [](const std::string& preset) {
        const fs::path dir = scratch("dressed_" + preset);
        REQUIRE(run({"dressed", preset, "--out", dir.string()}) == 0);
        for (const char* f : {"dressed_levels.json", "transitions.json", "coupling_blocks.json",
                              "collective_basis.json", "level_diagram.json", "level_diagram.svg"})
            CHECK(fs::exists(dir / f));
        return json::parse(read_file(dir / "coupling_blocks.json")).at("blocks").get<std::vector<std::vector<int>>>();
    };
    CHECK(blocks_of("equilateral_fig1") == std::vector<std::vector<int>>{{0, 1, 4, 7}, {2, 3, 5, 6}});
    CHECK(blocks_of("isosceles_fig2") == std::vector<std::vector<int>>{{0, 1, 3, 4, 6, 7}, {2, 5}});

    const fs::path dir = scratch("dressed_one");
    REQUIRE(run({"dressed", "mollow", "--out", dir.string()}) == 0);
    const auto e = json::parse(read_file(dir / "dressed_levels.json")).at("energies").get<std::vector<double>>();
    REQUIRE(e.size() == 2);
    CHECK(e[1] - e[0] == doctest::Approx(200.0));
    const auto diagram = json::parse(read_file(dir / "level_diagram.json"));
    CHECK(diagram.at("separation") == "omega_L");
    CHECK(diagram.at("transitions").size() == 4);
}

TEST_CASE("scan command")
{
    SUBCASE("Mollow sidebands follow the Rabi frequency")
    {
        const fs::path dir = scratch("scan_rabi");
        REQUIRE(run({"scan", "mollow", "--axis", "rabi", "--values", "100,200,400", "--out", dir.string(), "--no-plot"}) == 0);
        const auto doc = json::parse(read_file(dir / "scan_summary.json"));
        REQUIRE(doc.at("rows").size() == 3);
        for (const auto& row : doc.at("rows")) {
            const double v = row.at("value");
            const auto sb = row.at("sideband_centers").get<std::vector<double>>();
            REQUIRE(sb.size() == 2);
            CHECK(std::abs(sb[0] + v) <= 0.5);
            CHECK(std::abs(sb[1] - v) <= 0.5);
        }
        for (int k = 0; k < 3; ++k) CHECK(fs::exists(dir / ("point_" + std::to_string(k)) / "peaks.json"));
        CHECK(fs::exists(dir / "scan_summary.csv"));
    }
    SUBCASE("empty list")
    {
        const fs::path dir = scratch("scan_empty");
        REQUIRE(run({"scan", "mollow", "--axis", "rabi", "--values", "", "--out", dir.string()}) == 0);
        CHECK(json::parse(read_file(dir / "scan_summary.json")).at("rows").empty());
        CHECK(read_file(dir / "scan_summary.csv") == "value,status,peak_count,sideband_centers\n");
    }
    SUBCASE("failures are recorded and the scan continues")
    {
        const fs::path dir = scratch("scan_fail");
        std::string err;
        CHECK(run({"scan", "mollow", "--axis", "rabi", "--values", "-1,50", "--out", dir.string(), "--no-plot"},
                  nullptr, &err) == 1);
        const auto rows = json::parse(read_file(dir / "scan_summary.json")).at("rows");
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].at("status") == "error");
        CHECK(rows[1].at("status") == "ok");
        CHECK(err.find("failed") != std::string::npos);
    }
    SUBCASE("kr scaling moves the sidebands")
    {
        const auto eq = load_config("equilateral_fig1");
        const fs::path dir = scratch("scan_kr");
        const auto result = run_scan(eq, "kr_scale", {1.0, 2.0}, dir, CommandOptions{std::nullopt, true, std::nullopt});
        REQUIRE(result.rows.size() == 2);
        CHECK(result.rows[0].status == 0);
        CHECK(result.rows[1].status == 0);
        CHECK(result.rows[0].sidebands != result.rows[1].sidebands);
        // Outermost resolved sideband, ignoring the ripple floor far below the strong lines.
        const auto outermost = [&](int k) {
            const auto peaks = peaks_from_json(json::parse(read_file(dir / ("point_" + std::to_string(k)) / "peaks.json")));
            double top = 0.0, edge = 0.0;
            for (const auto& p : peaks) top = std::max(top, p.height);
            for (const auto& p : peaks)
                if (p.height > 1e-5 * top) edge = std::max(edge, p.center);
            return edge;
        };
        // It tracks the interaction-dressed splitting, so weaker coupling moves it inward.
        CHECK(outermost(0) == doctest::Approx(609.0).epsilon(2e-3));
        CHECK(outermost(1) < outermost(0) - 3.0);
    }
}

TEST_CASE("exit codes")
{
    std::string out;
    CHECK(run({"presets", "list"}, &out) == 0);
    CHECK(out.find("equilateral_fig1") != std::string::npos);
    CHECK(run({"presets", "show", "mollow"}, &out) == 0);
    CHECK(out.find("rabi: 200") != std::string::npos);
    CHECK(run({"presets", "show", "nope"}) == 1);
    CHECK(run({}) == 1);
    CHECK(run({"spectrum"}) == 1);
    CHECK(run({"spectrum", "missing.yaml"}) == 1);
    CHECK(run({"scan", "mollow", "--axis", "bogus", "--values", "1"}) == 1);
    CHECK(run({"--help"}) == 0);

    const fs::path dir = scratch("exit");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.yaml") << "layout:\n  mode: geometric\n  positions: [[0,0,0]]\ndrive:\n  rabi: -1\n";
    std::string err;
    CHECK(run({"spectrum", (dir / "bad.yaml").string()}, nullptr, &err) == 1);
    CHECK(err.find("bad.yaml:5:") != std::string::npos);

    // An undriven atom never emits: the correlation is undefined, a numerical failure.
    std::ofstream(dir / "dark.yaml") << "layout:\n  mode: geometric\n  positions: [[0,0,0]]\ndrive:\n  rabi: 0\n";
    CHECK(run({"spectrum", (dir / "dark.yaml").string(), "--out", (dir / "o").string()}, nullptr, &err) == 2);
    CHECK(run({"dressed", (dir / "dark.yaml").string(), "--out", (dir / "d").string()}) == 0);
}
