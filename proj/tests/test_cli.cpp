#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "steklov/boundary.hpp"
#include "steklov/dn_map.hpp"
#include "steklov/errors.hpp"
#include "steklov/cli.hpp"
#include "steklov/json_io.hpp"
#include "steklov/spectrum.hpp"

using namespace steklov;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir() {
    fs::path d = fs::temp_directory_path() / "steklov_cli_test";
    fs::create_directories(d);
    return d;
}

std::string write_file(const std::string& name, const std::string& content) {
    fs::path p = temp_dir() / name;
    std::ofstream f(p);
    f << content;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("oracle subcommand emits the expected row count") {
    auto r = run_cli({"oracle", "cylinder", "--L", "1", "--beta", "0.3", "--kmax", "50"});
    CHECK(r.code == 0);
    // Header plus 2 branches for each of the 101 frequencies.
    long rows = std::count(r.out.begin(), r.out.end(), '\n');
    CHECK(rows == 1 + 202);
    CHECK(r.out.rfind("index,value,component", 0) == 0);
}

TEST_CASE("oracle output is byte-identical across runs") {
    auto r1 = run_cli({"oracle", "abdisk", "--beta", "0.3", "--kmax", "40"});
    auto r2 = run_cli({"oracle", "abdisk", "--beta", "0.3", "--kmax", "40"});
    CHECK(r1.code == 0);
    CHECK(r1.out == r2.out);
}

TEST_CASE("forward and coeffs on a boundary file") {
    SurfaceBoundary sb = make_flat_cylinder(1.0, 0.3);
    std::string path = write_file("cyl.json", boundary_to_json(sb).dump());
    std::string csv = (temp_dir() / "fwd.csv").string();
    auto r = run_cli({"forward", path, "--nrange", "-30:30", "--out", csv});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.at("components").size() == 2);
    CHECK(j["components"][0]["b0"].get<double>() == doctest::Approx(1.0));
    CHECK(j["components"][0]["alpha"].get<double>() == doctest::Approx(0.3));
    std::istringstream csv_in(slurp(csv));
    SpectrumSeq s = read_spectrum_csv(csv_in);
    CHECK(s.size() == 2 * 60);

    auto rc = run_cli({"coeffs", path, "--depth", "4"});
    CHECK(rc.code == 0);
    json cj = json::parse(rc.out);
    auto& rows = cj["components"][0]["bk"];
    REQUIRE(rows.size() == 4);
    CHECK(rows[0]["source"] == "closed+engine");
    CHECK(rows[3]["source"] == "engine");
    CHECK(rows[1]["plus"].get<double>() == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("recover on an oracle spectrum file") {
    std::string csv = (temp_dir() / "ab.csv").string();
    auto gen = run_cli({"oracle", "abdisk", "--beta", "0.3", "--kmax", "150", "--out", csv});
    REQUIRE(gen.code == 0);
    auto r = run_cli({"recover", csv});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["length"].get<double>() == doctest::Approx(6.28318530718).epsilon(1e-6));
    CHECK(j["alpha"].get<double>() == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(j["case"] == "generic");
}

TEST_CASE("apdecide reports the doubled three-way split as equal") {
    std::string r1 = write_file("r1.json",
                                R"([{"a":"1","b":"0"},{"a":"1","b":"0"}])");
    std::string r2 = write_file(
        "r2.json",
        R"([{"a":"3","b":"0"},{"a":"3","b":"1"},{"a":"3","b":"2"},)"
        R"({"a":"3","b":"0"},{"a":"3","b":"2"},{"a":"3","b":"1"}])");
    auto r = run_cli({"apdecide", r1, r2});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["verdict"] == "equal_ae");

    std::string r3 = write_file("r3.json", R"([{"a":"1","b":"1/3"}])");
    auto rd = run_cli({"apdecide", r1, r3});
    json jd = json::parse(rd.out);
    CHECK(jd["verdict"] == "differ");
}

TEST_CASE("cover subcommand flags the covering taxonomy") {
    std::string path = write_file(
        "ecs.json", R"([{"a":"2","b":"0"},{"a":"4","b":"1"},{"a":"4","b":"3"}])");
    auto r = run_cli({"cover", path});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["cs"] == true);
    CHECK(j["ecs"] == true);
    CHECK(j["dcs"] == false);
    CHECK(j["necs"] == true);
    CHECK(j["tree"].size() == 2);
}

TEST_CASE("classify subcommand") {
    auto r = run_cli({"classify", "--k2", "2"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["unit_fraction_tuples"].size() == 2);
    CHECK(j["families"].size() == 2);
}

TEST_CASE("match subcommand compares two spectra") {
    std::string ca = (temp_dir() / "ma.csv").string();
    std::string cb = (temp_dir() / "mb.csv").string();
    run_cli({"oracle", "cylinder", "--L", "1", "--beta", "0.3", "--kmax", "60",
             "--out", ca});
    run_cli({"oracle", "cylinder", "--L", "1", "--beta", "0.3", "--kmax", "60",
             "--out", cb});
    auto r = run_cli({"match", ca, cb, "--tol", "1e-10"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["consistent"] == true);
}

TEST_CASE("errors surface as single-line json with nonzero exit") {
    auto r = run_cli({"recover", "/nonexistent/file.csv"});
    CHECK(r.code == 1);
    json j = json::parse(r.err);
    CHECK(j.contains("error"));
    CHECK(j["type"] == "toolkit");

    auto bad = run_cli({"oracle", "abdisk", "--beta", "0.9"});
    CHECK(bad.code == 1);

    auto usage = run_cli({"nonsense"});
    CHECK(usage.code == 1);
}

TEST_CASE("help mentions every subcommand") {
    auto r = run_cli({"--help"});
    CHECK(r.code == 0);
    for (const char* sub : {"forward", "coeffs", "recover", "apdecide", "cover",
                            "classify", "match", "oracle"})
        CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("boundary json round trip and symmetry rejection") {
    SurfaceBoundary sb = make_flat_cylinder(2.0, -0.25);
    json j = boundary_to_json(sb);
    SurfaceBoundary back = boundary_from_json(j);
    REQUIRE(back.components.size() == 2);
    CHECK(back.cylinder_half_length == 2.0);
    CHECK(flux_alpha(back.components[0]).alpha == doctest::Approx(0.75));
    CHECK(flux_alpha(back.components[0]).p == 1);

    // Coefficients breaking conjugate symmetry are refused.
    json bad = j;
    bad["components"][0]["g11"] = json{{"re", {0.0, 1.0, 0.5}}, {"im", {0.0, 0.0, 0.0}}};
    CHECK_THROWS_AS(boundary_from_json(bad), IoError);
}

TEST_CASE("graded symbol json round trip") {
    GradedSymbol s = dn_symbol(make_component(
        PeriodicFn::constant(1.0) + PeriodicFn::cosine(1, 0.2), PeriodicFn::constant(0.3),
        PeriodicFn::sine(2, 0.1), PeriodicFn()));
    json j = graded_symbol_to_json(s);
    GradedSymbol back = graded_symbol_from_json(j);
    CHECK(back.leading_order() == s.leading_order());
    REQUIRE(back.depth() == s.depth());
    for (int i = 0; i < s.depth(); ++i) {
        CHECK((back.component(i) - s.component(i)).sup_norm() < 1e-14);
    }
}
