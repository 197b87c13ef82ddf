#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <numbers>
#include <string>

#include <json.hpp>

#include "garland/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_binary() {
    const char* env = std::getenv("GARLAND_KIT_BIN");
    REQUIRE(env != nullptr);
    return env;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_binary() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "garland_kit_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json symmetric_map_json() {
    // lambda (z + 0.9 i |z|^2 z + 0.3 (z*)^5) for the 1:3 resonance.
    const std::complex<double> lambda = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    auto term = [&](int m, int k, std::complex<double> c) {
        return json{{"m", m}, {"k", k}, {"re", c.real()}, {"im", c.imag()}};
    };
    json terms = json::array();
    terms.push_back(term(1, 0, lambda));
    terms.push_back(term(2, 1, lambda * std::complex<double>(0.2, 0.9)));
    terms.push_back(term(3, 0, std::complex<double>(0.4, -0.1)));
    terms.push_back(term(0, 5, lambda * std::complex<double>(0.3, 0.05)));
    return json{{"schema", "garland-kit/1"},
                {"p", 1},
                {"q", 3},
                {"map", {{"max_degree", 7}, {"terms", terms}}}};
}

json garland_params_json() {
    return json{{"schema", "garland-kit/1"},
                {"params",
                 {{"model", "symmetric"},
                  {"q", 3},
                  {"mu1", -0.01},
                  {"mu2", 0.0},
                  {"phi", {1.0, 0.0}},
                  {"alpha", 1.0}}}};
}

} // namespace

TEST_CASE("normalize happy path writes the result and exits 0") {
    const fs::path dir = fresh_dir("normalize_ok");
    write_file(dir / "map.json", symmetric_map_json().dump());
    const int rc = run_cli("normalize --input " + (dir / "map.json").string() + " --out " +
                           dir.string());
    CHECK(rc == 0);
    const json out = json::parse(slurp(dir / "normal_form.json"));
    CHECK(out["schema"] == "garland-kit/1");
    CHECK(out.contains("normalized_map"));
    CHECK(out.contains("transform"));
    CHECK(out.contains("omega_coeffs"));
    CHECK(out.contains("leading_nonidentical"));
    CHECK(out["degeneracy_flags"]["g1_degenerate"] == false);
    // Only resonant monomials survive: no (3,0) term in the output.
    for (const auto& t : out["normalized_map"]["terms"])
        CHECK_FALSE((t["m"] == 3 && t["k"] == 0));

    const json manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["tool_version"] == garland::cli::kToolVersion);
    CHECK(manifest["artifacts"].size() == 1);
    CHECK(manifest["artifacts"][0]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("normalize with q = 4 exits 2") {
    const fs::path dir = fresh_dir("normalize_even_q");
    json in = symmetric_map_json();
    in["q"] = 4;
    write_file(dir / "map.json", in.dump());
    const int rc = run_cli("normalize --input " + (dir / "map.json").string() + " --out " +
                           dir.string());
    CHECK(rc == 2);
}

TEST_CASE("unknown fields are rejected with exit 1") {
    const fs::path dir = fresh_dir("normalize_schema");
    json in = symmetric_map_json();
    in["mu2_typo"] = 0.1;
    write_file(dir / "map.json", in.dump());
    const int rc = run_cli("normalize --input " + (dir / "map.json").string() + " --out " +
                           dir.string());
    CHECK(rc == 1);
}

TEST_CASE("degenerate normal form exits 2 but still writes the report") {
    const fs::path dir = fresh_dir("normalize_degenerate");
    json in = symmetric_map_json();
    // Remove the |z|^2 z term: g1 = 0.
    json terms = json::array();
    for (const auto& t : in["map"]["terms"])
        if (!(t["m"] == 2 && t["k"] == 1)) terms.push_back(t);
    in["map"]["terms"] = terms;
    write_file(dir / "map.json", in.dump());
    const int rc = run_cli("normalize --input " + (dir / "map.json").string() + " --out " +
                           dir.string());
    CHECK(rc == 2);
    const json out = json::parse(slurp(dir / "normal_form.json"));
    CHECK(out["degeneracy_flags"]["g1_degenerate"] == true);
}

TEST_CASE("garland subcommand emits the classified garland") {
    const fs::path dir = fresh_dir("garland_run");
    write_file(dir / "params.json", garland_params_json().dump());
    const int rc = run_cli("garland --input " + (dir / "params.json").string() + " --out " +
                           dir.string() + " --format csv");
    CHECK(rc == 0);
    const json out = json::parse(slurp(dir / "garland.json"));
    CHECK(out["label"] == "G_2q2q");
    CHECK(out["equilibria"].size() == 12);
    // CSV has a header plus one row per equilibrium.
    std::istringstream csv(slurp(dir / "garland.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 13);
}

TEST_CASE("solver-failure diagnostics exit 3") {
    const fs::path dir = fresh_dir("garland_fail");
    json in = garland_params_json();
    // Validity radius so small that the promised garland lies outside it.
    in["params"]["validity_radius"] = 1e-3;
    write_file(dir / "params.json", in.dump());
    const int rc = run_cli("garland --input " + (dir / "params.json").string() + " --out " +
                           dir.string());
    CHECK(rc == 3);
}

TEST_CASE("atlas with an 8x8 grid writes 64 rows and the curves file") {
    const fs::path dir = fresh_dir("atlas_run");
    const int rc = run_cli("atlas --resolution 8 --out " + dir.string());
    CHECK(rc == 0);
    std::istringstream csv(slurp(dir / "atlas_grid.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "mu1,mu2,region,n_saddle,n_center,n_focus,n_non_symmetric,boundary,label");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 64);
    CHECK(fs::exists(dir / "atlas_curves.csv"));
}

TEST_CASE("portrait produces the trajectory CSV with H and divergence columns") {
    const fs::path dir = fresh_dir("portrait_run");
    json in = garland_params_json();
    in["initial_points"] = json::array({json{{"re", 0.11}, {"im", 0.02}}});
    in["t_end"] = 10.0;
    in["n_samples"] = 32;
    write_file(dir / "portrait.json", in.dump());
    const int rc = run_cli("portrait --input " + (dir / "portrait.json").string() + " --out " +
                           dir.string() + " --format svg");
    CHECK(rc == 0);
    std::istringstream csv(slurp(dir / "portrait.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "orbit,t,x,y,r,psi,H,div");
    CHECK(fs::exists(dir / "portrait.svg"));
}

TEST_CASE("orbit subcommand realizes the flow and finds the four orbits") {
    const fs::path dir = fresh_dir("orbit_run");
    json params = garland_params_json()["params"];
    json in = {{"schema", "garland-kit/1"},
               {"p", 1},
               {"q", 3},
               {"search_radius", 0.3},
               {"from_flow", {{"params", params}, {"degree", 15}}},
               {"flow_params", params}};
    write_file(dir / "orbit.json", in.dump());
    const int rc = run_cli("orbit --input " + (dir / "orbit.json").string() + " --out " +
                           dir.string() + " --format csv");
    CHECK(rc == 0);
    const json out = json::parse(slurp(dir / "orbits.json"));
    CHECK(out["orbits"].size() == 4);
    CHECK(out["label"] == "G22_qq");
    CHECK(out["informed_seeds"] == 12);
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    json in = symmetric_map_json();
    const fs::path dir_a = fresh_dir("determinism_a");
    const fs::path dir_b = fresh_dir("determinism_b");
    write_file(dir_a / "map.json", in.dump());
    write_file(dir_b / "map.json", in.dump());
    CHECK(run_cli("normalize --input " + (dir_a / "map.json").string() + " --out " +
                  dir_a.string() + " --seed 42") == 0);
    CHECK(run_cli("normalize --input " + (dir_b / "map.json").string() + " --out " +
                  dir_b.string() + " --seed 42") == 0);
    CHECK(slurp(dir_a / "normal_form.json") == slurp(dir_b / "normal_form.json"));
    CHECK(garland::cli::sha256_file((dir_a / "normal_form.json").string()) ==
          garland::cli::sha256_file((dir_b / "normal_form.json").string()));
}

TEST_CASE("tolerance overrides below the hard floor are rejected") {
    const fs::path dir = fresh_dir("tol_floor");
    write_file(dir / "params.json", garland_params_json().dump());
    const int rc = run_cli("garland --input " + (dir / "params.json").string() + " --out " +
                           dir.string() + " --tol-newton 1e-15");
    CHECK(rc == 1);
}

TEST_CASE("sha256 matches a known vector") {
    const fs::path dir = fresh_dir("sha");
    write_file(dir / "abc.txt", "abc");
    CHECK(garland::cli::sha256_file((dir / "abc.txt").string()) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
