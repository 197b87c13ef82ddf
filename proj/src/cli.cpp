#include "garland/cli.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "garland/atlas.hpp"
#include "garland/equilibria.hpp"
#include "garland/errors.hpp"
#include "garland/flow.hpp"
#include "garland/json_io.hpp"
#include "garland/map_dynamics.hpp"
#include "garland/normal_form.hpp"
#include "garland/svg.hpp"

namespace garland::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

// ---------------------------------------------------------------------------
// Compact SHA-256 (FIPS 180-4), enough for manifest checksums.

struct Sha256 {
    uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                     0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    uint64_t length = 0;
    std::array<uint8_t, 64> block{};
    std::size_t fill = 0;

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void process(const uint8_t* p) {
        static const uint32_t K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = uint32_t(p[4 * i] << 24) | uint32_t(p[4 * i + 1] << 16) |
                   uint32_t(p[4 * i + 2] << 8) | uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            const uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const uint32_t ch = (e & f) ^ (~e & g);
            const uint32_t t1 = hh + S1 + ch + K[i] + w[i];
            const uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const uint32_t t2 = S0 + maj;
            hh = g; g = f; f = e; e = d + t1; d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }

    void update(const uint8_t* data, std::size_t n) {
        length += n;
        while (n > 0) {
            const std::size_t take = std::min(n, block.size() - fill);
            std::memcpy(block.data() + fill, data, take);
            fill += take;
            data += take;
            n -= take;
            if (fill == block.size()) {
                process(block.data());
                fill = 0;
            }
        }
    }

    std::string finish() {
        const uint64_t bits = length * 8;
        const uint8_t one = 0x80;
        update(&one, 1);
        const uint8_t zero = 0x00;
        while (fill != 56) update(&zero, 1);
        uint8_t len[8];
        for (int i = 0; i < 8; ++i) len[i] = uint8_t(bits >> (56 - 8 * i));
        update(len, 8);
        std::ostringstream os;
        for (uint32_t v : h) {
            char buf[9];
            std::snprintf(buf, sizeof buf, "%08x", v);
            os << buf;
        }
        return os.str();
    }
};

// ---------------------------------------------------------------------------

double checked_tol(std::optional<double> override_value, double fallback, const char* name) {
    if (!override_value) return fallback;
    if (*override_value < 1e-14)
        throw SchemaError(std::string(name) + ": tolerance override below the 1e-14 floor");
    return *override_value;
}

struct ArtifactList {
    std::vector<std::string> paths;
    void add(const std::string& p) { paths.push_back(p); }
};

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot open output file: " + path);
    out << body;
}

ResonanceSpec spec_from_json(const Json& j, const std::string& where, const RunConfig& cfg) {
    if (!cfg.p && !j.contains("p")) throw SchemaError(where + ".p: missing field");
    if (!cfg.q && !j.contains("q")) throw SchemaError(where + ".q: missing field");
    if (j.contains("p") && !j["p"].is_number_integer())
        throw SchemaError(where + ".p: expected an integer");
    if (j.contains("q") && !j["q"].is_number_integer())
        throw SchemaError(where + ".q: expected an integer");
    const int p = cfg.p ? *cfg.p : j["p"].get<int>();
    const int q = cfg.q ? *cfg.q : j["q"].get<int>();
    return ResonanceSpec::make(p, q);
}

// ---------------------------------------------------------------------------
// Subcommands.  Each returns the exit code and fills the artifact list.

int cmd_normalize(const RunConfig& cfg, ArtifactList& artifacts) {
    const Json in = io::load_json_file(cfg.input_path);
    io::check_fields(in, "$", {"schema", "map"}, {"p", "q"});
    if (in["schema"] != io::kSchemaTag) throw SchemaError("$.schema: expected garland-kit/1");
    const ResonanceSpec spec = spec_from_json(in, "$", cfg);
    TruncatedSeries map = io::series_from_json(in["map"], "$.map");

    const NormalFormResult result = normalize(map, spec);
    Json out = io::normal_form_to_json(result, spec);

    // Seeded conjugacy self-check: residual of Psi^{-1} o f o Psi vs the
    // normal form at random points, reported alongside the result.
    {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        Json checks = Json::array();
        for (double rho : {1e-2, 3e-2}) {
            double worst = 0.0;
            for (int i = 0; i < 20; ++i) {
                const Complex z = std::polar(rho, angle(rng));
                const Complex lhs = result.transform_inverse.evaluate(
                    map.evaluate(result.transform.evaluate(z)));
                const Complex rhs = result.normalized_map.evaluate(z);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
            checks.push_back(Json{{"radius", rho}, {"max_residual", worst}});
        }
        out["conjugacy_check"] = std::move(checks);
    }

    const std::string path = (fs::path(cfg.output_dir) / "normal_form.json").string();
    io::write_json_file(path, out);
    artifacts.add(path);

    if (result.g1_degenerate || result.leading_degenerate) {
        std::cerr << "normalize: degenerate normal form ("
                  << (result.g1_degenerate ? "g1 " : "")
                  << (result.leading_degenerate ? "leading coefficient " : "")
                  << "below 1e-10); downstream flow analysis is not meaningful\n";
        return 2;
    }
    return 0;
}

int cmd_garland(const RunConfig& cfg, ArtifactList& artifacts) {
    const Json in = io::load_json_file(cfg.input_path);
    io::check_fields(in, "$", {"schema", "params"}, {});
    if (in["schema"] != io::kSchemaTag) throw SchemaError("$.schema: expected garland-kit/1");
    FlowParams params = io::flow_params_from_json(in["params"], "$.params");
    params.validate();

    NewtonSettings settings;
    settings.tol = checked_tol(cfg.tol_newton, settings.tol, "tol-newton");

    const std::vector<Equilibrium> eqs = find_equilibria(params, settings);
    const Garland g = assemble_garland(eqs, params);

    const std::string path = (fs::path(cfg.output_dir) / "garland.json").string();
    io::write_json_file(path, io::garland_to_json(g, params));
    artifacts.add(path);

    if (cfg.format == Format::Csv || cfg.format == Format::Svg) {
        std::ostringstream csv;
        csv << "r,psi,x,y,kind,divergence,symmetry,reversibly_symmetric\n";
        for (const Equilibrium& e : g.equilibria) {
            const Complex z = e.state.to_complex();
            csv << io::format_double(e.state.r) << "," << io::format_double(e.state.psi) << ","
                << io::format_double(z.real()) << "," << io::format_double(z.imag()) << ","
                << to_string(e.kind) << "," << io::format_double(e.divergence) << ","
                << to_string(e.symmetry) << "," << (e.reversibly_symmetric ? 1 : 0) << "\n";
        }
        const std::string cpath = (fs::path(cfg.output_dir) / "garland.csv").string();
        write_text_file(cpath, csv.str());
        artifacts.add(cpath);
    }
    return 0;
}

int cmd_portrait(const RunConfig& cfg, ArtifactList& artifacts) {
    const Json in = io::load_json_file(cfg.input_path);
    io::check_fields(in, "$", {"schema", "params", "initial_points", "t_end"}, {"tol", "n_samples"});
    if (in["schema"] != io::kSchemaTag) throw SchemaError("$.schema: expected garland-kit/1");
    FlowParams params = io::flow_params_from_json(in["params"], "$.params");
    params.validate();
    if (!in["t_end"].is_number()) throw SchemaError("$.t_end: expected a number");
    const double t_end = in["t_end"].get<double>();
    double tol = in.contains("tol") ? in["tol"].get<double>() : 1e-10;
    tol = checked_tol(cfg.tol_ode, tol, "tol-ode");
    const int n_samples = in.contains("n_samples") ? in["n_samples"].get<int>() : 512;
    if (!in["initial_points"].is_array() || in["initial_points"].empty())
        throw SchemaError("$.initial_points: expected a nonempty array");

    std::vector<Complex> z0s;
    int idx = 0;
    for (const Json& pt : in["initial_points"]) {
        const std::string at = "$.initial_points[" + std::to_string(idx++) + "]";
        io::check_fields(pt, at, {"re", "im"}, {});
        z0s.push_back(Complex(pt["re"].get<double>(), pt["im"].get<double>()));
    }

    std::ostringstream csv;
    csv << "orbit,t,x,y,r,psi,H,div\n";
    std::vector<std::vector<std::pair<double, double>>> paths;
    for (std::size_t i = 0; i < z0s.size(); ++i) {
        const Trajectory traj = integrate(params, z0s[i], t_end, tol, n_samples);
        paths.emplace_back();
        for (std::size_t s = 0; s < traj.t.size(); ++s) {
            const Complex z = traj.z[s];
            const PolarState ps = PolarState::from_complex(z);
            csv << i << "," << io::format_double(traj.t[s]) << "," << io::format_double(z.real())
                << "," << io::format_double(z.imag()) << "," << io::format_double(ps.r) << ","
                << io::format_double(ps.psi) << ",";
            csv << (has_hamiltonian(params) ? io::format_double(hamiltonian(params, ps)) : "nan");
            csv << "," << io::format_double(divergence(params, z)) << "\n";
            paths.back().push_back({z.real(), z.imag()});
        }
    }
    const std::string cpath = (fs::path(cfg.output_dir) / "portrait.csv").string();
    write_text_file(cpath, csv.str());
    artifacts.add(cpath);

    if (cfg.format == Format::Svg) {
        const double R = params.validity_radius;
        svg::Canvas canvas(-R, R, -R, R);
        for (const auto& path : paths) canvas.polyline(path, "#2471a3", 0.8);
        try {
            for (const Equilibrium& e : find_equilibria(params)) {
                const Complex z = e.state.to_complex();
                canvas.circle(z.real(), z.imag(), 3.0, svg::kind_color(to_string(e.kind)), true);
            }
        } catch (const SolverError&) {
            // portraits of equilibrium-free parameter sets are still useful
        }
        const std::string spath = (fs::path(cfg.output_dir) / "portrait.svg").string();
        write_text_file(spath, canvas.render());
        artifacts.add(spath);
    }
    return 0;
}

int cmd_atlas(const RunConfig& cfg, ArtifactList& artifacts) {
    FlowParams base;
    base.model = FlowModel::SymBreakConservative;
    base.q = 3;
    base.phi = {1.0, 0.0};
    base.alpha = 1.0;
    if (!cfg.input_path.empty()) {
        const Json in = io::load_json_file(cfg.input_path);
        io::check_fields(in, "$", {"schema", "params"}, {"window", "resolution"});
        if (in["schema"] != io::kSchemaTag) throw SchemaError("$.schema: expected garland-kit/1");
        base = io::flow_params_from_json(in["params"], "$.params");
    }
    if (cfg.q) base.q = *cfg.q;
    if (cfg.model) {
        if (*cfg.model == "symmetric") base.model = FlowModel::Symmetric;
        else if (*cfg.model == "sym_break_conservative") base.model = FlowModel::SymBreakConservative;
        else if (*cfg.model == "reversible_non_conservative") base.model = FlowModel::ReversibleNonCons;
        else throw SchemaError("--model: unknown model '" + *cfg.model + "'");
    }
    if (base.model == FlowModel::Symmetric) base.model = FlowModel::SymBreakConservative;

    AtlasWindow window;
    for (int i = 0; i < 4; ++i) {
        if (cfg.window[i]) {
            (i == 0 ? window.mu1_min
             : i == 1 ? window.mu1_max
             : i == 2 ? window.mu2_min
                      : window.mu2_max) = *cfg.window[i];
        }
    }
    const int resolution = cfg.resolution.value_or(64);

    const Atlas atlas = atlas_sweep(window, resolution, base);

    std::ostringstream grid_csv;
    grid_csv << "mu1,mu2,region,n_saddle,n_center,n_focus,n_non_symmetric,boundary,label\n";
    for (const RegionSample& s : atlas.grid) {
        grid_csv << io::format_double(s.mu1) << "," << io::format_double(s.mu2) << ","
                 << to_string(s.id) << "," << s.n_saddle << "," << s.n_center << "," << s.n_focus
                 << "," << s.n_non_symmetric << "," << (s.boundary ? 1 : 0) << ","
                 << to_string(s.label) << "\n";
    }
    const std::string gpath = (fs::path(cfg.output_dir) / "atlas_grid.csv").string();
    write_text_file(gpath, grid_csv.str());
    artifacts.add(gpath);

    std::ostringstream curves_csv;
    curves_csv << "curve,branch,mu1,mu2\n";
    for (const BifurcationCurve& c : atlas.curves)
        for (const auto& [mu1, mu2] : c.samples)
            curves_csv << c.name << "," << c.branch << "," << io::format_double(mu1) << ","
                       << io::format_double(mu2) << "\n";
    for (const HeteroclinicHint& h : atlas.heteroclinic_band)
        curves_csv << "heteroclinic_band_heuristic,0," << io::format_double(h.mu1) << ","
                   << io::format_double(h.mu2) << "\n";
    const std::string cpath = (fs::path(cfg.output_dir) / "atlas_curves.csv").string();
    write_text_file(cpath, curves_csv.str());
    artifacts.add(cpath);

    if (cfg.format == Format::Svg) {
        svg::Canvas canvas(window.mu1_min, window.mu1_max, window.mu2_min, window.mu2_max);
        const double dx = (window.mu1_max - window.mu1_min) / resolution;
        const double dy = (window.mu2_max - window.mu2_min) / resolution;
        for (const RegionSample& s : atlas.grid) {
            canvas.rect(s.mu1 - 0.5 * dx, s.mu2 - 0.5 * dy, s.mu1 + 0.5 * dx, s.mu2 + 0.5 * dy,
                        svg::region_color(int(s.id)));
        }
        for (const BifurcationCurve& c : atlas.curves) {
            std::vector<std::pair<double, double>> pts(c.samples.begin(), c.samples.end());
            canvas.polyline(pts, "#333333", 1.5);
        }
        const std::string spath = (fs::path(cfg.output_dir) / "atlas.svg").string();
        write_text_file(spath, canvas.render());
        artifacts.add(spath);
    }
    return 0;
}

int cmd_orbit(const RunConfig& cfg, ArtifactList& artifacts) {
    const Json in = io::load_json_file(cfg.input_path);
    io::check_fields(in, "$", {"schema"},
                     {"p", "q", "map", "from_flow", "period", "flow_params", "transform",
                      "search_radius"});
    if (in["schema"] != io::kSchemaTag) throw SchemaError("$.schema: expected garland-kit/1");
    const ResonanceSpec spec = spec_from_json(in, "$", cfg);
    const int period = in.contains("period") ? in["period"].get<int>() : spec.q;

    TruncatedSeries map = TruncatedSeries::identity(1);
    if (in.contains("map")) {
        map = io::series_from_json(in["map"], "$.map");
    } else if (in.contains("from_flow")) {
        io::check_fields(in["from_flow"], "$.from_flow", {"params"}, {"degree"});
        const FlowParams fp = io::flow_params_from_json(in["from_flow"]["params"],
                                                        "$.from_flow.params");
        const int degree = in["from_flow"].contains("degree")
                               ? in["from_flow"]["degree"].get<int>()
                               : 2 * spec.q + 9;
        map = map_from_flow(fp, spec, degree);
    } else {
        throw SchemaError("$: one of map or from_flow is required");
    }

    SeedPolicy seeds;
    seeds.newton_tol = checked_tol(cfg.tol_newton, seeds.newton_tol, "tol-newton");
    if (in.contains("search_radius")) seeds.search_radius = in["search_radius"].get<double>();
    if (in.contains("flow_params")) {
        const FlowParams fp = io::flow_params_from_json(in["flow_params"], "$.flow_params");
        std::optional<TruncatedSeries> transform;
        if (in.contains("transform"))
            transform = io::series_from_json(in["transform"], "$.transform");
        try {
            for (const Equilibrium& e : find_equilibria(fp)) {
                Complex z = e.state.to_complex();
                if (transform) z = transform->evaluate(z);
                seeds.informed.push_back(z);
            }
        } catch (const SolverError&) {
            // fall through to the blind grid
        }
    }

    const std::vector<PeriodicOrbit> orbits = find_periodic_orbits(map, period, seeds);
    const MapGarland g = symmetry_pairing(orbits);

    Json out = io::map_garland_to_json(g);
    out["period"] = period;
    out["informed_seeds"] = int(seeds.informed.size());
    const std::string jpath = (fs::path(cfg.output_dir) / "orbits.json").string();
    io::write_json_file(jpath, out);
    artifacts.add(jpath);

    if (cfg.format == Format::Csv || cfg.format == Format::Svg) {
        std::ostringstream csv;
        csv << "orbit,point,x,y,kind,jacobian_det\n";
        for (std::size_t i = 0; i < g.orbits.size(); ++i) {
            for (std::size_t s = 0; s < g.orbits[i].points.size(); ++s) {
                const Complex z = g.orbits[i].points[s];
                csv << i << "," << s << "," << io::format_double(z.real()) << ","
                    << io::format_double(z.imag()) << "," << to_string(g.orbits[i].kind) << ","
                    << io::format_double(g.orbits[i].jacobian_det) << "\n";
            }
        }
        const std::string cpath = (fs::path(cfg.output_dir) / "orbit_points.csv").string();
        write_text_file(cpath, csv.str());
        artifacts.add(cpath);
    }
    return 0;
}

} // namespace

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("sha256: cannot open " + path);
    Sha256 hasher;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        hasher.update(reinterpret_cast<const uint8_t*>(buf), std::size_t(in.gcount()));
    }
    return hasher.finish();
}

int run(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    ArtifactList artifacts;
    int code = 0;
    std::string error_message;
    try {
        fs::create_directories(config.output_dir);
        if (config.subcommand == "normalize")
            code = cmd_normalize(config, artifacts);
        else if (config.subcommand == "garland")
            code = cmd_garland(config, artifacts);
        else if (config.subcommand == "portrait")
            code = cmd_portrait(config, artifacts);
        else if (config.subcommand == "atlas")
            code = cmd_atlas(config, artifacts);
        else if (config.subcommand == "orbit")
            code = cmd_orbit(config, artifacts);
        else
            throw SchemaError("unknown subcommand: " + config.subcommand);
    } catch (const SchemaError& e) {
        error_message = e.what();
        code = 1;
    } catch (const DomainError& e) {
        error_message = e.what();
        code = 2;
    } catch (const std::invalid_argument& e) {
        error_message = e.what();
        code = 2;
    } catch (const SolverError& e) {
        error_message = e.what();
        code = 3;
    } catch (const std::exception& e) {
        error_message = e.what();
        code = 3;
    }
    if (!error_message.empty()) std::cerr << "garland-kit: " << error_message << "\n";

    // Manifest: version, config echo, wall time, artifact checksums.
    try {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        Json manifest{{"schema", io::kSchemaTag},
                      {"tool_version", kToolVersion},
                      {"subcommand", config.subcommand},
                      {"exit_status", code},
                      {"wall_time_s", wall},
                      {"config",
                       {{"input", config.input_path},
                        {"out", config.output_dir},
                        {"seed", config.seed},
                        {"format",
                         config.format == Format::Json ? "json"
                         : config.format == Format::Csv ? "csv"
                                                        : "svg"}}}};
        if (!error_message.empty()) manifest["error"] = error_message;
        Json files = Json::array();
        for (const std::string& path : artifacts.paths)
            files.push_back(Json{{"path", fs::path(path).filename().string()},
                                 {"sha256", sha256_file(path)}});
        manifest["artifacts"] = std::move(files);
        io::write_json_file((fs::path(config.output_dir) / "manifest.json").string(), manifest);
    } catch (const std::exception& e) {
        std::cerr << "garland-kit: manifest write failed: " << e.what() << "\n";
        if (code == 0) code = 3;
    }
    return code;
}

} // namespace garland::cli
