#ifndef GARLAND_CLI_HPP
#define GARLAND_CLI_HPP

#include <optional>
#include <string>

namespace garland::cli {

inline constexpr const char* kToolVersion = "garland-kit 0.1.0";

enum class Format { Json, Csv, Svg };

struct RunConfig {
    std::string subcommand;           // normalize | portrait | garland | atlas | orbit
    std::string input_path;           // JSON input (may be empty for atlas with flags)
    std::string output_dir = ".";
    unsigned seed = 2026;
    Format format = Format::Json;     // csv/svg add the extra artifacts
    // Atlas overrides.
    std::optional<double> window[4];  // mu1_min, mu1_max, mu2_min, mu2_max
    std::optional<int> resolution;
    std::optional<int> q;
    std::optional<int> p;
    std::optional<std::string> model;
    // Tolerance overrides; hard floor 1e-14.
    std::optional<double> tol_newton;
    std::optional<double> tol_ode;
};

/// Executes one subcommand: writes artifacts plus manifest.json under
/// output_dir.  Returns the process exit status: 0 success, 1 schema
/// violation, 2 domain error, 3 solver failure.
int run(const RunConfig& config);

/// SHA-256 of a file, lowercase hex; used for the manifest checksums.
std::string sha256_file(const std::string& path);

} // namespace garland::cli

#endif
