#ifndef GARLAND_JSON_IO_HPP
#define GARLAND_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "garland/atlas.hpp"
#include "garland/equilibria.hpp"
#include "garland/flow.hpp"
#include "garland/map_dynamics.hpp"
#include "garland/normal_form.hpp"
#include "garland/series.hpp"

namespace garland::io {

using Json = nlohmann::json;

inline constexpr const char* kSchemaTag = "garland-kit/1";

/// Throws SchemaError naming the offending field when `obj` carries a key
/// outside `allowed` or misses one listed in `required`.
void check_fields(const Json& obj, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional);

/// { "max_degree": n, "terms": [ {"m","k","re","im"}, ... ] },
/// terms sorted by (degree, m).
Json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const Json& j, const std::string& where);

Json flow_params_to_json(const FlowParams& p);
FlowParams flow_params_from_json(const Json& j, const std::string& where);

Json equilibrium_to_json(const Equilibrium& e);
Json garland_to_json(const Garland& g, const FlowParams& params);

Json normal_form_to_json(const NormalFormResult& result, const ResonanceSpec& spec);

Json orbit_to_json(const PeriodicOrbit& o);
Json map_garland_to_json(const MapGarland& g);

/// Reads a whole file; throws SchemaError on parse failure.
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Deterministic float formatting for CSV artifacts.
std::string format_double(double v);

} // namespace garland::io

#endif
