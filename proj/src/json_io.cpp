#include "garland/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "garland/errors.hpp"

namespace garland::io {

void check_fields(const Json& obj, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
    if (!obj.is_object()) throw SchemaError(where + ": expected a JSON object");
    std::set<std::string> allowed(optional.begin(), optional.end());
    allowed.insert(required.begin(), required.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key))
            throw SchemaError(where + "." + key + ": unknown field");
    }
    for (const std::string& key : required) {
        if (!obj.contains(key)) throw SchemaError(where + "." + key + ": missing field");
    }
}

Json series_to_json(const TruncatedSeries& s) {
    Json terms = Json::array();
    for (const auto& [mk, c] : s.terms()) {
        terms.push_back(Json{{"m", mk.m}, {"k", mk.k}, {"re", c.real()}, {"im", c.imag()}});
    }
    return Json{{"max_degree", s.max_degree()}, {"terms", std::move(terms)}};
}

TruncatedSeries series_from_json(const Json& j, const std::string& where) {
    check_fields(j, where, {"max_degree", "terms"}, {});
    if (!j["max_degree"].is_number_integer())
        throw SchemaError(where + ".max_degree: expected an integer");
    const int deg = j["max_degree"].get<int>();
    if (deg < 1) throw SchemaError(where + ".max_degree: must be >= 1");
    if (!j["terms"].is_array()) throw SchemaError(where + ".terms: expected an array");
    std::vector<std::pair<Monomial, Complex>> terms;
    int idx = 0;
    for (const Json& t : j["terms"]) {
        const std::string at = where + ".terms[" + std::to_string(idx++) + "]";
        check_fields(t, at, {"m", "k", "re", "im"}, {});
        if (!t["m"].is_number_integer() || !t["k"].is_number_integer())
            throw SchemaError(at + ": m and k must be integers");
        const int m = t["m"].get<int>(), k = t["k"].get<int>();
        if (m < 0 || k < 0) throw SchemaError(at + ": exponents must be nonnegative");
        if (m + k > deg) throw SchemaError(at + ": degree exceeds max_degree");
        if (!t["re"].is_number() || !t["im"].is_number())
            throw SchemaError(at + ": re and im must be numbers");
        terms.push_back({{m, k}, Complex(t["re"].get<double>(), t["im"].get<double>())});
    }
    return TruncatedSeries::from_terms(deg, terms);
}

namespace {

FlowModel model_from_string(const std::string& s, const std::string& where) {
    if (s == "symmetric") return FlowModel::Symmetric;
    if (s == "sym_break_conservative") return FlowModel::SymBreakConservative;
    if (s == "reversible_non_conservative") return FlowModel::ReversibleNonCons;
    throw SchemaError(where + ": unknown model '" + s + "'");
}

} // namespace

Json flow_params_to_json(const FlowParams& p) {
    return Json{{"model", to_string(p.model)},
                {"q", p.q},
                {"mu1", p.mu1},
                {"mu2", p.mu2},
                {"phi", p.phi},
                {"alpha", p.alpha},
                {"theta", p.theta},
                {"A", p.A},
                {"B", p.B},
                {"validity_radius", p.validity_radius}};
}

FlowParams flow_params_from_json(const Json& j, const std::string& where) {
    check_fields(j, where, {"model", "q", "mu1", "phi", "alpha"},
                 {"mu2", "theta", "A", "B", "validity_radius"});
    FlowParams p;
    if (!j["model"].is_string()) throw SchemaError(where + ".model: expected a string");
    p.model = model_from_string(j["model"].get<std::string>(), where + ".model");
    if (!j["q"].is_number_integer()) throw SchemaError(where + ".q: expected an integer");
    p.q = j["q"].get<int>();
    auto num = [&](const char* key, double fallback, bool required) {
        if (!j.contains(key)) {
            if (required) throw SchemaError(where + "." + key + ": missing field");
            return fallback;
        }
        if (!j[key].is_number()) throw SchemaError(where + "." + key + ": expected a number");
        return j[key].get<double>();
    };
    p.mu1 = num("mu1", 0.0, true);
    p.mu2 = num("mu2", 0.0, false);
    p.alpha = num("alpha", 0.0, true);
    p.theta = num("theta", p.theta, false);
    p.A = num("A", 0.0, false);
    p.B = num("B", 0.0, false);
    p.validity_radius = num("validity_radius", 0.5, false);
    if (!j["phi"].is_array()) throw SchemaError(where + ".phi: expected an array of numbers");
    p.phi.clear();
    for (const Json& l : j["phi"]) {
        if (!l.is_number()) throw SchemaError(where + ".phi: expected an array of numbers");
        p.phi.push_back(l.get<double>());
    }
    if (p.q < 3 || p.q % 2 == 0) throw SchemaError(where + ".q: must be odd and >= 3");
    return p;
}

Json equilibrium_to_json(const Equilibrium& e) {
    return Json{{"r", e.state.r},
                {"psi", e.state.psi},
                {"eig1", {{"re", e.eig1.real()}, {"im", e.eig1.imag()}}},
                {"eig2", {{"re", e.eig2.real()}, {"im", e.eig2.imag()}}},
                {"kind", to_string(e.kind)},
                {"divergence", e.divergence},
                {"symmetry", to_string(e.symmetry)},
                {"reversibly_symmetric", e.reversibly_symmetric},
                {"residual", e.residual}};
}

Json garland_to_json(const Garland& g, const FlowParams& params) {
    Json eqs = Json::array();
    for (const Equilibrium& e : g.equilibria) eqs.push_back(equilibrium_to_json(e));
    Json pairs_c = Json::array(), pairs_r = Json::array();
    for (auto [i, j] : g.central_pairs) pairs_c.push_back(Json::array({i, j}));
    for (auto [i, j] : g.reversible_pairs) pairs_r.push_back(Json::array({i, j}));
    return Json{{"schema", kSchemaTag},
                {"params", flow_params_to_json(params)},
                {"equilibria", std::move(eqs)},
                {"label", to_string(g.label)},
                {"central_pairs", std::move(pairs_c)},
                {"reversible_pairs", std::move(pairs_r)},
                {"max_spacing_dev", g.max_spacing_dev},
                {"diagnostics", g.diagnostics}};
}

Json normal_form_to_json(const NormalFormResult& result, const ResonanceSpec& spec) {
    return Json{{"schema", kSchemaTag},
                {"p", spec.p},
                {"q", spec.q},
                {"normalized_map", series_to_json(result.normalized_map)},
                {"transform", series_to_json(result.transform)},
                {"transform_inverse", series_to_json(result.transform_inverse)},
                {"omega_coeffs", result.omega_coeffs},
                {"omega_real_parts", result.omega_real_parts},
                {"leading_nonidentical",
                 {{"re", result.leading_nonidentical.real()},
                  {"im", result.leading_nonidentical.imag()}}},
                {"degeneracy_flags",
                 {{"g1_degenerate", result.g1_degenerate},
                  {"leading_degenerate", result.leading_degenerate}}},
                {"max_omega_real_part", result.max_omega_real_part}};
}

Json orbit_to_json(const PeriodicOrbit& o) {
    Json pts = Json::array();
    for (Complex p : o.points) pts.push_back(Json{{"re", p.real()}, {"im", p.imag()}});
    return Json{{"points", std::move(pts)},
                {"multipliers",
                 Json::array({Json{{"re", o.mult1.real()}, {"im", o.mult1.imag()}},
                              Json{{"re", o.mult2.real()}, {"im", o.mult2.imag()}}})},
                {"kind", to_string(o.kind)},
                {"jacobian_det", o.jacobian_det},
                {"central_partner", o.central_partner},
                {"reversible_partner", o.reversible_partner},
                {"residual", o.residual}};
}

Json map_garland_to_json(const MapGarland& g) {
    Json orbits = Json::array();
    for (const PeriodicOrbit& o : g.orbits) orbits.push_back(orbit_to_json(o));
    return Json{{"schema", kSchemaTag},
                {"orbits", std::move(orbits)},
                {"label", to_string(g.label)},
                {"diagnostics", g.diagnostics}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open input file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw SchemaError("JSON parse error in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace garland::io
