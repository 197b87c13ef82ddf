#ifndef GARLAND_MAP_DYNAMICS_HPP
#define GARLAND_MAP_DYNAMICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "garland/flow.hpp"
#include "garland/normal_form.hpp"
#include "garland/series.hpp"

namespace garland {

enum class OrbitKind { Elliptic, SaddleMap, SinkMap, SourceMap, NonConsSaddle, Degenerate };
std::string to_string(OrbitKind kind);

struct PeriodicOrbit {
    std::vector<Complex> points;     // q points, f(points[i]) = points[i+1 mod q]
    Complex mult1, mult2;            // eigenvalues of D(f^q)
    OrbitKind kind = OrbitKind::Degenerate;
    double jacobian_det = 0.0;       // det D(f^q)
    int central_partner = -1;        // index into the surrounding orbit list
    int reversible_partner = -1;
    double residual = 0.0;           // max |f^q(z) - z| over the orbit
};

/// Forward images z0, f(z0), ..., f^n(z0); stops early (shorter list) when an
/// iterate leaves the validity radius.
std::vector<Complex> iterate(const TruncatedSeries& map, Complex z0, int n,
                             bool* escaped = nullptr, double validity_radius = 0.5);

/// Real 2x2 Jacobian of the planar map at z, from the Wirtinger derivatives.
Mat2 map_jacobian(const TruncatedSeries& map, Complex z);

struct SeedPolicy {
    std::vector<Complex> informed;   // e.g. flow equilibria through the transform
    bool blind_grid = true;
    int blind_angles = 24;
    int blind_radii = 8;
    double min_radius = 5e-3;        // |z| range of the blind grid
    double max_radius = 0.5;
    double newton_tol = 1e-13;
    int max_iterations = 60;
    double dedup_tol = 1e-8;         // Hausdorff distance between orbit point sets
    double search_radius = 0.5;      // discard orbits outside this |z|
};

/// Newton on f^period(z) - z with the chain-rule Jacobian, deduplicated up to
/// cyclic shifts.  Orbits are classified before being returned.
std::vector<PeriodicOrbit> find_periodic_orbits(const TruncatedSeries& map, int period,
                                                const SeedPolicy& seeds);

/// Multipliers of D(f^period) along the orbit and the resulting kind.
PeriodicOrbit classify_orbit(const TruncatedSeries& map, PeriodicOrbit orbit);

enum class MapGarlandLabel { G11_qq, G22_qq, G_prime_2q_q_q_map, None };
std::string to_string(MapGarlandLabel label);

struct MapGarland {
    std::vector<PeriodicOrbit> orbits;
    MapGarlandLabel label = MapGarlandLabel::None;
    std::string diagnostics;
};

/// Matches orbits under z -> -z and z -> z* point-set-wise and labels the
/// resulting garland.
MapGarland symmetry_pairing(std::vector<PeriodicOrbit> orbits);

struct EmbeddingResidual {
    double order_rotated = 0.0; // fitted decay order of |f o R_phi - time-1 flow|
    double order_qth = 0.0;     // same for |f^q - time-1 of the q-scaled flow|
    std::vector<double> radii;
    std::vector<double> residual_rotated;
    std::vector<double> residual_qth;
};

/// Integrates the embedded flow at shrinking radii and fits the decay order
/// of the mismatch.  Radii where the residual sits at the rounding floor are
/// excluded from the fit.
EmbeddingResidual embedding_residual(const TruncatedSeries& map_nf, const ResonanceSpec& spec,
                                     double radius_lo = 1e-3, double radius_hi = 1e-1,
                                     int n_radii = 9, int points_per_radius = 20,
                                     unsigned seed = 2026);

/// Polynomial map R_{2 pi p/q} o (time-1 map of the truncated field): used to
/// realize a flow normal form as an area-preserving resonant map.  `degree`
/// controls the truncation of the Lie series (higher keeps det D(f) closer
/// to 1).
TruncatedSeries map_from_flow(const FlowParams& params, const ResonanceSpec& spec, int degree);

/// Least-squares slope of log(residual) vs log(radius), ignoring radii whose
/// residual is below `floor_abs`.  Returns nullopt with fewer than 3 usable
/// points.
std::optional<double> fit_decay_order(const std::vector<double>& radii,
                                      const std::vector<double>& residuals, double floor_abs);

} // namespace garland

#endif
