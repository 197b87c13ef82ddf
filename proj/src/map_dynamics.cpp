#include "garland/map_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "garland/errors.hpp"
#include "garland/ode.hpp"

namespace garland {

namespace {

constexpr double kPi = std::numbers::pi;

/// Hausdorff distance between two point sets.
double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    auto one_sided = [](const std::vector<Complex>& u, const std::vector<Complex>& v) {
        double worst = 0.0;
        for (Complex p : u) {
            double best = std::numeric_limits<double>::infinity();
            for (Complex r : v) best = std::min(best, std::abs(p - r));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

} // namespace

std::string to_string(OrbitKind kind) {
    switch (kind) {
        case OrbitKind::Elliptic: return "elliptic";
        case OrbitKind::SaddleMap: return "saddle";
        case OrbitKind::SinkMap: return "sink";
        case OrbitKind::SourceMap: return "source";
        case OrbitKind::NonConsSaddle: return "non_conservative_saddle";
        case OrbitKind::Degenerate: return "degenerate";
    }
    return "?";
}

std::string to_string(MapGarlandLabel label) {
    switch (label) {
        case MapGarlandLabel::G11_qq: return "G11_qq";
        case MapGarlandLabel::G22_qq: return "G22_qq";
        case MapGarlandLabel::G_prime_2q_q_q_map: return "G_prime_2q_q_q";
        case MapGarlandLabel::None: return "none";
    }
    return "?";
}

std::vector<Complex> iterate(const TruncatedSeries& map, Complex z0, int n, bool* escaped,
                             double validity_radius) {
    std::vector<Complex> out;
    out.reserve(n + 1);
    out.push_back(z0);
    if (escaped) *escaped = false;
    Complex z = z0;
    for (int i = 0; i < n; ++i) {
        z = map.evaluate(z);
        if (std::abs(z) > validity_radius) {
            if (escaped) *escaped = true;
            break;
        }
        out.push_back(z);
    }
    return out;
}

Mat2 map_jacobian(const TruncatedSeries& map, Complex z) {
    const auto [fz, fzs] = map.wirtinger(z);
    // d/dx = f_z + f_z*, d/dy = i (f_z - f_z*).
    const Complex dx = fz + fzs;
    const Complex dy = Complex(0.0, 1.0) * (fz - fzs);
    return Mat2{dx.real(), dy.real(), dx.imag(), dy.imag()};
}

namespace {

/// One Newton solve for f^period(z) = z.
std::optional<std::vector<Complex>> newton_orbit(const TruncatedSeries& map, int period,
                                                 Complex z0, const SeedPolicy& cfg) {
    Complex z = z0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        // Evaluate f^period and the chained Jacobian.
        Complex w = z;
        Mat2 M{1, 0, 0, 1};
        bool bad = false;
        std::vector<Complex> pts(period);
        for (int s = 0; s < period; ++s) {
            pts[s] = w;
            M = map_jacobian(map, w) * M;
            w = map.evaluate(w);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) ||
                std::abs(w) > 4.0 * cfg.search_radius + 1.0) {
                bad = true;
                break;
            }
        }
        if (bad) return std::nullopt;
        const Complex F = w - z;
        if (std::abs(F) < cfg.newton_tol) return pts;
        const Mat2 A{M.a11 - 1.0, M.a12, M.a21, M.a22 - 1.0};
        std::array<double, 2> step;
        try {
            step = A.solve(-F.real(), -F.imag());
        } catch (const SolverError&) {
            return std::nullopt;
        }
        z += Complex(step[0], step[1]);
    }
    return std::nullopt;
}

} // namespace

PeriodicOrbit classify_orbit(const TruncatedSeries& map, PeriodicOrbit orbit) {
    const int period = int(orbit.points.size());
    Mat2 M{1, 0, 0, 1};
    double residual = 0.0;
    for (int s = 0; s < period; ++s) {
        M = map_jacobian(map, orbit.points[s]) * M;
        const Complex next = map.evaluate(orbit.points[s]);
        residual = std::max(residual, std::abs(next - orbit.points[(s + 1) % period]));
    }
    orbit.residual = residual;
    orbit.jacobian_det = M.det();
    auto eig = M.eigenvalues();
    orbit.mult1 = eig[0];
    orbit.mult2 = eig[1];

    const double tr = M.trace();
    const double det = M.det();
    const bool conservative = std::abs(det - 1.0) < 1e-9;
    if (std::abs(std::abs(tr) - 2.0) < 1e-8 && conservative) {
        orbit.kind = OrbitKind::Degenerate;
    } else if (conservative) {
        orbit.kind = std::abs(tr) < 2.0 ? OrbitKind::Elliptic : OrbitKind::SaddleMap;
    } else {
        const double disc = tr * tr - 4.0 * det;
        if (disc >= 0.0) {
            orbit.kind = OrbitKind::NonConsSaddle;
        } else {
            orbit.kind = det < 1.0 ? OrbitKind::SinkMap : OrbitKind::SourceMap;
        }
    }
    return orbit;
}

std::vector<PeriodicOrbit> find_periodic_orbits(const TruncatedSeries& map, int period,
                                                const SeedPolicy& cfg) {
    if (period < 1) throw DomainError("find_periodic_orbits: period must be positive");

    std::vector<Complex> seeds = cfg.informed;
    if (cfg.blind_grid) {
        const double lo = std::max(cfg.min_radius, 1e-8);
        const double hi = std::max(cfg.max_radius, lo * 2.0);
        for (int ir = 0; ir < cfg.blind_radii; ++ir) {
            const double rho =
                lo * std::pow(hi / lo, double(ir) / double(std::max(1, cfg.blind_radii - 1)));
            for (int ia = 0; ia < cfg.blind_angles; ++ia)
                seeds.push_back(std::polar(rho, 2.0 * kPi * double(ia) / double(cfg.blind_angles)));
        }
    }

    std::vector<PeriodicOrbit> orbits;
    for (Complex seed : seeds) {
        auto pts = newton_orbit(map, period, seed, cfg);
        if (!pts) continue;
        // Discard the trivial fixed point at the origin and escapees.
        double max_abs = 0.0;
        for (Complex p : *pts) max_abs = std::max(max_abs, std::abs(p));
        if (max_abs < 1e-6 || max_abs > cfg.search_radius) continue;
        bool duplicate = false;
        for (const PeriodicOrbit& known : orbits) {
            if (hausdorff(known.points, *pts) < cfg.dedup_tol) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        PeriodicOrbit orbit;
        orbit.points = std::move(*pts);
        orbits.push_back(classify_orbit(map, std::move(orbit)));
    }

    // Deterministic order: by angle of the lowest-angle point, then radius.
    auto anchor = [](const PeriodicOrbit& o) {
        double best_psi = 1e9, best_r = 0.0;
        for (Complex p : o.points) {
            double psi = std::arg(p);
            if (psi < 0.0) psi += 2.0 * kPi;
            if (psi < best_psi) {
                best_psi = psi;
                best_r = std::abs(p);
            }
        }
        return std::pair(best_psi, best_r);
    };
    std::sort(orbits.begin(), orbits.end(),
              [&](const PeriodicOrbit& a, const PeriodicOrbit& b) { return anchor(a) < anchor(b); });
    return orbits;
}

MapGarland symmetry_pairing(std::vector<PeriodicOrbit> orbits) {
    MapGarland g;
    const int n = int(orbits.size());
    auto transformed = [](const std::vector<Complex>& pts, bool central) {
        std::vector<Complex> out;
        out.reserve(pts.size());
        for (Complex p : pts) out.push_back(central ? -p : std::conj(p));
        return out;
    };
    for (int i = 0; i < n; ++i) {
        const auto central_img = transformed(orbits[i].points, true);
        const auto reversed_img = transformed(orbits[i].points, false);
        for (int j = 0; j < n; ++j) {
            if (orbits[i].central_partner < 0 && hausdorff(central_img, orbits[j].points) < 1e-7)
                orbits[i].central_partner = j;
            if (orbits[i].reversible_partner < 0 &&
                hausdorff(reversed_img, orbits[j].points) < 1e-7)
                orbits[i].reversible_partner = j;
        }
    }

    auto count_kind = [&](OrbitKind k) {
        return int(std::count_if(orbits.begin(), orbits.end(),
                                 [&](const PeriodicOrbit& o) { return o.kind == k; }));
    };
    const int n_saddle = count_kind(OrbitKind::SaddleMap);
    const int n_elliptic = count_kind(OrbitKind::Elliptic);
    const int n_sink = count_kind(OrbitKind::SinkMap);
    const int n_source = count_kind(OrbitKind::SourceMap);
    const int n_ncsaddle = count_kind(OrbitKind::NonConsSaddle);

    const bool centrally_closed = std::all_of(
        orbits.begin(), orbits.end(), [](const PeriodicOrbit& o) { return o.central_partner >= 0; });

    if (n == 4 && n_saddle == 2 && n_elliptic == 2 && centrally_closed) {
        g.label = MapGarlandLabel::G22_qq;
    } else if (n == 2 && n_saddle == 1 && n_elliptic == 1) {
        g.label = MapGarlandLabel::G11_qq;
    } else if (n == 4 && ((n_sink == 1 && n_source == 1) || n_ncsaddle == 2)) {
        g.label = MapGarlandLabel::G_prime_2q_q_q_map;
    } else {
        g.label = MapGarlandLabel::None;
        g.diagnostics = "unrecognized orbit census: " + std::to_string(n) + " orbits";
        if (n > 0 && !centrally_closed) g.diagnostics += " (central pairing incomplete)";
    }
    g.orbits = std::move(orbits);
    return g;
}

std::optional<double> fit_decay_order(const std::vector<double>& radii,
                                      const std::vector<double>& residuals, double floor_abs) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < radii.size() && i < residuals.size(); ++i) {
        if (residuals[i] > floor_abs && radii[i] > 0.0) {
            xs.push_back(std::log(radii[i]));
            ys.push_back(std::log(residuals[i]));
        }
    }
    if (xs.size() < 3) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

EmbeddingResidual embedding_residual(const TruncatedSeries& map_nf, const ResonanceSpec& spec,
                                     double radius_lo, double radius_hi, int n_radii,
                                     int points_per_radius, unsigned seed) {
    EmbeddingResidual out;
    const TruncatedSeries field = embed_rotated(map_nf, spec, false);
    const TruncatedSeries field_q = embed_rotated(map_nf, spec, true);
    // The rotated map g = map_nf o R_phi.
    const TruncatedSeries g = rotate_by_resonance(map_nf, spec);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);

    auto flow_rhs = [&](const TruncatedSeries& f) {
        return [&f](Complex z) { return f.evaluate(z); };
    };

    for (int ir = 0; ir < n_radii; ++ir) {
        const double rho =
            radius_lo * std::pow(radius_hi / radius_lo, double(ir) / double(n_radii - 1));
        double worst_rot = 0.0, worst_q = 0.0;
        for (int ip = 0; ip < points_per_radius; ++ip) {
            const Complex z = std::polar(rho, angle(rng));
            // f o R_phi vs the time-1 flow map.
            const Complex by_map = g.evaluate(z);
            const Complex by_flow =
                field.is_zero() ? z : DormandPrince54::endpoint(flow_rhs(field), z, 1.0, 1e-13);
            worst_rot = std::max(worst_rot, std::abs(by_map - by_flow));
            // f^q vs the time-1 map of the q-scaled flow.
            Complex wq = z;
            for (int s = 0; s < spec.q; ++s) wq = map_nf.evaluate(wq);
            const Complex by_flow_q =
                field_q.is_zero() ? z : DormandPrince54::endpoint(flow_rhs(field_q), z, 1.0, 1e-13);
            worst_q = std::max(worst_q, std::abs(wq - by_flow_q));
        }
        out.radii.push_back(rho);
        out.residual_rotated.push_back(worst_rot);
        out.residual_qth.push_back(worst_q);
    }

    const double floor_rot = 1e2 * std::numeric_limits<double>::epsilon() * radius_hi;
    out.order_rotated = fit_decay_order(out.radii, out.residual_rotated, floor_rot).value_or(0.0);
    out.order_qth = fit_decay_order(out.radii, out.residual_qth, floor_rot).value_or(0.0);
    // A linear map has no residual at all; report an exact zero marker.
    if (std::all_of(out.residual_rotated.begin(), out.residual_rotated.end(),
                    [&](double r) { return r <= floor_rot; })) {
        out.order_rotated = std::numeric_limits<double>::infinity();
    }
    if (std::all_of(out.residual_qth.begin(), out.residual_qth.end(),
                    [&](double r) { return r <= floor_rot; })) {
        out.order_qth = std::numeric_limits<double>::infinity();
    }
    return out;
}

TruncatedSeries map_from_flow(const FlowParams& params, const ResonanceSpec& spec, int degree) {
    if (params.q != spec.q) throw DomainError("map_from_flow: q mismatch between flow and spec");
    const TruncatedSeries field = flow_field_series(params, degree);
    const TruncatedSeries phi1 = time_one_map(field);
    // f = phi1 o R_{+2 pi p/q}: substitute z -> lambda z into phi1.
    TruncatedSeries::TermMap terms;
    for (const auto& [mk, c] : phi1.terms()) {
        const Complex phase = std::polar(1.0, 2.0 * kPi * double(spec.p) / double(spec.q) *
                                                  double(mk.m - mk.k));
        terms[mk] = c * phase;
    }
    return TruncatedSeries(degree, std::move(terms));
}

} // namespace garland
