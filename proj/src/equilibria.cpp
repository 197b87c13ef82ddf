#include "garland/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "garland/errors.hpp"

namespace garland {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double psi) {
    psi = std::fmod(psi, 2.0 * kPi);
    return psi < 0.0 ? psi + 2.0 * kPi : psi;
}

/// Signed angular distance folded into (-pi, pi].
double angle_diff(double a, double b) {
    double d = std::fmod(a - b, 2.0 * kPi);
    if (d > kPi) d -= 2.0 * kPi;
    if (d <= -kPi) d += 2.0 * kPi;
    return d;
}

/// Distance of psi to the nearest multiple of step.
double dist_to_grid(double psi, double step) {
    const double ratio = psi / step;
    return std::abs(ratio - std::round(ratio)) * step;
}

double scaled_residual(const FlowParams& params, const PolarState& s) {
    auto [dr, dpsi] = vector_field_polar(params, s);
    const double rs = std::max(s.r, 1e-300);
    return std::hypot(dr / (2.0 * rs), dpsi);
}

/// Newton iteration on the polar field; returns the converged state.
std::optional<PolarState> newton_polar(const FlowParams& params, PolarState s,
                                       const NewtonSettings& cfg) {
    const double r_max = params.validity_radius * params.validity_radius;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        if (!(s.r > 0.0) || s.r > 4.0 * r_max) return std::nullopt;
        auto [dr, dpsi] = vector_field_polar(params, s);
        if (scaled_residual(params, s) < cfg.tol) {
            s.psi = wrap_angle(s.psi);
            return s;
        }
        Mat2 J = polar_jacobian(params, s);
        std::array<double, 2> step;
        try {
            step = J.solve(-dr, -dpsi);
        } catch (const SolverError&) {
            return std::nullopt;
        }
        // Keep r positive by damping, not projection.
        double damp = 1.0;
        while (s.r + damp * step[0] <= 0.0 && damp > 1e-6) damp *= 0.5;
        s.r += damp * step[0];
        s.psi += damp * step[1];
    }
    return std::nullopt;
}

/// Positive radius candidates for the symmetric families: roots in x = sqrt(r)
/// of l1 x^2 + sigma mu2 x + mu1 = 0, plus -mu1/l1 multiples.
std::vector<double> radius_seeds(const FlowParams& params) {
    std::vector<double> seeds;
    const double l1 = params.l1();
    auto push = [&](double r) {
        const double r_max = params.validity_radius * params.validity_radius;
        if (r > 1e-14 && r < 2.0 * r_max) seeds.push_back(r);
    };
    for (double sigma : {1.0, -1.0}) {
        const double a = l1, b = sigma * params.mu2, c = params.mu1;
        if (a == 0.0) continue;
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) continue;
        const double sq = std::sqrt(disc);
        for (double x : {(-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)})
            if (x > 0.0) push(x * x);
    }
    if (l1 != 0.0 && params.mu1 / l1 < 0.0) {
        const double base = -params.mu1 / l1;
        for (double f : {0.5, 1.0, 1.5}) push(f * base);
    }
    // Generic fallback radii keep the search honest when no closed-form seed exists.
    const double r_max = params.validity_radius * params.validity_radius;
    for (double f : {0.05, 0.2, 0.6}) push(f * r_max);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                seeds.end());
    return seeds;
}

std::vector<double> angle_seeds(const FlowParams& params, double r) {
    const int q = params.q;
    std::vector<double> angles;
    const int n_uniform = std::max(4 * q + 8, 12 * q);
    for (int i = 0; i < n_uniform; ++i) angles.push_back(2.0 * kPi * double(i) / double(n_uniform));
    // Symmetric axes psi = k pi / q.
    for (int k = 0; k < 2 * q; ++k) angles.push_back(kPi * double(k) / double(q));
    // Roots of mu2 + 2 alpha r^{q/2} cos(q psi) = 0 when they exist.
    if (params.alpha != 0.0) {
        const double c = -params.mu2 / (2.0 * params.alpha * std::pow(r, 0.5 * double(q)));
        if (std::abs(c) <= 1.0) {
            const double base = std::acos(c);
            for (int k = 0; k < q; ++k) {
                angles.push_back((base + 2.0 * kPi * k) / double(q));
                angles.push_back((-base + 2.0 * kPi * k) / double(q));
            }
        }
    }
    for (double& a : angles) a = wrap_angle(a);
    return angles;
}

} // namespace

std::string to_string(EqKind kind) {
    switch (kind) {
        case EqKind::Saddle: return "saddle";
        case EqKind::Center: return "center";
        case EqKind::StableFocus: return "stable_focus";
        case EqKind::UnstableFocus: return "unstable_focus";
        case EqKind::Degenerate: return "degenerate";
    }
    return "?";
}

std::string to_string(EqSymmetry sym) {
    return sym == EqSymmetry::CentrallySymmetricAxis ? "centrally_symmetric" : "non_symmetric";
}

std::string to_string(GarlandLabel label) {
    switch (label) {
        case GarlandLabel::G_qq: return "G_qq";
        case GarlandLabel::G_2q2q: return "G_2q2q";
        case GarlandLabel::G_prime_2q_q_q: return "G_prime_2q_q_q";
        case GarlandLabel::None: return "none";
    }
    return "?";
}

Equilibrium classify(const FlowParams& params, Equilibrium e, const NewtonSettings& cfg) {
    if (scaled_residual(params, e.state) > 1e3 * cfg.tol)
        throw SolverError("classify: state is not an equilibrium at the requested tolerance");

    const Mat2 J = polar_jacobian(params, e.state);
    auto eig = J.eigenvalues();
    e.eig1 = eig[0];
    e.eig2 = eig[1];
    e.divergence = divergence(params, e.state.to_complex());
    e.residual = scaled_residual(params, e.state);

    const double tr = J.trace();
    const double det = J.det();
    const double eig_scale = std::sqrt(std::abs(det)) + std::abs(tr);
    const double degeneracy = 1e-14 * std::max(1.0, J.a11 * J.a11 + J.a12 * J.a12 +
                                                        J.a21 * J.a21 + J.a22 * J.a22);
    if (std::abs(det) < degeneracy && tr * tr < degeneracy) {
        e.kind = EqKind::Degenerate;
    } else if (std::abs(tr) < 1e-9 * std::max(eig_scale, 1e-300)) {
        // Conservative pair: lambda^2 = -det.
        e.kind = det < 0.0 ? EqKind::Saddle : EqKind::Center;
    } else if (tr * tr - 4.0 * det >= 0.0) {
        e.kind = det < 0.0 ? EqKind::Saddle : (tr < 0.0 ? EqKind::StableFocus
                                                        : EqKind::UnstableFocus);
    } else {
        e.kind = tr < 0.0 ? EqKind::StableFocus : EqKind::UnstableFocus;
    }

    const int q = params.q;
    e.symmetry = dist_to_grid(e.state.psi, kPi / double(q)) < cfg.angle_tol
                     ? EqSymmetry::CentrallySymmetricAxis
                     : EqSymmetry::NonSymmetric;
    e.reversibly_symmetric = dist_to_grid(e.state.psi, kPi / double(2 * q)) < cfg.angle_tol;
    return e;
}

std::vector<Equilibrium> find_equilibria(const FlowParams& params, const NewtonSettings& cfg) {
    params.validate();
    if (params.l1() == 0.0 || params.alpha == 0.0)
        throw DomainError("find_equilibria: nondegeneracy requires l1 != 0 and alpha != 0");

    const double r_max = params.validity_radius * params.validity_radius;
    std::vector<PolarState> roots;
    double best_residual = std::numeric_limits<double>::infinity();

    for (double r0 : radius_seeds(params)) {
        for (double psi0 : angle_seeds(params, r0)) {
            auto converged = newton_polar(params, {r0, psi0}, cfg);
            if (!converged) {
                best_residual = std::min(best_residual, scaled_residual(params, {r0, psi0}));
                continue;
            }
            if (!(converged->r > 0.0) || converged->r >= r_max) continue;
            const double rbar = converged->r;
            bool duplicate = false;
            for (const PolarState& known : roots) {
                const double dpsi = angle_diff(known.psi, converged->psi);
                const double d = std::hypot(known.r - converged->r, rbar * dpsi);
                if (d < cfg.dedup_radius) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) roots.push_back(*converged);
        }
    }

    if (roots.empty() && params.mu1 * params.l1() < 0.0) {
        std::ostringstream os;
        os << "find_equilibria: no Newton seed converged although mu1*l1 = "
           << params.mu1 * params.l1() << " < 0 promises a garland; best scaled residual "
           << best_residual;
        throw SolverError(os.str());
    }

    std::sort(roots.begin(), roots.end(), [](const PolarState& a, const PolarState& b) {
        if (a.psi != b.psi) return a.psi < b.psi;
        return a.r < b.r;
    });

    std::vector<Equilibrium> out;
    out.reserve(roots.size());
    for (const PolarState& s : roots) out.push_back(classify(params, Equilibrium{s}, cfg));
    return out;
}

Garland assemble_garland(std::vector<Equilibrium> equilibria, const FlowParams& params) {
    Garland g;
    std::sort(equilibria.begin(), equilibria.end(), [](const Equilibrium& a, const Equilibrium& b) {
        return a.state.psi < b.state.psi;
    });
    g.equilibria = std::move(equilibria);
    const int n = int(g.equilibria.size());
    const int q = params.q;

    if (n == 0) {
        g.label = GarlandLabel::None;
        g.diagnostics = "no equilibria";
        return g;
    }

    // Pairings under the central and reversible symmetries.
    auto find_partner = [&](int i, double target_psi, double target_r) -> int {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Equilibrium& e = g.equilibria[j];
            if (std::abs(e.state.r - target_r) < 1e-7 &&
                std::abs(angle_diff(e.state.psi, target_psi)) < 1e-6)
                return j;
        }
        return -1;
    };
    for (int i = 0; i < n; ++i) {
        const auto& s = g.equilibria[i].state;
        const int pc = find_partner(i, wrap_angle(s.psi + kPi), s.r);
        if (pc > i) g.central_pairs.push_back({i, pc});
        const int pr = find_partner(i, wrap_angle(-s.psi), s.r);
        if (pr > i) g.reversible_pairs.push_back({i, pr});
        else if (pr == -1 && dist_to_grid(s.psi, kPi / double(q)) < 1e-6)
            g.reversible_pairs.push_back({i, i}); // fixed by the involution
    }

    // Spacing statistics in psi.
    if (n >= 2) {
        const double uniform = 2.0 * kPi / double(n);
        for (int i = 0; i < n; ++i) {
            const double next = g.equilibria[(i + 1) % n].state.psi + (i + 1 == n ? 2.0 * kPi : 0.0);
            g.max_spacing_dev =
                std::max(g.max_spacing_dev, std::abs(next - g.equilibria[i].state.psi - uniform));
        }
    }

    auto count_kind = [&](EqKind kind) {
        return int(std::count_if(g.equilibria.begin(), g.equilibria.end(),
                                 [&](const Equilibrium& e) { return e.kind == kind; }));
    };
    const int n_saddle = count_kind(EqKind::Saddle);
    const int n_center = count_kind(EqKind::Center);
    const int n_sfocus = count_kind(EqKind::StableFocus);
    const int n_ufocus = count_kind(EqKind::UnstableFocus);
    double max_div = 0.0;
    for (const Equilibrium& e : g.equilibria) max_div = std::max(max_div, std::abs(e.divergence));

    auto alternating = [&](EqKind a, EqKind b) {
        for (int i = 0; i < n; ++i) {
            const EqKind expect = (g.equilibria[0].kind == a) == (i % 2 == 0) ? a : b;
            if (g.equilibria[i].kind != expect) return false;
        }
        return true;
    };

    if (n == 4 * q && n_saddle == 2 * q && n_center == 2 * q && max_div < 1e-10 &&
        alternating(EqKind::Saddle, EqKind::Center)) {
        g.label = GarlandLabel::G_2q2q;
    } else if (n == 2 * q && n_saddle == q && n_center == q &&
               std::all_of(g.equilibria.begin(), g.equilibria.end(), [&](const Equilibrium& e) {
                   return e.symmetry == EqSymmetry::CentrallySymmetricAxis;
               })) {
        g.label = GarlandLabel::G_qq;
    } else if (n == 4 * q &&
               ((n_saddle == 2 * q && n_sfocus == q && n_ufocus == q) ||
                (n_center == 2 * q && n_saddle == 2 * q))) {
        // Reversible non-conservative garland: 2q conservative symmetric
        // equilibria plus q non-conservative pairs.
        const int n_symmetric =
            int(std::count_if(g.equilibria.begin(), g.equilibria.end(), [&](const Equilibrium& e) {
                return e.symmetry == EqSymmetry::CentrallySymmetricAxis;
            }));
        bool paired_divergence = true;
        for (auto [i, j] : g.reversible_pairs) {
            if (i == j) continue;
            if (std::abs(g.equilibria[i].divergence + g.equilibria[j].divergence) > 1e-10)
                paired_divergence = false;
        }
        if (n_symmetric == 2 * q && paired_divergence) {
            g.label = GarlandLabel::G_prime_2q_q_q;
        } else {
            g.label = GarlandLabel::None;
            g.diagnostics = "4q equilibria without the reversible pairing pattern";
        }
    } else {
        g.label = GarlandLabel::None;
        std::ostringstream os;
        os << "unrecognized census: " << n << " equilibria (" << n_saddle << " saddles, "
           << n_center << " centers, " << n_sfocus << "+" << n_ufocus << " foci)";
        g.diagnostics = os.str();
    }
    return g;
}

FlowParams lerp_params(const FlowParams& a, const FlowParams& b, double t) {
    if (a.model != b.model || a.q != b.q)
        throw DomainError("lerp_params: endpoints must share model and q");
    FlowParams p = a;
    p.mu1 = a.mu1 + t * (b.mu1 - a.mu1);
    p.mu2 = a.mu2 + t * (b.mu2 - a.mu2);
    p.alpha = a.alpha + t * (b.alpha - a.alpha);
    p.theta = a.theta + t * (b.theta - a.theta);
    p.A = a.A + t * (b.A - a.A);
    p.B = a.B + t * (b.B - a.B);
    const std::size_t nl = std::max(a.phi.size(), b.phi.size());
    p.phi.assign(nl, 0.0);
    for (std::size_t i = 0; i < nl; ++i) {
        const double la = i < a.phi.size() ? a.phi[i] : 0.0;
        const double lb = i < b.phi.size() ? b.phi[i] : 0.0;
        p.phi[i] = la + t * (lb - la);
    }
    return p;
}

namespace {

/// Census signature used to detect pitchforks: kind of the equilibrium on
/// each symmetric axis (or -1 when absent) plus the total count.
struct AxisCensus {
    std::vector<int> axis_kind;
    int total = 0;
    bool operator==(const AxisCensus&) const = default;
};

AxisCensus axis_census(const FlowParams& params, const NewtonSettings& cfg) {
    AxisCensus c;
    const int q = params.q;
    std::vector<Equilibrium> eqs;
    try {
        eqs = find_equilibria(params, cfg);
    } catch (const SolverError&) {
        c.total = -1;
        return c;
    }
    c.total = int(eqs.size());
    c.axis_kind.assign(2 * q, -1);
    for (const Equilibrium& e : eqs) {
        const double step = kPi / double(q);
        const double ratio = e.state.psi / step;
        if (std::abs(ratio - std::round(ratio)) * step < cfg.angle_tol) {
            const int k = int(std::round(ratio)) % (2 * q);
            c.axis_kind[(k + 2 * q) % (2 * q)] = int(e.kind);
        }
    }
    return c;
}

std::vector<double> newborn_divergences(const FlowParams& params, const NewtonSettings& cfg,
                                        double psi_axis) {
    std::vector<double> out;
    for (const Equilibrium& e : find_equilibria(params, cfg)) {
        if (e.symmetry == EqSymmetry::NonSymmetric &&
            std::abs(angle_diff(e.state.psi, psi_axis)) < 2.0 * kPi / double(4 * params.q))
            out.push_back(e.divergence);
    }
    return out;
}

} // namespace

std::vector<PitchforkPoint> pitchfork_scan(const FlowParams& a, const FlowParams& b,
                                           int coarse_steps, double t_tol,
                                           const NewtonSettings& cfg) {
    std::vector<PitchforkPoint> points;
    std::vector<double> grid(coarse_steps + 1);
    std::vector<AxisCensus> census(coarse_steps + 1);
    for (int i = 0; i <= coarse_steps; ++i) {
        grid[i] = double(i) / double(coarse_steps);
        census[i] = axis_census(lerp_params(a, b, grid[i]), cfg);
    }

    for (int i = 0; i < coarse_steps; ++i) {
        if (census[i] == census[i + 1]) continue;
        double lo = grid[i], hi = grid[i + 1];
        AxisCensus clo = census[i];
        while (hi - lo > t_tol) {
            const double mid = 0.5 * (lo + hi);
            const AxisCensus cm = axis_census(lerp_params(a, b, mid), cfg);
            if (cm == clo)
                lo = mid;
            else
                hi = mid;
        }
        const double t_star = 0.5 * (lo + hi);
        const FlowParams at = lerp_params(a, b, t_star);

        PitchforkPoint pt;
        pt.t = t_star;
        pt.mu1 = at.mu1;
        pt.mu2 = at.mu2;
        pt.inconclusive = t_star < 4.0 * t_tol || t_star > 1.0 - 4.0 * t_tol;

        // Which axis changed, and on which side the extra pair lives.
        const AxisCensus& before = census[i];
        const AxisCensus& after = census[i + 1];
        int axis = -1;
        for (std::size_t k = 0; k < before.axis_kind.size() && k < after.axis_kind.size(); ++k) {
            if (before.axis_kind[k] != after.axis_kind[k]) {
                axis = int(k);
                break;
            }
        }
        if (axis >= 0) {
            pt.psi_axis = kPi * double(axis) / double(at.q);
            pt.kind_before = EqKind(before.axis_kind[axis]);
            pt.kind_after = EqKind(after.axis_kind[axis]);
            const bool pair_after = after.total > before.total;
            const EqKind on_pair_side = pair_after ? pt.kind_after : pt.kind_before;
            pt.supercritical = on_pair_side == EqKind::Saddle;
            const double t_probe = pair_after ? std::min(1.0, t_star + 64.0 * t_tol)
                                              : std::max(0.0, t_star - 64.0 * t_tol);
            try {
                pt.newborn_divergences =
                    newborn_divergences(lerp_params(a, b, t_probe), cfg, pt.psi_axis);
            } catch (const SolverError&) {
            }
        } else {
            pt.inconclusive = true;
        }
        points.push_back(pt);
    }
    return points;
}

} // namespace garland
