#ifndef GARLAND_EQUILIBRIA_HPP
#define GARLAND_EQUILIBRIA_HPP

#include <optional>
#include <string>
#include <vector>

#include "garland/flow.hpp"

namespace garland {

enum class EqKind { Saddle, Center, StableFocus, UnstableFocus, Degenerate };
enum class EqSymmetry { CentrallySymmetricAxis, NonSymmetric };

std::string to_string(EqKind kind);
std::string to_string(EqSymmetry sym);

struct Equilibrium {
    PolarState state;
    Complex eig1, eig2;
    EqKind kind = EqKind::Degenerate;
    double divergence = 0.0;
    EqSymmetry symmetry = EqSymmetry::NonSymmetric; // on a line psi = k pi/q
    bool reversibly_symmetric = false;              // on a line psi = k pi/(2q)
    double residual = 0.0;                          // scaled polar-field norm
};

/// Newton solve settings shared by the equilibrium machinery.
struct NewtonSettings {
    double tol = 1e-12;       // scaled residual
    int max_iterations = 50;
    double dedup_radius = 1e-7;
    double angle_tol = 1e-6;  // symmetry-axis assignment
};

/// All nonzero equilibria with r in (0, validity radius), classified and
/// sorted by (psi, r).  Grid-seeded Newton on the polar field with the
/// analytic Jacobian.  Throws SolverError when mu1 l1 < 0 promises
/// equilibria but none converge.
std::vector<Equilibrium> find_equilibria(const FlowParams& params,
                                         const NewtonSettings& settings = {});

/// Fills eigenvalues, kind, divergence and symmetry tags of a located root.
Equilibrium classify(const FlowParams& params, Equilibrium e,
                     const NewtonSettings& settings = {});

enum class GarlandLabel { G_qq, G_2q2q, G_prime_2q_q_q, None };
std::string to_string(GarlandLabel label);

struct Garland {
    std::vector<Equilibrium> equilibria;
    GarlandLabel label = GarlandLabel::None;
    /// Index pairs under z -> -z (psi -> psi + pi).
    std::vector<std::pair<int, int>> central_pairs;
    /// Index pairs under z -> z* (psi -> -psi).
    std::vector<std::pair<int, int>> reversible_pairs;
    /// Largest deviation of consecutive-psi spacing from the uniform value.
    double max_spacing_dev = 0.0;
    std::string diagnostics;
};

/// Sorts by psi, checks alternation/spacing/symmetry pairing and assigns the
/// garland label (None with diagnostics when no pattern matches).
Garland assemble_garland(std::vector<Equilibrium> equilibria, const FlowParams& params);

/// One detected pitchfork along a linear parameter path.
struct PitchforkPoint {
    double t = 0.0;           // path parameter in [0, 1]
    double mu1 = 0.0, mu2 = 0.0;
    double psi_axis = 0.0;    // symmetric axis whose equilibrium changes kind
    EqKind kind_before = EqKind::Degenerate;
    EqKind kind_after = EqKind::Degenerate;
    bool supercritical = false;
    bool inconclusive = false;
    /// Divergences of the newborn non-symmetric pair (reversible case).
    std::vector<double> newborn_divergences;
};

/// Interpolates params linearly from `a` to `b` (same model/q required).
FlowParams lerp_params(const FlowParams& a, const FlowParams& b, double t);

/// Bisects kind/count changes of symmetric-axis equilibria along the path
/// a -> b.  Points where the census changes within `t_tol` of an endpoint are
/// flagged inconclusive.
std::vector<PitchforkPoint> pitchfork_scan(const FlowParams& a, const FlowParams& b,
                                           int coarse_steps = 64, double t_tol = 1e-9,
                                           const NewtonSettings& settings = {});

} // namespace garland

#endif
