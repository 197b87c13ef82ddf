#ifndef GARLAND_ATLAS_HPP
#define GARLAND_ATLAS_HPP

#include <string>
#include <vector>

#include "garland/equilibria.hpp"
#include "garland/flow.hpp"

namespace garland {

enum class RegionId { I, II, III, IV };
std::string to_string(RegionId id);

/// Rectangle in the (mu1, mu2) plane.
struct AtlasWindow {
    double mu1_min = -0.02, mu1_max = 0.02;
    double mu2_min = -0.02, mu2_max = 0.02;
};

/// Census of one parameter point.
struct RegionSample {
    double mu1 = 0.0, mu2 = 0.0;
    RegionId id = RegionId::I;
    bool boundary = false;                 // inside the tube around a curve
    bool census_position_mismatch = false; // census and curve side disagree
    int n_equilibria = 0;
    int n_saddle = 0, n_center = 0, n_focus = 0;
    int n_non_symmetric = 0;
    GarlandLabel label = GarlandLabel::None;
};

struct BifurcationCurve {
    std::string name;  // "L_pf", "L_pq", "L_pf_reversible"
    int branch = +1;   // sign of the mu2 branch
    std::vector<std::pair<double, double>> samples; // (mu1, mu2)
    bool analytic = true;
};

/// Leading-order pitchfork branch mu2 = branch * 2 alpha (-mu1/l1)^{q/2} over
/// the mu1 grid.  Grid points with mu1 l1 >= 0 are skipped.  With `refine`,
/// each sample is polished by a pitchfork_scan in mu2 and `analytic` is
/// cleared.
BifurcationCurve curve_Lpf(const FlowParams& params, const std::vector<double>& mu1_grid,
                           int branch, bool refine = false);

/// Classifies one (mu1, mu2) point by its equilibrium census, with the
/// curve-side position as a cross-check only.
RegionSample classify_region(double mu1, double mu2, const FlowParams& base);

/// Pair of saddle indices whose Hamiltonian levels coincide; heuristic
/// stand-in for a heteroclinic connection in the conservative model.
struct HeteroclinicHint {
    double mu1 = 0.0, mu2 = 0.0;
    double level_gap = 0.0;
};

struct Atlas {
    AtlasWindow window;
    int resolution = 0;
    std::vector<RegionSample> grid; // row-major, mu2 outer, mu1 inner
    std::vector<BifurcationCurve> curves;
    std::vector<RegionSample> representatives; // one per region encountered
    std::vector<HeteroclinicHint> heteroclinic_band; // heuristic, no threshold
    /// Empirical branch-to-family assignment: axis angle pitchforked by the
    /// positive-mu2 branch (reported, not hard-coded).
    double positive_branch_axis = 0.0;
    bool positive_branch_axis_known = false;
};

/// Cell-centered grid sweep; deterministic for fixed inputs.
/// resolution <= 512.
Atlas atlas_sweep(const AtlasWindow& window, int resolution, const FlowParams& base);

} // namespace garland

#endif
