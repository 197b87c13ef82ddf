#include "garland/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#include "garland/errors.hpp"

namespace garland {

namespace {

double lpf_mu2(const FlowParams& p, double mu1) {
    return 2.0 * p.alpha * std::pow(-mu1 / p.l1(), 0.5 * double(p.q));
}

int thread_budget() {
    if (const char* env = std::getenv("GARLAND_KIT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

/// Deterministic parallel map over [0, n): results land by index.
void parallel_for(int n, const std::function<void(int)>& body) {
    const int threads = std::min(thread_budget(), std::max(1, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

std::string to_string(RegionId id) {
    switch (id) {
        case RegionId::I: return "I";
        case RegionId::II: return "II";
        case RegionId::III: return "III";
        case RegionId::IV: return "IV";
    }
    return "?";
}

BifurcationCurve curve_Lpf(const FlowParams& params, const std::vector<double>& mu1_grid,
                           int branch, bool refine) {
    if (params.l1() == 0.0 || params.alpha == 0.0)
        throw DomainError("curve_Lpf: requires l1 != 0 and alpha != 0");
    BifurcationCurve curve;
    curve.name = params.model == FlowModel::ReversibleNonCons ? "L_pf_reversible" : "L_pf";
    curve.branch = branch >= 0 ? +1 : -1;
    curve.analytic = !refine;
    for (double mu1 : mu1_grid) {
        if (mu1 * params.l1() >= 0.0) continue; // no pitchfork on this side
        double mu2 = double(curve.branch) * std::abs(lpf_mu2(params, mu1));
        if (refine) {
            FlowParams a = params, b = params;
            a.mu1 = b.mu1 = mu1;
            a.mu2 = 0.25 * mu2;
            b.mu2 = 2.0 * mu2;
            auto found = pitchfork_scan(a, b, 32, 1e-10);
            if (found.size() == 1 && !found.front().inconclusive) mu2 = found.front().mu2;
        }
        curve.samples.push_back({mu1, mu2});
    }
    return curve;
}

RegionSample classify_region(double mu1, double mu2, const FlowParams& base) {
    FlowParams p = base;
    p.mu1 = mu1;
    p.mu2 = mu2;
    if (p.model == FlowModel::Symmetric && mu2 != 0.0)
        p.model = FlowModel::SymBreakConservative;

    RegionSample s;
    s.mu1 = mu1;
    s.mu2 = mu2;

    std::vector<Equilibrium> eqs;
    try {
        eqs = find_equilibria(p);
    } catch (const SolverError&) {
        eqs.clear();
    }
    const Garland g = assemble_garland(eqs, p);
    s.label = g.label;
    s.n_equilibria = int(eqs.size());
    for (const Equilibrium& e : eqs) {
        switch (e.kind) {
            case EqKind::Saddle: ++s.n_saddle; break;
            case EqKind::Center: ++s.n_center; break;
            case EqKind::StableFocus:
            case EqKind::UnstableFocus: ++s.n_focus; break;
            default: break;
        }
        if (e.symmetry == EqSymmetry::NonSymmetric) ++s.n_non_symmetric;
    }

    // Region id from the census (ground truth).
    const int q = p.q;
    if (s.n_equilibria == 0)
        s.id = RegionId::I;
    else if (s.n_equilibria == 4 * q)
        s.id = RegionId::III;
    else
        s.id = mu2 >= 0.0 ? RegionId::II : RegionId::IV;

    // Position relative to the leading-order curves, as a cross-check.
    RegionId positional;
    const double l1 = p.l1();
    if (mu1 * l1 >= 0.0) {
        positional = RegionId::I;
    } else {
        const double edge = std::abs(lpf_mu2(p, mu1));
        if (std::abs(mu2) < edge)
            positional = RegionId::III;
        else
            positional = mu2 >= 0.0 ? RegionId::II : RegionId::IV;
        // Boundary tube: 5% of the local curve height around L_pf, and a thin
        // band around L_pq (mu1 = 0).
        if (std::abs(std::abs(mu2) - edge) < 0.05 * edge) s.boundary = true;
    }
    if (std::abs(mu1) < 1e-12) s.boundary = true;
    s.census_position_mismatch = positional != s.id;
    return s;
}

Atlas atlas_sweep(const AtlasWindow& window, int resolution, const FlowParams& base) {
    if (resolution < 1 || resolution > 512)
        throw DomainError("atlas_sweep: resolution must be in 1..512");
    Atlas atlas;
    atlas.window = window;
    atlas.resolution = resolution;
    atlas.grid.resize(std::size_t(resolution) * resolution);

    const double dx = (window.mu1_max - window.mu1_min) / double(resolution);
    const double dy = (window.mu2_max - window.mu2_min) / double(resolution);

    parallel_for(resolution * resolution, [&](int idx) {
        const int j = idx / resolution; // mu2 index
        const int i = idx % resolution; // mu1 index
        const double mu1 = window.mu1_min + (i + 0.5) * dx;
        const double mu2 = window.mu2_min + (j + 0.5) * dy;
        atlas.grid[idx] = classify_region(mu1, mu2, base);
    });

    // Analytic curves over the window.
    std::vector<double> mu1_grid;
    for (int i = 0; i < 128; ++i) mu1_grid.push_back(window.mu1_min + (i + 0.5) *
                                                     (window.mu1_max - window.mu1_min) / 128.0);
    for (int branch : {+1, -1}) {
        BifurcationCurve c = curve_Lpf(base, mu1_grid, branch, false);
        if (!c.samples.empty()) atlas.curves.push_back(std::move(c));
    }
    BifurcationCurve lpq;
    lpq.name = "L_pq";
    lpq.branch = 0;
    for (int j = 0; j <= 32; ++j)
        lpq.samples.push_back({0.0, window.mu2_min + j * (window.mu2_max - window.mu2_min) / 32.0});
    atlas.curves.push_back(std::move(lpq));

    // One representative sample per region id, first encountered in grid order.
    for (const RegionSample& s : atlas.grid) {
        if (s.boundary) continue;
        const bool seen = std::any_of(atlas.representatives.begin(), atlas.representatives.end(),
                                      [&](const RegionSample& r) { return r.id == s.id; });
        if (!seen) atlas.representatives.push_back(s);
    }

    // Empirical branch-to-family report: which symmetric axis pitchforks on the
    // positive branch (depends on sign(alpha); recorded instead of hard-coded).
    {
        const double mu1_probe = base.l1() > 0.0 ? -std::abs(window.mu1_max) * 0.5
                                                 : std::abs(window.mu1_max) * 0.5;
        FlowParams a = base, b = base;
        a.mu1 = b.mu1 = mu1_probe;
        const double edge = std::abs(lpf_mu2(base, mu1_probe));
        a.mu2 = 0.25 * edge;
        b.mu2 = 2.0 * edge;
        try {
            auto points = pitchfork_scan(a, b, 16, 1e-9);
            if (points.size() == 1) {
                atlas.positive_branch_axis = points.front().psi_axis;
                atlas.positive_branch_axis_known = true;
            }
        } catch (const SolverError&) {
        }
    }

    // Heuristic heteroclinic band: conservative region-III samples where the
    // two saddle families sit on (nearly) the same Hamiltonian level.
    if (base.model != FlowModel::ReversibleNonCons) {
        for (const RegionSample& s : atlas.grid) {
            if (s.id != RegionId::III || s.boundary) continue;
            FlowParams p = base;
            p.mu1 = s.mu1;
            p.mu2 = s.mu2;
            if (p.model == FlowModel::Symmetric && s.mu2 != 0.0)
                p.model = FlowModel::SymBreakConservative;
            std::vector<double> levels;
            try {
                for (const Equilibrium& e : find_equilibria(p))
                    if (e.kind == EqKind::Saddle) levels.push_back(hamiltonian(p, e.state));
            } catch (const SolverError&) {
                continue;
            }
            if (levels.size() < 2) continue;
            const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
            const double gap = *hi - *lo;
            const double scale = std::max(std::abs(*hi), std::abs(*lo));
            if (gap < 0.02 * std::max(scale, 1e-300))
                atlas.heteroclinic_band.push_back({s.mu1, s.mu2, gap});
        }
    }
    return atlas;
}

} // namespace garland
