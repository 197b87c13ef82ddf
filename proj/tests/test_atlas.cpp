#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "garland/atlas.hpp"
#include "garland/errors.hpp"

using namespace garland;

namespace {

FlowParams base_model(double l1 = 1.0, double alpha = 1.0) {
    FlowParams p;
    p.model = FlowModel::SymBreakConservative;
    p.q = 3;
    p.phi = {l1, 0.0};
    p.alpha = alpha;
    return p;
}

} // namespace

TEST_CASE("curve_Lpf matches the leading-order formula and its homogeneity") {
    const auto p = base_model();
    const std::vector<double> grid = {-0.01};
    const auto up = curve_Lpf(p, grid, +1);
    REQUIRE(up.samples.size() == 1);
    CHECK(up.samples[0].second == doctest::Approx(2.0e-3).epsilon(1e-12));
    const auto down = curve_Lpf(p, grid, -1);
    CHECK(down.samples[0].second == doctest::Approx(-2.0e-3).epsilon(1e-12));

    // alpha -> 2 alpha doubles the curve
    const auto p2 = base_model(1.0, 2.0);
    const auto up2 = curve_Lpf(p2, grid, +1);
    CHECK(up2.samples[0].second == doctest::Approx(4.0e-3).epsilon(1e-12));

    // grid points with mu1 l1 >= 0 are skipped
    const auto skipped = curve_Lpf(p, {+0.01, -0.01}, +1);
    CHECK(skipped.samples.size() == 1);
}

TEST_CASE("refined curve stays within 10% of the analytic branch") {
    const auto p = base_model();
    const std::vector<double> grid = {-0.01, -0.005};
    const auto refined = curve_Lpf(p, grid, +1, true);
    CHECK_FALSE(refined.analytic);
    REQUIRE(refined.samples.size() == 2);
    for (const auto& [mu1, mu2] : refined.samples) {
        const double analytic = 2.0 * std::pow(-mu1, 1.5);
        CHECK(std::abs(mu2 - analytic) / analytic < 0.1);
    }
}

TEST_CASE("classify_region censuses match the three-region structure") {
    const auto p = base_model();
    SUBCASE("mu1 l1 > 0 is region I with an empty census") {
        const RegionSample s = classify_region(+0.01, 0.0, p);
        CHECK(s.id == RegionId::I);
        CHECK(s.n_equilibria == 0);
    }
    SUBCASE("beyond the wedge: G_qq with q saddles and q centers") {
        for (double mu2 : {+4e-3, -4e-3}) {
            const RegionSample s = classify_region(-0.01, mu2, p);
            CHECK(s.id == (mu2 > 0 ? RegionId::II : RegionId::IV));
            CHECK(s.n_equilibria == 6);
            CHECK(s.n_saddle == 3);
            CHECK(s.n_center == 3);
            CHECK(s.label == GarlandLabel::G_qq);
        }
    }
    SUBCASE("inside the wedge: 4q equilibria") {
        const RegionSample s = classify_region(-0.01, 0.0, p);
        CHECK(s.id == RegionId::III);
        CHECK(s.n_equilibria == 12);
        CHECK(s.label == GarlandLabel::G_2q2q);
    }
}

TEST_CASE("atlas 64x64 over the default window has exactly four regions") {
    const Atlas atlas = atlas_sweep({}, 64, base_model());
    REQUIRE(atlas.grid.size() == 64 * 64);
    std::set<RegionId> seen;
    int region1_nonempty = 0;
    for (const RegionSample& s : atlas.grid) {
        seen.insert(s.id);
        if (s.id == RegionId::I && s.n_equilibria != 0) ++region1_nonempty;
    }
    CHECK(seen.size() == 4);
    CHECK(region1_nonempty == 0);

    SUBCASE("census agrees with curve-side position away from the boundary tubes") {
        for (const RegionSample& s : atlas.grid)
            if (!s.boundary) CHECK_FALSE(s.census_position_mismatch);
    }
    SUBCASE("region id is constant between non-boundary neighbors of the same side") {
        for (int j = 0; j < 64; ++j)
            for (int i = 0; i + 1 < 64; ++i) {
                const RegionSample& a = atlas.grid[j * 64 + i];
                const RegionSample& b = atlas.grid[j * 64 + i + 1];
                if (a.boundary || b.boundary) continue;
                // Same side of both curves: same sign of mu1 and same wedge side.
                if (a.mu1 * b.mu1 < 0.0) continue;
                auto side = [](const RegionSample& s) {
                    if (s.mu1 > 0.0) return 0;
                    const double edge = 2.0 * std::pow(-s.mu1, 1.5);
                    return std::abs(s.mu2) < edge ? 1 : (s.mu2 > 0 ? 2 : 3);
                };
                if (side(a) == side(b)) CHECK(a.id == b.id);
            }
    }
    SUBCASE("the two analytic branches are mirror images") {
        REQUIRE(atlas.curves.size() >= 2);
        const auto& up = atlas.curves[0];
        const auto& down = atlas.curves[1];
        REQUIRE(up.samples.size() == down.samples.size());
        for (std::size_t i = 0; i < up.samples.size(); ++i) {
            CHECK(up.samples[i].first == down.samples[i].first);
            CHECK(up.samples[i].second == doctest::Approx(-down.samples[i].second));
        }
    }
}

TEST_CASE("flipping l1 mirrors the atlas in mu1") {
    const Atlas right = atlas_sweep({}, 16, base_model(+1.0));
    const Atlas left = atlas_sweep({}, 16, base_model(-1.0));
    for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i) {
            const RegionSample& a = right.grid[j * 16 + i];
            const RegionSample& b = left.grid[j * 16 + (15 - i)];
            if (a.boundary || b.boundary) continue;
            CHECK(a.n_equilibria == b.n_equilibria);
        }
}

TEST_CASE("alpha l1 < 0 atlas: region III has 2q symmetric centers and 2q non-symmetric saddles") {
    const auto p = base_model(1.0, -1.0);
    const RegionSample s = classify_region(-0.01, 5e-4, p);
    CHECK(s.id == RegionId::III);
    CHECK(s.n_equilibria == 12);
    CHECK(s.n_center == 6);
    CHECK(s.n_saddle == 6);
    CHECK(s.n_non_symmetric == 6);
}

TEST_CASE("reversible atlas: conservative outside the wedge, paired divergences inside") {
    FlowParams p = base_model();
    p.model = FlowModel::ReversibleNonCons;
    p.A = 1.0;
    p.B = 0.0;
    SUBCASE("region II/IV equilibria are conservative") {
        FlowParams at = p;
        at.mu1 = -0.01;
        at.mu2 = 4e-3;
        for (const Equilibrium& e : find_equilibria(at)) CHECK(std::abs(e.divergence) < 1e-12);
    }
    SUBCASE("region III contains q opposite-divergence pairs") {
        FlowParams at = p;
        at.mu1 = -0.01;
        at.mu2 = 1e-3;
        const auto eqs = find_equilibria(at);
        const Garland g = assemble_garland(eqs, at);
        CHECK(g.label == GarlandLabel::G_prime_2q_q_q);
        std::vector<double> divs;
        for (const Equilibrium& e : g.equilibria)
            if (std::abs(e.divergence) > 1e-12) divs.push_back(e.divergence);
        CHECK(divs.size() == 6);
        int noncons_pairs = 0;
        for (auto [i, j] : g.reversible_pairs) {
            if (i == j) continue;
            CHECK(std::abs(g.equilibria[i].divergence + g.equilibria[j].divergence) < 1e-10);
            if (std::abs(g.equilibria[i].divergence) > 1e-12) ++noncons_pairs;
        }
        CHECK(noncons_pairs == 3);
    }
}

TEST_CASE("atlas_sweep rejects excessive resolutions") {
    CHECK_THROWS_AS(atlas_sweep({}, 1000, base_model()), DomainError);
}
