#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "garland/errors.hpp"
#include "garland/flow.hpp"

using namespace garland;

namespace {

constexpr double kPi = std::numbers::pi;

FlowParams symmetric_q3() {
    FlowParams p;
    p.model = FlowModel::Symmetric;
    p.q = 3;
    p.mu1 = -0.01;
    p.phi = {1.0, 0.0};
    p.alpha = 1.0;
    return p;
}

FlowParams sym_break_q3(double mu2) {
    FlowParams p = symmetric_q3();
    p.model = FlowModel::SymBreakConservative;
    p.mu2 = mu2;
    return p;
}

FlowParams reversible_q3(double mu2, double A, double B) {
    FlowParams p = symmetric_q3();
    p.model = FlowModel::ReversibleNonCons;
    p.mu2 = mu2;
    p.A = A;
    p.B = B;
    return p;
}

Complex random_point(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

} // namespace

TEST_CASE("cartesian field vanishes at the origin and matches hand arithmetic") {
    FlowParams p = symmetric_q3();
    CHECK(std::abs(vector_field_cartesian(p, Complex(0.0))) == 0.0);

    // mu = 0.1, Phi = r, alpha = 1, z = 0.1 (real):
    // dz = i (0.1*0.1 + 0.01*0.1) + i 0.1^5 = i 0.01101
    p.mu1 = 0.1;
    const Complex dz = vector_field_cartesian(p, Complex(0.1, 0.0));
    CHECK(dz.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(dz.imag() == doctest::Approx(0.01101).epsilon(1e-12));
}

TEST_CASE("conservative degeneration of the reversible model: B = A(q+1)") {
    const FlowParams p = reversible_q3(0.1, 0.5, 0.5 * 4.0);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const Complex z = random_point(rng, 0.4);
        CHECK(std::abs(divergence(p, z)) < 1e-14);
    }
}

TEST_CASE("polar field on the symmetry axis and its radial root") {
    FlowParams p = symmetric_q3();
    SUBCASE("dr vanishes when psi = 0") {
        for (double r : {0.001, 0.01, 0.1}) {
            auto [dr, dpsi] = vector_field_polar(p, {r, 0.0});
            CHECK(dr == 0.0);
        }
    }
    SUBCASE("dpsi(r) = mu + r + r^2 has the quadratic root") {
        // root of -0.01 + r + r^2
        const double r_star = (-1.0 + std::sqrt(1.04)) / 2.0;
        CHECK(r_star == doctest::Approx(0.00990195).epsilon(1e-6));
        auto [dr, dpsi] = vector_field_polar(p, {r_star, 0.0});
        CHECK(std::abs(dpsi) < 1e-15);
    }
    CHECK_THROWS_AS(vector_field_polar(p, {-0.1, 0.0}), DomainError);
}

TEST_CASE("polar and cartesian fields agree at 50 random states per model") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const FlowParams& p :
         {symmetric_q3(), sym_break_q3(1.5e-3), reversible_q3(1e-3, 1.0, 0.0)}) {
        for (int i = 0; i < 50; ++i) {
            const double r = 0.25 * u(rng) + 1e-4;
            const double psi = 2.0 * kPi * u(rng);
            const auto [dr, dpsi] = vector_field_polar(p, {r, psi});
            // z = sqrt(r) e^{i psi}; dz = e^{i psi} (dr / (2 sqrt r) + i sqrt r dpsi)
            const Complex z = std::polar(std::sqrt(r), psi);
            const Complex from_polar =
                std::polar(1.0, psi) * Complex(dr / (2.0 * std::sqrt(r)), std::sqrt(r) * dpsi);
            CHECK(std::abs(from_polar - vector_field_cartesian(p, z)) < 1e-12);
        }
    }
}

TEST_CASE("polar/cartesian agreement with a rotated alpha coefficient") {
    FlowParams p = symmetric_q3();
    p.theta = kPi / 2.0 + 0.6;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double r = 0.2 * u(rng) + 1e-4;
        const double psi = 2.0 * kPi * u(rng);
        const auto [dr, dpsi] = vector_field_polar(p, {r, psi});
        const Complex z = std::polar(std::sqrt(r), psi);
        const Complex from_polar =
            std::polar(1.0, psi) * Complex(dr / (2.0 * std::sqrt(r)), std::sqrt(r) * dpsi);
        CHECK(std::abs(from_polar - vector_field_cartesian(p, z)) < 1e-12);
    }
}

TEST_CASE("Hamiltonian values") {
    FlowParams p = symmetric_q3();
    CHECK(hamiltonian(p, {0.0, 0.3}) == 0.0);
    const double r = 0.00990195;
    // H = mu r + r^2/2 + r^3/3 at psi = 0
    const double expected = -0.01 * r + r * r / 2.0 + r * r * r / 3.0;
    CHECK(hamiltonian(p, {r, 0.0}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(-4.97e-5).epsilon(1e-2));

    CHECK_THROWS_AS(hamiltonian(reversible_q3(0.1, 1.0, 0.0), {0.1, 0.0}), DomainError);
    CHECK(has_hamiltonian(reversible_q3(0.1, 1.0, 4.0)));
}

TEST_CASE("Hamilton's equations against central finite differences") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const FlowParams& p : {symmetric_q3(), sym_break_q3(1.5e-3)}) {
        for (int i = 0; i < 50; ++i) {
            const double r = 0.2 * u(rng) + 1e-3;
            const double psi = 2.0 * kPi * u(rng);
            const auto [dr, dpsi] = vector_field_polar(p, {r, psi});
            const double h = 1e-6;
            const double dH_dpsi =
                (hamiltonian(p, {r, psi + h}) - hamiltonian(p, {r, psi - h})) / (2.0 * h);
            const double dH_dr =
                (hamiltonian(p, {r + h, psi}) - hamiltonian(p, {r - h, psi})) / (2.0 * h);
            CHECK(dr == doctest::Approx(-dH_dpsi).epsilon(1e-6).scale(1e-4));
            CHECK(dpsi == doctest::Approx(dH_dr).epsilon(1e-6).scale(1e-4));
        }
    }
}

TEST_CASE("divergence: zero for conservative models, exact formula otherwise") {
    std::mt19937_64 rng(19);
    SUBCASE("symmetric model") {
        const FlowParams p = symmetric_q3();
        for (int i = 0; i < 20; ++i) CHECK(divergence(p, random_point(rng, 0.4)) == 0.0);
    }
    SUBCASE("reversibly symmetric locus z = z*") {
        const FlowParams p = reversible_q3(0.1, 1.0, 0.0);
        for (double x : {0.05, 0.1, 0.3}) CHECK(divergence(p, Complex(x, 0.0)) == 0.0);
    }
    SUBCASE("hand-computed value") {
        // q=3, mu2=0.1, A=1, B=0, z=0.1 e^{i pi/6}: Div = -8e-4
        const FlowParams p = reversible_q3(0.1, 1.0, 0.0);
        const Complex z = std::polar(0.1, kPi / 6.0);
        CHECK(divergence(p, z) == doctest::Approx(-8e-4).epsilon(1e-12));
    }
    SUBCASE("agrees with the trace of the polar Jacobian") {
        const FlowParams p = reversible_q3(1e-3, 1.0, 0.0);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 20; ++i) {
            const double r = 0.2 * u(rng) + 1e-3;
            const double psi = 2.0 * kPi * u(rng);
            const Mat2 J = polar_jacobian(p, {r, psi});
            const Complex z = std::polar(std::sqrt(r), psi);
            CHECK(J.trace() == doctest::Approx(divergence(p, z)).epsilon(1e-10).scale(1e-8));
        }
    }
}

TEST_CASE("rotate_to_reversible") {
    CHECK(rotate_to_reversible(kPi / 2.0, 3) == 0.0);
    CHECK(rotate_to_reversible(kPi / 2.0 + 0.6, 3) == doctest::Approx(0.1).epsilon(1e-15));
    // Rotating the coefficient alpha e^{i theta} by -2q omega lands on i alpha.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int i = 0; i < 10; ++i) {
        const double theta = u(rng);
        const double omega = rotate_to_reversible(theta, 5);
        const Complex rotated = std::polar(1.0, theta) * std::polar(1.0, -2.0 * 5 * omega);
        CHECK(std::abs(rotated.real()) < 1e-14);
        CHECK(rotated.imag() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("integrate: fixed point, conservation, S1 trajectory symmetry") {
    const FlowParams p = symmetric_q3();
    SUBCASE("origin stays put") {
        const Trajectory t = integrate(p, Complex(0.0), 10.0, 1e-10, 16);
        for (Complex z : t.z) CHECK(std::abs(z) == 0.0);
        CHECK_FALSE(t.escaped);
    }
    SUBCASE("Hamiltonian drift below 1e-8 over t = 100") {
        const Complex z0(0.11, 0.04);
        const double H0 = hamiltonian(p, PolarState::from_complex(z0));
        const Trajectory t = integrate(p, z0, 100.0, 1e-10, 256);
        REQUIRE_FALSE(t.escaped);
        double worst = 0.0;
        for (Complex z : t.z)
            worst = std::max(worst, std::abs(hamiltonian(p, PolarState::from_complex(z)) - H0));
        CHECK(worst < 1e-8);
    }
    SUBCASE("rotation by pi/q maps trajectories to trajectories") {
        const Complex z0(0.09, -0.02);
        const Complex rot = std::polar(1.0, kPi / 3.0);
        const Trajectory a = integrate(p, z0, 50.0, 1e-10, 64);
        const Trajectory b = integrate(p, z0 * rot, 50.0, 1e-10, 64);
        REQUIRE(a.z.size() == b.z.size());
        for (std::size_t i = 0; i < a.z.size(); ++i)
            CHECK(std::abs(b.z[i] - rot * a.z[i]) < 1e-8);
    }
    SUBCASE("escape is flagged") {
        FlowParams wide = p;
        wide.mu1 = 0.3;
        wide.alpha = 5.0;
        const Trajectory t = integrate(wide, Complex(0.45, 0.1), 2000.0, 1e-9, 64);
        CHECK(t.escaped);
    }
    CHECK_THROWS_AS(integrate(p, Complex(0.1), 1.0, 1e-14), DomainError);
}

TEST_CASE("S1 rotation symmetry of the symmetric field to 1e-14") {
    const FlowParams p = symmetric_q3();
    const Complex rot = std::polar(1.0, kPi / 3.0);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        const Complex z = random_point(rng, 0.3);
        const Complex lhs = vector_field_cartesian(p, z * rot);
        const Complex rhs = rot * vector_field_cartesian(p, z);
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }
}

TEST_CASE("S3 anti-symmetry: rotation by pi/(2q) flips alpha") {
    FlowParams p = symmetric_q3();
    FlowParams flipped = p;
    flipped.alpha = -p.alpha;
    const Complex rot = std::polar(1.0, kPi / 6.0);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const Complex z = random_point(rng, 0.3);
        const Complex lhs = std::conj(rot) * vector_field_cartesian(p, z * rot);
        const Complex rhs = vector_field_cartesian(flipped, z);
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }
}

TEST_CASE("reversibility: -conj(field(conj z)) = field(z) for all models") {
    std::mt19937_64 rng(37);
    for (const FlowParams& p :
         {symmetric_q3(), sym_break_q3(2e-3), reversible_q3(1e-3, 1.0, 0.0)}) {
        for (int i = 0; i < 100; ++i) {
            const Complex z = random_point(rng, 0.3);
            const Complex lhs = -std::conj(vector_field_cartesian(p, std::conj(z)));
            CHECK(std::abs(lhs - vector_field_cartesian(p, z)) < 1e-14);
        }
    }
}

TEST_CASE("involution lines psi = k pi/(2q): dr flips, dpsi is even under reflection") {
    const FlowParams p = symmetric_q3();
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 4 * p.q; ++k) {
        const double axis = k * kPi / (2.0 * p.q);
        for (int i = 0; i < 5; ++i) {
            const double r = 0.2 * u(rng) + 1e-3;
            const double delta = 2.0 * kPi * u(rng);
            const auto [dr1, dpsi1] = vector_field_polar(p, {r, axis + delta});
            const auto [dr2, dpsi2] = vector_field_polar(p, {r, axis - delta});
            CHECK(dr1 == doctest::Approx(-dr2).epsilon(1e-12).scale(1e-6));
            CHECK(dpsi1 == doctest::Approx(dpsi2).epsilon(1e-12).scale(1e-6));
        }
    }
}

TEST_CASE("flow_field_series reproduces the cartesian field pointwise") {
    std::mt19937_64 rng(43);
    for (const FlowParams& p :
         {symmetric_q3(), sym_break_q3(1e-3), reversible_q3(5e-4, 0.7, -0.2)}) {
        const TruncatedSeries field = flow_field_series(p, 2 * p.q + 1);
        for (int i = 0; i < 25; ++i) {
            const Complex z = random_point(rng, 0.3);
            CHECK(std::abs(field.evaluate(z) - vector_field_cartesian(p, z)) < 1e-14);
        }
    }
}

TEST_CASE("FlowParams validation") {
    FlowParams p = symmetric_q3();
    p.q = 4;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = symmetric_q3();
    p.mu2 = 0.1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = sym_break_q3(1e-3);
    p.theta = 1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = reversible_q3(1e-3, 1.0, 0.0);
    CHECK_NOTHROW(p.validate());
}
