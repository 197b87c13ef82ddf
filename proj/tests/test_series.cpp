#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "garland/series.hpp"

using namespace garland;

namespace {

TruncatedSeries random_series(std::mt19937_64& rng, int max_degree, bool odd_only = false) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<std::pair<Monomial, Complex>> terms;
    for (int d = 1; d <= max_degree; ++d) {
        if (odd_only && d % 2 == 0) continue;
        for (int m = 0; m <= d; ++m) terms.push_back({{m, d - m}, {coeff(rng), coeff(rng)}});
    }
    return TruncatedSeries::from_terms(max_degree, terms);
}

Complex random_point(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * u(rng), 2.0 * std::numbers::pi * u(rng));
}

} // namespace

TEST_CASE("compose: identity substitution leaves the inner series") {
    // outer = z, inner_z = z + z^2
    const auto outer = TruncatedSeries::identity(4);
    const auto inner = TruncatedSeries::from_terms(4, {{{1, 0}, 1.0}, {{2, 0}, 1.0}});
    const auto zstar = TruncatedSeries::from_terms(4, {{{0, 1}, 1.0}});
    const auto result = compose(outer, inner, zstar);
    CHECK(result.coeff(1, 0) == Complex(1.0));
    CHECK(result.coeff(2, 0) == Complex(1.0));
    CHECK(result.term_count() == 2);
}

TEST_CASE("compose: z^2 with inner z + z^3 expands and truncates at degree 4") {
    const auto outer = TruncatedSeries::from_terms(4, {{{2, 0}, 1.0}});
    const auto inner = TruncatedSeries::from_terms(4, {{{1, 0}, 1.0}, {{3, 0}, 1.0}});
    const auto zstar = TruncatedSeries::from_terms(4, {{{0, 1}, 1.0}});
    const auto result = compose(outer, inner, zstar);
    // (z + z^3)^2 = z^2 + 2 z^4 + z^6 -> z^2 + 2 z^4
    CHECK(result.coeff(2, 0) == Complex(1.0));
    CHECK(result.coeff(4, 0) == Complex(2.0));
    CHECK(result.coeff(6, 0) == Complex(0.0));
    CHECK(result.term_count() == 2);
}

TEST_CASE("compose: scaling case z z* with 2z and 3z*") {
    const auto outer = TruncatedSeries::from_terms(3, {{{1, 1}, 1.0}});
    const auto inner_z = TruncatedSeries::from_terms(3, {{{1, 0}, 2.0}});
    const auto inner_s = TruncatedSeries::from_terms(3, {{{0, 1}, 3.0}});
    const auto result = compose(outer, inner_z, inner_s);
    CHECK(result.coeff(1, 1) == Complex(6.0));
    CHECK(result.term_count() == 1);
}

TEST_CASE("compose rejects mismatched max_degree and constant terms") {
    const auto outer = TruncatedSeries::identity(4);
    const auto inner3 = TruncatedSeries::identity(3);
    CHECK_THROWS_AS(compose(outer, inner3, inner3), std::invalid_argument);
    const auto with_const = TruncatedSeries::from_terms(4, {{{0, 0}, 1.0}, {{1, 0}, 1.0}});
    CHECK_THROWS_AS(compose(outer, with_const, with_const), std::invalid_argument);
}

TEST_CASE("conjugate_series matches the definition") {
    const Complex i(0.0, 1.0);
    SUBCASE("linear term") {
        const auto s = TruncatedSeries::from_terms(3, {{{1, 0}, i}});
        const auto c = conjugate_series(s);
        CHECK(c.coeff(0, 1) == -i);
        CHECK(c.coeff(1, 0) == Complex(0.0));
    }
    SUBCASE("mixed monomial") {
        const auto s = TruncatedSeries::from_terms(3, {{{2, 1}, Complex(2.0, 1.0)}});
        const auto c = conjugate_series(s);
        CHECK(c.coeff(1, 2) == Complex(2.0, -1.0));
    }
    SUBCASE("involution on random series") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 5; ++trial) {
            const auto s = random_series(rng, 6);
            const auto back = conjugate_series(conjugate_series(s));
            CHECK((back - s).max_abs_coeff() == 0.0);
        }
    }
}

TEST_CASE("is_centrally_symmetric by parity of stored degrees") {
    const auto odd = TruncatedSeries::from_terms(
        5, {{{1, 0}, 1.0}, {{2, 1}, 0.5}, {{0, 5}, Complex(0.0, 2.0)}});
    CHECK(is_centrally_symmetric(odd));
    const auto with_even = odd.with_coeff(2, 0, Complex(1e-3, 0.0));
    CHECK_FALSE(is_centrally_symmetric(with_even));
}

TEST_CASE("is_centrally_symmetric agrees with the pointwise oracle") {
    // s(-z,-z*) + s(z,z*) vanishes at 20 random points iff the flag is set.
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const auto s = random_series(rng, 7, trial % 2 == 0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Complex z = random_point(rng, 0.1);
            worst = std::max(worst, std::abs(s.evaluate(-z) + s.evaluate(z)));
        }
        if (is_centrally_symmetric(s))
            CHECK(worst < 1e-12);
        else
            CHECK(worst > 1e-12);
    }
}

TEST_CASE("compose is associative up to truncation") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 4; ++trial) {
        // Near-identity maps keep the composition inside the truncation regime.
        auto bump = [&](double scale) {
            auto s = random_series(rng, 6) * Complex(scale);
            return TruncatedSeries::identity(6) + s.with_coeff(1, 0, Complex(0.0))
                                                      .with_coeff(0, 1, Complex(0.0));
        };
        const auto a = bump(0.3), b = bump(0.3), c = bump(0.3);
        const auto left = compose(compose(a, b), c);
        const auto right = compose(a, compose(b, c));
        CHECK((left - right).max_abs_coeff() < 1e-12);
    }
}

TEST_CASE("no operation exceeds max_degree") {
    std::mt19937_64 rng(31);
    const auto a = random_series(rng, 5);
    const auto b = random_series(rng, 5);
    for (const auto& s : {a + b, a.multiply(b), conjugate_series(a), a * Complex(2.0)}) {
        for (const auto& [mk, cv] : s.terms()) CHECK(mk.degree() <= 5);
    }
}

TEST_CASE("coefficient table agrees with direct evaluation at 50 points") {
    std::mt19937_64 rng(37);
    const auto s = random_series(rng, 7);
    for (int i = 0; i < 50; ++i) {
        const Complex z = random_point(rng, 0.1);
        // Independent evaluation: straight sum over powers computed per term.
        Complex direct(0.0);
        for (const auto& [mk, c] : s.terms()) {
            Complex t = c;
            for (int n = 0; n < mk.m; ++n) t *= z;
            for (int n = 0; n < mk.k; ++n) t *= std::conj(z);
            direct += t;
        }
        CHECK(std::abs(s.evaluate(z) - direct) < 1e-12);
    }
}

TEST_CASE("absent coefficients are exactly zero and small ones are dropped") {
    const auto s = TruncatedSeries::from_terms(4, {{{2, 1}, 1e-16}, {{1, 0}, 1.0}});
    CHECK(s.coeff(2, 1) == Complex(0.0));
    CHECK(s.coeff(3, 0) == Complex(0.0));
    CHECK(s.term_count() == 1);
}

TEST_CASE("invert_near_identity is a two-sided inverse to truncation") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 4; ++trial) {
        auto tail = random_series(rng, 7) * Complex(0.4);
        tail = tail.with_coeff(1, 0, Complex(0.0)).with_coeff(0, 1, Complex(0.0));
        const auto psi = TruncatedSeries::identity(7) + tail;
        const auto chi = invert_near_identity(psi);
        const auto left = compose(chi, psi);
        const auto right = compose(psi, chi);
        const auto id = TruncatedSeries::identity(7);
        CHECK((left - id).max_abs_coeff() < 1e-12);
        CHECK((right - id).max_abs_coeff() < 1e-12);
    }
}

TEST_CASE("wirtinger derivatives match finite differences") {
    std::mt19937_64 rng(43);
    const auto s = random_series(rng, 6);
    const double h = 1e-6;
    for (int i = 0; i < 10; ++i) {
        const Complex z = random_point(rng, 0.2);
        const auto [dz, dzs] = s.wirtinger(z);
        // d/dx = f_z + f_z*; d/dy = i (f_z - f_z*)
        const Complex dx_fd =
            (s.evaluate(z + Complex(h, 0)) - s.evaluate(z - Complex(h, 0))) / (2.0 * h);
        const Complex dy_fd =
            (s.evaluate(z + Complex(0, h)) - s.evaluate(z - Complex(0, h))) / (2.0 * h);
        CHECK(std::abs((dz + dzs) - dx_fd) < 1e-8);
        CHECK(std::abs(Complex(0, 1) * (dz - dzs) - dy_fd) < 1e-8);
    }
}
