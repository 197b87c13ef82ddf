#include "garland/normal_form.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "garland/errors.hpp"

namespace garland {

namespace {
constexpr double kPi = std::numbers::pi;

int mod_q(int value, int q) {
    int r = value % q;
    return r < 0 ? r + q : r;
}
} // namespace

ResonanceSpec ResonanceSpec::make(int p, int q) {
    if (q < 3 || q % 2 == 0) throw DomainError("ResonanceSpec: q must be odd and >= 3");
    if (q > 13) throw DomainError("ResonanceSpec: supported q range is 3..13");
    if (p < 1 || p >= q) throw DomainError("ResonanceSpec: p must satisfy 1 <= p < q");
    if (std::gcd(p, q) != 1) throw DomainError("ResonanceSpec: p and q must be coprime");
    ResonanceSpec spec;
    spec.p = p;
    spec.q = q;
    spec.lambda = std::polar(1.0, 2.0 * kPi * double(p) / double(q));
    return spec;
}

double ResonanceSpec::resonance_gap() const { return 2.0 * std::sin(kPi / double(q)); }

bool is_resonant(int m, int k, const ResonanceSpec& spec) {
    return mod_q(m - 1 - k, spec.q) == 0;
}

std::vector<Monomial> resonant_terms_up_to(int order, const ResonanceSpec& spec, bool symmetric) {
    std::vector<Monomial> out;
    for (int d = 2; d <= order; ++d) {
        if (symmetric && d % 2 == 0) continue;
        for (int m = 0; m <= d; ++m) {
            if (is_resonant(m, d - m, spec)) out.push_back({m, d - m});
        }
    }
    return out;
}

namespace {

/// lambda^m (lambda*)^k - lambda, guarded by the resonance gap.
Complex elimination_denominator(int m, int k, const ResonanceSpec& spec) {
    const Complex den =
        std::pow(spec.lambda, m) * std::pow(std::conj(spec.lambda), k) - spec.lambda;
    if (std::abs(den) < spec.resonance_gap() - 1e-12)
        throw SolverError("elimination denominator below the resonance gap bound");
    return den;
}

TruncatedSeries conjugate_by(const TruncatedSeries& map, const TruncatedSeries& psi,
                             const TruncatedSeries& psi_inv) {
    const TruncatedSeries inner = compose(map, psi, conjugate_series(psi));
    return compose(psi_inv, inner, conjugate_series(inner));
}

} // namespace

std::pair<TruncatedSeries, EliminationRecord> eliminate_term(const TruncatedSeries& map,
                                                             Monomial target,
                                                             const ResonanceSpec& spec) {
    if (target.m == 1 && target.k == 0)
        throw DomainError("eliminate_term: cannot target the linear part");
    if (is_resonant(target.m, target.k, spec))
        throw DomainError("resonant term not removable");
    if (std::abs(map.linear_coeff() - spec.lambda) > 1e-12)
        throw DomainError("eliminate_term: map linear part must equal lambda");

    const int deg = map.max_degree();
    const Complex a = map.coeff(target.m, target.k);
    if (std::abs(a) == 0.0) {
        EliminationRecord rec{target, Complex(0.0), TruncatedSeries::identity(deg),
                              TruncatedSeries::identity(deg)};
        return {map, rec};
    }
    const Complex c = a / elimination_denominator(target.m, target.k, spec);
    const TruncatedSeries psi =
        TruncatedSeries::identity(deg).with_coeff(target.m, target.k, c);
    const TruncatedSeries psi_inv = invert_near_identity(psi);
    TruncatedSeries out = conjugate_by(map, psi, psi_inv);
    // The bracket cancels algebraically; clear the rounding residue.
    out = out.with_coeff(target.m, target.k, Complex(0.0));
    return {out, EliminationRecord{target, c, psi, psi_inv}};
}

NormalFormResult normalize(const TruncatedSeries& map, const ResonanceSpec& spec) {
    if (std::abs(std::abs(map.linear_coeff()) - 1.0) > 1e-12)
        throw DomainError("normalize: eigenvalue must have unit modulus");
    if (std::abs(map.linear_coeff() - spec.lambda) > 1e-12)
        throw DomainError("normalize: map linear part must equal exp(i 2 pi p/q)");

    const int deg = map.max_degree();
    const TruncatedSeries id = TruncatedSeries::identity(deg);

    TruncatedSeries current = map;
    TruncatedSeries transform = id;

    // One near-identity change per degree removes every non-resonant monomial
    // of that degree at once; lower degrees are already clean and stay so.
    for (int d = 2; d <= deg; ++d) {
        TruncatedSeries psi = id;
        std::vector<Monomial> targets;
        for (int m = 0; m <= d; ++m) {
            const Monomial mk{m, d - m};
            if (mk.m == 1 && mk.k == 0) continue;
            if (is_resonant(mk.m, mk.k, spec)) continue;
            const Complex a = current.coeff(mk.m, mk.k);
            if (std::abs(a) == 0.0) continue;
            psi = psi.with_coeff(mk.m, mk.k, a / elimination_denominator(mk.m, mk.k, spec));
            targets.push_back(mk);
        }
        if (targets.empty()) continue;
        const TruncatedSeries psi_inv = invert_near_identity(psi);
        current = conjugate_by(current, psi, psi_inv);
        for (const Monomial& mk : targets) current = current.with_coeff(mk.m, mk.k, Complex(0.0));
        transform = compose(transform, psi, conjugate_series(psi));
    }

    NormalFormResult result{current,
                            transform,
                            invert_near_identity(transform),
                            {},
                            {},
                            {},
                            Complex(0.0)};

    for (int m = 2; 2 * m - 1 <= deg; ++m) {
        const Complex factored = current.coeff(m, m - 1) / spec.lambda;
        result.identical_coeffs.push_back(factored);
        result.omega_coeffs.push_back(factored.imag());
        result.omega_real_parts.push_back(factored.real());
        result.max_omega_real_part =
            std::max(result.max_omega_real_part, std::abs(factored.real()));
    }
    result.leading_nonidentical = current.coeff(0, 2 * spec.q - 1) / spec.lambda;
    result.g1_degenerate =
        result.omega_coeffs.empty() || std::abs(result.omega_coeffs.front()) < kDegeneracyTol;
    result.leading_degenerate = std::abs(result.leading_nonidentical) < kDegeneracyTol;
    return result;
}

TruncatedSeries time_one_map(const TruncatedSeries& field) {
    const int deg = field.max_degree();
    const TruncatedSeries fbar = conjugate_series(field);
    TruncatedSeries sum = TruncatedSeries::identity(deg);
    TruncatedSeries term = sum;
    const double scale = std::max(1.0, field.max_abs_coeff());
    for (int n = 1; n <= 400; ++n) {
        // term <- L_F(term) / n, with L_F(h) = h_z F + h_z* F*.
        term = (term.derivative_z().multiply(field) + term.derivative_zstar().multiply(fbar)) *
               Complex(1.0 / double(n));
        if (term.is_zero()) return sum;
        sum = sum + term;
        if (term.max_abs_coeff() < 1e-20 * scale) return sum;
    }
    throw SolverError("time_one_map: Lie series did not converge");
}

TruncatedSeries field_logarithm(const TruncatedSeries& g) {
    const int deg = g.max_degree();
    if (std::abs(g.linear_coeff() - Complex(1.0)) > 0.2 || std::abs(g.coeff(0, 0)) != 0.0)
        throw DomainError("field_logarithm: map must be near-identity with no constant term");
    const TruncatedSeries id = TruncatedSeries::identity(deg);
    TruncatedSeries field = g - id;
    if (field.is_zero()) return field;
    const double scale = std::max(1.0, g.max_abs_coeff());
    for (int pass = 0; pass < 100; ++pass) {
        const TruncatedSeries err = time_one_map(field) - g;
        if (err.max_abs_coeff() < 1e-18 * scale) return field;
        field = field - err;
    }
    throw SolverError("field_logarithm: correction sweep did not converge");
}

TruncatedSeries rotate_by_resonance(const TruncatedSeries& map_nf, const ResonanceSpec& spec) {
    for (const auto& [mk, c] : map_nf.terms()) {
        if (mk.m == 1 && mk.k == 0) continue;
        if (!is_resonant(mk.m, mk.k, spec))
            throw DomainError("rotate_by_resonance: map carries a non-resonant monomial");
    }
    const Complex lin = map_nf.linear_coeff();
    if (std::abs(std::abs(lin) - 1.0) > 1e-12)
        throw DomainError("rotate_by_resonance: eigenvalue must have unit modulus");
    const Complex detuning = lin * std::conj(spec.lambda);
    if (std::abs(detuning - Complex(1.0)) > 0.2)
        throw DomainError("rotate_by_resonance: eigenvalue too far from exp(i 2 pi p/q)");

    // For resonant monomials the rotation phase collapses to nu^{-1}, leaving
    // z + nu^{-1} sum A_{m,k} z^m (z*)^k at zero detuning.
    TruncatedSeries::TermMap rotated;
    for (const auto& [mk, c] : map_nf.terms()) {
        const Complex phase = std::polar(1.0, 2.0 * kPi * double(spec.p) / double(spec.q) *
                                                  double(mk.k - mk.m));
        rotated[mk] = c * phase;
    }
    rotated[{1, 0}] = detuning;
    if (std::abs(detuning - Complex(1.0)) < 1e-15) rotated[{1, 0}] = Complex(1.0);
    return TruncatedSeries(map_nf.max_degree(), std::move(rotated));
}

TruncatedSeries embed_rotated(const TruncatedSeries& map_nf, const ResonanceSpec& spec,
                              bool q_scaled) {
    TruncatedSeries field = field_logarithm(rotate_by_resonance(map_nf, spec));
    if (q_scaled) field = field * Complex(double(spec.q));
    return field;
}

} // namespace garland
