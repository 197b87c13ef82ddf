#include "garland/flow.hpp"

#include <cmath>

#include "garland/errors.hpp"
#include "garland/ode.hpp"

namespace garland {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
} // namespace

std::string to_string(FlowModel model) {
    switch (model) {
        case FlowModel::Symmetric: return "symmetric";
        case FlowModel::SymBreakConservative: return "sym_break_conservative";
        case FlowModel::ReversibleNonCons: return "reversible_non_conservative";
    }
    return "?";
}

std::array<Complex, 2> Mat2::eigenvalues() const {
    const double tr = trace();
    const double disc = tr * tr - 4.0 * det();
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {Complex(0.5 * (tr + s), 0.0), Complex(0.5 * (tr - s), 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {Complex(0.5 * tr, 0.5 * s), Complex(0.5 * tr, -0.5 * s)};
}

std::array<double, 2> Mat2::solve(double r1, double r2) const {
    const double d = det();
    if (std::abs(d) < 1e-300) throw SolverError("Mat2::solve: singular matrix");
    return {(a22 * r1 - a12 * r2) / d, (a11 * r2 - a21 * r1) / d};
}

double FlowParams::phi_of(double r) const {
    double acc = 0.0, rp = r;
    for (double l : phi) {
        acc += l * rp;
        rp *= r;
    }
    return acc;
}

double FlowParams::phi_prime(double r) const {
    double acc = 0.0, rp = 1.0;
    int j = 1;
    for (double l : phi) {
        acc += l * double(j) * rp;
        rp *= r;
        ++j;
    }
    return acc;
}

double FlowParams::phi_integral(double r) const {
    double acc = 0.0, rp = r * r;
    int j = 1;
    for (double l : phi) {
        acc += l * rp / double(j + 1);
        rp *= r;
        ++j;
    }
    return acc;
}

void FlowParams::validate() const {
    if (q < 3 || q % 2 == 0) throw DomainError("FlowParams: q must be odd and >= 3");
    if (model == FlowModel::Symmetric && (mu2 != 0.0 || A != 0.0 || B != 0.0))
        throw DomainError("FlowParams: Symmetric model requires mu2 = A = B = 0");
    if (model != FlowModel::Symmetric && std::abs(theta - kHalfPi) > 1e-12)
        throw DomainError("FlowParams: theta must be pi/2 outside the Symmetric model");
    if (model == FlowModel::SymBreakConservative && (A != 0.0 || B != 0.0))
        throw DomainError("FlowParams: A/B terms require the reversible model");
    if (theta < 0.0 || theta >= 2.0 * kPi) throw DomainError("FlowParams: theta outside [0, 2pi)");
    if (validity_radius <= 0.0) throw DomainError("FlowParams: validity radius must be positive");
}

bool FlowParams::is_conservative() const {
    if (model != FlowModel::ReversibleNonCons) return true;
    return mu2 == 0.0 || std::abs(B - A * double(q + 1)) < 1e-14;
}

PolarState PolarState::from_complex(Complex z) {
    double psi = std::arg(z);
    if (psi < 0.0) psi += 2.0 * kPi;
    return {std::norm(z), psi};
}

Complex vector_field_cartesian(const FlowParams& params, Complex z) {
    const double r = std::norm(z);
    const Complex zs = std::conj(z);
    const Complex i(0.0, 1.0);
    Complex dz = i * (params.mu1 + params.phi_of(r)) * z;
    dz += params.alpha * std::polar(1.0, params.theta) * std::pow(zs, 2 * params.q - 1);
    if (params.model != FlowModel::Symmetric)
        dz += i * params.mu2 * std::pow(zs, params.q - 1);
    if (params.model == FlowModel::ReversibleNonCons) {
        dz += i * params.A * params.mu2 * std::pow(z, params.q + 1);
        dz += i * params.B * params.mu2 * z * std::pow(zs, params.q);
    }
    return dz;
}

std::pair<double, double> vector_field_polar(const FlowParams& params, const PolarState& s) {
    if (s.r < 0.0) throw DomainError("vector_field_polar: r must be nonnegative");
    const double r = s.r, psi = s.psi;
    const int q = params.q;
    const double hq = 0.5 * double(q); // q/2
    // Rotated angle so the alpha term reads sin/cos of 2q Psi.
    const double Psi = psi - rotate_to_reversible(params.theta, q);
    double dr = 2.0 * params.alpha * std::pow(r, q) * std::sin(2.0 * q * Psi);
    double dpsi = params.mu1 + params.phi_of(r) +
                  params.alpha * std::pow(r, q - 1) * std::cos(2.0 * q * Psi);
    if (params.model != FlowModel::Symmetric) {
        dr += 2.0 * params.mu2 * std::pow(r, hq) * std::sin(q * psi);
        dpsi += params.mu2 * std::pow(r, hq - 1.0) * std::cos(q * psi);
    }
    if (params.model == FlowModel::ReversibleNonCons) {
        dr += 2.0 * params.mu2 * (params.B - params.A) * std::pow(r, hq + 1.0) * std::sin(q * psi);
        dpsi += params.mu2 * (params.A + params.B) * std::pow(r, hq) * std::cos(q * psi);
    }
    return {dr, dpsi};
}

Mat2 polar_jacobian(const FlowParams& params, const PolarState& s) {
    const double r = s.r, psi = s.psi;
    const int q = params.q;
    const double hq = 0.5 * double(q);
    const double Psi = psi - rotate_to_reversible(params.theta, q);
    const double s2 = std::sin(2.0 * q * Psi), c2 = std::cos(2.0 * q * Psi);

    Mat2 J;
    J.a11 = 2.0 * q * params.alpha * std::pow(r, q - 1) * s2;
    J.a12 = 4.0 * q * params.alpha * std::pow(r, q) * c2;
    J.a21 = params.phi_prime(r) + params.alpha * double(q - 1) * std::pow(r, q - 2) * c2;
    J.a22 = -2.0 * q * params.alpha * std::pow(r, q - 1) * s2;

    if (params.model != FlowModel::Symmetric) {
        const double s1 = std::sin(q * psi), c1 = std::cos(q * psi);
        J.a11 += 2.0 * params.mu2 * hq * std::pow(r, hq - 1.0) * s1;
        J.a12 += 2.0 * q * params.mu2 * std::pow(r, hq) * c1;
        J.a21 += params.mu2 * (hq - 1.0) * std::pow(r, hq - 2.0) * c1;
        J.a22 += -q * params.mu2 * std::pow(r, hq - 1.0) * s1;
        if (params.model == FlowModel::ReversibleNonCons) {
            const double ab = params.B - params.A;
            J.a11 += 2.0 * params.mu2 * ab * (hq + 1.0) * std::pow(r, hq) * s1;
            J.a12 += 2.0 * q * params.mu2 * ab * std::pow(r, hq + 1.0) * c1;
            J.a21 += params.mu2 * (params.A + params.B) * hq * std::pow(r, hq - 1.0) * c1;
            J.a22 += -q * params.mu2 * (params.A + params.B) * std::pow(r, hq) * s1;
        }
    }
    return J;
}

bool has_hamiltonian(const FlowParams& params) {
    return params.model != FlowModel::ReversibleNonCons ||
           std::abs(params.B - params.A * double(params.q + 1)) < 1e-12;
}

double hamiltonian(const FlowParams& params, const PolarState& s) {
    if (!has_hamiltonian(params)) throw DomainError("hamiltonian: non-Hamiltonian model");
    const double r = s.r, psi = s.psi;
    const int q = params.q;
    const double hq = 0.5 * double(q);
    double H = params.mu1 * r + params.phi_integral(r);
    // alpha e^{i theta} term integrates to (alpha/q) r^q sin(theta - 2q psi).
    H += params.alpha / double(q) * std::pow(r, q) * std::sin(params.theta - 2.0 * q * psi);
    if (params.model != FlowModel::Symmetric)
        H += 2.0 / double(q) * params.mu2 * std::pow(r, hq) * std::cos(q * psi);
    if (params.model == FlowModel::ReversibleNonCons)
        H += 2.0 * (params.B - params.A) / double(q) * params.mu2 * std::pow(r, hq + 1.0) *
             std::cos(q * psi);
    return H;
}

double divergence(const FlowParams& params, Complex z) {
    if (params.model != FlowModel::ReversibleNonCons) return 0.0;
    const double im_zq = std::imag(std::pow(z, params.q));
    return -2.0 * params.mu2 * (double(params.q + 1) * params.A - params.B) * im_zq;
}

double rotate_to_reversible(double theta, int q) { return (theta - kHalfPi) / (2.0 * q); }

Trajectory integrate(const FlowParams& params, Complex z0, double t_end, double tol,
                     int n_samples) {
    if (tol < 1e-13) throw DomainError("integrate: tol must be >= 1e-13");
    if (n_samples < 2) n_samples = 2;
    std::vector<double> sample_times(n_samples);
    for (int i = 0; i < n_samples; ++i)
        sample_times[i] = t_end * double(i) / double(n_samples - 1);

    DormandPrince54::Options opt;
    opt.abs_tol = tol * std::max(std::abs(z0), 1e-6);
    opt.rel_tol = tol;
    opt.escape_radius = params.validity_radius;
    auto rhs = [&](Complex z) { return vector_field_cartesian(params, z); };
    DormandPrince54::Result res = DormandPrince54::integrate(rhs, z0, t_end, sample_times, opt);
    return Trajectory{std::move(res.t), std::move(res.z), res.escaped};
}

TruncatedSeries flow_field_series(const FlowParams& params, int max_degree) {
    const Complex i(0.0, 1.0);
    std::vector<std::pair<Monomial, Complex>> terms;
    if (params.mu1 != 0.0) terms.push_back({{1, 0}, i * params.mu1});
    int j = 1;
    for (double l : params.phi) {
        if (l != 0.0) terms.push_back({{j + 1, j}, i * l});
        ++j;
    }
    if (params.alpha != 0.0)
        terms.push_back({{0, 2 * params.q - 1}, params.alpha * std::polar(1.0, params.theta)});
    if (params.model != FlowModel::Symmetric && params.mu2 != 0.0)
        terms.push_back({{0, params.q - 1}, i * params.mu2});
    if (params.model == FlowModel::ReversibleNonCons && params.mu2 != 0.0) {
        if (params.A != 0.0) terms.push_back({{params.q + 1, 0}, i * params.A * params.mu2});
        if (params.B != 0.0) terms.push_back({{1, params.q}, i * params.B * params.mu2});
    }
    return TruncatedSeries::from_terms(max_degree, terms);
}

} // namespace garland
