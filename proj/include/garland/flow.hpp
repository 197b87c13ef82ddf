#ifndef GARLAND_FLOW_HPP
#define GARLAND_FLOW_HPP

#include <array>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "garland/series.hpp"

namespace garland {

enum class FlowModel {
    Symmetric,           // dz/dt = i mu1 z + i Phi(|z|^2) z + alpha e^{i theta} (z*)^{2q-1}
    SymBreakConservative,// + i mu2 (z*)^{q-1}, theta = pi/2
    ReversibleNonCons    // + i A mu2 z^{q+1} + i B mu2 z (z*)^q, theta = pi/2
};

std::string to_string(FlowModel model);

/// Real 2x2 matrix with just enough linear algebra for Jacobian work.
struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    /// Eigenvalues as a complex pair.
    std::array<Complex, 2> eigenvalues() const;
    /// Solves this * x = rhs; throws SolverError when singular.
    std::array<double, 2> solve(double r1, double r2) const;
};

/// Parameters of one truncated flow normal form.
struct FlowParams {
    FlowModel model = FlowModel::Symmetric;
    int q = 3;
    double mu1 = 0.0;
    double mu2 = 0.0;                 // 0 for Symmetric
    std::vector<double> phi{0.0, 0.0}; // l1, l2, ... of Phi(r) = l1 r + l2 r^2 + ...
    double alpha = 0.0;
    double theta = std::numbers::pi / 2.0; // arg of the (z*)^{2q-1} coefficient
    double A = 0.0;                   // ReversibleNonCons only
    double B = 0.0;
    double validity_radius = 0.5;     // in |z|

    double l1() const { return phi.empty() ? 0.0 : phi.front(); }
    double phi_of(double r) const;
    double phi_prime(double r) const;
    double phi_integral(double r) const;
    /// Throws DomainError on an inconsistent parameter set.
    void validate() const;
    bool is_conservative() const;
};

/// Polar state with the r = |z|^2 convention, z = sqrt(r) e^{i psi}.
struct PolarState {
    double r = 0.0;
    double psi = 0.0;
    Complex to_complex() const { return std::polar(std::sqrt(r), psi); }
    static PolarState from_complex(Complex z);
};

/// Truncated vector field dz/dt at z (no remainder terms).
Complex vector_field_cartesian(const FlowParams& params, Complex z);

/// (dr/dt, dpsi/dt) from the closed-form real/imaginary split.
/// Throws DomainError for r < 0.
std::pair<double, double> vector_field_polar(const FlowParams& params, const PolarState& s);

/// Analytic Jacobian of the polar field at s.
Mat2 polar_jacobian(const FlowParams& params, const PolarState& s);

/// H(r, psi); defined for the conservative models and for
/// ReversibleNonCons exactly when B = A (q+1).  Throws DomainError otherwise.
double hamiltonian(const FlowParams& params, const PolarState& s);
bool has_hamiltonian(const FlowParams& params);

/// Exact divergence of the truncated field: the A/B terms contribute
/// -2 mu2 ((q+1)A - B) Im(z^q); everything else is divergence-free.
double divergence(const FlowParams& params, Complex z);

/// Rotation angle omega = (theta - pi/2) / (2q); applying z -> z e^{i omega}
/// turns the coefficient alpha e^{i theta} into i alpha.
double rotate_to_reversible(double theta, int q);

struct Trajectory {
    std::vector<double> t;
    std::vector<Complex> z;
    bool escaped = false;
};

/// Adaptive integration of the truncated flow with `n_samples` uniform
/// samples on [0, t_end].  Trajectories leaving the validity radius are
/// truncated and flagged.  tol must be >= 1e-13.
Trajectory integrate(const FlowParams& params, Complex z0, double t_end, double tol,
                     int n_samples = 256);

/// The field as a truncated series (used to build maps and for embedding
/// cross-checks).
TruncatedSeries flow_field_series(const FlowParams& params, int max_degree);

} // namespace garland

#endif
