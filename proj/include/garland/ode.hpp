#ifndef GARLAND_ODE_HPP
#define GARLAND_ODE_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "garland/errors.hpp"

namespace garland {

/// Adaptive Dormand-Prince 5(4) step control for a single complex state.
/// Dense output between accepted steps uses cubic Hermite interpolation,
/// which is enough for sampling slowly rotating planar flows.
class DormandPrince54 {
public:
    using Rhs = std::function<std::complex<double>(std::complex<double>)>;

    struct Options {
        double abs_tol = 1e-10;
        double rel_tol = 1e-10;
        double escape_radius = 0.0; // 0 disables the escape check
        double max_step = 0.0;      // 0 = unrestricted
    };

    struct Result {
        std::vector<double> t;
        std::vector<std::complex<double>> z;
        bool escaped = false;
    };

    /// Integrates z' = rhs(z) from z0 over [0, t_end], sampling at
    /// `sample_times` (must be ascending, within [0, t_end]).
    static Result integrate(const Rhs& rhs, std::complex<double> z0, double t_end,
                            const std::vector<double>& sample_times, const Options& opt);

    /// Endpoint-only convenience.
    static std::complex<double> endpoint(const Rhs& rhs, std::complex<double> z0, double t_end,
                                         double tol);
};

} // namespace garland

#endif
