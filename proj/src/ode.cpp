#include "garland/ode.hpp"

#include <algorithm>

namespace garland {

namespace {

using C = std::complex<double>;

// Dormand-Prince 5(4) tableau (FSAL).
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

C hermite(double t, double t0, double t1, C y0, C y1, C f0, C f1) {
    const double h = t1 - t0;
    if (h == 0.0) return y1;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * f0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * f1;
}

} // namespace

DormandPrince54::Result DormandPrince54::integrate(const Rhs& rhs, C z0, double t_end,
                                                   const std::vector<double>& sample_times,
                                                   const Options& opt) {
    Result out;
    if (t_end < 0.0) throw std::invalid_argument("DormandPrince54: t_end must be >= 0");

    double t = 0.0;
    C y = z0;
    C f = rhs(y);
    std::size_t next_sample = 0;

    auto emit_through = [&](double t1, C y1, C f0, C f1, double t0, C y0v) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t1 + 1e-15) {
            const double ts = sample_times[next_sample];
            out.t.push_back(ts);
            out.z.push_back(hermite(ts, t0, t1, y0v, y1, f0, f1));
            ++next_sample;
        }
    };

    // Emit any samples at t = 0.
    while (next_sample < sample_times.size() && sample_times[next_sample] <= 1e-15) {
        out.t.push_back(sample_times[next_sample]);
        out.z.push_back(y);
        ++next_sample;
    }

    if (t_end == 0.0) return out;

    const double fnorm = std::abs(f);
    double h = fnorm > 0.0 ? std::min(0.1, 0.01 * (opt.abs_tol + opt.rel_tol * std::abs(y)) /
                                                 std::max(fnorm, 1e-300))
                           : 0.1;
    h = std::max(h, 1e-12);
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    const int max_steps = 50'000'000;
    for (int step = 0; step < max_steps; ++step) {
        if (t >= t_end) break;
        h = std::min(h, t_end - t);

        const C k1 = f;
        const C k2 = rhs(y + h * (a21 * k1));
        const C k3 = rhs(y + h * (a31 * k1 + a32 * k2));
        const C k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const C k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const C k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const C y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const C k7 = rhs(y1); // FSAL
        const C err_c = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y), std::abs(y1));
        const double err = std::abs(err_c) / sc;

        if (err <= 1.0) {
            emit_through(t + h, y1, f, k7, t, y);
            t += h;
            y = y1;
            f = k7;
            if (opt.escape_radius > 0.0 && std::abs(y) > opt.escape_radius) {
                out.escaped = true;
                return out;
            }
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(err, 1e-18), -0.2), 0.2, 5.0);
        h *= factor;
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        if (h < 1e-15 * std::max(1.0, t)) throw SolverError("DormandPrince54: step underflow");
    }
    if (t < t_end) throw SolverError("DormandPrince54: step budget exhausted");
    // Samples left over at t_end by rounding.
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t_end + 1e-12) {
        out.t.push_back(sample_times[next_sample]);
        out.z.push_back(y);
        ++next_sample;
    }
    return out;
}

std::complex<double> DormandPrince54::endpoint(const Rhs& rhs, C z0, double t_end, double tol) {
    Options opt;
    opt.abs_tol = tol * std::max(std::abs(z0), 1e-6);
    opt.rel_tol = tol;
    Result r = integrate(rhs, z0, t_end, {t_end}, opt);
    return r.z.back();
}

} // namespace garland
