#ifndef GARLAND_SERIES_HPP
#define GARLAND_SERIES_HPP

#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace garland {

using Complex = std::complex<double>;

/// Exponent pair of a monomial c * z^m * (z*)^k.
struct Monomial {
    int m = 0;
    int k = 0;
    int degree() const { return m + k; }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Orders monomials by (total degree, m); this is the canonical output order.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.m < b.m;
    }
};

/// Truncated power series in the conjugate pair (z, z*) with complex
/// coefficients.  Values are immutable: every operation returns a new series.
/// Coefficients with magnitude below kDropoutTol are not stored, and no
/// stored monomial exceeds max_degree.
class TruncatedSeries {
public:
    static constexpr double kDropoutTol = 1e-15;

    using TermMap = std::map<Monomial, Complex, MonomialOrder>;

    explicit TruncatedSeries(int max_degree);
    TruncatedSeries(int max_degree, TermMap terms);

    static TruncatedSeries zero(int max_degree) { return TruncatedSeries(max_degree); }
    /// The identity map z.
    static TruncatedSeries identity(int max_degree);
    /// The linear map lambda * z.
    static TruncatedSeries linear(Complex lambda, int max_degree);
    static TruncatedSeries from_terms(int max_degree,
                                      const std::vector<std::pair<Monomial, Complex>>& terms);

    int max_degree() const { return max_degree_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    /// Coefficient lookup; absent monomials are exactly zero.
    Complex coeff(int m, int k) const;
    Complex coeff(const Monomial& mk) const { return coeff(mk.m, mk.k); }
    /// Coefficient of z, the eigenvalue for maps.
    Complex linear_coeff() const { return coeff(1, 0); }
    /// Largest coefficient magnitude (0 for the zero series).
    double max_abs_coeff() const;

    /// Copy with one coefficient replaced (dropped if below tolerance).
    TruncatedSeries with_coeff(int m, int k, Complex c) const;

    TruncatedSeries operator+(const TruncatedSeries& rhs) const;
    TruncatedSeries operator-(const TruncatedSeries& rhs) const;
    TruncatedSeries operator*(Complex scale) const;
    /// Truncated product.
    TruncatedSeries multiply(const TruncatedSeries& rhs) const;

    TruncatedSeries derivative_z() const;
    TruncatedSeries derivative_zstar() const;

    /// Evaluate with z* = conj(z), the planar-map interpretation.
    Complex evaluate(Complex z) const { return evaluate(z, std::conj(z)); }
    /// Formal two-variable evaluation.
    Complex evaluate(Complex z, Complex zstar) const;
    /// Wirtinger derivatives (d/dz, d/dz*) at z with z* = conj(z).
    std::pair<Complex, Complex> wirtinger(Complex z) const;

private:
    void prune();

    int max_degree_ = 0;
    TermMap terms_;
};

/// outer(inner_z, inner_zstar) truncated at the shared max_degree.
/// Inner series must have zero constant term; all max_degrees must agree.
TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner_z,
                        const TruncatedSeries& inner_zstar);

/// Convenience overload for planar maps: inner_zstar = conjugate_series(inner_z).
TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner);

/// Swaps m <-> k in every monomial and conjugates every coefficient; this is
/// the series of the conjugate component of a real planar map.
TruncatedSeries conjugate_series(const TruncatedSeries& s);

/// True iff every even-total-degree coefficient vanishes, i.e. f(-z,-z*) = -f(z,z*).
bool is_centrally_symmetric(const TruncatedSeries& s);

/// Compositional inverse of a near-identity map psi = z + O(|z|^2),
/// exact up to the truncation degree.
TruncatedSeries invert_near_identity(const TruncatedSeries& psi);

} // namespace garland

#endif
