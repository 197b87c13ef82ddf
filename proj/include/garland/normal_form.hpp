#ifndef GARLAND_NORMAL_FORM_HPP
#define GARLAND_NORMAL_FORM_HPP

#include <vector>

#include "garland/series.hpp"

namespace garland {

/// A p:q resonance, lambda = exp(i 2 pi p/q), with p,q coprime, p < q,
/// q odd and 3 <= q <= 13.
struct ResonanceSpec {
    int p = 1;
    int q = 3;
    Complex lambda;

    static ResonanceSpec make(int p, int q);

    /// Default series truncation for the 2q-order normal form.
    int default_max_degree() const { return 2 * q + 1; }

    /// min over non-resonant (m,k) of |lambda^(m-1-k) - 1| = 2 sin(pi/q).
    /// No elimination ever divides by anything smaller.
    double resonance_gap() const;
};

/// True iff z^m (z*)^k cannot be removed by a polynomial change of
/// coordinates, i.e. m - 1 - k is a multiple of q.  (m,k) = (1,0) excluded.
bool is_resonant(int m, int k, const ResonanceSpec& spec);

/// All resonant monomials with 2 <= degree <= order, sorted by (degree, m).
/// With `symmetric`, even-degree monomials are excluded: they carry zero
/// coefficients in a centrally symmetric map.
std::vector<Monomial> resonant_terms_up_to(int order, const ResonanceSpec& spec, bool symmetric);

/// The polynomial change z = w + C w^m (w*)^k used to remove one term.
struct EliminationRecord {
    Monomial target;
    Complex coefficient;      // C
    TruncatedSeries change;   // Psi: w -> w + C w^m (w*)^k
    TruncatedSeries inverse;  // Psi^{-1} up to truncation
};

/// Removes one non-resonant monomial from `map` by the conjugation
/// Psi^{-1} o map o Psi with Psi = id + C z^m (z*)^k,
/// C = A_{m,k} / (lambda^m (lambda*)^k - lambda).
/// Coefficients of lower degree are untouched.  Throws DomainError for a
/// resonant target.
std::pair<TruncatedSeries, EliminationRecord> eliminate_term(const TruncatedSeries& map,
                                                             Monomial target,
                                                             const ResonanceSpec& spec);

struct NormalFormResult {
    TruncatedSeries normalized_map;    // only resonant monomials survive
    TruncatedSeries transform;         // accumulated change Psi, map = Psi o nf o Psi^{-1}
    TruncatedSeries transform_inverse; // Psi^{-1}
    /// Twist coefficients g_m: Im of the lambda-factored coefficient of
    /// |z|^{2m-2} z, m = 2, 3, ...  (g_1 first).
    std::vector<double> omega_coeffs;
    /// Real parts of the same factored coefficients.  Zero through the first
    /// orders for area-preserving input; reported so the caller can judge.
    std::vector<double> omega_real_parts;
    /// Full lambda-factored identical-resonance coefficients.
    std::vector<Complex> identical_coeffs;
    /// Lambda-factored coefficient of (z*)^{2q-1}, the leading non-identical
    /// resonance.
    Complex leading_nonidentical;
    bool g1_degenerate = false;
    bool leading_degenerate = false;
    double max_omega_real_part = 0.0;
};

/// Degeneracy threshold for |g_1| and |A_{0,2q-1}|.
inline constexpr double kDegeneracyTol = 1e-10;

/// Brings `map` (linear part exactly lambda) to its 2q-order resonant normal
/// form by eliminating non-resonant monomials in ascending degree.
/// Throws DomainError if the linear part is not lambda or |lambda| != 1.
NormalFormResult normalize(const TruncatedSeries& map, const ResonanceSpec& spec);

/// Lie-series time-1 map of the polynomial vector field `field`, truncated at
/// the field's max_degree.  Converges for small linear parts; throws
/// SolverError otherwise.
TruncatedSeries time_one_map(const TruncatedSeries& field);

/// Vector field whose time-1 map equals the near-identity map
/// `g = c z + O(z^2)`, |c - 1| small, through the truncation degree
/// (the formal logarithm).
TruncatedSeries field_logarithm(const TruncatedSeries& g);

/// map o R_phi with phi = -2 pi p/q as a series: coefficients pick up the
/// phase e^{i 2 pi (p/q)(k-m)} and the linear part collapses to the detuning
/// lambda_map * conj(lambda).  Requires a resonant support and a unit-modulus
/// eigenvalue within a small detuning of lambda.
TruncatedSeries rotate_by_resonance(const TruncatedSeries& map_nf, const ResonanceSpec& spec);

/// Autonomous vector field embedding the normal form: the time-1 map of the
/// returned field reproduces map_nf o R_phi (phi = -2 pi p/q) to the
/// truncation order.  Leading coefficients are nu^{-1} A_{m,k}.  With
/// `q_scaled`, coefficients are multiplied by q and the field embeds the q-th
/// iterate map_nf^q instead.  Throws DomainError if map_nf carries a
/// non-resonant monomial.
TruncatedSeries embed_rotated(const TruncatedSeries& map_nf, const ResonanceSpec& spec,
                              bool q_scaled = false);

} // namespace garland

#endif
