#include "garland/series.hpp"

#include <cmath>
#include <stdexcept>

namespace garland {

TruncatedSeries::TruncatedSeries(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 1) throw std::invalid_argument("TruncatedSeries: max_degree must be >= 1");
}

TruncatedSeries::TruncatedSeries(int max_degree, TermMap terms)
    : max_degree_(max_degree), terms_(std::move(terms)) {
    if (max_degree < 1) throw std::invalid_argument("TruncatedSeries: max_degree must be >= 1");
    prune();
}

TruncatedSeries TruncatedSeries::identity(int max_degree) {
    return linear(Complex(1.0, 0.0), max_degree);
}

TruncatedSeries TruncatedSeries::linear(Complex lambda, int max_degree) {
    TruncatedSeries s(max_degree);
    if (std::abs(lambda) >= kDropoutTol) s.terms_[{1, 0}] = lambda;
    return s;
}

TruncatedSeries TruncatedSeries::from_terms(
    int max_degree, const std::vector<std::pair<Monomial, Complex>>& terms) {
    TermMap map;
    for (const auto& [mk, c] : terms) {
        if (mk.m < 0 || mk.k < 0) throw std::invalid_argument("TruncatedSeries: negative exponent");
        map[mk] += c;
    }
    return TruncatedSeries(max_degree, std::move(map));
}

void TruncatedSeries::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first.degree() > max_degree_ || std::abs(it->second) < kDropoutTol)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Complex TruncatedSeries::coeff(int m, int k) const {
    auto it = terms_.find({m, k});
    return it == terms_.end() ? Complex(0.0) : it->second;
}

double TruncatedSeries::max_abs_coeff() const {
    double mx = 0.0;
    for (const auto& [mk, c] : terms_) mx = std::max(mx, std::abs(c));
    return mx;
}

TruncatedSeries TruncatedSeries::with_coeff(int m, int k, Complex c) const {
    TermMap map = terms_;
    if (std::abs(c) < kDropoutTol)
        map.erase({m, k});
    else
        map[{m, k}] = c;
    return TruncatedSeries(max_degree_, std::move(map));
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& rhs) const {
    if (rhs.max_degree_ != max_degree_)
        throw std::invalid_argument("series addition: mismatched max_degree");
    TermMap map = terms_;
    for (const auto& [mk, c] : rhs.terms_) map[mk] += c;
    return TruncatedSeries(max_degree_, std::move(map));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& rhs) const {
    return *this + rhs * Complex(-1.0);
}

TruncatedSeries TruncatedSeries::operator*(Complex scale) const {
    TermMap map;
    for (const auto& [mk, c] : terms_) map[mk] = c * scale;
    return TruncatedSeries(max_degree_, std::move(map));
}

TruncatedSeries TruncatedSeries::multiply(const TruncatedSeries& rhs) const {
    if (rhs.max_degree_ != max_degree_)
        throw std::invalid_argument("series multiply: mismatched max_degree");
    TermMap map;
    for (const auto& [a, ca] : terms_) {
        const int budget = max_degree_ - a.degree();
        for (const auto& [b, cb] : rhs.terms_) {
            if (b.degree() > budget) break; // rhs iterates in degree order
            map[{a.m + b.m, a.k + b.k}] += ca * cb;
        }
    }
    return TruncatedSeries(max_degree_, std::move(map));
}

TruncatedSeries TruncatedSeries::derivative_z() const {
    TermMap map;
    for (const auto& [mk, c] : terms_)
        if (mk.m > 0) map[{mk.m - 1, mk.k}] = c * double(mk.m);
    return TruncatedSeries(max_degree_, std::move(map));
}

TruncatedSeries TruncatedSeries::derivative_zstar() const {
    TermMap map;
    for (const auto& [mk, c] : terms_)
        if (mk.k > 0) map[{mk.m, mk.k - 1}] = c * double(mk.k);
    return TruncatedSeries(max_degree_, std::move(map));
}

Complex TruncatedSeries::evaluate(Complex z, Complex zstar) const {
    // Power tables up to the maximum exponent actually present.
    int mmax = 0, kmax = 0;
    for (const auto& [mk, c] : terms_) {
        mmax = std::max(mmax, mk.m);
        kmax = std::max(kmax, mk.k);
    }
    std::vector<Complex> zp(mmax + 1), sp(kmax + 1);
    zp[0] = Complex(1.0);
    for (int i = 1; i <= mmax; ++i) zp[i] = zp[i - 1] * z;
    sp[0] = Complex(1.0);
    for (int i = 1; i <= kmax; ++i) sp[i] = sp[i - 1] * zstar;
    Complex acc(0.0);
    for (const auto& [mk, c] : terms_) acc += c * zp[mk.m] * sp[mk.k];
    return acc;
}

std::pair<Complex, Complex> TruncatedSeries::wirtinger(Complex z) const {
    const Complex zs = std::conj(z);
    Complex dz(0.0), dzs(0.0);
    for (const auto& [mk, c] : terms_) {
        if (mk.m > 0) dz += c * double(mk.m) * std::pow(z, mk.m - 1) * std::pow(zs, mk.k);
        if (mk.k > 0) dzs += c * double(mk.k) * std::pow(z, mk.m) * std::pow(zs, mk.k - 1);
    }
    return {dz, dzs};
}

TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner_z,
                        const TruncatedSeries& inner_zstar) {
    const int deg = outer.max_degree();
    if (inner_z.max_degree() != deg || inner_zstar.max_degree() != deg)
        throw std::invalid_argument("compose: operands must share max_degree");
    if (std::abs(inner_z.coeff(0, 0)) != 0.0 || std::abs(inner_zstar.coeff(0, 0)) != 0.0)
        throw std::invalid_argument("compose: inner series must have zero constant term");

    int mmax = 0, kmax = 0;
    for (const auto& [mk, c] : outer.terms()) {
        mmax = std::max(mmax, mk.m);
        kmax = std::max(kmax, mk.k);
    }
    // Incremental powers of the inner series.
    std::vector<TruncatedSeries> zp, sp;
    zp.reserve(mmax + 1);
    sp.reserve(kmax + 1);
    zp.push_back(TruncatedSeries::from_terms(deg, {{{0, 0}, Complex(1.0)}}));
    for (int i = 1; i <= mmax; ++i) zp.push_back(zp.back().multiply(inner_z));
    sp.push_back(TruncatedSeries::from_terms(deg, {{{0, 0}, Complex(1.0)}}));
    for (int i = 1; i <= kmax; ++i) sp.push_back(sp.back().multiply(inner_zstar));

    TruncatedSeries::TermMap acc;
    for (const auto& [mk, c] : outer.terms()) {
        const TruncatedSeries prod = zp[mk.m].multiply(sp[mk.k]);
        for (const auto& [t, v] : prod.terms()) acc[t] += c * v;
    }
    return TruncatedSeries(deg, std::move(acc));
}

TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
    return compose(outer, inner, conjugate_series(inner));
}

TruncatedSeries conjugate_series(const TruncatedSeries& s) {
    TruncatedSeries::TermMap map;
    for (const auto& [mk, c] : s.terms()) map[{mk.k, mk.m}] = std::conj(c);
    return TruncatedSeries(s.max_degree(), std::move(map));
}

bool is_centrally_symmetric(const TruncatedSeries& s) {
    for (const auto& [mk, c] : s.terms())
        if (mk.degree() % 2 == 0) return false;
    return true;
}

TruncatedSeries invert_near_identity(const TruncatedSeries& psi) {
    const int deg = psi.max_degree();
    if (std::abs(psi.linear_coeff() - Complex(1.0)) > 1e-12 || std::abs(psi.coeff(0, 0)) != 0.0)
        throw std::invalid_argument("invert_near_identity: map must be z + O(|z|^2)");
    const TruncatedSeries id = TruncatedSeries::identity(deg);
    const TruncatedSeries tail = psi - id; // O(|z|^2)
    // chi = id - tail o chi gains one degree of accuracy per pass.
    TruncatedSeries chi = id;
    for (int pass = 0; pass < deg; ++pass) {
        TruncatedSeries next = id - compose(tail, chi, conjugate_series(chi));
        if ((next - chi).max_abs_coeff() == 0.0) break;
        chi = next;
    }
    return chi;
}

} // namespace garland
