#include "steklov/dn_map.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "steklov/errors.hpp"

namespace steklov {

namespace {
constexpr double kPi = std::numbers::pi;
}

GradedSymbol dn_symbol(const BoundaryComponent& c) {
    c.validate();
    PeriodicFn sqrt_g11 = fn_sqrt(c.g11);
    PeriodicFn sqrt_ginv = fn_reciprocal(sqrt_g11);  // sqrt(g^{11})

    // Order 1: sqrt(g^{11})|ξ|.
    HomogComponent a0 = HomogComponent::even(1.0, sqrt_ginv);
    // Order 0: with A_1 = i h1 the term -i sqrt(g^{11}) A_1 ξ/|ξ| is real.
    HomogComponent a1 = HomogComponent::odd(0.0, sqrt_ginv * c.h1);
    // Order -1: (1/2) w1 ξ^{-1} + (1/2) sqrt(g11) q |ξ|^{-1}.
    PeriodicFn even_part = 0.5 * (sqrt_g11 * c.q);
    PeriodicFn odd_part = 0.5 * c.w1;
    HomogComponent a2{-1.0, even_part + odd_part, even_part - odd_part};

    GradedSymbol s(1.0, {a0, a1, a2}, /*exact_below=*/false);
    s.set_self_adjoint_flag(true);
    return s;
}

SteklovCoeffs steklov_coeffs_closed(const BoundaryComponent& c) {
    const double ell = boundary_length(c);
    const FluxAlpha fa = flux_alpha(c);
    const double kappa = curvature_flux(c);
    const double qint = electric_integral(c);

    SteklovCoeffs sc;
    sc.b0 = 2.0 * kPi / ell;
    sc.alpha = fa.alpha;
    sc.p = fa.p;
    sc.b1_plus = sc.b0 * fa.alpha;
    sc.b1_minus = -sc.b1_plus;
    sc.b2_plus = kappa / (4.0 * kPi) + qint / (4.0 * kPi);
    sc.b2_minus = -kappa / (4.0 * kPi) + qint / (4.0 * kPi);
    return sc;
}

SteklovCoeffsEx steklov_coeffs_via_nf(const BoundaryComponent& c, int K,
                                      const NormalFormOptions& opts) {
    if (K < 3) throw PreconditionError("steklov_coeffs_via_nf: K must be at least 3");
    SteklovCoeffs closed = steklov_coeffs_closed(c);
    GradedSymbol sym = dn_symbol(c).padded(K);
    sym.set_self_adjoint_flag(true);

    // The boundary symbol is known to three orders; deeper components are an
    // unknown tail completed self-adjointly inside the engine.
    NormalFormOptions nf_opts = opts;
    nf_opts.symmetrize_tail_from = 3;
    NormalFormResult nf = normal_form(sym, K, closed.p, nf_opts);

    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    if (!near(nf.b[0].first, closed.b0) || !near(nf.b[0].second, closed.b0) ||
        !near(nf.b[1].first, closed.b1_plus) || !near(nf.b[1].second, closed.b1_minus) ||
        !near(nf.b[2].first, closed.b2_plus) || !near(nf.b[2].second, closed.b2_minus))
        throw ConventionError(
            "steklov_coeffs_via_nf: engine coefficients disagree with closed forms");

    SteklovCoeffsEx out;
    out.coeffs = closed;
    out.bk = nf.b;
    out.closed_form_orders = 3;
    out.nf = std::move(nf);
    return out;
}

SpectrumSeq component_spectrum_asymptotic(const std::vector<std::pair<double, double>>& bk,
                                          long n_min, long n_max, int k0,
                                          const std::string& label) {
    if (k0 + 1 > static_cast<int>(bk.size()))
        throw PreconditionError("component_spectrum_asymptotic: k0 exceeds available coefficients");
    SpectrumSeq out;
    for (long n = n_min; n <= n_max; ++n) {
        if (n == 0) continue;  // finitely many eigenvalues are unconstrained
        const double an = std::abs(static_cast<double>(n));
        double v = 0.0;
        for (int k = 0; k <= k0; ++k) {
            const double coef = n > 0 ? bk[static_cast<std::size_t>(k)].first
                                      : bk[static_cast<std::size_t>(k)].second;
            v += coef * std::pow(an, 1.0 - k);
        }
        out.entries.push_back({v, n, label});
    }
    out.sort();
    return out;
}

}  // namespace steklov
