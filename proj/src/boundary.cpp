#include "steklov/boundary.hpp"

#include <cmath>
#include <numbers>

#include "steklov/errors.hpp"

namespace steklov {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRealTol = 1e-12;
}

void BoundaryComponent::validate() const {
    if (!g11.is_real(kRealTol) || !h1.is_real(kRealTol) || !w1.is_real(kRealTol) ||
        !q.is_real(kRealTol))
        throw GeometryError("boundary component: data must be real-valued");
    for (double v : g11.sample_real(kGridNodes))
        if (v <= 0.0) throw GeometryError("boundary component: g11 must be positive");
}

BoundaryComponent make_component(PeriodicFn g11, PeriodicFn h1, PeriodicFn w1,
                                 PeriodicFn q) {
    BoundaryComponent c{std::move(g11), std::move(h1), std::move(w1), std::move(q)};
    c.validate();
    return c;
}

double boundary_length(const BoundaryComponent& c) {
    c.validate();
    // Uniform-grid quadrature of a smooth periodic integrand is spectrally
    // accurate; fn_sqrt re-checks positivity node by node.
    double len = kTwoPi * fn_sqrt(c.g11).mean().real();
    if (!(len > 0.0)) throw GeometryError("boundary_length: non-positive length");
    return len;
}

FluxAlpha flux_alpha(const BoundaryComponent& c) {
    c.validate();
    const double flux = c.h1.mean().real();  // (1/2πi)∫A = (1/2π)∫h1
    const double p = -std::floor(flux);
    double alpha = flux + p;
    if (alpha >= 1.0) {  // guard the boundary case flux = -p exactly
        alpha -= 1.0;
        return {alpha, static_cast<long>(p) - 1};
    }
    return {alpha, static_cast<long>(p)};
}

double curvature_flux(const BoundaryComponent& c) {
    c.validate();
    return kTwoPi * c.w1.mean().real();
}

double electric_integral(const BoundaryComponent& c) {
    c.validate();
    return kTwoPi * (c.q * fn_sqrt(c.g11)).mean().real();
}

SurfaceBoundary make_flat_cylinder(double L, double beta) {
    if (!(L > 0.0)) throw GeometryError("make_flat_cylinder: L must be positive");
    BoundaryComponent circle = make_component(PeriodicFn::constant(1.0),
                                              PeriodicFn::constant(beta),
                                              PeriodicFn(), PeriodicFn());
    SurfaceBoundary sb;
    sb.components = {circle, circle};
    sb.cylinder_half_length = L;
    return sb;
}

}  // namespace steklov
