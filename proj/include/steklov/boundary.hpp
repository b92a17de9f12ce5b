#pragma once

#include <optional>
#include <vector>

#include "steklov/periodic_fn.hpp"

namespace steklov {

/// Jet data of one boundary circle in the chart [0, 2π).  The tangential
/// magnetic potential is purely imaginary and stored through its real
/// representative: A_1 = i*h1, and likewise d/dn A_1 = i*w1 on the boundary.
/// q is the electric potential restricted to the circle.
struct BoundaryComponent {
    PeriodicFn g11;  // metric coefficient, > 0
    PeriodicFn h1;
    PeriodicFn w1;
    PeriodicFn q;

    /// Throws GeometryError on non-positive g11 or non-real data.
    void validate() const;
};

struct SurfaceBoundary {
    std::vector<BoundaryComponent> components;
    /// Extra model parameter carried by factory-built cylinders (half-length),
    /// consumed by the closed-form oracles only.
    std::optional<double> cylinder_half_length;
};

BoundaryComponent make_component(PeriodicFn g11, PeriodicFn h1, PeriodicFn w1,
                                 PeriodicFn q);

/// ℓ = ∫_0^{2π} sqrt(g11).
double boundary_length(const BoundaryComponent& c);

struct FluxAlpha {
    double alpha;  // in [0, 1)
    long p;        // integer with alpha = p + (1/2π)∫ h1
};

/// Normalized holonomy of A around the circle.
FluxAlpha flux_alpha(const BoundaryComponent& c);

/// κ = ∫_0^{2π} w1; equals i times the flux of dA through the normal,
/// with the sign pinned by the normal-form cross-check in dn_map.
double curvature_flux(const BoundaryComponent& c);

/// ∫ q against the arc-length measure sqrt(g11) dx.
double electric_integral(const BoundaryComponent& c);

/// Product cylinder of half-length L with constant tangential potential:
/// two identical unit-speed circles, h1 ≡ beta, w1 = q = 0.
SurfaceBoundary make_flat_cylinder(double L, double beta);

}  // namespace steklov
