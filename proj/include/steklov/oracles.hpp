#pragma once

#include <vector>

#include "steklov/boundary.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

/// Product cylinder over the unit-speed circle: half-length L, constant
/// tangential potential with flux beta.
struct CylinderModel {
    double L = 1.0;
    double beta = 0.0;
};

/// Unit disk with a pure-flux point potential, flux beta in (0, 1/2].
struct DiskFluxModel {
    double beta = 0.5;
};

/// Exact eigenvalues |k+β| tanh(|k+β|L) and |k+β| coth(|k+β|L) over
/// |k| <= kmax (k+β = 0 dropped), plus {0, 1/L} when β is an integer.
/// Branch labels "tanh"/"coth" ride in the component column.
SpectrumSeq cylinder_spectrum(const CylinderModel& m, long kmax);

/// Exact spectrum {|k - β| : |k| <= kmax}.
SpectrumSeq ab_disk_spectrum(const DiskFluxModel& m, long kmax);

/// {(k+β)^2 : |k| <= kmax}, sorted.
std::vector<double> circle_laplacian_eigs(double beta, long kmax);

/// Two-term ladders {(2π/ℓ_j)(n ± α_j) : 1 <= n <= nmax} merged across
/// components; exact up to rapidly decaying corrections for boundary data
/// that is constant along each circle with zero field and potential.
SpectrumSeq constant_A_exact_spectrum(const SurfaceBoundary& sb, long nmax);

/// Overflow-safe t*tanh(t*L) and t*coth(t*L).
double cyl_tanh_value(double t, double L);
double cyl_coth_value(double t, double L);

}  // namespace steklov
