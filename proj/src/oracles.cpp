#include "steklov/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "steklov/errors.hpp"

namespace steklov {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double cyl_tanh_value(double t, double L) {
    // t (1 - e^{-2tL}) / (1 + e^{-2tL}); never forms e^{+2tL}.
    const double e = std::exp(-2.0 * t * L);
    return t * (1.0 - e) / (1.0 + e);
}

double cyl_coth_value(double t, double L) {
    const double e = std::exp(-2.0 * t * L);
    return t * (1.0 + e) / (1.0 - e);
}

SpectrumSeq cylinder_spectrum(const CylinderModel& m, long kmax) {
    if (m.L <= 0.0) throw PreconditionError("cylinder_spectrum: L must be positive");
    if (kmax < 0) throw PreconditionError("cylinder_spectrum: kmax must be >= 0");
    SpectrumSeq out;
    const double beta = m.beta;
    const bool integer_flux = std::abs(beta - std::round(beta)) < 1e-14;
    for (long k = -kmax; k <= kmax; ++k) {
        const double t = std::abs(static_cast<double>(k) + beta);
        if (t < 1e-14) continue;  // replaced by the affine-mode pair below
        out.entries.push_back({cyl_tanh_value(t, m.L), k, "tanh"});
        out.entries.push_back({cyl_coth_value(t, m.L), k, "coth"});
    }
    if (integer_flux) {
        out.entries.push_back({0.0, static_cast<long>(std::lround(-beta)), "const"});
        out.entries.push_back({1.0 / m.L, static_cast<long>(std::lround(-beta)), "linear"});
    }
    out.sort();
    return out;
}

SpectrumSeq ab_disk_spectrum(const DiskFluxModel& m, long kmax) {
    if (!(m.beta > 0.0 && m.beta <= 0.5))
        throw PreconditionError("ab_disk_spectrum: beta must lie in (0, 1/2]");
    SpectrumSeq out;
    for (long k = -kmax; k <= kmax; ++k)
        out.entries.push_back({std::abs(static_cast<double>(k) - m.beta), k, "abdisk"});
    out.sort();
    return out;
}

std::vector<double> circle_laplacian_eigs(double beta, long kmax) {
    std::vector<double> v;
    for (long k = -kmax; k <= kmax; ++k) {
        const double t = static_cast<double>(k) + beta;
        v.push_back(t * t);
    }
    std::sort(v.begin(), v.end());
    return v;
}

SpectrumSeq constant_A_exact_spectrum(const SurfaceBoundary& sb, long nmax) {
    if (sb.components.empty())
        throw PreconditionError("constant_A_exact_spectrum: empty boundary");
    SpectrumSeq out;
    int j = 0;
    for (const auto& c : sb.components) {
        ++j;
        if (!c.g11.is_constant(1e-12) || !c.h1.is_constant(1e-12) ||
            !c.w1.is_zero(1e-12) || !c.q.is_zero(1e-12))
            throw PreconditionError(
                "constant_A_exact_spectrum: component data must be constant with zero "
                "field and potential");
        const double ell = boundary_length(c);
        const double alpha = flux_alpha(c).alpha;
        const double b0 = kTwoPi / ell;
        const std::string label = "component" + std::to_string(j);
        for (long n = 1; n <= nmax; ++n) {
            out.entries.push_back({b0 * (static_cast<double>(n) + alpha), n, label});
            out.entries.push_back({b0 * (static_cast<double>(n) - alpha), -n, label});
        }
    }
    out.sort();
    return out;
}

}  // namespace steklov
