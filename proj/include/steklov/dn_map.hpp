#pragma once

#include <utility>
#include <vector>

#include "steklov/boundary.hpp"
#include "steklov/normal_form.hpp"
#include "steklov/spectrum.hpp"
#include "steklov/symbol.hpp"

namespace steklov {

/// Leading voltage-to-current expansion coefficients of one boundary circle.
struct SteklovCoeffs {
    double b0 = 0.0;       // 2π/ℓ
    double b1_plus = 0.0;  // ±(2π/ℓ)α on the two frequency branches
    double b1_minus = 0.0;
    double b2_plus = 0.0;  // ±κ/4π + (1/4π)∫q
    double b2_minus = 0.0;
    long p = 0;
    double alpha = 0.0;  // canonical flux in [0, 1)

    std::vector<std::pair<double, double>> as_pairs() const {
        return {{b0, b0}, {b1_plus, b1_minus}, {b2_plus, b2_minus}};
    }
};

/// Coefficient list extended by the conjugation engine; entries with
/// k >= closed_form_orders have no independent closed form and are labeled
/// engine-derived in reports.
struct SteklovCoeffsEx {
    SteklovCoeffs coeffs;
    std::vector<std::pair<double, double>> bk;
    int closed_form_orders = 3;
    NormalFormResult nf;
};

/// Full boundary symbol of the voltage-to-current map, orders 1, 0, -1.
/// The operator is self-adjoint w.r.t. the arc-length density; the flag is
/// set in that sense and the conjugation engine removes the density weight.
GradedSymbol dn_symbol(const BoundaryComponent& c);

SteklovCoeffs steklov_coeffs_closed(const BoundaryComponent& c);

/// Runs the conjugation engine on dn_symbol(c) with the canonical winding and
/// cross-checks b0, b1, b2 against the closed forms to 1e-9; a mismatch means
/// the orientation conventions disagree and raises ConventionError.
SteklovCoeffsEx steklov_coeffs_via_nf(const BoundaryComponent& c, int K = 5,
                                      const NormalFormOptions& opts = {});

/// λ_n = Σ_{k<=k0} b_k(sgn n) |n|^{1-k} for n in [n_min, n_max] \ {0}.
SpectrumSeq component_spectrum_asymptotic(const std::vector<std::pair<double, double>>& bk,
                                          long n_min, long n_max, int k0,
                                          const std::string& label = "");

}  // namespace steklov
