#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "steklov/symbol.hpp"

namespace steklov {

struct NormalFormOptions {
    std::size_t grid = kGridNodes;  // sample nodes for transport and inversion
    int max_degree = kMaxProjectionDegree;
    double per_order_tol = 1e-10;  // residual x-independence per conjugated order
    double reality_tol = 1e-9;     // imaginary part allowed in the b_k
    double symmetry_tol = 1e-10;   // principal branch symmetry
    // When >= 0: components at this index and below are an unknown tail of a
    // truncated symbol; they are replaced by the self-adjoint completion
    // before the conjugation steps.  Components above must not move.
    int symmetrize_tail_from = -1;
};

/// Straightening diffeomorphism of the circle and the flattened principal
/// values.  phi fixes 0 and 2π and is strictly increasing.
struct Step1Result {
    double b0_plus = 0.0;
    double b0_minus = 0.0;
    int symmetry_sign = 1;     // minus branch = sign * plus branch
    PeriodicFn phi_prime;      // in the source variable; mean 1
    std::vector<double> phi_nodes;  // phi at grid nodes plus the 2π endpoint
    std::vector<double> psi_nodes;  // phi^{-1} at uniform target nodes
    bool identity = false;
};

Step1Result nf_step1(const HomogComponent& a0, double m,
                     const NormalFormOptions& opts = {});

/// Full symbol of the conjugation by the unitary weighted pullback built from
/// phi: source symbol a goes to the straightened coordinate, depth K.
GradedSymbol transport_under_diffeo(const GradedSymbol& a, const Step1Result& s1,
                                    int K, const NormalFormOptions& opts = {});

/// Removes the imaginary first-order defect of symbols that are self-adjoint
/// with respect to a smooth positive density rather than dx, by conjugating
/// with the multiplication operator of that density's square root.  Returns
/// the weight actually applied (identically 1 when none is needed).
struct DensityFix {
    PeriodicFn rho;
    GradedSymbol fixed;
};
DensityFix density_fix(const GradedSymbol& e, int K,
                       const NormalFormOptions& opts = {});

struct Step2Result {
    HomogComponent k1;  // order 0, unit modulus
    double b1_plus = 0.0;
    double b1_minus = 0.0;
    GradedSymbol conjugated;
};

/// Second normal-form step: requires an x-independent leading component.
Step2Result nf_step2(const GradedSymbol& e, long p, int K,
                     const NormalFormOptions& opts = {});

struct NormalFormResult {
    std::vector<std::pair<double, double>> b;  // (b_k(+1), b_k(-1)), k < K
    std::vector<double> phi_nodes;
    HomogComponent k1;
    long p = 0;
    PeriodicFn density_weight;   // from the density fix; 1 if unused
    GradedSymbol normalized;     // final x-independent symbol (diagnostic)
};

/// Runs the whole conjugation pipeline and reads off the x-independent
/// coefficients.  p defaults to the canonical winding putting
/// b1/(m b0) - p into [0, 1).
NormalFormResult normal_form(const GradedSymbol& a, int K,
                             std::optional<long> p = std::nullopt,
                             const NormalFormOptions& opts = {});

/// Direct evaluation of the third coefficient when the leading component is
/// already x-independent; the iterative pipeline must agree with this.
std::pair<double, double> b2_closed_form(const HomogComponent& a0,
                                         const HomogComponent& a1,
                                         const HomogComponent& a2,
                                         std::pair<double, double> b1, double m,
                                         const NormalFormOptions& opts = {});

}  // namespace steklov
