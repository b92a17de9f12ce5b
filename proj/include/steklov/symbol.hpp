#pragma once

#include <utility>
#include <vector>

#include "steklov/periodic_fn.hpp"

namespace steklov {

/// One positively homogeneous piece of a classical symbol on the punctured
/// cotangent bundle of the circle.  The value at (x, ξ) is
///   plus(x)  * ξ^order      for ξ > 0,
///   minus(x) * |ξ|^order    for ξ < 0;
/// ξ = 0 never occurs.
struct HomogComponent {
    double order = 0.0;
    PeriodicFn plus;
    PeriodicFn minus;

    static HomogComponent zero(double order) { return {order, {}, {}}; }
    /// Branch-symmetric component built from one function: f(x)|ξ|^order.
    static HomogComponent even(double order, const PeriodicFn& f) {
        return {order, f, f};
    }
    /// f(x) ξ |ξ|^{order-1}, i.e. odd across the two half-lines.
    static HomogComponent odd(double order, const PeriodicFn& f) {
        return {order, f, -f};
    }

    bool is_zero(double tol = 0.0) const {
        return plus.is_zero(tol) && minus.is_zero(tol);
    }
    double sup_norm() const { return std::max(plus.sup_norm(), minus.sup_norm()); }

    HomogComponent conjugate() const { return {order, plus.conjugate(), minus.conjugate()}; }
    HomogComponent x_derivative() const { return {order, plus.derivative(), minus.derivative()}; }
    HomogComponent x_derivative_k(int k) const {
        return {order, plus.derivative(k), minus.derivative(k)};
    }
    HomogComponent operator*(const HomogComponent& o) const {
        return {order + o.order, plus * o.plus, minus * o.minus};
    }
    HomogComponent operator+(const HomogComponent& o) const;
    HomogComponent operator-(const HomogComponent& o) const;
    HomogComponent scaled(cplx s) const { return {order, s * plus, s * minus}; }
};

/// d/dξ of a homogeneous component: order drops by one; on the negative
/// half-line d/dξ |ξ|^r = -r |ξ|^{r-1}.
HomogComponent xi_derivative(const HomogComponent& c);
HomogComponent xi_derivative(const HomogComponent& c, int k);

/// Finite descending list of homogeneous components with orders
/// m, m-1, ..., m-depth+1 (gaps held as zero components).
class GradedSymbol {
  public:
    GradedSymbol() = default;
    GradedSymbol(double leading_order, std::vector<HomogComponent> comps,
                 bool exact_below = false);

    /// Symbol of multiplication by f: single order-0 component, zero below.
    static GradedSymbol multiplication(const PeriodicFn& f);
    static GradedSymbol identity();
    /// Single component with nothing known below it.
    static GradedSymbol single(HomogComponent c, bool exact_below = false);

    double leading_order() const { return m_; }
    int depth() const { return static_cast<int>(comps_.size()); }
    /// True when all components below the stored depth are identically zero,
    /// so the symbol can be read at any depth.
    bool exact_below() const { return exact_below_; }
    bool self_adjoint_flag() const { return self_adjoint_; }
    GradedSymbol& set_self_adjoint_flag(bool v = true) {
        self_adjoint_ = v;
        return *this;
    }

    /// Component of order m - i; zero if i >= depth and exact_below.
    /// Throws TruncationError if i >= depth and the tail is unknown.
    HomogComponent component(int i) const;
    HomogComponent& mutable_component(int i) { return comps_.at(static_cast<std::size_t>(i)); }

    GradedSymbol truncated(int K) const;
    GradedSymbol padded(int K) const;  // extends with zeros; requires exact_below
    GradedSymbol conjugate() const;
    GradedSymbol operator+(const GradedSymbol& o) const;
    GradedSymbol operator-(const GradedSymbol& o) const;
    GradedSymbol scaled(cplx s) const;

    /// Max sup-norm defect of adjoint(a,K) - a per retained order.
    std::vector<double> adjoint_defect(int K) const;

  private:
    double m_ = 0.0;
    std::vector<HomogComponent> comps_;
    bool exact_below_ = false;
    bool self_adjoint_ = false;
};

/// Symbol of the product: Σ_k (-i)^k/k! ∂_ξ^k a ∂_x^k b, truncated to K
/// output components.
GradedSymbol compose(const GradedSymbol& a, const GradedSymbol& b, int K);

/// Symbol of the adjoint w.r.t. dx: Σ_k (-i)^k/k! ∂_ξ^k ∂_x^k conj(a).
GradedSymbol adjoint(const GradedSymbol& a, int K);

/// Elliptic inverse: r with compose(r, a, K) = identity to 1e-10 per order.
GradedSymbol parametrix(const GradedSymbol& a, int K);

/// Conjugation parametrix(u) # a # u for elliptic order-0 u, depth K.
GradedSymbol conjugate_by(const GradedSymbol& a, const GradedSymbol& u, int K);

}  // namespace steklov
