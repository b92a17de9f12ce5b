#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace steklov {

using cplx = std::complex<double>;

/// Smooth 2π-periodic function stored by its Fourier coefficients c_n,
/// |n| <= degree, with f(x) = Σ c_n e^{inx}.  The mean is c_0 exactly.
/// Real-valued functions satisfy c_{-n} = conj(c_n).
class PeriodicFn {
  public:
    PeriodicFn() : coeffs_(1, cplx(0.0)) {}

    // coeffs[i] is the coefficient of e^{i(i-degree)x}, size 2*degree+1.
    PeriodicFn(std::vector<cplx> coeffs, int degree);

    static PeriodicFn constant(cplx c);
    static PeriodicFn mode(int n, cplx amplitude);
    static PeriodicFn cosine(int n, double amplitude);
    static PeriodicFn sine(int n, double amplitude);

    /// Projects uniform grid samples onto modes |n| <= max_degree and drops
    /// coefficients below prune_tol relative to the peak coefficient.  Exact
    /// for band-limited input sampled on more than 2*max_degree nodes.
    static PeriodicFn project(const std::vector<cplx>& samples, int max_degree,
                              double prune_tol = 1e-15);

    int degree() const { return static_cast<int>(coeffs_.size() / 2); }
    cplx coeff(int n) const;
    void set_coeff(int n, cplx v);

    cplx eval(double x) const;
    std::vector<cplx> sample(std::size_t m) const;
    std::vector<double> sample_real(std::size_t m) const;

    cplx mean() const { return coeff(0); }
    bool is_zero(double tol = 0.0) const;
    bool is_real(double tol = 1e-12) const;
    bool is_constant(double tol = 1e-12) const;
    double sup_norm(std::size_t m = 1024) const;
    double coeff_norm() const;  // Σ |c_n|

    PeriodicFn conjugate() const;
    PeriodicFn derivative() const;
    PeriodicFn derivative(int k) const;

    /// F(x) = ∫_0^x (f(y) - mean) dy; periodic with F(0) = 0.
    PeriodicFn antiderivative_of_meanfree() const;

    PeriodicFn real_part() const;
    PeriodicFn imag_part() const;  // as a real-valued function

    PeriodicFn truncated(int new_degree) const;
    PeriodicFn pruned(double tol = 1e-15) const;
    PeriodicFn shifted_modes(int p) const;  // multiply by e^{ipx}

    PeriodicFn& operator+=(const PeriodicFn& o);
    PeriodicFn& operator-=(const PeriodicFn& o);
    friend PeriodicFn operator+(PeriodicFn a, const PeriodicFn& b) { return a += b; }
    friend PeriodicFn operator-(PeriodicFn a, const PeriodicFn& b) { return a -= b; }
    friend PeriodicFn operator*(const PeriodicFn& a, const PeriodicFn& b);  // convolution
    friend PeriodicFn operator*(cplx s, PeriodicFn f);
    friend PeriodicFn operator*(PeriodicFn f, cplx s) { return s * std::move(f); }
    friend PeriodicFn operator*(double s, PeriodicFn f) { return cplx(s) * std::move(f); }
    friend PeriodicFn operator-(PeriodicFn f) { return cplx(-1.0) * std::move(f); }

  private:
    std::vector<cplx> coeffs_;  // index i <-> mode i - degree
};

/// Default oversampling grid for nonlinear pointwise maps.
inline constexpr std::size_t kGridNodes = 4096;
/// Mode cap after grid projection; smooth data decays far below 1e-15 here.
inline constexpr int kMaxProjectionDegree = 320;

/// Applies fn pointwise on an oversampled grid and projects back.
PeriodicFn map_pointwise(const PeriodicFn& f, const std::function<cplx(cplx)>& fn,
                         std::size_t grid = kGridNodes,
                         int max_degree = kMaxProjectionDegree);

PeriodicFn fn_sqrt(const PeriodicFn& f);        // real positive data
PeriodicFn fn_pow(const PeriodicFn& f, double e);  // real positive data
PeriodicFn fn_reciprocal(const PeriodicFn& f);  // nonvanishing data
PeriodicFn fn_exp(const PeriodicFn& f);

}  // namespace steklov
