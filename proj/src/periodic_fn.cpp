#include "steklov/periodic_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steklov/errors.hpp"

namespace steklov {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PeriodicFn::PeriodicFn(std::vector<cplx> coeffs, int degree) : coeffs_(std::move(coeffs)) {
    if (degree < 0 || coeffs_.size() != static_cast<std::size_t>(2 * degree + 1))
        throw Error("PeriodicFn: coefficient array size does not match degree");
}

PeriodicFn PeriodicFn::constant(cplx c) {
    PeriodicFn f;
    f.coeffs_[0] = c;
    return f;
}

PeriodicFn PeriodicFn::mode(int n, cplx amplitude) {
    int d = std::abs(n);
    std::vector<cplx> c(2 * d + 1, cplx(0.0));
    c[static_cast<std::size_t>(n + d)] = amplitude;
    return PeriodicFn(std::move(c), d);
}

PeriodicFn PeriodicFn::cosine(int n, double amplitude) {
    if (n == 0) return constant(amplitude);
    PeriodicFn f = mode(n, 0.5 * amplitude);
    f.set_coeff(-n, 0.5 * amplitude);
    return f;
}

PeriodicFn PeriodicFn::sine(int n, double amplitude) {
    if (n == 0) return PeriodicFn();
    PeriodicFn f = mode(n, cplx(0.0, -0.5 * amplitude));
    f.set_coeff(-n, cplx(0.0, 0.5 * amplitude));
    return f;
}

PeriodicFn PeriodicFn::project(const std::vector<cplx>& samples, int max_degree,
                               double prune_tol) {
    const std::size_t m = samples.size();
    if (m < 2) throw Error("PeriodicFn::project: need at least 2 samples");
    int d = std::min<int>(max_degree, (static_cast<int>(m) - 1) / 2);
    std::vector<cplx> c(2 * d + 1, cplx(0.0));
    double peak = 0.0;
    for (int n = -d; n <= d; ++n) {
        // c_n = (1/m) Σ_j f(x_j) e^{-in x_j}, x_j = 2π j / m
        long double ar = 0.0L, ai = 0.0L;
        const cplx w = std::polar(1.0, -kTwoPi * n / static_cast<double>(m));
        cplx wj(1.0);
        for (std::size_t j = 0; j < m; ++j) {
            cplx t = samples[j] * wj;
            ar += t.real();
            ai += t.imag();
            wj *= w;
        }
        cplx v(static_cast<double>(ar / m), static_cast<double>(ai / m));
        c[static_cast<std::size_t>(n + d)] = v;
        peak = std::max(peak, std::abs(v));
    }
    // Coefficients at the projection noise floor only pollute later products.
    return PeriodicFn(std::move(c), d).pruned(prune_tol * std::max(1.0, peak));
}

cplx PeriodicFn::coeff(int n) const {
    int d = degree();
    if (n < -d || n > d) return cplx(0.0);
    return coeffs_[static_cast<std::size_t>(n + d)];
}

void PeriodicFn::set_coeff(int n, cplx v) {
    int d = degree();
    if (n < -d || n > d) {
        int nd = std::abs(n);
        std::vector<cplx> c(2 * nd + 1, cplx(0.0));
        for (int k = -d; k <= d; ++k) c[static_cast<std::size_t>(k + nd)] = coeff(k);
        coeffs_ = std::move(c);
        d = nd;
    }
    coeffs_[static_cast<std::size_t>(n + d)] = v;
}

cplx PeriodicFn::eval(double x) const {
    // Horner in e^{ix} over n = -d..d.
    const int d = degree();
    const cplx z = std::polar(1.0, x);
    cplx acc(0.0);
    for (int n = d; n >= -d; --n) acc = acc * z + coeff(n);
    return acc * std::polar(1.0, -d * x);
}

std::vector<cplx> PeriodicFn::sample(std::size_t m) const {
    std::vector<cplx> out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = eval(kTwoPi * j / static_cast<double>(m));
    return out;
}

std::vector<double> PeriodicFn::sample_real(std::size_t m) const {
    std::vector<double> out(m);
    for (std::size_t j = 0; j < m; ++j)
        out[j] = eval(kTwoPi * j / static_cast<double>(m)).real();
    return out;
}

bool PeriodicFn::is_zero(double tol) const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [tol](cplx c) { return std::abs(c) <= tol; });
}

bool PeriodicFn::is_real(double tol) const {
    const int d = degree();
    for (int n = 0; n <= d; ++n)
        if (std::abs(coeff(-n) - std::conj(coeff(n))) > tol) return false;
    return true;
}

bool PeriodicFn::is_constant(double tol) const {
    const int d = degree();
    for (int n = -d; n <= d; ++n)
        if (n != 0 && std::abs(coeff(n)) > tol) return false;
    return true;
}

double PeriodicFn::sup_norm(std::size_t m) const {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        s = std::max(s, std::abs(eval(kTwoPi * j / static_cast<double>(m))));
    return s;
}

double PeriodicFn::coeff_norm() const {
    double s = 0.0;
    for (cplx c : coeffs_) s += std::abs(c);
    return s;
}

PeriodicFn PeriodicFn::conjugate() const {
    const int d = degree();
    std::vector<cplx> c(coeffs_.size());
    for (int n = -d; n <= d; ++n)
        c[static_cast<std::size_t>(n + d)] = std::conj(coeff(-n));
    return PeriodicFn(std::move(c), d);
}

PeriodicFn PeriodicFn::derivative() const {
    const int d = degree();
    std::vector<cplx> c(coeffs_.size());
    for (int n = -d; n <= d; ++n)
        c[static_cast<std::size_t>(n + d)] = cplx(0.0, static_cast<double>(n)) * coeff(n);
    return PeriodicFn(std::move(c), d);
}

PeriodicFn PeriodicFn::derivative(int k) const {
    PeriodicFn f = *this;
    for (int i = 0; i < k; ++i) f = f.derivative();
    return f;
}

PeriodicFn PeriodicFn::antiderivative_of_meanfree() const {
    const int d = degree();
    std::vector<cplx> c(coeffs_.size(), cplx(0.0));
    cplx at_zero(0.0);
    for (int n = -d; n <= d; ++n) {
        if (n == 0) continue;
        cplx v = coeff(n) / cplx(0.0, static_cast<double>(n));
        c[static_cast<std::size_t>(n + d)] = v;
        at_zero += v;
    }
    PeriodicFn F(std::move(c), d);
    F.set_coeff(0, -at_zero);
    return F;
}

PeriodicFn PeriodicFn::real_part() const {
    const int d = degree();
    std::vector<cplx> c(coeffs_.size());
    for (int n = -d; n <= d; ++n)
        c[static_cast<std::size_t>(n + d)] = 0.5 * (coeff(n) + std::conj(coeff(-n)));
    return PeriodicFn(std::move(c), d);
}

PeriodicFn PeriodicFn::imag_part() const {
    const int d = degree();
    std::vector<cplx> c(coeffs_.size());
    for (int n = -d; n <= d; ++n)
        c[static_cast<std::size_t>(n + d)] =
            cplx(0.0, -0.5) * (coeff(n) - std::conj(coeff(-n)));
    return PeriodicFn(std::move(c), d);
}

PeriodicFn PeriodicFn::truncated(int new_degree) const {
    int d = std::min(new_degree, degree());
    std::vector<cplx> c(static_cast<std::size_t>(2 * d + 1));
    for (int n = -d; n <= d; ++n) c[static_cast<std::size_t>(n + d)] = coeff(n);
    return PeriodicFn(std::move(c), d);
}

PeriodicFn PeriodicFn::pruned(double tol) const {
    int d = degree();
    while (d > 0 && std::abs(coeff(d)) <= tol && std::abs(coeff(-d)) <= tol) --d;
    return truncated(d);
}

PeriodicFn& PeriodicFn::operator+=(const PeriodicFn& o) {
    int d = std::max(degree(), o.degree());
    std::vector<cplx> c(static_cast<std::size_t>(2 * d + 1));
    for (int n = -d; n <= d; ++n) c[static_cast<std::size_t>(n + d)] = coeff(n) + o.coeff(n);
    coeffs_ = std::move(c);
    return *this;
}

PeriodicFn& PeriodicFn::operator-=(const PeriodicFn& o) {
    int d = std::max(degree(), o.degree());
    std::vector<cplx> c(static_cast<std::size_t>(2 * d + 1));
    for (int n = -d; n <= d; ++n) c[static_cast<std::size_t>(n + d)] = coeff(n) - o.coeff(n);
    coeffs_ = std::move(c);
    return *this;
}

PeriodicFn operator*(const PeriodicFn& a, const PeriodicFn& b) {
    const int da = a.degree(), db = b.degree();
    const int d = da + db;
    std::vector<cplx> c(static_cast<std::size_t>(2 * d + 1), cplx(0.0));
    double peak = 0.0;
    for (int n = -da; n <= da; ++n) {
        const cplx an = a.coeff(n);
        if (an == cplx(0.0)) continue;
        for (int k = -db; k <= db; ++k)
            c[static_cast<std::size_t>(n + k + d)] += an * b.coeff(k);
    }
    for (const cplx& v : c) peak = std::max(peak, std::abs(v));
    // Far-below-roundoff tails only grow the degree of later products.
    return PeriodicFn(std::move(c), d).pruned(1e-18 * peak);
}

PeriodicFn operator*(cplx s, PeriodicFn f) {
    for (auto& c : f.coeffs_) c *= s;
    return f;
}

PeriodicFn PeriodicFn::shifted_modes(int p) const {
    const int d = degree();
    PeriodicFn out;
    for (int n = -d; n <= d; ++n)
        if (coeff(n) != cplx(0.0)) out.set_coeff(n + p, coeff(n));
    return out;
}

PeriodicFn map_pointwise(const PeriodicFn& f, const std::function<cplx(cplx)>& fn,
                         std::size_t grid, int max_degree) {
    std::vector<cplx> s = f.sample(grid);
    for (auto& v : s) v = fn(v);
    return PeriodicFn::project(s, max_degree);
}

PeriodicFn fn_sqrt(const PeriodicFn& f) {
    return map_pointwise(f, [](cplx v) {
        if (v.real() <= 0.0) throw GeometryError("fn_sqrt: non-positive value on grid");
        return cplx(std::sqrt(v.real()), 0.0);
    });
}

PeriodicFn fn_pow(const PeriodicFn& f, double e) {
    return map_pointwise(f, [e](cplx v) {
        if (v.real() <= 0.0) throw GeometryError("fn_pow: non-positive value on grid");
        return cplx(std::pow(v.real(), e), 0.0);
    });
}

PeriodicFn fn_reciprocal(const PeriodicFn& f) {
    return map_pointwise(f, [](cplx v) {
        if (std::abs(v) < 1e-300) throw EllipticityError("fn_reciprocal: vanishing value");
        return cplx(1.0) / v;
    });
}

PeriodicFn fn_exp(const PeriodicFn& f) {
    return map_pointwise(f, [](cplx v) { return std::exp(v); });
}

}  // namespace steklov
