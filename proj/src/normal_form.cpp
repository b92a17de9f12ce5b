#include "steklov/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "steklov/errors.hpp"

namespace steklov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

cplx minus_i_pow(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

cplx i_pow(int k) { return std::conj(minus_i_pow(k)); }

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Falling product order*(order-1)*...*(order-k+1): the scalar picked up by k
// ξ-derivatives on the positive branch.
double falling(double order, int k) {
    double f = 1.0;
    for (int i = 0; i < k; ++i) f *= (order - i);
    return f;
}

}  // namespace

Step1Result nf_step1(const HomogComponent& a0, double m, const NormalFormOptions& opts) {
    if (m == 0.0) throw PreconditionError("nf_step1: order m must be nonzero");
    const double scale = std::max(1.0, a0.sup_norm());

    if (!a0.plus.is_real(1e-10) || !a0.minus.is_real(1e-10))
        throw SelfAdjointnessError("nf_step1: principal symbol must be real");

    int sym;
    if ((a0.minus - a0.plus).sup_norm() <= opts.symmetry_tol * scale)
        sym = 1;
    else if ((a0.minus + a0.plus).sup_norm() <= opts.symmetry_tol * scale)
        sym = -1;
    else
        throw SymmetryError("nf_step1: principal symbol is neither even nor odd across branches");

    std::vector<double> pv = a0.plus.sample_real(opts.grid);
    double vmin = pv[0], vmax = pv[0];
    for (double v : pv) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (vmin <= 0.0 && vmax >= 0.0)
        throw EllipticityError("nf_step1: principal symbol vanishes or changes sign");
    const double s0 = vmin > 0.0 ? 1.0 : -1.0;

    // b0(1) = sgn * (2π / ∫ |a0(x,1)|^{-1/m} dx)^m
    PeriodicFn absinv = fn_pow(s0 * a0.plus, -1.0 / m);
    const double integral = kTwoPi * absinv.mean().real();
    const double b0p = s0 * std::pow(kTwoPi / integral, m);
    const double b0m = sym * b0p;

    Step1Result r;
    r.b0_plus = b0p;
    r.b0_minus = b0m;
    r.symmetry_sign = sym;

    // phi'(y) = (b0(1)/a0(y,1))^{1/m} > 0, normalized to mean exactly 1.
    PeriodicFn phi_prime = fn_pow((s0 * b0p) * fn_pow(s0 * a0.plus, -1.0), 1.0 / m);
    const double pm = phi_prime.mean().real();
    phi_prime = (1.0 / pm) * phi_prime;
    r.phi_prime = phi_prime;
    r.identity = (phi_prime - PeriodicFn::constant(1.0)).sup_norm() < 1e-12;

    PeriodicFn phi_periodic = phi_prime.antiderivative_of_meanfree();
    const std::size_t G = opts.grid;
    r.phi_nodes.resize(G + 1);
    for (std::size_t t = 0; t < G; ++t) {
        double x = kTwoPi * t / static_cast<double>(G);
        r.phi_nodes[t] = x + phi_periodic.eval(x).real();
    }
    r.phi_nodes[G] = kTwoPi;
    for (std::size_t t = 0; t < G; ++t)
        if (!(r.phi_nodes[t + 1] > r.phi_nodes[t]))
            throw EllipticityError("nf_step1: phi is not strictly increasing");

    // Invert phi on the uniform target grid by Newton's method.
    r.psi_nodes.resize(G);
    double y = 0.0;
    for (std::size_t t = 0; t < G; ++t) {
        double target = kTwoPi * t / static_cast<double>(G);
        for (int it = 0; it < 50; ++it) {
            double f = y + phi_periodic.eval(y).real() - target;
            double fp = phi_prime.eval(y).real();
            double step = f / fp;
            y -= step;
            if (std::abs(step) < 1e-15) break;
        }
        r.psi_nodes[t] = y;
    }
    return r;
}

GradedSymbol transport_under_diffeo(const GradedSymbol& a, const Step1Result& s1,
                                    int K, const NormalFormOptions& opts) {
    if (s1.identity) return a.truncated(K).padded(K);

    const double m = a.leading_order();
    const std::size_t G = s1.psi_nodes.size();
    const int kmax = 2 * (K - 1);

    // Source-variable data evaluated at psi(target node).
    std::vector<std::vector<cplx>> aj_plus(static_cast<std::size_t>(K)),
        aj_minus(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        HomogComponent c = a.component(j);
        aj_plus[static_cast<std::size_t>(j)].resize(G);
        aj_minus[static_cast<std::size_t>(j)].resize(G);
        for (std::size_t t = 0; t < G; ++t) {
            aj_plus[static_cast<std::size_t>(j)][t] = c.plus.eval(s1.psi_nodes[t]);
            aj_minus[static_cast<std::size_t>(j)][t] = c.minus.eval(s1.psi_nodes[t]);
        }
    }
    std::vector<double> pprime(G);
    for (std::size_t t = 0; t < G; ++t)
        pprime[t] = s1.phi_prime.eval(s1.psi_nodes[t]).real();

    // phi^(j) at psi nodes for j = 2..kmax.
    std::vector<std::vector<double>> phider(static_cast<std::size_t>(kmax + 1),
                                            std::vector<double>(G, 0.0));
    {
        PeriodicFn d = s1.phi_prime;
        for (int j = 2; j <= kmax; ++j) {
            d = d.derivative();
            for (std::size_t t = 0; t < G; ++t)
                phider[static_cast<std::size_t>(j)][t] = d.eval(s1.psi_nodes[t]).real();
        }
    }

    // Oscillatory-phase polynomials: partial Bell recursion in (k, r) where r
    // counts frequency powers; entry B[k][r] holds the grid values.
    // B[k+1][r] = Σ_{j>=1} C(k,j) B[k-j][r-1] phi^{(j+1)}.
    std::vector<std::vector<std::vector<double>>> B(
        static_cast<std::size_t>(kmax + 1));
    B[0] = {std::vector<double>(G, 1.0)};
    for (int k = 0; k < kmax; ++k) {
        int rmax_next = (k + 1) / 2 + 1;
        std::vector<std::vector<double>> next(
            static_cast<std::size_t>(rmax_next + 1), std::vector<double>(G, 0.0));
        for (int j = 1; j <= k; ++j) {
            const double c = binom(k, j);
            const auto& prev = B[static_cast<std::size_t>(k - j)];
            const auto& ph = phider[static_cast<std::size_t>(j + 1)];
            for (std::size_t r = 0; r + 1 <= static_cast<std::size_t>(rmax_next); ++r) {
                if (r >= prev.size()) break;
                auto& dst = next[r + 1];
                const auto& src = prev[r];
                for (std::size_t t = 0; t < G; ++t) dst[t] += c * src[t] * ph[t];
            }
        }
        if (k == 0) {
            // B[1] comes from the vanished first-order phase term; all zero.
        }
        B[static_cast<std::size_t>(k + 1)] = std::move(next);
    }

    // Accumulate slot s = j + k - r on the target grid, then project.
    std::vector<std::vector<cplx>> slot_plus(static_cast<std::size_t>(K),
                                             std::vector<cplx>(G, cplx(0.0)));
    auto slot_minus = slot_plus;
    for (int j = 0; j < K; ++j) {
        const double oj = m - j;
        for (int k = 0; k <= kmax; ++k) {
            const double fall = falling(oj, k);
            const cplx wk = minus_i_pow(k) / factorial(k);
            const auto& bk = B[static_cast<std::size_t>(k)];
            for (std::size_t r = 0; r < bk.size(); ++r) {
                const int s = j + k - static_cast<int>(r);
                if (s < 0 || s >= K) continue;
                // k ξ-derivatives on the minus branch pick up (-1)^k; the
                // frequency factor contributes i^r on ξ>0 and (-i)^r on ξ<0.
                const cplx cp = wk * fall * i_pow(static_cast<int>(r));
                const cplx cm = wk * fall * std::pow(-1.0, k) *
                                std::conj(i_pow(static_cast<int>(r)));
                auto& sp = slot_plus[static_cast<std::size_t>(s)];
                auto& sm = slot_minus[static_cast<std::size_t>(s)];
                const auto& ap = aj_plus[static_cast<std::size_t>(j)];
                const auto& am = aj_minus[static_cast<std::size_t>(j)];
                for (std::size_t t = 0; t < G; ++t) {
                    const double pw = std::pow(pprime[t], oj - k);
                    sp[t] += cp * ap[t] * pw * bk[r][t];
                    sm[t] += cm * am[t] * pw * bk[r][t];
                }
            }
        }
    }

    std::vector<HomogComponent> comps;
    for (int s = 0; s < K; ++s) {
        comps.push_back(HomogComponent{
            m - s,
            PeriodicFn::project(slot_plus[static_cast<std::size_t>(s)], opts.max_degree),
            PeriodicFn::project(slot_minus[static_cast<std::size_t>(s)], opts.max_degree)});
    }
    GradedSymbol f(m, std::move(comps), false);

    // Weight by the square root of the Jacobian on both sides so the overall
    // conjugation is unitary.
    std::vector<cplx> jhalf(G), jmhalf(G);
    for (std::size_t t = 0; t < G; ++t) {
        jhalf[t] = std::sqrt(1.0 / pprime[t]);
        jmhalf[t] = std::sqrt(pprime[t]);
    }
    GradedSymbol left =
        GradedSymbol::multiplication(PeriodicFn::project(jhalf, opts.max_degree));
    GradedSymbol right =
        GradedSymbol::multiplication(PeriodicFn::project(jmhalf, opts.max_degree));
    return compose(left, compose(f, right, K), K);
}

namespace {

void require_flat_leading(const GradedSymbol& e, double tol, const char* who) {
    HomogComponent e0 = e.component(0);
    double scale = std::max(1.0, e0.sup_norm());
    if (!e0.plus.is_constant(tol * scale) || !e0.minus.is_constant(tol * scale))
        throw PreconditionError(std::string(who) +
                                ": leading component must be x-independent");
}

}  // namespace

DensityFix density_fix(const GradedSymbol& e, int K, const NormalFormOptions& opts) {
    require_flat_leading(e, opts.per_order_tol, "density_fix");
    const double m = e.leading_order();
    const double b0p = e.component(0).plus.mean().real();
    const double b0m = e.component(0).minus.mean().real();

    HomogComponent e1 = e.component(1);
    PeriodicFn gp = (1.0 / (m * b0p)) * e1.plus.imag_part();
    PeriodicFn gm = (-1.0 / (m * b0m)) * e1.minus.imag_part();
    const double scale = std::max(1.0, e1.sup_norm());
    if ((gp - gm).sup_norm() > 1e-8 * scale)
        throw SelfAdjointnessError(
            "density_fix: branch-inconsistent first-order defect");
    PeriodicFn g = 0.5 * (gp + gm);
    if (std::abs(g.mean().real()) > 1e-8 * scale)
        throw SelfAdjointnessError(
            "density_fix: first-order defect has nonzero mean; no periodic density");

    DensityFix out;
    if (g.sup_norm() < 1e-13) {
        out.rho = PeriodicFn::constant(1.0);
        out.fixed = e.truncated(K).padded(K);
        return out;
    }
    out.rho = fn_exp(g.antiderivative_of_meanfree());
    out.fixed = conjugate_by(e, GradedSymbol::multiplication(out.rho), K);
    return out;
}

Step2Result nf_step2(const GradedSymbol& e, long p, int K, const NormalFormOptions& opts) {
    require_flat_leading(e, opts.per_order_tol, "nf_step2");
    const double m = e.leading_order();
    const double b0p = e.component(0).plus.mean().real();
    const double b0m = e.component(0).minus.mean().real();

    HomogComponent e1 = e.component(1);
    const double scale = std::max(1.0, e1.sup_norm());
    if (e1.plus.imag_part().sup_norm() > opts.reality_tol * scale ||
        e1.minus.imag_part().sup_norm() > opts.reality_tol * scale)
        throw SelfAdjointnessError("nf_step2: first-order component is not real");
    PeriodicFn a1p = e1.plus.real_part();
    PeriodicFn a1m = e1.minus.real_part();

    Step2Result r;
    r.b1_plus = m * static_cast<double>(p) * b0p + a1p.mean().real();
    r.b1_minus = -m * static_cast<double>(p) * b0m + a1m.mean().real();

    // Unit-modulus conjugator: exp(i ∫ (b1 - a1)/(m ξ^{-1} a0)), whose winding
    // number is exactly p by the choice of b1.
    PeriodicFn expo_p =
        (1.0 / (m * b0p)) * (PeriodicFn::constant(r.b1_plus) - a1p).antiderivative_of_meanfree();
    PeriodicFn expo_m =
        (1.0 / (-m * b0m)) * (PeriodicFn::constant(r.b1_minus) - a1m).antiderivative_of_meanfree();
    PeriodicFn k1p = fn_exp(cplx(0.0, 1.0) * expo_p).shifted_modes(static_cast<int>(p));
    PeriodicFn k1m = fn_exp(cplx(0.0, 1.0) * expo_m).shifted_modes(static_cast<int>(p));
    r.k1 = HomogComponent{0.0, k1p, k1m};

    for (cplx v : k1p.sample(512))
        if (std::abs(std::abs(v) - 1.0) > 1e-10)
            throw SelfAdjointnessError("nf_step2: conjugator lost unit modulus");

    r.conjugated = conjugate_by(e, GradedSymbol::single(r.k1, /*exact_below=*/true), K);
    return r;
}

NormalFormResult normal_form(const GradedSymbol& a, int K, std::optional<long> p_opt,
                             const NormalFormOptions& opts) {
    const double m = a.leading_order();
    if (m == 0.0) throw PreconditionError("normal_form: order m must be nonzero");
    if (!a.self_adjoint_flag())
        throw SelfAdjointnessError("normal_form: self-adjoint flag not set");
    if (!a.exact_below() && a.depth() < K)
        throw TruncationError("normal_form: input depth below requested K",
                              m - a.depth());

    GradedSymbol input = a.padded(K);

    Step1Result s1 = nf_step1(input.component(0), m, opts);
    GradedSymbol e = transport_under_diffeo(input, s1, K, opts);

    DensityFix fix = density_fix(e, K, opts);
    e = fix.fixed;

    if (opts.symmetrize_tail_from >= 0) {
        // Unknown truncation tail: replace it by the self-adjoint completion
        // (the average with the adjoint), which leaves determined orders alone.
        GradedSymbol sym = (e + adjoint(e, K)).scaled(0.5);
        for (int i = 0; i < std::min(K, opts.symmetrize_tail_from); ++i) {
            HomogComponent diff = sym.component(i) - e.component(i);
            double scale = std::max(1.0, e.component(i).sup_norm());
            if (diff.sup_norm() > 1e-8 * scale)
                throw SelfAdjointnessError(
                    "normal_form: determined orders moved under self-adjoint completion");
        }
        e = sym;
    }

    long p;
    if (p_opt) {
        p = *p_opt;
    } else {
        // Canonical winding: b1/(m b0) lands in [0, 1).
        const double t = e.component(1).plus.real_part().mean().real() / (m * s1.b0_plus);
        double pf = -std::floor(t);
        if (t + pf >= 1.0) pf -= 1.0;
        p = static_cast<long>(pf);
    }

    Step2Result s2 = nf_step2(e, p, K, opts);
    e = s2.conjugated;

    NormalFormResult res;
    res.b.emplace_back(s1.b0_plus, s1.b0_minus);
    res.b.emplace_back(s2.b1_plus, s2.b1_minus);
    res.phi_nodes = s1.phi_nodes;
    res.k1 = s2.k1;
    res.p = p;
    res.density_weight = fix.rho;

    const double b0p = s1.b0_plus;
    const double b0m = s1.b0_minus;
    for (int l = 2; l < K; ++l) {
        HomogComponent el = e.component(l);
        const double scale = std::max(1.0, el.sup_norm());
        cplx blp = el.plus.mean();
        cplx blm = el.minus.mean();
        if (std::abs(blp.imag()) > opts.reality_tol * scale ||
            std::abs(blm.imag()) > opts.reality_tol * scale)
            throw SelfAdjointnessError("normal_form: non-real coefficient at order " +
                                       std::to_string(m - l));
        res.b.emplace_back(blp.real(), blm.real());
        if (l == K - 1) break;  // nothing below this order is retained

        // Conjugate by id + c_l to flatten order m - l.
        PeriodicFn cl_p = (cplx(0.0, 1.0) / (m * b0p)) *
                          (PeriodicFn::constant(blp) - el.plus).antiderivative_of_meanfree();
        PeriodicFn cl_m = (cplx(0.0, 1.0) / (-m * b0m)) *
                          (PeriodicFn::constant(blm) - el.minus).antiderivative_of_meanfree();
        std::vector<HomogComponent> kcomps;
        kcomps.push_back(HomogComponent::even(0.0, PeriodicFn::constant(1.0)));
        for (int i = 1; i < l - 1; ++i) kcomps.push_back(HomogComponent::zero(-i));
        kcomps.push_back(HomogComponent{1.0 - l, cl_p, cl_m});
        GradedSymbol Kl(0.0, std::move(kcomps), /*exact_below=*/true);
        e = conjugate_by(e, Kl, K);

        // Flattened orders must now be x-independent within tolerance.
        for (int s = 0; s <= l; ++s) {
            HomogComponent cs = e.component(s);
            double sc = std::max(1.0, cs.sup_norm());
            if (!cs.plus.is_constant(opts.per_order_tol * sc) ||
                !cs.minus.is_constant(opts.per_order_tol * sc))
                throw Error("normal_form: residual x-dependence at order " +
                            std::to_string(m - s));
        }
    }
    res.normalized = e;
    return res;
}

std::pair<double, double> b2_closed_form(const HomogComponent& a0,
                                         const HomogComponent& a1,
                                         const HomogComponent& a2,
                                         std::pair<double, double> b1, double m,
                                         const NormalFormOptions& /*opts*/) {
    if (!a0.plus.is_constant(1e-10) || !a0.minus.is_constant(1e-10))
        throw PreconditionError("b2_closed_form: leading component must be x-independent");
    const double b0p = a0.plus.mean().real();
    const double b0m = a0.minus.mean().real();
    if (b0p == 0.0 || b0m == 0.0)
        throw EllipticityError("b2_closed_form: vanishing leading component");

    auto branch = [&](const PeriodicFn& a1b, const PeriodicFn& a2b, double b1b,
                      double b0b, double xi_sign) {
        const double h = m * xi_sign * b0b;  // m ξ^{-1} a0 at ξ = ±1
        PeriodicFn diff = PeriodicFn::constant(b1b) - a1b;
        PeriodicFn expo = (1.0 / h) * diff.antiderivative_of_meanfree();
        const double wind = (b1b - a1b.mean().real()) / h * 1.0;  // per 2π / (2π)
        const double p_real = wind;
        const long p = std::lround(p_real);
        if (std::abs(p_real - static_cast<double>(p)) > 1e-8)
            throw PreconditionError("b2_closed_form: conjugator winding is not integral");
        PeriodicFn k1 = fn_exp(cplx(0.0, 1.0) * expo).shifted_modes(static_cast<int>(p));
        PeriodicFn ratio = k1.derivative(2) * fn_reciprocal(k1);
        PeriodicFn middle = ((m - 1.0) / m) * (1.0 / b0b) * (a1b * (diff));
        PeriodicFn last = (-0.5 * m * (m - 1.0) * b0b) * ratio;
        cplx total = a2b.mean() + middle.mean() + last.mean();
        return total.real();
    };

    double bp = branch(a1.plus, a2.plus, b1.first, b0p, 1.0);
    double bm = branch(a1.minus, a2.minus, b1.second, b0m, -1.0);
    return {bp, bm};
}

}  // namespace steklov
