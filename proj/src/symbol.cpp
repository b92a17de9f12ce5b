#include "steklov/symbol.hpp"

#include <cmath>
#include <string>

#include "steklov/errors.hpp"

namespace steklov {

HomogComponent HomogComponent::operator+(const HomogComponent& o) const {
    if (order != o.order) throw Error("HomogComponent: order mismatch in sum");
    return {order, plus + o.plus, minus + o.minus};
}

HomogComponent HomogComponent::operator-(const HomogComponent& o) const {
    if (order != o.order) throw Error("HomogComponent: order mismatch in difference");
    return {order, plus - o.plus, minus - o.minus};
}

HomogComponent xi_derivative(const HomogComponent& c) {
    return {c.order - 1.0, c.order * c.plus, -c.order * c.minus};
}

HomogComponent xi_derivative(const HomogComponent& c, int k) {
    HomogComponent out = c;
    for (int i = 0; i < k; ++i) out = xi_derivative(out);
    return out;
}

GradedSymbol::GradedSymbol(double leading_order, std::vector<HomogComponent> comps,
                           bool exact_below)
    : m_(leading_order), comps_(std::move(comps)), exact_below_(exact_below) {
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        double expect = m_ - static_cast<double>(i);
        if (std::abs(comps_[i].order - expect) > 1e-12)
            throw Error("GradedSymbol: component orders must descend by one");
        comps_[i].order = expect;
    }
}

GradedSymbol GradedSymbol::multiplication(const PeriodicFn& f) {
    return GradedSymbol(0.0, {HomogComponent{0.0, f, f}}, /*exact_below=*/true);
}

GradedSymbol GradedSymbol::identity() {
    return multiplication(PeriodicFn::constant(1.0));
}

GradedSymbol GradedSymbol::single(HomogComponent c, bool exact_below) {
    double m = c.order;
    return GradedSymbol(m, {std::move(c)}, exact_below);
}

HomogComponent GradedSymbol::component(int i) const {
    if (i < 0) throw Error("GradedSymbol::component: negative index");
    if (i < depth()) return comps_[static_cast<std::size_t>(i)];
    if (exact_below_) return HomogComponent::zero(m_ - static_cast<double>(i));
    throw TruncationError(
        "GradedSymbol: component of order " + std::to_string(m_ - i) +
            " not retained",
        m_ - i);
}

GradedSymbol GradedSymbol::truncated(int K) const {
    std::vector<HomogComponent> c;
    for (int i = 0; i < K && i < depth(); ++i) c.push_back(comps_[static_cast<std::size_t>(i)]);
    GradedSymbol out(m_, std::move(c), exact_below_ && K >= depth());
    out.self_adjoint_ = self_adjoint_;
    return out;
}

GradedSymbol GradedSymbol::padded(int K) const {
    std::vector<HomogComponent> c = comps_;
    while (static_cast<int>(c.size()) < K)
        c.push_back(HomogComponent::zero(m_ - static_cast<double>(c.size())));
    GradedSymbol out(m_, std::move(c), exact_below_);
    out.self_adjoint_ = self_adjoint_;
    return out;
}

GradedSymbol GradedSymbol::conjugate() const {
    std::vector<HomogComponent> c;
    c.reserve(comps_.size());
    for (const auto& k : comps_) c.push_back(k.conjugate());
    GradedSymbol out(m_, std::move(c), exact_below_);
    return out;
}

GradedSymbol GradedSymbol::operator+(const GradedSymbol& o) const {
    if (m_ != o.m_) {
        // Align leading orders by zero-padding the higher one downward.
        if (m_ > o.m_) {
            int shift = static_cast<int>(std::lround(m_ - o.m_));
            std::vector<HomogComponent> c;
            for (int i = 0; i < shift; ++i) c.push_back(HomogComponent::zero(o.m_ + shift - i));
            for (const auto& k : o.comps_) c.push_back(k);
            GradedSymbol lifted(m_, std::move(c), o.exact_below_);
            return *this + lifted;
        }
        return o + *this;
    }
    const bool exact = exact_below_ && o.exact_below_;
    int d;
    if (exact)
        d = std::max(depth(), o.depth());
    else if (exact_below_)
        d = o.depth();
    else if (o.exact_below_)
        d = depth();
    else
        d = std::min(depth(), o.depth());
    std::vector<HomogComponent> c;
    for (int i = 0; i < d; ++i) c.push_back(component(i) + o.component(i));
    return GradedSymbol(m_, std::move(c), exact);
}

GradedSymbol GradedSymbol::operator-(const GradedSymbol& o) const {
    return *this + o.scaled(cplx(-1.0));
}

GradedSymbol GradedSymbol::scaled(cplx s) const {
    std::vector<HomogComponent> c;
    c.reserve(comps_.size());
    for (const auto& k : comps_) c.push_back(k.scaled(s));
    return GradedSymbol(m_, std::move(c), exact_below_);
}

std::vector<double> GradedSymbol::adjoint_defect(int K) const {
    GradedSymbol adj = adjoint(*this, K);
    std::vector<double> out;
    for (int i = 0; i < K; ++i) out.push_back((adj.component(i) - component(i)).sup_norm());
    return out;
}

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// (-i)^k
cplx minus_i_pow(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

void require_depth(const GradedSymbol& s, int K, const char* who) {
    if (!s.exact_below() && s.depth() < K)
        throw TruncationError(std::string(who) + ": input truncated above order " +
                                  std::to_string(s.leading_order() - s.depth()),
                              s.leading_order() - s.depth());
}

}  // namespace

GradedSymbol compose(const GradedSymbol& a, const GradedSymbol& b, int K) {
    require_depth(a, K, "compose");
    require_depth(b, K, "compose");
    const double M = a.leading_order() + b.leading_order();
    std::vector<HomogComponent> out;
    out.reserve(static_cast<std::size_t>(K));
    for (int s = 0; s < K; ++s) out.push_back(HomogComponent::zero(M - s));

    // Slot s collects ∂_ξ^k a_i · ∂_x^k b_j with i + j + k = s.
    for (int i = 0; i < K; ++i) {
        HomogComponent ai = a.component(i);
        if (ai.is_zero()) continue;
        for (int k = 0; i + k < K; ++k) {
            HomogComponent dak = xi_derivative(ai, k);
            if (dak.is_zero()) break;  // homogeneity eventually kills integer orders only;
                                       // zero stays zero either way
            const cplx w = minus_i_pow(k) / factorial(k);
            for (int j = 0; i + k + j < K; ++j) {
                HomogComponent bj = b.component(j);
                if (bj.is_zero()) continue;
                HomogComponent term = dak * bj.x_derivative_k(k);
                out[static_cast<std::size_t>(i + j + k)] =
                    out[static_cast<std::size_t>(i + j + k)] + term.scaled(w);
            }
        }
    }
    // Slots below K generally stay nonzero, so the tail is unknown.
    return GradedSymbol(M, std::move(out), false);
}

GradedSymbol adjoint(const GradedSymbol& a, int K) {
    require_depth(a, K, "adjoint");
    const double M = a.leading_order();
    std::vector<HomogComponent> out;
    for (int s = 0; s < K; ++s) out.push_back(HomogComponent::zero(M - s));
    for (int i = 0; i < K; ++i) {
        HomogComponent ci = a.component(i).conjugate();
        for (int k = 0; i + k < K; ++k) {
            HomogComponent term = xi_derivative(ci, k).x_derivative_k(k);
            const cplx w = minus_i_pow(k) / factorial(k);
            out[static_cast<std::size_t>(i + k)] =
                out[static_cast<std::size_t>(i + k)] + term.scaled(w);
        }
    }
    return GradedSymbol(M, std::move(out), false);
}

GradedSymbol parametrix(const GradedSymbol& a, int K) {
    require_depth(a, K, "parametrix");
    HomogComponent a0 = a.component(0);
    // Ellipticity: branch moduli bounded away from zero on a dense grid, and
    // no sign change for real-valued branches (a crossing between nodes).
    for (const PeriodicFn* br : {&a0.plus, &a0.minus}) {
        auto sv = br->sample(2048);
        double lo = 1e300, hi = 0.0;
        bool pos = false, neg = false;
        for (const cplx& v : sv) {
            lo = std::min(lo, std::abs(v));
            hi = std::max(hi, std::abs(v));
            pos = pos || v.real() > 0.0;
            neg = neg || v.real() < 0.0;
        }
        const bool real_branch = br->is_real(1e-12 * std::max(1.0, hi));
        if (lo < 1e-8 * std::max(hi, 1e-30) || (real_branch && pos && neg))
            throw EllipticityError("parametrix: principal symbol vanishes");
    }

    PeriodicFn inv_plus = map_pointwise(a0.plus, [](cplx v) { return cplx(1.0) / v; });
    PeriodicFn inv_minus = map_pointwise(a0.minus, [](cplx v) { return cplx(1.0) / v; });
    const double mr = -a.leading_order();
    std::vector<HomogComponent> r;
    r.push_back(HomogComponent{mr, inv_plus, inv_minus});
    GradedSymbol result(mr, r, false);

    for (int s = 1; s < K; ++s) {
        // Residual of the current partial inverse at slot s; solve r_s a_0 = -residual.
        GradedSymbol padded = result.padded(s + 1);
        GradedSymbol prod = compose(padded, a.truncated(s + 1).padded(s + 1), s + 1);
        HomogComponent res_s = prod.component(s);
        HomogComponent rs{mr - s, -(res_s.plus * inv_plus), -(res_s.minus * inv_minus)};
        std::vector<HomogComponent> comps;
        for (int i = 0; i < result.depth(); ++i) comps.push_back(result.component(i));
        comps.push_back(rs);
        result = GradedSymbol(mr, std::move(comps), false);
    }

    // Residual check against the identity symbol.
    GradedSymbol check = compose(result, a, K);
    for (int s = 0; s < K; ++s) {
        HomogComponent c = check.component(s);
        if (s == 0) c = c - HomogComponent::even(0.0, PeriodicFn::constant(1.0));
        if (c.sup_norm() > 1e-10)
            throw Error("parametrix: residual above tolerance at order " +
                        std::to_string(-s));
    }
    return result;
}

GradedSymbol conjugate_by(const GradedSymbol& a, const GradedSymbol& u, int K) {
    GradedSymbol uinv = parametrix(u, K);
    return compose(uinv, compose(a, u.padded(K), K), K);
}

}  // namespace steklov
