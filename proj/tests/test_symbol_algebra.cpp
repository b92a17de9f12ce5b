#include <cmath>
#include <random>

#include "doctest.h"
#include "steklov/errors.hpp"
#include "steklov/symbol.hpp"

using namespace steklov;

namespace {

HomogComponent abs_xi() {
    return HomogComponent::even(1.0, PeriodicFn::constant(1.0));
}

GradedSymbol random_symbol(std::mt19937& rng, double m, int depth, int bandwidth) {
    std::uniform_real_distribution<double> amp(-0.5, 0.5);
    std::vector<HomogComponent> comps;
    for (int i = 0; i < depth; ++i) {
        PeriodicFn p = PeriodicFn::constant(amp(rng) + (i == 0 ? 2.0 : 0.0));
        PeriodicFn q = PeriodicFn::constant(amp(rng) + (i == 0 ? 2.0 : 0.0));
        for (int n = 1; n <= bandwidth; ++n) {
            p += PeriodicFn::cosine(n, amp(rng));
            p += PeriodicFn::sine(n, amp(rng));
            q += PeriodicFn::cosine(n, amp(rng));
            q += PeriodicFn::sine(n, amp(rng));
        }
        comps.push_back(HomogComponent{m - i, p, q});
    }
    return GradedSymbol(m, std::move(comps));
}

double max_defect(const GradedSymbol& a, const GradedSymbol& b, int K) {
    double d = 0.0;
    for (int i = 0; i < K; ++i) d = std::max(d, (a.component(i) - b.component(i)).sup_norm());
    return d;
}

}  // namespace

TEST_CASE("xi derivative on the three stated shapes") {
    // |ξ| -> sgn ξ
    HomogComponent d1 = xi_derivative(abs_xi());
    CHECK(d1.order == 0.0);
    CHECK((d1.plus - PeriodicFn::constant(1.0)).sup_norm() < 1e-15);
    CHECK((d1.minus - PeriodicFn::constant(-1.0)).sup_norm() < 1e-15);
    // order-0 components are ξ-independent on each half-line
    HomogComponent d0 = xi_derivative(HomogComponent::even(0.0, PeriodicFn::constant(3.0)));
    CHECK(d0.is_zero(1e-15));
    CHECK(d0.order == -1.0);
    // Euler scaling at order 2
    HomogComponent c2{2.0, PeriodicFn::cosine(1, 1.0), PeriodicFn::cosine(1, 1.0)};
    HomogComponent d2 = xi_derivative(c2);
    CHECK((d2.plus - PeriodicFn::cosine(1, 2.0)).sup_norm() < 1e-15);
}

TEST_CASE("compose: x-independent symbols multiply") {
    GradedSymbol a = GradedSymbol::single(abs_xi(), true);
    GradedSymbol c = compose(a, a, 3);
    CHECK(c.leading_order() == 2.0);
    CHECK((c.component(0).plus - PeriodicFn::constant(1.0)).sup_norm() < 1e-15);
    CHECK((c.component(0).minus - PeriodicFn::constant(1.0)).sup_norm() < 1e-15);
    CHECK(c.component(1).is_zero(1e-15));
    CHECK(c.component(2).is_zero(1e-15));
}

TEST_CASE("compose: sgn-type order-0 against |ξ|") {
    PeriodicFn f = PeriodicFn::cosine(1, 1.0) + PeriodicFn::constant(0.5);
    GradedSymbol a = GradedSymbol::single(HomogComponent::odd(0.0, f), true);
    GradedSymbol b = GradedSymbol::single(abs_xi(), true);
    GradedSymbol c = compose(a, b, 2);
    // Leading slot is f(x) ξ; the next slot vanishes.
    CHECK((c.component(0).plus - f).sup_norm() < 1e-14);
    CHECK((c.component(0).minus + f).sup_norm() < 1e-14);
    CHECK(c.component(1).is_zero(1e-14));
}

TEST_CASE("compose: oscillating factor picks up the expansion term") {
    // a = |ξ|, b = e^{ix}|ξ|: slots ξ^2 e^{ix} and e^{ix} ξ.
    GradedSymbol a = GradedSymbol::single(abs_xi(), true);
    PeriodicFn osc = PeriodicFn::mode(1, 1.0);
    GradedSymbol b = GradedSymbol::single(HomogComponent::even(1.0, osc), true);
    GradedSymbol c = compose(a, b, 3);
    CHECK((c.component(0).plus - osc).sup_norm() < 1e-14);
    CHECK((c.component(0).minus - osc).sup_norm() < 1e-14);
    // Hand expansion of the k = 1 term: (-i) ∂_ξ|ξ| ∂_x(e^{ix}|ξ|) = e^{ix} ξ.
    CHECK((c.component(1).plus - osc).sup_norm() < 1e-14);
    CHECK((c.component(1).minus + osc).sup_norm() < 1e-14);
    CHECK(c.component(2).is_zero(1e-14));
}

TEST_CASE("compose of trig monomials against the hand-expansion oracle") {
    // Single-monomial branches let every expansion term be written down
    // directly: term k has plus branch fall(r_a,k) (i j_b)^k c_a c_b e^{i(j_a+j_b)x}.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        int ja = trial % 3 - 1, jb = (trial / 3) % 3 - 1;
        double ra = 1.0, rb = (trial % 2) ? 1.0 : 0.0;
        cplx ca(amp(rng), amp(rng)), cb(amp(rng), amp(rng));
        GradedSymbol a = GradedSymbol::single(
            HomogComponent{ra, PeriodicFn::mode(ja, ca), PeriodicFn::mode(ja, ca)}, true);
        GradedSymbol b = GradedSymbol::single(
            HomogComponent{rb, PeriodicFn::mode(jb, cb), PeriodicFn::mode(jb, cb)}, true);
        const int K = 3;
        GradedSymbol c = compose(a, b, K);
        for (int k = 0; k < K; ++k) {
            double fall = 1.0;
            for (int i = 0; i < k; ++i) fall *= (ra - i);
            cplx w = std::pow(cplx(0.0, -1.0), k) / std::tgamma(k + 1.0);
            cplx plus = w * fall * std::pow(cplx(0.0, 1.0) * static_cast<double>(jb), k) * ca * cb;
            double fall_m = 1.0;  // minus branch picks (-1)^k from the ξ-derivatives
            for (int i = 0; i < k; ++i) fall_m *= (ra - i);
            cplx minus = w * fall_m * std::pow(-1.0, k) *
                         std::pow(cplx(0.0, 1.0) * static_cast<double>(jb), k) * ca * cb;
            HomogComponent expect{ra + rb - k, PeriodicFn::mode(ja + jb, plus),
                                  PeriodicFn::mode(ja + jb, minus)};
            CHECK((c.component(k) - expect).sup_norm() < 1e-13);
        }
    }
}

TEST_CASE("compose raises on insufficient depth") {
    GradedSymbol shallow(1.0, {abs_xi()}, /*exact_below=*/false);
    GradedSymbol b = GradedSymbol::single(abs_xi(), true);
    CHECK_THROWS_AS(compose(shallow, b, 3), TruncationError);
}

TEST_CASE("compose is associative to truncation depth") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        GradedSymbol a = random_symbol(rng, 1.0, 4, 2);
        GradedSymbol b = random_symbol(rng, 1.0, 4, 2);
        GradedSymbol c = random_symbol(rng, 0.0, 4, 2);
        const int K = 4;
        GradedSymbol lhs = compose(a, compose(b, c, K), K);
        GradedSymbol rhs = compose(compose(a, b, K), c, K);
        CHECK(max_defect(lhs, rhs, K) < 1e-9);
    }
}

TEST_CASE("adjoint: x-independent real symbols are fixed") {
    std::vector<HomogComponent> comps = {abs_xi(),
                                         HomogComponent::odd(0.0, PeriodicFn::constant(0.3)),
                                         HomogComponent::even(-1.0, PeriodicFn::constant(0.1))};
    GradedSymbol a(1.0, comps, true);
    CHECK(max_defect(adjoint(a, 3), a, 3) < 1e-14);
}

TEST_CASE("adjoint: purely imaginary order-0 symbol flips sign") {
    PeriodicFn f = PeriodicFn::cosine(2, 0.7);
    HomogComponent c{0.0, cplx(0.0, 1.0) * f, cplx(0.0, -1.0) * f};  // i f sgn ξ
    GradedSymbol a = GradedSymbol::single(c, true);
    GradedSymbol st = adjoint(a, 2);
    CHECK((st.component(0).plus + cplx(0.0, 1.0) * f).sup_norm() < 1e-14);
    CHECK((st.component(0).minus - cplx(0.0, 1.0) * f).sup_norm() < 1e-14);
    CHECK(st.component(1).sup_norm() < 1e-14);
}

TEST_CASE("adjoint of e^{ix}|ξ| matches the term-by-term oracle") {
    PeriodicFn osc = PeriodicFn::mode(1, 1.0);
    GradedSymbol a = GradedSymbol::single(HomogComponent::even(1.0, osc), true);
    GradedSymbol st = adjoint(a, 3);
    PeriodicFn oscm = PeriodicFn::mode(-1, 1.0);
    // conj(a) = e^{-ix}|ξ|; the k = 1 term is -i ∂_ξ∂_x e^{-ix}|ξ| = -e^{-ix} sgn ξ.
    CHECK((st.component(0).plus - oscm).sup_norm() < 1e-14);
    CHECK((st.component(0).minus - oscm).sup_norm() < 1e-14);
    CHECK((st.component(1).plus + oscm).sup_norm() < 1e-14);
    CHECK((st.component(1).minus - oscm).sup_norm() < 1e-14);
    CHECK(st.component(2).sup_norm() < 1e-14);
}

TEST_CASE("adjoint is an involution to truncation depth") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 6; ++trial) {
        GradedSymbol a = random_symbol(rng, 1.0, 4, 2);
        CHECK(max_defect(adjoint(adjoint(a, 4), 4), a, 4) < 1e-9);
    }
}

TEST_CASE("parametrix: constants") {
    GradedSymbol two = GradedSymbol::single(HomogComponent::even(0.0, PeriodicFn::constant(2.0)),
                                            true);
    GradedSymbol r = parametrix(two, 3);
    CHECK((r.component(0).plus - PeriodicFn::constant(0.5)).sup_norm() < 1e-12);
    CHECK(r.component(1).is_zero(1e-12));
}

TEST_CASE("parametrix of |ξ| + c against the geometric-series oracle") {
    const double c = 0.4;
    GradedSymbol a(1.0, {abs_xi(), HomogComponent::even(0.0, PeriodicFn::constant(c))}, true);
    const int K = 4;
    GradedSymbol r = parametrix(a, K);
    // Constant symbols compose multiplicatively, so the inverse expands as
    // |ξ|^{-1} Σ (-c)^k |ξ|^{-k}.
    for (int k = 0; k < K; ++k) {
        double expect = std::pow(-c, k);
        CHECK(r.component(k).plus.mean().real() == doctest::Approx(expect).epsilon(1e-10));
        CHECK((r.component(k).plus - PeriodicFn::constant(expect)).sup_norm() < 1e-10);
    }
    GradedSymbol check = compose(r, a, K);
    CHECK((check.component(0).plus - PeriodicFn::constant(1.0)).sup_norm() < 1e-10);
    for (int k = 1; k < K; ++k) CHECK(check.component(k).sup_norm() < 1e-10);
}

TEST_CASE("parametrix requires ellipticity") {
    PeriodicFn vanishing = PeriodicFn::constant(0.5) + PeriodicFn::cosine(1, 1.0);
    GradedSymbol a = GradedSymbol::single(HomogComponent::even(1.0, vanishing), true);
    CHECK_THROWS_AS(parametrix(a, 2), EllipticityError);
}

TEST_CASE("parametrix inverts random elliptic symbols") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 4; ++trial) {
        GradedSymbol a = random_symbol(rng, 1.0, 4, 2);
        GradedSymbol r = parametrix(a, 4);
        GradedSymbol check = compose(r, a, 4);
        CHECK((check.component(0).plus - PeriodicFn::constant(1.0)).sup_norm() < 1e-10);
        for (int k = 1; k < 4; ++k) CHECK(check.component(k).sup_norm() < 1e-10);
    }
}
