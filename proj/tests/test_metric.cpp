#include <cmath>
#include <complex>
#include <random>

#include "gtest/gtest.h"
#include "orbitlab/lazard/catalog.hpp"
#include "orbitlab/metric/fourier.hpp"
#include "orbitlab/metric/search.hpp"

using namespace orbitlab;
using cplx = std::complex<double>;

namespace {

cplx numeric(const CycNumber& z) {
    const double N = static_cast<double>(z.conductor());
    cplx s = 0;
    for (std::size_t i = 0; i < z.coefficients().size(); ++i)
        s += z.coefficients()[i].convert_to<double>() * std::polar(1.0, 2 * M_PI * static_cast<double>(i) / N);
    return s;
}

cplx e2pi(double t) { return std::polar(1.0, 2 * M_PI * t); }

// Direct floating-point Gauss sum from q given as a function on coordinates.
template <class Q>
cplx float_gauss(const AbelianGroup& g, Q q) {
    cplx s = 0;
    for (const auto& a : g.elements()) s += e2pi(q(a));
    return s;
}

MetricGroup hyper_b33() { return hyperbolic_metric(3, 1, 2); }

CycNumber rat(std::int64_t p, int M, std::int64_t n, std::int64_t d = 1) { return CycNumber(p, M, Rational(n, d)); }

} // namespace

TEST(MetricGroup, AxiomsAreChecked) {
    // B(g, g) must be 2 q(g).
    EXPECT_THROW(MetricGroup(AbelianGroup(5, {1}), {QpModZp(5, 1, 1)}, {{QpModZp(5, 1, 1)}}), VerificationFailure);
    // Gram entries must be symmetric.
    EXPECT_THROW(MetricGroup(AbelianGroup(3, {1, 1}), {QpModZp::zero(3), QpModZp::zero(3)},
                             {{QpModZp::zero(3), QpModZp(3, 1, 1)}, {QpModZp::zero(3), QpModZp::zero(3)}}),
                 VerificationFailure);
    // q(g) = 1/9 on Z/3 is not well defined.
    EXPECT_THROW(MetricGroup(AbelianGroup(3, {1}), {QpModZp(3, 1, 2)}, {{QpModZp(3, 2, 2)}}), VerificationFailure);
    EXPECT_THROW(AbelianGroup(6, {1}), InputError);
    EXPECT_NO_THROW(hyper_b33());
}

TEST(MetricGroup, QuadraticIdentities) {
    auto m = MetricGroup(AbelianGroup(3, {1, 2}), {QpModZp(3, 1, 1), QpModZp(3, 2, 2)},
                         {{QpModZp(3, 2, 1), QpModZp(3, 1, 1)}, {QpModZp(3, 1, 1), QpModZp(3, 4, 2)}});
    const auto& g = m.group();
    for (const auto& x : g.elements()) {
        EXPECT_EQ(m.q(g.neg(x)), m.q(x));
        for (const auto& y : g.elements()) EXPECT_EQ(m.q(g.add(x, y)) - m.q(x) - m.q(y), m.b(x, y));
    }
}

TEST(Gauss, TrivialGroup) {
    MetricGroup m(AbelianGroup(3, {}), {}, {});
    EXPECT_EQ(gauss_sum(m), rat(3, 0, 1));
}

TEST(Gauss, HyperbolicZ3xZ3) {
    auto m = hyperbolic_metric(3, 1);
    CycNumber G = gauss_sum(m);
    EXPECT_EQ(G, rat(3, 1, 3));
    cplx f = float_gauss(m.group(), [](const Vec& a) { return static_cast<double>(a[0] * a[1]) / 3; });
    EXPECT_NEAR(std::abs(numeric(G) - f), 0, 1e-9);
}

TEST(Gauss, CyclicNormIsOrder) {
    for (std::int64_t p : {3, 5, 7}) {
        auto m = cyclic_metric(p, 1);
        CycNumber G = gauss_sum(m);
        EXPECT_EQ(G * G.conj(), rat(p, 1, p));
        cplx f = float_gauss(m.group(), [&](const Vec& a) { return static_cast<double>(a[0] * a[0]) / p; });
        EXPECT_NEAR(std::abs(numeric(G) - f), 0, 1e-9);
        EXPECT_NEAR(std::norm(f), static_cast<double>(p), 1e-9);
    }
}

TEST(Gauss, LagrangianCardinality) {
    std::vector<MetricGroup> ms{hyperbolic_metric(3, 1), hyperbolic_metric(5, 1), hyperbolic_metric(3, 2),
                                hyperbolic_metric(3, 1, 2)};
    for (const auto& m : ms) {
        auto rep = gauss_report(m);
        EXPECT_TRUE(rep.nondegenerate);
        ASSERT_FALSE(rep.lagrangians.empty());
        for (const auto& a : rep.lagrangians) {
            EXPECT_EQ(a.size() * a.size(), m.size());
            EXPECT_EQ(rep.gauss, rat(m.p(), m.level(), a.size()));
        }
    }
    // Z/3 + Z/3 hyperbolic has exactly the two axes.
    EXPECT_EQ(gauss_report(hyperbolic_metric(3, 1)).lagrangians.size(), 2u);
}

TEST(Gauss, MilgramOnRandomForms) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        std::int64_t c1 = 1 + static_cast<std::int64_t>(rng() % 2), c2 = 1 + static_cast<std::int64_t>(rng() % 8);
        if (c2 % 3 == 0) c2 = 1;
        // q(x, y) = c1 x^2/3 + c2 y^2/9 on Z/3 + Z/9
        MetricGroup m(AbelianGroup(3, {1, 2}), {QpModZp(3, c1, 1), QpModZp(3, c2, 2)},
                      {{QpModZp(3, 2 * c1, 1), QpModZp::zero(3)}, {QpModZp::zero(3), QpModZp(3, 2 * c2, 2)}});
        ASSERT_TRUE(m.nondegenerate());
        CycNumber G = gauss_sum(m);
        EXPECT_EQ(G * G.conj(), rat(3, 2, 27));
    }
}

TEST(Gauss, DegeneracyDetected) {
    MetricGroup m(AbelianGroup(3, {1, 1}), {QpModZp(3, 1, 1), QpModZp::zero(3)},
                  {{QpModZp(3, 2, 1), QpModZp::zero(3)}, {QpModZp::zero(3), QpModZp::zero(3)}});
    EXPECT_FALSE(m.nondegenerate());
    EXPECT_EQ(*m.degeneracy_witness(), (Vec{0, 1}));
    EXPECT_THROW(ribbon_qhat(m), InputError);
}

TEST(Fourier, DeltaAtZeroIsConstant) {
    AbelianGroup g(3, {1, 2});
    auto f = fourier(GroupAlgebraElement::delta(g, g.zero(), 2));
    for (const auto& v : f) EXPECT_EQ(v, rat(3, 2, 1));
}

TEST(Fourier, DeltaOneOnZ3) {
    AbelianGroup g(3, {1});
    auto f = fourier(GroupAlgebraElement::delta(g, {1}, 1));
    EXPECT_EQ(f[0], rat(3, 1, 1));
    EXPECT_EQ(f[1], CycNumber::root_of_unity(3, 1, -1));
    EXPECT_EQ(f[2], CycNumber::root_of_unity(3, 1, -2));
}

TEST(Fourier, RoundTripAndNumericOracle) {
    std::mt19937_64 rng(11);
    for (auto orders : {std::vector<int>{2}, std::vector<int>{1, 2}, std::vector<int>{1, 1}}) {
        AbelianGroup g(3, orders);
        auto e = GroupAlgebraElement::zero(g, 2);
        for (auto& c : e.coeff) {
            std::vector<Rational> w(9);
            for (auto& x : w) x = Rational(static_cast<std::int64_t>(rng() % 7) - 3, 1 + static_cast<std::int64_t>(rng() % 4));
            c = CycNumber::from_root_weights(3, 2, w);
        }
        auto f = fourier(e);
        EXPECT_EQ(fourier_inverse(g, f), e);
        const int K = g.exponent_log();
        for (std::size_t ci = 0; ci < f.size(); ++ci) {
            Vec c = g.element(ci);
            cplx s = 0;
            for (std::size_t ai = 0; ai < e.coeff.size(); ++ai) {
                Vec a = g.element(ai);
                double t = 0;
                for (std::size_t i = 0; i < g.rank(); ++i)
                    t += static_cast<double>(c[i] * a[i]) / static_cast<double>(g.order(i));
                s += numeric(e.coeff[ai]) * e2pi(-t);
            }
            EXPECT_NEAR(std::abs(numeric(f[ci]) - s), 0, 1e-8);
        }
        (void)K;
    }
}

TEST(Fourier, ConvolutionBecomesProduct) {
    AbelianGroup g(5, {1});
    std::mt19937_64 rng(2);
    auto e = GroupAlgebraElement::zero(g, 1), h = GroupAlgebraElement::zero(g, 1);
    for (std::size_t i = 0; i < 5; ++i) {
        e.coeff[i] = CycNumber::root_of_unity(5, 1, static_cast<std::int64_t>(rng() % 5)) * Rational(static_cast<std::int64_t>(i) + 1);
        h.coeff[i] = CycNumber(5, 1, Rational(static_cast<std::int64_t>(rng() % 9) - 4));
    }
    auto fe = fourier(e), fh = fourier(h), fc = fourier(convolve(e, h));
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(fc[i], fe[i] * fh[i]);
}

TEST(Qhat, TrivialGroup) {
    MetricGroup m(AbelianGroup(5, {}), {}, {});
    auto q = ribbon_qhat(m);
    ASSERT_EQ(q.coeff.size(), 1u);
    EXPECT_EQ(q.coeff[0], rat(5, 0, 1));
}

TEST(Qhat, HyperbolicZ3xZ3) {
    auto m = hyperbolic_metric(3, 1);
    auto q = ribbon_qhat(m);
    for (const auto& a : m.group().elements())
        EXPECT_EQ(q.at(a), CycNumber::root_of_unity(3, 1, -a[0] * a[1]) * Rational(1, 3));
}

TEST(Qhat, TwoPathsAndZeroCoefficient) {
    std::vector<MetricGroup> ms{cyclic_metric(3, 1), cyclic_metric(5, 1), cyclic_metric(7, 1, 3),
                                hyperbolic_metric(3, 1), hyperbolic_metric(5, 1), hyperbolic_metric(3, 2),
                                hyperbolic_metric(3, 1, 2), cyclic_metric(3, 2, 2)};
    for (const auto& m : ms) {
        auto a = qhat_closed_form(m);
        auto b = qhat_by_fourier(m);
        EXPECT_EQ(a, b) << m.to_string();
        EXPECT_EQ(a.at(m.group().zero()), gauss_sum(m) * Rational(1, m.size()));
        // Floating oracle: (1/|P|) sum_b q~(b) B~(a, b).
        for (std::size_t ai = 0; ai < a.coeff.size(); ai += 3) {
            Vec x = m.group().element(ai);
            cplx s = 0;
            for (const auto& y : m.group().elements())
                s += e2pi(static_cast<double>(m.q_num(y) + m.b_num(x, y)) / static_cast<double>(ipow(m.p(), m.level())));
            s /= static_cast<double>(m.size());
            EXPECT_NEAR(std::abs(numeric(a.coeff[ai]) - s), 0, 1e-8);
        }
    }
}

TEST(Qhat, CentralityWitnessOnHeisenberg) {
    auto h = catalog::heisenberg(3);
    LazardGroup G(h);
    AbelianGroup g(3, {1, 1, 1});
    EXPECT_TRUE(centrality_witness(G, GroupAlgebraElement::delta(g, {0, 0, 1}, 1)) == std::nullopt);
    EXPECT_TRUE(centrality_witness(G, GroupAlgebraElement::delta(g, {1, 0, 0}, 1)).has_value());
}

TEST(ST, TrivialGroup) {
    auto md = st_matrices(MetricGroup(AbelianGroup(3, {}), {}, {}));
    EXPECT_EQ(md.S.entry(0, 0), rat(3, 0, 1));
    EXPECT_EQ(md.T.entry(0, 0), rat(3, 0, 1));
}

TEST(ST, HyperbolicRelations) {
    auto m = hyperbolic_metric(3, 1);
    auto md = st_matrices(m);
    EXPECT_EQ(md.D, 3);
    auto S2 = md.S * md.S;
    const auto& g = m.group();
    for (std::size_t a = 0; a < 9; ++a)
        for (std::size_t b = 0; b < 9; ++b)
            EXPECT_EQ(S2.entry(a, b), rat(3, 1, g.index(g.neg(g.element(a))) == b ? 1 : 0));
    EXPECT_EQ(md.gauss * Rational(1, md.D), rat(3, 1, 1));
}

TEST(ST, OtherSquareOrders) {
    // q = (x^2 + y^2)/3 has G = -3 and no Lagrangian.
    MetricGroup m(AbelianGroup(3, {1, 1}), {QpModZp(3, 1, 1), QpModZp(3, 1, 1)},
                  {{QpModZp(3, 2, 1), QpModZp::zero(3)}, {QpModZp::zero(3), QpModZp(3, 2, 1)}});
    auto md = st_matrices(m);
    EXPECT_EQ(md.gauss, rat(3, 1, -3));
    EXPECT_NO_THROW(st_matrices(hyperbolic_metric(3, 2)));
    EXPECT_NO_THROW(st_matrices(hyperbolic_metric(3, 1, 2)));
    EXPECT_NO_THROW(st_matrices(cyclic_metric(3, 2)));
}

TEST(ST, NonSquareOrderRejected) { EXPECT_THROW(st_matrices(cyclic_metric(5, 1)), InputError); }

TEST(SearchForms, AbelianZ3Squared) {
    auto res = search_invariant_forms(catalog::abelian(3, 1, 2));
    EXPECT_TRUE(res.complete);
    auto hyp = hyperbolic_metric(3, 1);
    bool found = false;
    for (const auto& f : res.forms) {
        EXPECT_TRUE(f.metric.nondegenerate());
        found = found || f.metric.gram() == hyp.gram();
    }
    EXPECT_TRUE(found);
}

TEST(SearchForms, AbelianZ9Squared) {
    auto res = search_invariant_forms(catalog::abelian(3, 2, 2));
    auto hyp = hyperbolic_metric(3, 2);
    bool found = false;
    for (const auto& f : res.forms) found = found || f.metric.gram() == hyp.gram();
    EXPECT_TRUE(found);
}

TEST(SearchForms, HeisenbergHasNone) {
    auto res = search_invariant_forms(catalog::heisenberg(3));
    EXPECT_TRUE(res.complete);
    EXPECT_TRUE(res.forms.empty());
    EXPECT_GT(res.invariant_grams, 0);
}

TEST(SearchForms, CapAndPrimeChecks) {
    EXPECT_THROW(search_invariant_forms(catalog::upper_triangular(5, 4)), InputError);
}
