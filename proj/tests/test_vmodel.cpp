#include <random>

#include "gtest/gtest.h"
#include "orbitlab/lazard/catalog.hpp"
#include "orbitlab/metric/search.hpp"
#include "orbitlab/vmodel/vmodel.hpp"

using namespace orbitlab;

namespace {

std::string failing_check(const VModelData& d) {
    try {
        validate_data(d);
    } catch (const VerificationFailure& e) {
        EXPECT_FALSE(e.witness().empty());
        return e.check();
    }
    return "";
}

MetricGroup diagonal3(int rank) {
    std::vector<QpModZp> qv(static_cast<std::size_t>(rank), QpModZp(3, 1, 1));
    std::vector<std::vector<QpModZp>> gram(static_cast<std::size_t>(rank),
                                           std::vector<QpModZp>(static_cast<std::size_t>(rank), QpModZp::zero(3)));
    for (int i = 0; i < rank; ++i) gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = QpModZp(3, 2, 1);
    return MetricGroup::on_ring_group(3, 1, rank, qv, gram);
}

VModelData heisenberg_data(std::vector<Vec> a_gens) {
    LieRing h = catalog::heisenberg(3);
    Span a(h.modulus(), 3, a_gens);
    return {h, a, diagonal3(3), lexmin_section(h, a)};
}

struct Instance {
    std::int64_t p;
    int k, n;
};

const std::vector<Instance> kHeadline{{3, 1, 1}, {5, 1, 1}, {7, 1, 1}, {3, 2, 1}, {3, 1, 2}};

} // namespace

TEST(VModelValidate, HyperbolicPasses) {
    EXPECT_NO_THROW(validate_data(hyperbolic_vmodel(3, 1)));
    EXPECT_NO_THROW(validate_data(hyperbolic_vmodel(3, 1, 2)));
}

TEST(VModelValidate, SectionMustVanishAtZero) {
    auto d = hyperbolic_vmodel(3, 1);
    d.section[0] = {1, 0};
    EXPECT_EQ(failing_check(d), "section");
    auto e = hyperbolic_vmodel(3, 1);
    e.section.pop_back();
    EXPECT_EQ(failing_check(e), "section");
    auto f = hyperbolic_vmodel(3, 1);
    f.section[2] = f.section[1];
    EXPECT_EQ(failing_check(f), "section");
}

TEST(VModelValidate, QMustVanishOnA) {
    auto d = hyperbolic_vmodel(3, 1);
    d.q = MetricGroup::on_ring_group(3, 1, 2, {QpModZp(3, 1, 1), QpModZp::zero(3)},
                                     {{QpModZp(3, 2, 1), QpModZp(3, 1, 1)}, {QpModZp(3, 1, 1), QpModZp::zero(3)}});
    EXPECT_EQ(failing_check(d), "lagrangian");
}

TEST(VModelValidate, DistinctAxiomWitnesses) {
    EXPECT_EQ(failing_check(heisenberg_data({{1, 0, 0}})), "ideal");
    EXPECT_EQ(failing_check(heisenberg_data({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})), "abelian");
    EXPECT_EQ(failing_check(heisenberg_data({{0, 1, 0}, {0, 0, 1}})), "invariance");
}

TEST(VModelValidate, SizeOfAMustBeHalf) {
    // q = xy/3 on Z/3 + Z/3 plus a zero-form summand: a = <e1> is isotropic but not Lagrangian.
    LieRing g = catalog::abelian(3, 1, 2);
    Span a(g.modulus(), 2, {Vec{1, 0}, Vec{0, 1}});
    VModelData d{g, a, hyperbolic_metric(3, 1), lexmin_section(g, a)};
    EXPECT_EQ(failing_check(d), "lagrangian");
}

TEST(VModelAction, HyperbolicFormula) {
    VModel m(hyperbolic_vmodel(3, 1));
    ASSERT_EQ(m.b_size(), 3u);
    for (std::int64_t a = 0; a < 3; ++a)
        for (std::int64_t b = 0; b < 3; ++b)
            for (std::size_t al = 0; al < 3; ++al)
                for (std::size_t be = 0; be < 3; ++be) {
                    // b is represented by (0, beta).
                    ASSERT_EQ(m.b_elements()[al], (Vec{0, static_cast<std::int64_t>(al)}));
                    Monomial x = m.act({a, b}, m.basis_index(al, be));
                    EXPECT_EQ(x.target, m.basis_index(al, static_cast<std::size_t>((static_cast<std::int64_t>(be) + b) % 3)));
                    EXPECT_EQ(x.exponent, (a * static_cast<std::int64_t>(al)) % 3);
                }
}

TEST(VModelAction, UnitAndCompositionExhaustive) {
    for (auto seed : {0u, 7u}) {
        auto d = hyperbolic_vmodel(3, 1);
        if (seed) d.section = random_section(d.ring, d.a, seed);
        VModel m(d);
        const auto els = d.ring.elements();
        for (std::size_t i = 0; i < m.dim(); ++i) {
            auto v = m.basis_vector(i);
            EXPECT_EQ(m.gamma_act(d.ring.zero(), v), v);
            for (const auto& g : els)
                for (const auto& h : els)
                    EXPECT_EQ(m.gamma_act(g, m.gamma_act(h, v)), m.gamma_act(m.group().mul(g, h), v));
        }
    }
}

TEST(VModelAction, Linear) {
    VModel m(hyperbolic_vmodel(5, 1));
    std::mt19937_64 rng(3);
    VModel::Vector v(m.dim(), CycNumber(5, 1)), w = v;
    for (auto& x : v) x = CycNumber::root_of_unity(5, 1, static_cast<std::int64_t>(rng() % 5)) * Rational(static_cast<std::int64_t>(rng() % 7) - 3);
    for (auto& x : w) x = CycNumber(5, 1, Rational(static_cast<std::int64_t>(rng() % 5), 2));
    VModel::Vector sum(m.dim(), CycNumber(5, 1));
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = v[i] + w[i];
    Vec g{2, 3};
    auto gv = m.gamma_act(g, v), gw = m.gamma_act(g, w), gs = m.gamma_act(g, sum);
    for (std::size_t i = 0; i < sum.size(); ++i) EXPECT_EQ(gs[i], gv[i] + gw[i]);
}

TEST(VModelEta, SliceAtBetaZero) {
    for (auto seed : {0u, 11u}) {
        auto d = hyperbolic_vmodel(3, 1, 2);
        if (seed) d.section = random_section(d.ring, d.a, seed);
        VModel m(d);
        for (std::size_t al = 0; al < m.b_size(); ++al) {
            auto v = m.eta(m.basis_vector(m.basis_index(al, 0)));
            auto want = m.basis_vector(m.basis_index(al, al));
            want[m.basis_index(al, al)] = d.q.q_tilde(m.s(al)).conj();
            EXPECT_EQ(v, want);
        }
    }
}

TEST(VModelEta, HyperbolicLinearSection) {
    VModel m(hyperbolic_vmodel(3, 1));
    for (std::size_t al = 0; al < 3; ++al)
        for (std::size_t be = 0; be < 3; ++be)
            EXPECT_EQ(m.eta(m.basis_index(al, be)), (Monomial{m.basis_index(al, (al + be) % 3), 0}));
}

TEST(VModelEta, RandomSectionHasNontrivialFactors) {
    auto d = hyperbolic_vmodel(5, 1);
    d.section = random_section(d.ring, d.a, 2);
    VModel m(d);
    bool nontrivial = false;
    for (std::size_t i = 0; i < m.dim(); ++i) nontrivial = nontrivial || m.eta(i).exponent != 0;
    EXPECT_TRUE(nontrivial);
}

TEST(VModelEta, EquivariantOnNine) {
    for (auto seed : {0u, 5u}) {
        auto d = hyperbolic_vmodel(3, 1);
        if (seed) d.section = random_section(d.ring, d.a, seed);
        VModel m(d);
        for (const auto& g : d.ring.elements())
            for (std::size_t i = 0; i < m.dim(); ++i) {
                auto v = m.basis_vector(i);
                EXPECT_EQ(m.eta(m.gamma_act(g, v)), m.gamma_act(g, m.eta(v)));
            }
    }
}

// eta against q^ from the metric-group module, applied through gamma_act.
TEST(VModelRibbon, AgreesWithGroupAlgebraQhat) {
    for (auto inst : {Instance{3, 1, 1}, Instance{3, 1, 2}}) {
        auto d = hyperbolic_vmodel(inst.p, inst.k, inst.n);
        d.section = random_section(d.ring, d.a, 99);
        VModel m(d);
        auto qhat = ribbon_qhat(d.q);
        for (std::size_t i = 0; i < m.dim(); i += 5) {
            auto v = m.basis_vector(i);
            VModel::Vector acc(m.dim(), CycNumber(inst.p, m.level()));
            for (std::size_t gi = 0; gi < qhat.coeff.size(); ++gi) {
                auto gv = m.gamma_act(qhat.group.element(gi), v);
                for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += gv[j] * qhat.coeff[gi];
            }
            EXPECT_EQ(acc, m.eta(v));
        }
    }
}

TEST(VModelRibbon, HeadlineInstancesBothSections) {
    for (const auto& inst : kHeadline)
        for (std::uint64_t seed : {0ull, 20261016ull}) {
            auto d = hyperbolic_vmodel(inst.p, inst.k, inst.n);
            if (seed) d.section = random_section(d.ring, d.a, seed);
            VModel m(d);
            auto rep = verify_ribbon(m);
            EXPECT_TRUE(rep.pass()) << inst.p << "^" << inst.k << " x" << inst.n << " seed " << seed << ": "
                                    << (rep.first_failure() ? rep.first_failure()->detail : "");
            EXPECT_EQ(rep.dim, m.order());
            EXPECT_EQ(rep.checks.size(), 6u);
        }
}

TEST(VModelRibbon, TrivialGroup) {
    VModel m(hyperbolic_vmodel(3, 1, 0));
    EXPECT_EQ(m.dim(), 1u);
    EXPECT_EQ(m.eta(0), (Monomial{0, 0}));
    EXPECT_EQ(ribbon_qhat(m.data().q).coeff[0], CycNumber(3, 0, Rational(1)));
    EXPECT_TRUE(verify_ribbon(m).pass());
}

TEST(VModelRibbon, ForgedEtaEntryIsCaught) {
    VModel m(hyperbolic_vmodel(3, 1));
    RibbonOptions opt;
    opt.forge_eta_column = 4;
    auto rep = verify_ribbon(m, opt);
    EXPECT_FALSE(rep.pass());
    bool theorem_failed = false;
    for (const auto& c : rep.checks)
        if (c.name == "eta=qhat") {
            theorem_failed = !c.pass;
            EXPECT_FALSE(c.counterexample.empty());
        }
    EXPECT_TRUE(theorem_failed);
}

TEST(VModelRibbon, SampledActionLaw) {
    VModel m(hyperbolic_vmodel(3, 1, 2));
    RibbonOptions opt;
    opt.exhaustive_limit = 10;
    opt.samples = 300;
    auto rep = verify_ribbon(m, opt);
    EXPECT_TRUE(rep.pass());
    EXPECT_NE(rep.checks[0].detail.find("sampled"), std::string::npos);
}

TEST(VModelRibbon, FormsFromSearch) {
    LieRing g = catalog::abelian(3, 1, 2);
    auto found = search_invariant_forms(g);
    ASSERT_FALSE(found.forms.empty());
    for (const auto& f : found.forms)
        for (const auto& a : f.lagrangian_ideals) {
            VModel m(VModelData{g, a, f.metric, lexmin_section(g, a)});
            EXPECT_TRUE(verify_ribbon(m).pass()) << f.metric.to_string();
        }
}

TEST(VModelRibbon, CapIsEnforced) { EXPECT_THROW(VModel(hyperbolic_vmodel(3, 1, 2), 80), InputError); }
