#include <complex>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "orbitlab/arith/cyclotomic.hpp"
#include "orbitlab/arith/howell.hpp"
#include "orbitlab/arith/qpmodzp.hpp"
#include "orbitlab/arith/rational.hpp"

using namespace orbitlab;

namespace {

// Closure of the generators under addition, by breadth-first search.
std::set<Vec> brute_span(const Modulus& m, std::size_t dim, const std::vector<Vec>& gens) {
    std::set<Vec> seen{Vec(dim, 0)};
    std::vector<Vec> frontier{Vec(dim, 0)};
    while (!frontier.empty()) {
        std::vector<Vec> next;
        for (const auto& v : frontier)
            for (const auto& g : gens) {
                Vec w(dim);
                for (std::size_t j = 0; j < dim; ++j) w[j] = m.add(v[j], g[j]);
                if (seen.insert(w).second) next.push_back(w);
            }
        frontier = std::move(next);
    }
    return seen;
}

std::vector<Vec> random_rows(std::mt19937& rng, const Modulus& m, std::size_t rows, std::size_t cols) {
    std::uniform_int_distribution<std::int64_t> d(0, m.value() - 1);
    std::vector<Vec> out(rows, Vec(cols));
    for (auto& r : out)
        for (auto& x : r) x = d(rng) % 3 == 0 ? 0 : d(rng);
    return out;
}

std::complex<double> numeric(const CycNumber& z) {
    const double pi = std::acos(-1.0);
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < z.coefficients().size(); ++i)
        s += z.coefficients()[i].convert_to<double>() * std::polar(1.0, 2 * pi * double(i) / double(z.conductor()));
    return s;
}

} // namespace

TEST(Modulus, RejectsComposites) {
    EXPECT_THROW(Modulus(9, 1), InputError);
    EXPECT_THROW(Modulus(5, 0), InputError);
    EXPECT_NO_THROW(Modulus(7, 3));
}

TEST(Modulus, InverseAndValuation) {
    Modulus m(5, 2);
    for (std::int64_t a = 1; a < 25; ++a) {
        if (a % 5 == 0) {
            EXPECT_THROW(m.inverse(a), InputError);
            continue;
        }
        EXPECT_EQ(m.mul(a, m.inverse(a)), 1);
    }
    EXPECT_EQ(m.valuation(0), 2);
    EXPECT_EQ(m.valuation(10), 1);
    EXPECT_EQ(m.valuation(7), 0);
}

TEST(Residue, RingLaws) {
    Modulus m(3, 2);
    Residue a(4, m), b(7, m);
    EXPECT_EQ((a + b).value(), 2);
    EXPECT_EQ((a * b).value(), 1);
    EXPECT_EQ((a * a.inverse()).value(), 1);
    EXPECT_THROW(a + Residue(1, Modulus(5, 1)), InputError);
}

TEST(Howell, SpanMatchesBruteForce) {
    std::mt19937 rng(11);
    for (auto [p, k] : {std::pair{2, 2}, {3, 2}, {2, 3}, {5, 1}}) {
        Modulus m(p, k);
        for (int trial = 0; trial < 60; ++trial) {
            std::size_t dim = 1 + trial % 3, rows = 1 + (trial / 3) % 4;
            auto gens = random_rows(rng, m, rows, dim);
            Span s(m, dim, gens);
            auto oracle = brute_span(m, dim, gens);
            auto elems = s.elements();
            std::set<Vec> got(elems.begin(), elems.end());
            EXPECT_EQ(got.size(), elems.size());
            EXPECT_EQ(got, oracle);
            EXPECT_EQ(static_cast<std::size_t>(s.size()), oracle.size());
        }
    }
}

TEST(Howell, FormIsCanonical) {
    std::mt19937 rng(5);
    Modulus m(3, 2);
    for (int trial = 0; trial < 100; ++trial) {
        auto gens = random_rows(rng, m, 3, 3);
        Span a(m, 3, gens);
        auto more = gens;
        std::shuffle(more.begin(), more.end(), rng);
        Vec combo(3);
        for (std::size_t j = 0; j < 3; ++j) combo[j] = m.reduce(2 * gens[0][j] + 4 * gens[1][j]);
        more.push_back(combo);
        for (auto& x : more[0]) x = m.mul(x, 4);  // unit multiple
        Span b(m, 3, more);
        EXPECT_EQ(a, b);
    }
}

TEST(Howell, TransformReproducesForm) {
    std::mt19937 rng(2);
    Modulus m(2, 3);
    for (int trial = 0; trial < 50; ++trial) {
        ModMatrix a(m, 3, random_rows(rng, m, 4, 3));
        auto res = howell_form(a);
        EXPECT_EQ(res.transform * a, res.form);
    }
}

TEST(Howell, ReduceIsCosetCanonical) {
    std::mt19937 rng(8);
    Modulus m(3, 2);
    std::uniform_int_distribution<std::int64_t> d(0, 8);
    for (int trial = 0; trial < 30; ++trial) {
        Span s(m, 2, random_rows(rng, m, 2, 2));
        for (int t = 0; t < 20; ++t) {
            Vec v{d(rng), d(rng)};
            Vec r = s.reduce(v);
            Vec diff{m.sub(v[0], r[0]), m.sub(v[1], r[1])};
            EXPECT_TRUE(s.contains(diff));
            for (const auto& e : s.elements()) EXPECT_EQ(s.reduce({m.add(v[0], e[0]), m.add(v[1], e[1])}), r);
        }
    }
}

TEST(Howell, KernelMatchesBruteForce) {
    std::mt19937 rng(3);
    Modulus m(2, 2);
    for (int trial = 0; trial < 40; ++trial) {
        ModMatrix a(m, 2, random_rows(rng, m, 3, 2));
        Span ker(m, 3, kernel(a));
        std::set<Vec> oracle;
        for (std::int64_t x = 0; x < 4; ++x)
            for (std::int64_t y = 0; y < 4; ++y)
                for (std::int64_t z = 0; z < 4; ++z) {
                    bool zero = true;
                    for (std::size_t j = 0; j < 2; ++j)
                        if (m.reduce(x * a.at(0, j) + y * a.at(1, j) + z * a.at(2, j)) != 0) zero = false;
                    if (zero) oracle.insert({x, y, z});
                }
        auto elems = ker.elements();
        EXPECT_EQ(std::set<Vec>(elems.begin(), elems.end()), oracle);
    }
}

TEST(Rational, ResidueImage) {
    Modulus m(5, 1);
    EXPECT_EQ(rational_to_residue(Rational(1, 2), m), 3);
    EXPECT_EQ(rational_to_residue(Rational(-1, 12), m), 2);
    EXPECT_THROW(rational_to_residue(Rational(1, 5), m), InputError);
}

TEST(QpModZp, ParseAndPrint) {
    EXPECT_EQ(QpModZp::parse("2/5^2", 5).to_string(), "2/5^2");
    EXPECT_EQ(QpModZp::parse("10/25", 5).to_string(), "2/5");
    EXPECT_EQ(QpModZp::parse("0", 5).to_string(), "0");
    EXPECT_EQ(QpModZp::parse("7/5", 5).to_string(), "2/5");
    EXPECT_THROW(QpModZp::parse("1/6", 5), InputError);
    EXPECT_THROW(QpModZp::parse("a/5", 5), InputError);
    EXPECT_THROW(QpModZp::parse("1/3^1", 5), InputError);
    EXPECT_EQ(QpModZp::parse("1/3", 3) + QpModZp::parse("2/3", 3), QpModZp::zero(3));
}

TEST(Cyclotomic, RootsOfUnity) {
    for (auto [p, M] : {std::pair{3, 1}, {3, 2}, {5, 1}, {2, 3}, {3, 3}}) {
        auto z = CycNumber::root_of_unity(p, M, 1);
        CycNumber acc(p, M, Rational(1));
        for (std::int64_t i = 0; i < z.conductor(); ++i) {
            EXPECT_EQ(acc, CycNumber::root_of_unity(p, M, i));
            acc *= z;
        }
        EXPECT_EQ(acc, CycNumber(p, M, Rational(1)));
        CycNumber sum(p, M);
        for (std::int64_t i = 0; i < z.conductor(); ++i) sum += CycNumber::root_of_unity(p, M, i);
        EXPECT_TRUE(sum.is_zero());
    }
}

TEST(Cyclotomic, FieldAxiomsAgainstComplexNumbers) {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> d(-4, 4);
    for (auto [p, M] : {std::pair{3, 2}, {5, 1}, {7, 1}}) {
        for (int t = 0; t < 20; ++t) {
            CycNumber a(p, M), b(p, M), c(p, M);
            for (std::int64_t e = 0; e < ipow(p, M); ++e) {
                a += CycNumber::root_of_unity(p, M, e) * Rational(d(rng));
                b += CycNumber::root_of_unity(p, M, e) * Rational(d(rng), 3);
                c += CycNumber::root_of_unity(p, M, e) * Rational(d(rng));
            }
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_LT(std::abs(numeric(a * b) - numeric(a) * numeric(b)), 1e-9);
            EXPECT_LT(std::abs(numeric(a.conj()) - std::conj(numeric(a))), 1e-9);
            EXPECT_EQ((a * b).galois(2), a.galois(2) * b.galois(2));
            if (!a.is_zero()) {
                EXPECT_EQ(a * a.inverse(), CycNumber(p, M, Rational(1)));
            }
        }
    }
}

TEST(Cyclotomic, LiftIsCompatible) {
    auto z = CycNumber::root_of_unity(3, 1, 1);
    auto w = CycNumber::root_of_unity(3, 2, 3);
    EXPECT_EQ(z.lift(2), w);
    EXPECT_EQ(z, w);
    EXPECT_EQ(z + w, w * Rational(2));
}

TEST(Cyclotomic, EmbeddingIsInjectiveHomomorphism) {
    for (auto [p, M] : {std::pair{3, 2}, {5, 2}, {3, 4}, {2, 4}}) {
        std::set<std::vector<Rational>> images;
        const std::int64_t n = ipow(p, M);
        for (std::int64_t a = 0; a < n; ++a) {
            QpModZp x(p, a, M);
            auto img = cyc_embed(x, M);
            images.insert(img.coefficients());
            QpModZp y(p, 7 * a + 1, M);
            EXPECT_EQ(cyc_embed(x + y, M), img * cyc_embed(y, M));
        }
        EXPECT_EQ(static_cast<std::int64_t>(images.size()), n);
    }
    EXPECT_THROW(cyc_embed(QpModZp(3, 1, 2), 1), InputError);
}
