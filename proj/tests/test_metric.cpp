#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsde/errors.hpp"
#include "gsde/metric.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace gsde;
using testing::dist1d;
using testing::measure1d;

namespace {

EmpiricalSublinearDistribution diracs(std::vector<double> points) {
    std::vector<WeightedMeasure> ms;
    for (double x : points) ms.push_back(WeightedMeasure::dirac1d(x));
    return dist1d(std::move(ms));
}

} // namespace

// ---- brute-force oracle first: frozen hand-checked values ----

TEST_CASE("bruteforce: two diracs give the gap") {
    CHECK(d1_bruteforce(diracs({3.0}), diracs({-1.0})) == doctest::Approx(4.0));
}

TEST_CASE("bruteforce: {d0, d2} vs {d1} gives 1 via the tent") {
    // support {0,1,2}, four zigzag candidates, every one scores 1
    CHECK(d1_bruteforce(diracs({0.0, 2.0}), diracs({1.0})) == doctest::Approx(1.0));
}

TEST_CASE("bruteforce: capacity cap enforced") {
    std::vector<double> many;
    for (int i = 0; i < 14; ++i) many.push_back(static_cast<double>(i));
    const auto big = dist1d({WeightedMeasure::uniform_on(std::move(many), 1)});
    CHECK_THROWS_AS(d1_bruteforce(big, diracs({0.0})), CapacityError);
}

// ---- LP metric against the oracle and PAPER identities ----

TEST_CASE("d1: identical objects have distance zero") {
    const auto F = dist1d({measure1d({0.0, 2.0}, {0.5, 0.5})});
    CHECK(d1(F, F).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("d1: diracs") {
    const auto r = d1(diracs({3.0}), diracs({-1.0}));
    CHECK(r.value == doctest::Approx(4.0));
    // witness must be 1-Lipschitz on the support and attain the value
    REQUIRE(r.witness.size() == 2);
    CHECK(std::abs(r.witness[1] - r.witness[0]) <=
          std::abs(r.support[1] - r.support[0]) + 1e-9);
}

TEST_CASE("d1: {d0,d2} vs {d1} equals 1") {
    CHECK(d1(diracs({0.0, 2.0}), diracs({1.0})).value == doctest::Approx(1.0));
}

TEST_CASE("d1: distance to the origin distribution is the absolute moment") {
    // F = uniform{0, 2}, F0 = dirac at 0: d1 = E|X| = 1
    const auto F = dist1d({measure1d({0.0, 2.0}, {0.5, 0.5})});
    const auto F0 = diracs({0.0});
    const auto r = d1(F, F0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.value ==
          doctest::Approx(F.evaluate(TestFunction::abs_value())).epsilon(1e-9));
}

TEST_CASE("d1: dimension mismatch rejected") {
    const auto F = diracs({0.0});
    const auto G = EmpiricalSublinearDistribution::dirac(std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(d1(F, G), InputError);
}

TEST_CASE("dr: scaling identity is one multiplication") {
    const auto F = diracs({3.0});
    const auto G = diracs({-1.0});
    CHECK(dr(F, G, 2.0) == doctest::Approx(8.0));
    CHECK(dr(F, G, 1.0) == doctest::Approx(4.0));
    CHECK(dr(dist1d({measure1d({0.0, 2.0}, {0.5, 0.5})}), diracs({1.0}), 0.5) ==
          doctest::Approx(0.5));
    CHECK_THROWS_AS(dr(F, G, 0.0), InputError);
    CHECK_THROWS_AS(dr(F, G, -1.0), InputError);
}

TEST_CASE("dr: exact scaling across r on random instances") {
    for (std::uint32_t trial = 0; trial < 20; ++trial) {
        const auto F = testing::random_pool_distribution(31, trial * 2 + 0, 8, 3, 4);
        const auto G = testing::random_pool_distribution(31, trial * 2 + 1, 8, 3, 4);
        const double base = d1(F, G).value;
        for (double r : {0.5, 1.0, 2.0, 10.0})
            CHECK(dr(F, G, r) == doctest::Approx(r * base).epsilon(1e-12));
    }
}

TEST_CASE("d1 equals the brute-force oracle on random pool instances") {
    for (std::uint32_t trial = 0; trial < 60; ++trial) {
        const auto F = testing::random_pool_distribution(7, trial * 2 + 0, 10, 3, 4);
        const auto G = testing::random_pool_distribution(7, trial * 2 + 1, 10, 3, 4);
        const double lp = d1(F, G).value;
        const double oracle = d1_bruteforce(F, G);
        CHECK(lp == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("d1: metric axioms on random instances") {
    for (std::uint32_t trial = 0; trial < 25; ++trial) {
        const auto F = testing::random_pool_distribution(13, trial * 3 + 0, 8, 2, 3);
        const auto G = testing::random_pool_distribution(13, trial * 3 + 1, 8, 2, 3);
        const auto H = testing::random_pool_distribution(13, trial * 3 + 2, 8, 2, 3);
        const double fg = d1(F, G).value;
        const double gf = d1(G, F).value;
        const double fh = d1(F, H).value;
        const double gh = d1(G, H).value;
        CHECK(fg == doctest::Approx(gf).epsilon(1e-9));          // symmetry
        CHECK(fh <= fg + gh + 1e-9);                             // triangle
        CHECK(d1(F, F).value <= 1e-9);                           // identity
        CHECK(fg >= -1e-12);
    }
}

TEST_CASE("d1: witness is Lipschitz and attains the value") {
    for (std::uint32_t trial = 0; trial < 10; ++trial) {
        const auto F = testing::random_pool_distribution(17, trial * 2 + 0, 9, 3, 4);
        const auto G = testing::random_pool_distribution(17, trial * 2 + 1, 9, 3, 4);
        const auto r = d1(F, G);
        const std::size_t m = r.support.size();
        REQUIRE(r.witness.size() == m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                CHECK(std::abs(r.witness[i] - r.witness[j]) <=
                      std::abs(r.support[i] - r.support[j]) + 1e-8);
        // evaluate both functionals at the witness
        auto eval = [&](const EmpiricalSublinearDistribution& dist) {
            double best = -1e300;
            for (std::size_t mi = 0; mi < dist.measure_count(); ++mi) {
                const auto& msr = dist.measure(mi);
                double mean = 0.0;
                for (std::size_t k = 0; k < msr.size(); ++k) {
                    const double x = msr.point(k)[0];
                    // locate x in the sorted support (exact copies)
                    const auto it =
                        std::lower_bound(r.support.begin(), r.support.end(), x);
                    mean += msr.weight(k) * r.witness[it - r.support.begin()];
                }
                best = std::max(best, mean);
            }
            return best;
        };
        const double gap = std::abs(eval(F) - eval(G));
        CHECK(gap == doctest::Approx(r.value).epsilon(1e-7));
    }
}

TEST_CASE("d1: zero distance certifies equality on Lipschitz evaluations") {
    // identical measure sets written in different orders
    const auto F = dist1d({measure1d({0.0, 1.0}, {0.5, 0.5}), measure1d({2.0}, {1.0})});
    const auto G = dist1d({measure1d({2.0}, {1.0}), measure1d({1.0, 0.0}, {0.5, 0.5})});
    const auto r = d1(F, G);
    CHECK(r.value <= 1e-10);
    for (double a : {-1.0, 0.3, 2.0}) {
        TestFunction tent([a](std::span<const double> x) { return -std::abs(x[0] - a); },
                          1.0, "tent");
        CHECK(F.evaluate(tent) == doctest::Approx(G.evaluate(tent)).epsilon(1e-9));
    }
}

// ---- degenerate equivalences ----

TEST_CASE("wasserstein1_1d: frozen cases") {
    const auto mu = measure1d({0.0, 2.0}, {0.5, 0.5});
    const auto nu = measure1d({1.0}, {1.0});
    CHECK(wasserstein1_1d(mu, mu) == doctest::Approx(0.0));
    CHECK(wasserstein1_1d(measure1d({3.0}, {1.0}), measure1d({-1.0}, {1.0})) ==
          doctest::Approx(4.0));
    CHECK(wasserstein1_1d(mu, nu) == doctest::Approx(1.0)); // quantile formula by hand
    const auto mu2 = WeightedMeasure(std::vector<double>{0.0, 0.0}, 2,
                                     std::vector<double>{1.0});
    CHECK_THROWS_AS(wasserstein1_1d(mu2, mu2), InputError);
}

TEST_CASE("d1 degenerates to wasserstein for single-measure instances") {
    for (std::uint32_t trial = 0; trial < 40; ++trial) {
        const auto F = testing::random_pool_distribution(19, trial * 2 + 0, 9, 1, 4);
        const auto G = testing::random_pool_distribution(19, trial * 2 + 1, 9, 1, 4);
        REQUIRE(F.measure_count() == 1);
        REQUIRE(G.measure_count() == 1);
        const double w = wasserstein1_1d(F.measure(0), G.measure(0));
        CHECK(d1(F, G).value == doctest::Approx(w).epsilon(1e-9));
    }
}

TEST_CASE("d1 to the origin equals the absolute-moment evaluation") {
    for (std::uint32_t trial = 0; trial < 25; ++trial) {
        const auto F = testing::random_pool_distribution(23, trial, 9, 3, 4);
        const auto F0 = diracs({0.0});
        CHECK(d1(F, F0).value ==
              doctest::Approx(F.evaluate(TestFunction::abs_value())).epsilon(1e-9));
    }
}

TEST_CASE("d1: adversarial geometry still matches the oracle") {
    // duplicated measures, coincident points across sides, near-zero gaps
    const auto F = dist1d({measure1d({0.0, 1.0}, {0.5, 0.5}),
                           measure1d({0.0, 1.0}, {0.5, 0.5}),
                           measure1d({0.0, 1.0 + 1e-13}, {0.25, 0.75})});
    const auto G = dist1d({measure1d({1.0}, {1.0}), measure1d({0.0, 0.0}, {0.3, 0.7})});
    const double lp = d1(F, G).value;
    const double oracle = d1_bruteforce(F, G);
    CHECK(lp == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(d1(F, F).value <= 1e-10);
    CHECK(d1(G, G).value <= 1e-10);
}

TEST_CASE("d1 stays exact at production support sizes (wasserstein cross-check)") {
    // single-measure instances admit the quantile-coupling oracle at any size
    for (std::size_t particles : {100u, 400u}) {
        std::vector<double> pa(particles), pb(particles);
        for (std::size_t i = 0; i < particles; ++i) {
            pa[i] = testing::uniform(41, 0, static_cast<std::uint32_t>(i), 0, -3.0, 3.0);
            pb[i] = testing::uniform(41, 1, static_cast<std::uint32_t>(i), 0, -2.0, 4.0);
        }
        const auto F = dist1d({WeightedMeasure::uniform_on(std::move(pa), 1)});
        const auto G = dist1d({WeightedMeasure::uniform_on(std::move(pb), 1)});
        const double w = wasserstein1_1d(F.measure(0), G.measure(0));
        CHECK(d1(F, G).value == doctest::Approx(w).epsilon(1e-9));
    }
}

// ---- process metric ----

TEST_CASE("d1T: constant processes reduce to d1") {
    const auto grid = TimeGrid::uniform(1.0, 4);
    const auto F = dist1d({measure1d({0.0, 2.0}, {0.5, 0.5})});
    const auto G = diracs({1.0});
    const DistributionProcess Fp(grid, std::vector(grid.size(), F));
    const DistributionProcess Gp(grid, std::vector(grid.size(), G));
    CHECK(d1T(Fp, Fp).value == doctest::Approx(0.0));
    const auto r = d1T(Fp, Gp);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("d1T: argmax lands on the one differing time") {
    const auto grid = TimeGrid::uniform(1.0, 3);
    const auto base = diracs({0.0});
    std::vector<EmpiricalSublinearDistribution> fs(grid.size(), base);
    std::vector<EmpiricalSublinearDistribution> gs(grid.size(), base);
    gs.back() = diracs({4.0}); // d1 = 4 at the last index only
    const DistributionProcess Fp(grid, fs);
    const DistributionProcess Gp(grid, gs);
    const auto r = d1T(Fp, Gp);
    CHECK(r.value == doctest::Approx(4.0));
    CHECK(r.argmax_time == grid.size() - 1);
    // truncation before the differing time sees zero
    CHECK(d1T(Fp, Gp, grid.size() - 2).value == doctest::Approx(0.0));
}

TEST_CASE("d1T: grid mismatch rejected") {
    const auto g1 = TimeGrid::uniform(1.0, 3);
    const auto g2 = TimeGrid::uniform(1.0, 4);
    const auto F = diracs({0.0});
    const DistributionProcess Fp(g1, std::vector(g1.size(), F));
    const DistributionProcess Gp(g2, std::vector(g2.size(), F));
    CHECK_THROWS_AS(d1T(Fp, Gp), InputError);
}

// ---- completeness smoke test ----

TEST_CASE("d1: converging supports form a Cauchy sequence with vanishing limit gap") {
    std::vector<EmpiricalSublinearDistribution> seq;
    for (int k = 1; k <= 6; ++k)
        seq.push_back(diracs({1.0 + 1.0 / k}));
    const auto limit = diracs({1.0});
    for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            const double expected = 1.0 / (i + 1.0) - 1.0 / (j + 1.0);
            CHECK(d1(seq[i], seq[j]).value == doctest::Approx(expected).epsilon(1e-9));
        }
        CHECK(d1(seq[i], limit).value == doctest::Approx(1.0 / (i + 1.0)).epsilon(1e-9));
    }
}

// ---- multi-dimensional LP path ----

TEST_CASE("d1 in two dimensions: dirac pair equals euclidean distance") {
    const auto F = EmpiricalSublinearDistribution::dirac(std::vector<double>{0.0, 0.0});
    const auto G = EmpiricalSublinearDistribution::dirac(std::vector<double>{3.0, 4.0});
    CHECK(d1(F, G).value == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(d1_bruteforce(F, G) == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("d1 in two dimensions: lower-bound sampler stays below the LP value") {
    // three-point supports in the plane
    const auto F = EmpiricalSublinearDistribution(
        {WeightedMeasure(std::vector<double>{0.0, 0.0, 1.0, 0.0}, 2,
                         std::vector<double>{0.5, 0.5})});
    const auto G = EmpiricalSublinearDistribution(
        {WeightedMeasure(std::vector<double>{0.0, 1.0, 1.0, 1.0}, 2,
                         std::vector<double>{0.5, 0.5})});
    const double lp = d1(F, G).value;
    const double sampled = d1_bruteforce(F, G);
    CHECK(sampled <= lp + 1e-9);
    CHECK(lp == doctest::Approx(1.0).epsilon(1e-9)); // pure vertical shift by 1
    CHECK(sampled == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("d1: pairwise capacity cap in higher dimension") {
    std::vector<double> pts;
    for (int i = 0; i < 100; ++i) {
        pts.push_back(static_cast<double>(i));
        pts.push_back(static_cast<double>(i % 7));
    }
    const auto big =
        EmpiricalSublinearDistribution({WeightedMeasure::uniform_on(std::move(pts), 2)});
    MetricOptions opts;
    opts.pairwise_cap = 64;
    CHECK_THROWS_AS(d1(big, big, opts), CapacityError);
}
