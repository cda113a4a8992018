#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvt/montecarlo.hpp"
#include "support/test_support.hpp"

using namespace cvt;
using cvt::testing::Rng;

namespace {

constexpr double kPi = 3.14159265358979323846;

GaussianInput vacuum_input() { return {Eigen::Vector2d::Zero(), vacuum_one_mode()}; }

double gaussian_cdf(double x, double mean, double var) {
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * var));
}

// Pearson chi^2 of a sample against a Gaussian marginal: 24 interior bins
// over mean +/- 4 sigma plus two tails (25 dof). 1% critical value.
double marginal_chi2(const std::vector<double>& xs, double mean, double var) {
    constexpr int kInterior = 24;
    double sigma = std::sqrt(var);
    double lo = mean - 4.0 * sigma, hi = mean + 4.0 * sigma;
    double width = (hi - lo) / kInterior;
    std::vector<double> counts(kInterior + 2, 0.0);
    for (double x : xs) {
        int bin = (x < lo) ? 0
                  : (x >= hi) ? kInterior + 1
                              : 1 + static_cast<int>((x - lo) / width);
        counts[static_cast<std::size_t>(bin)] += 1.0;
    }
    double chi2 = 0.0;
    double n = static_cast<double>(xs.size());
    for (int b = 0; b < kInterior + 2; ++b) {
        double a = (b == 0) ? -1e300 : lo + (b - 1) * width;
        double z = (b == kInterior + 1) ? 1e300 : lo + b * width;
        double expected = n * (gaussian_cdf(z, mean, var) - gaussian_cdf(a, mean, var));
        chi2 += (counts[static_cast<std::size_t>(b)] - expected) *
                (counts[static_cast<std::size_t>(b)] - expected) / expected;
    }
    return chi2;
}

constexpr double kChi2Crit25At1Percent = 44.31410489621915;

} // namespace

TEST_CASE("outcome distribution") {
    auto balanced = MeasurementGeometry::balanced();
    SUBCASE("vacuum input and resource") {
        auto dist = outcome_distribution(vacuum_input(), vacuum_two_mode(), balanced);
        CHECK(dist.mean.norm() == 0.0);
        CHECK((dist.cov - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("coherent input shifts the outcome mean by the rotated quadratures") {
        GaussianInput in{{std::sqrt(2.0) * 0.5, std::sqrt(2.0) * 0.3}, vacuum_one_mode()};
        MeasurementGeometry g(kPi / 3);
        auto dist = outcome_distribution(in, vacuum_two_mode(), g);
        CHECK(dist.mean[0] == doctest::Approx(std::cos(kPi / 3) * std::sqrt(2.0) * 0.5)
                                  .epsilon(1e-14));
        CHECK(dist.mean[1] == doctest::Approx(std::sin(kPi / 3) * std::sqrt(2.0) * 0.3)
                                  .epsilon(1e-14));
    }
    SUBCASE("TMSV resource widens the outcomes") {
        auto dist = outcome_distribution(vacuum_input(), tmsv(1.0), balanced);
        double expected = 0.25 + 0.25 * std::cosh(2.0);
        CHECK(dist.cov(0, 0) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(dist.cov(1, 1) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(dist.cov(0, 1) == doctest::Approx(0.0));
    }
    SUBCASE("sampled outcomes match the analytic Gaussian (chi^2 at 1%)") {
        GaussianInput in{{0.7, -0.4}, squeezed_thermal(0.3, 0.2)};
        auto v = tmsv(0.6);
        MeasurementGeometry g(0.6);
        auto dist = outcome_distribution(in, v, g);
        std::vector<double> qs, ps;
        qs.reserve(1000000);
        ps.reserve(1000000);
        run_ensemble(in, v, g, 1000000, 20250810,
                     [&](const OutcomeSample& s) {
                         qs.push_back(s.q);
                         ps.push_back(s.p);
                     });
        CHECK(marginal_chi2(qs, dist.mean[0], dist.cov(0, 0)) < kChi2Crit25At1Percent);
        CHECK(marginal_chi2(ps, dist.mean[1], dist.cov(1, 1)) < kChi2Crit25At1Percent);
    }
}

TEST_CASE("conditional Bob state") {
    auto balanced = MeasurementGeometry::balanced();
    SUBCASE("all-vacuum, outcome at the origin") {
        auto state = conditional_bob_state(vacuum_input(), vacuum_two_mode(), balanced,
                                           {0.0, 0.0, {}});
        CHECK(state.mean.norm() == 0.0);
        CHECK(state.cov.sqq == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(state.cov.spp == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("conditional covariance does not depend on the outcome") {
        auto a = conditional_bob_state(vacuum_input(), tmsv(0.8), balanced, {1.3, -0.2, {}});
        auto b = conditional_bob_state(vacuum_input(), tmsv(0.8), balanced, {-4.0, 2.5, {}});
        CHECK(a.cov.sqq == b.cov.sqq);
        CHECK(a.cov.sqp == b.cov.sqp);
        CHECK(a.cov.spp == b.cov.spp);
    }
    SUBCASE("large r: displacement returns the conditional mean to the input") {
        MeasurementGeometry g = balanced;
        double r = 8.0;
        for (double q : {0.5, -1.7}) {
            for (double p : {0.3, 2.0}) {
                auto state = conditional_bob_state(vacuum_input(), tmsv(r), g, {q, p, {}});
                Eigen::Vector2d displaced =
                    state.mean + Eigen::Vector2d(q / g.cos(), p / g.sin());
                CHECK(displaced.norm() < 1e-5);
            }
        }
    }
    SUBCASE("singular measurement covariance is rejected") {
        GaussianInput zero{Eigen::Vector2d::Zero(), {0.0, 0.0, 0.0}};
        TwoModeCovariance degenerate = vacuum_two_mode();
        degenerate.v1 = {0.0, 0.0, 0.0};
        CHECK_THROWS_AS(conditional_bob_state(zero, degenerate, balanced, {0.0, 0.0, {}}),
                        DegenerateConditioning);
    }
}

TEST_CASE("conditioning algebra reproduces the analytic channel exactly") {
    Rng rng(616);
    for (int i = 0; i < 100; ++i) {
        GaussianInput in{{testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2)},
                         testing::random_one_mode(rng)};
        auto v = testing::random_bona_fide(rng);
        MeasurementGeometry g(testing::uniform(rng, 0.1, kPi / 2 - 0.1));
        auto mix = mixture_covariance_analytic(in, v, g);
        auto rep = gaussian_output(in.cov, v, g);
        CHECK((mix - rep.v_out.matrix()).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("ensemble runs") {
    auto balanced = MeasurementGeometry::balanced();
    SUBCASE("vacuum resource, coherent(0): covariance 3/2 I within 3 SE") {
        auto stats = run_ensemble(vacuum_input(), vacuum_two_mode(), balanced, 100000, 7);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double expected = (i == j) ? 1.5 : 0.0;
                CHECK(std::abs(stats.covariance(i, j) - expected) <
                      3.0 * stats.cov_se(i, j));
            }
    }
    SUBCASE("TMSV r=1: empirical added noise near e^{-2}") {
        auto stats = run_ensemble(vacuum_input(), tmsv(1.0), balanced, 100000, 8);
        double n_emp = 0.5 * (stats.covariance.trace() - 1.0);
        double se = 0.5 * (stats.cov_se(0, 0) + stats.cov_se(1, 1));
        CHECK(std::abs(n_emp - std::exp(-2.0)) < 3.0 * se);
    }
    SUBCASE("teleportation preserves first moments") {
        GaussianInput in{{std::sqrt(2.0) * 1.1, -std::sqrt(2.0) * 0.6}, vacuum_one_mode()};
        auto stats = run_ensemble(in, tmsv(0.5), balanced, 100000, 9);
        CHECK(std::abs(stats.mean[0] - in.mean[0]) < 3.0 * stats.mean_se[0]);
        CHECK(std::abs(stats.mean[1] - in.mean[1]) < 3.0 * stats.mean_se[1]);
    }
    SUBCASE("bit-identical given the seed") {
        auto a = run_ensemble(vacuum_input(), tmsv(1.0), balanced, 20000, 42);
        auto b = run_ensemble(vacuum_input(), tmsv(1.0), balanced, 20000, 42);
        CHECK(a.mean == b.mean);
        CHECK(a.covariance == b.covariance);
        auto c = run_ensemble(vacuum_input(), tmsv(1.0), balanced, 20000, 43);
        CHECK(a.covariance != c.covariance);
    }
    SUBCASE("sink sees every sample with a consistent displacement") {
        MeasurementGeometry g(0.9);
        long count = 0;
        run_ensemble(vacuum_input(), tmsv(0.3), g, 5000, 3, [&](const OutcomeSample& s) {
            ++count;
            CHECK(s.mu.real() == s.q / g.cos() / std::sqrt(2.0));
            CHECK(s.mu.imag() == s.p / g.sin() / std::sqrt(2.0));
        });
        CHECK(count == 5000);
    }
    SUBCASE("too few samples") {
        CHECK_THROWS_AS(run_ensemble(vacuum_input(), tmsv(1.0), balanced, 1, 0),
                        DomainError);
    }
    SUBCASE("random scenarios stay within 3 standard errors") {
        Rng rng(717);
        int pass = 0;
        for (int k = 0; k < 10; ++k) {
            GaussianInput in{{testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)},
                             testing::random_one_mode(rng)};
            auto v = testing::random_bona_fide(rng);
            MeasurementGeometry g(testing::uniform(rng, 0.3, kPi / 2 - 0.3));
            auto analytic = gaussian_output(in.cov, v, g).v_out.matrix();
            auto stats = run_ensemble(in, v, g, 100000, 1000 + static_cast<std::uint64_t>(k));
            bool ok = true;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    ok = ok && std::abs(stats.covariance(i, j) - analytic(i, j)) <=
                                   3.0 * stats.cov_se(i, j);
            pass += ok ? 1 : 0;
        }
        CHECK(pass >= 9);
    }
}
