#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "cvt/cf_grid.hpp"
#include "support/test_support.hpp"

using namespace cvt;
using cvt::testing::Rng;
using std::complex;

namespace {

constexpr double kPi = 3.14159265358979323846;

CFGrid small_grid(const StatePreset& p) { return build_cf(p, 6.0, 129); }

} // namespace

TEST_CASE("preset characteristic functions") {
    SUBCASE("fock(0) is the vacuum Gaussian") {
        CHECK(preset_cf(Fock{0}, 0.0) == complex<double>(1.0, 0.0));
        complex<double> l(0.3, -1.1);
        CHECK(std::abs(preset_cf(Fock{0}, l) - std::exp(-0.5 * std::norm(l))) < 1e-15);
    }
    SUBCASE("fock(1) vanishes on the unit circle") {
        CHECK(std::abs(preset_cf(Fock{1}, 1.0)) < 1e-15);
        CHECK(std::abs(preset_cf(Fock{1}, complex<double>(0.6, 0.8))) < 1e-14);
    }
    SUBCASE("coherent modulus is alpha-independent") {
        Rng rng(12);
        for (int i = 0; i < 50; ++i) {
            complex<double> alpha(testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2));
            complex<double> l(testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2));
            CHECK(std::abs(std::abs(preset_cf(Coherent{alpha}, l)) -
                           std::exp(-0.5 * std::norm(l))) < 1e-14);
        }
    }
    SUBCASE("invalid parameters") {
        CHECK_THROWS_AS(preset_cf(Fock{-1}, 0.0), MalformedInput);
        CHECK_THROWS_AS(preset_cf(SqueezedThermal{-0.5, 0.0}, 0.0), MalformedInput);
        // Odd cat at alpha = 0 is the vanishing state.
        CHECK_THROWS_AS(preset_cf(Cat{0.0, kPi}, 0.5), MalformedInput);
    }
}

TEST_CASE("grid construction and invariants") {
    SUBCASE("even or tiny point counts are rejected") {
        CHECK_THROWS_AS(build_cf(Fock{0}, 6.0, 128), MalformedInput);
        CHECK_THROWS_AS(build_cf(Fock{0}, 6.0, 33), MalformedInput);
        CHECK_THROWS_AS(build_cf(Fock{0}, -1.0, 129), MalformedInput);
    }
    SUBCASE("every preset passes the CF-grid invariants") {
        for (const StatePreset& p :
             {StatePreset{Coherent{{0.7, -0.4}}}, StatePreset{Fock{3}},
              StatePreset{Cat{{1.2, 0.0}, 0.0}}, StatePreset{Cat{{1.0, 0.5}, kPi}},
              StatePreset{SqueezedThermal{0.4, 0.3}}}) {
            auto grid = small_grid(p);
            CHECK_NOTHROW(validate_cf_grid(grid, 1e-12));
            CHECK(std::abs(grid.at(grid.center(), grid.center()) - 1.0) < 1e-13);
        }
    }
}

TEST_CASE("teleported grids") {
    auto balanced = MeasurementGeometry::balanced();
    SUBCASE("large-r limit approaches the identity channel") {
        auto in = small_grid(Fock{1});
        auto out = teleport_cf(in, tmsv(7.0), balanced);
        CHECK((out.samples - in.samples).cwiseAbs().maxCoeff() < 1e-5);
    }
    SUBCASE("Gaussian input matches the analytic channel pointwise") {
        auto in = small_grid(Coherent{0.0});
        auto out = teleport_cf(in, tmsv(0.8), balanced);
        auto rep = gaussian_output(vacuum_one_mode(), tmsv(0.8), balanced);
        for (int i = 0; i < out.n; i += 3) {
            for (int j = 0; j < out.n; j += 3) {
                complex<double> l(out.axis(i), out.axis(j));
                CHECK(std::abs(out.samples(i, j) - cf_eval_gaussian(rep.v_out, l)) < 1e-10);
            }
        }
    }
    SUBCASE("fock(1) through the vacuum resource: closed-form product") {
        auto out = teleport_cf(small_grid(Fock{1}), vacuum_two_mode(), balanced);
        for (int i = 0; i < out.n; i += 5) {
            for (int j = 0; j < out.n; j += 5) {
                double n2 = std::norm(complex<double>(out.axis(i), out.axis(j)));
                CHECK(std::abs(out.samples(i, j) -
                               std::exp(-1.5 * n2) * (1.0 - n2)) < 1e-12);
            }
        }
    }
    SUBCASE("output grids keep the CF invariants") {
        Rng rng(34);
        auto in = small_grid(Cat{{1.0, 0.3}, 0.0});
        for (int k = 0; k < 5; ++k) {
            auto v = testing::random_bona_fide(rng);
            MeasurementGeometry g(testing::uniform(rng, 0.3, kPi / 2 - 0.3));
            CHECK_NOTHROW(validate_cf_grid(teleport_cf(in, v, g), 1e-10));
        }
    }
}

TEST_CASE("fidelity overlap") {
    SUBCASE("self-overlap of pure states is one") {
        for (const StatePreset& p :
             {StatePreset{Coherent{0.0}}, StatePreset{Fock{1}}, StatePreset{Cat{{1.0, 0.0}, 0.0}}}) {
            auto grid = build_cf(p, 6.0, 257);
            CHECK(fidelity_overlap(grid, grid) == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
    SUBCASE("coherent displacement overlap e^{-|alpha|^2}") {
        auto a = build_cf(Coherent{0.0}, 6.0, 257);
        auto b = build_cf(Coherent{1.0}, 6.0, 257);
        CHECK(fidelity_overlap(a, b) == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
        CHECK(fidelity_overlap(b, a) == doctest::Approx(fidelity_overlap(a, b)).epsilon(1e-14));
    }
    SUBCASE("teleported coherent state: 1/(1 + e^{-2r})") {
        auto balanced = MeasurementGeometry::balanced();
        auto in = build_cf(Coherent{0.0}, 6.0, 257);
        for (double r : {0.5, 1.0}) {
            auto out = teleport_cf(in, tmsv(r), balanced);
            double expected = 1.0 / (1.0 + std::exp(-2.0 * r));
            CHECK(std::abs(fidelity_overlap(in, out) - expected) < 1e-4);
        }
    }
    SUBCASE("doubling resolution and extent leaves the result unchanged") {
        auto balanced = MeasurementGeometry::balanced();
        double coarse = fidelity_overlap(build_cf(Coherent{0.0}, 6.0, 257),
                                         teleport_cf(build_cf(Coherent{0.0}, 6.0, 257),
                                                     tmsv(0.5), balanced));
        double fine = fidelity_overlap(build_cf(Coherent{0.0}, 12.0, 513),
                                       teleport_cf(build_cf(Coherent{0.0}, 12.0, 513),
                                                   tmsv(0.5), balanced));
        CHECK(std::abs(coarse - fine) < 1e-4);
    }
    SUBCASE("grid mismatch is rejected") {
        auto a = build_cf(Coherent{0.0}, 6.0, 129);
        auto b = build_cf(Coherent{0.0}, 6.0, 257);
        CHECK_THROWS_AS(fidelity_overlap(a, b), GridMismatch);
        auto c = build_cf(Coherent{0.0}, 5.0, 129);
        CHECK_THROWS_AS(fidelity_overlap(a, c), GridMismatch);
    }
}

TEST_CASE("mean photon number") {
    SUBCASE("fock(2) holds two photons") {
        auto res = mean_photon(build_cf(Fock{2}, 6.0, 257));
        CHECK_FALSE(res.coarse_grid);
        CHECK(std::abs(res.value - 2.0) < 1e-3);
    }
    SUBCASE("coherent(1) holds |alpha|^2 = 1") {
        auto res = mean_photon(build_cf(Coherent{1.0}, 6.0, 257));
        CHECK(std::abs(res.value - 1.0) < 1e-3);
    }
    SUBCASE("teleported fock(1) gains the added noise") {
        auto balanced = MeasurementGeometry::balanced();
        auto in = build_cf(Fock{1}, 6.0, 257);
        for (double r : {0.5, 1.0, 2.0}) {
            auto out = teleport_cf(in, tmsv(r), balanced);
            CHECK(std::abs(mean_photon(out).value - (1.0 + std::exp(-2.0 * r))) < 2e-3);
        }
    }
    SUBCASE("coarse grids are flagged") {
        CHECK(mean_photon(build_cf(Fock{1}, 6.0, 65)).coarse_grid);
        CHECK_FALSE(mean_photon(build_cf(Fock{1}, 6.0, 129)).coarse_grid);
    }
}

TEST_CASE("Wigner transform") {
    SUBCASE("vacuum peaks at 1/pi") {
        auto wg = wigner_transform(build_cf(Fock{0}, 6.0, 257), 6.0, 121);
        int c = (wg.n - 1) / 2;
        CHECK(std::abs(wg.w(c, c) - 1.0 / kPi) < 1e-3);
        CHECK(wg.max_imag_residue < 1e-8);
        CHECK(wg.w.minCoeff() > -1e-9);
    }
    SUBCASE("fock(1) is -1/pi at the origin and integrates to one") {
        auto wg = wigner_transform(build_cf(Fock{1}, 6.0, 257), 8.0, 161);
        int c = (wg.n - 1) / 2;
        CHECK(std::abs(wg.w(c, c) + 1.0 / kPi) < 1e-3);
        double integral = wg.w.sum() * wg.step() * wg.step();
        CHECK(std::abs(integral - 1.0) < 1e-3);
    }
    SUBCASE("noise at or above half a photon washes out the negativity") {
        auto balanced = MeasurementGeometry::balanced();
        auto in = build_cf(Fock{1}, 6.0, 257);
        // r = 0.3: N = e^{-0.6} = 0.549 > 1/2 -> classical, nonnegative Wigner.
        auto washed = wigner_transform(teleport_cf(in, tmsv(0.3), balanced), 8.0, 161);
        CHECK(washed.w.minCoeff() > -1e-9);
        // r = 2: N = e^{-4} = 0.018 << 1/2 -> negativity survives.
        auto survives = wigner_transform(teleport_cf(in, tmsv(2.0), balanced), 8.0, 161);
        CHECK(survives.w.minCoeff() < -0.1);
    }
}

TEST_CASE("grid round-trips through the text format") {
    auto grid = build_cf(Cat{{0.9, -0.2}, 0.7}, 4.0, 65);
    std::stringstream ss;
    write_cf_grid(ss, grid);
    auto back = read_cf_grid(ss);
    CHECK(back.label == grid.label);
    CHECK(back.extent == grid.extent);
    CHECK(back.n == grid.n);
    CHECK((back.samples - grid.samples).cwiseAbs().maxCoeff() == 0.0);

    std::stringstream bad("nonsense 42");
    CHECK_THROWS_AS(read_cf_grid(bad), MalformedInput);
}

TEST_CASE("wigner csv output shape") {
    auto wg = wigner_transform(build_cf(Fock{0}, 6.0, 129), 2.0, 11);
    std::stringstream ss;
    write_wigner_csv(ss, wg);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "q,p,w");
    int rows = 0;
    for (std::string line; std::getline(ss, line);) ++rows;
    CHECK(rows == 11 * 11);
}
