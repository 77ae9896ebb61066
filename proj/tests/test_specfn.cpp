#include <cmath>
#include <limits>
#include <random>

#include "catch_amalgamated.hpp"
#include "composite/numeric.hpp"
#include "composite/specfn.hpp"

using namespace composite;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// Reference values below were computed with 40-digit mpmath.

TEST_CASE("binary entropy at known points", "[specfn]") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK_THAT(binary_entropy(0.11), WithinAbs(0.49991595816452800, 1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.5), DomainError);
}

TEST_CASE("distortion-rate function of the binary source", "[specfn]") {
    CHECK_THAT(bss_distortion_rate(0.25), WithinAbs(0.21450174485982875, 1e-13));
    CHECK_THAT(bss_distortion_rate(0.5), WithinAbs(0.11002786443835955, 1e-13));
    CHECK_THAT(bss_distortion_rate(0.75), WithinAbs(0.041692690273656696, 1e-13));
    CHECK(bss_distortion_rate(0.0) == 0.5);
    CHECK(bss_distortion_rate(1.0) == 0.0);
    CHECK(bss_distortion_rate(3.0) == 0.0);
    CHECK_THROWS_AS(bss_distortion_rate(-0.1), DomainError);
}

TEST_CASE("inverse entropy round trip", "[specfn][property]") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(1e-9, 0.5);
    for (int i = 0; i < 2000; ++i) {
        const double p = u(gen);
        REQUIRE_THAT(inverse_binary_entropy(binary_entropy(p)), WithinAbs(p, 1e-9));
    }
    CHECK(inverse_binary_entropy(0.0) == 0.0);
    CHECK(inverse_binary_entropy(1.0) == 0.5);
}

TEST_CASE("binary convolution", "[specfn][property]") {
    CHECK_THAT(binary_convolve(0.25, 0.1), WithinAbs(0.3, 1e-15));
    CHECK(binary_convolve(0.3, 0.0) == 0.3);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (int i = 0; i < 500; ++i) {
        const double a = u(gen), b = u(gen);
        REQUIRE_THAT(binary_convolve(a, b), WithinAbs(binary_convolve(b, a), 1e-15));
        REQUIRE_THAT(binary_convolve(a, 0.5), WithinAbs(0.5, 1e-15));
        REQUIRE(binary_convolve(a, b) >= std::max(a, b) - 1e-15);
        REQUIRE(binary_convolve(a, b) <= 0.5 + 1e-15);
    }
}

TEST_CASE("exponential integral E1", "[specfn]") {
    CHECK_THAT(exp_integral(0.05), WithinRel(2.4678984885099744, 1e-14));
    CHECK_THAT(exp_integral(0.5), WithinRel(0.55977359477616081, 1e-14));
    CHECK_THAT(exp_integral(1.0), WithinRel(0.21938393439552027, 1e-14));
    CHECK_THAT(exp_integral(2.0), WithinRel(0.048900510708061120, 1e-14));
    CHECK_THAT(exp_integral(10.0), WithinRel(4.1569689296853243e-06, 1e-13));
    CHECK_THAT(exp_integral(20.0), WithinRel(9.8355252906498817e-11, 1e-13));
    CHECK_THROWS_AS(exp_integral(0.0), DomainError);
    CHECK_THROWS_AS(exp_integral(-1.0), DomainError);
}

TEST_CASE("scaled E1 stays finite where E1 underflows", "[specfn]") {
    CHECK_THAT(exp_integral_scaled(2.0), WithinRel(std::exp(2.0) * 0.048900510708061120, 1e-14));
    const double big = exp_integral_scaled(800.0);
    CHECK(std::isfinite(big));
    // e^x E1(x) ~ (1 - 1/x + 2/x^2 - 6/x^3) / x for large x
    const double x = 800.0;
    CHECK_THAT(big, WithinRel((1.0 - 1.0 / x + 2.0 / (x * x) - 6.0 / (x * x * x)) / x, 1e-9));
}

TEST_CASE("E1 agrees with quadrature", "[specfn][property]") {
    for (double x = 0.05; x <= 20.0; x *= 1.37) {
        const double q =
            integrate([](double t) { return std::exp(-t) / t; }, x, std::numeric_limits<double>::infinity(), 1e-13);
        REQUIRE_THAT(exp_integral(x), WithinRel(q, 1e-9));
    }
}

TEST_CASE("Lambert W principal branch", "[specfn]") {
    CHECK(lambert_w(0.0) == 0.0);
    CHECK_THAT(lambert_w(0.5), WithinRel(0.35173371124919583, 1e-14));
    CHECK_THAT(lambert_w(1.0), WithinRel(0.56714329040978387, 1e-15));
    CHECK_THAT(lambert_w(10.0), WithinRel(1.7455280027406994, 1e-14));
    CHECK_THAT(lambert_w(1e6), WithinRel(11.383358086140053, 1e-14));
    CHECK_THAT(lambert_w(std::exp(1.0)), WithinRel(1.0, 1e-15));
    CHECK_THROWS_AS(lambert_w(-0.1), DomainError);
}

TEST_CASE("Lambert W round trip on a log grid", "[specfn][property]") {
    for (double lz = -6.0; lz <= 6.0; lz += 0.01) {
        const double z = std::pow(10.0, lz);
        const double w = lambert_w(z);
        REQUIRE_THAT(w * std::exp(w), WithinRel(z, 1e-12));
    }
}
