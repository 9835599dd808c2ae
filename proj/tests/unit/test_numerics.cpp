/*
   Copyright 2026 The wohs Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "wohs/errors.hpp"
#include "wohs/numerics.hpp"
#include "wohs/quadrature.hpp"

using namespace wohs;
using std::numbers::pi;

TEST_CASE("gamma_fn known values")
{
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(gamma_fn(1.5) == doctest::Approx(0.886226925452758).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
}

TEST_CASE("gamma_fn recurrence on [0.1, 20]")
{
    for (double x = 0.1; x <= 20.0; x += 0.173) {
        CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
    }
}

TEST_CASE("abs gamma at -alpha/2")
{
    for (double a : {0.01, 0.3, 1.0, 1.7, 1.99}) {
        CHECK(abs_gamma_neg_half_alpha(a) ==
              doctest::Approx(std::abs(std::tgamma(-a / 2))).epsilon(1e-12));
    }
    CHECK(abs_gamma_neg_half_alpha(1.0) == doctest::Approx(2.0 * std::sqrt(pi)).epsilon(1e-14));
    CHECK_THROWS_AS(abs_gamma_neg_half_alpha(2.0), DomainError);
}

TEST_CASE("incomplete_j examples")
{
    CHECK(incomplete_j(0.0, 1.0, 2) == 0.0);
    CHECK(incomplete_j(0.0, 0.3, 5) == 0.0);
    CHECK(incomplete_j(1.0, 1.0, 2) == doctest::Approx(pi / 2).epsilon(1e-13));
    CHECK(incomplete_j(8.0, 1.0, 2) == doctest::Approx(2.0 * std::atan(std::sqrt(8.0))).epsilon(1e-13));
    CHECK(incomplete_j(kInf, 1.0, 3) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(incomplete_j(kInf, 1.0, 1), DomainError);
    CHECK_THROWS_AS(incomplete_j(-1.0, 1.0, 2), DomainError);
}

TEST_CASE("incomplete_j differences match direct quadrature")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> z(0.0, 100.0);
    const std::vector<std::pair<double, int>> params = {
        {0.5, 2}, {1.0, 2}, {1.5, 2}, {1.2, 3}, {1.5, 1}, {0.7, 1}, {1.9, 4}};
    for (auto [alpha, d] : params) {
        for (int rep = 0; rep < 10; ++rep) {
            double z1 = z(gen);
            double z2 = z(gen);
            if (z1 > z2) std::swap(z1, z2);
            QuadSpec spec;
            spec.lower = z1;
            spec.upper = z2;
            const double direct = adaptive_quad(
                [=](double u) { return std::pow(u + 1.0, -0.5 * d) * std::pow(u, 0.5 * alpha - 1.0); },
                spec);
            const double diff = incomplete_j(z2, alpha, d) - incomplete_j(z1, alpha, d);
            CHECK(std::abs(diff - direct) <= 1e-10);
            CHECK(diff >= 0.0);
        }
    }
}

TEST_CASE("incomplete_j near zero is accurate")
{
    // For small zeta the integral is zeta^(a)/a to leading order.
    const double alpha = 1.2;
    const double z = 1e-10;
    CHECK(incomplete_j(z, alpha, 3) == doctest::Approx(std::pow(z, 0.6) / 0.6).epsilon(1e-8));
}

TEST_CASE("stable constants at alpha=1, d=2")
{
    const auto c = stable_constants(1.0, 2);
    CHECK(c.C == doctest::Approx(1.0 / (pi * pi)).epsilon(1e-13));
    CHECK(c.A == doctest::Approx(1.0 / (2.0 * std::pow(pi, 4))).epsilon(1e-13));
    CHECK(c.B == doctest::Approx(1.0 / (4.0 * std::pow(pi, 3))).epsilon(1e-13));
    CHECK(c.E == doctest::Approx(1.0 / (2.0 * pi * pi)).epsilon(1e-13));
    CHECK(c.K == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-13));
    CHECK_THROWS_AS(stable_constants(0.0, 2), DomainError);
    CHECK_THROWS_AS(stable_constants(2.0, 2), DomainError);
}

TEST_CASE("stable constants identities")
{
    for (double alpha : {0.1, 0.5, 1.0, 1.2, 1.5, 1.95}) {
        for (int d : {1, 2, 3, 5}) {
            const auto c = stable_constants(alpha, d);
            const double restated = c.C * std::pow(pi, d / 2.0 + 1.0) /
                                    (std::tgamma(d / 2.0) * std::sin(alpha * pi / 2.0));
            CHECK(restated == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(c.E * c.K == doctest::Approx(c.B).epsilon(1e-12));
        }
    }
}

TEST_CASE("chi-square and Kolmogorov distribution helpers")
{
    CHECK(chi_square_cdf(2.0, 2.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
    CHECK(chi_square_quantile(0.99, 1.0) == doctest::Approx(6.634896601021214).epsilon(1e-9));
    CHECK(chi_square_quantile(0.99, 10.0) == doctest::Approx(23.20925116659).epsilon(1e-9));
    CHECK(chi_square_quantile(0.999, 30.0) == doctest::Approx(59.70306).epsilon(1e-6));
    CHECK(kolmogorov_survival(1.628) == doctest::Approx(0.01).epsilon(0.01));
    CHECK(kolmogorov_survival(0.2) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(regularized_incomplete_beta(0.25, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("unit sphere areas")
{
    CHECK(unit_sphere_area(1) == doctest::Approx(2.0));
    CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * pi));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * pi));
}
