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
#include "wohs/quadrature.hpp"
#include "wohs/tabulated_cdf.hpp"

using namespace wohs;
using std::numbers::pi;

TEST_CASE("Kronrod weights integrate constants and polynomials")
{
    const auto one = detail::gauss_kronrod21([](double) { return 1.0; }, -1.0, 1.0);
    CHECK(one.value == doctest::Approx(2.0).epsilon(1e-15));
    const auto p = detail::gauss_kronrod21([](double x) { return std::pow(x, 20); }, 0.0, 1.0);
    CHECK(p.value == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
}

TEST_CASE("adaptive_quad examples")
{
    QuadSpec s;
    s.lower = 0.0;
    s.upper = 1.0;
    s.singularity_exponents = std::pair{-0.5, 0.0};
    CHECK(adaptive_quad([](double u) { return 1.0 / std::sqrt(u); }, s) ==
          doctest::Approx(2.0).epsilon(1e-11));

    QuadSpec t;
    t.lower = 0.0;
    t.upper = pi;
    CHECK(adaptive_quad([](double u) { return std::sin(u); }, t) == doctest::Approx(2.0).epsilon(1e-12));

    QuadSpec l;
    l.lower = 0.0;
    l.upper = 1.0;
    CHECK(adaptive_quad([](double u) { return std::log(u); }, l) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("adaptive_quad on half-infinite and two-sided ranges")
{
    QuadSpec s;
    s.lower = 0.0;
    s.upper = kInf;
    CHECK(adaptive_quad([](double u) { return 1.0 / (1.0 + u * u); }, s) ==
          doctest::Approx(pi / 2).epsilon(1e-11));

    QuadSpec tail;
    tail.lower = -kInf;
    tail.upper = -1.0;
    tail.singularity_exponents = std::pair{-1.25, 0.0};
    CHECK(adaptive_quad([](double u) { return std::pow(-u, -1.25); }, tail) ==
          doctest::Approx(4.0).epsilon(1e-11));

    QuadSpec both;
    both.lower = -kInf;
    both.upper = kInf;
    CHECK(adaptive_quad([](double u) { return std::exp(-u * u); }, both) ==
          doctest::Approx(std::sqrt(pi)).epsilon(1e-11));

    QuadSpec mixed;
    mixed.lower = 0.0;
    mixed.upper = kInf;
    mixed.singularity_exponents = std::pair{-0.5, -1.5};
    CHECK(adaptive_quad([](double u) { return 1.0 / (std::sqrt(u) * (1.0 + u)); }, mixed) ==
          doctest::Approx(pi).epsilon(1e-11));
}

TEST_CASE("singularities at both finite ends")
{
    QuadSpec s;
    s.lower = 0.0;
    s.upper = 1.0;
    s.singularity_exponents = std::pair{-0.9, -0.3};
    const double beta = std::tgamma(0.1) * std::tgamma(0.7) / std::tgamma(0.8);
    CHECK(adaptive_quad([](double u) { return std::pow(u, -0.9) * std::pow(1.0 - u, -0.3); }, s) ==
          doctest::Approx(beta).epsilon(1e-9));
}

TEST_CASE("quadrature errors")
{
    QuadSpec bad;
    bad.lower = 1.0;
    bad.upper = 0.0;
    CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, bad), DomainError);

    QuadSpec exp;
    exp.singularity_exponents = std::pair{-1.0, 0.0};
    CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, exp), DomainError);

    QuadSpec budget;
    budget.lower = 0.0;
    budget.upper = 1.0;
    budget.max_panels = 10;
    budget.abs_tol = 1e-15;
    budget.rel_tol = 1e-15;
    try {
        adaptive_quad([](double u) { return std::sin(1.0 / (u + 1e-3)); }, budget);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.estimate()));
        CHECK(e.error_bound() > 0.0);
    }
}

TEST_CASE("inverse CDF examples")
{
    QuadSpec unit;
    unit.lower = 0.0;
    unit.upper = 1.0;
    const auto u = build_inverse_cdf([](double) { return 1.0; }, unit);
    CHECK(u.quantile(0.25) == doctest::Approx(0.25).epsilon(1e-10));

    QuadSpec sing = unit;
    sing.singularity_exponents = std::pair{-0.5, 0.0};
    const auto r = build_inverse_cdf([](double y) { return 1.0 / std::sqrt(y); }, sing);
    CHECK(r.quantile(0.5) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(r.cdf(0.25) == doctest::Approx(0.5).epsilon(1e-10));

    // Arcsine density; the upper half is written in the distance to 1.
    QuadSpec half;
    half.lower = 0.0;
    half.upper = 0.5;
    half.singularity_exponents = std::pair{-0.5, 0.0};
    auto arcsine = [](double v) { return 1.0 / std::sqrt(v * (1.0 - v)); };
    const auto a = build_inverse_cdf({CdfPiece{arcsine, half, 0.0, false}, CdfPiece{arcsine, half, 1.0, true}});
    CHECK(a.quantile(0.5) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(a.total_mass() == doctest::Approx(pi).epsilon(1e-10));
    CHECK(a.support_lower() == 0.0);
    CHECK(a.support_upper() == 1.0);
    for (double y : {1e-12, 0.1, 0.3, 0.7, 0.9, 1.0 - 1e-9}) {
        const double exact = 2.0 / pi * std::asin(std::sqrt(y));
        CHECK(std::abs(a.cdf(y) - exact) <= 1e-9);
        CHECK(std::abs(a.quantile(exact) - y) <= 1e-9 * std::max(1.0, 1.0 / std::sqrt(y * (1 - y))));
    }
    // The tail next to 1 keeps its resolution: 1 - CDF(1 - e) = (2/pi) sqrt(e) + ...
    CHECK(1.0 - a.cdf(1.0 - 1e-14) == doctest::Approx(2.0 / pi * std::asin(std::sqrt(1e-14))).epsilon(1e-6));
    const auto cv = a.cdf_values();
    CHECK(std::is_sorted(cv.begin(), cv.end()));
    const auto kn = a.knots();
    CHECK(std::is_sorted(kn.begin(), kn.end()));

    CHECK_THROWS_AS(build_inverse_cdf([](double) { return 0.0; }, unit), DomainError);
}

TEST_CASE("inverse CDF round trips and table invariants")
{
    // Cauchy-like density on the whole line, split at 0.
    QuadSpec left;
    left.lower = -kInf;
    left.upper = 0.0;
    QuadSpec right;
    right.lower = 0.0;
    right.upper = kInf;
    const auto t = build_inverse_cdf([](double y) { return 1.0 / (pi * (1.0 + y * y)); },
                                     std::vector<QuadSpec>{left, right});
    CHECK(t.total_mass() == doctest::Approx(1.0).epsilon(1e-10));

    const auto cv = t.cdf_values();
    CHECK(cv.front() == 0.0);
    CHECK(cv.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::is_sorted(cv.begin(), cv.end()));
    const auto kn = t.knots();
    CHECK(kn.size() == cv.size());

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double y = dist(gen);
        CHECK(std::abs(t.quantile(t.cdf(y)) - y) <= 1e-7);
        const double exact = 0.5 + std::atan(y) / pi;
        CHECK(std::abs(t.cdf(y) - exact) <= 1e-9);
    }
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double p = uu(gen);
        const double y = t.quantile(p);
        CHECK(std::abs(0.5 + std::atan(y) / pi - p) <= 1e-9);
    }
}
