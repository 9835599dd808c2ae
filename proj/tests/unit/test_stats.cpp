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
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "wohs/errors.hpp"
#include "wohs/stats.hpp"

using namespace wohs;

namespace {

std::vector<double> uniforms(std::mt19937_64& gen, int n, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = u(gen);
    return v;
}

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

TEST_CASE("ks_statistic examples")
{
    const KsResult r = ks_statistic({0.25, 0.75}, uniform_cdf);
    CHECK(r.d == doctest::Approx(0.25).epsilon(1e-15));
    const KsResult same = ks_statistic(std::vector<double>(100, 0.3), uniform_cdf);
    CHECK(same.d >= 0.5);
    CHECK_FALSE(same.pass);
    CHECK_THROWS_AS(ks_statistic({}, uniform_cdf), DomainError);
    CHECK(ks_critical_1pct(10000.0) == doctest::Approx(0.01628));
}

TEST_CASE("ks_statistic holds its level")
{
    std::mt19937_64 gen(1);
    int pass = 0;
    for (int s = 0; s < 300; ++s) pass += ks_statistic(uniforms(gen, 2000), uniform_cdf).pass;
    CHECK(pass >= 291);
}

TEST_CASE("two_sample_ks examples and level")
{
    std::mt19937_64 gen(2);
    const auto a = uniforms(gen, 10000);
    CHECK(two_sample_ks(a, a).d == 0.0);
    CHECK_FALSE(two_sample_ks(a, uniforms(gen, 10000, 0.5, 1.5)).pass);
    CHECK_THROWS_AS(two_sample_ks({}, a), DomainError);
    int pass = 0;
    for (int s = 0; s < 300; ++s) pass += two_sample_ks(uniforms(gen, 1000), uniforms(gen, 1500)).pass;
    CHECK(pass >= 291);
}

TEST_CASE("weighted two-sample KS")
{
    std::mt19937_64 gen(3);
    // Weighted draws from Uniform(0,2) with weight 1{x<1} reproduce Uniform(0,1).
    const auto a = uniforms(gen, 40000, 0.0, 2.0);
    std::vector<double> w;
    for (double x : a) w.push_back(x < 1.0 ? 1.0 : 0.0);
    const KsResult ok = weighted_two_sample_ks(a, w, uniforms(gen, 20000));
    CHECK(ok.pass);
    CHECK(ok.n_eff == doctest::Approx(20000).epsilon(0.02));
    const std::vector<double> ones(a.size(), 1.0);
    CHECK_FALSE(weighted_two_sample_ks(a, ones, uniforms(gen, 20000)).pass);
    CHECK_THROWS_AS(weighted_two_sample_ks(a, std::vector<double>(3, 1.0), a), DomainError);
    CHECK_THROWS_AS(weighted_two_sample_ks(a, std::vector<double>(a.size(), 0.0), a), DomainError);
}

TEST_CASE("histogram bookkeeping and CSV")
{
    Histogram2D h(-1, 1, -8, 8, 4, 2);
    h.add(-0.9, 0.0);
    h.add(0.99, -7.9);
    h.add(1.0, 0.0);
    h.add(0.0, 100.0);
    h.add(std::nan(""), 0.0);
    h.add_clipped(2);
    CHECK(h.total() == 7);
    CHECK(h.clipped_count() == 5);
    std::int64_t sum = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) sum += h.count(i, j);
    CHECK(sum + h.clipped_count() == h.total());
    CHECK(h.count(0, 1) == 1);
    CHECK(h.count(3, 0) == 1);
    CHECK(h.marginal_x() == std::vector<std::int64_t>{1, 0, 0, 1});
    CHECK(h.marginal_y() == std::vector<std::int64_t>{1, 1});

    std::ostringstream os, mx, my;
    h.write_csv(os);
    h.write_marginal_x_csv(mx);
    h.write_marginal_y_csv(my);
    CHECK(os.str().rfind("bin_x_lo,bin_x_hi,bin_y_lo,bin_y_hi,count\n-1,-0.5,-8,0,0\n", 0) == 0);
    CHECK(mx.str() == "bin_lo,bin_hi,count\n-1,-0.5,1\n-0.5,0,0\n0,0.5,0\n0.5,1,1\n");
    CHECK(my.str() == "bin_lo,bin_hi,count\n-8,0,1\n0,8,1\n");
    CHECK_THROWS_AS(Histogram2D(1, 0, 0, 1, 2, 2), UsageError);
    CHECK_THROWS_AS(Histogram2D(0, 1, 0, 1, 0, 2), UsageError);
}

TEST_CASE("histogram bins agree with the printed edges")
{
    Histogram2D h(-4, 1, -5, 5, 40, 40);
    for (int k = 0; k < 40; ++k) {
        // Exact edges must land in the bin they open.
        h.add(h.x_edge(k), h.y_edge(k));
        CHECK(h.count(k, k) == 1);
    }
}

TEST_CASE("chi-square against exact bin probabilities")
{
    // Multinomial draws from a fixed binned law pass at the nominal rate.
    const std::vector<double> p = {0.3, 0.2, 0.15, 0.15, 0.1, 0.05, 0.03, 0.015, 0.005};
    std::mt19937_64 gen(5);
    std::discrete_distribution<int> cat(p.begin(), p.end());
    int pass = 0;
    for (int s = 0; s < 300; ++s) {
        std::vector<double> obs(p.size(), 0.0);
        for (int i = 0; i < 2000; ++i) obs[static_cast<std::size_t>(cat(gen))] += 1;
        pass += chi_square_test(obs, p).pass;
    }
    CHECK(pass >= 291);

    // Pooling at n=200: the cells expecting 3 and 1 pool into 4, which is too
    // thin on its own and joins the cell expecting 6.
    std::vector<double> obs(p.size(), 0.0);
    for (int i = 0; i < 200; ++i) obs[static_cast<std::size_t>(cat(gen))] += 1;
    const ChiSquareResult r = chi_square_test(obs, p);
    CHECK(r.pooled_bins == 2);
    CHECK(r.cells == 7);
    CHECK(r.dof == r.cells - 1);
    CHECK(r.dof == 6);

    // Shifted law fails.
    std::vector<double> q = p;
    std::swap(q[0], q[1]);
    std::vector<double> big(p.size(), 0.0);
    std::discrete_distribution<int> other(q.begin(), q.end());
    for (int i = 0; i < 100000; ++i) big[static_cast<std::size_t>(other(gen))] += 1;
    CHECK_FALSE(chi_square_test(big, p).pass);
    CHECK_THROWS_AS(chi_square_test(std::vector<double>(9, 0.0), p), DomainError);
}

TEST_CASE("chi-square against a density on a 2-D histogram")
{
    // Product of Uniform(0,1) and a standard Cauchy; the clipped cell carries
    // the Cauchy mass outside [-5, 5].
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto dens = [](double, double y) { return 1.0 / (std::numbers::pi * (1 + y * y)); };
    Histogram2D good(0, 1, -5, 5, 10, 20), shifted(0, 1, -5, 5, 10, 20);
    for (int i = 0; i < 100000; ++i) {
        const double x = u(gen);
        const double c = std::tan(std::numbers::pi * (u(gen) - 0.5));
        good.add(x, c);
        shifted.add(x, c + 0.1);
    }
    CHECK(chi_square_vs_density(good, dens).pass);
    CHECK_FALSE(chi_square_vs_density(shifted, dens).pass);
    Histogram2D empty(0, 1, 0, 1, 2, 2);
    CHECK_THROWS_AS(chi_square_vs_density(empty, dens), DomainError);
}

TEST_CASE("weighted two-sample chi-square")
{
    std::mt19937_64 gen(7);
    const std::vector<double> edges = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
    int pass = 0;
    int fail_shift = 0;
    for (int s = 0; s < 100; ++s) {
        const auto plain = uniforms(gen, 5000);
        // Exponential tilt e^{-x} on draws from density proportional to e^{x} on (0,1).
        std::vector<double> wx, ww;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 5000; ++i) {
            const double x = std::log(1.0 + u(gen) * (std::exp(1.0) - 1.0));
            wx.push_back(x);
            ww.push_back(std::exp(-x));
        }
        pass += weighted_two_sample_chi_square(plain, wx, ww, edges).pass;
        const std::vector<double> ones(wx.size(), 1.0);
        fail_shift += !weighted_two_sample_chi_square(plain, wx, ones, edges).pass;
    }
    CHECK(pass >= 95);
    CHECK(fail_shift >= 95);
}

TEST_CASE("iqr with batch standard error")
{
    std::mt19937_64 gen(8);
    const auto v = uniforms(gen, 100000);
    const IqrEstimate q = iqr_with_error(v);
    CHECK(q.iqr == doctest::Approx(0.5).epsilon(0.01));
    CHECK(q.std_error > 0.0);
    CHECK(q.std_error < 0.01);
    CHECK(quantile_sorted({1.0, 2.0, 3.0}, 0.5) == 2.0);
}

TEST_CASE("validation report verdict")
{
    ValidationReport r;
    r.suite = "demo";
    CHECK(r.pass());
    r.add({"a", 1.0, 2.0, true, {}});
    CHECK(r.pass());
    r.add({"b", 3.0, 2.0, false, {{"note", "x"}}});
    CHECK_FALSE(r.pass());
    const auto j = r.to_json();
    CHECK(j["suite"] == "demo");
    CHECK(j["pass"] == false);
    CHECK(j["checks"].size() == 2);
    CHECK(j["checks"][1]["detail"]["note"] == "x");
}
