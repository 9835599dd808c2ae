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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace wohs {

struct KsResult {
    double d = 0.0;
    double critical = 0.0;
    bool pass = false;
    /// Effective sample size used for the critical value (Kish size when weighted).
    double n_eff = 0.0;
};

/// Asymptotic 1% critical value of the one-sample statistic.
double ks_critical_1pct(double n);
double ks_critical_1pct(double m, double n);

KsResult ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
KsResult two_sample_ks(std::vector<double> a, std::vector<double> b);
/// Weighted sample (self-normalised ECDF, Kish effective size) against a plain one.
KsResult weighted_two_sample_ks(const std::vector<double>& a, const std::vector<double>& weights,
                                std::vector<double> b);

class Histogram2D {
public:
    Histogram2D(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny);

    void add(double x, double y);
    void add_clipped(std::int64_t n = 1);

    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    double y_lo() const { return y_lo_; }
    double y_hi() const { return y_hi_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double x_edge(int i) const;
    double y_edge(int j) const;

    std::int64_t count(int i, int j) const { return counts_[static_cast<std::size_t>(i * ny_ + j)]; }
    std::int64_t clipped_count() const { return clipped_; }
    std::int64_t total() const { return total_; }

    std::vector<std::int64_t> marginal_x() const;
    std::vector<std::int64_t> marginal_y() const;

    /// CSV with header bin_x_lo,bin_x_hi,bin_y_lo,bin_y_hi,count.
    void write_csv(std::ostream& os) const;
    /// CSV with header bin_lo,bin_hi,count.
    void write_marginal_x_csv(std::ostream& os) const;
    void write_marginal_y_csv(std::ostream& os) const;

private:
    double x_lo_, x_hi_, y_lo_, y_hi_;
    int nx_, ny_;
    std::vector<std::int64_t> counts_;
    std::int64_t clipped_ = 0;
    std::int64_t total_ = 0;
};

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double critical = 0.0;
    bool pass = false;
    int cells = 0;
    int pooled_bins = 0;
};

/// Pearson test of observed counts against cell probabilities. Cells whose
/// expected count falls below min_expected are pooled into one cell.
ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& probabilities, double min_expected = 5.0,
                                double level = 0.01);

/// Histogram against bin probabilities bin_mass(i, j); the clipped count is
/// tested against the left-over probability.
ChiSquareResult chi_square_vs_bin_masses(const Histogram2D& hist,
                                         const std::function<double(int, int)>& bin_mass,
                                         double min_expected = 5.0, double level = 0.01);

/// Histogram against a density, bin masses by nested adaptive quadrature.
ChiSquareResult chi_square_vs_density(const Histogram2D& hist,
                                      const std::function<double(double, double)>& density,
                                      double min_expected = 5.0, double level = 0.01);

/// Compares the bin proportions of an unweighted sample with those of a
/// weighted sample; the statistic uses the full covariance of both
/// (multinomial and ratio-estimator) and has (cells - 1) degrees of freedom.
ChiSquareResult weighted_two_sample_chi_square(const std::vector<double>& plain,
                                               const std::vector<double>& weighted,
                                               const std::vector<double>& weights,
                                               const std::vector<double>& edges,
                                               double min_expected = 5.0, double level = 0.01);

double quantile_sorted(const std::vector<double>& sorted, double p);

struct IqrEstimate {
    double iqr = 0.0;
    double std_error = 0.0;
};

/// Interquartile range with a batch-means standard error.
IqrEstimate iqr_with_error(const std::vector<double>& x, int batches = 20);

struct Check {
    std::string id;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    nlohmann::json detail = nlohmann::json::object();
};

struct ValidationReport {
    std::string suite;
    std::vector<Check> checks;

    bool pass() const;
    void add(Check c) { checks.push_back(std::move(c)); }
    void merge(const ValidationReport& other);
    nlohmann::json to_json() const;
};

} // namespace wohs
