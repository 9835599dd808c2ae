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

#include "wohs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <Eigen/Dense>

#include "wohs/errors.hpp"
#include "wohs/numerics.hpp"
#include "wohs/quadrature.hpp"

namespace wohs {

namespace {

constexpr double kKs1pct = 1.628;

void write_number(std::ostream& os, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

} // namespace

double ks_critical_1pct(double n) { return kKs1pct / std::sqrt(n); }

double ks_critical_1pct(double m, double n) { return kKs1pct * std::sqrt((m + n) / (m * n)); }

KsResult ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    if (samples.empty()) throw DomainError("KS statistic needs a nonempty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    KsResult r;
    r.d = d;
    r.n_eff = n;
    r.critical = ks_critical_1pct(n);
    r.pass = d <= r.critical;
    return r;
}

KsResult two_sample_ks(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty()) throw DomainError("two-sample KS needs nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double m = static_cast<double>(a.size());
    const double n = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
    }
    KsResult r;
    r.d = d;
    r.n_eff = m * n / (m + n);
    r.critical = ks_critical_1pct(m, n);
    r.pass = d <= r.critical;
    return r;
}

KsResult weighted_two_sample_ks(const std::vector<double>& a, const std::vector<double>& weights,
                                std::vector<double> b)
{
    if (a.empty() || b.empty()) throw DomainError("two-sample KS needs nonempty samples");
    if (a.size() != weights.size()) throw DomainError("one weight per sample is required");
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto l, auto r) { return a[l] < a[r]; });
    std::sort(b.begin(), b.end());
    double wsum = 0.0;
    double w2sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and nonnegative");
        wsum += w;
        w2sum += w * w;
    }
    if (!(wsum > 0.0)) throw DomainError("weights sum to zero");
    const double n = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double cw = 0.0;
    double d = 0.0;
    while (i < order.size() || j < b.size()) {
        const double va = i < order.size() ? a[order[i]] : kInf;
        const double vb = j < b.size() ? b[j] : kInf;
        const double v = std::min(va, vb);
        while (i < order.size() && a[order[i]] == v) cw += weights[order[i++]];
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(cw / wsum - static_cast<double>(j) / n));
    }
    KsResult r;
    r.d = d;
    const double m = wsum * wsum / w2sum;
    r.n_eff = m;
    r.critical = ks_critical_1pct(m, n);
    r.pass = d <= r.critical;
    return r;
}

Histogram2D::Histogram2D(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny)
    : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), nx_(nx), ny_(ny)
{
    if (!(x_lo < x_hi && y_lo < y_hi)) throw UsageError("histogram ranges must be increasing");
    if (nx < 1 || ny < 1) throw UsageError("histogram needs at least one bin per axis");
    counts_.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
}

double Histogram2D::x_edge(int i) const { return x_lo_ + (x_hi_ - x_lo_) * i / nx_; }
double Histogram2D::y_edge(int j) const { return y_lo_ + (y_hi_ - y_lo_) * j / ny_; }

void Histogram2D::add(double x, double y)
{
    ++total_;
    if (!(x >= x_lo_ && x < x_hi_ && y >= y_lo_ && y < y_hi_)) {
        ++clipped_;
        return;
    }
    int i = static_cast<int>((x - x_lo_) / (x_hi_ - x_lo_) * nx_);
    int j = static_cast<int>((y - y_lo_) / (y_hi_ - y_lo_) * ny_);
    // Keep the bin consistent with the printed edges under rounding.
    i = std::clamp(i, 0, nx_ - 1);
    j = std::clamp(j, 0, ny_ - 1);
    if (x < x_edge(i)) --i;
    else if (i + 1 < nx_ && x >= x_edge(i + 1)) ++i;
    if (y < y_edge(j)) --j;
    else if (j + 1 < ny_ && y >= y_edge(j + 1)) ++j;
    ++counts_[static_cast<std::size_t>(i * ny_ + j)];
}

void Histogram2D::add_clipped(std::int64_t n)
{
    clipped_ += n;
    total_ += n;
}

std::vector<std::int64_t> Histogram2D::marginal_x() const
{
    std::vector<std::int64_t> m(static_cast<std::size_t>(nx_), 0);
    for (int i = 0; i < nx_; ++i) {
        for (int j = 0; j < ny_; ++j) m[static_cast<std::size_t>(i)] += count(i, j);
    }
    return m;
}

std::vector<std::int64_t> Histogram2D::marginal_y() const
{
    std::vector<std::int64_t> m(static_cast<std::size_t>(ny_), 0);
    for (int i = 0; i < nx_; ++i) {
        for (int j = 0; j < ny_; ++j) m[static_cast<std::size_t>(j)] += count(i, j);
    }
    return m;
}

void Histogram2D::write_csv(std::ostream& os) const
{
    os << "bin_x_lo,bin_x_hi,bin_y_lo,bin_y_hi,count\n";
    for (int i = 0; i < nx_; ++i) {
        for (int j = 0; j < ny_; ++j) {
            write_number(os, x_edge(i));
            os << ',';
            write_number(os, x_edge(i + 1));
            os << ',';
            write_number(os, y_edge(j));
            os << ',';
            write_number(os, y_edge(j + 1));
            os << ',' << count(i, j) << '\n';
        }
    }
}

void Histogram2D::write_marginal_x_csv(std::ostream& os) const
{
    os << "bin_lo,bin_hi,count\n";
    const auto m = marginal_x();
    for (int i = 0; i < nx_; ++i) {
        write_number(os, x_edge(i));
        os << ',';
        write_number(os, x_edge(i + 1));
        os << ',' << m[static_cast<std::size_t>(i)] << '\n';
    }
}

void Histogram2D::write_marginal_y_csv(std::ostream& os) const
{
    os << "bin_lo,bin_hi,count\n";
    const auto m = marginal_y();
    for (int j = 0; j < ny_; ++j) {
        write_number(os, y_edge(j));
        os << ',';
        write_number(os, y_edge(j + 1));
        os << ',' << m[static_cast<std::size_t>(j)] << '\n';
    }
}

ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& probabilities, double min_expected,
                                double level)
{
    if (observed.size() != probabilities.size()) {
        throw DomainError("observed and expected cell counts differ in length");
    }
    const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
    if (!(n > 0.0)) throw DomainError("chi-square test on an empty histogram");
    const double psum = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (!(psum > 0.0)) throw DomainError("cell probabilities sum to zero");

    std::vector<double> obs;
    std::vector<double> exp;
    double pooled_o = 0.0;
    double pooled_e = 0.0;
    int pooled = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = n * std::max(0.0, probabilities[i]) / psum;
        if (e < min_expected) {
            pooled_o += observed[i];
            pooled_e += e;
            ++pooled;
        } else {
            obs.push_back(observed[i]);
            exp.push_back(e);
        }
    }
    if (pooled > 0) {
        if (pooled_e >= min_expected || obs.empty()) {
            obs.push_back(pooled_o);
            exp.push_back(pooled_e);
        } else {
            // Too thin on its own: fold into the smallest regular cell.
            const auto k = static_cast<std::size_t>(std::min_element(exp.begin(), exp.end()) - exp.begin());
            obs[k] += pooled_o;
            exp[k] += pooled_e;
        }
    }
    ChiSquareResult r;
    r.cells = static_cast<int>(obs.size());
    r.pooled_bins = pooled;
    r.dof = r.cells - 1;
    if (r.dof < 1) throw DomainError("chi-square test needs at least two effective cells");
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (exp[i] > 0.0) {
            r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
        } else if (obs[i] > 0.0) {
            r.statistic = kInf;
        }
    }
    r.critical = chi_square_quantile(1.0 - level, r.dof);
    r.pass = r.statistic <= r.critical;
    return r;
}

ChiSquareResult chi_square_vs_bin_masses(const Histogram2D& hist,
                                         const std::function<double(int, int)>& bin_mass,
                                         double min_expected, double level)
{
    if (hist.total() == 0) throw DomainError("chi-square test on an empty histogram");
    std::vector<double> obs;
    std::vector<double> prob;
    double inside = 0.0;
    for (int i = 0; i < hist.nx(); ++i) {
        for (int j = 0; j < hist.ny(); ++j) {
            const double p = bin_mass(i, j);
            obs.push_back(static_cast<double>(hist.count(i, j)));
            prob.push_back(p);
            inside += p;
        }
    }
    obs.push_back(static_cast<double>(hist.clipped_count()));
    prob.push_back(std::max(0.0, 1.0 - inside));
    return chi_square_test(obs, prob, min_expected, level);
}

ChiSquareResult chi_square_vs_density(const Histogram2D& hist,
                                      const std::function<double(double, double)>& density,
                                      double min_expected, double level)
{
    // Bin masses only need to be good to a small fraction of one expected
    // count; an unconverged estimate is kept when its bound meets that.
    const double count_tol = 1e-3 / static_cast<double>(std::max<std::int64_t>(hist.total(), 1));
    auto settle = [count_tol](const RealFn& f, const QuadSpec& spec) {
        try {
            return integrate(f, spec);
        } catch (const ConvergenceError& e) {
            if (e.error_bound() <= count_tol) return QuadResult{e.estimate(), e.error_bound(), 0};
            throw;
        }
    };
    auto mass = [&](int i, int j) {
        QuadSpec outer;
        outer.lower = hist.x_edge(i);
        outer.upper = hist.x_edge(i + 1);
        outer.abs_tol = 0.1 * count_tol;
        outer.rel_tol = 1e-8;
        QuadSpec inner = outer;
        inner.lower = hist.y_edge(j);
        inner.upper = hist.y_edge(j + 1);
        inner.abs_tol = 0.01 * count_tol;
        return settle(
                   [&](double x) {
                       return settle([&](double y) { return density(x, y); }, inner).value;
                   },
                   outer)
            .value;
    };
    return chi_square_vs_bin_masses(hist, mass, min_expected, level);
}

ChiSquareResult weighted_two_sample_chi_square(const std::vector<double>& plain,
                                               const std::vector<double>& weighted,
                                               const std::vector<double>& weights,
                                               const std::vector<double>& edges,
                                               double min_expected, double level)
{
    if (plain.empty() || weighted.empty()) throw DomainError("both samples must be nonempty");
    if (weighted.size() != weights.size()) throw DomainError("one weight per sample is required");
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
        throw DomainError("bin edges must be increasing");
    }
    // Cells: the bins plus one overflow cell for values outside the edges.
    const std::size_t nb = edges.size() - 1;
    auto cell = [&](double v) {
        if (!(v >= edges.front() && v < edges.back())) return nb;
        return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()) - 1;
    };
    std::vector<double> n(nb + 1, 0.0);
    std::vector<double> w(nb + 1, 0.0);
    std::vector<double> s(nb + 1, 0.0);
    for (double v : plain) n[cell(v)] += 1.0;
    double wt = 0.0;
    double w2 = 0.0;
    for (std::size_t k = 0; k < weighted.size(); ++k) {
        const std::size_t c = cell(weighted[k]);
        w[c] += weights[k];
        s[c] += weights[k] * weights[k];
        wt += weights[k];
        w2 += weights[k] * weights[k];
    }
    if (!(wt > 0.0)) throw DomainError("weights sum to zero");
    const double np = static_cast<double>(plain.size());
    const double neff = wt * wt / w2;

    // Pool thin cells (judged on both samples) into the last regular cell.
    std::vector<double> cn;
    std::vector<double> cw;
    std::vector<double> cs;
    double pn = 0.0, pw = 0.0, ps = 0.0;
    int pooled = 0;
    for (std::size_t i = 0; i <= nb; ++i) {
        if (n[i] < min_expected || neff * w[i] / wt < min_expected) {
            pn += n[i];
            pw += w[i];
            ps += s[i];
            ++pooled;
        } else {
            cn.push_back(n[i]);
            cw.push_back(w[i]);
            cs.push_back(s[i]);
        }
    }
    if (pooled > 0) {
        cn.push_back(pn);
        cw.push_back(pw);
        cs.push_back(ps);
    }
    const auto k = static_cast<Eigen::Index>(cn.size());
    if (k < 2) throw DomainError("comparison needs at least two effective cells");

    // Drop the last cell: proportions sum to one, so the full covariance is singular.
    const Eigen::Index m = k - 1;
    Eigen::VectorXd p1(m), p2(m), sv(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        p1(i) = cn[static_cast<std::size_t>(i)] / np;
        p2(i) = cw[static_cast<std::size_t>(i)] / wt;
        sv(i) = cs[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXd cov1 = Eigen::MatrixXd(p1.asDiagonal()) - p1 * p1.transpose();
    cov1 /= np;
    Eigen::MatrixXd cov2 = Eigen::MatrixXd(sv.asDiagonal()) - sv * p2.transpose() -
                           p2 * sv.transpose() + w2 * p2 * p2.transpose();
    cov2 /= wt * wt;
    const Eigen::VectorXd diff = p1 - p2;
    const Eigen::MatrixXd cov = cov1 + cov2;
    ChiSquareResult r;
    r.statistic = diff.dot(cov.ldlt().solve(diff));
    r.dof = static_cast<int>(m);
    r.cells = static_cast<int>(k);
    r.pooled_bins = pooled;
    r.critical = chi_square_quantile(1.0 - level, r.dof);
    r.pass = r.statistic <= r.critical;
    return r;
}

double quantile_sorted(const std::vector<double>& sorted, double p)
{
    if (sorted.empty()) throw DomainError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

IqrEstimate iqr_with_error(const std::vector<double>& x, int batches)
{
    if (batches < 2) throw DomainError("batch-means error needs at least two batches");
    if (x.size() < static_cast<std::size_t>(4 * batches)) {
        throw DomainError("sample too small for batch-means IQR");
    }
    auto iqr_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
    };
    IqrEstimate est;
    est.iqr = iqr_of(x);
    std::vector<double> b;
    const std::size_t n = x.size();
    for (int k = 0; k < batches; ++k) {
        const std::size_t lo = n * static_cast<std::size_t>(k) / static_cast<std::size_t>(batches);
        const std::size_t hi = n * static_cast<std::size_t>(k + 1) / static_cast<std::size_t>(batches);
        b.push_back(iqr_of(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(lo),
                                               x.begin() + static_cast<std::ptrdiff_t>(hi))));
    }
    const double mean = std::accumulate(b.begin(), b.end(), 0.0) / batches;
    double ss = 0.0;
    for (double v : b) ss += (v - mean) * (v - mean);
    // Batch IQRs are computed on n/batches points, so their spread is that of
    // the full-sample IQR times sqrt(batches).
    est.std_error = std::sqrt(ss / (batches - 1)) / std::sqrt(static_cast<double>(batches));
    return est;
}

bool ValidationReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void ValidationReport::merge(const ValidationReport& other)
{
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

nlohmann::json ValidationReport::to_json() const
{
    nlohmann::json j;
    j["suite"] = suite;
    j["pass"] = pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json cj;
        cj["id"] = c.id;
        cj["statistic"] = c.statistic;
        cj["threshold"] = c.threshold;
        cj["pass"] = c.pass;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        j["checks"].push_back(cj);
    }
    return j;
}

} // namespace wohs
