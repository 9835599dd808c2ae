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

#include "wohs/tabulated_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "wohs/errors.hpp"

namespace wohs {

namespace {

constexpr int kMinPerSegment = 16;
constexpr double kNewtonTol = 1e-12;

struct Interval {
    double t0;
    double t1;
    double mass;
    double error;
};

} // namespace

TabulatedCdf::TabulatedCdf(const RealFn& pdf, const std::vector<QuadSpec>& pieces, int knots)
    : TabulatedCdf(
          [&] {
              std::vector<CdfPiece> out;
              for (const auto& q : pieces) out.push_back({pdf, q, 0.0, false});
              return out;
          }(),
          knots)
{
}

TabulatedCdf::TabulatedCdf(const std::vector<CdfPiece>& pieces, int knots)
{
    if (pieces.empty()) throw DomainError("inverse CDF needs at least one piece");
    if (knots < 2) throw DomainError("inverse CDF needs at least two knots");
    double prev_hi = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        const double lo = p.reflected ? p.origin - p.spec.upper : p.origin + p.spec.lower;
        const double hi = p.reflected ? p.origin - p.spec.lower : p.origin + p.spec.upper;
        if (i > 0 && lo != prev_hi) throw DomainError("inverse CDF pieces must be contiguous");
        prev_hi = hi;
        pdfs_.push_back(p.pdf);
        auto maps = decompose(p.spec);
        if (p.reflected) std::reverse(maps.begin(), maps.end());
        for (auto& m : maps) {
            Segment s{m, pdfs_.size() - 1, p.origin, p.reflected, {}, {}, {}, 0.0};
            segments_.push_back(std::move(s));
        }
    }
    const int per_segment = std::max(kMinPerSegment, knots / static_cast<int>(segments_.size()));
    for (auto& s : segments_) build_segment(s, per_segment);
    double offset = 0.0;
    for (auto& s : segments_) {
        s.offset = offset;
        offset += s.mass.back();
    }
    total_ = offset;
    if (!(total_ > 0.0) || !std::isfinite(total_)) {
        throw DomainError("density has zero or non-finite total mass");
    }
}

double TabulatedCdf::to_y(const Segment& s, double u) const
{
    return s.reflected ? s.origin - u : s.origin + u;
}

double TabulatedCdf::to_u(const Segment& s, double y) const
{
    return s.reflected ? s.origin - y : y - s.origin;
}

double TabulatedCdf::y_lower(const Segment& s) const
{
    return s.reflected ? s.origin - s.map.upper() : s.origin + s.map.lower();
}

double TabulatedCdf::y_upper(const Segment& s) const
{
    return s.reflected ? s.origin - s.map.lower() : s.origin + s.map.upper();
}

double TabulatedCdf::transformed(const Segment& s, double t) const
{
    double u = 0.0;
    double jac = 0.0;
    if (!s.map.map(t, u, jac)) return 0.0;
    const double v = pdfs_[s.pdf](u);
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError("density must be finite and nonnegative, got " + std::to_string(v) +
                          " at " + std::to_string(to_y(s, u)));
    }
    if (v == 0.0) return 0.0;
    return v * jac;
}

double TabulatedCdf::local_mass(const Segment& s, std::size_t k, double t) const
{
    if (t <= s.t[k]) return 0.0;
    return detail::gauss_kronrod21([&](double x) { return transformed(s, x); }, s.t[k], t).value;
}

void TabulatedCdf::build_segment(Segment& s, int knots)
{
    auto g = [&](double x) { return transformed(s, x); };
    std::vector<Interval> ivs;
    double total = 0.0;
    for (int k = 0; k < kMinPerSegment; ++k) {
        const double t0 = static_cast<double>(k) / kMinPerSegment;
        const double t1 = static_cast<double>(k + 1) / kMinPerSegment;
        const auto r = detail::gauss_kronrod21(g, t0, t1);
        ivs.push_back({t0, t1, r.value, r.error});
        total += r.value;
    }

    auto refine = [&](auto score, auto keep_going) {
        std::priority_queue<std::pair<double, std::size_t>> queue;
        for (std::size_t i = 0; i < ivs.size(); ++i) queue.emplace(score(ivs[i]), i);
        while (!queue.empty() && keep_going()) {
            const std::size_t i = queue.top().second;
            queue.pop();
            const Interval iv = ivs[i];
            const double mid = 0.5 * (iv.t0 + iv.t1);
            if (!(mid > iv.t0 && mid < iv.t1)) {
                ivs[i].error = 0.0;
                continue;
            }
            const auto l = detail::gauss_kronrod21(g, iv.t0, mid);
            const auto r = detail::gauss_kronrod21(g, mid, iv.t1);
            total += l.value + r.value - iv.mass;
            ivs[i] = {iv.t0, mid, l.value, l.error};
            ivs.push_back({mid, iv.t1, r.value, r.error});
            queue.emplace(score(ivs[i]), i);
            queue.emplace(score(ivs.back()), ivs.size() - 1);
        }
    };
    // Mass-driven splits keep the cubic starting guess sharp; error-driven
    // splits keep the cumulative masses at the knots exact.
    refine([](const Interval& iv) { return iv.mass + iv.error; },
           [&] { return static_cast<int>(ivs.size()) < knots; });
    auto error_sum = [&] {
        double e = 0.0;
        for (const auto& iv : ivs) e += iv.error;
        return e;
    };
    const int cap = 8 * knots;
    int since_check = 0;
    refine([](const Interval& iv) { return iv.error; },
           [&] {
               if (static_cast<int>(ivs.size()) >= cap) return false;
               if (++since_check % 16 != 1) return true;
               return error_sum() > 1e-13 * std::abs(total);
           });
    if (error_sum() > 1e-11 * std::abs(total)) {
        throw ConvergenceError("inverse CDF table did not resolve the density", total, error_sum());
    }
    std::sort(ivs.begin(), ivs.end(), [](const auto& a, const auto& b) { return a.t0 < b.t0; });

    s.t.assign(1, 0.0);
    s.mass.assign(1, 0.0);
    s.dens.clear();
    double cum = 0.0;
    for (const auto& iv : ivs) {
        cum += iv.mass;
        s.t.push_back(iv.t1);
        s.mass.push_back(cum);
    }
    s.dens.reserve(s.t.size());
    for (double t : s.t) s.dens.push_back(transformed(s, t));
}

double TabulatedCdf::support_lower() const { return y_lower(segments_.front()); }
double TabulatedCdf::support_upper() const { return y_upper(segments_.back()); }

double TabulatedCdf::cdf(double y) const
{
    if (y <= support_lower()) return 0.0;
    if (y >= support_upper()) return 1.0;
    for (const auto& s : segments_) {
        if (y > y_upper(s)) continue;
        const double t = s.map.inverse(to_u(s, y));
        const auto it = std::upper_bound(s.t.begin(), s.t.end(), t);
        std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - s.t.begin() - 1));
        k = std::min(k, s.t.size() - 2);
        const double m_u = s.mass[k] + local_mass(s, k, t);
        const double m = s.reflected ? s.mass.back() - m_u : m_u;
        return std::clamp((s.offset + m) / total_, 0.0, 1.0);
    }
    return 1.0;
}

double TabulatedCdf::solve_u_mass(const Segment& s, double local) const
{
    auto it = std::upper_bound(s.mass.begin(), s.mass.end(), local);
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - s.mass.begin() - 1));
    k = std::min(k, s.t.size() - 2);
    const double want = local - s.mass[k];

    const double t0 = s.t[k];
    const double t1 = s.t[k + 1];
    const double h = t1 - t0;
    const double m1 = s.mass[k + 1] - s.mass[k];

    // Cubic Hermite guess on the interval, in the local variable x in [0,1].
    const double d0 = s.dens[k] * h;
    const double d1 = s.dens[k + 1] * h;
    auto herm = [&](double x) {
        const double x2 = x * x;
        const double x3 = x2 * x;
        return (x3 - 2 * x2 + x) * d0 + (-2 * x3 + 3 * x2) * m1 + (x3 - x2) * d1;
    };
    auto herm_d = [&](double x) {
        const double x2 = x * x;
        return (3 * x2 - 4 * x + 1) * d0 + (-6 * x2 + 6 * x) * m1 + (3 * x2 - 2 * x) * d1;
    };
    double x = m1 > 0.0 ? std::clamp(want / m1, 0.0, 1.0) : 0.5;
    for (int i = 0; i < 4; ++i) {
        const double dv = herm_d(x);
        if (!(dv > 0.0)) break;
        const double nx = x - (herm(x) - want) / dv;
        if (!(nx > 0.0 && nx < 1.0)) break;
        x = nx;
    }

    // Safeguarded Newton on the exact local integral.
    double lo = t0;
    double hi = t1;
    double t = t0 + x * h;
    for (int i = 0; i < 200; ++i) {
        const double f = local_mass(s, k, t) - want;
        if (std::abs(f) <= kNewtonTol * total_) break;
        if (f > 0.0) {
            hi = t;
        } else {
            lo = t;
        }
        if (!(hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi))) break;
        const double dv = transformed(s, t);
        double nt = dv > 0.0 ? t - f / dv : 0.5 * (lo + hi);
        if (!(nt > lo && nt < hi)) nt = 0.5 * (lo + hi);
        t = nt;
    }
    return t;
}

double TabulatedCdf::quantile(double u) const
{
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
    if (u == 0.0) return support_lower();
    if (u == 1.0) return support_upper();
    const double target = u * total_;

    std::size_t si = 0;
    while (si + 1 < segments_.size() && segments_[si + 1].offset <= target) ++si;
    const Segment& s = segments_[si];
    const double local = std::clamp(target - s.offset, 0.0, s.mass.back());
    const double t = solve_u_mass(s, s.reflected ? s.mass.back() - local : local);

    double uu = 0.0;
    double jac = 0.0;
    if (!s.map.map(t, uu, jac)) {
        // t rounded onto an excluded end; step inside.
        const double tt = t <= 0.5 ? std::nextafter(0.0, 1.0) : std::nextafter(1.0, 0.0);
        s.map.map(tt, uu, jac);
    }
    return to_y(s, uu);
}

std::vector<double> TabulatedCdf::knots() const
{
    std::vector<double> out;
    for (const auto& s : segments_) {
        std::vector<double> ys;
        for (double t : s.t) {
            double u = 0.0;
            double jac = 0.0;
            if (!s.map.map(t, u, jac)) u = t <= 0.5 ? s.map.lower() : s.map.upper();
            ys.push_back(to_y(s, u));
        }
        if (s.reflected) std::reverse(ys.begin(), ys.end());
        out.insert(out.end(), ys.begin() + (out.empty() ? 0 : 1), ys.end());
    }
    return out;
}

std::vector<double> TabulatedCdf::cdf_values() const
{
    std::vector<double> out;
    for (const auto& s : segments_) {
        std::vector<double> cs;
        for (double m : s.mass) cs.push_back((s.offset + (s.reflected ? s.mass.back() - m : m)) / total_);
        if (s.reflected) std::reverse(cs.begin(), cs.end());
        out.insert(out.end(), cs.begin() + (out.empty() ? 0 : 1), cs.end());
    }
    return out;
}

TabulatedCdf build_inverse_cdf(const RealFn& pdf_unnormalized, const QuadSpec& spec)
{
    return TabulatedCdf(pdf_unnormalized, std::vector<QuadSpec>{spec});
}

TabulatedCdf build_inverse_cdf(const RealFn& pdf_unnormalized, const std::vector<QuadSpec>& pieces)
{
    return TabulatedCdf(pdf_unnormalized, pieces);
}

TabulatedCdf build_inverse_cdf(const std::vector<CdfPiece>& pieces)
{
    return TabulatedCdf(pieces);
}

} // namespace wohs
