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

#include "wohs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "wohs/errors.hpp"

namespace wohs {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kDefaultTailPower = -2.0;

// 21-point Kronrod abscissae on [-1,1] (positive half, descending) and weights;
// the odd entries carry the embedded 10-point Gauss rule.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077382035813840, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    int segment;
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

void check_finite_end_exponent(double e)
{
    if (!(e > -1.0)) {
        throw DomainError("endpoint exponent must exceed -1, got " + std::to_string(e));
    }
}

double tail_power_or_default(const std::optional<std::pair<double, double>>& ex, bool lower_end)
{
    if (!ex) return kDefaultTailPower;
    const double p = lower_end ? ex->first : ex->second;
    if (p == 0.0) return kDefaultTailPower;
    if (!(p < -1.0)) {
        throw DomainError("tail power at an infinite endpoint must be below -1, got " +
                          std::to_string(p));
    }
    return p;
}

} // namespace

MappedSegment MappedSegment::finite(double a, double b, double lower_exp, double upper_exp)
{
    if (!(a < b)) throw DomainError("segment needs lower < upper");
    if (lower_exp != 0.0 && upper_exp != 0.0) {
        throw DomainError("a finite segment carries at most one singular end");
    }
    check_finite_end_exponent(lower_exp);
    check_finite_end_exponent(upper_exp);
    MappedSegment s;
    s.kind_ = Kind::Finite;
    s.a_ = a;
    s.b_ = b;
    s.power_at_lower_ = upper_exp == 0.0;
    s.q_ = 1.0 / (1.0 + (s.power_at_lower_ ? lower_exp : upper_exp));
    return s;
}

MappedSegment MappedSegment::lower_tail(double b, double tail_power, double scale)
{
    if (!(tail_power < -1.0)) throw DomainError("tail power must be below -1");
    if (!(scale > 0.0)) throw DomainError("tail scale must be positive");
    MappedSegment s;
    s.kind_ = Kind::LowerTail;
    s.a_ = -kInf;
    s.b_ = b;
    s.q_ = 1.0 / (-tail_power - 1.0);
    s.scale_ = scale;
    return s;
}

MappedSegment MappedSegment::upper_tail(double a, double tail_power, double scale)
{
    if (!(tail_power < -1.0)) throw DomainError("tail power must be below -1");
    if (!(scale > 0.0)) throw DomainError("tail scale must be positive");
    MappedSegment s;
    s.kind_ = Kind::UpperTail;
    s.a_ = a;
    s.b_ = kInf;
    s.q_ = 1.0 / (-tail_power - 1.0);
    s.scale_ = scale;
    return s;
}

bool MappedSegment::map(double t, double& u, double& jacobian) const
{
    switch (kind_) {
    case Kind::Finite: {
        const double w = b_ - a_;
        if (q_ == 1.0) {
            u = a_ + w * t;
            jacobian = w;
            return true;
        }
        if (power_at_lower_) {
            if (t <= 0.0) return false;
            const double tq = std::pow(t, q_);
            u = a_ + w * tq;
            jacobian = w * q_ * tq / t;
            return u > a_;
        }
        const double s = 1.0 - t;
        if (s <= 0.0) return false;
        const double sq = std::pow(s, q_);
        u = b_ - w * sq;
        jacobian = w * q_ * sq / s;
        return u < b_;
    }
    case Kind::UpperTail: {
        const double s = 1.0 - t;
        if (s <= 0.0) return false;
        const double w = std::pow(s, q_);
        u = a_ + scale_ * (1.0 / w - 1.0);
        jacobian = scale_ * q_ * w / (s * w * w);
        return std::isfinite(u) && std::isfinite(jacobian);
    }
    case Kind::LowerTail: {
        if (t <= 0.0) return false;
        const double w = std::pow(t, q_);
        u = b_ - scale_ * (1.0 / w - 1.0);
        jacobian = scale_ * q_ * w / (t * w * w);
        return std::isfinite(u) && std::isfinite(jacobian);
    }
    }
    return false;
}

double MappedSegment::inverse(double u) const
{
    switch (kind_) {
    case Kind::Finite: {
        const double w = b_ - a_;
        if (q_ == 1.0) return std::clamp((u - a_) / w, 0.0, 1.0);
        if (power_at_lower_) return std::clamp(std::pow((u - a_) / w, 1.0 / q_), 0.0, 1.0);
        return std::clamp(1.0 - std::pow((b_ - u) / w, 1.0 / q_), 0.0, 1.0);
    }
    case Kind::UpperTail: {
        const double w = 1.0 / (1.0 + (u - a_) / scale_);
        return std::clamp(1.0 - std::pow(w, 1.0 / q_), 0.0, 1.0);
    }
    case Kind::LowerTail: {
        const double w = 1.0 / (1.0 + (b_ - u) / scale_);
        return std::clamp(std::pow(w, 1.0 / q_), 0.0, 1.0);
    }
    }
    return 0.0;
}

double MappedSegment::lower() const { return a_; }
double MappedSegment::upper() const { return b_; }

std::vector<MappedSegment> decompose(const QuadSpec& spec)
{
    if (!(spec.lower < spec.upper)) throw DomainError("quadrature needs lower < upper");
    if (!(spec.abs_tol > 0.0 && spec.rel_tol > 0.0)) {
        throw DomainError("quadrature tolerances must be positive");
    }
    if (std::isinf(spec.upper) && spec.upper < 0) throw DomainError("upper limit is -inf");
    if (std::isinf(spec.lower) && spec.lower > 0) throw DomainError("lower limit is +inf");
    const double lo = spec.lower;
    const double hi = spec.upper;
    const double L = spec.tail_scale;
    const bool inf_lo = std::isinf(lo);
    const bool inf_hi = std::isinf(hi);
    const double e_lo = spec.singularity_exponents ? spec.singularity_exponents->first : 0.0;
    const double e_hi = spec.singularity_exponents ? spec.singularity_exponents->second : 0.0;

    std::vector<MappedSegment> out;
    if (inf_lo && inf_hi) {
        out.push_back(MappedSegment::lower_tail(0.0, tail_power_or_default(spec.singularity_exponents, true), L));
        out.push_back(MappedSegment::upper_tail(0.0, tail_power_or_default(spec.singularity_exponents, false), L));
        return out;
    }
    if (inf_lo) {
        const double p = tail_power_or_default(spec.singularity_exponents, true);
        if (e_hi != 0.0) {
            out.push_back(MappedSegment::lower_tail(hi - L, p, L));
            out.push_back(MappedSegment::finite(hi - L, hi, 0.0, e_hi));
        } else {
            out.push_back(MappedSegment::lower_tail(hi, p, L));
        }
        return out;
    }
    if (inf_hi) {
        const double p = tail_power_or_default(spec.singularity_exponents, false);
        if (e_lo != 0.0) {
            out.push_back(MappedSegment::finite(lo, lo + L, e_lo, 0.0));
            out.push_back(MappedSegment::upper_tail(lo + L, p, L));
        } else {
            out.push_back(MappedSegment::upper_tail(lo, p, L));
        }
        return out;
    }
    if (e_lo != 0.0 && e_hi != 0.0) {
        const double mid = 0.5 * (lo + hi);
        out.push_back(MappedSegment::finite(lo, mid, e_lo, 0.0));
        out.push_back(MappedSegment::finite(mid, hi, 0.0, e_hi));
        return out;
    }
    out.push_back(MappedSegment::finite(lo, hi, e_lo, e_hi));
    return out;
}

namespace detail {

GkPanel gauss_kronrod21(const RealFn& g, double lo, double hi)
{
    const double centr = 0.5 * (lo + hi);
    const double hlgth = 0.5 * (hi - lo);
    const double dhlgth = std::abs(hlgth);

    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};
    const double fc = g(centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 10; ++j) {
        const double absc = hlgth * kXgk[j];
        const double f1 = g(centr - absc);
        const double f2 = g(centr + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        const double fsum = f1 + f2;
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    const double result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0) {
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    }
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        abserr = std::max(50.0 * kEps * resabs, abserr);
    }
    return {result, abserr};
}

} // namespace detail

namespace {

QuadResult integrate_segments(const RealFn& f, const std::vector<MappedSegment>& segs,
                              double abs_tol, double rel_tol, int max_panels)
{
    std::vector<RealFn> gs;
    gs.reserve(segs.size());
    for (const auto& s : segs) {
        gs.emplace_back([&f, &s](double t) {
            double u = 0.0;
            double jac = 0.0;
            if (!s.map(t, u, jac)) return 0.0;
            const double v = f(u);
            if (v == 0.0) return 0.0;
            const double r = v * jac;
            if (!std::isfinite(r)) {
                throw DomainError("integrand is not finite at u = " + std::to_string(u));
            }
            return r;
        });
    }

    std::priority_queue<Panel> queue;
    double total = 0.0;
    double err = 0.0;
    double frozen_err = 0.0;
    double frozen_val = 0.0;
    int panels = 0;
    constexpr int kInitialSplits = 4;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (int k = 0; k < kInitialSplits; ++k) {
            const double lo = static_cast<double>(k) / kInitialSplits;
            const double hi = static_cast<double>(k + 1) / kInitialSplits;
            const auto r = detail::gauss_kronrod21(gs[i], lo, hi);
            queue.push({static_cast<int>(i), lo, hi, r.value, r.error});
            total += r.value;
            err += r.error;
            ++panels;
        }
    }

    while (true) {
        const double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (err <= tol) break;
        if (queue.empty()) {
            throw ConvergenceError("quadrature cannot refine further", total, err);
        }
        if (panels >= max_panels) {
            throw ConvergenceError("quadrature panel budget exhausted", total, err);
        }
        const Panel p = queue.top();
        queue.pop();
        const double mid = 0.5 * (p.lo + p.hi);
        if (!(mid > p.lo && mid < p.hi)) {
            frozen_val += p.value;
            frozen_err += p.error;
            continue;
        }
        const auto& g = gs[static_cast<std::size_t>(p.segment)];
        const auto left = detail::gauss_kronrod21(g, p.lo, mid);
        const auto right = detail::gauss_kronrod21(g, mid, p.hi);
        total += left.value + right.value - p.value;
        err += left.error + right.error - p.error;
        queue.push({p.segment, p.lo, mid, left.value, left.error});
        queue.push({p.segment, mid, p.hi, right.value, right.error});
        ++panels;
        // Periodically re-sum to keep the running totals free of drift.
        if (panels % 64 == 0) {
            auto copy = queue;
            total = frozen_val;
            err = frozen_err;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, err, panels};
}

} // namespace

QuadResult integrate(const RealFn& f, const QuadSpec& spec)
{
    return integrate_segments(f, decompose(spec), spec.abs_tol, spec.rel_tol, spec.max_panels);
}

double adaptive_quad(const RealFn& f, const QuadSpec& spec)
{
    return integrate(f, spec).value;
}

QuadResult integrate_pieces(const RealFn& f, const std::vector<QuadSpec>& pieces)
{
    if (pieces.empty()) throw DomainError("no quadrature pieces given");
    std::vector<MappedSegment> segs;
    double abs_tol = pieces.front().abs_tol;
    double rel_tol = pieces.front().rel_tol;
    int budget = 0;
    for (const auto& p : pieces) {
        auto s = decompose(p);
        segs.insert(segs.end(), s.begin(), s.end());
        abs_tol = std::min(abs_tol, p.abs_tol);
        rel_tol = std::min(rel_tol, p.rel_tol);
        budget += p.max_panels;
    }
    return integrate_segments(f, segs, abs_tol, rel_tol, budget);
}

} // namespace wohs
