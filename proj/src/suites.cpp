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

#include "wohs/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "wohs/errors.hpp"
#include "wohs/kernels.hpp"
#include "wohs/numerics.hpp"
#include "wohs/quadrature.hpp"
#include "wohs/samplers.hpp"
#include "wohs/walk.hpp"

namespace wohs {

namespace {

using nlohmann::json;
using ParamSet = std::pair<double, int>;
constexpr double kPi = std::numbers::pi;

std::string tag(double alpha, int d)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "a=%g,d=%d", alpha, d);
    return buf;
}

// Disjoint stream ids: suite, check and run each own a bit field; walk i of a
// batch adds i to the base.
std::uint64_t stream_base(Suite suite, int check, int run)
{
    return ((static_cast<std::uint64_t>(suite) << 24) | (static_cast<std::uint64_t>(check) << 4) |
            static_cast<std::uint64_t>(run))
           << 32;
}

double uniform_in(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

struct Outcome {
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    json detail = json::object();
};

// Stochastic checks run on up to three disjoint stream sets and pass when two
// of them do. fn(run) returns one outcome per id; the third run is only drawn
// when the first two disagree on some id.
std::vector<Check> two_of_three(const std::vector<std::string>& ids,
                                const std::function<std::vector<Outcome>(int)>& fn)
{
    std::vector<std::vector<Outcome>> runs;
    runs.push_back(fn(0));
    runs.push_back(fn(1));
    bool split = false;
    for (std::size_t k = 0; k < ids.size(); ++k) split |= runs[0][k].pass != runs[1][k].pass;
    if (split) runs.push_back(fn(2));
    std::vector<Check> out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        int passes = 0;
        json per_run = json::array();
        for (const auto& r : runs) {
            passes += r[k].pass;
            per_run.push_back({{"statistic", r[k].statistic},
                               {"threshold", r[k].threshold},
                               {"pass", r[k].pass},
                               {"detail", r[k].detail}});
        }
        Check c;
        c.id = ids[k];
        c.statistic = runs[0][k].statistic;
        c.threshold = runs[0][k].threshold;
        c.pass = passes >= 2;
        c.detail = {{"rule", "passes on at least 2 of 3 disjoint streams"}, {"runs", per_run}};
        out.push_back(std::move(c));
    }
    return out;
}

// A quadrature check passes only if the residual is inside the stated
// tolerance and inside ten times the reported error bound.
Check bounded_check(std::string id, double value, double expected, double tol, double bound,
                    bool relative)
{
    const double scale = relative ? std::abs(expected) : 1.0;
    const double resid = std::abs(value - expected) / scale;
    const double allowed = std::min(tol, 10.0 * bound / scale);
    Check c;
    c.id = std::move(id);
    c.statistic = resid;
    c.threshold = allowed;
    c.pass = resid <= allowed;
    c.detail = {{"value", value}, {"expected", expected}, {"quadrature_bound", bound}, {"tolerance", tol}};
    return c;
}

QuadSpec piece(double lo, double hi, double e_lo, double e_hi, double rel_tol, double scale = 1.0)
{
    QuadSpec q;
    q.lower = lo;
    q.upper = hi;
    q.singularity_exponents = std::pair{e_lo, e_hi};
    q.tail_scale = scale;
    q.rel_tol = rel_tol;
    q.abs_tol = 1e-16;
    q.max_panels = 20000;
    return q;
}

QuadResult add(QuadResult a, const QuadResult& b)
{
    a.value += b.value;
    a.error += b.error;
    a.panels += b.panels;
    return a;
}

// ---------------------------------------------------------------------------
// Integrals along a ray from the start x, used for integrals over the
// half-space above a downward barrier. Near x the integrand is evaluated in a
// frame with x1 = 0 (barrier at -gx); near the barrier in a frame with the
// barrier at 0 (x1 = gx). Each singular end then sits at an exact zero.

enum class Frame { Start, Barrier };

// h(rho, gy, frame): integrand at distance rho along the ray, gap gy of the point.
using RayFn = std::function<double(double, double, Frame)>;

struct RaySpec {
    double gx = 1.0;
    double c = 1.0;             ///< cosine of the angle to e1
    double scale = 1.0;         ///< length scale of the structure near x
    double near_exp = 0.0;      ///< exponent in rho at rho = 0
    double barrier_exp = 0.0;   ///< exponent in gy at the barrier
    double tail_power = -2.0;   ///< decay in rho for rays that never meet the barrier
    double rel_tol = 1e-11;
};

QuadResult ray_integral(const RayFn& h, const RaySpec& rs)
{
    auto near = [&](double rho) { return h(rho, rs.gx + rho * rs.c, Frame::Start); };
    const bool hits = rs.c < 0.0;
    const double rho_end = hits ? 0.5 * rs.gx / -rs.c : kInf;
    // Out to where the first coordinate has moved by a few gaps.
    const double reach = hits ? rho_end : std::min(4.0 * std::max(rs.scale, rs.gx / std::max(rs.c, 1e-300)),
                                                   1e12 * rs.scale);
    QuadResult total;
    double lo = 0.0;
    double hi = std::min(0.25 * rs.scale, reach);
    total = add(total, integrate(near, piece(lo, hi, rs.near_exp, 0.0, rs.rel_tol)));
    while (hi < reach) {
        lo = hi;
        hi = std::min(4.0 * hi, reach);
        total = add(total, integrate(near, piece(lo, hi, 0.0, 0.0, rs.rel_tol)));
    }
    if (!hits) {
        return add(total, integrate(near, piece(reach, kInf, 0.0, rs.tail_power, rs.rel_tol, reach)));
    }
    // Second half of the ray in the barrier frame, parametrised by gy.
    auto by_gap = [&](double gy) { return h((rs.gx - gy) / -rs.c, gy, Frame::Barrier) / -rs.c; };
    return add(total, integrate(by_gap, piece(0.0, 0.5 * rs.gx, rs.barrier_exp, 0.0, rs.rel_tol)));
}

// Outer integral over the polar angle of a family of ray integrals. The bound
// adds the worst inner relative error times the total.
struct NestedResult {
    double value = 0.0;
    double bound = 0.0;
};

NestedResult angular_integral(const std::function<QuadResult(double)>& ray,
                              const std::vector<double>& cuts, double rel_tol)
{
    double worst = 0.0;
    auto f = [&](double th) {
        const QuadResult r = ray(th);
        if (r.value != 0.0) worst = std::max(worst, r.error / std::abs(r.value));
        return r.value;
    };
    NestedResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const QuadResult r = integrate(f, piece(cuts[i], cuts[i + 1], 0.0, 0.0, rel_tol));
        out.value += r.value;
        out.bound += r.error;
    }
    out.bound += worst * std::abs(out.value);
    return out;
}

PointXd axis_point(int d, double first)
{
    PointXd p = PointXd::Zero(d);
    p(0) = first;
    return p;
}

// ---------------------------------------------------------------------------
// Normalization

// Transverse integral of (a^2 + |t|^2)^(-d/2) over R^(d-1), times a.
double transverse_cauchy_factor(int d) { return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

QuadResult pcr_total(const StableParams& p)
{
    const int d = p.dim();
    const double a = p.alpha();
    const double tf = transverse_cauchy_factor(d);
    // Start frame: x1 = 0, barrier at -1, y1 = -s.
    auto near_x = [&](double s) {
        return pcr_density(axis_point(d, 0.0), axis_point(d, -s), p, Barrier{-1.0, Direction::Down}) *
               std::pow(s, d - 1) * tf;
    };
    // Barrier frame: barrier at 0, x1 = 1, y1 = v.
    auto near_b = [&](double v) {
        return pcr_density(axis_point(d, 1.0), axis_point(d, v), p) * std::pow(1.0 - v, d - 1) * tf;
    };
    return add(integrate(near_x, piece(0.0, 0.5, a / 2 - 1, 0.0, 1e-12)),
               integrate(near_b, piece(0.0, 0.5, -a / 2, 0.0, 1e-12)));
}

QuadResult overshoot_total(const StableParams& p)
{
    const int d = p.dim();
    const double a = p.alpha();
    const double tf = transverse_cauchy_factor(d);
    auto f = [&](double v) {
        return overshoot_density(axis_point(d, 1.0), axis_point(d, -v), p) * std::pow(1.0 + v, d - 1) * tf;
    };
    return integrate(f, piece(0.0, kInf, -a / 2, -1 - a / 2, 1e-12));
}

// Joint law of (undershoot, overshoot): the overshoot is integrated in closed
// form (transverse Cauchy-type integral, then the power law in the first
// coordinate), the undershoot over the half-space in polar coordinates about x.
NestedResult double_total(const StableParams& p)
{
    const int d = p.dim();
    const double a = p.alpha();
    const double gx = 1.0;
    const double tz = std::pow(kPi, 0.5 * (d - 1)) * std::tgamma(0.5 * (a + 1)) / std::tgamma(0.5 * (a + d));
    const double sphere = d > 2 ? unit_sphere_area(d - 1) : 2.0;
    auto ray = [&](double th) {
        const double c = std::cos(th);
        const double s = std::sin(th);
        const double w = sphere * std::pow(s, d - 2);
        RayFn h = [&, c, s](double rho, double gy, Frame frame) {
            const double shift = frame == Frame::Start ? -gx : 0.0;  // barrier level in this frame
            PointXd x = axis_point(d, gx + shift);
            PointXd y = PointXd::Zero(d);
            y(0) = frame == Frame::Start ? rho * c : gy;
            y(1) = rho * s;
            PointXd z = y;
            z(0) = shift - gy;
            const Barrier b{shift, Direction::Down};
            return double_density(x, y, z, p, b) * std::pow(2.0 * gy, a + d) * tz * std::pow(gy, -a) / a *
                   std::pow(rho, d - 1) * w;
        };
        RaySpec rs;
        rs.gx = gx;
        rs.c = c;
        rs.near_exp = a - 1;
        rs.barrier_exp = -a / 2;
        rs.tail_power = -1 - a / 2;
        return ray_integral(h, rs);
    };
    return angular_integral(ray, {0.0, kPi / 2, kPi}, 1e-10);
}

// Conditioned overshoot across a slab face, first coordinate after the
// transverse integral. The face-side piece runs in long double so that points
// within 1e-16 of the face stay distinct from it.
QuadResult conditioned_total(const StableParams& p, double x1, SlabFace face)
{
    const int d = p.dim();
    const double a = p.alpha();
    const double tf = transverse_cauchy_factor(d);
    const double sgn = face == SlabFace::Plus ? 1.0 : -1.0;
    auto at = [&](long double y1c) -> double {
        Point<long double> x = Point<long double>::Zero(d);
        Point<long double> y = Point<long double>::Zero(d);
        x(0) = x1;
        y(0) = sgn * y1c;
        if (y(0) == x(0) || std::abs(y(0)) == 1.0L) return 0.0;
        const long double dist = std::abs(x(0) - y(0));
        return static_cast<double>(overshoot_density_conditioned(x, y, face, p) *
                                   std::pow(dist, static_cast<long double>(d - 1))) *
               tf;
    };
    // Canonical coordinate y1c = sgn * y1, face at +1, start sgn * x1 > 1.
    QuadResult r = integrate([&](double y) { return at(y); },
                             piece(-kInf, -1.0, a / 2 - 2, 0.0, 1e-12, sgn * x1 + 1.0));
    r = add(r, integrate([&](double y) { return at(y); }, piece(-1.0, 0.0, 0.0, a - 1, 1e-12)));
    r = add(r, integrate([&](double y) { return at(y); }, piece(0.0, 0.5, a - 1, 0.0, 1e-12)));
    return add(r, integrate([&](double v) { return at(1.0L - static_cast<long double>(v)); },
                            piece(0.0, 0.5, -a / 2, 0.0, 1e-12)));
}

ValidationReport normalization(const std::vector<ParamSet>& grid)
{
    ValidationReport rep;
    for (auto [alpha, d] : grid) {
        const StableParams p(alpha, d);
        const std::string t = tag(alpha, d);
        const QuadResult pcr = pcr_total(p);
        rep.add(bounded_check("pcr-mass " + t, pcr.value, 1.0, 1e-6, pcr.error, false));
        const double cancel = p.constants().C * std::pow(kPi, d / 2.0 + 1) /
                              (std::tgamma(d / 2.0) * std::sin(alpha * kPi / 2));
        rep.add({"pcr-constant " + t, std::abs(cancel - 1.0), 1e-13, std::abs(cancel - 1.0) <= 1e-13,
                 {{"value", cancel}}});
        const QuadResult ov = overshoot_total(p);
        rep.add(bounded_check("overshoot-mass " + t, ov.value, 1.0, 1e-6, ov.error, false));
        const NestedResult dd = double_total(p);
        rep.add(bounded_check("double-mass " + t, dd.value, 1.0, 1e-6, dd.bound, false));
        if (alpha < 1.0) {
            for (double x1 : {2.0, -3.0}) {
                const SlabFace face = x1 > 0 ? SlabFace::Plus : SlabFace::Minus;
                const QuadResult c = conditioned_total(p, x1, face);
                char id[96];
                std::snprintf(id, sizeof id, "conditioned-mass %s,x1=%g", t.c_str(), x1);
                rep.add(bounded_check(id, c.value, 1.0, 1e-6, c.error, false));
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Marginalization: triple -> double over the closest reach, double -> overshoot
// over the undershoot.

PointXd random_point(RngStream& rng, int d, double lo1, double hi1, double span)
{
    PointXd v(d);
    v(0) = uniform_in(rng, lo1, hi1);
    for (int k = 1; k < d; ++k) v(k) = uniform_in(rng, -span, span);
    return v;
}

// Integral of the triple law over w, for the barrier at 0. The transverse part
// is the convolution of two Cauchy-type kernels (closed form); the first
// coordinate of w runs over (0, min(x1, y1)) in the local distance s below
// the minimum.
QuadResult triple_over_w(const PointXd& x, const PointXd& y, const PointXd& z, const StableParams& p)
{
    const int d = p.dim();
    const double a = p.alpha();
    const double m = std::min(x(0), y(0));
    // Shift so that min(x1, y1) = 0; the barrier moves to -m.
    PointXd xs = x, ys = y, zs = z;
    xs(0) -= m;
    ys(0) -= m;
    zs(0) -= m;
    if (x(0) <= y(0)) xs(0) = 0.0;
    else ys(0) = 0.0;
    const Barrier b{-m, Direction::Down};
    const double tf = transverse_cauchy_factor(d);
    const Eigen::VectorXd sep = (y - x).tail(d - 1);
    auto f = [&](double s) {
        PointXd w = xs;
        w(0) = -s;
        const double aa = xs(0) + s;
        const double bb = ys(0) + s;
        // Kernel at w on x's transverse line, rescaled to the transverse integral.
        const double point = std::pow(aa, -d) * std::pow(bb * bb + sep.squaredNorm(), -0.5 * d);
        const double integral = tf * tf / (aa * bb) * cauchy_density(sep, aa + bb);
        return triple_density(xs, w, ys, zs, p, b) / point * integral;
    };
    return add(integrate(f, piece(0.0, 0.5 * m, a / 2 - 1, 0.0, 1e-11)),
               integrate(f, piece(0.5 * m, m, 0.0, 0.0, 1e-11)));
}

// Integral over (0, pi) of a smooth even periodic function of the angle. The
// trapezoid rule converges geometrically here; the node count doubles until
// two successive sums agree to 1e-13.
double periodic_trapezoid(const std::function<double(double)>& f)
{
    int n = 8;
    double h = kPi / n;
    double sum = 0.5 * (f(0.0) + f(kPi));
    for (int k = 1; k < n; ++k) sum += f(k * h);
    double prev = sum * h;
    for (int round = 0; round < 12; ++round) {
        for (int k = 1; k < 2 * n; k += 2) sum += f(k * h / 2);
        n *= 2;
        h /= 2;
        const double cur = sum * h;
        if (std::abs(cur - prev) <= 1e-13 * std::abs(cur)) return cur;
        if (round == 11) throw ConvergenceError("azimuthal trapezoid sum did not settle", cur, std::abs(cur - prev));
        prev = cur;
    }
    return prev;
}

// Integral of the double law over y for x = (gx, 0, ...) and z with z(2..)
// along e2. For d >= 3 the azimuth about e1 is integrated innermost, using
// that the law depends on it only through |y - z|.
NestedResult double_over_y(double gx, const PointXd& z, const StableParams& p)
{
    const int d = p.dim();
    const double a = p.alpha();
    const double gz = -z(0);
    const double zeta = d > 1 ? z(1) : 0.0;
    const double shell = d > 3 ? unit_sphere_area(d - 2) : 2.0;
    auto ray = [&](double th) {
        const double c = std::cos(th);
        const double s = std::sin(th);
        RayFn h = [&, c, s](double rho, double gy, Frame frame) {
            const double level = frame == Frame::Start ? -gx : 0.0;
            PointXd x = axis_point(d, gx + level);
            PointXd zz = z;
            zz(0) = level - gz;
            PointXd y = PointXd::Zero(d);
            y(0) = frame == Frame::Start ? rho * c : gy;
            y(1) = rho * s;
            const double base = double_density(x, y, zz, p, Barrier{level, Direction::Down}) * std::pow(rho, d - 1);
            if (d == 2) return base;
            // |y_phi - z|^2 = A - B cos(phi).
            const double dy1 = gy + gz;
            const double A = dy1 * dy1 + rho * rho * s * s + zeta * zeta;
            const double B = 2.0 * rho * s * zeta;
            auto phi = [&](double ph) {
                return std::pow((A - B) / (A - B * std::cos(ph)), 0.5 * (a + d)) * std::pow(std::sin(ph), d - 3);
            };
            const double around = shell * (d == 3 ? periodic_trapezoid(phi) : integrate(phi, piece(0.0, kPi, 0.0, 0.0, 1e-11)).value);
            return base * std::pow(s, d - 2) * around;
        };
        RaySpec rs;
        rs.gx = gx;
        rs.c = c;
        rs.scale = std::min(gx, std::hypot(gx + gz, zeta));
        rs.near_exp = a - 1;
        rs.barrier_exp = a / 2;
        rs.tail_power = -1 - d - a / 2;
        rs.rel_tol = 1e-10;
        return ray_integral(h, rs);
    };
    if (d == 2) return angular_integral(ray, {0.0, kPi / 2, kPi, 1.5 * kPi, 2 * kPi}, 1e-8);
    return angular_integral(ray, {0.0, kPi / 2, kPi}, 1e-8);
}

ValidationReport marginalization(const std::vector<ParamSet>& grid, const SuiteOptions& opt)
{
    ValidationReport rep;
    int idx = 0;
    for (auto [alpha, d] : grid) {
        const StableParams p(alpha, d);
        const std::string t = tag(alpha, d);
        RngStream rng(opt.seed, stream_base(Suite::Marginalization, idx++, 0));
        double worst_tw = 0.0, worst_dy = 0.0;
        bool ok_tw = true, ok_dy = true;
        json pts_tw = json::array(), pts_dy = json::array();
        for (int i = 0; i < opt.points; ++i) {
            const PointXd x = random_point(rng, d, 0.2, 3.0, 2.0);
            const PointXd y = random_point(rng, d, 0.2, 3.0, 2.0);
            const PointXd z = random_point(rng, d, -3.0, -0.2, 2.0);
            const QuadResult q = triple_over_w(x, y, z, p);
            const Check c = bounded_check("", q.value, double_density(x, y, z, p), 1e-4, q.error, true);
            worst_tw = std::max(worst_tw, c.statistic);
            ok_tw &= c.pass;
            pts_tw.push_back(c.detail);
        }
        for (int i = 0; i < opt.points; ++i) {
            const double gx = uniform_in(rng, 0.2, 3.0);
            PointXd z = PointXd::Zero(d);
            z(0) = -uniform_in(rng, 0.2, 3.0);
            z(1) = uniform_in(rng, 0.0, 3.0);
            const NestedResult q = double_over_y(gx, z, p);
            const Check c = bounded_check("", q.value, overshoot_density(axis_point(d, gx), z, p), 1e-4,
                                          q.bound, true);
            worst_dy = std::max(worst_dy, c.statistic);
            ok_dy &= c.pass;
            pts_dy.push_back(c.detail);
        }
        rep.add({"triple-to-double " + t, worst_tw, 1e-4, ok_tw,
                 {{"points", pts_tw}, {"rule", "each point within 1e-4 and 10x its quadrature bound"}}});
        rep.add({"double-to-overshoot " + t, worst_dy, 1e-4, ok_dy,
                 {{"points", pts_dy}, {"rule", "each point within 1e-4 and 10x its quadrature bound"}}});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Factorization

ValidationReport factorization(const std::vector<ParamSet>& grid, const SuiteOptions& opt)
{
    ValidationReport rep;
    int idx = 0;
    for (auto [alpha, d] : grid) {
        const StableParams p(alpha, d);
        RngStream rng(opt.seed, stream_base(Suite::Factorization, idx++, 0));
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const PointXd x = random_point(rng, d, 0.01, 3.0, 3.0);
            const PointXd y = random_point(rng, d, 0.01, 3.0, 3.0);
            const PointXd z = random_point(rng, d, -3.0, -0.01, 3.0);
            const double lhs = double_density(x, y, z, p);
            const double rhs = green_halfspace(x, y, p) * jump_density(PointXd(z - y), p);
            worst = std::max(worst, std::abs(lhs - rhs) / lhs);
        }
        rep.add({"green-times-jump " + tag(alpha, d), worst, 1e-12, worst <= 1e-12, {{"triples", 100}}});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Flat earth

ValidationReport flat_earth(const std::vector<ParamSet>& grid)
{
    static const double pairs[10][4] = {
        {1.0, 0.0, 0.0, 0.0},   {2.0, 0.5, -1.0, 1.0},  {0.6, 0.0, 0.4, 0.2},  {3.0, -2.0, -2.0, 3.0},
        {1.5, 1.0, 0.49, -1.0}, {5.0, 0.0, -5.0, 0.0},  {0.9, 4.0, -0.5, -4.0}, {2.5, -1.0, -3.0, -2.0},
        {1.2, 0.3, 0.1, 0.3},   {4.0, 2.0, -1.0, -6.0},
    };
    const double r = 0.5;
    ValidationReport rep;
    for (auto [alpha, d] : grid) {
        const StableParams p(alpha, d);
        bool monotone = true;
        double worst_last = 0.0;
        json rows = json::array();
        for (const auto& pr : pairs) {
            PointXd x = PointXd::Zero(d), y = PointXd::Zero(d);
            x(0) = pr[0];
            y(0) = pr[2];
            if (d > 1) {
                x(1) = pr[1];
                y(1) = pr[3];
            }
            const double half = overshoot_density(x, y, p, Barrier{r, Direction::Down});
            std::vector<double> gaps;
            for (double R : {1e2, 1e3, 1e4}) {
                const double ball = ball_hitting_density(x, y, PointXd(axis_point(d, -R)), R + r, p);
                gaps.push_back(std::abs(ball - half) / half);
            }
            monotone &= gaps[0] > gaps[1] && gaps[1] > gaps[2];
            worst_last = std::max(worst_last, gaps[2]);
            rows.push_back({{"x", {pr[0], pr[1]}}, {"y", {pr[2], pr[3]}}, {"gaps", gaps}});
        }
        const std::string t = tag(alpha, d);
        rep.add({"gap-decreasing " + t, monotone ? 1.0 : 0.0, 1.0, monotone,
                 {{"R", {1e2, 1e3, 1e4}}, {"pairs", rows}, {"barrier", r}}});
        rep.add({"gap-at-1e4 " + t, worst_last, 1e-2, worst_last <= 1e-2, json::object()});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Sampler fidelity: x = (2, 0, ...), barrier {x1 = 1} crossed downward.

// Mass of the (y1, y2) cell [y1_lo, y1_hi] x [t_lo, t_hi] under the overshoot
// law; the remaining d-2 coordinates and y2 are integrated in closed form.
double overshoot_cell_mass(double y1_lo, double y1_hi, double t_lo, double t_hi, double gx,
                           const StableParams& p)
{
    const int d = p.dim();
    const double a = p.alpha();
    const double pre = p.constants().C * std::pow(kPi, 0.5 * (d - 2)) / std::tgamma(0.5 * d);
    auto f = [&](double v) {
        const double r = gx + v;
        return pre * std::pow(gx / v, a / 2) * (std::atan(t_hi / r) - std::atan(t_lo / r)) / r;
    };
    const double v_lo = 1.0 - y1_hi;
    const double v_hi = 1.0 - y1_lo;
    QuadSpec q = piece(v_lo, v_hi, v_lo == 0.0 ? -a / 2 : 0.0, 0.0, 1e-10);
    q.abs_tol = 1e-14;
    return integrate(f, q).value;
}

std::vector<Check> sampler_fit_one(double alpha, int d, const SuiteOptions& opt, int idx)
{
    const StableParams p(alpha, d);
    const std::string t = tag(alpha, d);
    const PointXd x = axis_point(d, 2.0);
    const Barrier b{1.0, Direction::Down};
    const double gx = 1.0;
    return two_of_three({"beta-transform-ks " + t, "overshoot-chi2-40x40 " + t}, [&](int run) {
        const std::uint64_t id = stream_base(Suite::SamplerFit, idx, run);
        RngStream first(opt.seed, id, 0), transverse(opt.seed, id, 1);
        Histogram2D hist(-4.0, 1.0, -5.0, 5.0, 40, 40);
        std::vector<double> u(opt.n);
        for (std::size_t i = 0; i < opt.n; ++i) {
            const PointXd y = overshoot_point(x, b, p, first, transverse);
            const double over = 1.0 - y(0);
            u[i] = over / (gx + over);
            hist.add(y(0), y(1));
        }
        const KsResult ks =
            ks_statistic(u, [&](double v) { return regularized_incomplete_beta(v, 1 - alpha / 2, alpha / 2); });
        const ChiSquareResult chi = chi_square_vs_bin_masses(hist, [&](int i, int j) {
            return overshoot_cell_mass(hist.x_edge(i), hist.x_edge(i + 1), hist.y_edge(j), hist.y_edge(j + 1), gx, p);
        });
        return std::vector<Outcome>{
            {ks.d, ks.critical, ks.pass, {{"n", opt.n}}},
            {chi.statistic, chi.critical, chi.pass,
             {{"dof", chi.dof}, {"cells", chi.cells}, {"pooled_bins", chi.pooled_bins},
              {"clipped", hist.clipped_count()}}},
        };
    });
}

ValidationReport sampler_fit(const std::vector<ParamSet>& grid, const SuiteOptions& opt)
{
    ValidationReport rep;
    int idx = 0;
    for (auto [alpha, d] : grid)
        for (Check& c : sampler_fit_one(alpha, d, opt, idx++)) rep.add(std::move(c));
    return rep;
}

// ---------------------------------------------------------------------------
// Walk helpers

WalkConfig walk_config(double alpha, int d, double start1, Measure m, WalkMode mode, std::int64_t cap)
{
    WalkConfig c;
    c.params = StableParams(alpha, d);
    c.start = axis_point(d, start1);
    c.measure = m;
    c.mode = mode;
    c.max_crossings = cap;
    return c;
}

// Coordinate k of the final points of entered walks, with their weights.
struct Finals {
    std::vector<double> values;
    std::vector<double> weights;
    std::size_t capped = 0;
};

Finals finals(const WalkDataset& ds, int k)
{
    Finals f;
    for (const WalkResult& r : ds.results) {
        if (r.status != WalkStatus::Entered || !r.final_point) {
            ++f.capped;
            continue;
        }
        f.values.push_back((*r.final_point)(k));
        f.weights.push_back(r.weight);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Mode equivalence

ValidationReport mode_equivalence(const std::vector<ParamSet>& grid, const SuiteOptions& opt)
{
    ValidationReport rep;
    int idx = 0;
    for (auto [alpha, d] : grid) {
        if (alpha < 1.0) throw UsageError("mode equivalence runs plain walks and needs alpha >= 1");
        const std::string t = tag(alpha, d);
        const int check = idx++;
        auto checks = two_of_three({"collapsed-vs-fulltrace-x1 " + t, "collapsed-vs-fulltrace-x2 " + t},
                                   [&](int run) {
            std::vector<Finals> by_mode;
            int m = 0;
            for (WalkMode mode : {WalkMode::Collapsed, WalkMode::FullTrace}) {
                // Each mode on its own streams, so the first coordinates are independent.
                const std::uint64_t base = stream_base(Suite::ModeEquivalence, 2 * check + m++, run);
                const WalkConfig c = walk_config(alpha, d, 2.0, Measure::Plain, mode, kDefaultPlainCap);
                const WalkDataset ds = batch_walk(c, opt.n, opt.workers, opt.seed, nullptr, base);
                by_mode.push_back(finals(ds, 0));
                by_mode.push_back(finals(ds, 1));
            }
            // by_mode: [collapsed x1, collapsed x2, fulltrace x1, fulltrace x2]
            std::vector<Outcome> out;
            for (int k = 0; k < 2; ++k) {
                const KsResult ks = two_sample_ks(by_mode[k].values, by_mode[2 + k].values);
                out.push_back({ks.d, ks.critical, ks.pass,
                               {{"n_collapsed", by_mode[k].values.size()},
                                {"n_fulltrace", by_mode[2 + k].values.size()}}});
            }
            return out;
        });
        for (Check& c : checks) rep.add(std::move(c));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Conditioned measure

// One crossing of the face {x1 = 1} from x1 = 2. Conditioned draws weighted by
// (|y1|/2)^(1-alpha) against plain draws. The weights have infinite variance
// for alpha <= 2/3, so both samples are restricted to y1 >= -50; the weighted
// mass of that event is checked against its exact plain probability.
std::vector<Check> one_crossing(double alpha, const SuiteOptions& opt, int idx)
{
    constexpr double floor_y = -50.0;
    const std::string t = tag(alpha, 2);
    const double exact = regularized_incomplete_beta(51.0 / 52.0, 1 - alpha / 2, alpha / 2);
    ConditionedSamplerCache cache(alpha);
    return two_of_three({"one-crossing-weighted-ks " + t, "one-crossing-weighted-mass " + t}, [&](int run) {
        const std::uint64_t id = stream_base(Suite::Conditioned, idx, run);
        RngStream plain_rng(opt.seed, id, 0), cond_rng(opt.seed, id, 1);
        std::vector<double> plain, cond, w;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < opt.n; ++i) {
            const double yp = overshoot_first_coord(2.0, barrier_of(SlabFace::Plus), alpha, plain_rng);
            if (yp >= floor_y) plain.push_back(yp);
            const double yc = overshoot_first_coord_conditioned(2.0, SlabFace::Plus, alpha, cache, cond_rng);
            const double wi = yc >= floor_y ? std::pow(std::abs(yc) / 2.0, 1 - alpha) : 0.0;
            sum += wi;
            sum2 += wi * wi;
            if (wi > 0.0) {
                cond.push_back(yc);
                w.push_back(wi);
            }
        }
        const double n = static_cast<double>(opt.n);
        const double mean = sum / n;
        const double se = std::sqrt(std::max(sum2 / n - mean * mean, 0.0) / (n - 1));
        const KsResult ks = weighted_two_sample_ks(cond, w, plain);
        const double z = std::abs(mean - exact) / se;
        return std::vector<Outcome>{
            {ks.d, ks.critical, ks.pass, {{"n_eff", ks.n_eff}, {"floor", floor_y}}},
            {z, 4.0, z <= 4.0, {{"weighted_mass", mean}, {"exact", exact}, {"std_error", se}}},
        };
    });
}

ValidationReport conditioned(const SuiteOptions& opt)
{
    ValidationReport rep;
    int idx = 0;
    for (double alpha : {0.5, 0.9})
        for (Check& c : one_crossing(alpha, opt, idx++)) rep.add(std::move(c));

    // Walk level, alpha = 0.9: weighted conditioned finals vs plain entered finals.
    {
        const double alpha = 0.9;
        std::vector<double> edges(21);
        for (int k = 0; k <= 20; ++k) edges[static_cast<std::size_t>(k)] = -1.0 + 0.1 * k;
        edges.back() = 1.0;
        ConditionedSamplerCache cache(alpha);
        auto checks = two_of_three({"walk-weighted-chi2 " + tag(alpha, 2)}, [&](int run) {
            const WalkConfig cp = walk_config(alpha, 2, 2.0, Measure::Plain, WalkMode::Collapsed, 10000);
            const WalkConfig cc = walk_config(alpha, 2, 2.0, Measure::Conditioned, WalkMode::Collapsed, 0);
            const WalkDataset dp =
                batch_walk(cp, opt.n, opt.workers, opt.seed, nullptr, stream_base(Suite::Conditioned, 10, run));
            const WalkDataset dc =
                batch_walk(cc, opt.n, opt.workers, opt.seed, &cache, stream_base(Suite::Conditioned, 11, run));
            const Finals fp = finals(dp, 0), fc = finals(dc, 0);
            const ChiSquareResult chi = weighted_two_sample_chi_square(fp.values, fc.values, fc.weights, edges, 5.0, 0.001);
            return std::vector<Outcome>{{chi.statistic, chi.critical, chi.pass,
                                         {{"dof", chi.dof},
                                          {"plain_entered", fp.values.size()},
                                          {"plain_capped", fp.capped},
                                          {"conditioned_entered", fc.values.size()},
                                          {"level", 0.001}}}};
        });
        for (Check& c : checks) rep.add(std::move(c));
    }

    // Hitting probabilities at alpha = 0.5.
    {
        const double alpha = 0.5;
        const std::vector<double> starts{1.5, 2.0, 4.0, 8.0};
        ConditionedSamplerCache cache(alpha);
        auto checks = two_of_three({"hitting-in-unit-interval " + tag(alpha, 2), "hitting-nonincreasing " + tag(alpha, 2)},
                                   [&](int run) {
            std::vector<HittingEstimate> est;
            json rows = json::array();
            bool inside = true, monotone = true;
            double worst = -kInf;
            for (std::size_t s = 0; s < starts.size(); ++s) {
                const WalkConfig c = walk_config(alpha, 2, starts[s], Measure::Conditioned, WalkMode::Collapsed, 0);
                const WalkDataset ds = batch_walk(c, opt.n, opt.workers, opt.seed, &cache,
                                                  stream_base(Suite::Conditioned, 20 + static_cast<int>(s), run));
                est.push_back(hitting_probability_estimate(ds.results));
                inside &= est.back().mean > 0.0 && est.back().mean < 1.0;
                rows.push_back({{"start", starts[s]}, {"mean", est.back().mean}, {"std_error", est.back().std_error}});
            }
            for (std::size_t s = 0; s + 1 < est.size(); ++s) {
                // Increase in units of the combined standard error.
                const double rise = (est[s + 1].mean - est[s].mean) /
                                    std::hypot(est[s].std_error, est[s + 1].std_error);
                worst = std::max(worst, rise);
                monotone &= rise <= 4.0;
            }
            return std::vector<Outcome>{{inside ? 1.0 : 0.0, 1.0, inside, {{"estimates", rows}}},
                                        {worst, 4.0, monotone, {{"estimates", rows}}}};
        });
        for (Check& c : checks) rep.add(std::move(c));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Termination

ValidationReport termination(const SuiteOptions& opt)
{
    ValidationReport rep;
    struct Case {
        double alpha;
        std::int64_t cap;
        std::size_t n;
        bool expect_positive;
    };
    const std::vector<Case> cases{{1.0, 1'000'000, opt.n, false},
                                  {1.5, 1'000'000, opt.n, false},
                                  {0.5, 1000, std::max<std::size_t>(opt.n / 10, 1), true}};
    int idx = 0;
    for (const Case& cs : cases) {
        const std::string t = tag(cs.alpha, 2);
        const int check = idx++;
        auto checks = two_of_three({(cs.expect_positive ? "capped-fraction-positive " : "capped-fraction-small ") + t},
                                   [&](int run) {
            const WalkConfig c = walk_config(cs.alpha, 2, 2.0, Measure::Plain, WalkMode::Collapsed, cs.cap);
            const WalkDataset ds =
                batch_walk(c, cs.n, opt.workers, opt.seed, nullptr, stream_base(Suite::Termination, check, run));
            std::size_t capped = 0;
            for (const WalkResult& r : ds.results) capped += r.status == WalkStatus::CapReached;
            const double frac = static_cast<double>(capped) / static_cast<double>(ds.results.size());
            const bool pass = cs.expect_positive ? frac > 0.0 : frac < 1e-4;
            return std::vector<Outcome>{
                {frac, cs.expect_positive ? 0.0 : 1e-4, pass, {{"cap", cs.cap}, {"n", ds.results.size()}, {"capped", capped}}}};
        });
        for (Check& c : checks) rep.add(std::move(c));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Spread of the final transverse coordinate over a 2 x 2 grid of alpha and start.

ValidationReport spread_trend(const SuiteOptions& opt)
{
    const std::vector<double> alphas{0.8, 1.5};
    const std::vector<double> starts{1.2, 3.0};
    ValidationReport rep;
    auto checks = two_of_three(
        {"iqr-grows-with-start a=0.8", "iqr-grows-with-start a=1.5", "iqr-shrinks-with-alpha x1=1.2",
         "iqr-shrinks-with-alpha x1=3"},
        [&](int run) {
            IqrEstimate iqr[2][2];
            json rows = json::array();
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    const std::int64_t cap = alphas[i] < 1.0 ? 10000 : kDefaultPlainCap;
                    const WalkConfig c = walk_config(alphas[i], 2, starts[j], Measure::Plain, WalkMode::Collapsed, cap);
                    const WalkDataset ds = batch_walk(c, opt.n, opt.workers, opt.seed, nullptr,
                                                      stream_base(Suite::SpreadTrend, 2 * i + j, run));
                    const Finals f = finals(ds, 1);
                    iqr[i][j] = iqr_with_error(f.values);
                    rows.push_back({{"alpha", alphas[i]},
                                    {"start", starts[j]},
                                    {"iqr", iqr[i][j].iqr},
                                    {"std_error", iqr[i][j].std_error},
                                    {"entered", f.values.size()}});
                }
            }
            // Margin in combined standard errors; a check passes above 4.
            auto ordered = [&](const IqrEstimate& big, const IqrEstimate& small) {
                const double z = (big.iqr - small.iqr) / std::hypot(big.std_error, small.std_error);
                return Outcome{z, 4.0, z > 4.0, {{"grid", rows}}};
            };
            return std::vector<Outcome>{ordered(iqr[0][1], iqr[0][0]), ordered(iqr[1][1], iqr[1][0]),
                                        ordered(iqr[0][0], iqr[1][0]), ordered(iqr[0][1], iqr[1][1])};
        });
    for (Check& c : checks) rep.add(std::move(c));
    return rep;
}

// ---------------------------------------------------------------------------
// Determinism across worker counts.

bool same_result(const WalkResult& a, const WalkResult& b)
{
    if (a.status != b.status || a.n_crossings != b.n_crossings || a.weight != b.weight ||
        a.accumulated_scale != b.accumulated_scale || a.final_point.has_value() != b.final_point.has_value())
        return false;
    return !a.final_point || *a.final_point == *b.final_point;
}

ValidationReport determinism(const SuiteOptions& opt)
{
    ValidationReport rep;
    const std::size_t n = std::min<std::size_t>(opt.n, 20000);
    int idx = 0;
    for (auto [alpha, m] : {std::pair{1.5, Measure::Plain}, std::pair{0.7, Measure::Conditioned}}) {
        const WalkConfig c = walk_config(alpha, 2, 2.0, m, WalkMode::Collapsed, 0);
        const std::uint64_t base = stream_base(Suite::Determinism, idx++, 0);
        // Tables depend only on their key, so one cache may serve every run.
        std::optional<ConditionedSamplerCache> cache;
        if (m == Measure::Conditioned) cache.emplace(alpha);
        ConditionedSamplerCache* shared = cache ? &*cache : nullptr;
        const WalkDataset ref = batch_walk(c, n, 1, opt.seed, shared, base);
        std::size_t mismatches = 0;
        for (int workers : {4, 16}) {
            const WalkDataset other = batch_walk(c, n, workers, opt.seed, shared, base);
            if (other.results.size() != ref.results.size()) {
                mismatches += n;
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) mismatches += !same_result(ref.results[i], other.results[i]);
        }
        const std::string id = std::string(m == Measure::Plain ? "workers-1-4-16-plain " : "workers-1-4-16-conditioned ") +
                               tag(alpha, 2);
        rep.add({id, static_cast<double>(mismatches), 0.0, mismatches == 0, {{"n", n}}});
    }
    return rep;
}

const std::vector<std::pair<Suite, const char*>>& names()
{
    static const std::vector<std::pair<Suite, const char*>> table{
        {Suite::Normalization, "normalization"},
        {Suite::Marginalization, "marginalization"},
        {Suite::Factorization, "factorization"},
        {Suite::SamplerFit, "sampler-fit"},
        {Suite::FlatEarth, "flat-earth"},
        {Suite::ModeEquivalence, "mode-equivalence"},
        {Suite::Conditioned, "conditioned"},
        {Suite::Termination, "termination"},
        {Suite::SpreadTrend, "spread-trend"},
        {Suite::Determinism, "determinism"},
    };
    return table;
}

} // namespace

std::vector<Suite> all_suites()
{
    std::vector<Suite> out;
    for (const auto& [s, _] : names()) out.push_back(s);
    return out;
}

std::string suite_name(Suite s)
{
    for (const auto& [t, name] : names())
        if (t == s) return name;
    throw UsageError("unknown suite");
}

Suite parse_suite(const std::string& name)
{
    std::string key;
    for (char ch : name) key += ch == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    for (const auto& [s, n] : names()) {
        std::string flat = n;
        flat.erase(std::remove(flat.begin(), flat.end(), '-'), flat.end());
        std::string k2 = key;
        k2.erase(std::remove(k2.begin(), k2.end(), '-'), k2.end());
        if (k2 == flat) return s;
    }
    throw UsageError("unknown suite '" + name + "'");
}

std::vector<std::pair<double, int>> default_params() { return {{0.5, 2}, {1.0, 2}, {1.5, 2}, {1.2, 3}}; }

ValidationReport run_suite(Suite suite, const SuiteOptions& options)
{
    if (options.n < 2) throw UsageError("suite sample size must be at least 2");
    if (options.workers < 1) throw UsageError("workers must be at least 1");
    std::vector<ParamSet> grid = options.params;
    if (grid.empty()) {
        grid = suite == Suite::ModeEquivalence ? std::vector<ParamSet>{{1.0, 2}, {1.5, 2}} : default_params();
    }
    for (auto [alpha, d] : grid) StableParams(alpha, d);  // validates the grid
    ValidationReport rep;
    switch (suite) {
    case Suite::Normalization: rep = normalization(grid); break;
    case Suite::Marginalization: rep = marginalization(grid, options); break;
    case Suite::Factorization: rep = factorization(grid, options); break;
    case Suite::SamplerFit: rep = sampler_fit(grid, options); break;
    case Suite::FlatEarth: rep = flat_earth(grid); break;
    case Suite::ModeEquivalence: rep = mode_equivalence(grid, options); break;
    case Suite::Conditioned: rep = conditioned(options); break;
    case Suite::Termination: rep = termination(options); break;
    case Suite::SpreadTrend: rep = spread_trend(options); break;
    case Suite::Determinism: rep = determinism(options); break;
    }
    rep.suite = suite_name(suite);
    return rep;
}

} // namespace wohs
