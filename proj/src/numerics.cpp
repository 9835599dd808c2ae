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

#include "wohs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wohs/errors.hpp"
#include "wohs/quadrature.hpp"

namespace wohs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void require_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw DomainError("alpha must lie in (0,2), got " + std::to_string(alpha));
    }
}

// Modified Lentz evaluation of the continued fraction for the incomplete
// Beta function; converges quickly for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x)
{
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 4.0 * kEps) return h;
    }
    throw ConvergenceError("incomplete Beta continued fraction did not converge", h, kInf);
}

double lower_gamma_series(double a, double x)
{
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw ConvergenceError("incomplete Gamma series did not converge", sum, kInf);
}

double upper_gamma_fraction(double a, double x)
{
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
        }
    }
    throw ConvergenceError("incomplete Gamma continued fraction did not converge", h, kInf);
}

} // namespace

double gamma_fn(double x)
{
    if (!(x > 0.0)) {
        throw DomainError("gamma_fn requires a positive argument, got " + std::to_string(x));
    }
    return std::tgamma(x);
}

double abs_gamma_neg_half_alpha(double alpha)
{
    require_alpha(alpha);
    const double h = 0.5 * alpha;
    return std::tgamma(2.0 - h) / (h * (1.0 - h));
}

double beta_fn(double a, double b)
{
    if (!(a > 0.0 && b > 0.0)) throw DomainError("beta_fn requires positive shapes");
    if (a + b < 170.0) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double incomplete_beta(double x, double one_minus_x, double a, double b)
{
    if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete_beta requires positive shapes");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta requires x in [0,1]");
    if (x == 0.0) return 0.0;
    if (one_minus_x == 0.0) return beta_fn(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double front = std::exp(a * std::log(x) + b * std::log(one_minus_x)) / a;
        return front * beta_continued_fraction(a, b, x);
    }
    const double front = std::exp(b * std::log(one_minus_x) + a * std::log(x)) / b;
    return beta_fn(a, b) - front * beta_continued_fraction(b, a, one_minus_x);
}

double incomplete_beta(double x, double a, double b)
{
    return incomplete_beta(x, 1.0 - x, a, b);
}

double regularized_incomplete_beta(double x, double a, double b)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // Work with the smaller tail directly so values near 1 keep precision.
    const double ln_front = a * std::log(x) + b * std::log1p(-x) + std::lgamma(a + b) -
                            std::lgamma(a) - std::lgamma(b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_front) * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - std::exp(ln_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double regularized_lower_gamma(double a, double x)
{
    if (!(a > 0.0)) throw DomainError("regularized_lower_gamma requires a > 0");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return lower_gamma_series(a, x);
    return 1.0 - upper_gamma_fraction(a, x);
}

double chi_square_cdf(double x, double dof)
{
    if (!(dof > 0.0)) throw DomainError("chi-square needs positive degrees of freedom");
    return regularized_lower_gamma(0.5 * dof, 0.5 * x);
}

double chi_square_quantile(double p, double dof)
{
    if (!(p > 0.0 && p < 1.0)) throw DomainError("chi_square_quantile needs p in (0,1)");
    double lo = 0.0;
    double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 50.0;
    while (chi_square_cdf(hi, dof) < p) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi_square_cdf(mid, dof) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double kolmogorov_survival(double lambda)
{
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.3) {
        // Dual (theta-function) form, accurate for small lambda.
        double sum = 0.0;
        const double f = kPi * kPi / (8.0 * lambda * lambda);
        for (int k = 1; k < 50; k += 2) sum += std::exp(-k * k * f);
        return 1.0 - std::sqrt(2.0 * kPi) / lambda * sum;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double incomplete_j(double zeta, double alpha, int d)
{
    require_alpha(alpha);
    if (d < 1) throw DomainError("dimension must be at least 1");
    if (!(zeta >= 0.0)) throw DomainError("incomplete_j requires zeta >= 0");
    if (zeta == 0.0) return 0.0;
    const double a = 0.5 * alpha;
    const double b = 0.5 * (d - alpha);
    if (std::isinf(zeta)) {
        if (b <= 0.0) throw DomainError("incomplete_j diverges at infinity when d <= alpha");
        return beta_fn(a, b);
    }
    if (b > 0.0) {
        // s = zeta/(1+zeta) turns the integral into B(s; a, b).
        return incomplete_beta(zeta / (1.0 + zeta), 1.0 / (1.0 + zeta), a, b);
    }
    QuadSpec spec;
    spec.lower = 0.0;
    spec.upper = zeta;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-13;
    spec.singularity_exponents = std::pair{a - 1.0, 0.0};
    const double half_d = 0.5 * d;
    return adaptive_quad(
        [=](double u) { return std::pow(u + 1.0, -half_d) * std::pow(u, a - 1.0); }, spec);
}

double unit_sphere_area(int k)
{
    if (k < 1) throw DomainError("unit_sphere_area needs k >= 1");
    return 2.0 * std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k);
}

StableConstants stable_constants(double alpha, int d)
{
    require_alpha(alpha);
    if (d < 1) throw DomainError("dimension must be at least 1");
    const double half_d = 0.5 * d;
    const double g_half_d = std::tgamma(half_d);
    const double g_half_alpha = std::tgamma(0.5 * alpha);
    const double g_d_alpha = std::tgamma(0.5 * (d + alpha));
    const double g_neg = abs_gamma_neg_half_alpha(alpha);
    const double two_alpha = std::pow(2.0, alpha);

    StableConstants c{};
    c.C = std::pow(kPi, -(half_d + 1.0)) * g_half_d * std::sin(0.5 * alpha * kPi);
    c.A = two_alpha * g_half_d * g_half_d * g_d_alpha /
          (std::pow(kPi, 1.5 * d) * g_half_alpha * g_half_alpha * g_neg);
    c.B = g_d_alpha * g_half_d / (std::pow(kPi, d) * g_half_alpha * g_half_alpha * g_neg);
    c.E = g_half_d / (two_alpha * std::pow(kPi, half_d) * g_half_alpha * g_half_alpha);
    c.K = two_alpha * g_d_alpha / (std::pow(kPi, half_d) * g_neg);
    return c;
}

} // namespace wohs
