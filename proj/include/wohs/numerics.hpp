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

// Special functions and the Gamma-function constants of the isotropic
// alpha-stable first-passage kernels.

namespace wohs {

/// Gamma(x) for x > 0. Throws DomainError otherwise.
double gamma_fn(double x);

/// |Gamma(-alpha/2)| for alpha in (0,2), evaluated through
/// Gamma(2 - alpha/2) / ((alpha/2)(1 - alpha/2)) so no negative argument
/// is ever passed to Gamma.
double abs_gamma_neg_half_alpha(double alpha);

/// Complete Beta function B(a,b), a,b > 0.
double beta_fn(double a, double b);

/// Unnormalised incomplete Beta integral int_0^x s^(a-1) (1-s)^(b-1) ds for
/// a, b > 0. `one_minus_x` is passed separately so callers that know 1-x
/// exactly avoid the cancellation.
double incomplete_beta(double x, double one_minus_x, double a, double b);
double incomplete_beta(double x, double a, double b);

/// I_x(a,b), the Beta(a,b) distribution function.
double regularized_incomplete_beta(double x, double a, double b);

/// P(a,x), the Gamma(a) distribution function.
double regularized_lower_gamma(double a, double x);

double chi_square_cdf(double x, double dof);
/// Inverse of chi_square_cdf in its first argument.
double chi_square_quantile(double p, double dof);

/// Kolmogorov limiting survival function Q(lambda) = P(sqrt(n) D > lambda).
double kolmogorov_survival(double lambda);

/// J(zeta) = int_0^zeta (u+1)^(-d/2) u^(alpha/2 - 1) du.
///
/// Evaluated as the incomplete Beta integral B(zeta/(1+zeta); alpha/2,
/// (d-alpha)/2). For zeta = +inf returns B(alpha/2, (d-alpha)/2) when
/// d > alpha and throws DomainError (divergent) otherwise. When d <= alpha
/// and zeta is finite the integral is computed by quadrature.
double incomplete_j(double zeta, double alpha, int d);

/// Surface area of the unit sphere S^(k-1) in R^k (k >= 1; k = 1 gives 2).
double unit_sphere_area(int k);

struct StableConstants {
    double C; ///< closest-reach and overshoot normaliser
    double A; ///< triple law
    double B; ///< undershoot/overshoot pair
    double E; ///< half-space Green function
    double K; ///< Levy jump density
};

/// All five normalising constants for the pair (alpha, d).
StableConstants stable_constants(double alpha, int d);

} // namespace wohs
