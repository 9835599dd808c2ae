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

#include "wohs/kernels.hpp"

#include <cmath>

namespace wohs {

StableParams::StableParams(double alpha, int d)
    : alpha_(alpha), d_(d), constants_(stable_constants(alpha, d))
{
}

namespace detail {

double incomplete_j_checked(double zeta, double alpha, int d)
{
    if (std::isnan(zeta)) throw DomainError("incomplete integral argument is NaN");
    return incomplete_j(zeta, alpha, d);
}

} // namespace detail

double descending_renewal_density(double y1, double v, double alpha)
{
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
    if (!(v < y1)) throw DomainError("descending renewal density needs v < y1");
    return std::pow(y1 - v, 0.5 * alpha - 1.0) / std::tgamma(0.5 * alpha);
}

} // namespace wohs
