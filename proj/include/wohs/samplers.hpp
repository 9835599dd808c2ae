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
#include <memory>
#include <shared_mutex>
#include <unordered_map>

#include "wohs/kernels.hpp"
#include "wohs/rng.hpp"
#include "wohs/tabulated_cdf.hpp"

namespace wohs {

/// log of a Gamma(shape, 1) variate; exact for every positive shape.
double log_gamma_sample(double shape, RngStream& rng);
double gamma_sample(double shape, RngStream& rng);

/// Beta(a,b) as a ratio of two Gamma variates, strictly inside (0,1).
double beta_sample(double a, double b, RngStream& rng);

/// First coordinate after crossing the barrier, given U ~ Beta(1-alpha/2, alpha/2).
double overshoot_first_coord_from_beta(double x1, const Barrier& barrier, double u);

/// log(overshoot / gap) for one plain crossing: log Ga - log Gb with
/// Ga ~ Gamma(1 - alpha/2), Gb ~ Gamma(alpha/2).
double overshoot_log_ratio(double alpha, RngStream& rng);

/// First coordinate after crossing the barrier, plain measure.
double overshoot_first_coord(double x1, const Barrier& barrier, double alpha, RngStream& rng);

/// Isotropic p-dimensional Cauchy variate with scale gamma.
PointXd mv_cauchy(double gamma, int p, RngStream& rng);

/// Full crossing position. The two-stream form draws the first coordinate from
/// `first` and the transverse displacement from `transverse`.
PointXd overshoot_point(const PointXd& x, const Barrier& barrier, const StableParams& params,
                        RngStream& rng);
PointXd overshoot_point(const PointXd& x, const Barrier& barrier, const StableParams& params,
                        RngStream& first, RngStream& transverse);

/// Tables for the conditioned first-coordinate overshoot across the slab faces.
///
/// Draws are made in the canonical frame (face at +1, start x1 > 1); the face
/// at -1 is its mirror image. Tables are keyed by k = floor(log(x1 - 1) / step)
/// and built at the node g = 1 + exp(k step) <= x1; a draw from the node table
/// is accepted with probability (g - y)/(x1 - y), which makes it exact for x1.
class ConditionedSamplerCache {
public:
    explicit ConditionedSamplerCache(double alpha, double key_step = 1e-3, int knots = 512);

    double alpha() const { return alpha_; }
    double key_step() const { return step_; }

    std::int64_t key_of(double x1) const;
    double node_of(std::int64_t key) const;

    /// Table for the canonical density at start g (built on first use).
    std::shared_ptr<const TabulatedCdf> table(std::int64_t key);

    /// One exact draw in the canonical frame.
    double sample_canonical(double x1, RngStream& rng);

    std::size_t size() const;

private:
    std::shared_ptr<const TabulatedCdf> build(double g) const;

    double alpha_;
    double step_;
    int knots_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::int64_t, std::shared_ptr<const TabulatedCdf>> tables_;
};

/// Unnormalised canonical conditioned density |y|^(a-1) (g-y)^-1 (1-y)^(-a/2), y < 1.
double conditioned_canonical_density(double y, double g, double alpha);

/// Pieces covering (-inf, 1) for the canonical conditioned density at start g;
/// the part next to the face is written in the distance 1 - y.
std::vector<CdfPiece> conditioned_canonical_pieces(double g, double alpha);

/// First coordinate after crossing a slab face under the conditioned measure.
double overshoot_first_coord_conditioned(double x1, SlabFace face, double alpha,
                                         ConditionedSamplerCache& cache, RngStream& rng);

} // namespace wohs
