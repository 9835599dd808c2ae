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

#include "wohs/samplers.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "wohs/errors.hpp"

namespace wohs {

namespace {

// Clamp a rounded-onto-the-barrier draw to the nearest double beyond it.
double strictly_beyond(double y, const Barrier& b)
{
    if (barrier_gap(y, b) < 0.0) return y;
    return b.direction == Direction::Down ? std::nextafter(b.level, -kInf)
                                          : std::nextafter(b.level, kInf);
}

} // namespace

double log_gamma_sample(double shape, RngStream& rng)
{
    if (!(shape > 0.0)) throw DomainError("Gamma shape must be positive");
    if (shape < 1.0) {
        // G(a) = G(a+1) U^(1/a), kept in log form so tiny shapes cannot underflow.
        return log_gamma_sample(shape + 1.0, rng) + std::log(rng.uniform()) / shape;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            return std::log(d) + std::log(v);
        }
    }
}

double gamma_sample(double shape, RngStream& rng)
{
    return std::exp(log_gamma_sample(shape, rng));
}

double beta_sample(double a, double b, RngStream& rng)
{
    if (!(a > 0.0 && b > 0.0)) throw DomainError("Beta shapes must be positive");
    while (true) {
        const double la = log_gamma_sample(a, rng);
        const double lb = log_gamma_sample(b, rng);
        const double u = 1.0 / (1.0 + std::exp(lb - la));
        if (u > 0.0 && u < 1.0) return u;
    }
}

double overshoot_first_coord_from_beta(double x1, const Barrier& barrier, double u)
{
    const double gap = barrier_gap(x1, barrier);
    if (!(gap > 0.0)) throw DomainError("start must lie strictly on the pre-crossing side");
    if (!(u > 0.0 && u < 1.0)) throw DomainError("Beta variate must lie in (0,1)");
    const double over = gap * u / (1.0 - u);
    const double y = barrier.direction == Direction::Down ? barrier.level - over
                                                          : barrier.level + over;
    return strictly_beyond(y, barrier);
}

double overshoot_log_ratio(double alpha, RngStream& rng)
{
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
    // overshoot/gap = U/(1-U) = Ga/Gb with Ga ~ Gamma(1-a/2), Gb ~ Gamma(a/2);
    // the ratio is formed in log space to avoid cancellation in 1-U.
    const double la = log_gamma_sample(1.0 - 0.5 * alpha, rng);
    const double lb = log_gamma_sample(0.5 * alpha, rng);
    return la - lb;
}

double overshoot_first_coord(double x1, const Barrier& barrier, double alpha, RngStream& rng)
{
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
    const double gap = barrier_gap(x1, barrier);
    if (!(gap > 0.0)) throw DomainError("start must lie strictly on the pre-crossing side");
    const double over = gap * std::exp(overshoot_log_ratio(alpha, rng));
    const double y = barrier.direction == Direction::Down ? barrier.level - over
                                                          : barrier.level + over;
    return strictly_beyond(y, barrier);
}

PointXd mv_cauchy(double gamma, int p, RngStream& rng)
{
    if (!(gamma > 0.0)) throw DomainError("Cauchy scale must be positive");
    if (p < 1) throw DomainError("Cauchy dimension must be at least 1");
    PointXd z(p);
    for (int i = 0; i < p; ++i) z(i) = rng.normal();
    const double w = std::abs(rng.normal());
    return (gamma / w) * z;
}

PointXd overshoot_point(const PointXd& x, const Barrier& barrier, const StableParams& params,
                        RngStream& rng)
{
    return overshoot_point(x, barrier, params, rng, rng);
}

PointXd overshoot_point(const PointXd& x, const Barrier& barrier, const StableParams& params,
                        RngStream& first, RngStream& transverse)
{
    detail::check_dim(x, params, "x");
    PointXd y(x.size());
    y(0) = overshoot_first_coord(x(0), barrier, params.alpha(), first);
    if (params.dim() > 1) {
        y.tail(params.dim() - 1) =
            x.tail(params.dim() - 1) + mv_cauchy(std::abs(x(0) - y(0)), params.dim() - 1, transverse);
    }
    return y;
}

double conditioned_canonical_density(double y, double g, double alpha)
{
    if (!(y < 1.0) || y == 0.0) return 0.0;
    return std::pow(std::abs(y), alpha - 1.0) / ((g - y) * std::pow(1.0 - y, 0.5 * alpha));
}

std::vector<CdfPiece> conditioned_canonical_pieces(double g, double alpha)
{
    if (!(g > 1.0)) throw DomainError("conditioned start must exceed the face at 1");
    const double delta = g - 1.0;
    const double a = alpha;
    const RealFn in_y = [g, a](double y) { return conditioned_canonical_density(y, g, a); };
    // v = 1 - y; (g - y) = delta + v is formed without cancellation.
    const RealFn in_v = [delta, a](double v) {
        if (!(v > 0.0)) return 0.0;
        return std::pow(std::abs(1.0 - v), a - 1.0) / ((delta + v) * std::pow(v, 0.5 * a));
    };
    std::vector<CdfPiece> pieces;
    auto add = [&](const RealFn& f, double lo, double hi, double e_lo, double e_hi, double origin,
                   bool reflected, double scale = 1.0) {
        QuadSpec q;
        q.lower = lo;
        q.upper = hi;
        q.singularity_exponents = std::pair{e_lo, e_hi};
        q.tail_scale = scale;
        pieces.push_back({f, q, origin, reflected});
    };
    // Geometric pieces out to a few multiples of g, where (g-y)^-1 turns into
    // a pure power and the mapped tail takes over.
    double reach = 4.0;
    while (reach < 4.0 * g) reach *= 4.0;
    add(in_y, -kInf, -reach, 0.5 * a - 2.0, 0.0, 0.0, false, reach);
    for (double hi = reach / 4.0; hi >= 1.0; hi /= 4.0) add(in_y, -4.0 * hi, -hi, 0.0, 0.0, 0.0, false);
    add(in_y, -1.0, 0.0, 0.0, a - 1.0, 0.0, false);
    add(in_y, 0.0, 0.5, a - 1.0, 0.0, 0.0, false);
    // Near the face (g-y)^-1 varies on the scale delta: geometric cuts in v.
    std::vector<double> cuts;
    for (double v = delta; v < 0.5; v *= 2.0) cuts.push_back(v);
    if (cuts.empty()) {
        add(in_v, 0.0, 0.5, -0.5 * a, 0.0, 1.0, true);
        return pieces;
    }
    add(in_v, cuts.back(), 0.5, 0.0, 0.0, 1.0, true);
    for (std::size_t i = cuts.size() - 1; i > 0; --i) add(in_v, cuts[i - 1], cuts[i], 0.0, 0.0, 1.0, true);
    add(in_v, 0.0, cuts.front(), -0.5 * a, 0.0, 1.0, true);
    return pieces;
}

ConditionedSamplerCache::ConditionedSamplerCache(double alpha, double key_step, int knots)
    : alpha_(alpha), step_(key_step), knots_(knots)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("conditioned sampling needs alpha in (0,1)");
    }
    if (!(key_step > 0.0)) throw DomainError("cache key step must be positive");
}

std::int64_t ConditionedSamplerCache::key_of(double x1) const
{
    if (!(x1 > 1.0) || !std::isfinite(x1)) {
        throw DomainError("conditioned start must lie beyond the face");
    }
    auto k = static_cast<std::int64_t>(std::floor(std::log(x1 - 1.0) / step_));
    while (node_of(k) > x1) --k;
    return k;
}

double ConditionedSamplerCache::node_of(std::int64_t key) const
{
    return 1.0 + std::exp(static_cast<double>(key) * step_);
}

std::shared_ptr<const TabulatedCdf> ConditionedSamplerCache::build(double g) const
{
    const double a = alpha_;
    return std::make_shared<const TabulatedCdf>(conditioned_canonical_pieces(g, a), knots_);
}

std::shared_ptr<const TabulatedCdf> ConditionedSamplerCache::table(std::int64_t key)
{
    {
        std::shared_lock lock(mutex_);
        auto it = tables_.find(key);
        if (it != tables_.end()) return it->second;
    }
    auto built = build(node_of(key));
    std::unique_lock lock(mutex_);
    return tables_.try_emplace(key, std::move(built)).first->second;
}

double ConditionedSamplerCache::sample_canonical(double x1, RngStream& rng)
{
    const std::int64_t key = key_of(x1);
    const double g = node_of(key);
    const auto t = table(key);
    while (true) {
        double y = t->quantile(rng.uniform());
        if (y >= 1.0) y = std::nextafter(1.0, 0.0);
        const double accept = (g - y) / (x1 - y);
        if (rng.uniform() <= accept && y != 0.0 && y < 1.0) return y;
    }
}

std::size_t ConditionedSamplerCache::size() const
{
    std::shared_lock lock(mutex_);
    return tables_.size();
}

double overshoot_first_coord_conditioned(double x1, SlabFace face, double alpha,
                                         ConditionedSamplerCache& cache, RngStream& rng)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("conditioned sampling needs alpha in (0,1)");
    }
    if (alpha != cache.alpha()) throw DomainError("cache was built for a different alpha");
    const double canonical = face == SlabFace::Plus ? x1 : -x1;
    if (!(canonical > 1.0)) throw DomainError("start must lie strictly beyond the slab face");
    const double y = cache.sample_canonical(canonical, rng);
    return face == SlabFace::Plus ? y : -y;
}

} // namespace wohs
