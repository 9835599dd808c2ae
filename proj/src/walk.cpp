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

#include "wohs/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <thread>

#include "wohs/errors.hpp"

namespace wohs {

void validate(const WalkConfig& config)
{
    const auto& p = config.params;
    if (p.dim() < 2) throw DomainError("slab walks need d >= 2");
    if (config.start.size() != p.dim()) {
        throw DomainError("start point has the wrong dimension");
    }
    if (!config.start.allFinite()) throw DomainError("start point must be finite");
    if (!(std::abs(config.start(0)) > 1.0)) {
        throw DomainError("start must lie strictly outside the closed slab");
    }
    if (config.measure == Measure::Conditioned && !(p.alpha() < 1.0)) {
        throw DomainError("the conditioned measure needs alpha in (0,1)");
    }
    if (config.max_crossings < 0) throw UsageError("max_crossings must be positive");
    if (config.measure == Measure::Plain && p.alpha() < 1.0 && config.max_crossings == 0) {
        throw UsageError("plain walks with alpha < 1 may not terminate; set max_crossings");
    }
}

std::int64_t effective_cap(const WalkConfig& config)
{
    if (config.max_crossings > 0) return config.max_crossings;
    return config.measure == Measure::Conditioned ? kDefaultConditionedCap : kDefaultPlainCap;
}

namespace {

// The walk state is carried in extended precision: at alpha = 1 the distance
// to the slab performs a driftless random walk in log scale and can pass the
// double range before the walk comes back.
using Real = long double;
using PointXl = Point<Real>;

// Same draws, in the same order, as mv_cauchy.
PointXl cauchy_step(Real gamma, int p, RngStream& rng)
{
    PointXl z(p);
    for (int i = 0; i < p; ++i) z(i) = rng.normal();
    const Real w = std::abs(static_cast<Real>(rng.normal()));
    return (gamma / w) * z;
}

// log of the distance beyond which a plain walk with alpha < 1 is declared
// escaped: the chance of ever entering from there, about (2/gap)^(1-alpha),
// is below 1e-16.
Real escape_log_gap(double alpha)
{
    if (!(alpha < 1.0)) return std::numeric_limits<Real>::infinity();
    return std::log(Real(2)) + Real(16) * std::log(Real(10)) / Real(1.0 - alpha);
}

} // namespace

WalkResult walk_slab(const WalkConfig& config, RngStream& first, RngStream& transverse,
                     ConditionedSamplerCache* cache)
{
    validate(config);
    const double alpha = config.params.alpha();
    const int d = config.params.dim();
    const std::int64_t cap = effective_cap(config);
    const bool full = config.mode == WalkMode::FullTrace;
    const bool conditioned = config.measure == Measure::Conditioned;
    if (conditioned && cache == nullptr) {
        throw UsageError("conditioned walks need a sampler cache");
    }
    const Real escape = escape_log_gap(alpha);

    WalkResult res;
    const PointXl start_side = config.start.tail(d - 1).cast<Real>();
    PointXl side = start_side;
    Real x1 = config.start(0);
    Real scale = 0;
    SlabFace face = x1 > 1 ? SlabFace::Plus : SlabFace::Minus;
    auto escaped = [&] {
        res.n_crossings = cap;
        res.status = WalkStatus::CapReached;
        return res;
    };

    while (true) {
        if (res.n_crossings >= cap) {
            res.status = WalkStatus::CapReached;
            return res;
        }
        const Real sign = face == SlabFace::Plus ? 1 : -1;
        Real y1 = 0;
        if (conditioned) {
            const auto x1d = static_cast<double>(x1);
            if (!std::isfinite(x1d)) return escaped();
            y1 = overshoot_first_coord_conditioned(x1d, face, alpha, *cache, first);
        } else {
            const Real gap = sign * x1 - 1;
            const Real over = gap * std::exp(static_cast<Real>(overshoot_log_ratio(alpha, first)));
            y1 = sign * (1 - over);
            if (!(y1 * sign < 1)) y1 = std::nextafter(sign, -sign);
        }
        ++res.n_crossings;
        if (!std::isfinite(y1) || std::log(std::abs(y1)) > escape) return escaped();
        // Landing exactly on a face would leave the next crossing undefined.
        if (std::abs(y1) == 1) y1 = std::nextafter(y1, 2 * y1);
        const Real inc = std::abs(y1 - x1);
        scale += inc;
        if (full) side += cauchy_step(inc, d - 1, transverse);
        if (config.record_trace) {
            CrossingEvent ev;
            ev.k = res.n_crossings;
            ev.face = face;
            ev.x1 = static_cast<double>(y1);
            if (full) ev.transverse = side.cast<double>();
            res.trace.push_back(std::move(ev));
        }
        x1 = y1;
        if (std::abs(x1) < 1) break;
        face = x1 > 1 ? SlabFace::Plus : SlabFace::Minus;
    }

    if (!full) side = start_side + cauchy_step(scale, d - 1, transverse);
    auto final1 = static_cast<double>(x1);
    if (std::abs(final1) >= 1.0) final1 = std::nextafter(final1, 0.0);
    PointXd fin(d);
    fin(0) = final1;
    fin.tail(d - 1) = side.cast<double>();
    res.final_point = std::move(fin);
    res.accumulated_scale = static_cast<double>(scale);
    res.status = WalkStatus::Entered;
    if (conditioned) {
        res.weight = std::pow(std::abs(final1) / std::abs(config.start(0)), 1.0 - alpha);
    }
    return res;
}

WalkResult walk_slab(const WalkConfig& config, std::uint64_t master_seed, std::uint64_t stream_id,
                     ConditionedSamplerCache* cache)
{
    RngStream first(master_seed, stream_id, 0);
    RngStream transverse(master_seed, stream_id, 1);
    return walk_slab(config, first, transverse, cache);
}

WalkDataset batch_walk(const WalkConfig& config, std::size_t n, int workers,
                       std::uint64_t master_seed, ConditionedSamplerCache* cache,
                       std::uint64_t first_stream)
{
    if (workers < 1) throw UsageError("workers must be at least 1");
    validate(config);
    WalkDataset out;
    out.requested = n;
    if (n == 0) return out;

    std::optional<ConditionedSamplerCache> own;
    if (config.measure == Measure::Conditioned && cache == nullptr) {
        own.emplace(config.params.alpha());
        cache = &*own;
    }
    try {
        out.results.resize(n);
    } catch (const std::bad_alloc&) {
        return out;
    }

    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::size_t> failed_at(w, n);
    std::vector<std::exception_ptr> errors(w);
    auto run = [&](std::size_t shard) {
        const std::size_t lo = n * shard / w;
        const std::size_t hi = n * (shard + 1) / w;
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                out.results[i] = walk_slab(config, master_seed, first_stream + i, cache);
            } catch (const std::bad_alloc&) {
                failed_at[shard] = i;
                return;
            } catch (...) {
                errors[shard] = std::current_exception();
                return;
            }
        }
    };
    if (w == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(w);
        for (std::size_t s = 0; s < w; ++s) threads.emplace_back(run, s);
        for (auto& t : threads) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    const std::size_t keep = *std::min_element(failed_at.begin(), failed_at.end());
    out.results.resize(keep);
    return out;
}

HittingEstimate hitting_probability_estimate(const std::vector<WalkResult>& dataset)
{
    if (dataset.empty()) throw DomainError("hitting probability needs a nonempty dataset");
    std::vector<double> w;
    w.reserve(dataset.size());
    for (const auto& r : dataset) w.push_back(r.status == WalkStatus::Entered ? r.weight : 0.0);
    HittingEstimate est;
    est.n = w.size();
    double sum = 0.0;
    for (double v : w) sum += v;
    est.mean = sum / static_cast<double>(est.n);
    double ss = 0.0;
    for (double v : w) ss += (v - est.mean) * (v - est.mean);
    est.std_error = est.n > 1 ? std::sqrt(ss / static_cast<double>(est.n - 1) / static_cast<double>(est.n)) : 0.0;
    std::sort(w.begin(), w.end());
    const std::size_t cut = est.n / 100;
    double ts = 0.0;
    for (std::size_t i = cut; i < est.n - cut; ++i) ts += w[i];
    est.trimmed_mean = ts / static_cast<double>(est.n - 2 * cut);
    return est;
}

} // namespace wohs
