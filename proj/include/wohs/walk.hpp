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
#include <optional>
#include <vector>

#include "wohs/kernels.hpp"
#include "wohs/rng.hpp"
#include "wohs/samplers.hpp"

namespace wohs {

enum class Measure { Plain, Conditioned };
enum class WalkMode { FullTrace, Collapsed };
enum class WalkStatus { Entered, CapReached };

struct CrossingEvent {
    std::int64_t k = 0;
    SlabFace face = SlabFace::Plus;
    double x1 = 0.0;
    std::optional<PointXd> transverse;
};

struct WalkConfig {
    StableParams params{1.5, 2};
    PointXd start;
    Measure measure = Measure::Plain;
    WalkMode mode = WalkMode::Collapsed;
    /// 0 selects the default cap; plain walks with alpha < 1 need an explicit one.
    std::int64_t max_crossings = 0;
    bool record_trace = false;
};

struct WalkResult {
    std::optional<PointXd> final_point;
    std::int64_t n_crossings = 0;
    double accumulated_scale = 0.0;
    double weight = 1.0;
    WalkStatus status = WalkStatus::CapReached;
    std::vector<CrossingEvent> trace;
};

inline constexpr std::int64_t kDefaultPlainCap = 1'000'000;
inline constexpr std::int64_t kDefaultConditionedCap = 10'000;

/// Throws DomainError/UsageError when the configuration is not admissible.
void validate(const WalkConfig& config);
std::int64_t effective_cap(const WalkConfig& config);

/// One walk. First coordinates come from `first`, transverse steps from
/// `transverse`, so the first-coordinate sequence does not depend on d.
WalkResult walk_slab(const WalkConfig& config, RngStream& first, RngStream& transverse,
                     ConditionedSamplerCache* cache = nullptr);

/// One walk on the streams (seed, stream_id) lanes 0 and 1.
WalkResult walk_slab(const WalkConfig& config, std::uint64_t master_seed, std::uint64_t stream_id,
                     ConditionedSamplerCache* cache = nullptr);

struct WalkDataset {
    std::vector<WalkResult> results;
    /// Number of walks asked for; results.size() is smaller only when memory ran out.
    std::size_t requested = 0;
};

/// n walks, walk i on stream_id = first_stream + i, sharded over `workers`
/// threads; the output does not depend on the worker count.
WalkDataset batch_walk(const WalkConfig& config, std::size_t n, int workers,
                       std::uint64_t master_seed, ConditionedSamplerCache* cache = nullptr,
                       std::uint64_t first_stream = 0);

struct HittingEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    /// Mean after dropping the top and bottom 1% of weights.
    double trimmed_mean = 0.0;
    std::size_t n = 0;
};

/// Mean weight of conditioned walks: an estimate of the probability of ever
/// entering the slab under the plain measure.
HittingEstimate hitting_probability_estimate(const std::vector<WalkResult>& dataset);

} // namespace wohs
