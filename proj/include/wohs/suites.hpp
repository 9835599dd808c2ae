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
#include <string>
#include <utility>
#include <vector>

#include "wohs/stats.hpp"

namespace wohs {

enum class Suite {
    Normalization,
    Marginalization,
    Factorization,
    SamplerFit,
    FlatEarth,
    ModeEquivalence,
    Conditioned,
    Termination,
    SpreadTrend,
    Determinism,
};

struct SuiteOptions {
    /// (alpha, d) pairs; empty selects each suite's default design.
    std::vector<std::pair<double, int>> params;
    std::uint64_t seed = 20240917;
    /// Sample size of every stochastic check.
    std::size_t n = 100000;
    int workers = 1;
    /// Random evaluation points per parameter set in the marginalization suite.
    int points = 20;
};

std::vector<Suite> all_suites();
std::string suite_name(Suite s);
/// Accepts the names printed by suite_name; throws UsageError otherwise.
Suite parse_suite(const std::string& name);

/// Default grid of the analytic and sampler suites.
std::vector<std::pair<double, int>> default_params();

/// Normalization, Marginalization, Factorization, SamplerFit, FlatEarth and
/// ModeEquivalence honour options.params; the other suites run fixed designs.
ValidationReport run_suite(Suite suite, const SuiteOptions& options = {});

} // namespace wohs
