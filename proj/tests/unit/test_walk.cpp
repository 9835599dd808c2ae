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

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "wohs/errors.hpp"
#include "wohs/stats.hpp"
#include "wohs/walk.hpp"

using namespace wohs;

namespace {

WalkConfig make_config(double alpha, int d, double x1, Measure m = Measure::Plain,
                       WalkMode mode = WalkMode::Collapsed)
{
    WalkConfig c;
    c.params = StableParams(alpha, d);
    c.start = PointXd::Zero(d);
    c.start(0) = x1;
    c.measure = m;
    c.mode = mode;
    return c;
}

std::vector<double> coord(const WalkDataset& ds, int k)
{
    std::vector<double> v;
    for (const auto& r : ds.results) {
        if (r.status == WalkStatus::Entered) v.push_back((*r.final_point)(k));
    }
    return v;
}

} // namespace

TEST_CASE("walk configuration errors")
{
    WalkConfig c = make_config(1.5, 2, 0.5);
    CHECK_THROWS_AS(validate(c), DomainError);
    c.start(0) = 1.0;
    CHECK_THROWS_AS(validate(c), DomainError);
    c.start(0) = -1.0;
    CHECK_THROWS_AS(validate(c), DomainError);
    CHECK_THROWS_AS(validate(make_config(1.5, 2, 2.0, Measure::Conditioned)), DomainError);
    CHECK_THROWS_AS(validate(make_config(0.5, 2, 2.0)), UsageError);
    CHECK_THROWS_AS(validate(make_config(1.5, 1, 2.0)), DomainError);
    WalkConfig ok = make_config(0.5, 2, 2.0);
    ok.max_crossings = 10;
    CHECK_NOTHROW(validate(ok));
    CHECK(effective_cap(make_config(1.5, 2, 2.0)) == kDefaultPlainCap);
    CHECK(effective_cap(make_config(0.5, 2, 2.0, Measure::Conditioned)) == kDefaultConditionedCap);
    CHECK_THROWS_AS(walk_slab(make_config(0.5, 2, 2.0, Measure::Conditioned), 1, 0), UsageError);
}

TEST_CASE("entered walks land inside the slab after at least one crossing")
{
    for (auto mode : {WalkMode::Collapsed, WalkMode::FullTrace}) {
        const WalkConfig c = make_config(1.5, 3, -2.0, Measure::Plain, mode);
        const WalkDataset ds = batch_walk(c, 2000, 1, 17);
        REQUIRE(ds.results.size() == 2000);
        for (const auto& r : ds.results) {
            REQUIRE(r.status == WalkStatus::Entered);
            CHECK(r.n_crossings >= 1);
            CHECK(std::abs((*r.final_point)(0)) < 1.0);
            CHECK(r.weight == 1.0);
            CHECK(r.accumulated_scale > 0.0);
        }
    }
}

TEST_CASE("traces alternate faces and record positions")
{
    WalkConfig c = make_config(1.0, 2, 3.0, Measure::Plain, WalkMode::FullTrace);
    c.record_trace = true;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const WalkResult r = walk_slab(c, 5, s);
        REQUIRE(r.status == WalkStatus::Entered);
        REQUIRE(static_cast<std::int64_t>(r.trace.size()) == r.n_crossings);
        for (std::size_t k = 0; k < r.trace.size(); ++k) {
            CHECK(r.trace[k].k == static_cast<std::int64_t>(k + 1));
            CHECK(r.trace[k].face == (k % 2 == 0 ? SlabFace::Plus : SlabFace::Minus));
            CHECK(r.trace[k].transverse.has_value());
        }
        CHECK(r.trace.back().x1 == (*r.final_point)(0));
        CHECK((*r.trace.back().transverse)(0) == (*r.final_point)(1));
    }
}

TEST_CASE("first coordinates do not depend on the dimension or the mode")
{
    WalkConfig c2 = make_config(1.3, 2, 2.5, Measure::Plain, WalkMode::FullTrace);
    WalkConfig c5 = make_config(1.3, 5, 2.5, Measure::Plain, WalkMode::Collapsed);
    c2.record_trace = c5.record_trace = true;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const WalkResult a = walk_slab(c2, 99, s);
        const WalkResult b = walk_slab(c5, 99, s);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t k = 0; k < a.trace.size(); ++k) CHECK(a.trace[k].x1 == b.trace[k].x1);
        CHECK(a.accumulated_scale == b.accumulated_scale);
    }
}

TEST_CASE("batch_walk is identical across worker counts")
{
    const WalkConfig c = make_config(1.2, 2, 2.0, Measure::Plain, WalkMode::FullTrace);
    const WalkDataset one = batch_walk(c, 3000, 1, 123);
    for (int w : {4, 16}) {
        const WalkDataset many = batch_walk(c, 3000, w, 123);
        REQUIRE(many.results.size() == one.results.size());
        for (std::size_t i = 0; i < one.results.size(); ++i) {
            CHECK(many.results[i].n_crossings == one.results[i].n_crossings);
            CHECK(*many.results[i].final_point == *one.results[i].final_point);
        }
    }
    CHECK(batch_walk(c, 0, 4, 1).results.empty());
    CHECK_THROWS_AS(batch_walk(c, 10, 0, 1), UsageError);
}

TEST_CASE("plain walks below alpha one can escape")
{
    WalkConfig c = make_config(0.5, 2, 2.0);
    c.max_crossings = 1000;
    const WalkDataset ds = batch_walk(c, 2000, 1, 3);
    const auto capped = std::count_if(ds.results.begin(), ds.results.end(),
                                      [](const WalkResult& r) { return r.status == WalkStatus::CapReached; });
    CHECK(capped > 0);
    for (const auto& r : ds.results) {
        if (r.status == WalkStatus::CapReached) CHECK_FALSE(r.final_point.has_value());
    }
}

TEST_CASE("conditioned walks enter with weights in (0,1)")
{
    const WalkConfig c = make_config(0.5, 2, 2.0, Measure::Conditioned);
    ConditionedSamplerCache cache(0.5);
    const WalkDataset ds = batch_walk(c, 2000, 2, 7, &cache);
    for (const auto& r : ds.results) {
        REQUIRE(r.status == WalkStatus::Entered);
        CHECK(r.weight > 0.0);
        CHECK(r.weight < 1.0);
    }
    const HittingEstimate h = hitting_probability_estimate(ds.results);
    CHECK(h.mean > 0.0);
    CHECK(h.mean < 1.0);
    CHECK(h.std_error > 0.0);
    CHECK(h.n == 2000);
    CHECK_THROWS_AS(hitting_probability_estimate({}), DomainError);
}

TEST_CASE("collapsed and full-trace walks agree in law")
{
    const WalkConfig a = make_config(1.5, 2, 2.0, Measure::Plain, WalkMode::Collapsed);
    const WalkConfig b = make_config(1.5, 2, 2.0, Measure::Plain, WalkMode::FullTrace);
    const WalkDataset da = batch_walk(a, 20000, 1, 1);
    const WalkDataset db = batch_walk(b, 20000, 1, 2);
    CHECK(two_sample_ks(coord(da, 1), coord(db, 1)).pass);
    CHECK(two_sample_ks(coord(da, 0), coord(db, 0)).pass);
}

TEST_CASE("farther starts spread the entry point more")
{
    const WalkDataset near = batch_walk(make_config(1.5, 2, 1.2), 20000, 1, 4);
    const WalkDataset far = batch_walk(make_config(1.5, 2, 3.0), 20000, 1, 5);
    const IqrEstimate qn = iqr_with_error(coord(near, 1));
    const IqrEstimate qf = iqr_with_error(coord(far, 1));
    CHECK(qf.iqr > qn.iqr + 4 * std::hypot(qn.std_error, qf.std_error));
}
