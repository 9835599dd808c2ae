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

#include <doctest.h>

#include "wohs/errors.hpp"
#include "wohs/suites.hpp"

using namespace wohs;

TEST_CASE("suite names round-trip")
{
    CHECK(all_suites().size() == 10);
    for (Suite s : all_suites()) CHECK(parse_suite(suite_name(s)) == s);
    CHECK(parse_suite("SamplerFit") == Suite::SamplerFit);
    CHECK(parse_suite("flat_earth") == Suite::FlatEarth);
    CHECK_THROWS_AS(parse_suite("bogus"), UsageError);
    CHECK(default_params().size() == 4);
}

TEST_CASE("fast suites pass and name their checks")
{
    SuiteOptions o;
    o.params = {{1.5, 2}};
    o.n = 20000;
    o.points = 3;
    for (Suite s : {Suite::Factorization, Suite::FlatEarth, Suite::SamplerFit, Suite::Marginalization}) {
        const ValidationReport r = run_suite(s, o);
        CAPTURE(suite_name(s));
        CHECK(r.suite == suite_name(s));
        CHECK(!r.checks.empty());
        CHECK(r.pass());
    }
}

TEST_CASE("stochastic checks carry the 2-of-3 record")
{
    SuiteOptions o;
    o.params = {{1.2, 3}};
    o.n = 5000;
    const ValidationReport r = run_suite(Suite::SamplerFit, o);
    REQUIRE(r.checks.size() == 2);
    for (const Check& c : r.checks) {
        const auto& runs = c.detail.at("runs");
        CHECK(runs.size() >= 2);
        CHECK(runs.size() <= 3);
        int passes = 0;
        for (const auto& run : runs) passes += run.at("pass").get<bool>();
        CHECK(c.pass == (passes >= 2));
    }
}

TEST_CASE("suite options are validated")
{
    SuiteOptions o;
    o.n = 1;
    CHECK_THROWS_AS(run_suite(Suite::Factorization, o), UsageError);
    o.n = 100;
    o.params = {{2.5, 2}};
    CHECK_THROWS_AS(run_suite(Suite::Factorization, o), DomainError);
    o.params = {{0.5, 2}};
    CHECK_THROWS_AS(run_suite(Suite::ModeEquivalence, o), UsageError);
}

TEST_CASE("determinism suite at small n")
{
    SuiteOptions o;
    o.n = 1000;
    const ValidationReport r = run_suite(Suite::Determinism, o);
    CHECK(r.pass());
}
