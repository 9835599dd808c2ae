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

#include <cmath>
#include <set>

#include <doctest.h>

#include "wohs/errors.hpp"
#include "wohs/rng.hpp"

using namespace wohs;

TEST_CASE("philox4x32-10 known answers")
{
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct")
{
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7), e(42, 7, 1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        seen.insert(va);
        seen.insert(c.next_u64());
        seen.insert(d.next_u64());
        seen.insert(e.next_u64());
    }
    CHECK(seen.size() == 400);
    CHECK(a.counter() == 100);
    CHECK(a.master_seed() == 42);
    CHECK(a.stream_id() == 7);
    CHECK(e.lane() == 1);
    CHECK_THROWS_AS(RngStream(1, 1, 256), DomainError);
}

TEST_CASE("uniform stays inside the open unit interval and has the right moments")
{
    RngStream r(1, 0);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(sum2 / n - 1.0 / 3) < 4e-3);
}

TEST_CASE("normal moments")
{
    RngStream r(9, 3);
    const int n = 200000;
    double s1 = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(std::abs(s1 / n) < 4 / std::sqrt(double(n)));
    CHECK(std::abs(s2 / n - 1) < 4 * std::sqrt(2.0 / n));
    CHECK(std::abs(s4 / n - 3) < 4 * std::sqrt(96.0 / n));
}
