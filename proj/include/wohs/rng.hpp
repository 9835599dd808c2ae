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

#include <array>
#include <cstdint>

namespace wohs {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

/// Counter-based stream: output k is a pure function of (seed, stream_id, lane, k).
/// Lanes give a walk independent sub-streams (first coordinate vs transverse).
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id, std::uint32_t lane = 0);

    std::uint64_t next_u64();
    /// Uniform on the open interval (0,1).
    double uniform();
    /// Standard normal by Box-Muller (no cached second value).
    double normal();

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint32_t lane() const { return lane_; }
    /// Number of 64-bit words consumed so far.
    std::uint64_t counter() const { return drawn_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint32_t lane_;
    std::uint64_t drawn_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int pos_ = 2;
};

} // namespace wohs
