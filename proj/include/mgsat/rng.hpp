// SPDX-License-Identifier: Apache-2.0
//
// mgsat - forward-link simulator for multi-gateway multibeam satellite systems
// Copyright (C) 2026 The mgsat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MGSAT_RNG_HPP
#define MGSAT_RNG_HPP

#include <cstdint>
#include <random>

namespace mgsat
{
    using Engine = std::mt19937_64;

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Independent sub-seed for (stream, index), e.g. (channel, trial).
    inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index)
    {
        return splitmix64(splitmix64(splitmix64(master) ^ stream) + index);
    }

    enum SeedStream : std::uint64_t
    {
        seed_stream_drop = 1,
        seed_stream_channel = 2,
    };
}

#endif
