// Copyright 2026 The nosig-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nsl/random.h"

namespace nsl {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_index) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream_index),
        static_cast<std::uint32_t>(stream_index >> 32),
    };
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : engine_(seeded_engine(seed, stream_index)) {}

std::size_t RandomStream::discrete(const std::vector<double> &cumulative) {
    double u = uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
        // u landed in the rounding gap above the last cumulative entry.
        --it;
    }
    return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace nsl
