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

#ifndef NSL_RANDOM_H
#define NSL_RANDOM_H

#include <algorithm>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace nsl {

/// A reproducible random stream identified by (seed, stream index). Streams
/// with different indices are statistically independent, which lets trials be
/// split into fixed chunks and run on any number of threads with identical
/// results.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) built from the top 53 bits, so results do not
    /// depend on the standard library's distribution implementations.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// +1 with probability p_plus, otherwise -1.
    int sign(double p_plus) { return uniform() < p_plus ? +1 : -1; }

    /// Index drawn from a cumulative distribution (last entry ~1).
    std::size_t discrete(const std::vector<double> &cumulative);

private:
    std::mt19937_64 engine_;
};

inline constexpr std::int64_t kTrialsPerStream = 4096;

/// Splits [0, trials) into chunks of kTrialsPerStream and calls
/// fn(chunk_index, begin, end) for each, spread over worker threads. Chunk
/// boundaries do not depend on the thread count.
template <class Fn>
void for_each_trial_chunk(std::int64_t trials, Fn &&fn) {
    const std::int64_t chunks = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
    auto run_chunk = [&](std::int64_t c) {
        std::int64_t begin = c * kTrialsPerStream;
        fn(c, begin, std::min(trials, begin + kTrialsPerStream));
    };
    const auto workers = static_cast<std::int64_t>(std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1 || chunks <= 1) {
        for (std::int64_t c = 0; c < chunks; ++c) {
            run_chunk(c);
        }
        return;
    }
    std::vector<std::jthread> pool;
    for (std::int64_t w = 0; w < std::min(workers, chunks); ++w) {
        pool.emplace_back([&, w] {
            for (std::int64_t c = w; c < chunks; c += workers) {
                run_chunk(c);
            }
        });
    }
}

}  // namespace nsl

#endif
