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

#ifndef NSL_SIGNALING_H
#define NSL_SIGNALING_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsl/ensemble.h"
#include "nsl/rational.h"

namespace nsl {

enum class Statistic { kTotalVariation, kVariancePair, kConditionalProbability };

std::string to_string(Statistic statistic);

/// Threshold for sampled-mode verdicts, 5/sqrt(trials).
double sampled_threshold(std::int64_t trials);

/// (1/2) sum |p - q|. Both laws must share variables and round count;
/// otherwise std::invalid_argument.
Rational total_variation(const ExactDistribution &p, const ExactDistribution &q);
double total_variation(const SampledDistribution &p, const SampledDistribution &q);
double total_variation(const SampledDistribution &p, const ExactDistribution &q);

struct VarianceSignature {
    double var_sum;
    double var_diff;
};

struct ExactVarianceSignature {
    Rational var_sum;
    Rational var_diff;
};

/// Variances of B + B' and B - B' over a two-variable collective law.
VarianceSignature variance_signature(const SampledDistribution &samples);
ExactVarianceSignature variance_signature(const ExactDistribution &dist);

/// Outcome of comparing the receiver's accessible statistics under the
/// sender's two choices. distinguishable iff |value_1 - value_0| or tv
/// exceeds the threshold (0 in exact mode).
///
/// For the total_variation statistic value_0 is 0 (choice 0 against itself)
/// and value_1 is the distance between the two laws.
struct SignalingVerdict {
    ScenarioKind scenario;
    int n;
    Mode mode;
    Statistic statistic;
    double value_0;
    double value_1;
    std::optional<Rational> exact_value_0;
    std::optional<Rational> exact_value_1;
    double tv;
    std::optional<Rational> exact_tv;
    bool distinguishable;
    double threshold;
    std::int64_t trials;
    std::uint64_t seed;

    nlohmann::json to_json() const;
};

/// Runs both sender choices and compares:
///  PRBox - total variation of Bob's joint (B, B');
///  TsirelsonQuantum - total variation of Bob's collective, maximized over
///    his (b+b')/sqrt(2) and (b-b')/sqrt(2) observables;
///  GHZ - P(A_x = 1 and B_x = 1) under each of Jim's choices, plus total
///    variation of the joint (A_x, B_x).
SignalingVerdict verdict(ScenarioKind kind, int n, Mode mode, std::int64_t trials = 100000,
                         std::uint64_t seed = 0);

struct UnaryReport {
    bool holds;
    double max_marginal_tv;
    std::optional<Rational> exact_max_tv;
    double threshold;
};

/// Each receiver's accessible law under the sender's choice 0 and choice 1
/// (same receiver order in both lists). Holds iff every TV is exactly 0.
UnaryReport unary_condition_check(const std::vector<ExactDistribution> &under_choice_0,
                                  const std::vector<ExactDistribution> &under_choice_1);

/// Sampled form over jamming runs with Jim measuring sigma_x and sigma_z:
/// Alice's and Bob's single-outcome marginals must agree within
/// 5/sqrt(records).
UnaryReport unary_condition_check(const JammingRun &under_x, const JammingRun &under_z);

/// Exact per-triplet form: Alice's and Bob's marginals from the Born-rule
/// law of each of Jim's bases.
UnaryReport exact_jamming_unary_check();

}  // namespace nsl

#endif
