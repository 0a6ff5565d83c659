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

#ifndef NSL_ENSEMBLE_H
#define NSL_ENSEMBLE_H

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsl/box.h"
#include "nsl/random.h"
#include "nsl/rational.h"

namespace nsl {

enum class ScenarioKind { kPRBox, kTsirelson, kGHZ };
enum class Mode { kExact, kMonteCarlo };

/// Bob's observable in the Tsirelson scenario: (b+b')/sqrt(2), which is
/// sigma_z on his qubit, or (b-b')/sqrt(2), which is sigma_x.
enum class ReceiverObservable { kSum, kDiff };

std::string to_string(ScenarioKind kind);
std::string to_string(Mode mode);

inline constexpr int kMaxExactRounds = 24;
inline constexpr std::int64_t kMaxRetainedRounds = 10'000'000;

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::kPRBox;
    /// Rounds (pairs or triplets) per run.
    int n = 6;
    /// Alice's a/a' for the bipartite scenarios, Jim's x/y basis for GHZ.
    Label sender_choice = Label::kUnprimed;
    std::int64_t trials = 100000;
    std::uint64_t seed = 0;
    Mode mode = Mode::kExact;
    ReceiverObservable receiver = ReceiverObservable::kSum;
    /// Keep every trial's collective tuple, in trial order.
    bool keep_samples = false;
    /// Keep per-round outcome tuples. Ignored when n * trials exceeds
    /// kMaxRetainedRounds.
    bool keep_rounds = false;
};

/// Exact law of one round's dichotomic outcomes. Only outcomes with nonzero
/// probability are listed.
struct RoundModel {
    std::vector<std::string> variables;
    std::vector<std::pair<std::vector<int>, Rational>> outcomes;

    /// Throws std::invalid_argument unless every tuple has one +-1 entry per
    /// variable and the probabilities are positive and sum to exactly 1.
    void validate() const;
};

/// The collective variable (1/n) * sum for an outcome sum.
Rational collective_value(int sum, int n);

/// Exact joint law of the collective variables after n i.i.d. rounds. Keys
/// are per-variable outcome sums; the collective value is sum / n.
class ExactDistribution {
public:
    using Pmf = std::map<std::vector<int>, Rational>;

    ExactDistribution(std::vector<std::string> variables, int rounds, Pmf pmf);

    const std::vector<std::string> &variables() const { return variables_; }
    int rounds() const { return rounds_; }
    const Pmf &pmf() const { return pmf_; }

    Rational probability(const std::vector<int> &sums) const;
    Rational probability_where(const std::function<bool(const std::vector<int> &)> &pred) const;
    /// P(pred | given). Throws std::domain_error if P(given) = 0.
    Rational conditional(const std::function<bool(const std::vector<int> &)> &pred,
                         const std::function<bool(const std::vector<int> &)> &given) const;

    /// Keeps the listed variables, in the listed order.
    ExactDistribution marginal(const std::vector<std::size_t> &keep) const;

    Rational total() const;
    Rational mean(std::size_t variable) const;
    /// Variance of the collective value (sum/n) of a linear combination
    /// sum_k coeffs[k] * variable_k.
    Rational variance(const std::vector<int> &coeffs) const;

    nlohmann::json to_json() const;

private:
    std::vector<std::string> variables_;
    int rounds_;
    Pmf pmf_;
};

/// Empirical law of the collective variables over Monte Carlo trials.
class SampledDistribution {
public:
    using Counts = std::map<std::vector<int>, std::int64_t>;

    SampledDistribution(std::vector<std::string> variables, int rounds, std::int64_t trials, Counts counts);

    const std::vector<std::string> &variables() const { return variables_; }
    int rounds() const { return rounds_; }
    std::int64_t trials() const { return trials_; }
    const Counts &counts() const { return counts_; }

    double frequency(const std::vector<int> &sums) const;
    double frequency_where(const std::function<bool(const std::vector<int> &)> &pred) const;
    SampledDistribution marginal(const std::vector<std::size_t> &keep) const;

    /// Unbiased sample variance of sum_k coeffs[k] * collective_k. Throws
    /// std::invalid_argument with fewer than two trials.
    double sample_variance(const std::vector<int> &coeffs) const;

    /// Per-trial collective sums, if retained.
    std::vector<std::vector<int>> samples;
    /// Per-round outcome tuples, trial-major, if retained.
    std::vector<std::vector<int>> round_records;

private:
    std::vector<std::string> variables_;
    int rounds_;
    std::int64_t trials_;
    Counts counts_;
};

/// N-fold convolution of the round law with exact arithmetic. Throws
/// std::invalid_argument unless 1 <= n <= kMaxExactRounds.
ExactDistribution exact_collective_distribution(const RoundModel &round, int n);

/// Samples `trials` independent runs of n rounds from the round law.
SampledDistribution sample_collective_distribution(const RoundModel &round, int n, std::int64_t trials,
                                                   std::uint64_t seed, bool keep_samples = false,
                                                   bool keep_rounds = false);

/// Bob's classical-limit joint values (b, b') per round of a PR ensemble
/// under Alice's choice. Variables {B, B'}.
RoundModel pr_round_model(Label alice_choice);

/// Alice's outcome and Bob's sigma_z or sigma_x outcome on a Bell pair.
/// Variables {A, B_sum} or {A, B_diff}.
RoundModel tsirelson_round_model(Label alice_choice, ReceiverObservable receiver);

/// GHZ triplet with Alice and Bob measuring sigma_x and Jim measuring
/// sigma_x (unprimed) or sigma_y (primed). Variables {A_x, B_x, J_x|J_y}.
RoundModel ghz_round_model(Label jim_choice);

struct ScenarioResult {
    ScenarioSpec spec;
    RoundModel round;
    std::optional<ExactDistribution> exact;
    std::optional<SampledDistribution> sampled;
};

/// Optional perturbation of Bob's ideal joint readout, applied per round in
/// Monte Carlo mode. The default (empty) is the noiseless readout.
using ReadoutNoise = std::function<JointValue(JointValue, RandomStream &)>;

ScenarioResult run_pr_scenario(const ScenarioSpec &spec, const ReadoutNoise &noise = {});
ScenarioResult run_tsirelson_scenario(const ScenarioSpec &spec);
ScenarioResult run_ghz_scenario(const ScenarioSpec &spec);
ScenarioResult run_scenario(const ScenarioSpec &spec);

/// Jim's basis in the jamming protocol.
enum class JamBasis { kX, kZ };

std::string to_string(JamBasis basis);

struct JammingRecord {
    int jim_outcome;
    int a_x;
    int b_x;
};

struct JammingBin {
    std::int64_t count = 0;
    std::int64_t sum_ab = 0;
    std::int64_t sum_a = 0;
    std::int64_t sum_b = 0;
    /// Records with a_x * b_x != -jim_outcome.
    std::int64_t constraint_violations = 0;

    double correlation() const { return count ? static_cast<double>(sum_ab) / static_cast<double>(count) : 0.0; }
    void add(const JammingRecord &r);
};

struct JammingRun {
    JamBasis jim;
    int n;
    std::int64_t trials;
    std::uint64_t seed;
    /// bins[0]: Jim obtained +1, bins[1]: Jim obtained -1.
    std::array<JammingBin, 2> bins;
    JammingBin all;
    std::vector<JammingRecord> records;

    const JammingBin &bin(int jim_outcome) const { return bins[jim_outcome == 1 ? 0 : 1]; }
};

/// Each trial measures n GHZ triplets: Jim first in his basis, then Alice and
/// Bob sigma_x, with state collapse after each measurement.
JammingRun run_jamming_scenario(int n, JamBasis jim, std::int64_t trials, std::uint64_t seed,
                                bool keep_records = true);

/// Exact per-triplet law of (Jim's outcome, a_x, b_x). Variables {J, A_x, B_x}.
RoundModel jamming_round_model(JamBasis jim);

}  // namespace nsl

#endif
