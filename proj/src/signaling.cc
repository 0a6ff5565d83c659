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

#include "nsl/signaling.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace nsl {

namespace {

template <class P, class Q>
void check_lattice(const P &p, const Q &q) {
    if (p.variables().size() != q.variables().size() || p.rounds() != q.rounds()) {
        throw std::invalid_argument("total variation needs laws on the same lattice (" +
                                    std::to_string(p.variables().size()) + " vars, n=" +
                                    std::to_string(p.rounds()) + " vs " + std::to_string(q.variables().size()) +
                                    " vars, n=" + std::to_string(q.rounds()) + ")");
    }
}

template <class P, class Q>
std::set<std::vector<int>> joint_support(const P &p, const Q &q) {
    std::set<std::vector<int>> keys;
    for (const auto &kv : p) keys.insert(kv.first);
    for (const auto &kv : q) keys.insert(kv.first);
    return keys;
}

Rational abs_rational(const Rational &x) {
    return x < 0 ? Rational(-x) : x;
}

bool a_and_b_saturated(const std::vector<int> &sums, int n) {
    return sums[0] == n && sums[1] == n;
}

double fabs_diff(double a, double b) {
    return std::fabs(a - b);
}

}  // namespace

std::string to_string(Statistic statistic) {
    switch (statistic) {
        case Statistic::kTotalVariation:
            return "total_variation";
        case Statistic::kVariancePair:
            return "variance_pair";
        case Statistic::kConditionalProbability:
            return "conditional_probability";
    }
    throw std::logic_error("unreachable");
}

double sampled_threshold(std::int64_t trials) {
    return 5.0 / std::sqrt(static_cast<double>(trials));
}

Rational total_variation(const ExactDistribution &p, const ExactDistribution &q) {
    check_lattice(p, q);
    Rational sum = 0;
    for (const auto &key : joint_support(p.pmf(), q.pmf())) {
        sum += abs_rational(p.probability(key) - q.probability(key));
    }
    return sum / 2;
}

double total_variation(const SampledDistribution &p, const SampledDistribution &q) {
    check_lattice(p, q);
    double sum = 0;
    for (const auto &key : joint_support(p.counts(), q.counts())) {
        sum += fabs_diff(p.frequency(key), q.frequency(key));
    }
    return sum / 2;
}

double total_variation(const SampledDistribution &p, const ExactDistribution &q) {
    check_lattice(p, q);
    double sum = 0;
    for (const auto &key : joint_support(p.counts(), q.pmf())) {
        sum += fabs_diff(p.frequency(key), to_double(q.probability(key)));
    }
    return sum / 2;
}

VarianceSignature variance_signature(const SampledDistribution &samples) {
    if (samples.variables().size() != 2) {
        throw std::invalid_argument("variance signature needs a (B, B') law");
    }
    return {samples.sample_variance({1, 1}), samples.sample_variance({1, -1})};
}

ExactVarianceSignature variance_signature(const ExactDistribution &dist) {
    if (dist.variables().size() != 2) {
        throw std::invalid_argument("variance signature needs a (B, B') law");
    }
    return {dist.variance({1, 1}), dist.variance({1, -1})};
}

nlohmann::json SignalingVerdict::to_json() const {
    nlohmann::json j = {
        {"scenario", to_string(scenario)},
        {"N", n},
        {"mode", to_string(mode)},
        {"statistic", to_string(statistic)},
        {"values", {value_0, value_1}},
        {"tv", tv},
        {"distinguishable", distinguishable},
        {"threshold", threshold},
        {"seed", seed},
    };
    if (mode == Mode::kMonteCarlo) {
        j["trials"] = trials;
    }
    if (exact_value_0 && exact_value_1) {
        j["values_exact"] = {to_string(*exact_value_0), to_string(*exact_value_1)};
    }
    if (exact_tv) {
        j["tv_exact"] = to_string(*exact_tv);
    }
    return j;
}

SignalingVerdict verdict(ScenarioKind kind, int n, Mode mode, std::int64_t trials, std::uint64_t seed) {
    SignalingVerdict v{kind, n, mode, Statistic::kTotalVariation, 0, 0, std::nullopt, std::nullopt, 0,
                       std::nullopt, false, 0.0, trials, seed};
    v.threshold = mode == Mode::kExact ? 0.0 : sampled_threshold(trials);

    auto run = [&](Label choice, ReceiverObservable receiver) {
        ScenarioSpec spec;
        spec.kind = kind;
        spec.n = n;
        spec.sender_choice = choice;
        spec.trials = trials;
        spec.seed = seed;
        spec.mode = mode;
        spec.receiver = receiver;
        return run_scenario(spec);
    };

    switch (kind) {
        case ScenarioKind::kPRBox: {
            auto r0 = run(Label::kUnprimed, ReceiverObservable::kSum);
            auto r1 = run(Label::kPrimed, ReceiverObservable::kSum);
            if (mode == Mode::kExact) {
                v.exact_tv = total_variation(*r0.exact, *r1.exact);
            } else {
                v.tv = total_variation(*r0.sampled, *r1.sampled);
            }
            break;
        }
        case ScenarioKind::kTsirelson: {
            for (auto receiver : {ReceiverObservable::kSum, ReceiverObservable::kDiff}) {
                auto r0 = run(Label::kUnprimed, receiver);
                auto r1 = run(Label::kPrimed, receiver);
                // Bob sees only his own collective (variable 1).
                if (mode == Mode::kExact) {
                    Rational tv = total_variation(r0.exact->marginal({1}), r1.exact->marginal({1}));
                    if (!v.exact_tv || tv > *v.exact_tv) v.exact_tv = tv;
                } else {
                    v.tv = std::max(v.tv, total_variation(r0.sampled->marginal({1}), r1.sampled->marginal({1})));
                }
            }
            break;
        }
        case ScenarioKind::kGHZ: {
            v.statistic = Statistic::kConditionalProbability;
            auto r0 = run(Label::kUnprimed, ReceiverObservable::kSum);
            auto r1 = run(Label::kPrimed, ReceiverObservable::kSum);
            auto saturated = [n](const std::vector<int> &s) { return a_and_b_saturated(s, n); };
            if (mode == Mode::kExact) {
                v.exact_value_0 = r0.exact->probability_where(saturated);
                v.exact_value_1 = r1.exact->probability_where(saturated);
                v.exact_tv = total_variation(r0.exact->marginal({0, 1}), r1.exact->marginal({0, 1}));
            } else {
                v.value_0 = r0.sampled->frequency_where(saturated);
                v.value_1 = r1.sampled->frequency_where(saturated);
                v.tv = total_variation(r0.sampled->marginal({0, 1}), r1.sampled->marginal({0, 1}));
            }
            break;
        }
    }

    if (v.exact_tv) {
        v.tv = to_double(*v.exact_tv);
    }
    if (v.statistic == Statistic::kTotalVariation) {
        v.value_0 = 0.0;
        v.value_1 = v.tv;
        if (v.exact_tv) {
            v.exact_value_0 = Rational(0);
            v.exact_value_1 = *v.exact_tv;
        }
    } else if (v.exact_value_0) {
        v.value_0 = to_double(*v.exact_value_0);
        v.value_1 = to_double(*v.exact_value_1);
    }

    if (mode == Mode::kExact) {
        v.distinguishable = *v.exact_value_0 != *v.exact_value_1 || *v.exact_tv != 0;
    } else {
        v.distinguishable = std::fabs(v.value_1 - v.value_0) > v.threshold || v.tv > v.threshold;
    }
    return v;
}

UnaryReport unary_condition_check(const std::vector<ExactDistribution> &under_choice_0,
                                  const std::vector<ExactDistribution> &under_choice_1) {
    if (under_choice_0.size() != under_choice_1.size()) {
        throw std::invalid_argument("receiver lists differ in length");
    }
    Rational worst = 0;
    for (std::size_t k = 0; k < under_choice_0.size(); ++k) {
        worst = std::max(worst, total_variation(under_choice_0[k], under_choice_1[k]));
    }
    return {worst == 0, to_double(worst), worst, 0.0};
}

UnaryReport unary_condition_check(const JammingRun &under_x, const JammingRun &under_z) {
    auto p_plus = [](std::int64_t count, std::int64_t sum) {
        return (static_cast<double>(count) + static_cast<double>(sum)) / (2.0 * static_cast<double>(count));
    };
    if (under_x.all.count == 0 || under_z.all.count == 0) {
        throw std::invalid_argument("jamming runs hold no records");
    }
    // For a dichotomic outcome, TV = |P_1(+1) - P_2(+1)|.
    double tv_alice = std::fabs(p_plus(under_x.all.count, under_x.all.sum_a) -
                                p_plus(under_z.all.count, under_z.all.sum_a));
    double tv_bob = std::fabs(p_plus(under_x.all.count, under_x.all.sum_b) -
                              p_plus(under_z.all.count, under_z.all.sum_b));
    double worst = std::max(tv_alice, tv_bob);
    double threshold = sampled_threshold(std::min(under_x.all.count, under_z.all.count));
    return {worst < threshold, worst, std::nullopt, threshold};
}

UnaryReport exact_jamming_unary_check() {
    auto marginals = [](JamBasis basis) {
        auto law = exact_collective_distribution(jamming_round_model(basis), 1);
        return std::vector<ExactDistribution>{law.marginal({1}), law.marginal({2})};
    };
    return unary_condition_check(marginals(JamBasis::kX), marginals(JamBasis::kZ));
}

}  // namespace nsl
