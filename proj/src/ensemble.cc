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

#include "nsl/ensemble.h"

#include <stdexcept>

namespace nsl {

namespace {

std::size_t checked_power(int base, std::size_t exp) {
    std::size_t out = 1;
    for (std::size_t k = 0; k < exp; ++k) out *= static_cast<std::size_t>(base);
    return out;
}

// Dense layout over per-variable counts of +1 outcomes, c_k in [0, n].
struct CountLattice {
    int n;
    std::size_t k;
    std::size_t size;

    CountLattice(int n, std::size_t k) : n(n), k(k), size(checked_power(n + 1, k)) {}

    std::vector<int> sums(std::size_t idx) const {
        std::vector<int> out(k);
        for (std::size_t v = 0; v < k; ++v) {
            int c = static_cast<int>(idx % static_cast<std::size_t>(n + 1));
            idx /= static_cast<std::size_t>(n + 1);
            out[v] = 2 * c - n;
        }
        return out;
    }

    // Index offset contributed by one round's outcome tuple.
    std::size_t step(const std::vector<int> &outcome) const {
        std::size_t idx = 0, stride = 1;
        for (std::size_t v = 0; v < k; ++v) {
            if (outcome[v] == 1) idx += stride;
            stride *= static_cast<std::size_t>(n + 1);
        }
        return idx;
    }
};

void check_rounds(int n) {
    if (n < 1) {
        throw std::invalid_argument("need at least one round, got n = " + std::to_string(n));
    }
}

void check_trials(std::int64_t trials) {
    if (trials < 1) {
        throw std::invalid_argument("need at least one trial");
    }
}

inline constexpr std::size_t kDenseLatticeLimit = std::size_t{1} << 16;

struct ChunkResult {
    std::vector<std::int64_t> histogram;
    std::map<std::size_t, std::int64_t> sparse;
    std::vector<std::vector<int>> samples;
    std::vector<std::vector<int>> rounds;
};

// Runs `trials` independent n-round runs; draw(rng, outcome) fills one
// round's outcome tuple.
template <class Draw>
SampledDistribution sample_runs(const std::vector<std::string> &variables, int n, std::int64_t trials,
                                std::uint64_t seed, bool keep_samples, bool keep_rounds, Draw draw) {
    check_rounds(n);
    check_trials(trials);
    const std::size_t k = variables.size();
    CountLattice lattice(n, k);
    const bool dense = lattice.size <= kDenseLatticeLimit;
    keep_rounds = keep_rounds && static_cast<std::int64_t>(n) * trials <= kMaxRetainedRounds;
    const std::int64_t chunks = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
    std::vector<ChunkResult> results(static_cast<std::size_t>(chunks));

    for_each_trial_chunk(trials, [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
        RandomStream rng(seed, static_cast<std::uint64_t>(chunk));
        ChunkResult &out = results[static_cast<std::size_t>(chunk)];
        if (dense) out.histogram.assign(lattice.size, 0);
        std::vector<int> outcome(k);
        std::vector<int> sums(k);
        for (std::int64_t t = begin; t < end; ++t) {
            std::fill(sums.begin(), sums.end(), 0);
            std::size_t idx = 0;
            for (int r = 0; r < n; ++r) {
                draw(rng, outcome);
                for (std::size_t v = 0; v < k; ++v) sums[v] += outcome[v];
                idx += lattice.step(outcome);
                if (keep_rounds) out.rounds.push_back(outcome);
            }
            if (dense) {
                ++out.histogram[idx];
            } else {
                ++out.sparse[idx];
            }
            if (keep_samples) out.samples.push_back(sums);
        }
    });

    std::map<std::size_t, std::int64_t> merged;
    std::vector<std::vector<int>> samples, rounds;
    for (auto &r : results) {
        for (std::size_t i = 0; i < r.histogram.size(); ++i) {
            if (r.histogram[i]) merged[i] += r.histogram[i];
        }
        for (const auto &[i, c] : r.sparse) merged[i] += c;
        for (auto &s : r.samples) samples.push_back(std::move(s));
        for (auto &s : r.rounds) rounds.push_back(std::move(s));
    }
    SampledDistribution::Counts counts;
    for (const auto &[i, c] : merged) {
        counts.emplace(lattice.sums(i), c);
    }
    SampledDistribution out(variables, n, trials, std::move(counts));
    out.samples = std::move(samples);
    out.round_records = std::move(rounds);
    return out;
}

struct CumulativeTable {
    std::vector<std::vector<int>> outcomes;
    std::vector<double> cumulative;

    explicit CumulativeTable(const RoundModel &round) {
        double acc = 0;
        for (const auto &[o, p] : round.outcomes) {
            outcomes.push_back(o);
            acc += to_double(p);
            cumulative.push_back(acc);
        }
        cumulative.back() = 1.0;
    }
};

RoundModel round_from_box_row(const DichotomicBox &box, const std::vector<Label> &settings,
                              std::vector<std::string> variables) {
    RoundModel round{std::move(variables), {}};
    const auto &row = box.row(settings);
    for (std::size_t o = 0; o < row.size(); ++o) {
        Rational p = rationalize(row[o]);
        if (p != 0) {
            round.outcomes.emplace_back(box.outcome_tuple(o), p);
        }
    }
    round.validate();
    return round;
}

}  // namespace

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::kPRBox:
            return "PRBox";
        case ScenarioKind::kTsirelson:
            return "TsirelsonQuantum";
        case ScenarioKind::kGHZ:
            return "GHZ";
    }
    throw std::logic_error("unreachable");
}

std::string to_string(Mode mode) {
    return mode == Mode::kExact ? "exact" : "mc";
}

std::string to_string(JamBasis basis) {
    return basis == JamBasis::kX ? "x" : "z";
}

void RoundModel::validate() const {
    if (variables.empty()) {
        throw std::invalid_argument("round model has no variables");
    }
    Rational total = 0;
    for (const auto &[o, p] : outcomes) {
        if (o.size() != variables.size()) {
            throw std::invalid_argument("round outcome arity does not match the variables");
        }
        for (int v : o) {
            if (v != 1 && v != -1) throw std::invalid_argument("round outcomes must be +1 or -1");
        }
        if (p <= 0) throw std::invalid_argument("round probabilities must be positive");
        total += p;
    }
    if (total != 1) {
        throw std::invalid_argument("round probabilities sum to " + to_string(total));
    }
}

Rational collective_value(int sum, int n) {
    return Rational(sum, n);
}

ExactDistribution::ExactDistribution(std::vector<std::string> variables, int rounds, Pmf pmf)
    : variables_(std::move(variables)), rounds_(rounds), pmf_(std::move(pmf)) {}

Rational ExactDistribution::probability(const std::vector<int> &sums) const {
    auto it = pmf_.find(sums);
    return it == pmf_.end() ? Rational(0) : it->second;
}

Rational ExactDistribution::probability_where(const std::function<bool(const std::vector<int> &)> &pred) const {
    Rational p = 0;
    for (const auto &[key, q] : pmf_) {
        if (pred(key)) p += q;
    }
    return p;
}

Rational ExactDistribution::conditional(const std::function<bool(const std::vector<int> &)> &pred,
                                        const std::function<bool(const std::vector<int> &)> &given) const {
    Rational joint = 0, base = 0;
    for (const auto &[key, q] : pmf_) {
        if (given(key)) {
            base += q;
            if (pred(key)) joint += q;
        }
    }
    if (base == 0) {
        throw std::domain_error("conditioning event has probability zero");
    }
    return joint / base;
}

ExactDistribution ExactDistribution::marginal(const std::vector<std::size_t> &keep) const {
    std::vector<std::string> vars;
    for (auto v : keep) vars.push_back(variables_.at(v));
    Pmf out;
    for (const auto &[key, q] : pmf_) {
        std::vector<int> sub;
        for (auto v : keep) sub.push_back(key[v]);
        out[sub] += q;
    }
    return ExactDistribution(std::move(vars), rounds_, std::move(out));
}

Rational ExactDistribution::total() const {
    Rational t = 0;
    for (const auto &[key, q] : pmf_) t += q;
    return t;
}

Rational ExactDistribution::mean(std::size_t variable) const {
    Rational m = 0;
    for (const auto &[key, q] : pmf_) m += q * collective_value(key.at(variable), rounds_);
    return m;
}

Rational ExactDistribution::variance(const std::vector<int> &coeffs) const {
    if (coeffs.size() != variables_.size()) {
        throw std::invalid_argument("one coefficient per variable is required");
    }
    Rational m1 = 0, m2 = 0;
    for (const auto &[key, q] : pmf_) {
        int s = 0;
        for (std::size_t v = 0; v < coeffs.size(); ++v) s += coeffs[v] * key[v];
        Rational x = collective_value(s, rounds_);
        m1 += q * x;
        m2 += q * x * x;
    }
    return m2 - m1 * m1;
}

nlohmann::json ExactDistribution::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto &[key, q] : pmf_) {
        nlohmann::json values = nlohmann::json::array();
        for (int s : key) values.push_back(to_string(collective_value(s, rounds_)));
        entries.push_back({
            {"value", values},
            {"numerator", numerator(q).str()},
            {"denominator", denominator(q).str()},
        });
    }
    return {{"variables", variables_}, {"n", rounds_}, {"pmf", entries}};
}

SampledDistribution::SampledDistribution(std::vector<std::string> variables, int rounds, std::int64_t trials,
                                         Counts counts)
    : variables_(std::move(variables)), rounds_(rounds), trials_(trials), counts_(std::move(counts)) {}

double SampledDistribution::frequency(const std::vector<int> &sums) const {
    auto it = counts_.find(sums);
    return it == counts_.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials_);
}

double SampledDistribution::frequency_where(const std::function<bool(const std::vector<int> &)> &pred) const {
    std::int64_t hits = 0;
    for (const auto &[key, c] : counts_) {
        if (pred(key)) hits += c;
    }
    return static_cast<double>(hits) / static_cast<double>(trials_);
}

SampledDistribution SampledDistribution::marginal(const std::vector<std::size_t> &keep) const {
    std::vector<std::string> vars;
    for (auto v : keep) vars.push_back(variables_.at(v));
    Counts out;
    for (const auto &[key, c] : counts_) {
        std::vector<int> sub;
        for (auto v : keep) sub.push_back(key[v]);
        out[sub] += c;
    }
    return SampledDistribution(std::move(vars), rounds_, trials_, std::move(out));
}

double SampledDistribution::sample_variance(const std::vector<int> &coeffs) const {
    if (trials_ < 2) {
        throw std::invalid_argument("sample variance needs at least two samples");
    }
    if (coeffs.size() != variables_.size()) {
        throw std::invalid_argument("one coefficient per variable is required");
    }
    double sum = 0;
    for (const auto &[key, c] : counts_) {
        int s = 0;
        for (std::size_t v = 0; v < coeffs.size(); ++v) s += coeffs[v] * key[v];
        sum += static_cast<double>(c) * s / rounds_;
    }
    const double mean = sum / static_cast<double>(trials_);
    double ss = 0;
    for (const auto &[key, c] : counts_) {
        int s = 0;
        for (std::size_t v = 0; v < coeffs.size(); ++v) s += coeffs[v] * key[v];
        double d = static_cast<double>(s) / rounds_ - mean;
        ss += static_cast<double>(c) * d * d;
    }
    return ss / static_cast<double>(trials_ - 1);
}

ExactDistribution exact_collective_distribution(const RoundModel &round, int n) {
    check_rounds(n);
    if (n > kMaxExactRounds) {
        throw std::invalid_argument("exact mode supports n <= " + std::to_string(kMaxExactRounds) + ", got " +
                                    std::to_string(n));
    }
    round.validate();
    const std::size_t k = round.variables.size();
    CountLattice lattice(n, k);

    // Integer weights over a common denominator keep the convolution in
    // integer arithmetic; probabilities are weight / denominator^n.
    BigInt denom = 1;
    for (const auto &[o, p] : round.outcomes) {
        denom = boost::multiprecision::lcm(denom, BigInt(denominator(p)));
    }
    std::vector<std::pair<std::size_t, BigInt>> steps;
    for (const auto &[o, p] : round.outcomes) {
        steps.emplace_back(lattice.step(o), BigInt(numerator(p) * (denom / denominator(p))));
    }

    std::vector<BigInt> current(lattice.size), next(lattice.size);
    current[0] = 1;
    for (int r = 0; r < n; ++r) {
        for (auto &x : next) x = 0;
        for (std::size_t idx = 0; idx < lattice.size; ++idx) {
            if (current[idx].is_zero()) continue;
            for (const auto &[delta, w] : steps) {
                next[idx + delta] += current[idx] * w;
            }
        }
        std::swap(current, next);
    }

    BigInt total_weight = boost::multiprecision::pow(denom, static_cast<unsigned>(n));
    ExactDistribution::Pmf pmf;
    for (std::size_t idx = 0; idx < lattice.size; ++idx) {
        if (!current[idx].is_zero()) {
            pmf.emplace(lattice.sums(idx), Rational(current[idx], total_weight));
        }
    }
    return ExactDistribution(round.variables, n, std::move(pmf));
}

SampledDistribution sample_collective_distribution(const RoundModel &round, int n, std::int64_t trials,
                                                   std::uint64_t seed, bool keep_samples, bool keep_rounds) {
    round.validate();
    CumulativeTable table(round);
    return sample_runs(round.variables, n, trials, seed, keep_samples, keep_rounds,
                       [&table](RandomStream &rng, std::vector<int> &outcome) {
                           outcome = table.outcomes[rng.discrete(table.cumulative)];
                       });
}

RoundModel pr_round_model(Label alice_choice) {
    const DichotomicBox box = make_pr_box();
    const auto readout = JointReadoutModel::from_box(box);
    // Alice's marginal is the same under either of Bob's settings.
    const auto alice = exact_marginal(box, {alice_choice, Label::kUnprimed}, 1u << 0);
    std::map<std::vector<int>, Rational> merged;
    for (int alpha : {1, -1}) {
        const Rational &p = alice[alpha == 1 ? 0 : 1];
        if (p == 0) continue;
        JointValue jv = readout.readout(alice_choice, alpha);
        merged[{jv.b, jv.b_prime}] += p;
    }
    RoundModel round{{"B", "B'"}, {merged.begin(), merged.end()}};
    round.validate();
    return round;
}

RoundModel tsirelson_round_model(Label alice_choice, ReceiverObservable receiver) {
    const DichotomicBox box = box_from_quantum(
        bell_state(), {
                          {PauliObservable::local(2, 0, Pauli::Z), PauliObservable::local(2, 0, Pauli::X)},
                          {PauliObservable::local(2, 1, Pauli::Z), PauliObservable::local(2, 1, Pauli::X)},
                      });
    const bool sum = receiver == ReceiverObservable::kSum;
    return round_from_box_row(box, {alice_choice, sum ? Label::kUnprimed : Label::kPrimed},
                              {"A", sum ? "B_sum" : "B_diff"});
}

RoundModel ghz_round_model(Label jim_choice) {
    return round_from_box_row(make_ghz_box(), {Label::kUnprimed, Label::kUnprimed, jim_choice},
                              {"A_x", "B_x", jim_choice == Label::kUnprimed ? "J_x" : "J_y"});
}

ScenarioResult run_pr_scenario(const ScenarioSpec &spec, const ReadoutNoise &noise) {
    if (spec.kind != ScenarioKind::kPRBox) {
        throw std::invalid_argument("run_pr_scenario needs kind PRBox");
    }
    ScenarioResult result{spec, pr_round_model(spec.sender_choice), std::nullopt, std::nullopt};
    if (spec.mode == Mode::kExact) {
        result.exact = exact_collective_distribution(result.round, spec.n);
        return result;
    }
    const DichotomicBox box = make_pr_box();
    const auto readout = JointReadoutModel::from_box(box);
    const double p_plus = to_double(exact_marginal(box, {spec.sender_choice, Label::kUnprimed}, 1u << 0)[0]);
    const Label choice = spec.sender_choice;
    result.sampled = sample_runs(result.round.variables, spec.n, spec.trials, spec.seed, spec.keep_samples,
                                 spec.keep_rounds, [&](RandomStream &rng, std::vector<int> &outcome) {
                                     JointValue jv = readout.readout(choice, rng.sign(p_plus));
                                     if (noise) jv = noise(jv, rng);
                                     outcome[0] = jv.b;
                                     outcome[1] = jv.b_prime;
                                 });
    return result;
}

namespace {

ScenarioResult run_from_round(const ScenarioSpec &spec, RoundModel round) {
    ScenarioResult result{spec, std::move(round), std::nullopt, std::nullopt};
    if (spec.mode == Mode::kExact) {
        result.exact = exact_collective_distribution(result.round, spec.n);
    } else {
        result.sampled = sample_collective_distribution(result.round, spec.n, spec.trials, spec.seed,
                                                        spec.keep_samples, spec.keep_rounds);
    }
    return result;
}

}  // namespace

ScenarioResult run_tsirelson_scenario(const ScenarioSpec &spec) {
    if (spec.kind != ScenarioKind::kTsirelson) {
        throw std::invalid_argument("run_tsirelson_scenario needs kind TsirelsonQuantum");
    }
    return run_from_round(spec, tsirelson_round_model(spec.sender_choice, spec.receiver));
}

ScenarioResult run_ghz_scenario(const ScenarioSpec &spec) {
    if (spec.kind != ScenarioKind::kGHZ) {
        throw std::invalid_argument("run_ghz_scenario needs kind GHZ");
    }
    return run_from_round(spec, ghz_round_model(spec.sender_choice));
}

ScenarioResult run_scenario(const ScenarioSpec &spec) {
    switch (spec.kind) {
        case ScenarioKind::kPRBox:
            return run_pr_scenario(spec);
        case ScenarioKind::kTsirelson:
            return run_tsirelson_scenario(spec);
        case ScenarioKind::kGHZ:
            return run_ghz_scenario(spec);
    }
    throw std::logic_error("unreachable");
}

void JammingBin::add(const JammingRecord &r) {
    ++count;
    sum_ab += r.a_x * r.b_x;
    sum_a += r.a_x;
    sum_b += r.b_x;
    if (r.a_x * r.b_x != -r.jim_outcome) ++constraint_violations;
}

JammingRun run_jamming_scenario(int n, JamBasis jim, std::int64_t trials, std::uint64_t seed, bool keep_records) {
    check_rounds(n);
    check_trials(trials);
    const PureState ghz = ghz_state();
    const PauliObservable jim_obs = PauliObservable::local(3, 2, jim == JamBasis::kX ? Pauli::X : Pauli::Z);
    const PauliObservable alice_obs = PauliObservable::local(3, 0, Pauli::X);
    const PauliObservable bob_obs = PauliObservable::local(3, 1, Pauli::X);

    const std::int64_t chunks = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
    std::vector<std::vector<JammingRecord>> per_chunk(static_cast<std::size_t>(chunks));
    for_each_trial_chunk(trials, [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
        RandomStream rng(seed, static_cast<std::uint64_t>(chunk));
        auto &out = per_chunk[static_cast<std::size_t>(chunk)];
        out.reserve(static_cast<std::size_t>((end - begin) * n));
        for (std::int64_t t = begin; t < end; ++t) {
            for (int r = 0; r < n; ++r) {
                auto j = measure(ghz, jim_obs, rng);
                auto a = measure(j.post_state, alice_obs, rng);
                auto b = measure(a.post_state, bob_obs, rng);
                out.push_back({j.outcome, a.outcome, b.outcome});
            }
        }
    });

    JammingRun run{jim, n, trials, seed, {}, {}, {}};
    for (auto &chunk : per_chunk) {
        for (const auto &rec : chunk) {
            run.bins[rec.jim_outcome == 1 ? 0 : 1].add(rec);
            run.all.add(rec);
            if (keep_records) run.records.push_back(rec);
        }
    }
    return run;
}

RoundModel jamming_round_model(JamBasis jim) {
    std::vector<PartyObservables> obs = {
        {PauliObservable::local(3, 2, Pauli::X), PauliObservable::local(3, 2, Pauli::Z)},
        {PauliObservable::local(3, 0, Pauli::X), PauliObservable::local(3, 0, Pauli::X)},
        {PauliObservable::local(3, 1, Pauli::X), PauliObservable::local(3, 1, Pauli::X)},
    };
    const DichotomicBox box = box_from_quantum(ghz_state(), obs);
    return round_from_box_row(box, {jim == JamBasis::kX ? Label::kUnprimed : Label::kPrimed, Label::kUnprimed,
                                    Label::kUnprimed},
                              {"J", "A_x", "B_x"});
}

}  // namespace nsl
