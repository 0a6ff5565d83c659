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

// Acceptance suite: one PASS/FAIL line per criterion. `--only K` runs a
// single criterion; the exit status is nonzero if any selected one fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsl/box.h"
#include "nsl/ensemble.h"
#include "nsl/quantum.h"
#include "nsl/signaling.h"
#include "nsl/spacetime.h"

using namespace nsl;

namespace {

constexpr double kExpectationTolerance = 1e-12;
constexpr double kCommutatorTolerance = 1e-12;
constexpr double kExactZeroTolerance = 1e-12;
constexpr double kBoostMax = 0.9;
constexpr int kRandomBoosts = 20;
constexpr std::int64_t kSequentialTrials = 10000;
constexpr std::int64_t kJammingTrials = 20000;
constexpr std::int64_t kOracleTrials = 100000;
constexpr int kOracleSeeds = 10;
constexpr int kOracleSeedsRequired = 9;
constexpr int kExpectedInconsistentPolicies = 4;
constexpr double kNoBudget = std::numeric_limits<double>::infinity();

const Label U = Label::kUnprimed;
const Label P = Label::kPrimed;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<void(Outcome &)> body;
};

ScenarioSpec spec(ScenarioKind kind, int n, Label choice, Mode mode = Mode::kExact, std::uint64_t seed = 0,
                  ReceiverObservable receiver = ReceiverObservable::kSum) {
    ScenarioSpec s;
    s.kind = kind;
    s.n = n;
    s.sender_choice = choice;
    s.mode = mode;
    s.seed = seed;
    s.trials = kOracleTrials;
    s.receiver = receiver;
    return s;
}

void ghz_identities(Outcome &o) {
    const auto ghz = ghz_state();
    const std::vector<std::pair<const char *, double>> stab = {{"YXY", 1}, {"YYX", 1}, {"XYY", 1}, {"XXX", -1}};
    for (const auto &[op, want] : stab) {
        double e = expectation(ghz, PauliObservable::parse(op));
        o.detail << " <" << op << ">=" << e;
        o.require(std::fabs(e - want) <= kExpectationTolerance, op);
    }
    double c1 = commutator_norm(PauliObservable::parse("XXI"), PauliObservable::parse("YYI"));
    double c2 = commutator_norm(PauliObservable::parse("XYI"), PauliObservable::parse("YXI"));
    o.detail << " |[XX,YY]|=" << c1 << " |[XY,YX]|=" << c2;
    o.require(c1 < kCommutatorTolerance && c2 < kCommutatorTolerance, "commutators");
}

void ghz_contradiction(Outcome &o) {
    auto found = ghz_assignment_search(kAllGhzConstraints);
    o.detail << " consistent assignments=" << found.size() << "/64";
    o.require(found.empty(), "no assignment");
}

void pr_signaling(Outcome &o) {
    const int n = 6;
    auto a = *run_pr_scenario(spec(ScenarioKind::kPRBox, n, U)).exact;
    auto ap = *run_pr_scenario(spec(ScenarioKind::kPRBox, n, P)).exact;
    auto sa = variance_signature(a);
    auto sap = variance_signature(ap);
    const Rational var_b = a.variance({1, 0});
    o.require(var_b == Rational(1, 6), "Var(B)=1/6");
    o.require(sa.var_diff == 0 && sa.var_sum == 4 * var_b, "signature under a");
    o.require(sap.var_sum == 0 && sap.var_diff == 4 * ap.variance({1, 0}), "signature under a'");
    Rational tv = total_variation(a, ap);
    o.require(tv == 1 - Rational(20, 64), "TV = 1 - C(6,3)/2^6");
    auto v = verdict(ScenarioKind::kPRBox, n, Mode::kExact);
    o.require(v.distinguishable, "distinguishable");
    o.detail << " Var(B+B')|a=" << to_string(sa.var_sum) << " Var(B-B')|a=" << to_string(sa.var_diff)
             << " Var(B+B')|a'=" << to_string(sap.var_sum) << " Var(B-B')|a'=" << to_string(sap.var_diff)
             << " TV=" << to_string(tv) << " distinguishable=" << v.distinguishable;
}

void pr_rare_events(Outcome &o) {
    const int n = 8;
    auto a = *run_pr_scenario(spec(ScenarioKind::kPRBox, n, U)).exact;
    auto ap = *run_pr_scenario(spec(ScenarioKind::kPRBox, n, P)).exact;
    Rational p_a = a.probability({n, n});
    Rational p_ap = ap.probability({n, -n});
    o.detail << " P(B=1,B'=1|a)=" << to_string(p_a) << " P(B=1,B'=-1|a')=" << to_string(p_ap);
    o.require(p_a == pow2(-n) && p_ap == pow2(-n), "2^-8");
}

void tsirelson_no_signaling(Outcome &o) {
    const int n = 6;
    for (auto receiver : {ReceiverObservable::kSum, ReceiverObservable::kDiff}) {
        auto a = run_tsirelson_scenario(spec(ScenarioKind::kTsirelson, n, U, Mode::kExact, 0, receiver));
        auto ap = run_tsirelson_scenario(spec(ScenarioKind::kTsirelson, n, P, Mode::kExact, 0, receiver));
        Rational tv = total_variation(a.exact->marginal({1}), ap.exact->marginal({1}));
        o.detail << (receiver == ReceiverObservable::kSum ? " TV(b+b')=" : " TV(b-b')=") << to_string(tv);
        o.require(std::fabs(to_double(tv)) <= kExactZeroTolerance, "Bob TV zero");
    }
    auto v = verdict(ScenarioKind::kTsirelson, n, Mode::kExact);
    o.detail << " distinguishable=" << v.distinguishable;
    o.require(!v.distinguishable, "not distinguishable");
}

void ghz_no_signaling(Outcome &o) {
    const int n = 5;
    auto x = *run_ghz_scenario(spec(ScenarioKind::kGHZ, n, U)).exact;
    auto y = *run_ghz_scenario(spec(ScenarioKind::kGHZ, n, P)).exact;
    auto both = [n](const std::vector<int> &s) { return s[0] == n && s[1] == n; };
    Rational px = x.probability_where(both), py = y.probability_where(both);
    Rational tv = total_variation(x.marginal({0, 1}), y.marginal({0, 1}));
    o.detail << " P|x=" << to_string(px) << " P|y=" << to_string(py) << " TV(A_x,B_x)=" << to_string(tv);
    o.require(px == pow2(-2 * n) && py == px, "2^-10 under both");
    o.require(tv == 0, "joint TV zero");
}

void commuting_products(Outcome &o) {
    const auto ghz = ghz_state();
    const std::vector<std::pair<std::vector<PauliObservable>, int>> cases = {
        {{PauliObservable::parse("XXI"), PauliObservable::parse("YYI")}, -1},
        {{PauliObservable::parse("XYI"), PauliObservable::parse("YXI")}, +1},
    };
    RandomStream rng(0);
    for (const auto &[obs, want] : cases) {
        std::int64_t hits = 0;
        for (std::int64_t t = 0; t < kSequentialTrials; ++t) {
            auto rec = sequential_measure(ghz, obs, rng);
            hits += rec[0].outcome * rec[1].outcome == want;
        }
        o.detail << " " << obs[0].to_string() << "*" << obs[1].to_string() << "=" << want << " in " << hits << "/"
                 << kSequentialTrials;
        o.require(hits == kSequentialTrials, "product in every trial");
    }
}

void jamming(Outcome &o) {
    auto x = run_jamming_scenario(1, JamBasis::kX, kJammingTrials, 0, false);
    auto z = run_jamming_scenario(1, JamBasis::kZ, kJammingTrials, 0, false);
    for (int j : {1, -1}) {
        const auto &b = x.bin(j);
        o.detail << " C|x,j=" << j << "=" << b.correlation();
        o.require(b.count > 0 && b.constraint_violations == 0 && b.sum_ab == -j * b.count, "x bin = -j");
    }
    const double bound = 4 / std::sqrt(double(kJammingTrials));
    for (int j : {1, -1}) {
        o.detail << " C|z,j=" << j << "=" << z.bin(j).correlation();
        o.require(std::fabs(z.bin(j).correlation()) < bound, "z bin uncorrelated");
    }
    auto unary = exact_jamming_unary_check();
    o.detail << " unary TV=" << to_string(*unary.exact_max_tv);
    o.require(unary.holds && *unary.exact_max_tv == 0, "unary exact");
}

void causal_geometry(Outcome &o) {
    const std::vector<std::pair<CausalConfig, bool>> configs = {
        {{{0, -1}, {0, 1}, {-0.5, 0}}, true},
        {{{0, -1}, {0, 1}, {2, 0}}, false},
        {{{0, -2}, {0, 2}, {1, 0}}, true},
    };
    std::mt19937_64 gen(0);
    std::uniform_real_distribution<double> beta(-kBoostMax, kBoostMax);
    for (const auto &[c, want] : configs) {
        bool holds = binary_condition(c).holds;
        o.detail << " " << holds;
        o.require(holds == want, "verdict");
    }
    int stable = 0;
    for (int k = 0; k < kRandomBoosts; ++k) {
        const double b = beta(gen);
        bool all = true;
        for (const auto &[c, want] : configs) {
            CausalConfig moved{nsl::boost(c.a_hat, b), nsl::boost(c.b_hat, b), nsl::boost(c.j_hat, b)};
            all = all && binary_condition(moved).holds == want;
        }
        stable += all;
    }
    o.detail << " boost-stable " << stable << "/" << kRandomBoosts;
    o.require(stable == kRandomBoosts, "boost invariance");
}

void causal_loop(Outcome &o) {
    auto trip = round_trip_chronology(0, 1, 0, 0.5);
    o.detail << " reply t=" << trip.reply_arrival.t << " retrocausal=" << trip.retrocausal;
    o.require(std::fabs(trip.reply_arrival.t + 0.5) < 1e-15 && trip.retrocausal, "retrocausal reply");
    auto loop = loop_analysis({DeviceMap::kEcho, DeviceMap::kInvert});
    o.detail << " echo/invert fixed points=" << loop.fixed_points.size();
    o.require(!loop.consistent && loop.fixed_points.empty(), "echo/invert inconsistent");
    const DeviceMap maps[] = {DeviceMap::kEcho, DeviceMap::kInvert, DeviceMap::kConst0, DeviceMap::kConst1};
    int inconsistent = 0;
    for (auto a : maps)
        for (auto b : maps) inconsistent += !loop_analysis({a, b}).consistent;
    o.detail << " inconsistent pairs=" << inconsistent << "/16";
    o.require(inconsistent == kExpectedInconsistentPolicies, "exactly 4 inconsistent pairs");
}

// Compares each receiver-accessible collective law against the exact pmf:
// the joint (B, B') for the PR box, (A, Bob) for the Tsirelson pairs, and
// the joint (A_x, B_x) plus Jim's own collective for GHZ.
void monte_carlo_oracle(Outcome &o) {
    const double threshold = 5 / std::sqrt(double(kOracleTrials));
    struct Case {
        ScenarioKind kind;
        ReceiverObservable receiver;
        std::vector<std::vector<std::size_t>> views;
    };
    const std::vector<Case> cases = {
        {ScenarioKind::kPRBox, ReceiverObservable::kSum, {{0, 1}}},
        {ScenarioKind::kTsirelson, ReceiverObservable::kSum, {{0, 1}}},
        {ScenarioKind::kTsirelson, ReceiverObservable::kDiff, {{0, 1}}},
        {ScenarioKind::kGHZ, ReceiverObservable::kSum, {{0, 1}, {2}}},
    };
    int scenarios = 0, passed = 0;
    double worst = 0;
    for (const auto &c : cases)
        for (Label choice : {U, P})
            for (int n = 1; n <= 6; ++n) {
                auto exact = *run_scenario(spec(c.kind, n, choice, Mode::kExact, 0, c.receiver)).exact;
                int good_seeds = 0;
                for (int seed = 0; seed < kOracleSeeds; ++seed) {
                    auto sampled = *run_scenario(spec(c.kind, n, choice, Mode::kMonteCarlo, seed, c.receiver)).sampled;
                    bool ok = true;
                    for (const auto &view : c.views) {
                        double tv = total_variation(sampled.marginal(view), exact.marginal(view));
                        worst = std::max(worst, tv);
                        ok = ok && tv < threshold;
                    }
                    good_seeds += ok;
                }
                ++scenarios;
                passed += good_seeds >= kOracleSeedsRequired;
            }
    o.detail << " scenarios passing=" << passed << "/" << scenarios << " worst TV=" << worst
             << " threshold=" << threshold;
    o.require(passed == scenarios, ">= 9 of 10 seeds in every scenario");
}

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria = {
        {1, "GHZ stabilizer and commutator identities", 1, ghz_identities},
        {2, "GHZ hidden-variable contradiction", 1, ghz_contradiction},
        {3, "PR-box classical-limit signaling", 1, pr_signaling},
        {4, "PR rare-event probabilities", kNoBudget, pr_rare_events},
        {5, "Tsirelson no-signaling", 1, tsirelson_no_signaling},
        {6, "GHZ signaling failure", 10, ghz_no_signaling},
        {7, "commuting pairwise products", 5, commuting_products},
        {8, "jamming statistics", 5, jamming},
        {9, "causal geometry", 1, causal_geometry},
        {10, "causal loop", 1, causal_loop},
        {11, "Monte Carlo vs exact oracle", 120, monte_carlo_oracle},
    };
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        std::string arg = argv[k];
        if (arg == "--only" && k + 1 < argc) {
            only = std::atoi(argv[++k]);
        } else {
            std::fprintf(stderr, "usage: %s [--only K]\n", argv[0]);
            return 2;
        }
    }
    int failures = 0, ran = 0;
    for (const auto &c : criteria) {
        if (only && c.id != only) continue;
        ++ran;
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(seconds < c.budget_seconds, "runtime budget");
        std::printf("%s criterion %2d: %s (%.3fs)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                    o.detail.str().c_str());
        failures += !o.pass;
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return failures ? 1 : 0;
}
