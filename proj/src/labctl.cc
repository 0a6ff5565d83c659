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

#include "nsl/labctl.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "nsl/box.h"
#include "nsl/quantum.h"
#include "nsl/signaling.h"
#include "nsl/spacetime.h"

namespace nsl {

namespace {

using nlohmann::json;

constexpr int kMaxSampledRounds = 100000;

json exact_json(const Rational &r) {
    return {{"exact", to_string(r)}, {"value", to_double(r)}};
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_collective(int sum, int n) {
    return format_double(static_cast<double>(sum) / n);
}

json header(const RunConfig &config) {
    return {
        {"schema_version", kReportSchemaVersion},
        {"command", config.subcommand},
        {"config", config.to_json()},
    };
}

// Records a named check; deterministic ones that fail are also listed as
// invariant violations.
struct Checks {
    json checks = json::object();
    json violations = json::array();

    void add(const std::string &name, bool ok, bool invariant = false) {
        checks[name] = ok;
        if (invariant && !ok) violations.push_back(name);
    }

    void attach(json &report) const {
        report["checks"] = checks;
        report["invariant_violations"] = violations;
    }
};

ScenarioSpec spec_for(const RunConfig &config, ScenarioKind kind, Label choice,
                      ReceiverObservable receiver = ReceiverObservable::kSum) {
    ScenarioSpec spec;
    spec.kind = kind;
    spec.n = config.n;
    spec.sender_choice = choice;
    spec.trials = config.trials;
    spec.seed = config.seed;
    spec.mode = config.mode;
    spec.receiver = receiver;
    return spec;
}

Rational binomial(int n, int k) {
    BigInt c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return Rational(c);
}

// TV between B' = B and B' = -B: the laws overlap only at B = 0.
Rational pr_joint_tv_closed_form(int n) {
    if (n % 2) return 1;
    return 1 - binomial(n, n / 2) * pow2(-n);
}

template <class Keys>
bool all_keys(const Keys &keys, const std::function<bool(const std::vector<int> &)> &pred) {
    for (const auto &kv : keys) {
        if (!pred(kv.first)) return false;
    }
    return true;
}

std::string separation(const SpacetimeEvent &p, const SpacetimeEvent &q) {
    double dt = q.t - p.t, dx = q.x - p.x;
    double s = dt * dt - dx * dx;
    if (s > 0) return "timelike";
    if (s < 0) return "spacelike";
    return "lightlike";
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

// Rows for one scenario case in the plot-ready CSV layout.
void append_csv_rows(std::ostringstream &out, const std::string &label, const ScenarioResult &result) {
    if (result.exact) {
        for (const auto &[key, p] : result.exact->pmf()) {
            out << label;
            for (int s : key) out << ',' << format_collective(s, result.spec.n);
            out << ',' << numerator(p) << ',' << denominator(p) << '\n';
        }
        return;
    }
    std::int64_t trial = 0;
    for (const auto &sample : result.sampled->samples) {
        out << label << ',' << trial++;
        for (int s : sample) out << ',' << format_collective(s, result.spec.n);
        out << '\n';
    }
}

std::string csv_header(const RunConfig &config, const std::vector<std::string> &variables) {
    std::string h = config.mode == Mode::kExact ? "case" : "case,trial";
    for (const auto &v : variables) h += "," + v;
    if (config.mode == Mode::kExact) h += ",numerator,denominator";
    return h + "\n";
}

}  // namespace

json RunConfig::to_json() const {
    json j = {
        {"n", n},
        {"trials", trials},
        {"seed", seed},
        {"mode", nsl::to_string(mode)},
        {"format", format},
        {"out", out.empty() ? json(nullptr) : json(out)},
    };
    if (subcommand == "jamming") {
        j["jim"] = nsl::to_string(jim);
        j.erase("mode");
    }
    if (subcommand == "causal") {
        j["config"] = config;
    }
    return j;
}

void validate(const RunConfig &config) {
    static const std::vector<std::string> known = {"pr-signal", "tsirelson", "ghz-signal",
                                                   "ghz-algebra", "jamming", "causal"};
    if (std::find(known.begin(), known.end(), config.subcommand) == known.end()) {
        throw std::invalid_argument("unknown subcommand '" + config.subcommand + "'");
    }
    if (config.n < 1) {
        throw std::invalid_argument("--n must be at least 1");
    }
    if (config.mode == Mode::kExact && config.n > kMaxExactRounds && config.subcommand != "jamming") {
        throw std::invalid_argument("exact mode supports --n up to " + std::to_string(kMaxExactRounds));
    }
    if (config.n > kMaxSampledRounds) {
        throw std::invalid_argument("--n must be at most " + std::to_string(kMaxSampledRounds));
    }
    if (config.trials < 2) {
        throw std::invalid_argument("--trials must be at least 2");
    }
    if (config.format != "json" && config.format != "csv") {
        throw std::invalid_argument("--format must be json or csv");
    }
    if (config.format == "csv" && (config.subcommand == "ghz-algebra" || config.subcommand == "causal")) {
        throw std::invalid_argument(config.subcommand + " only produces json");
    }
    if (config.subcommand == "causal" && config.config.empty()) {
        throw std::invalid_argument("causal needs --config PATH");
    }
}

json cmd_pr_signal(const RunConfig &config) {
    validate(config);
    json report = header(config);
    Checks checks;
    const int n = config.n;
    const auto v = verdict(ScenarioKind::kPRBox, n, config.mode, config.trials, config.seed);
    report["verdict"] = v.to_json();

    const Rational closed_tv = pr_joint_tv_closed_form(n);
    json signatures = json::object();
    json distributions = json::object();
    for (Label choice : {Label::kUnprimed, Label::kPrimed}) {
        const std::string name = setting_name({Party::kAlice, choice});
        auto result = run_pr_scenario(spec_for(config, ScenarioKind::kPRBox, choice));
        const int sign = choice == Label::kUnprimed ? 1 : -1;
        auto tracks = [sign](const std::vector<int> &s) { return s[1] == sign * s[0]; };
        const std::string relation = choice == Label::kUnprimed ? "b_prime_equals_b_under_a"
                                                                : "b_prime_equals_minus_b_under_a_prime";
        if (result.exact) {
            const auto &law = *result.exact;
            checks.add("pmf_sums_to_one_under_" + name, law.total() == 1, true);
            checks.add(relation, all_keys(law.pmf(), tracks), true);
            auto sig = variance_signature(law);
            signatures[name] = {{"var_sum", exact_json(sig.var_sum)}, {"var_diff", exact_json(sig.var_diff)}};
            distributions[name] = law.to_json();
            const Rational four_var_b = 4 * law.variance({1, 0});
            if (choice == Label::kUnprimed) {
                checks.add("var_diff_zero_under_a", sig.var_diff == 0, true);
                checks.add("var_sum_equals_4_var_b_under_a", sig.var_sum == four_var_b && four_var_b == Rational(4, n),
                           true);
            } else {
                checks.add("var_sum_zero_under_a_prime", sig.var_sum == 0, true);
                checks.add("var_diff_equals_4_var_b_under_a_prime",
                           sig.var_diff == four_var_b && four_var_b == Rational(4, n), true);
            }
        } else {
            const auto &law = *result.sampled;
            checks.add(relation, all_keys(law.counts(), tracks), true);
            auto sig = variance_signature(law);
            signatures[name] = {{"var_sum", sig.var_sum}, {"var_diff", sig.var_diff}};
        }
    }
    report["variance_signatures"] = signatures;

    // Rare events: B = 1 = B' under a, and B = 1 = -B' under a'.
    auto r_a = run_pr_scenario(spec_for(config, ScenarioKind::kPRBox, Label::kUnprimed));
    auto r_ap = run_pr_scenario(spec_for(config, ScenarioKind::kPRBox, Label::kPrimed));
    auto both_up = [n](const std::vector<int> &s) { return s[0] == n && s[1] == n; };
    auto up_down = [n](const std::vector<int> &s) { return s[0] == n && s[1] == -n; };
    if (config.mode == Mode::kExact) {
        Rational p_a = r_a.exact->probability_where(both_up);
        Rational p_ap = r_ap.exact->probability_where(up_down);
        report["rare_events"] = {
            {"P(B=1,B'=1|a)", exact_json(p_a)},
            {"P(B=1,B'=1|a')", exact_json(r_ap.exact->probability_where(both_up))},
            {"P(B=1,B'=-1|a')", exact_json(p_ap)},
            {"2^-N", exact_json(pow2(-n))},
        };
        checks.add("rare_events_equal_2^-N", p_a == pow2(-n) && p_ap == pow2(-n), true);
        checks.add("tv_equals_closed_form", v.exact_tv && *v.exact_tv == closed_tv, true);
        report["distributions"] = distributions;
    } else {
        report["rare_events"] = {
            {"P(B=1,B'=1|a)", r_a.sampled->frequency_where(both_up)},
            {"P(B=1,B'=-1|a')", r_ap.sampled->frequency_where(up_down)},
            {"2^-N", to_double(pow2(-n))},
        };
        checks.add("tv_within_threshold_of_closed_form", std::fabs(v.tv - to_double(closed_tv)) <= v.threshold);
    }
    report["tv_closed_form"] = exact_json(closed_tv);
    checks.add("distinguishable", v.distinguishable);
    checks.attach(report);
    return report;
}

json cmd_tsirelson(const RunConfig &config) {
    validate(config);
    json report = header(config);
    Checks checks;
    const int n = config.n;
    const auto v = verdict(ScenarioKind::kTsirelson, n, config.mode, config.trials, config.seed);
    report["verdict"] = v.to_json();

    const DichotomicBox box = make_tsirelson_box();
    const double c_ab = correlation(box, {Label::kUnprimed, Label::kUnprimed});
    const double c_abp = correlation(box, {Label::kUnprimed, Label::kPrimed});
    const double c_apb = correlation(box, {Label::kPrimed, Label::kUnprimed});
    const double c_apbp = correlation(box, {Label::kPrimed, Label::kPrimed});
    const double chsh = c_ab + c_abp + c_apb - c_apbp;
    const auto ns = check_no_signaling(box);
    report["correlations"] = {
        {"C(a,b)", c_ab}, {"C(a,b')", c_abp}, {"C(a',b)", c_apb}, {"C(a',b')", c_apbp}, {"chsh", chsh},
    };
    report["no_signaling"] = {{"holds", ns.holds}, {"max_marginal_deviation", ns.max_marginal_deviation}};
    checks.add("chsh_saturates_tsirelson_bound", std::fabs(chsh - 2 * std::numbers::sqrt2) <= 1e-12);
    checks.add("box_no_signaling", ns.holds);

    json variances = json::object();
    bool variances_match = true;
    for (Label choice : {Label::kUnprimed, Label::kPrimed}) {
        const std::string name = setting_name({Party::kAlice, choice});
        for (auto receiver : {ReceiverObservable::kSum, ReceiverObservable::kDiff}) {
            const std::string obs = receiver == ReceiverObservable::kSum ? "(b+b')/sqrt2" : "(b-b')/sqrt2";
            auto result = run_tsirelson_scenario(spec_for(config, ScenarioKind::kTsirelson, choice, receiver));
            if (result.exact) {
                checks.add("pmf_sums_to_one_under_" + name + "_" + obs, result.exact->total() == 1, true);
                Rational var = result.exact->marginal({1}).variance({1});
                variances[name][obs] = exact_json(var);
                variances_match = variances_match && var == Rational(1, n);
            } else {
                variances[name][obs] = result.sampled->marginal({1}).sample_variance({1});
            }
        }
    }
    report["bob_variances"] = variances;
    if (config.mode == Mode::kExact) {
        checks.add("bob_variances_all_1_over_n", variances_match, true);
        checks.add("bob_tv_exactly_zero", v.exact_tv && *v.exact_tv == 0, true);
    } else {
        checks.add("bob_tv_below_threshold", v.tv <= v.threshold);
    }
    checks.add("not_distinguishable", !v.distinguishable);
    checks.attach(report);
    return report;
}

json cmd_ghz_signal(const RunConfig &config) {
    validate(config);
    json report = header(config);
    Checks checks;
    const int n = config.n;
    const auto v = verdict(ScenarioKind::kGHZ, n, config.mode, config.trials, config.seed);
    report["verdict"] = v.to_json();

    auto saturated = [n](const std::vector<int> &s) { return s[0] == n && s[1] == n; };
    auto jim_all_minus = [n](const std::vector<int> &s) { return s[2] == -n; };
    json per_choice = json::object();
    json trace = json::object();
    for (Label choice : {Label::kUnprimed, Label::kPrimed}) {
        const std::string name = setting_name({Party::kJim, choice});
        auto spec = spec_for(config, ScenarioKind::kGHZ, choice);
        spec.keep_rounds = true;
        auto result = run_ghz_scenario(spec);

        json rounds = json::array();
        bool xxx_every_round = true;
        for (const auto &[o, p] : result.round.outcomes) {
            const int product = o[0] * o[1] * o[2];
            rounds.push_back({{"a_x", o[0]}, {"b_x", o[1]}, {"j", o[2]}, {"probability", to_string(p)},
                              {"product", product}});
            xxx_every_round = xxx_every_round && product == -1;
        }
        trace[name] = rounds;

        if (result.exact) {
            const auto &law = *result.exact;
            checks.add("pmf_sums_to_one_under_" + name, law.total() == 1, true);
            per_choice[name] = {
                {"P(A_x=1,B_x=1)", exact_json(law.probability_where(saturated))},
                {"P(A_x=1,B_x=1|J=-1)", exact_json(law.conditional(saturated, jim_all_minus))},
                {"P(J=-1,A_x=1)", exact_json(law.probability_where([n](const std::vector<int> &s) {
                     return s[2] == -n && s[0] == n;
                 }))},
            };
        } else {
            const auto &law = *result.sampled;
            per_choice[name] = {{"P(A_x=1,B_x=1)", law.frequency_where(saturated)}};
            if (choice == Label::kUnprimed && !law.round_records.empty()) {
                bool ok = true;
                for (const auto &o : law.round_records) ok = ok && o[0] * o[1] * o[2] == -1;
                checks.add("sampled_rounds_satisfy_xxx_constraint", ok, true);
            }
        }
        if (choice == Label::kUnprimed) {
            checks.add("xxx_constraint_every_round", xxx_every_round, true);
        }
    }
    report["probabilities"] = per_choice;
    report["round_trace"] = trace;
    if (config.mode == Mode::kExact) {
        checks.add("probabilities_rationally_equal", *v.exact_value_0 == *v.exact_value_1, true);
        checks.add("probability_equals_2^-2N", *v.exact_value_0 == pow2(-2 * n), true);
        checks.add("joint_tv_exactly_zero", *v.exact_tv == 0, true);
    } else {
        checks.add("probabilities_within_threshold", std::fabs(v.value_0 - v.value_1) <= v.threshold);
        checks.add("joint_tv_below_threshold", v.tv <= v.threshold);
    }
    checks.add("not_distinguishable", !v.distinguishable);
    checks.attach(report);
    return report;
}

json cmd_ghz_algebra(const RunConfig &config) {
    validate(config);
    json report = header(config);
    Checks checks;
    const PureState ghz = ghz_state();

    const std::vector<std::pair<std::string, int>> stabilizers = {{"YXY", 1}, {"YYX", 1}, {"XYY", 1}, {"XXX", -1}};
    json stab = json::array();
    bool stab_ok = true;
    for (const auto &[op, expected] : stabilizers) {
        double e = expectation(ghz, PauliObservable::parse(op));
        stab.push_back({{"operator", op}, {"expectation", e}, {"expected", expected}});
        stab_ok = stab_ok && std::fabs(e - expected) <= 1e-12;
    }
    report["stabilizers"] = stab;
    checks.add("stabilizer_expectations_within_1e-12", stab_ok, true);

    const std::vector<std::array<std::string, 2>> pairs = {{"XXI", "YYI"}, {"XYI", "YXI"}};
    json comm = json::array();
    bool comm_ok = true;
    for (const auto &[p, q] : pairs) {
        double norm = commutator_norm(PauliObservable::parse(p), PauliObservable::parse(q));
        comm.push_back({{"pair", {p, q}}, {"norm", norm}});
        comm_ok = comm_ok && norm < 1e-12;
    }
    report["commutators"] = comm;
    checks.add("commutator_norms_below_1e-12", comm_ok, true);

    // <psi| P Q |psi> for the commuting pairs; equals -<ZZI> and +<ZZI>.
    json products = json::array();
    const std::vector<Complex> psi(ghz.amplitudes().begin(), ghz.amplitudes().end());
    const double zz = expectation(ghz, PauliObservable::parse("ZZI"));
    const std::array<int, 2> expected_products = {-1, 1};
    bool products_ok = true;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto pq = apply_observable(PauliObservable::parse(pairs[k][0]), apply_observable(PauliObservable::parse(pairs[k][1]), psi));
        Complex e = 0;
        for (std::size_t i = 0; i < psi.size(); ++i) e += std::conj(psi[i]) * pq[i];
        products.push_back({{"pair", {pairs[k][0], pairs[k][1]}},
                            {"expectation_of_product", e.real()},
                            {"expected", expected_products[k]}});
        products_ok = products_ok && std::fabs(e.real() - expected_products[k]) <= 1e-12 && std::fabs(e.imag()) <= 1e-12;
    }
    report["pairwise_products"] = {{"operators", products}, {"ZZI_expectation", zz}};
    checks.add("pairwise_product_identities", products_ok && std::fabs(zz - 1) <= 1e-12, true);

    // Sequential measurement of each commuting pair.
    json sampled = json::array();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::vector<PauliObservable> obs = {PauliObservable::parse(pairs[k][0]),
                                                  PauliObservable::parse(pairs[k][1])};
        const std::int64_t chunks = (config.trials + kTrialsPerStream - 1) / kTrialsPerStream;
        std::vector<std::int64_t> matches(static_cast<std::size_t>(chunks), 0);
        for_each_trial_chunk(config.trials, [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
            RandomStream rng(config.seed + k, static_cast<std::uint64_t>(chunk));
            for (std::int64_t t = begin; t < end; ++t) {
                auto rec = sequential_measure(ghz, obs, rng);
                if (rec[0].outcome * rec[1].outcome == expected_products[k]) ++matches[static_cast<std::size_t>(chunk)];
            }
        });
        std::int64_t total = 0;
        for (auto m : matches) total += m;
        sampled.push_back({{"pair", {pairs[k][0], pairs[k][1]}},
                           {"trials", config.trials},
                           {"matching_product", total},
                           {"expected_product", expected_products[k]}});
        checks.add("sequential_products_always_" + std::string(expected_products[k] < 0 ? "minus_one" : "plus_one"),
                   total == config.trials, true);
    }
    report["sequential_measurements"] = sampled;

    const auto all = ghz_assignment_search(kAllGhzConstraints);
    const auto without_xxx = ghz_assignment_search(kXYY | kYXY | kYYX);
    const auto without_yyx = ghz_assignment_search(kXXX | kXYY | kYXY);
    report["assignment_search"] = {
        {"searched", 64},
        {"all_four_constraints", all.size()},
        {"without_xxx", without_xxx.size()},
        {"without_yyx", without_yyx.size()},
    };
    checks.add("no_consistent_assignment", all.empty(), true);
    checks.attach(report);
    return report;
}

json cmd_jamming(const RunConfig &config) {
    validate(config);
    json report = header(config);
    Checks checks;
    const auto run = run_jamming_scenario(config.n, config.jim, config.trials, config.seed, false);
    const JamBasis other_basis = config.jim == JamBasis::kX ? JamBasis::kZ : JamBasis::kX;
    const auto other = run_jamming_scenario(config.n, other_basis, config.trials, config.seed, false);

    auto bin_json = [](const JammingBin &b) {
        return json{
            {"count", b.count},
            {"correlation", b.correlation()},
            {"mean_a_x", b.count ? static_cast<double>(b.sum_a) / static_cast<double>(b.count) : 0.0},
            {"mean_b_x", b.count ? static_cast<double>(b.sum_b) / static_cast<double>(b.count) : 0.0},
            {"constraint_violations", b.constraint_violations},
            {"uncorrelated_bound", b.count ? 4.0 / std::sqrt(static_cast<double>(b.count)) : 0.0},
        };
    };
    report["bins"] = {{"+1", bin_json(run.bin(1))}, {"-1", bin_json(run.bin(-1))}};
    report["unbinned"] = bin_json(run.all);

    const auto exact = exact_jamming_unary_check();
    const auto& [under_x, under_z] = config.jim == JamBasis::kX ? std::pair{&run, &other} : std::pair{&other, &run};
    const auto sampled = unary_condition_check(*under_x, *under_z);
    report["unary_condition"] = {
        {"exact", {{"holds", exact.holds}, {"max_marginal_tv", to_string(*exact.exact_max_tv)}}},
        {"sampled", {{"holds", sampled.holds}, {"max_marginal_tv", sampled.max_marginal_tv},
                     {"threshold", sampled.threshold}}},
    };

    if (config.jim == JamBasis::kX) {
        for (int j : {1, -1}) {
            const auto &b = run.bin(j);
            checks.add(std::string("bin_") + (j > 0 ? "plus" : "minus") + "_correlation_equals_minus_j",
                       b.constraint_violations == 0 && (b.count == 0 || b.correlation() == -j), true);
        }
    } else {
        for (int j : {1, -1}) {
            const auto &b = run.bin(j);
            checks.add(std::string("bin_") + (j > 0 ? "plus" : "minus") + "_uncorrelated",
                       b.count == 0 || std::fabs(b.correlation()) < 4.0 / std::sqrt(static_cast<double>(b.count)));
        }
    }
    checks.add("unbinned_uncorrelated",
               std::fabs(run.all.correlation()) < 4.0 / std::sqrt(static_cast<double>(run.all.count)));
    checks.add("unary_condition_exact", exact.holds, true);
    checks.add("unary_condition_sampled", sampled.holds);
    checks.attach(report);
    return report;
}

json cmd_causal(const RunConfig &config) {
    validate(config);
    const json input = read_json_file(config.config);
    CausalConfig causal;
    double beta = 0.5;
    DevicePolicy policy{DeviceMap::kEcho, DeviceMap::kInvert};
    try {
        causal = {event_from_json(input.at("a_hat")), event_from_json(input.at("b_hat")),
                  event_from_json(input.at("j_hat"))};
        if (input.contains("beta")) beta = input.at("beta").get<double>();
        if (input.contains("alice_map")) policy.alice_map = parse_device_map(input.at("alice_map").get<std::string>());
        if (input.contains("bob_map")) policy.bob_map = parse_device_map(input.at("bob_map").get<std::string>());
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("malformed causal config: ") + e.what());
    }
    const Boost frame(beta);  // validates |beta| < 1

    json report = header(config);
    Checks checks;
    report["input"] = {
        {"a_hat", to_json(causal.a_hat)}, {"b_hat", to_json(causal.b_hat)}, {"j_hat", to_json(causal.j_hat)},
        {"beta", beta}, {"alice_map", to_string(policy.alice_map)}, {"bob_map", to_string(policy.bob_map)},
    };

    const auto binary = binary_condition(causal);
    report["binary_condition"] = {{"holds", binary.holds}, {"overlap_apex", to_json(binary.overlap_apex)}};
    report["separations"] = {
        {"a_hat-b_hat", separation(causal.a_hat, causal.b_hat)},
        {"j_hat-a_hat", separation(causal.j_hat, causal.a_hat)},
        {"j_hat-b_hat", separation(causal.j_hat, causal.b_hat)},
        {"j_hat_later_than_a_hat_and_b_hat", causal.j_hat.t > causal.a_hat.t && causal.j_hat.t > causal.b_hat.t},
    };

    bool invariant = true;
    for (double b : {-0.9, -0.5, 0.5, 0.9}) {
        Boost boost_b(b);
        CausalConfig boosted{boost_b(causal.a_hat), boost_b(causal.b_hat), boost_b(causal.j_hat)};
        invariant = invariant && binary_condition(boosted).holds == binary.holds;
    }
    checks.add("binary_condition_boost_invariant", invariant);

    const auto trip = round_trip_chronology(causal.a_hat.x, causal.b_hat.x, causal.a_hat.t, beta);
    report["round_trip"] = {
        {"bob_reception", to_json(trip.bob_reception)},
        {"reply_arrival", to_json(trip.reply_arrival)},
        {"retrocausal", trip.retrocausal},
    };
    const auto loop = loop_analysis(policy);
    json fixed = json::array();
    for (const auto &[ia, ib] : loop.fixed_points) fixed.push_back({ia, ib});
    report["loop_analysis"] = {{"consistent", loop.consistent}, {"fixed_points", fixed}};
    report["self_contradictory_loop"] = trip.retrocausal && !loop.consistent;
    checks.attach(report);
    return report;
}

std::string csv_report(const RunConfig &config) {
    validate(config);
    std::ostringstream out;
    if (config.subcommand == "jamming") {
        auto run = run_jamming_scenario(config.n, config.jim, config.trials, config.seed, true);
        out << "index,jim_outcome,a_x,b_x\n";
        std::int64_t i = 0;
        for (const auto &r : run.records) {
            out << i++ << ',' << r.jim_outcome << ',' << r.a_x << ',' << r.b_x << '\n';
        }
        return out.str();
    }
    auto run = [&](ScenarioKind kind, Label choice, ReceiverObservable receiver) {
        auto spec = spec_for(config, kind, choice, receiver);
        spec.keep_samples = true;
        return run_scenario(spec);
    };
    if (config.subcommand == "pr-signal") {
        out << csv_header(config, {"B", "B'"});
        for (Label c : {Label::kUnprimed, Label::kPrimed}) {
            append_csv_rows(out, setting_name({Party::kAlice, c}), run(ScenarioKind::kPRBox, c, ReceiverObservable::kSum));
        }
    } else if (config.subcommand == "tsirelson") {
        out << csv_header(config, {"A", "Bob"});
        for (Label c : {Label::kUnprimed, Label::kPrimed}) {
            for (auto r : {ReceiverObservable::kSum, ReceiverObservable::kDiff}) {
                std::string label = setting_name({Party::kAlice, c}) + (r == ReceiverObservable::kSum ? "|sum" : "|diff");
                append_csv_rows(out, label, run(ScenarioKind::kTsirelson, c, r));
            }
        }
    } else if (config.subcommand == "ghz-signal") {
        out << csv_header(config, {"A_x", "B_x", "J"});
        for (Label c : {Label::kUnprimed, Label::kPrimed}) {
            append_csv_rows(out, setting_name({Party::kJim, c}), run(ScenarioKind::kGHZ, c, ReceiverObservable::kSum));
        }
    } else {
        throw std::invalid_argument(config.subcommand + " only produces json");
    }
    return out.str();
}

int run_labctl(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"labctl: no-signaling box, GHZ and causal-geometry experiments"};
    app.require_subcommand(1);
    RunConfig config;
    std::string mode = "exact";
    std::string jim = "x";

    auto add_common = [&](CLI::App *sub, bool scenario) {
        sub->add_option("--n", config.n, "rounds (pairs or triplets) per run")->capture_default_str();
        sub->add_option("--trials", config.trials, "Monte Carlo trials")->capture_default_str();
        sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
        sub->add_option("--out", config.out, "write the report to PATH instead of stdout");
        sub->add_option("--format", config.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        if (scenario) {
            sub->add_option("--mode", mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
        }
    };
    add_common(app.add_subcommand("pr-signal", "PR-box classical-limit signaling test"), true);
    add_common(app.add_subcommand("tsirelson", "Tsirelson-bound quantum correlations, no signaling"), true);
    add_common(app.add_subcommand("ghz-signal", "GHZ attempt by Jim to signal Alice and Bob"), true);
    add_common(app.add_subcommand("ghz-algebra", "GHZ stabilizer, commutator and assignment checks"), false);
    auto *jam = app.add_subcommand("jamming", "Jim jams Alice and Bob's pairs via GHZ triplets");
    add_common(jam, false);
    jam->add_option("--jim", jim, "Jim's basis, x or z")->check(CLI::IsMember({"x", "z"}))->capture_default_str();
    auto *causal = app.add_subcommand("causal", "light-cone, binary-condition and causal-loop geometry");
    add_common(causal, false);
    causal->add_option("--config", config.config, "geometry config JSON")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }
    config.subcommand = app.get_subcommands().front()->get_name();
    config.mode = mode == "mc" ? Mode::kMonteCarlo : Mode::kExact;
    config.jim = jim == "z" ? JamBasis::kZ : JamBasis::kX;

    std::string body;
    bool violated = false;
    try {
        validate(config);
        if (config.format == "csv") {
            body = csv_report(config);
        } else {
            json report;
            if (config.subcommand == "pr-signal") report = cmd_pr_signal(config);
            else if (config.subcommand == "tsirelson") report = cmd_tsirelson(config);
            else if (config.subcommand == "ghz-signal") report = cmd_ghz_signal(config);
            else if (config.subcommand == "ghz-algebra") report = cmd_ghz_algebra(config);
            else if (config.subcommand == "jamming") report = cmd_jamming(config);
            else report = cmd_causal(config);
            violated = !report["invariant_violations"].empty();
            body = report.dump(2) + "\n";
        }
    } catch (const std::invalid_argument &e) {
        err << "labctl: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception &e) {
        err << "labctl: internal error: " << e.what() << "\n";
        return kExitInvariantViolation;
    }

    if (config.out.empty()) {
        out << body;
    } else {
        std::ofstream file(config.out);
        if (!file) {
            err << "labctl: cannot write '" << config.out << "'\n";
            return kExitConfigError;
        }
        file << body;
    }
    if (violated) {
        err << "labctl: invariant violation, see invariant_violations in the report\n";
        return kExitInvariantViolation;
    }
    return kExitOk;
}

}  // namespace nsl
