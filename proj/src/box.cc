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

#include "nsl/box.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsl {

namespace {

void validate_shape(int parties, std::size_t rows, const auto &row_size) {
    if (parties != 2 && parties != 3) {
        throw std::invalid_argument("a box has 2 or 3 parties, got " + std::to_string(parties));
    }
    const std::size_t expected = std::size_t{1} << parties;
    if (rows != expected) {
        throw std::invalid_argument("expected " + std::to_string(expected) + " setting rows, got " +
                                    std::to_string(rows));
    }
    for (std::size_t r = 0; r < rows; ++r) {
        if (row_size(r) != expected) {
            throw std::invalid_argument("row " + std::to_string(r) + " has " + std::to_string(row_size(r)) +
                                        " outcome entries, expected " + std::to_string(expected));
        }
    }
}

int outcome_bit(int outcome) {
    if (outcome == 1) return 0;
    if (outcome == -1) return 1;
    throw std::invalid_argument("outcomes are +1 or -1, got " + std::to_string(outcome));
}

// Projects `out` onto the sub-tuple of parties in `mask`, Alice slowest.
std::size_t masked_index(std::size_t outcome, int parties, unsigned mask) {
    std::size_t idx = 0;
    for (int k = 0; k < parties; ++k) {
        if (mask & (1u << k)) {
            idx = (idx << 1) | ((outcome >> (parties - 1 - k)) & 1u);
        }
    }
    return idx;
}

template <class T>
std::vector<T> marginal_of_row(const std::vector<T> &row, int parties, unsigned mask) {
    std::vector<T> out(std::size_t{1} << std::popcount(mask), T(0));
    for (std::size_t o = 0; o < row.size(); ++o) {
        out[masked_index(o, parties, mask)] += row[o];
    }
    return out;
}

// Maximum spread of the marginal of `mask` over settings that agree on the
// parties in `mask`.
template <class T, class Abs>
T max_marginal_spread(const std::vector<std::vector<T>> &table, int parties, unsigned mask, Abs abs) {
    T worst(0);
    const std::size_t rows = table.size();
    for (std::size_t r1 = 0; r1 < rows; ++r1) {
        for (std::size_t r2 = r1 + 1; r2 < rows; ++r2) {
            if (masked_index(r1, parties, mask) != masked_index(r2, parties, mask)) {
                continue;
            }
            auto m1 = marginal_of_row(table[r1], parties, mask);
            auto m2 = marginal_of_row(table[r2], parties, mask);
            for (std::size_t k = 0; k < m1.size(); ++k) {
                T d = abs(m1[k] - m2[k]);
                if (d > worst) worst = d;
            }
        }
    }
    return worst;
}

std::vector<Complex> project_onto(const PauliObservable &obs, int outcome, const std::vector<Complex> &v) {
    auto ov = apply_observable(obs, v);
    std::vector<Complex> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        out[k] = 0.5 * (v[k] + static_cast<double>(outcome) * ov[k]);
    }
    return out;
}

}  // namespace

char label_code(Label label) {
    return label == Label::kUnprimed ? 'u' : 'p';
}

std::string setting_name(Setting setting) {
    const bool primed = setting.label == Label::kPrimed;
    switch (setting.party) {
        case Party::kAlice:
            return primed ? "a'" : "a";
        case Party::kBob:
            return primed ? "b'" : "b";
        case Party::kJim:
            return primed ? "y" : "x";
    }
    throw std::logic_error("unreachable");
}

DichotomicBox::DichotomicBox(int parties, RealTable table, std::optional<ExactTable> exact)
    : parties_(parties), table_(std::move(table)), exact_(std::move(exact)) {}

DichotomicBox DichotomicBox::from_exact(int parties, ExactTable table) {
    validate_shape(parties, table.size(), [&](std::size_t r) { return table[r].size(); });
    RealTable real(table.size());
    for (std::size_t r = 0; r < table.size(); ++r) {
        Rational sum = 0;
        for (const auto &p : table[r]) {
            if (p < 0 || p > 1) {
                throw std::invalid_argument("probability " + to_string(p) + " outside [0,1]");
            }
            sum += p;
            real[r].push_back(to_double(p));
        }
        if (sum != 1) {
            throw std::invalid_argument("row " + std::to_string(r) + " sums to " + to_string(sum));
        }
    }
    return DichotomicBox(parties, std::move(real), std::move(table));
}

DichotomicBox DichotomicBox::from_real(int parties, RealTable table) {
    validate_shape(parties, table.size(), [&](std::size_t r) { return table[r].size(); });
    for (std::size_t r = 0; r < table.size(); ++r) {
        double sum = 0;
        for (double p : table[r]) {
            if (!(p >= -kNormalizationTolerance && p <= 1 + kNormalizationTolerance)) {
                throw std::invalid_argument("probability " + std::to_string(p) + " outside [0,1]");
            }
            sum += p;
        }
        if (std::fabs(sum - 1.0) > kNormalizationTolerance) {
            throw std::invalid_argument("row " + std::to_string(r) + " sums to " + std::to_string(sum));
        }
    }
    return DichotomicBox(parties, std::move(table), std::nullopt);
}

std::size_t DichotomicBox::setting_index(const std::vector<Label> &settings) const {
    if (settings.size() != static_cast<std::size_t>(parties_)) {
        throw std::invalid_argument("expected " + std::to_string(parties_) + " settings, got " +
                                    std::to_string(settings.size()));
    }
    std::size_t idx = 0;
    for (Label l : settings) {
        idx = (idx << 1) | static_cast<std::size_t>(l);
    }
    return idx;
}

std::size_t DichotomicBox::outcome_index(const std::vector<int> &outcomes) const {
    if (outcomes.size() != static_cast<std::size_t>(parties_)) {
        throw std::invalid_argument("expected " + std::to_string(parties_) + " outcomes, got " +
                                    std::to_string(outcomes.size()));
    }
    std::size_t idx = 0;
    for (int o : outcomes) {
        idx = (idx << 1) | static_cast<std::size_t>(outcome_bit(o));
    }
    return idx;
}

std::vector<int> DichotomicBox::outcome_tuple(std::size_t index) const {
    std::vector<int> out(static_cast<std::size_t>(parties_));
    for (int k = 0; k < parties_; ++k) {
        out[static_cast<std::size_t>(k)] = ((index >> (parties_ - 1 - k)) & 1u) ? -1 : 1;
    }
    return out;
}

std::vector<Label> DichotomicBox::setting_tuple(std::size_t index) const {
    std::vector<Label> out(static_cast<std::size_t>(parties_));
    for (int k = 0; k < parties_; ++k) {
        out[static_cast<std::size_t>(k)] = ((index >> (parties_ - 1 - k)) & 1u) ? Label::kPrimed : Label::kUnprimed;
    }
    return out;
}

const std::vector<double> &DichotomicBox::row(const std::vector<Label> &settings) const {
    return table_[setting_index(settings)];
}

const std::vector<Rational> &DichotomicBox::exact_row(const std::vector<Label> &settings) const {
    return exact_table()[setting_index(settings)];
}

const DichotomicBox::ExactTable &DichotomicBox::exact_table() const {
    if (!exact_) {
        throw std::logic_error("box has no exact table");
    }
    return *exact_;
}

double DichotomicBox::probability(const std::vector<Label> &settings, const std::vector<int> &outcomes) const {
    return row(settings)[outcome_index(outcomes)];
}

double correlation(const DichotomicBox &box, const std::vector<Label> &settings) {
    const auto &r = box.row(settings);
    double c = 0;
    for (std::size_t o = 0; o < r.size(); ++o) {
        c += (std::popcount(o) % 2 ? -1.0 : 1.0) * r[o];
    }
    return c;
}

Rational exact_correlation(const DichotomicBox &box, const std::vector<Label> &settings) {
    const auto &r = box.exact_row(settings);
    Rational c = 0;
    for (std::size_t o = 0; o < r.size(); ++o) {
        if (std::popcount(o) % 2) {
            c -= r[o];
        } else {
            c += r[o];
        }
    }
    return c;
}

double pair_correlation(const DichotomicBox &box, const std::vector<Label> &settings, Party first, Party second) {
    if (first == second || static_cast<int>(first) >= box.parties() || static_cast<int>(second) >= box.parties()) {
        throw std::invalid_argument("pair_correlation needs two distinct parties of the box");
    }
    unsigned mask = (1u << static_cast<unsigned>(first)) | (1u << static_cast<unsigned>(second));
    auto m = marginal(box, settings, mask);
    return m[0] - m[1] - m[2] + m[3];
}

std::vector<double> marginal(const DichotomicBox &box, const std::vector<Label> &settings, unsigned party_mask) {
    return marginal_of_row(box.row(settings), box.parties(), party_mask);
}

std::vector<Rational> exact_marginal(const DichotomicBox &box, const std::vector<Label> &settings,
                                     unsigned party_mask) {
    return marginal_of_row(box.exact_row(settings), box.parties(), party_mask);
}

NoSignalingReport check_no_signaling(const DichotomicBox &box) {
    const int n = box.parties();
    const unsigned full = (1u << n) - 1;
    NoSignalingReport report{true, 0.0, std::nullopt};
    if (box.is_exact()) {
        report.exact_deviation = Rational(0);
    }
    for (unsigned mask = 1; mask < full; ++mask) {
        if (std::popcount(mask) > 2) {
            continue;
        }
        double d = max_marginal_spread(box.table(), n, mask, [](double x) { return std::fabs(x); });
        report.max_marginal_deviation = std::max(report.max_marginal_deviation, d);
        if (box.is_exact()) {
            Rational e = max_marginal_spread(box.exact_table(), n, mask, [](const Rational &x) {
                return x < 0 ? Rational(-x) : x;
            });
            if (e > *report.exact_deviation) {
                report.exact_deviation = e;
            }
        }
    }
    report.holds = box.is_exact() ? *report.exact_deviation == 0
                                  : report.max_marginal_deviation <= kNoSignalingTolerance;
    return report;
}

DichotomicBox make_pr_box() {
    const Rational half(1, 2);
    DichotomicBox::ExactTable table(4, std::vector<Rational>(4, Rational(0)));
    // Rows a|b, a|b', a'|b: perfectly correlated. Row a'|b': anticorrelated.
    for (std::size_t r = 0; r < 3; ++r) {
        table[r][0] = half;
        table[r][3] = half;
    }
    table[3][1] = half;
    table[3][2] = half;
    return DichotomicBox::from_exact(2, std::move(table));
}

DichotomicBox make_local_box(const std::vector<std::array<int, 2>> &outcomes) {
    const int n = static_cast<int>(outcomes.size());
    if (n != 2 && n != 3) {
        throw std::invalid_argument("a box has 2 or 3 parties");
    }
    const std::size_t size = std::size_t{1} << n;
    DichotomicBox::ExactTable table(size, std::vector<Rational>(size, Rational(0)));
    for (std::size_t s = 0; s < size; ++s) {
        std::size_t o = 0;
        for (int k = 0; k < n; ++k) {
            std::size_t label = (s >> (n - 1 - k)) & 1u;
            o = (o << 1) | static_cast<std::size_t>(outcome_bit(outcomes[static_cast<std::size_t>(k)][label]));
        }
        table[s][o] = 1;
    }
    return DichotomicBox::from_exact(n, std::move(table));
}

DichotomicBox box_from_quantum(const PureState &state, const std::vector<PartyObservables> &observables) {
    const int n = static_cast<int>(observables.size());
    if (n != 2 && n != 3) {
        throw std::invalid_argument("a box has 2 or 3 parties");
    }
    for (const auto &pair : observables) {
        for (const auto &obs : pair) {
            if (obs.n_qubits() != state.n_qubits()) {
                throw std::invalid_argument("observable " + obs.to_string() + " does not match a " +
                                            std::to_string(state.n_qubits()) + "-qubit state");
            }
        }
    }
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            for (const auto &op : observables[static_cast<std::size_t>(p)]) {
                for (const auto &oq : observables[static_cast<std::size_t>(q)]) {
                    if (commutator_norm(op, oq) >= kCommutatorThreshold) {
                        throw std::invalid_argument("observables of different parties must commute");
                    }
                }
            }
        }
    }
    const std::size_t size = std::size_t{1} << n;
    DichotomicBox::RealTable table(size, std::vector<double>(size));
    const std::vector<Complex> psi(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t s = 0; s < size; ++s) {
        for (std::size_t o = 0; o < size; ++o) {
            std::vector<Complex> v = psi;
            for (int k = 0; k < n; ++k) {
                std::size_t label = (s >> (n - 1 - k)) & 1u;
                int outcome = ((o >> (n - 1 - k)) & 1u) ? -1 : 1;
                v = project_onto(observables[static_cast<std::size_t>(k)][label], outcome, v);
            }
            double p = 0;
            for (const auto &c : v) p += std::norm(c);
            table[s][o] = p;
        }
    }
    return DichotomicBox::from_real(n, std::move(table));
}

DichotomicBox make_tsirelson_box() {
    const double quarter = std::numbers::pi / 4;
    return box_from_quantum(
        bell_state(), {
                          {PauliObservable::local(2, 0, Pauli::Z), PauliObservable::local(2, 0, Pauli::X)},
                          {PauliObservable::local(2, 1, SiteOperator::xz_axis(quarter)),
                           PauliObservable::local(2, 1, SiteOperator::xz_axis(-quarter))},
                      });
}

DichotomicBox make_ghz_box() {
    std::vector<PartyObservables> obs;
    for (int q = 0; q < 3; ++q) {
        obs.push_back({PauliObservable::local(3, q, Pauli::X), PauliObservable::local(3, q, Pauli::Y)});
    }
    return box_from_quantum(ghz_state(), obs);
}

JointReadoutModel JointReadoutModel::from_box(const DichotomicBox &box) {
    if (box.parties() != 2) {
        throw std::invalid_argument("joint readout needs a bipartite box");
    }
    JointReadoutModel model;
    for (Label la : {Label::kUnprimed, Label::kPrimed}) {
        for (int alpha : {1, -1}) {
            std::array<int, 2> forced{};
            bool reachable = true;
            for (Label lb : {Label::kUnprimed, Label::kPrimed}) {
                const auto &r = box.row({la, lb});
                double p_alpha = r[box.outcome_index({alpha, 1})] + r[box.outcome_index({alpha, -1})];
                if (p_alpha <= kNormalizationTolerance) {
                    reachable = false;
                    break;
                }
                double p_plus = r[box.outcome_index({alpha, 1})] / p_alpha;
                if (std::fabs(p_plus - 1.0) <= kNormalizationTolerance) {
                    forced[static_cast<std::size_t>(lb)] = 1;
                } else if (std::fabs(p_plus) <= kNormalizationTolerance) {
                    forced[static_cast<std::size_t>(lb)] = -1;
                } else {
                    throw std::domain_error("Bob's " + setting_name({Party::kBob, lb}) +
                                            " is not determined by Alice's outcome under " +
                                            setting_name({Party::kAlice, la}));
                }
            }
            if (reachable) {
                model.table_[static_cast<std::size_t>(la)][alpha == 1 ? 0 : 1] = JointValue{forced[0], forced[1]};
            }
        }
    }
    return model;
}

JointValue JointReadoutModel::readout(Label alice_setting, int alice_outcome) const {
    const auto &v = table_[static_cast<std::size_t>(alice_setting)][static_cast<std::size_t>(outcome_bit(alice_outcome))];
    if (!v) {
        throw std::domain_error("Alice's outcome " + std::to_string(alice_outcome) + " never occurs under " +
                                setting_name({Party::kAlice, alice_setting}));
    }
    return *v;
}

nlohmann::json to_json(const DichotomicBox &box) {
    nlohmann::json table = nlohmann::json::object();
    for (std::size_t s = 0; s < box.setting_count(); ++s) {
        std::string key;
        for (Label l : box.setting_tuple(s)) {
            if (!key.empty()) key += '|';
            key += label_code(l);
        }
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t o = 0; o < box.outcome_count(); ++o) {
            if (box.is_exact()) {
                row.push_back(to_string(box.exact_table()[s][o]));
            } else {
                row.push_back(box.table()[s][o]);
            }
        }
        table[key] = row;
    }
    return {{"parties", box.parties()}, {"settings", {"u", "p"}}, {"table", table}};
}

DichotomicBox box_from_json(const nlohmann::json &j) {
    try {
        const int n = j.at("parties").get<int>();
        if (n != 2 && n != 3) {
            throw std::invalid_argument("parties must be 2 or 3");
        }
        const auto &table = j.at("table");
        const std::size_t size = std::size_t{1} << n;
        DichotomicBox::ExactTable exact(size);
        DichotomicBox::RealTable real(size);
        bool all_exact = true;
        for (std::size_t s = 0; s < size; ++s) {
            std::string key;
            for (int k = 0; k < n; ++k) {
                if (k) key += '|';
                key += ((s >> (n - 1 - k)) & 1u) ? 'p' : 'u';
            }
            const auto &row = table.at(key);
            if (!row.is_array() || row.size() != size) {
                throw std::invalid_argument("row '" + key + "' must hold " + std::to_string(size) + " entries");
            }
            for (const auto &entry : row) {
                if (entry.is_string()) {
                    Rational r = parse_rational(entry.get<std::string>());
                    exact[s].push_back(r);
                    real[s].push_back(to_double(r));
                } else {
                    all_exact = false;
                    real[s].push_back(entry.get<double>());
                }
            }
        }
        return all_exact ? DichotomicBox::from_exact(n, std::move(exact)) : DichotomicBox::from_real(n, std::move(real));
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed box table: ") + e.what());
    }
}

}  // namespace nsl
