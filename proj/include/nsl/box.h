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

#ifndef NSL_BOX_H
#define NSL_BOX_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsl/quantum.h"
#include "nsl/rational.h"

namespace nsl {

enum class Party : std::uint8_t { kAlice = 0, kBob = 1, kJim = 2 };

/// Each party has exactly two measurement settings. For Alice these are a
/// and a', for Bob b and b', and for Jim the x and y bases.
enum class Label : std::uint8_t { kUnprimed = 0, kPrimed = 1 };

struct Setting {
    Party party;
    Label label;
};

/// "u" or "p", the key alphabet of serialized box tables.
char label_code(Label label);

/// Human-readable setting name: a, a', b, b', x, y.
std::string setting_name(Setting setting);

/// Conditional outcome distribution P(outcomes | settings) for 2 or 3 parties
/// with dichotomic (+-1) outcomes.
///
/// Rows are indexed by the setting tuple and columns by the outcome tuple,
/// both in lexicographic order with Alice slowest. Within a tuple, kUnprimed
/// precedes kPrimed and +1 precedes -1, so for two parties the columns are
/// (+1,+1), (+1,-1), (-1,+1), (-1,-1).
///
/// Exact boxes keep rational probabilities alongside their double images;
/// quantum boxes are double-only.
class DichotomicBox {
public:
    using RealTable = std::vector<std::vector<double>>;
    using ExactTable = std::vector<std::vector<Rational>>;

    /// Throws std::invalid_argument on a malformed table or a row that is not
    /// a probability distribution.
    static DichotomicBox from_exact(int parties, ExactTable table);
    static DichotomicBox from_real(int parties, RealTable table);

    int parties() const { return parties_; }
    bool is_exact() const { return exact_.has_value(); }

    std::size_t setting_count() const { return std::size_t{1} << parties_; }
    std::size_t outcome_count() const { return std::size_t{1} << parties_; }

    /// Throws std::invalid_argument if the tuple length differs from parties().
    std::size_t setting_index(const std::vector<Label> &settings) const;
    std::size_t outcome_index(const std::vector<int> &outcomes) const;

    /// Inverse of outcome_index.
    std::vector<int> outcome_tuple(std::size_t index) const;
    std::vector<Label> setting_tuple(std::size_t index) const;

    const std::vector<double> &row(const std::vector<Label> &settings) const;
    const std::vector<Rational> &exact_row(const std::vector<Label> &settings) const;

    const RealTable &table() const { return table_; }
    const ExactTable &exact_table() const;

    double probability(const std::vector<Label> &settings, const std::vector<int> &outcomes) const;

private:
    DichotomicBox(int parties, RealTable table, std::optional<ExactTable> exact);

    int parties_;
    RealTable table_;
    std::optional<ExactTable> exact_;
};

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kNoSignalingTolerance = 1e-12;

/// E[product of all parties' outcomes | settings].
double correlation(const DichotomicBox &box, const std::vector<Label> &settings);
Rational exact_correlation(const DichotomicBox &box, const std::vector<Label> &settings);

/// E[product of the outcomes of `first` and `second`] under the full
/// setting tuple, marginalizing over any remaining party.
double pair_correlation(const DichotomicBox &box, const std::vector<Label> &settings, Party first, Party second);

/// Distribution of the outcomes of the parties in `party_mask` (bit k for
/// party k), in the same lexicographic order as the full table.
std::vector<double> marginal(const DichotomicBox &box, const std::vector<Label> &settings, unsigned party_mask);
std::vector<Rational> exact_marginal(const DichotomicBox &box, const std::vector<Label> &settings,
                                     unsigned party_mask);

struct NoSignalingReport {
    bool holds;
    double max_marginal_deviation;
    /// Present for exact boxes; identically zero for no-signaling ones.
    std::optional<Rational> exact_deviation;
};

/// Checks that every single-party and two-party marginal is independent of
/// the remaining parties' settings.
NoSignalingReport check_no_signaling(const DichotomicBox &box);

/// C(a,b) = C(a,b') = C(a',b) = 1 = -C(a',b') with unbiased marginals.
DichotomicBox make_pr_box();

/// Local deterministic box: party k outputs outcomes[k][label] with certainty.
DichotomicBox make_local_box(const std::vector<std::array<int, 2>> &outcomes);

/// Per party, the observable measured under each of its two settings.
using PartyObservables = std::array<PauliObservable, 2>;

/// Born-rule joint probabilities of the parties' observables on `state`.
/// Observables of different parties must commute. Throws
/// std::invalid_argument on a qubit-count mismatch.
DichotomicBox box_from_quantum(const PureState &state, const std::vector<PartyObservables> &observables);

/// Bell state with a = Z, a' = X, b = (Z+X)/sqrt(2), b' = (Z-X)/sqrt(2).
DichotomicBox make_tsirelson_box();

/// GHZ state with every party choosing between X (unprimed) and Y (primed).
DichotomicBox make_ghz_box();

/// Joint values (b, b') of Bob's two incompatible observables in one round.
struct JointValue {
    int b;
    int b_prime;
    bool operator==(const JointValue &) const = default;
};

/// Classical-limit readout for a bipartite box whose Bob outcomes are fixed by
/// Alice's setting and outcome. For the PR box this is: a -> b = b' = alpha;
/// a' -> b = alpha, b' = -alpha.
class JointReadoutModel {
public:
    /// Throws std::domain_error if some reachable Alice outcome leaves either
    /// of Bob's outcomes undetermined.
    static JointReadoutModel from_box(const DichotomicBox &box);

    /// Throws std::domain_error for an outcome the box never produces.
    JointValue readout(Label alice_setting, int alice_outcome) const;

private:
    JointReadoutModel() = default;
    std::array<std::array<std::optional<JointValue>, 2>, 2> table_{};
};

nlohmann::json to_json(const DichotomicBox &box);

/// Parses the layout written by to_json. Probabilities given as strings
/// ("1/2") are exact; if every entry is a string the box is exact.
DichotomicBox box_from_json(const nlohmann::json &j);

}  // namespace nsl

#endif
