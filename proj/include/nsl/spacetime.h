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

#ifndef NSL_SPACETIME_H
#define NSL_SPACETIME_H

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace nsl {

/// An event in 1+1D Minkowski spacetime, c = 1.
struct SpacetimeEvent {
    double t;
    double x;
    bool operator==(const SpacetimeEvent &) const = default;
};

/// A Lorentz boost to the frame moving with velocity beta along x.
class Boost {
public:
    /// Throws std::invalid_argument unless |beta| < 1 and beta is finite.
    explicit Boost(double beta);

    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    Boost inverse() const { return Boost(-beta_); }

    SpacetimeEvent operator()(const SpacetimeEvent &e) const;

private:
    double beta_;
    double gamma_;
};

SpacetimeEvent boost(const SpacetimeEvent &e, double beta);

/// t^2 - x^2 of the separation from the origin.
double interval(const SpacetimeEvent &e);

/// True iff e lies in the closed future light cone of apex (lightlike
/// boundary included).
bool in_future_cone(const SpacetimeEvent &apex, const SpacetimeEvent &e);

/// The overlap of the future cones of two events is itself a future cone.
/// Returns its apex: the earliest event causally after both.
SpacetimeEvent future_overlap_apex(const SpacetimeEvent &a, const SpacetimeEvent &b);

struct CausalConfig {
    SpacetimeEvent a_hat;
    SpacetimeEvent b_hat;
    SpacetimeEvent j_hat;
};

struct BinaryConditionResult {
    bool holds;
    SpacetimeEvent overlap_apex;
};

/// The overlap of the future cones of a_hat and b_hat lies inside the future
/// cone of j_hat. In 1+1D this holds iff j_hat's cone contains the overlap's
/// apex.
BinaryConditionResult binary_condition(const CausalConfig &config);

enum class DeviceMap { kEcho, kInvert, kConst0, kConst1 };

std::string to_string(DeviceMap map);
/// Accepts "echo", "invert", "const0", "const1".
DeviceMap parse_device_map(const std::string &name);
int apply(DeviceMap map, int bit);

struct DevicePolicy {
    /// i_A as a function of the bit Alice receives.
    DeviceMap alice_map;
    /// i_B as a function of the bit Bob receives.
    DeviceMap bob_map;
};

struct LoopAnalysis {
    bool consistent;
    /// Solutions (i_A, i_B) of i_A = alice_map(i_B), i_B = bob_map(i_A).
    std::vector<std::pair<int, int>> fixed_points;
};

LoopAnalysis loop_analysis(const DevicePolicy &policy);

struct RoundTrip {
    /// Where Bob receives Alice's bit (instantaneous in the unprimed frame).
    SpacetimeEvent bob_reception;
    /// Where Bob's reply reaches Alice's worldline (instantaneous in the
    /// primed frame).
    SpacetimeEvent reply_arrival;
    bool retrocausal;
};

/// Alice at alice_x sends at send_t; Bob at bob_x replies at once along the
/// simultaneity line of the frame boosted by beta. Throws
/// std::invalid_argument unless |beta| < 1.
RoundTrip round_trip_chronology(double alice_x, double bob_x, double send_t, double beta);

nlohmann::json to_json(const SpacetimeEvent &e);
SpacetimeEvent event_from_json(const nlohmann::json &j);

}  // namespace nsl

#endif
