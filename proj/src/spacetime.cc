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

#include "nsl/spacetime.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsl {

namespace {

// Light-cone coordinates u = t - x, v = t + x. The future cone of e is
// {u >= e.u, v >= e.v}.
struct LightCone {
    double u;
    double v;
};

LightCone light_cone(const SpacetimeEvent &e) {
    return {e.t - e.x, e.t + e.x};
}

}  // namespace

Boost::Boost(double beta) : beta_(beta), gamma_(0) {
    if (!std::isfinite(beta) || std::fabs(beta) >= 1.0) {
        throw std::invalid_argument("boost velocity must satisfy |beta| < 1, got " + std::to_string(beta));
    }
    gamma_ = 1.0 / std::sqrt(1.0 - beta * beta);
}

SpacetimeEvent Boost::operator()(const SpacetimeEvent &e) const {
    return {gamma_ * (e.t - beta_ * e.x), gamma_ * (e.x - beta_ * e.t)};
}

SpacetimeEvent boost(const SpacetimeEvent &e, double beta) {
    return Boost(beta)(e);
}

double interval(const SpacetimeEvent &e) {
    return e.t * e.t - e.x * e.x;
}

bool in_future_cone(const SpacetimeEvent &apex, const SpacetimeEvent &e) {
    return e.t - apex.t >= std::fabs(e.x - apex.x);
}

SpacetimeEvent future_overlap_apex(const SpacetimeEvent &a, const SpacetimeEvent &b) {
    LightCone ca = light_cone(a), cb = light_cone(b);
    double u = std::max(ca.u, cb.u);
    double v = std::max(ca.v, cb.v);
    return {(u + v) / 2, (v - u) / 2};
}

BinaryConditionResult binary_condition(const CausalConfig &config) {
    // Decided in null coordinates so the apex never round-trips through (t, x).
    LightCone ca = light_cone(config.a_hat), cb = light_cone(config.b_hat), cj = light_cone(config.j_hat);
    bool holds = cj.u <= std::max(ca.u, cb.u) && cj.v <= std::max(ca.v, cb.v);
    return {holds, future_overlap_apex(config.a_hat, config.b_hat)};
}

std::string to_string(DeviceMap map) {
    switch (map) {
        case DeviceMap::kEcho:
            return "echo";
        case DeviceMap::kInvert:
            return "invert";
        case DeviceMap::kConst0:
            return "const0";
        case DeviceMap::kConst1:
            return "const1";
    }
    throw std::logic_error("unreachable");
}

DeviceMap parse_device_map(const std::string &name) {
    for (auto m : {DeviceMap::kEcho, DeviceMap::kInvert, DeviceMap::kConst0, DeviceMap::kConst1}) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown device map '" + name + "'");
}

int apply(DeviceMap map, int bit) {
    if (bit != 0 && bit != 1) {
        throw std::invalid_argument("device maps act on bits, got " + std::to_string(bit));
    }
    switch (map) {
        case DeviceMap::kEcho:
            return bit;
        case DeviceMap::kInvert:
            return 1 - bit;
        case DeviceMap::kConst0:
            return 0;
        case DeviceMap::kConst1:
            return 1;
    }
    throw std::logic_error("unreachable");
}

LoopAnalysis loop_analysis(const DevicePolicy &policy) {
    LoopAnalysis out{false, {}};
    for (int i_a = 0; i_a < 2; ++i_a) {
        for (int i_b = 0; i_b < 2; ++i_b) {
            if (apply(policy.alice_map, i_b) == i_a && apply(policy.bob_map, i_a) == i_b) {
                out.fixed_points.emplace_back(i_a, i_b);
            }
        }
    }
    out.consistent = !out.fixed_points.empty();
    return out;
}

RoundTrip round_trip_chronology(double alice_x, double bob_x, double send_t, double beta) {
    Boost frame(beta);
    SpacetimeEvent reception{send_t, bob_x};
    // Primed simultaneity: t - beta x = const through the reception event.
    double arrival_t = reception.t + frame.beta() * (alice_x - bob_x);
    SpacetimeEvent arrival{arrival_t, alice_x};
    return {reception, arrival, arrival.t < send_t};
}

nlohmann::json to_json(const SpacetimeEvent &e) {
    return {{"t", e.t}, {"x", e.x}};
}

SpacetimeEvent event_from_json(const nlohmann::json &j) {
    try {
        SpacetimeEvent e{j.at("t").get<double>(), j.at("x").get<double>()};
        if (!std::isfinite(e.t) || !std::isfinite(e.x)) {
            throw std::invalid_argument("event coordinates must be finite");
        }
        return e;
    } catch (const nlohmann::json::exception &ex) {
        throw std::invalid_argument(std::string("malformed event: ") + ex.what());
    }
}

}  // namespace nsl
