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

#include <cmath>
#include <random>
#include <set>

#include "gtest/gtest.h"

using namespace nsl;

namespace {

// Grid oracle: the overlap of the two future cones, sampled on a lattice
// around the apex region, must sit inside j_hat's cone exactly when the
// verdict says so.
bool overlap_inside_by_grid(const CausalConfig &c) {
    auto inside = [](SpacetimeEvent apex, SpacetimeEvent e) { return e.t - apex.t >= std::fabs(e.x - apex.x) - 1e-12; };
    for (int i = 0; i <= 120; ++i)
        for (int k = -120; k <= 120; ++k) {
            SpacetimeEvent e{-3 + i * 0.1, k * 0.1};
            if (inside(c.a_hat, e) && inside(c.b_hat, e) && !inside(c.j_hat, e)) return false;
        }
    return true;
}

const DeviceMap kAllMaps[] = {DeviceMap::kEcho, DeviceMap::kInvert, DeviceMap::kConst0, DeviceMap::kConst1};

}  // namespace

TEST(boost, examples) {
    for (double b : {-0.9, 0.0, 0.3, 0.99}) EXPECT_EQ(boost({0, 0}, b), (SpacetimeEvent{0, 0}));
    auto e = boost({0, 1}, 0.5);
    double gamma = 1 / std::sqrt(0.75);
    EXPECT_NEAR(e.t, -0.5 * gamma, 1e-15);
    EXPECT_NEAR(e.t, -0.57735, 1e-5);
    EXPECT_NEAR(e.x, gamma, 1e-15);
}

TEST(boost, rejects_superluminal) {
    EXPECT_THROW(Boost(1.0), std::invalid_argument);
    EXPECT_THROW(Boost(-1.5), std::invalid_argument);
    EXPECT_THROW(Boost(std::nan("")), std::invalid_argument);
    EXPECT_THROW(round_trip_chronology(0, 1, 0, 1.0), std::invalid_argument);
}

TEST(boost, inverse_and_interval) {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> coord(-1000, 1000), beta(-0.99, 0.99);
    for (int k = 0; k < 1000; ++k) {
        SpacetimeEvent e{coord(gen), coord(gen)};
        Boost b(beta(gen));
        auto back = b.inverse()(b(e));
        EXPECT_NEAR(back.t, e.t, 1e-12 * std::max(1.0, std::fabs(e.t) * b.gamma() * b.gamma()));
        EXPECT_NEAR(back.x, e.x, 1e-12 * std::max(1.0, std::fabs(e.x) * b.gamma() * b.gamma()));
        EXPECT_NEAR(interval(b(e)), interval(e), 1e-9 * std::max(1.0, e.t * e.t + e.x * e.x));
    }
    auto small = Boost(0.25).inverse()(Boost(0.25)({0.3, -0.7}));
    EXPECT_NEAR(small.t, 0.3, 1e-12);
    EXPECT_NEAR(small.x, -0.7, 1e-12);
}

TEST(cone, examples) {
    EXPECT_TRUE(in_future_cone({0, 0}, {1, 0}));
    EXPECT_FALSE(in_future_cone({0, 0}, {1, 2}));
    EXPECT_TRUE(in_future_cone({0, 0}, {1, 1}));
    EXPECT_TRUE(in_future_cone({0, 0}, {0, 0}));
    EXPECT_FALSE(in_future_cone({0, 0}, {-1, 0}));
}

TEST(cone, boost_invariant) {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> coord(-5, 5), beta(-0.99, 0.99);
    for (int k = 0; k < 2000; ++k) {
        SpacetimeEvent a{coord(gen), coord(gen)}, e{coord(gen), coord(gen)};
        double b = beta(gen);
        EXPECT_EQ(in_future_cone(a, e), in_future_cone(boost(a, b), boost(e, b)));
    }
}

TEST(binary_condition, examples) {
    auto a = binary_condition({{0, -1}, {0, 1}, {-0.5, 0}});
    EXPECT_TRUE(a.holds);
    EXPECT_EQ(a.overlap_apex, (SpacetimeEvent{1, 0}));
    auto b = binary_condition({{0, -1}, {0, 1}, {2, 0}});
    EXPECT_FALSE(b.holds);
    CausalConfig retro{{0, -2}, {0, 2}, {1, 0}};
    auto r = binary_condition(retro);
    EXPECT_TRUE(r.holds);
    EXPECT_EQ(r.overlap_apex, (SpacetimeEvent{2, 0}));
    EXPECT_GT(retro.j_hat.t, retro.a_hat.t);
    EXPECT_GT(retro.j_hat.t, retro.b_hat.t);
}

TEST(binary_condition, apex_is_earliest_common_successor) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> coord(-3, 3);
    for (int k = 0; k < 500; ++k) {
        SpacetimeEvent a{coord(gen), coord(gen)}, b{coord(gen), coord(gen)};
        auto apex = future_overlap_apex(a, b);
        SpacetimeEvent later{apex.t + 1e-12, apex.x};
        EXPECT_TRUE(in_future_cone(a, later));
        EXPECT_TRUE(in_future_cone(b, later));
        // Nudging the apex into its own past leaves one of the cones.
        SpacetimeEvent earlier{apex.t - 1e-6, apex.x};
        EXPECT_FALSE(in_future_cone(a, earlier) && in_future_cone(b, earlier));
    }
}

TEST(binary_condition, matches_grid_oracle) {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (int k = 0; k < 60; ++k) {
        CausalConfig c{{coord(gen), coord(gen)}, {coord(gen), coord(gen)}, {coord(gen) - 1, coord(gen)}};
        EXPECT_EQ(binary_condition(c).holds, overlap_inside_by_grid(c));
    }
    EXPECT_TRUE(overlap_inside_by_grid({{0, -1}, {0, 1}, {-0.5, 0}}));
    EXPECT_FALSE(overlap_inside_by_grid({{0, -1}, {0, 1}, {2, 0}}));
}

TEST(binary_condition, boost_invariant) {
    std::mt19937_64 gen(14);
    std::uniform_real_distribution<double> coord(-3, 3), beta(-0.99, 0.99);
    for (int k = 0; k < 1000; ++k) {
        CausalConfig c{{coord(gen), coord(gen)}, {coord(gen), coord(gen)}, {coord(gen), coord(gen)}};
        double b = beta(gen);
        CausalConfig moved{boost(c.a_hat, b), boost(c.b_hat, b), boost(c.j_hat, b)};
        auto apex = future_overlap_apex(c.a_hat, c.b_hat);
        // Skip configurations within rounding distance of the light-cone boundary.
        double margin = (apex.t - c.j_hat.t) - std::fabs(apex.x - c.j_hat.x);
        if (std::fabs(margin) < 1e-9) continue;
        EXPECT_EQ(binary_condition(c).holds, binary_condition(moved).holds);
    }
}

TEST(loop_analysis, examples) {
    auto bad = loop_analysis({DeviceMap::kEcho, DeviceMap::kInvert});
    EXPECT_FALSE(bad.consistent);
    EXPECT_TRUE(bad.fixed_points.empty());
    auto echo = loop_analysis({DeviceMap::kEcho, DeviceMap::kEcho});
    EXPECT_TRUE(echo.consistent);
    EXPECT_EQ(echo.fixed_points, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
    auto c0 = loop_analysis({DeviceMap::kConst0, DeviceMap::kInvert});
    EXPECT_TRUE(c0.consistent);
    EXPECT_EQ(c0.fixed_points, (std::vector<std::pair<int, int>>{{0, 1}}));
}

TEST(loop_analysis, exhaustive_scan) {
    // Brute force: a pair is inconsistent iff no (i_A, i_B) solves both maps.
    std::set<std::pair<DeviceMap, DeviceMap>> inconsistent;
    for (auto a : kAllMaps)
        for (auto b : kAllMaps) {
            bool any = false;
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) any |= apply(a, ib) == ia && apply(b, ia) == ib;
            EXPECT_EQ(loop_analysis({a, b}).consistent, any);
            if (!any) inconsistent.insert({a, b});
        }
    // Only the bijections of opposite parity close a contradictory loop.
    std::set<std::pair<DeviceMap, DeviceMap>> expected = {{DeviceMap::kEcho, DeviceMap::kInvert},
                                                          {DeviceMap::kInvert, DeviceMap::kEcho}};
    EXPECT_EQ(inconsistent, expected);
}

TEST(device_map, names) {
    for (auto m : kAllMaps) EXPECT_EQ(parse_device_map(to_string(m)), m);
    EXPECT_THROW(parse_device_map("swap"), std::invalid_argument);
    EXPECT_EQ(apply(DeviceMap::kInvert, 0), 1);
    EXPECT_EQ(apply(DeviceMap::kConst1, 0), 1);
    EXPECT_THROW(apply(DeviceMap::kEcho, 2), std::invalid_argument);
}

TEST(round_trip, examples) {
    auto r = round_trip_chronology(0, 1, 0, 0.5);
    EXPECT_NEAR(r.reply_arrival.t, -0.5, 1e-15);
    EXPECT_EQ(r.reply_arrival.x, 0);
    EXPECT_EQ(r.bob_reception, (SpacetimeEvent{0, 1}));
    EXPECT_TRUE(r.retrocausal);

    auto still = round_trip_chronology(0, 1, 0, 0.0);
    EXPECT_EQ(still.reply_arrival, (SpacetimeEvent{0, 0}));
    EXPECT_FALSE(still.retrocausal);

    auto flipped = round_trip_chronology(0, -1, 0, 0.5);
    EXPECT_NEAR(flipped.reply_arrival.t, 0.5, 1e-15);
    EXPECT_FALSE(flipped.retrocausal);
}

TEST(round_trip, reply_lies_on_primed_simultaneity_line) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> coord(-4, 4), beta(-0.95, 0.95);
    for (int k = 0; k < 200; ++k) {
        double ax = coord(gen), bx = coord(gen), t0 = coord(gen), b = beta(gen);
        auto r = round_trip_chronology(ax, bx, t0, b);
        EXPECT_NEAR(boost(r.reply_arrival, b).t, boost(r.bob_reception, b).t, 1e-9);
        EXPECT_EQ(r.reply_arrival.x, ax);
        EXPECT_EQ(r.retrocausal, r.reply_arrival.t < t0);
    }
}

TEST(round_trip, continuous_as_beta_vanishes) {
    double previous = -1;
    for (double b = 0.5; b > 1e-9; b /= 2) {
        double t = round_trip_chronology(0, 1, 0, b).reply_arrival.t;
        EXPECT_LT(std::fabs(t), std::fabs(previous) + 1e-15);
        EXPECT_NEAR(t, -b, 1e-15);
        previous = t;
    }
}

TEST(spacetime_json, round_trip) {
    SpacetimeEvent e{-0.5, 2.25};
    EXPECT_EQ(event_from_json(to_json(e)), e);
    EXPECT_THROW(event_from_json(nlohmann::json{{"t", 1}}), std::invalid_argument);
    EXPECT_THROW(event_from_json(nlohmann::json{{"t", "x"}, {"x", 0}}), std::invalid_argument);
}
