// Copyright 2026 The qprobe Authors
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

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "qprobe/detector.hpp"
#include "qprobe/devicesim.hpp"

using namespace qprobe;

TEST(ManhattanAvg, Examples) {
    Fingerprint a({0.8, 0.9});
    EXPECT_EQ(manhattan_avg(a, a), 0.0);
    EXPECT_NEAR(manhattan_avg(a, Fingerprint({0.9, 0.8})), 0.1, 1e-15);
    EXPECT_NEAR(manhattan_avg(Fingerprint({1, 1, 1}), Fingerprint({0.9, 1, 1})), 0.1 / 3, 1e-15);
}

TEST(ManhattanAvg, Errors) {
    EXPECT_THROW(manhattan_avg(Fingerprint({0.5}), Fingerprint({0.5, 0.5})), std::invalid_argument);
    EXPECT_THROW(manhattan_avg(Fingerprint(), Fingerprint()), std::invalid_argument);
    EXPECT_THROW(Fingerprint({1.2}), std::invalid_argument);
}

TEST(Detect, StrictThreshold) {
    EXPECT_EQ(detect(Fingerprint({0.036}), Fingerprint({0.0})).classification, Classification::fraudulent);
    auto boundary = detect(Fingerprint({0.035}), Fingerprint({0.0}));
    EXPECT_EQ(boundary.distance, 0.035);
    EXPECT_EQ(boundary.classification, Classification::honest);
    auto same = detect(Fingerprint({0.9, 0.8}), Fingerprint({0.9, 0.8}));
    EXPECT_EQ(same.distance, 0.0);
    EXPECT_EQ(same.classification, Classification::honest);
    EXPECT_EQ(same.threshold, 0.035);
    EXPECT_THROW(detect(Fingerprint({0.9}), Fingerprint({0.9, 0.8})), std::invalid_argument);
}

TEST(Detect, MonotoneInDistance) {
    Fingerprint reference({1.0, 1.0});
    Classification last = Classification::honest;
    for (int k = 0; k <= 200; ++k) {
        double drop = k * 0.0005;
        auto v = detect(reference, Fingerprint({1.0 - drop, 1.0 - drop}));
        if (last == Classification::fraudulent) {
            EXPECT_EQ(v.classification, Classification::fraudulent);
        }
        EXPECT_EQ(v.classification == Classification::fraudulent, v.distance > 0.035);
        last = v.classification;
    }
    EXPECT_EQ(last, Classification::fraudulent);
}

TEST(Detect, VerdictJson) {
    auto v = detect(Fingerprint({0.9}), Fingerprint({0.8}), 0.05);
    v.requested_device = "belem";
    auto doc = to_json(v);
    EXPECT_EQ(doc.at("classification"), "fraudulent");
    EXPECT_EQ(doc.at("requested_device"), "belem");
    EXPECT_EQ(doc.at("threshold"), 0.05);
    EXPECT_NEAR(doc.at("distance").get<double>(), 0.1, 1e-15);
}

TEST(MatchDevice, PicksDeviceWhoseOracleIsClosest) {
    auto topo = Topology::t_shape5();
    auto c = transpile(build_bv(Bitstring("11")), topo, {0, 1, 3});
    std::map<std::string, Fingerprint> expected;
    std::mt19937_64 rng(4);
    double max_rate = 0.01;
    for (const char *id : {"a", "b", "c", "d"}) {
        expected[id] = exact_survival(c, NoiseSpec{qprobe::testing::random_profile(topo, rng, max_rate, id)});
        max_rate *= 3;
    }
    Fingerprint observed = expected.at("c");
    observed.survivals[0] -= 0.004;
    auto result = match_device(expected, observed);
    EXPECT_EQ(result.best, "c");
    EXPECT_EQ(result.distances.size(), 4u);
    EXPECT_NEAR(result.distances.at("c"), 0.002, 1e-12);
}

TEST(MatchDevice, SingleAndTiedCandidates) {
    Fingerprint obs({0.9, 0.9});
    EXPECT_EQ(match_device({{"only", Fingerprint({0.5, 0.5})}}, obs).best, "only");
    auto tie = match_device({{"zeta", Fingerprint({0.8, 0.9})}, {"eta", Fingerprint({1.0, 0.9})}}, obs);
    EXPECT_EQ(tie.best, "eta");
    EXPECT_THROW(match_device({}, obs), std::invalid_argument);
}

TEST(MatchDevice, CandidateOrderDoesNotMatter) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.7, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<std::string, Fingerprint>> cands;
        for (int k = 0; k < 6; ++k) {
            // Quantised so ties actually occur.
            cands.emplace_back("d" + std::to_string(k), Fingerprint({std::round(u(rng) * 20) / 20}));
        }
        Fingerprint obs({std::round(u(rng) * 20) / 20});
        std::map<std::string, Fingerprint> forward(cands.begin(), cands.end());
        std::shuffle(cands.begin(), cands.end(), rng);
        std::map<std::string, Fingerprint> shuffled;
        for (const auto &[id, fp] : cands) {
            shuffled.emplace(id, fp);
        }
        EXPECT_EQ(match_device(forward, obs).best, match_device(shuffled, obs).best);
    }
}

TEST(StaticMatch, Examples) {
    auto p = qprobe::testing::t5_profile("p");
    auto v = error_vector(p);
    auto self = static_match({{"p", v}}, v);
    EXPECT_EQ(self.best, "p");
    EXPECT_EQ(self.distances.at("p"), 0.0);

    auto shifted = v;
    shifted.entries[2].second += 0.01;
    EXPECT_NEAR(manhattan_total(v, shifted), 0.01, 1e-15);

    // Three devices whose vectors differ pairwise by >= 0.02.
    std::map<std::string, ErrorVector> fleet;
    std::mt19937_64 rng(21);
    for (int k = 0; k < 3; ++k) {
        auto q = fabricate(p, OverrideRates{{{"CNOT_(1,3)", 0.01 + 0.03 * k}, {"Meas_4", 0.02 + 0.025 * k}}});
        fleet["dev" + std::to_string(k)] = error_vector(q);
    }
    for (const auto &[a, va] : fleet) {
        for (const auto &[b, vb] : fleet) {
            if (a != b) {
                EXPECT_GE(manhattan_total(va, vb), 0.02);
            }
        }
    }
    for (const auto &[id, vec] : fleet) {
        auto noisy = vec;
        for (auto &[label, rate] : noisy.entries) {
            rate += std::uniform_real_distribution<double>(-0.0005, 0.0005)(rng);
        }
        EXPECT_EQ(static_match(fleet, noisy).best, id);
    }
}

TEST(StaticMatch, LabelMismatch) {
    auto v = error_vector(qprobe::testing::t5_profile());
    auto w = v;
    w.entries[0].first = "CNOT_(0,2)";
    EXPECT_THROW(static_match({{"x", v}}, w), std::invalid_argument);
    auto shorter = v;
    shorter.entries.pop_back();
    EXPECT_THROW(manhattan_total(v, shorter), std::invalid_argument);
}

TEST(DetectorProperties, AverageIsTotalOverLength) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t n = 1 + trial % 9;
        std::vector<double> a(n), b(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
            total += std::abs(a[i] - b[i]);
        }
        EXPECT_DOUBLE_EQ(manhattan_avg(Fingerprint(a), Fingerprint(b)), total / n);
    }
}
