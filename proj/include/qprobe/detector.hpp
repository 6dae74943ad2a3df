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

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qprobe/device_profile.hpp"
#include "qprobe/fingerprint.hpp"

namespace qprobe {

/// Fraud threshold on the average per-qubit distance.
inline constexpr double kDefaultThreshold = 0.035;

enum class Classification { honest, fraudulent };

inline const char *to_string(Classification c) {
    return c == Classification::honest ? "honest" : "fraudulent";
}

struct Verdict {
    double distance = 0.0;
    double threshold = kDefaultThreshold;
    Classification classification = Classification::honest;
    std::string requested_device;
};

inline nlohmann::json to_json(const Verdict &v) {
    return {{"distance", v.distance},
            {"threshold", v.threshold},
            {"classification", to_string(v.classification)},
            {"requested_device", v.requested_device}};
}

/// Average per-qubit Manhattan distance, (1/n) sum |a_i - b_i|.
inline double manhattan_avg(const Fingerprint &a, const Fingerprint &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("fingerprint lengths differ: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
    if (a.size() == 0) {
        throw std::invalid_argument("fingerprints are empty");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += std::abs(a[i] - b[i]);
    }
    return total / static_cast<double>(a.size());
}

/// Unnormalised Manhattan distance between error vectors with identical labels.
inline double manhattan_total(const ErrorVector &a, const ErrorVector &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("error vectors differ in length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.entries[i].first != b.entries[i].first) {
            throw std::invalid_argument("error vector labels differ at " + std::to_string(i) + ": " +
                                        a.entries[i].first + " vs " + b.entries[i].first);
        }
        total += std::abs(a.entries[i].second - b.entries[i].second);
    }
    return total;
}

/// Fraudulent iff the distance strictly exceeds the threshold.
inline Verdict detect(const Fingerprint &user_fp, const Fingerprint &device_fp, double threshold = kDefaultThreshold) {
    Verdict v;
    v.distance = manhattan_avg(user_fp, device_fp);
    v.threshold = threshold;
    v.classification = v.distance > threshold ? Classification::fraudulent : Classification::honest;
    return v;
}

struct MatchResult {
    std::string best;
    std::map<std::string, double> distances;
};

namespace detail {

inline MatchResult argmin(std::map<std::string, double> distances) {
    if (distances.empty()) {
        throw std::invalid_argument("no candidate devices");
    }
    // std::map iterates ids in lexicographic order, so the first strict
    // minimum wins ties.
    MatchResult out;
    double best = 0.0;
    for (const auto &[id, d] : distances) {
        if (out.best.empty() || d < best) {
            out.best = id;
            best = d;
        }
    }
    out.distances = std::move(distances);
    return out;
}

}  // namespace detail

/// Candidate whose expected fingerprint is closest to the observed one.
inline MatchResult match_device(const std::map<std::string, Fingerprint> &user_fps, const Fingerprint &observed_fp) {
    std::map<std::string, double> distances;
    for (const auto &[id, fp] : user_fps) {
        distances[id] = manhattan_avg(fp, observed_fp);
    }
    return detail::argmin(std::move(distances));
}

/// Static error-vector baseline: closest vector by total Manhattan distance.
inline MatchResult static_match(const std::map<std::string, ErrorVector> &user_vectors, const ErrorVector &observed) {
    std::map<std::string, double> distances;
    for (const auto &[id, vec] : user_vectors) {
        distances[id] = manhattan_total(vec, observed);
    }
    return detail::argmin(std::move(distances));
}

}  // namespace qprobe
