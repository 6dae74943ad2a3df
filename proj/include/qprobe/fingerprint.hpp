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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qprobe {

/// Per-measured-qubit survival probabilities, in outcome-bit order.
struct Fingerprint {
    std::vector<double> survivals;

    Fingerprint() = default;
    explicit Fingerprint(std::vector<double> values) : survivals(std::move(values)) {
        for (double s : survivals) {
            if (!(s >= 0.0 && s <= 1.0)) {
                throw std::invalid_argument("survival probability " + std::to_string(s) + " outside [0, 1]");
            }
        }
    }

    std::size_t size() const {
        return survivals.size();
    }
    double operator[](std::size_t i) const {
        return survivals[i];
    }
    bool operator==(const Fingerprint &) const = default;
};

}  // namespace qprobe
