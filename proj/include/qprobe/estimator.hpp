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

// User-side fingerprint: walks the transpiled op list once, tracking every
// logical qubit as (logical index, physical location, survival). A gate or
// measurement touching a qubit's location multiplies its survival by
// (1 - e); a SWAP costs (1 - e)^3 with e the CNOT rate of its edge and
// exchanges the two locations. A measured qubit's survival is final.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "qprobe/circuit.hpp"
#include "qprobe/device_profile.hpp"
#include "qprobe/fingerprint.hpp"

namespace qprobe {

struct QubitTrack {
    Qubit logical = 0;
    Qubit location = 0;
    double survival = 1.0;

    bool operator==(const QubitTrack &) const = default;
};

/// Tracks after op `op_index`; `op_index` is empty for the initial state.
struct TraceStep {
    std::optional<std::size_t> op_index;
    std::vector<QubitTrack> tracks;
};

namespace detail {

class SurvivalWalk {
   public:
    SurvivalWalk(const TranspiledCircuit &circuit, const DeviceProfile &profile)
        : circuit_(circuit), profile_(profile), measured_(circuit.num_logical(), false) {
        if (!topology_compatible(circuit, profile.topology())) {
            throw TopologyError("circuit does not fit the topology of " + profile.device_id());
        }
        for (Qubit q = 0; q < circuit.num_logical(); ++q) {
            tracks_.push_back({q, circuit.initial_mapping[q], 1.0});
        }
        occupant_.assign(profile.num_qubits(), -1);
        for (const QubitTrack &t : tracks_) {
            occupant_[t.location] = t.logical;
        }
    }

    void step(const Operation &op) {
        const double e = profile_.rate(op.error_key());
        if (op.gate == GateKind::SWAP) {
            const double keep = std::pow(1.0 - e, 3);
            Qubit a = op.regs[0];
            Qubit b = op.regs[1];
            Qubit qa = occupant_[a];
            Qubit qb = occupant_[b];
            for (Qubit q : {qa, qb}) {
                if (q >= 0 && !measured_[q]) {
                    tracks_[q].survival *= keep;
                }
            }
            if (qa >= 0) {
                tracks_[qa].location = b;
            }
            if (qb >= 0) {
                tracks_[qb].location = a;
            }
            std::swap(occupant_[a], occupant_[b]);
            return;
        }
        for (Qubit loc : op.qubits()) {
            Qubit q = occupant_[loc];
            if (q >= 0 && !measured_[q]) {
                tracks_[q].survival *= 1.0 - e;
            }
        }
        if (op.gate == GateKind::MEASURE && occupant_[op.regs[0]] >= 0) {
            measured_[occupant_[op.regs[0]]] = true;
        }
    }

    const std::vector<QubitTrack> &tracks() const {
        return tracks_;
    }

    Fingerprint fingerprint() const {
        std::vector<double> out;
        out.reserve(circuit_.measured_logical.size());
        for (Qubit q : circuit_.measured_logical) {
            out.push_back(tracks_.at(q).survival);
        }
        return Fingerprint(std::move(out));
    }

   private:
    const TranspiledCircuit &circuit_;
    const DeviceProfile &profile_;
    std::vector<QubitTrack> tracks_;
    std::vector<Qubit> occupant_;  // physical -> logical, -1 when empty
    std::vector<bool> measured_;
};

}  // namespace detail

/// Expected survival of each measured qubit if `circuit` runs on the device
/// described by `profile`. Linear in the number of ops.
inline Fingerprint estimate_fingerprint(const TranspiledCircuit &circuit, const DeviceProfile &profile) {
    detail::SurvivalWalk walk(circuit, profile);
    for (const Operation &op : circuit.ops) {
        walk.step(op);
    }
    return walk.fingerprint();
}

/// Same walk as estimate_fingerprint, keeping a snapshot after every op.
inline std::vector<TraceStep> trace_survival(const TranspiledCircuit &circuit, const DeviceProfile &profile) {
    detail::SurvivalWalk walk(circuit, profile);
    std::vector<TraceStep> steps;
    steps.reserve(circuit.ops.size() + 1);
    steps.push_back({std::nullopt, walk.tracks()});
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        walk.step(circuit.ops[i]);
        steps.push_back({i, walk.tracks()});
    }
    return steps;
}

}  // namespace qprobe
