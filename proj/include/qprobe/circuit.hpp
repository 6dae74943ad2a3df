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

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qprobe/device_profile.hpp"
#include "qprobe/topology.hpp"

namespace qprobe {

/// Classical bit string rendered with bit 0 as the rightmost character, the
/// way measurement outcomes are printed.
class Bitstring {
   public:
    Bitstring() = default;
    explicit Bitstring(std::string text) : text_(std::move(text)) {
        for (char c : text_) {
            if (c != '0' && c != '1') {
                throw std::invalid_argument("bitstring may only contain '0' and '1': '" + text_ + "'");
            }
        }
    }

    /// Builds from bits in index order (bits[0] becomes the rightmost char).
    static Bitstring from_bits(const std::vector<bool> &bits) {
        std::string text(bits.size(), '0');
        for (std::size_t i = 0; i < bits.size(); ++i) {
            text[bits.size() - 1 - i] = bits[i] ? '1' : '0';
        }
        return Bitstring(std::move(text));
    }

    std::size_t size() const {
        return text_.size();
    }
    bool empty() const {
        return text_.empty();
    }
    bool bit(std::size_t index) const {
        return text_.at(text_.size() - 1 - index) == '1';
    }
    const std::string &str() const {
        return text_;
    }

    /// `low` keeps indices 0..low.size()-1, `high` follows it.
    static Bitstring concat(const Bitstring &low, const Bitstring &high) {
        return Bitstring(high.text_ + low.text_);
    }

    auto operator<=>(const Bitstring &) const = default;
    bool operator==(const Bitstring &) const = default;

   private:
    std::string text_;
};

enum class GateKind { H, X, CNOT, SWAP, MEASURE };

inline int arity(GateKind g) {
    return (g == GateKind::CNOT || g == GateKind::SWAP) ? 2 : 1;
}

inline const char *gate_name(GateKind g) {
    switch (g) {
        case GateKind::H:
            return "H";
        case GateKind::X:
            return "X";
        case GateKind::CNOT:
            return "CNOT";
        case GateKind::SWAP:
            return "SWAP";
        case GateKind::MEASURE:
            return "MEASURE";
    }
    return "?";
}

inline GateKind gate_from_name(const std::string &name) {
    for (GateKind g : {GateKind::H, GateKind::X, GateKind::CNOT, GateKind::SWAP, GateKind::MEASURE}) {
        if (name == gate_name(g)) {
            return g;
        }
    }
    throw std::invalid_argument("unknown gate '" + name + "'");
}

/// A gate applied to one or two qubit indices. For CNOT, `qubits()[0]` is
/// the control.
struct Operation {
    GateKind gate = GateKind::H;
    std::array<Qubit, 2> regs{0, 0};

    Operation() = default;
    Operation(GateKind g, Qubit a) : gate(g), regs{a, a} {
        if (arity(g) != 1) {
            throw std::invalid_argument(std::string(gate_name(g)) + " takes two qubits");
        }
    }
    Operation(GateKind g, Qubit a, Qubit b) : gate(g), regs{a, b} {
        if (arity(g) != 2) {
            throw std::invalid_argument(std::string(gate_name(g)) + " takes one qubit");
        }
        if (a == b) {
            throw std::invalid_argument(std::string(gate_name(g)) + " on a repeated qubit");
        }
    }

    std::span<const Qubit> qubits() const {
        return {regs.data(), static_cast<std::size_t>(arity(gate))};
    }
    bool touches(Qubit q) const {
        auto qs = qubits();
        return std::find(qs.begin(), qs.end(), q) != qs.end();
    }

    /// Which profile rate this op draws on when `regs` are physical qubits.
    /// SWAP shares the CNOT rate of its edge.
    ErrorKey error_key() const {
        switch (gate) {
            case GateKind::H:
            case GateKind::X:
                return ErrorKey::single_qubit(regs[0]);
            case GateKind::CNOT:
            case GateKind::SWAP:
                return ErrorKey::cnot(regs[0], regs[1]);
            case GateKind::MEASURE:
                return ErrorKey::measurement(regs[0]);
        }
        return {};
    }

    bool operator==(const Operation &other) const {
        if (gate != other.gate) {
            return false;
        }
        return arity(gate) == 1 ? regs[0] == other.regs[0] : regs == other.regs;
    }
};

/// Circuit over logical qubits whose noiseless output is a single basis
/// state. Every measured qubit is measured once, as the last op touching it.
class LogicalCircuit {
   public:
    LogicalCircuit() = default;
    LogicalCircuit(int num_qubits, std::vector<Operation> ops, Bitstring ideal_output)
        : num_qubits_(num_qubits), ops_(std::move(ops)), ideal_output_(std::move(ideal_output)) {
        if (num_qubits_ < 1) {
            throw std::invalid_argument("circuit needs at least one qubit");
        }
        std::vector<bool> measured(num_qubits_, false);
        for (const Operation &op : ops_) {
            for (Qubit q : op.qubits()) {
                if (q < 0 || q >= num_qubits_) {
                    throw std::invalid_argument("op on qubit " + std::to_string(q) + " outside circuit");
                }
                if (measured[q]) {
                    throw std::invalid_argument("qubit " + std::to_string(q) + " used after measurement");
                }
            }
            if (op.gate == GateKind::MEASURE) {
                measured[op.regs[0]] = true;
                measured_.push_back(op.regs[0]);
            }
        }
        if (ideal_output_.size() != measured_.size()) {
            throw std::invalid_argument("ideal output length does not match measured qubit count");
        }
    }

    int num_qubits() const {
        return num_qubits_;
    }
    const std::vector<Operation> &ops() const {
        return ops_;
    }
    const std::vector<Qubit> &measured_qubits() const {
        return measured_;
    }
    const Bitstring &ideal_output() const {
        return ideal_output_;
    }

   private:
    int num_qubits_ = 0;
    std::vector<Operation> ops_;
    std::vector<Qubit> measured_;
    Bitstring ideal_output_;
};

/// Bernstein-Vazirani circuit for `secret`: input qubit i carries secret bit
/// i (bit 0 rightmost), the ancilla is the last logical qubit, and only the
/// inputs are measured.
inline LogicalCircuit build_bv(const Bitstring &secret) {
    if (secret.empty()) {
        throw std::invalid_argument("BV secret must have at least one bit");
    }
    const int inputs = static_cast<int>(secret.size());
    const Qubit ancilla = inputs;
    std::vector<Operation> ops;
    ops.emplace_back(GateKind::X, ancilla);
    ops.emplace_back(GateKind::H, ancilla);
    for (Qubit q = 0; q < inputs; ++q) {
        ops.emplace_back(GateKind::H, q);
    }
    for (Qubit q = 0; q < inputs; ++q) {
        if (secret.bit(q)) {
            ops.emplace_back(GateKind::CNOT, q, ancilla);
        }
    }
    for (Qubit q = 0; q < inputs; ++q) {
        ops.emplace_back(GateKind::H, q);
    }
    for (Qubit q = 0; q < inputs; ++q) {
        ops.emplace_back(GateKind::MEASURE, q);
    }
    return LogicalCircuit(inputs + 1, std::move(ops), secret);
}

/// Physical op list ready for a device, with the logical/physical layout
/// before and after routing. `measured_logical[i]` produces outcome bit i.
struct TranspiledCircuit {
    std::vector<Operation> ops;
    std::vector<Qubit> initial_mapping;  // logical -> physical
    std::vector<Qubit> final_mapping;    // logical -> physical
    std::vector<Qubit> measured_logical;
    Bitstring ideal_output;

    int num_logical() const {
        return static_cast<int>(initial_mapping.size());
    }

    /// Every physical qubit the circuit occupies or touches, ascending.
    std::vector<Qubit> physical_qubits() const {
        std::set<Qubit> used(initial_mapping.begin(), initial_mapping.end());
        for (const Operation &op : ops) {
            for (Qubit q : op.qubits()) {
                used.insert(q);
            }
        }
        return {used.begin(), used.end()};
    }

    bool operator==(const TranspiledCircuit &) const = default;
};

/// Layout after replaying the SWAPs of `ops` from `initial_mapping`.
inline std::vector<Qubit> replay_swaps(std::span<const Operation> ops, std::vector<Qubit> mapping) {
    for (const Operation &op : ops) {
        if (op.gate != GateKind::SWAP) {
            continue;
        }
        for (Qubit &loc : mapping) {
            if (loc == op.regs[0]) {
                loc = op.regs[1];
            } else if (loc == op.regs[1]) {
                loc = op.regs[0];
            }
        }
    }
    return mapping;
}

/// True iff every register exists on `topology` and every two-qubit op sits
/// on one of its edges.
inline bool topology_compatible(const TranspiledCircuit &circuit, const Topology &topology) {
    for (Qubit q : circuit.initial_mapping) {
        if (!topology.contains(q)) {
            return false;
        }
    }
    for (const Operation &op : circuit.ops) {
        for (Qubit q : op.qubits()) {
            if (!topology.contains(q)) {
                return false;
            }
        }
        if (arity(op.gate) == 2 && !topology.has_edge(op.regs[0], op.regs[1])) {
            return false;
        }
    }
    return true;
}

namespace detail {

inline void check_mapping(const std::vector<Qubit> &mapping, int num_logical, const Topology &topology) {
    if (static_cast<int>(mapping.size()) != num_logical) {
        throw std::invalid_argument("mapping has " + std::to_string(mapping.size()) + " entries for " +
                                    std::to_string(num_logical) + " logical qubits");
    }
    std::set<Qubit> seen;
    for (Qubit p : mapping) {
        if (!topology.contains(p)) {
            throw std::invalid_argument("mapping targets unknown physical qubit " + std::to_string(p));
        }
        if (!seen.insert(p).second) {
            throw std::invalid_argument("mapping collision on physical qubit " + std::to_string(p));
        }
    }
}

}  // namespace detail

/// Places `circuit` on `topology` starting from `initial_mapping`. A CNOT
/// between non-adjacent qubits is preceded by SWAPs that walk the control
/// along the lexicographically smallest shortest path until it neighbours
/// the target. Nothing is swapped back; measurements happen wherever the
/// qubits end up and `final_mapping` records it.
inline TranspiledCircuit transpile(const LogicalCircuit &circuit, const Topology &topology,
                                   const std::vector<Qubit> &initial_mapping) {
    detail::check_mapping(initial_mapping, circuit.num_qubits(), topology);
    std::vector<Qubit> where = initial_mapping;
    TranspiledCircuit out;
    out.initial_mapping = initial_mapping;
    out.measured_logical = circuit.measured_qubits();
    out.ideal_output = circuit.ideal_output();

    auto apply_swap = [&](Qubit a, Qubit b) {
        out.ops.emplace_back(GateKind::SWAP, a, b);
        for (Qubit &loc : where) {
            if (loc == a) {
                loc = b;
            } else if (loc == b) {
                loc = a;
            }
        }
    };

    for (const Operation &op : circuit.ops()) {
        if (arity(op.gate) == 1) {
            out.ops.emplace_back(op.gate, where[op.regs[0]]);
            continue;
        }
        Qubit control = where[op.regs[0]];
        Qubit target = where[op.regs[1]];
        if (!topology.has_edge(control, target)) {
            auto path = topology.shortest_path(control, target);
            if (path.empty()) {
                throw TopologyError("no path between physical qubits " + std::to_string(control) + " and " +
                                    std::to_string(target));
            }
            for (std::size_t i = 0; i + 2 < path.size(); ++i) {
                apply_swap(path[i], path[i + 1]);
            }
            control = where[op.regs[0]];
        }
        out.ops.emplace_back(op.gate, control, target);
    }
    out.final_mapping = where;
    return out;
}

struct SubProbe {
    Bitstring secret;
    std::vector<Qubit> mapping;
};

/// Places independent BV subcircuits side by side on one device. Logical
/// qubits and outcome bits are numbered subprobe by subprobe. The regions
/// (occupied plus touched physical qubits) must be disjoint and at least two
/// hops apart.
inline TranspiledCircuit compose_probe(const std::vector<SubProbe> &subprobes, const Topology &topology) {
    if (subprobes.empty()) {
        throw std::invalid_argument("composite probe needs at least one subprobe");
    }
    std::vector<TranspiledCircuit> parts;
    std::vector<std::vector<Qubit>> regions;
    for (const SubProbe &sub : subprobes) {
        parts.push_back(transpile(build_bv(sub.secret), topology, sub.mapping));
        regions.push_back(parts.back().physical_qubits());
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
        for (std::size_t j = i + 1; j < regions.size(); ++j) {
            auto d = topology.set_distance(regions[i], regions[j]);
            if (d && *d < 2) {
                throw std::invalid_argument("subprobes " + std::to_string(i) + " and " + std::to_string(j) +
                                            (*d == 0 ? " overlap" : " are adjacent"));
            }
        }
    }
    TranspiledCircuit out = std::move(parts.front());
    for (std::size_t k = 1; k < parts.size(); ++k) {
        const TranspiledCircuit &part = parts[k];
        Qubit offset = out.num_logical();
        out.ops.insert(out.ops.end(), part.ops.begin(), part.ops.end());
        out.initial_mapping.insert(out.initial_mapping.end(), part.initial_mapping.begin(),
                                   part.initial_mapping.end());
        out.final_mapping.insert(out.final_mapping.end(), part.final_mapping.begin(), part.final_mapping.end());
        for (Qubit q : part.measured_logical) {
            out.measured_logical.push_back(q + offset);
        }
        out.ideal_output = Bitstring::concat(out.ideal_output, part.ideal_output);
    }
    return out;
}

inline nlohmann::json to_json(const TranspiledCircuit &circuit) {
    nlohmann::json ops = nlohmann::json::array();
    for (const Operation &op : circuit.ops) {
        auto qs = op.qubits();
        ops.push_back({{"gate", gate_name(op.gate)}, {"qubits", std::vector<Qubit>(qs.begin(), qs.end())}});
    }
    return {
        {"ops", ops},
        {"initial_mapping", circuit.initial_mapping},
        {"final_mapping", circuit.final_mapping},
        {"measured_logical", circuit.measured_logical},
        {"ideal_output", circuit.ideal_output.str()},
    };
}

inline TranspiledCircuit transpiled_from_json(const nlohmann::json &doc) {
    TranspiledCircuit out;
    for (const auto &op : doc.at("ops")) {
        GateKind g = gate_from_name(op.at("gate").get<std::string>());
        auto qs = op.at("qubits").get<std::vector<Qubit>>();
        if (static_cast<int>(qs.size()) != arity(g)) {
            throw std::invalid_argument(std::string(gate_name(g)) + " with wrong number of qubits");
        }
        out.ops.push_back(qs.size() == 1 ? Operation(g, qs[0]) : Operation(g, qs[0], qs[1]));
    }
    out.initial_mapping = doc.at("initial_mapping").get<std::vector<Qubit>>();
    out.final_mapping = doc.at("final_mapping").get<std::vector<Qubit>>();
    out.measured_logical = doc.at("measured_logical").get<std::vector<Qubit>>();
    out.ideal_output = Bitstring(doc.at("ideal_output").get<std::string>());
    if (out.final_mapping.size() != out.initial_mapping.size() ||
        out.ideal_output.size() != out.measured_logical.size()) {
        throw std::invalid_argument("inconsistent transpiled circuit document");
    }
    for (Qubit q : out.measured_logical) {
        if (q < 0 || q >= out.num_logical()) {
            throw std::invalid_argument("measured logical qubit " + std::to_string(q) + " out of range");
        }
    }
    if (replay_swaps(out.ops, out.initial_mapping) != out.final_mapping) {
        throw std::invalid_argument("final_mapping does not follow from the SWAPs");
    }
    return out;
}

}  // namespace qprobe
