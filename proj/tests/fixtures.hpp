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

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qprobe/device_profile.hpp"
#include "qprobe/topology.hpp"

namespace qprobe::testing {

/// T-shaped 5-qubit device. Rates are the ones used in the worked
/// survival example: H on qubit 1 0.0015, on qubit 3 0.0004, CNOT 0.013,
/// measurement of qubit 3 0.042.
inline DeviceProfile t5_profile(const std::string &id = "t5") {
    Topology topo = Topology::t_shape5();
    std::map<Edge, double> cnot{
        {Edge(0, 1), 0.011}, {Edge(1, 2), 0.009}, {Edge(1, 3), 0.013}, {Edge(3, 4), 0.013}};
    std::vector<double> single{0.0003, 0.0015, 0.0002, 0.0004, 0.0005};
    std::vector<double> meas{0.031, 0.027, 0.035, 0.042, 0.019};
    return DeviceProfile(id, topo, cnot, single, meas, "2024-03-01T10:00:00Z");
}

inline DeviceProfile zero_profile(const Topology &topo, const std::string &id = "ideal") {
    std::map<Edge, double> cnot;
    for (const Edge &e : topo.edges()) {
        cnot[e] = 0.0;
    }
    std::vector<double> zeros(topo.num_qubits(), 0.0);
    return DeviceProfile(id, topo, cnot, zeros, zeros);
}

/// Every rate drawn uniformly from [0, max_rate].
inline DeviceProfile random_profile(const Topology &topo, std::mt19937_64 &rng, double max_rate,
                                    const std::string &id = "rand") {
    std::uniform_real_distribution<double> u(0.0, max_rate);
    std::map<Edge, double> cnot;
    for (const Edge &e : topo.edges()) {
        cnot[e] = u(rng);
    }
    std::vector<double> single(topo.num_qubits()), meas(topo.num_qubits());
    for (int q = 0; q < topo.num_qubits(); ++q) {
        single[q] = u(rng);
        meas[q] = u(rng);
    }
    return DeviceProfile(id, topo, cnot, single, meas, "2024-03-01T10:00:00Z");
}

/// Connected random graph: a random spanning tree plus a few extra edges.
inline Topology random_topology(std::mt19937_64 &rng, int n, int extra_edges) {
    std::vector<Edge> edges;
    std::map<Edge, bool> seen;
    for (int q = 1; q < n; ++q) {
        std::uniform_int_distribution<int> pick(0, q - 1);
        Edge e(pick(rng), q);
        seen[e] = true;
        edges.push_back(e);
    }
    std::uniform_int_distribution<int> any(0, n - 1);
    for (int k = 0; k < extra_edges; ++k) {
        int a = any(rng), b = any(rng);
        if (a != b && !seen[Edge(a, b)]) {
            seen[Edge(a, b)] = true;
            edges.emplace_back(a, b);
        }
    }
    return Topology(n, edges);
}

}  // namespace qprobe::testing
