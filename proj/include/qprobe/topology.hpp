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
#include <compare>
#include <cstddef>
#include <deque>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qprobe/errors.hpp"

namespace qprobe {

using Qubit = int;

/// Unordered coupling between two physical qubits, stored with lo < hi.
struct Edge {
    Qubit lo = 0;
    Qubit hi = 0;

    Edge() = default;
    Edge(Qubit a, Qubit b) : lo(std::min(a, b)), hi(std::max(a, b)) {
    }

    bool touches(Qubit q) const {
        return q == lo || q == hi;
    }
    std::string key() const {
        return std::to_string(lo) + "-" + std::to_string(hi);
    }

    auto operator<=>(const Edge &) const = default;
    bool operator==(const Edge &) const = default;
};

/// Coupling graph of a device.
class Topology {
   public:
    Topology() = default;

    Topology(int num_qubits, const std::vector<Edge> &edges) : num_qubits_(num_qubits) {
        if (num_qubits < 1) {
            throw ProfileError("num_qubits", "must be positive, got " + std::to_string(num_qubits));
        }
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const Edge &e = edges[i];
            std::string path = "edges[" + std::to_string(i) + "]";
            if (e.lo < 0 || e.hi >= num_qubits) {
                throw ProfileError(path, "edge " + e.key() + " references unknown qubit");
            }
            if (e.lo == e.hi) {
                throw ProfileError(path, "self-loop on qubit " + std::to_string(e.lo));
            }
            if (!edges_.insert(e).second) {
                throw ProfileError(path, "duplicate edge " + e.key());
            }
        }
        adjacency_.assign(num_qubits, {});
        for (const Edge &e : edges_) {
            adjacency_[e.lo].push_back(e.hi);
            adjacency_[e.hi].push_back(e.lo);
        }
        for (auto &n : adjacency_) {
            std::sort(n.begin(), n.end());
        }
    }

    Topology(int num_qubits, std::initializer_list<std::pair<Qubit, Qubit>> pairs)
        : Topology(num_qubits, to_edges(pairs)) {
    }

    int num_qubits() const {
        return num_qubits_;
    }
    const std::set<Edge> &edges() const {
        return edges_;
    }
    bool contains(Qubit q) const {
        return q >= 0 && q < num_qubits_;
    }
    bool has_edge(Qubit a, Qubit b) const {
        return a != b && edges_.count(Edge(a, b)) > 0;
    }
    /// Neighbours of `q` in ascending order.
    const std::vector<Qubit> &neighbors(Qubit q) const {
        return adjacency_.at(q);
    }

    /// Hop distances from `source` to every qubit; unreachable qubits get nullopt.
    std::vector<std::optional<int>> distances_from(Qubit source) const {
        std::vector<std::optional<int>> dist(num_qubits_);
        std::deque<Qubit> frontier{source};
        dist.at(source) = 0;
        while (!frontier.empty()) {
            Qubit q = frontier.front();
            frontier.pop_front();
            for (Qubit n : adjacency_[q]) {
                if (!dist[n]) {
                    dist[n] = *dist[q] + 1;
                    frontier.push_back(n);
                }
            }
        }
        return dist;
    }

    /// Lexicographically smallest shortest path from `from` to `to`, both
    /// endpoints included. Empty if `to` is unreachable.
    std::vector<Qubit> shortest_path(Qubit from, Qubit to) const {
        auto dist = distances_from(to);
        if (!dist.at(from)) {
            return {};
        }
        std::vector<Qubit> path{from};
        Qubit at = from;
        while (at != to) {
            for (Qubit n : adjacency_[at]) {
                if (dist[n] && *dist[n] == *dist[at] - 1) {
                    at = n;
                    break;
                }
            }
            path.push_back(at);
        }
        return path;
    }

    /// Minimum hop distance between any member of `a` and any member of `b`.
    std::optional<int> set_distance(const std::vector<Qubit> &a, const std::vector<Qubit> &b) const {
        std::optional<int> best;
        for (Qubit q : a) {
            auto dist = distances_from(q);
            for (Qubit r : b) {
                if (dist.at(r) && (!best || *dist[r] < *best)) {
                    best = dist[r];
                }
            }
        }
        return best;
    }

    bool operator==(const Topology &other) const {
        return num_qubits_ == other.num_qubits_ && edges_ == other.edges_;
    }

    /// Open chain 0-1-...-(n-1).
    static Topology line(int n) {
        std::vector<Edge> edges;
        for (int q = 0; q + 1 < n; ++q) {
            edges.emplace_back(q, q + 1);
        }
        return Topology(n, edges);
    }

    /// 5-qubit T layout used by the Quito/Lima/Belem class of devices.
    static Topology t_shape5() {
        return Topology(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
    }

    /// 7-qubit H layout used by the Perth class of devices.
    static Topology h_shape7() {
        return Topology(7, {{0, 1}, {1, 2}, {1, 3}, {3, 5}, {4, 5}, {5, 6}});
    }

    /// 127-qubit heavy-hex lattice of the Eagle processor family: seven rows
    /// joined by four bridge qubits between each pair of adjacent rows.
    static Topology heavy_hex127() {
        std::vector<Edge> edges;
        struct Row {
            int first;
            int last;
        };
        const Row rows[] = {{0, 13}, {18, 32}, {37, 51}, {56, 70}, {75, 89}, {94, 108}, {113, 126}};
        for (const Row &r : rows) {
            for (int q = r.first; q < r.last; ++q) {
                edges.emplace_back(q, q + 1);
            }
        }
        // Bridges hang from columns 0,4,8,12 below even rows and 2,6,10,14
        // below odd rows; the short last row is shifted by one column.
        for (int k = 0; k < 6; ++k) {
            const Row &up = rows[k];
            const Row &down = rows[k + 1];
            int bridge = up.last + 1;
            int up_offset = (k % 2 == 0) ? 0 : 2;
            int down_offset = (k == 5) ? 1 : up_offset;
            for (int j = 0; j < 4; ++j) {
                edges.emplace_back(up.first + up_offset + 4 * j, bridge + j);
                edges.emplace_back(bridge + j, down.first + down_offset + 4 * j);
            }
        }
        return Topology(127, edges);
    }

   private:
    static std::vector<Edge> to_edges(std::initializer_list<std::pair<Qubit, Qubit>> pairs) {
        std::vector<Edge> edges;
        for (auto [a, b] : pairs) {
            edges.emplace_back(a, b);
        }
        return edges;
    }

    int num_qubits_ = 0;
    std::set<Edge> edges_;
    std::vector<std::vector<Qubit>> adjacency_;
};

}  // namespace qprobe
