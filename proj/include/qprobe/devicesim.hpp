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

// Stand-in for cloud hardware. Each measured qubit's ideal bit is flipped
// independently once per operation that touches its current location
// (three times per SWAP), with probability e + h where e is the device's
// true rate for that operation and h an extra hidden rate that no
// advertised profile reflects. Randomness is a pure function of
// (seed, shot, op slot, qubit), so results do not depend on thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qprobe/circuit.hpp"
#include "qprobe/device_profile.hpp"
#include "qprobe/errors.hpp"
#include "qprobe/fingerprint.hpp"

namespace qprobe {

struct NoiseSpec {
    DeviceProfile true_profile;
    double hidden_rate = 0.0;
};

/// Outcome histogram keyed by bitstring (bit 0 rightmost).
struct Counts {
    std::map<std::string, std::uint64_t> outcomes;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    void merge(const Counts &other) {
        for (const auto &[k, v] : other.outcomes) {
            outcomes[k] += v;
        }
        shots += other.shots;
    }
    bool operator==(const Counts &) const = default;
};

inline nlohmann::json to_json(const Counts &counts) {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto &[k, v] : counts.outcomes) {
        hist[k] = v;
    }
    return {{"counts", hist}, {"shots", counts.shots}, {"seed", counts.seed}};
}

inline Counts counts_from_json(const nlohmann::json &doc) {
    Counts c;
    for (const auto &[k, v] : doc.at("counts").items()) {
        c.outcomes[k] = v.get<std::uint64_t>();
    }
    c.shots = doc.at("shots").get<std::uint64_t>();
    c.seed = doc.value("seed", std::uint64_t{0});
    std::uint64_t total = 0;
    for (const auto &[k, v] : c.outcomes) {
        total += v;
    }
    if (total != c.shots) {
        throw std::invalid_argument("counts sum to " + std::to_string(total) + ", shots says " +
                                    std::to_string(c.shots));
    }
    return c;
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) determined by the four counters.
inline double counter_uniform(std::uint64_t seed, std::uint64_t shot, std::uint64_t slot, std::uint64_t qubit) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ shot);
    h = mix64(h ^ (slot * 0xd6e8feb86659fd93ULL));
    h = mix64(h ^ (qubit * 0xa0761d6478bd642fULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

struct FlipOpportunity {
    std::uint64_t slot;  // 3 * op index + constituent index
    double probability;
};

inline void check_noise(const NoiseSpec &noise) {
    if (!(noise.hidden_rate >= 0.0 && noise.hidden_rate < 1.0)) {
        throw std::invalid_argument("hidden rate must be in [0, 1)");
    }
}

}  // namespace detail

/// Flip opportunities met by each measured qubit, in outcome-bit order.
inline std::vector<std::vector<detail::FlipOpportunity>> flip_paths(const TranspiledCircuit &circuit,
                                                                    const NoiseSpec &noise) {
    detail::check_noise(noise);
    const DeviceProfile &profile = noise.true_profile;
    if (!topology_compatible(circuit, profile.topology())) {
        throw TopologyError("circuit does not fit the topology of " + profile.device_id());
    }
    std::vector<std::vector<detail::FlipOpportunity>> paths;
    for (Qubit logical : circuit.measured_logical) {
        std::vector<detail::FlipOpportunity> path;
        Qubit loc = circuit.initial_mapping.at(logical);
        for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
            const Operation &op = circuit.ops[i];
            if (!op.touches(loc)) {
                continue;
            }
            double p = profile.rate(op.error_key()) + noise.hidden_rate;
            if (p >= 1.0) {
                throw std::invalid_argument("flip probability e + h reaches 1 on " + op.error_key().label());
            }
            if (op.gate == GateKind::SWAP) {
                for (std::uint64_t c = 0; c < 3; ++c) {
                    path.push_back({3 * i + c, p});
                }
                loc = (loc == op.regs[0]) ? op.regs[1] : op.regs[0];
                continue;
            }
            path.push_back({3 * i, p});
            if (op.gate == GateKind::MEASURE) {
                break;
            }
        }
        paths.push_back(std::move(path));
    }
    return paths;
}

/// Samples `shots` noisy executions. Identical arguments give identical
/// counts for any `threads`.
inline Counts execute(const TranspiledCircuit &circuit, const NoiseSpec &noise, std::uint64_t shots,
                      std::uint64_t seed, unsigned threads = 1) {
    if (shots < 1) {
        throw std::invalid_argument("shots must be at least 1");
    }
    const auto paths = flip_paths(circuit, noise);
    const std::size_t width = paths.size();

    auto run_block = [&](std::uint64_t begin, std::uint64_t end, Counts &out) {
        std::string outcome(width, '0');
        for (std::uint64_t shot = begin; shot < end; ++shot) {
            for (std::size_t i = 0; i < width; ++i) {
                bool bit = circuit.ideal_output.bit(i);
                for (const auto &flip : paths[i]) {
                    if (detail::counter_uniform(seed, shot, flip.slot, i) < flip.probability) {
                        bit = !bit;
                    }
                }
                outcome[width - 1 - i] = bit ? '1' : '0';
            }
            ++out.outcomes[outcome];
        }
        out.shots = end - begin;
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(shots, 64))));
    std::vector<Counts> partial(threads);
    if (threads == 1) {
        run_block(0, shots, partial[0]);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            std::uint64_t begin = shots * t / threads;
            std::uint64_t end = shots * (t + 1) / threads;
            workers.emplace_back([&, begin, end, t] { run_block(begin, end, partial[t]); });
        }
    }
    Counts total;
    for (const Counts &c : partial) {
        total.merge(c);
    }
    total.seed = seed;
    return total;
}

/// Closed-form survival under the flip model: a qubit survives when it is
/// flipped an even number of times, which happens with probability
/// (1 + prod(1 - 2 p_k)) / 2.
inline Fingerprint exact_survival(const TranspiledCircuit &circuit, const NoiseSpec &noise) {
    std::vector<double> out;
    for (const auto &path : flip_paths(circuit, noise)) {
        double product = 1.0;
        for (const auto &flip : path) {
            product *= 1.0 - 2.0 * flip.probability;
        }
        out.push_back((1.0 + product) / 2.0);
    }
    return Fingerprint(std::move(out));
}

/// Marginal probability that each outcome bit equals the ideal bit.
inline Fingerprint survival_from_counts(const Counts &counts, const Bitstring &ideal_output) {
    if (counts.shots == 0 || counts.outcomes.empty()) {
        throw std::invalid_argument("counts are empty");
    }
    const std::size_t width = ideal_output.size();
    std::vector<std::uint64_t> hits(width, 0);
    std::uint64_t total = 0;
    for (const auto &[key, n] : counts.outcomes) {
        Bitstring outcome(key);
        if (outcome.size() != width) {
            throw std::invalid_argument("outcome '" + key + "' does not match ideal output length " +
                                        std::to_string(width));
        }
        for (std::size_t i = 0; i < width; ++i) {
            if (outcome.bit(i) == ideal_output.bit(i)) {
                hits[i] += n;
            }
        }
        total += n;
    }
    if (total != counts.shots) {
        throw std::invalid_argument("counts do not sum to shots");
    }
    std::vector<double> out(width);
    for (std::size_t i = 0; i < width; ++i) {
        out[i] = static_cast<double>(hits[i]) / static_cast<double>(total);
    }
    return Fingerprint(std::move(out));
}

/// Seed of round `round`; round 0 uses `seed` itself.
inline std::uint64_t round_seed(std::uint64_t seed, std::uint64_t round) {
    return round == 0 ? seed : detail::mix64(seed ^ detail::mix64(round));
}

/// Counts pooled over `rounds` executions with distinct derived seeds.
inline Counts run_rounds_counts(const TranspiledCircuit &circuit, const NoiseSpec &noise,
                                std::uint64_t shots_per_round, std::uint64_t rounds, std::uint64_t seed,
                                unsigned threads = 1) {
    if (rounds < 1) {
        throw std::invalid_argument("rounds must be at least 1");
    }
    Counts pooled;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        pooled.merge(execute(circuit, noise, shots_per_round, round_seed(seed, r), threads));
    }
    pooled.seed = seed;
    return pooled;
}

inline Fingerprint run_rounds(const TranspiledCircuit &circuit, const NoiseSpec &noise,
                              std::uint64_t shots_per_round, std::uint64_t rounds, std::uint64_t seed,
                              unsigned threads = 1) {
    return survival_from_counts(run_rounds_counts(circuit, noise, shots_per_round, rounds, seed, threads),
                                circuit.ideal_output);
}

}  // namespace qprobe
