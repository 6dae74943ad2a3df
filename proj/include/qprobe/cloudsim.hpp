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

// Mock quantum cloud. Users see advertised profiles and submit jobs; the
// provider side decides which device's true noise actually runs them.
// Ground truth (true noise, executing device) is only reachable through
// GroundTruth, never through UserClient.

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qprobe/circuit.hpp"
#include "qprobe/device_profile.hpp"
#include "qprobe/devicesim.hpp"
#include "qprobe/errors.hpp"

namespace qprobe {

struct CatalogEntry {
    std::string device_id;
    DeviceProfile advertised_profile;
    NoiseSpec true_noise;

    /// Honest entry: advertises exactly the true profile.
    static CatalogEntry honest(DeviceProfile profile, double hidden_rate = 0.0) {
        std::string id = profile.device_id();
        DeviceProfile advertised = profile;
        return {std::move(id), std::move(advertised), NoiseSpec{std::move(profile), hidden_rate}};
    }

    /// Entry whose advertised rates are fabricated from the true ones.
    static CatalogEntry fabricated(DeviceProfile profile, const FabricationStrategy &strategy,
                                   double hidden_rate = 0.0) {
        CatalogEntry entry = honest(std::move(profile), hidden_rate);
        entry.advertised_profile = fabricate(entry.true_noise.true_profile, strategy);
        return entry;
    }
};

struct HonestMode {};
struct Substitution {
    std::string victim;
    std::string actual;
};
struct Fabrication {
    std::string device_id;
    FabricationStrategy strategy;
};
using AttackConfig = std::variant<HonestMode, Substitution, Fabrication>;

class JobResult {
   public:
    Counts counts;
    std::string requested;

   private:
    friend class CloudPlatform;
    friend struct GroundTruth;
    std::string executed_on_;
};

class CloudPlatform {
   public:
    void register_device(CatalogEntry entry) {
        std::unique_lock lock(mutex_);
        if (entry.device_id.empty()) {
            throw std::invalid_argument("device id must be non-empty");
        }
        if (entry.advertised_profile.device_id() != entry.device_id ||
            entry.true_noise.true_profile.device_id() != entry.device_id) {
            throw std::invalid_argument("catalog entry profiles must carry device id " + entry.device_id);
        }
        if (!(entry.advertised_profile.topology() == entry.true_noise.true_profile.topology())) {
            throw std::invalid_argument("advertised and true topology of " + entry.device_id + " differ");
        }
        if (catalog_.count(entry.device_id)) {
            throw std::invalid_argument("duplicate device id " + entry.device_id);
        }
        std::string id = entry.device_id;
        catalog_.emplace(std::move(id), std::move(entry));
    }

    /// Switches the provider's behaviour. HonestMode clears substitutions
    /// (fabricated profiles stay fabricated until re-registered).
    void mount(const AttackConfig &attack) {
        std::unique_lock lock(mutex_);
        if (std::holds_alternative<HonestMode>(attack)) {
            substitutions_.clear();
        } else if (const auto *sub = std::get_if<Substitution>(&attack)) {
            find_locked(sub->victim);
            find_locked(sub->actual);
            substitutions_[sub->victim] = sub->actual;
        } else {
            const auto &fab = std::get<Fabrication>(attack);
            CatalogEntry &entry = find_locked(fab.device_id);
            entry.advertised_profile = fabricate(entry.true_noise.true_profile, fab.strategy);
        }
    }

    std::vector<std::string> device_ids() const {
        std::shared_lock lock(mutex_);
        std::vector<std::string> ids;
        for (const auto &[id, entry] : catalog_) {
            ids.push_back(id);
        }
        return ids;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return catalog_.size();
    }

    DeviceProfile get_profile(const std::string &device_id) const {
        std::shared_lock lock(mutex_);
        return find_locked(device_id).advertised_profile;
    }

    /// Runs `circuit` exactly as submitted. Throws TopologyError when the
    /// executing device cannot host it.
    JobResult submit(const std::string &device_id, const TranspiledCircuit &circuit, std::uint64_t shots,
                     std::uint64_t rounds, std::uint64_t seed) const {
        NoiseSpec noise;
        std::string executed_on;
        {
            std::shared_lock lock(mutex_);
            find_locked(device_id);
            auto sub = substitutions_.find(device_id);
            executed_on = sub == substitutions_.end() ? device_id : sub->second;
            noise = find_locked(executed_on).true_noise;
        }
        if (!topology_compatible(circuit, noise.true_profile.topology())) {
            throw TopologyError("job for " + device_id + " does not fit the device topology");
        }
        JobResult result;
        result.counts = run_rounds_counts(circuit, noise, shots, rounds, seed);
        result.requested = device_id;
        result.executed_on_ = std::move(executed_on);
        return result;
    }

   private:
    friend struct GroundTruth;

    const CatalogEntry &find_locked(const std::string &device_id) const {
        auto it = catalog_.find(device_id);
        if (it == catalog_.end()) {
            throw std::out_of_range("unknown device " + device_id);
        }
        return it->second;
    }
    CatalogEntry &find_locked(const std::string &device_id) {
        auto it = catalog_.find(device_id);
        if (it == catalog_.end()) {
            throw std::out_of_range("unknown device " + device_id);
        }
        return it->second;
    }

    mutable std::shared_mutex mutex_;
    std::map<std::string, CatalogEntry> catalog_;
    std::map<std::string, std::string> substitutions_;
};

/// What the user is allowed to do: read advertised profiles and submit.
class UserClient {
   public:
    explicit UserClient(const CloudPlatform &platform) : platform_(&platform) {
    }

    std::vector<std::string> device_ids() const {
        return platform_->device_ids();
    }
    DeviceProfile get_profile(const std::string &device_id) const {
        return platform_->get_profile(device_id);
    }
    JobResult submit(const std::string &device_id, const TranspiledCircuit &circuit, std::uint64_t shots,
                     std::uint64_t rounds, std::uint64_t seed) const {
        return platform_->submit(device_id, circuit, shots, rounds, seed);
    }

   private:
    const CloudPlatform *platform_;
};

/// Provider-side facts for tests and experiment bookkeeping.
struct GroundTruth {
    static const std::string &executed_on(const JobResult &result) {
        return result.executed_on_;
    }
    static NoiseSpec true_noise(const CloudPlatform &platform, const std::string &device_id) {
        std::shared_lock lock(platform.mutex_);
        return platform.find_locked(device_id).true_noise;
    }
};

}  // namespace qprobe
