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

// Experiment runners behind the qprobe CLI: device identification,
// substitution and fabrication detection, and the threshold sweep. Each
// returns an ExperimentReport whose summary is a pure function of its
// trial records.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qprobe/circuit.hpp"
#include "qprobe/cloudsim.hpp"
#include "qprobe/detector.hpp"
#include "qprobe/device_profile.hpp"
#include "qprobe/devicesim.hpp"
#include "qprobe/estimator.hpp"

namespace qprobe {

// ---------------------------------------------------------------------------
// Fleet configuration

struct FleetMember {
    DeviceProfile profile;
    std::optional<FabricationStrategy> fabrication;
    double hidden_rate = 0.0;
};

struct Fleet {
    std::vector<FleetMember> members;

    const FleetMember &member(const std::string &device_id) const {
        for (const auto &m : members) {
            if (m.profile.device_id() == device_id) {
                return m;
            }
        }
        throw std::out_of_range("device " + device_id + " is not in the fleet");
    }
};

inline std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Fleet document: a JSON list of {"profile_path", "fabrication"?,
/// "hidden_rate"?}. Relative profile paths resolve against `base_dir`.
inline Fleet fleet_from_json(const nlohmann::json &doc, const std::filesystem::path &base_dir) {
    if (!doc.is_array()) {
        throw std::invalid_argument("fleet config must be a JSON list");
    }
    Fleet fleet;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto &entry = doc[i];
        std::string where = "fleet[" + std::to_string(i) + "]";
        if (!entry.is_object() || !entry.contains("profile_path")) {
            throw std::invalid_argument(where + ": missing profile_path");
        }
        std::filesystem::path path = entry.at("profile_path").get<std::string>();
        if (path.is_relative()) {
            path = base_dir / path;
        }
        FleetMember member;
        try {
            member.profile = load_profile(read_text_file(path));
        } catch (const ProfileError &e) {
            throw ProfileError(path.string() + (e.path().empty() ? "" : ":" + e.path()), e.what());
        }
        if (entry.contains("fabrication") && !entry.at("fabrication").is_null()) {
            member.fabrication = fabrication_from_json(entry.at("fabrication"));
        }
        member.hidden_rate = entry.value("hidden_rate", 0.0);
        if (!(member.hidden_rate >= 0.0 && member.hidden_rate < 1.0)) {
            throw std::invalid_argument(where + ": hidden_rate must be in [0, 1)");
        }
        for (const auto &other : fleet.members) {
            if (other.profile.device_id() == member.profile.device_id()) {
                throw std::invalid_argument(where + ": duplicate device " + member.profile.device_id());
            }
        }
        fleet.members.push_back(std::move(member));
    }
    return fleet;
}

inline Fleet load_fleet(const std::filesystem::path &path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(path.string() + ": malformed JSON: " + e.what());
    }
    return fleet_from_json(doc, path.parent_path());
}

/// Registers every fleet member. `hidden_rate`, when set, replaces each
/// member's own hidden rate.
inline void populate(CloudPlatform &cloud, const Fleet &fleet, std::optional<double> hidden_rate = std::nullopt) {
    for (const auto &m : fleet.members) {
        double h = hidden_rate.value_or(m.hidden_rate);
        cloud.register_device(m.fabrication ? CatalogEntry::fabricated(m.profile, *m.fabrication, h)
                                            : CatalogEntry::honest(m.profile, h));
    }
}

// ---------------------------------------------------------------------------
// Probe specifications

/// One or more BV subprobes with their initial layouts.
struct ProbeSpec {
    std::vector<SubProbe> parts;

    std::string label() const {
        std::string out;
        for (const auto &p : parts) {
            out += (out.empty() ? "bv:" : "+bv:") + p.secret.str();
        }
        return out;
    }

    std::string mapping_label() const {
        std::string out;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            if (k) {
                out += "/";
            }
            for (std::size_t i = 0; i < parts[k].mapping.size(); ++i) {
                out += (i ? "," : "") + std::to_string(parts[k].mapping[i]);
            }
        }
        return out;
    }

    int num_qubits() const {
        int n = 0;
        for (const auto &p : parts) {
            n += static_cast<int>(p.secret.size()) + 1;
        }
        return n;
    }

    TranspiledCircuit build(const Topology &topology) const {
        return compose_probe(parts, topology);
    }
};

/// Parses `bv:<secret>[+bv:<secret>...]` with a mapping such as `0,1,3` or
/// `0,1,2/4,5,6` (one group per subprobe).
inline ProbeSpec parse_probe(const std::string &probe, const std::string &mapping) {
    auto split = [](const std::string &text, char sep) {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream in(text);
        while (std::getline(in, cur, sep)) {
            out.push_back(cur);
        }
        if (!text.empty() && text.back() == sep) {
            out.emplace_back();
        }
        return out;
    };
    auto secrets = split(probe, '+');
    auto groups = split(mapping, '/');
    if (secrets.empty() || secrets.size() != groups.size()) {
        throw std::invalid_argument("probe '" + probe + "' has " + std::to_string(secrets.size()) +
                                    " parts but mapping '" + mapping + "' has " + std::to_string(groups.size()));
    }
    ProbeSpec spec;
    for (std::size_t k = 0; k < secrets.size(); ++k) {
        if (secrets[k].rfind("bv:", 0) != 0) {
            throw std::invalid_argument("unsupported probe '" + secrets[k] + "'; expected bv:<secret>");
        }
        SubProbe part{Bitstring(secrets[k].substr(3)), {}};
        if (part.secret.empty()) {
            throw std::invalid_argument("probe '" + secrets[k] + "' has an empty secret");
        }
        for (const auto &item : split(groups[k], ',')) {
            auto q = detail::parse_int(item);
            if (!q) {
                throw std::invalid_argument("bad qubit '" + item + "' in mapping '" + mapping + "'");
            }
            part.mapping.push_back(*q);
        }
        if (part.mapping.size() != part.secret.size() + 1) {
            throw std::invalid_argument("mapping for " + secrets[k] + " needs " +
                                        std::to_string(part.secret.size() + 1) + " qubits");
        }
        spec.parts.push_back(std::move(part));
    }
    return spec;
}

/// Three layouts for each probe size the device class supports: 3- and
/// 4-qubit BV on the shared star {0,1,2,3} of the 5- and 7-qubit layouts,
/// plus 3-, 4- and 9-qubit (three 3-qubit subprobes) probes on the
/// 127-qubit heavy-hex lattice. Size-3 layouts put the ancilla next to both
/// inputs; larger sizes include routed layouts.
inline std::vector<ProbeSpec> default_plan(const Topology &topology) {
    std::vector<std::pair<std::string, std::string>> table;
    if (topology.num_qubits() >= 127) {
        table = {
            {"bv:11", "0,2,1"},
            {"bv:11", "3,15,4"},
            {"bv:11", "7,9,8"},
            {"bv:111", "3,5,15,4"},
            {"bv:111", "0,1,2,3"},
            {"bv:111", "5,15,22,4"},
            {"bv:11+bv:11+bv:11", "0,1,3/5,6,8/10,11,13"},
            {"bv:11+bv:11+bv:11", "37,38,40/42,43,45/47,48,50"},
            {"bv:11+bv:11+bv:11", "75,76,78/80,81,83/85,86,88"},
        };
    } else {
        table = {
            {"bv:11", "0,2,1"},
            {"bv:11", "2,3,1"},
            {"bv:11", "3,0,1"},
            {"bv:111", "0,2,3,1"},
            {"bv:111", "0,1,2,3"},
            {"bv:111", "3,2,0,1"},
        };
    }
    std::vector<ProbeSpec> plan;
    for (const auto &[probe, mapping] : table) {
        ProbeSpec spec = parse_probe(probe, mapping);
        bool fits = std::all_of(spec.parts.begin(), spec.parts.end(), [&](const SubProbe &p) {
            return std::all_of(p.mapping.begin(), p.mapping.end(), [&](Qubit q) { return topology.contains(q); });
        });
        if (fits) {
            plan.push_back(std::move(spec));
        }
    }
    return plan;
}

/// Circuit for `spec` on `topology`, or nullopt if it cannot be placed.
inline std::optional<TranspiledCircuit> try_build(const ProbeSpec &spec, const Topology &topology) {
    try {
        return spec.build(topology);
    } catch (const std::invalid_argument &) {
        return std::nullopt;
    } catch (const TopologyError &) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Reports

struct RunSettings {
    std::uint64_t shots = 4000;
    std::uint64_t rounds = 3;
    std::uint64_t seed = 1;
    double threshold = kDefaultThreshold;
    std::optional<double> hidden_rate;
};

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return detail::mix64(detail::mix64(seed) ^ detail::mix64(trial + 0x51ed2701ULL));
}

struct TrialRecord {
    std::string requested;
    std::string probe;
    std::string mapping;
    int probe_qubits = 0;
    std::string executed_on;  // ground truth, never used for decisions
    std::optional<double> distance;
    std::optional<Classification> classification;
    std::string note;
    // identify only
    std::map<std::string, std::optional<double>> candidate_distances;
    std::string best;
    bool ambiguous = false;
    // sweep only: "honest" when requested == executed_on, else "cross"
    std::string pair;
};

struct ExperimentReport {
    std::string kind;
    nlohmann::json settings;
    std::vector<std::string> candidates;
    std::vector<TrialRecord> trials;
    nlohmann::json summary;
};

namespace detail {

inline nlohmann::json stats(const std::vector<double> &values) {
    if (values.empty()) {
        return {{"count", 0}};
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return {{"count", values.size()},
            {"min", *std::min_element(values.begin(), values.end())},
            {"max", *std::max_element(values.begin(), values.end())},
            {"mean", sum / static_cast<double>(values.size())}};
}

inline nlohmann::json optional_number(const std::optional<double> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

/// Recomputes the summary block from the trial records alone.
inline nlohmann::json summarize(const ExperimentReport &report) {
    nlohmann::json s = nlohmann::json::object();
    if (report.kind == "identify") {
        int correct = 0, ambiguous = 0;
        for (const auto &t : report.trials) {
            correct += t.best == t.executed_on;
            ambiguous += t.ambiguous;
        }
        s["rows"] = report.trials.size();
        s["correct"] = correct;
        s["ambiguous_rows"] = ambiguous;
        s["accuracy"] = report.trials.empty() ? 0.0 : double(correct) / double(report.trials.size());
    } else if (report.kind == "sweep") {
        std::vector<double> honest, cross;
        std::map<int, std::vector<double>> honest_by_size, cross_by_size;
        for (const auto &t : report.trials) {
            if (!t.distance) {
                continue;
            }
            if (t.pair == "honest") {
                honest.push_back(*t.distance);
                honest_by_size[t.probe_qubits].push_back(*t.distance);
            } else {
                cross.push_back(*t.distance);
                cross_by_size[t.probe_qubits].push_back(*t.distance);
            }
        }
        s["honest"] = detail::stats(honest);
        s["cross"] = detail::stats(cross);
        nlohmann::json by_size = nlohmann::json::object();
        for (const auto &[size, values] : honest_by_size) {
            by_size[std::to_string(size)]["honest"] = detail::stats(values);
        }
        for (const auto &[size, values] : cross_by_size) {
            by_size[std::to_string(size)]["cross"] = detail::stats(values);
        }
        s["by_size"] = by_size;
        nlohmann::json gap = nlohmann::json::object();
        if (honest.empty() || cross.empty()) {
            gap["computable"] = false;
            gap["note"] = cross.empty() ? "no cross pairs; gap not computable" : "no honest pairs";
        } else {
            double low = *std::max_element(honest.begin(), honest.end());
            double high = *std::min_element(cross.begin(), cross.end());
            double threshold = report.settings.value("threshold", kDefaultThreshold);
            gap["computable"] = true;
            gap["low"] = low;
            gap["high"] = high;
            gap["separating"] = low < high;
            gap["threshold"] = threshold;
            gap["threshold_inside"] = low < high && low <= threshold && threshold < high;
        }
        s["gap"] = gap;
    } else {
        int fraud = 0, honest = 0, topology_errors = 0;
        std::vector<double> distances;
        for (const auto &t : report.trials) {
            if (t.classification == Classification::fraudulent) {
                ++fraud;
            } else if (t.classification == Classification::honest) {
                ++honest;
            }
            if (t.distance) {
                distances.push_back(*t.distance);
            } else {
                ++topology_errors;
            }
        }
        s["fraudulent"] = fraud;
        s["honest"] = honest;
        s["topology_errors"] = topology_errors;
        s["distance"] = detail::stats(distances);
    }
    return s;
}

inline nlohmann::json to_json(const TrialRecord &t) {
    nlohmann::json j = {
        {"requested", t.requested},
        {"probe", t.probe},
        {"mapping", t.mapping},
        {"probe_qubits", t.probe_qubits},
        {"executed_on", t.executed_on},
        {"distance", detail::optional_number(t.distance)},
        {"classification", t.classification ? nlohmann::json(to_string(*t.classification)) : nlohmann::json(nullptr)},
    };
    if (!t.note.empty()) {
        j["note"] = t.note;
    }
    if (!t.candidate_distances.empty()) {
        nlohmann::json d = nlohmann::json::object();
        for (const auto &[id, v] : t.candidate_distances) {
            d[id] = detail::optional_number(v);
        }
        j["candidate_distances"] = d;
        j["best"] = t.best;
        j["ambiguous"] = t.ambiguous;
    }
    if (!t.pair.empty()) {
        j["pair"] = t.pair;
    }
    return j;
}

inline nlohmann::json to_json(const ExperimentReport &r) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto &t : r.trials) {
        trials.push_back(to_json(t));
    }
    return {{"kind", r.kind}, {"settings", r.settings}, {"candidates", r.candidates},
            {"trials", trials}, {"summary", r.summary}};
}

namespace detail {

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace detail

/// CSV rendering. Identification reports become one distance matrix per
/// probe (header: ground_truth then candidate ids; "NA" marks candidates
/// that cannot run the probe). Other reports list one trial per row.
inline std::string to_csv(const ExperimentReport &r) {
    std::ostringstream out;
    if (r.kind == "identify") {
        std::string current;
        for (const auto &t : r.trials) {
            std::string key = t.probe + " @ " + t.mapping;
            if (key != current) {
                if (!current.empty()) {
                    out << "\n";
                }
                out << "# probe " << key << "\n";
                out << "ground_truth";
                for (const auto &c : r.candidates) {
                    out << "," << c;
                }
                out << "\n";
                current = key;
            }
            out << t.executed_on;
            for (const auto &c : r.candidates) {
                auto it = t.candidate_distances.find(c);
                out << "," << (it != t.candidate_distances.end() && it->second ? detail::format_number(*it->second) : "NA");
            }
            out << "\n";
        }
        return out.str();
    }
    out << "requested,executed_on,probe,mapping,probe_qubits,pair,distance,classification,note\n";
    for (const auto &t : r.trials) {
        out << t.requested << "," << t.executed_on << "," << t.probe << ",\"" << t.mapping << "\"," << t.probe_qubits
            << "," << t.pair << "," << (t.distance ? detail::format_number(*t.distance) : "NA") << ","
            << (t.classification ? to_string(*t.classification) : "") << "," << t.note << "\n";
    }
    return out.str();
}

/// 0: nothing fraudulent found, 2: at least one fraudulent verdict.
inline int exit_code(const ExperimentReport &r) {
    for (const auto &t : r.trials) {
        if (t.classification == Classification::fraudulent) {
            return 2;
        }
    }
    return 0;
}

namespace detail {

inline nlohmann::json settings_json(const RunSettings &s) {
    nlohmann::json j = {{"shots", s.shots}, {"rounds", s.rounds}, {"seed", s.seed}, {"threshold", s.threshold}};
    j["hidden_rate"] = optional_number(s.hidden_rate);
    return j;
}

inline Fingerprint observe(const UserClient &user, const std::string &device, const TranspiledCircuit &circuit,
                           const RunSettings &settings, std::uint64_t trial, std::string &executed_on) {
    auto job = user.submit(device, circuit, settings.shots, settings.rounds, trial_seed(settings.seed, trial));
    executed_on = GroundTruth::executed_on(job);
    return survival_from_counts(job.counts, circuit.ideal_output);
}

/// Mean binomial standard error of a fingerprint at `shots` samples.
inline double mean_sigma(const Fingerprint &fp, double shots) {
    double total = 0.0;
    for (double s : fp.survivals) {
        total += std::sqrt(s * (1 - s) / shots);
    }
    return total / static_cast<double>(fp.size());
}

}  // namespace detail

/// Line-oriented survival trace: one line per op with its error rate,
/// followed by every logical qubit as L<logical>@<location>=<survival>.
inline std::string format_trace(const TranspiledCircuit &circuit, const DeviceProfile &profile) {
    auto steps = trace_survival(circuit, profile);
    std::ostringstream out;
    char buf[64];
    for (const TraceStep &step : steps) {
        if (!step.op_index) {
            out << "init";
        } else {
            const Operation &op = circuit.ops[*step.op_index];
            out << *step.op_index << " " << gate_name(op.gate);
            for (Qubit q : op.qubits()) {
                out << " " << q;
            }
            std::snprintf(buf, sizeof buf, " e=%.6g", profile.rate(op.error_key()));
            out << buf;
        }
        out << " |";
        for (const QubitTrack &t : step.tracks) {
            std::snprintf(buf, sizeof buf, " L%d@%d=%.6f", t.logical, t.location, t.survival);
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Experiments

/// For every probe and every device D that can host it: the user computes
/// expected fingerprints of all devices from their advertised profiles,
/// runs the probe on D, and picks the closest candidate. Candidates whose
/// topology cannot run the circuit are unmatched.
inline ExperimentReport cmd_identify(const Fleet &fleet, const std::vector<ProbeSpec> &probes,
                                     const RunSettings &settings) {
    if (fleet.members.size() < 2) {
        throw std::invalid_argument("identification needs at least two devices");
    }
    CloudPlatform cloud;
    populate(cloud, fleet, settings.hidden_rate);
    UserClient user(cloud);

    ExperimentReport report;
    report.kind = "identify";
    report.settings = detail::settings_json(settings);
    report.candidates = user.device_ids();

    std::uint64_t trial = 0;
    for (const ProbeSpec &spec : probes) {
        bool any = false;
        for (const std::string &truth : report.candidates) {
            auto circuit = try_build(spec, user.get_profile(truth).topology());
            if (!circuit) {
                continue;
            }
            any = true;
            TrialRecord t;
            t.requested = truth;
            t.probe = spec.label();
            t.mapping = spec.mapping_label();
            t.probe_qubits = spec.num_qubits();

            std::map<std::string, Fingerprint> expected;
            for (const std::string &cand : report.candidates) {
                DeviceProfile advertised = user.get_profile(cand);
                if (topology_compatible(*circuit, advertised.topology())) {
                    expected[cand] = estimate_fingerprint(*circuit, advertised);
                } else {
                    t.candidate_distances[cand] = std::nullopt;
                }
            }
            Fingerprint observed = detail::observe(user, truth, *circuit, settings, trial++, t.executed_on);
            auto match = match_device(expected, observed);
            for (const auto &[cand, d] : match.distances) {
                t.candidate_distances[cand] = d;
            }
            t.best = match.best;
            t.distance = match.distances.at(match.best);

            // Ambiguous when the runner-up's expectation is statistically
            // indistinguishable from the winner's at this shot count.
            double sigma = detail::mean_sigma(expected.at(match.best), double(settings.shots * settings.rounds));
            for (const auto &[cand, fp] : expected) {
                if (cand != match.best && manhattan_avg(fp, expected.at(match.best)) < 3 * sigma) {
                    t.ambiguous = true;
                }
            }
            report.trials.push_back(std::move(t));
        }
        if (!any) {
            throw std::invalid_argument("probe " + spec.label() + " @ " + spec.mapping_label() +
                                        " fits no device in the fleet");
        }
    }
    report.summary = summarize(report);
    return report;
}

/// The provider quietly runs jobs for `victim` on `actual`. The user
/// compares what comes back with the victim's expected fingerprint.
inline ExperimentReport cmd_detect_substitution(const Fleet &fleet, const std::string &victim,
                                                const std::string &actual, std::vector<ProbeSpec> probes,
                                                const RunSettings &settings) {
    CloudPlatform cloud;
    populate(cloud, fleet, settings.hidden_rate);
    cloud.mount(Substitution{victim, actual});
    UserClient user(cloud);
    DeviceProfile advertised = user.get_profile(victim);
    if (probes.empty()) {
        probes = default_plan(advertised.topology());
    }

    ExperimentReport report;
    report.kind = "detect-sub";
    report.settings = detail::settings_json(settings);
    report.settings["victim"] = victim;
    report.settings["actual"] = actual;
    report.candidates = {victim};

    std::uint64_t trial = 0;
    for (const ProbeSpec &spec : probes) {
        TrialRecord t;
        t.requested = victim;
        t.probe = spec.label();
        t.mapping = spec.mapping_label();
        t.probe_qubits = spec.num_qubits();
        TranspiledCircuit circuit = spec.build(advertised.topology());
        Fingerprint expected = estimate_fingerprint(circuit, advertised);
        try {
            Fingerprint observed = detail::observe(user, victim, circuit, settings, trial++, t.executed_on);
            Verdict v = detect(expected, observed, settings.threshold);
            t.distance = v.distance;
            t.classification = v.classification;
        } catch (const TopologyError &e) {
            // The platform refused the job: the device that ran it is not
            // the one advertised.
            t.executed_on = actual;
            t.classification = Classification::fraudulent;
            t.note = "topology_error";
        }
        report.trials.push_back(std::move(t));
    }
    report.summary = summarize(report);
    return report;
}

/// The provider advertises `strategy`-fabricated rates for `device` while
/// jobs still run on its true noise. One verdict per probe.
inline ExperimentReport cmd_detect_fabrication(const Fleet &fleet, const std::string &device,
                                               const FabricationStrategy &strategy, std::vector<ProbeSpec> probes,
                                               const RunSettings &settings) {
    CloudPlatform cloud;
    populate(cloud, fleet, settings.hidden_rate);
    cloud.mount(Fabrication{device, strategy});
    UserClient user(cloud);
    DeviceProfile advertised = user.get_profile(device);
    if (probes.empty()) {
        probes = default_plan(advertised.topology());
    }

    ExperimentReport report;
    report.kind = "detect-fab";
    report.settings = detail::settings_json(settings);
    report.settings["device"] = device;
    report.candidates = {device};

    std::uint64_t trial = 0;
    for (const ProbeSpec &spec : probes) {
        TrialRecord t;
        t.requested = device;
        t.probe = spec.label();
        t.mapping = spec.mapping_label();
        t.probe_qubits = spec.num_qubits();
        TranspiledCircuit circuit = spec.build(advertised.topology());
        Fingerprint expected = estimate_fingerprint(circuit, advertised);
        Fingerprint observed = detail::observe(user, device, circuit, settings, trial++, t.executed_on);
        Verdict v = detect(expected, observed, settings.threshold);
        t.distance = v.distance;
        t.classification = v.classification;
        report.trials.push_back(std::move(t));
    }
    report.summary = summarize(report);
    return report;
}

/// Honest pairs (expected fingerprint of the device that ran the probe)
/// against cross pairs (expected fingerprint of every other device that
/// could have run it), per probe size, and the gap between the two sets.
/// With no explicit probes each device uses its default plan.
inline ExperimentReport cmd_threshold_sweep(const Fleet &fleet, const std::vector<ProbeSpec> &probes,
                                            const RunSettings &settings) {
    CloudPlatform cloud;
    populate(cloud, fleet, settings.hidden_rate);
    UserClient user(cloud);

    ExperimentReport report;
    report.kind = "sweep";
    report.settings = detail::settings_json(settings);
    report.candidates = user.device_ids();

    std::uint64_t trial = 0;
    for (const std::string &ran : report.candidates) {
        DeviceProfile own = user.get_profile(ran);
        auto plan = probes.empty() ? default_plan(own.topology()) : probes;
        for (const ProbeSpec &spec : plan) {
            auto circuit = try_build(spec, own.topology());
            if (!circuit) {
                continue;
            }
            std::string executed_on;
            Fingerprint observed = detail::observe(user, ran, *circuit, settings, trial++, executed_on);
            for (const std::string &claimed : report.candidates) {
                DeviceProfile advertised = user.get_profile(claimed);
                if (!topology_compatible(*circuit, advertised.topology())) {
                    continue;
                }
                TrialRecord t;
                t.requested = claimed;
                t.executed_on = executed_on;
                t.probe = spec.label();
                t.mapping = spec.mapping_label();
                t.probe_qubits = spec.num_qubits();
                t.pair = claimed == executed_on ? "honest" : "cross";
                Verdict v = detect(estimate_fingerprint(*circuit, advertised), observed, settings.threshold);
                t.distance = v.distance;
                t.classification = v.classification;
                report.trials.push_back(std::move(t));
            }
        }
    }
    report.summary = summarize(report);
    return report;
}

}  // namespace qprobe
