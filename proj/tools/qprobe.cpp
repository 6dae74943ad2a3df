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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qprobe/experiments.hpp"

namespace {

using namespace qprobe;

struct Options {
    std::string fleet;
    std::vector<std::string> probes;
    std::vector<std::string> mappings;
    std::uint64_t shots = 4000;
    std::uint64_t rounds = 3;
    std::uint64_t seed = 1;
    double threshold = kDefaultThreshold;
    std::string out;
    std::string format = "json";
    std::optional<double> hidden_rate;
    std::string victim, actual, device, profile;
};

void add_run_flags(CLI::App *cmd, Options &o) {
    cmd->add_option("--fleet", o.fleet, "Fleet config (JSON list of profile entries)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--probe", o.probes, "Probe, e.g. bv:11 or bv:11+bv:11 (repeatable)");
    cmd->add_option("--mapping", o.mappings, "Initial layout, e.g. 0,1,3 or 0,1,2/4,5,6 (one per --probe)");
    cmd->add_option("--shots", o.shots, "Shots per round")->check(CLI::PositiveNumber);
    cmd->add_option("--rounds", o.rounds, "Rounds pooled per fingerprint")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Base seed");
    cmd->add_option("--threshold", o.threshold, "Fraud threshold on the average Manhattan distance")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", o.out, "Write the report into this directory");
    cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--hidden-rate", o.hidden_rate, "Override every device's hidden flip rate")
        ->check(CLI::Range(0.0, 1.0));
}

std::vector<ProbeSpec> probes_from(const Options &o) {
    if (o.probes.size() != o.mappings.size()) {
        throw std::invalid_argument("each --probe needs a matching --mapping");
    }
    std::vector<ProbeSpec> out;
    for (std::size_t i = 0; i < o.probes.size(); ++i) {
        out.push_back(parse_probe(o.probes[i], o.mappings[i]));
    }
    return out;
}

RunSettings settings_from(const Options &o) {
    RunSettings s;
    s.shots = o.shots;
    s.rounds = o.rounds;
    s.seed = o.seed;
    s.threshold = o.threshold;
    s.hidden_rate = o.hidden_rate;
    return s;
}

int emit(const ExperimentReport &report, const Options &o, int code) {
    std::string body = o.format == "csv" ? to_csv(report) : to_json(report).dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << body;
        return code;
    }
    std::filesystem::create_directories(o.out);
    auto path = std::filesystem::path(o.out) / (report.kind + "." + o.format);
    std::ofstream file(path, std::ios::binary);
    file << body;
    if (!file) {
        throw std::runtime_error("cannot write " + path.string());
    }
    std::cout << path.string() << ": " << report.summary.dump() << "\n";
    return code;
}

int run_identify(const Options &o) {
    Fleet fleet = load_fleet(o.fleet);
    auto probes = probes_from(o);
    if (probes.empty()) {
        for (const ProbeSpec &p : default_plan(fleet.members.front().profile.topology())) {
            if (p.num_qubits() == 3) {
                probes.push_back(p);
            }
        }
    }
    return emit(cmd_identify(fleet, probes, settings_from(o)), o, 0);
}

int run_detect_sub(const Options &o) {
    Fleet fleet = load_fleet(o.fleet);
    auto report = cmd_detect_substitution(fleet, o.victim, o.actual, probes_from(o), settings_from(o));
    return emit(report, o, exit_code(report));
}

int run_detect_fab(const Options &o) {
    Fleet fleet = load_fleet(o.fleet);
    std::string device = o.device;
    std::optional<FabricationStrategy> strategy;
    for (auto &m : fleet.members) {
        bool target = device.empty() ? m.fabrication.has_value() : m.profile.device_id() == device;
        if (target && m.fabrication) {
            if (strategy) {
                throw std::invalid_argument("several fleet entries carry a fabrication; pick one with --device");
            }
            device = m.profile.device_id();
            strategy = m.fabrication;
            m.fabrication.reset();
        }
    }
    if (!strategy) {
        throw std::invalid_argument("no fleet entry carries a fabrication" +
                                    (device.empty() ? std::string() : " for device " + device));
    }
    auto report = cmd_detect_fabrication(fleet, device, *strategy, probes_from(o), settings_from(o));
    return emit(report, o, exit_code(report));
}

int run_sweep(const Options &o) {
    Fleet fleet = load_fleet(o.fleet);
    return emit(cmd_threshold_sweep(fleet, probes_from(o), settings_from(o)), o, 0);
}

int run_trace(const Options &o) {
    DeviceProfile profile;
    if (!o.profile.empty()) {
        profile = load_profile(read_text_file(o.profile));
    } else if (!o.fleet.empty() && !o.device.empty()) {
        profile = load_fleet(o.fleet).member(o.device).profile;
    } else {
        throw std::invalid_argument("trace needs --profile, or --fleet with --device");
    }
    auto probes = probes_from(o);
    if (probes.size() != 1) {
        throw std::invalid_argument("trace takes exactly one --probe/--mapping pair");
    }
    std::cout << format_trace(probes.front().build(profile.topology()), profile);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qprobe: fingerprint cloud quantum devices with probing circuits"};
    app.require_subcommand(1);
    Options o;

    auto *identify = app.add_subcommand("identify", "Match each device's observed fingerprint against every candidate");
    add_run_flags(identify, o);

    auto *sub = app.add_subcommand("detect-sub", "Run probes under a machine substitution and classify them");
    add_run_flags(sub, o);
    sub->add_option("--victim", o.victim, "Device the user requests")->required();
    sub->add_option("--actual", o.actual, "Device that actually runs the jobs")->required();

    auto *fab = app.add_subcommand("detect-fab", "Run probes against a fabricated profile and classify them");
    add_run_flags(fab, o);
    fab->add_option("--device", o.device, "Fleet entry whose fabrication to mount");

    auto *sweep = app.add_subcommand("sweep", "Honest and cross-pair distances per probe size, and their gap");
    add_run_flags(sweep, o);

    auto *trace = app.add_subcommand("trace", "Print the per-op survival walk of one probe");
    trace->add_option("--profile", o.profile, "Device profile JSON")->check(CLI::ExistingFile);
    trace->add_option("--fleet", o.fleet, "Fleet config")->check(CLI::ExistingFile);
    trace->add_option("--device", o.device, "Device id within the fleet");
    trace->add_option("--probe", o.probes, "Probe, e.g. bv:11")->required();
    trace->add_option("--mapping", o.mappings, "Initial layout, e.g. 0,1,3")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*identify) return run_identify(o);
        if (*sub) return run_detect_sub(o);
        if (*fab) return run_detect_fab(o);
        if (*sweep) return run_sweep(o);
        return run_trace(o);
    } catch (const std::exception &e) {
        std::cerr << "qprobe: " << e.what() << "\n";
        return 1;
    }
}
