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

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qprobe/errors.hpp"
#include "qprobe/topology.hpp"

namespace qprobe {

namespace detail {

inline void check_rate(double rate, const std::string &path) {
    if (!std::isfinite(rate) || rate < 0.0 || rate >= 1.0) {
        throw ProfileError(path, "rate " + std::to_string(rate) + " outside [0, 1)");
    }
}

inline std::optional<int> parse_int(std::string_view text) {
    int value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
        return std::nullopt;
    }
    return value;
}

inline bool looks_like_iso8601(const std::string &text) {
    static const std::regex pattern(
        R"(^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?$)");
    return std::regex_match(text, pattern);
}

}  // namespace detail

/// Identifies one operation error rate in a profile. Renders as
/// `CNOT_(a,b)`, `Meas_q` or `SQ_q` (single-qubit gate).
struct ErrorKey {
    enum class Kind { cnot, single_qubit, measurement };

    Kind kind = Kind::measurement;
    Qubit a = 0;
    Qubit b = 0;  // cnot only; a < b

    static ErrorKey cnot(Qubit x, Qubit y) {
        Edge e(x, y);
        return {Kind::cnot, e.lo, e.hi};
    }
    static ErrorKey single_qubit(Qubit q) {
        return {Kind::single_qubit, q, 0};
    }
    static ErrorKey measurement(Qubit q) {
        return {Kind::measurement, q, 0};
    }

    std::string label() const {
        switch (kind) {
            case Kind::cnot:
                return "CNOT_(" + std::to_string(a) + "," + std::to_string(b) + ")";
            case Kind::single_qubit:
                return "SQ_" + std::to_string(a);
            case Kind::measurement:
                return "Meas_" + std::to_string(a);
        }
        return {};
    }

    static std::optional<ErrorKey> parse(std::string_view label) {
        auto tail_after = [&](std::string_view prefix) -> std::optional<std::string_view> {
            if (label.substr(0, prefix.size()) != prefix) {
                return std::nullopt;
            }
            return label.substr(prefix.size());
        };
        if (auto t = tail_after("Meas_")) {
            if (auto q = detail::parse_int(*t)) {
                return measurement(*q);
            }
        } else if (auto t = tail_after("SQ_")) {
            if (auto q = detail::parse_int(*t)) {
                return single_qubit(*q);
            }
        } else if (auto t = tail_after("CNOT_(")) {
            if (t->empty() || t->back() != ')') {
                return std::nullopt;
            }
            auto inner = t->substr(0, t->size() - 1);
            auto comma = inner.find(',');
            if (comma == std::string_view::npos) {
                return std::nullopt;
            }
            auto x = detail::parse_int(inner.substr(0, comma));
            auto y = detail::parse_int(inner.substr(comma + 1));
            if (x && y && *x != *y) {
                return cnot(*x, *y);
            }
        }
        return std::nullopt;
    }

    auto operator<=>(const ErrorKey &) const = default;
    bool operator==(const ErrorKey &) const = default;
};

/// Labelled operation error rates of a region of a device, CNOT entries
/// (sorted by edge) first, then measurement entries (sorted by qubit).
struct ErrorVector {
    std::vector<std::pair<std::string, double>> entries;

    std::size_t size() const {
        return entries.size();
    }
    bool operator==(const ErrorVector &) const = default;
};

/// Published description of a device: coupling graph plus per-operation
/// error rates. Immutable once constructed; every constructor validates.
class DeviceProfile {
   public:
    DeviceProfile() = default;

    DeviceProfile(std::string device_id, Topology topology, std::map<Edge, double> cnot_error,
                  std::vector<double> single_qubit_error, std::vector<double> measurement_error,
                  std::string calibration_time = "1970-01-01T00:00:00Z")
        : device_id_(std::move(device_id)),
          topology_(std::move(topology)),
          cnot_error_(std::move(cnot_error)),
          single_qubit_error_(std::move(single_qubit_error)),
          measurement_error_(std::move(measurement_error)),
          calibration_time_(std::move(calibration_time)) {
        validate();
    }

    const std::string &device_id() const {
        return device_id_;
    }
    const Topology &topology() const {
        return topology_;
    }
    int num_qubits() const {
        return topology_.num_qubits();
    }
    const std::map<Edge, double> &cnot_error() const {
        return cnot_error_;
    }
    const std::vector<double> &single_qubit_error() const {
        return single_qubit_error_;
    }
    const std::vector<double> &measurement_error() const {
        return measurement_error_;
    }
    const std::string &calibration_time() const {
        return calibration_time_;
    }

    double rate(const ErrorKey &key) const {
        switch (key.kind) {
            case ErrorKey::Kind::cnot: {
                auto it = cnot_error_.find(Edge(key.a, key.b));
                if (it == cnot_error_.end()) {
                    throw ErrorKeyError(device_id_ + " has no rate for " + key.label());
                }
                return it->second;
            }
            case ErrorKey::Kind::single_qubit:
                check_qubit(key);
                return single_qubit_error_[key.a];
            case ErrorKey::Kind::measurement:
                check_qubit(key);
                return measurement_error_[key.a];
        }
        return 0.0;
    }

    bool has_rate(const ErrorKey &key) const {
        if (key.kind == ErrorKey::Kind::cnot) {
            return cnot_error_.count(Edge(key.a, key.b)) > 0;
        }
        return topology_.contains(key.a);
    }

    /// Copy with the given rates replaced; the result is validated again.
    DeviceProfile with_rates(std::map<Edge, double> cnot_error, std::vector<double> single_qubit_error,
                             std::vector<double> measurement_error) const {
        return DeviceProfile(device_id_, topology_, std::move(cnot_error), std::move(single_qubit_error),
                             std::move(measurement_error), calibration_time_);
    }

    DeviceProfile with_id(std::string device_id) const {
        DeviceProfile copy = *this;
        copy.device_id_ = std::move(device_id);
        return copy;
    }

    bool operator==(const DeviceProfile &) const = default;

   private:
    void check_qubit(const ErrorKey &key) const {
        if (!topology_.contains(key.a)) {
            throw ErrorKeyError(device_id_ + " has no qubit for " + key.label());
        }
    }

    void validate() const {
        if (device_id_.empty()) {
            throw ProfileError("device_id", "must be non-empty");
        }
        int n = topology_.num_qubits();
        if (n < 1) {
            throw ProfileError("num_qubits", "must be positive");
        }
        for (const auto &[edge, rate] : cnot_error_) {
            std::string path = "cnot_error." + edge.key();
            if (!topology_.has_edge(edge.lo, edge.hi)) {
                throw ProfileError(path, "edge is not in the topology");
            }
            detail::check_rate(rate, path);
        }
        auto check_per_qubit = [n](const std::vector<double> &rates, const std::string &field) {
            if (static_cast<int>(rates.size()) != n) {
                throw ProfileError(field, "expected " + std::to_string(n) + " entries, got " +
                                              std::to_string(rates.size()));
            }
            for (int q = 0; q < n; ++q) {
                detail::check_rate(rates[q], field + "." + std::to_string(q));
            }
        };
        check_per_qubit(single_qubit_error_, "single_qubit_error");
        check_per_qubit(measurement_error_, "measurement_error");
        if (!detail::looks_like_iso8601(calibration_time_)) {
            throw ProfileError("calibration_time", "not an ISO-8601 timestamp: '" + calibration_time_ + "'");
        }
    }

    std::string device_id_;
    Topology topology_;
    std::map<Edge, double> cnot_error_;
    std::vector<double> single_qubit_error_;
    std::vector<double> measurement_error_;
    std::string calibration_time_;
};

inline nlohmann::json to_json(const DeviceProfile &profile) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge &e : profile.topology().edges()) {
        edges.push_back({e.lo, e.hi});
    }
    nlohmann::json cnot = nlohmann::json::object();
    for (const auto &[edge, rate] : profile.cnot_error()) {
        cnot[edge.key()] = rate;
    }
    auto per_qubit = [](const std::vector<double> &rates) {
        nlohmann::json out = nlohmann::json::object();
        for (std::size_t q = 0; q < rates.size(); ++q) {
            out[std::to_string(q)] = rates[q];
        }
        return out;
    };
    return {
        {"device_id", profile.device_id()},
        {"num_qubits", profile.num_qubits()},
        {"edges", edges},
        {"cnot_error", cnot},
        {"single_qubit_error", per_qubit(profile.single_qubit_error())},
        {"measurement_error", per_qubit(profile.measurement_error())},
        {"calibration_time", profile.calibration_time()},
    };
}

inline std::string dump_profile(const DeviceProfile &profile) {
    return to_json(profile).dump(2) + "\n";
}

namespace detail {

inline const nlohmann::json &require(const nlohmann::json &doc, const char *field,
                                     nlohmann::json::value_t type) {
    auto it = doc.find(field);
    if (it == doc.end()) {
        throw ProfileError(field, "missing field");
    }
    bool ok = it->type() == type ||
              (type == nlohmann::json::value_t::number_integer && it->is_number_unsigned());
    if (!ok) {
        throw ProfileError(field, std::string("expected ") + nlohmann::json(type).type_name() + ", got " +
                                      it->type_name());
    }
    return *it;
}

inline double read_rate(const nlohmann::json &value, const std::string &path) {
    if (!value.is_number()) {
        throw ProfileError(path, std::string("expected number, got ") + value.type_name());
    }
    double rate = value.get<double>();
    check_rate(rate, path);
    return rate;
}

inline std::vector<double> read_per_qubit(const nlohmann::json &doc, const char *field, int n) {
    const auto &obj = require(doc, field, nlohmann::json::value_t::object);
    std::vector<std::optional<double>> seen(n);
    for (const auto &[key, value] : obj.items()) {
        std::string path = std::string(field) + "." + key;
        auto q = parse_int(key);
        if (!q || *q < 0 || *q >= n) {
            throw ProfileError(path, "unknown qubit '" + key + "'");
        }
        seen[*q] = read_rate(value, path);
    }
    std::vector<double> rates(n);
    for (int q = 0; q < n; ++q) {
        if (!seen[q]) {
            throw ProfileError(std::string(field) + "." + std::to_string(q), "missing rate");
        }
        rates[q] = *seen[q];
    }
    return rates;
}

}  // namespace detail

/// Parses and validates a profile document. Every failure is a ProfileError
/// naming the offending field.
inline DeviceProfile profile_from_json(const nlohmann::json &doc) {
    using vt = nlohmann::json::value_t;
    if (!doc.is_object()) {
        throw ProfileError("", "profile document must be a JSON object");
    }
    auto device_id = detail::require(doc, "device_id", vt::string).get<std::string>();
    auto num_qubits = detail::require(doc, "num_qubits", vt::number_integer).get<long long>();
    if (num_qubits < 1 || num_qubits > (1 << 20)) {
        throw ProfileError("num_qubits", "must be positive, got " + std::to_string(num_qubits));
    }
    int n = static_cast<int>(num_qubits);

    std::vector<Edge> edges;
    const auto &edge_list = detail::require(doc, "edges", vt::array);
    for (std::size_t i = 0; i < edge_list.size(); ++i) {
        const auto &pair = edge_list[i];
        std::string path = "edges[" + std::to_string(i) + "]";
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
            throw ProfileError(path, "expected a pair of integers");
        }
        edges.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
    Topology topology(n, edges);

    std::map<Edge, double> cnot;
    for (const auto &[key, value] : detail::require(doc, "cnot_error", vt::object).items()) {
        std::string path = "cnot_error." + key;
        auto dash = key.find('-');
        std::optional<int> a, b;
        if (dash != std::string::npos) {
            a = detail::parse_int(std::string_view(key).substr(0, dash));
            b = detail::parse_int(std::string_view(key).substr(dash + 1));
        }
        if (!a || !b || *a >= *b) {
            throw ProfileError(path, "edge key must be 'a-b' with a < b");
        }
        if (*b >= n) {
            throw ProfileError(path, "edge references unknown qubit");
        }
        if (!topology.has_edge(*a, *b)) {
            throw ProfileError(path, "edge is not in the topology");
        }
        cnot[Edge(*a, *b)] = detail::read_rate(value, path);
    }

    auto single = detail::read_per_qubit(doc, "single_qubit_error", n);
    auto meas = detail::read_per_qubit(doc, "measurement_error", n);
    auto calibration = detail::require(doc, "calibration_time", vt::string).get<std::string>();
    return DeviceProfile(std::move(device_id), std::move(topology), std::move(cnot), std::move(single),
                         std::move(meas), std::move(calibration));
}

inline DeviceProfile load_profile(std::string_view document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error &e) {
        throw ProfileError("", std::string("malformed JSON: ") + e.what());
    }
    return profile_from_json(doc);
}

/// CNOT rates of edges inside `region`, then measurement rates of the qubits
/// in `region`. The whole device when `region` is omitted. Single-qubit gate
/// rates are not part of the vector.
inline ErrorVector error_vector(const DeviceProfile &profile, std::optional<std::set<Qubit>> region = std::nullopt) {
    if (region) {
        for (Qubit q : *region) {
            if (!profile.topology().contains(q)) {
                throw std::invalid_argument("region contains unknown qubit " + std::to_string(q));
            }
        }
    }
    auto inside = [&](Qubit q) { return !region || region->count(q) > 0; };
    ErrorVector out;
    for (const auto &[edge, rate] : profile.cnot_error()) {
        if (inside(edge.lo) && inside(edge.hi)) {
            out.entries.emplace_back(ErrorKey::cnot(edge.lo, edge.hi).label(), rate);
        }
    }
    for (int q = 0; q < profile.num_qubits(); ++q) {
        if (inside(q)) {
            out.entries.emplace_back(ErrorKey::measurement(q).label(), profile.measurement_error()[q]);
        }
    }
    return out;
}

/// Multiplies advertised rates by `factor` in (0, 1]. Each category can be
/// excluded.
struct ScaleRates {
    double factor = 1.0;
    bool cnot = true;
    bool single_qubit = true;
    bool measurement = true;
};

/// Replaces individual advertised rates, keyed by ErrorKey label.
struct OverrideRates {
    std::map<std::string, double> rates;
};

using FabricationStrategy = std::variant<ScaleRates, OverrideRates>;

/// Returns a profile advertising modified rates. The input is untouched and
/// the device id is kept.
inline DeviceProfile fabricate(const DeviceProfile &profile, const FabricationStrategy &strategy) {
    auto cnot = profile.cnot_error();
    auto single = profile.single_qubit_error();
    auto meas = profile.measurement_error();
    if (const auto *scale = std::get_if<ScaleRates>(&strategy)) {
        if (!(scale->factor > 0.0 && scale->factor <= 1.0)) {
            throw std::invalid_argument("scale factor must be in (0, 1], got " + std::to_string(scale->factor));
        }
        if (scale->cnot) {
            for (auto &[edge, rate] : cnot) {
                rate *= scale->factor;
            }
        }
        if (scale->single_qubit) {
            for (double &rate : single) {
                rate *= scale->factor;
            }
        }
        if (scale->measurement) {
            for (double &rate : meas) {
                rate *= scale->factor;
            }
        }
    } else {
        for (const auto &[label, rate] : std::get<OverrideRates>(strategy).rates) {
            auto key = ErrorKey::parse(label);
            if (!key) {
                throw ProfileError(label, "unrecognised rate label");
            }
            detail::check_rate(rate, label);
            switch (key->kind) {
                case ErrorKey::Kind::cnot:
                    if (!profile.topology().has_edge(key->a, key->b)) {
                        throw ProfileError(label, "edge is not in the topology");
                    }
                    cnot[Edge(key->a, key->b)] = rate;
                    break;
                case ErrorKey::Kind::single_qubit:
                case ErrorKey::Kind::measurement: {
                    if (!profile.topology().contains(key->a)) {
                        throw ProfileError(label, "unknown qubit");
                    }
                    auto &target = key->kind == ErrorKey::Kind::measurement ? meas : single;
                    target[key->a] = rate;
                    break;
                }
            }
        }
    }
    return profile.with_rates(std::move(cnot), std::move(single), std::move(meas));
}

inline FabricationStrategy fabrication_from_json(const nlohmann::json &doc) {
    if (doc.contains("scale_factor")) {
        ScaleRates scale;
        scale.factor = doc.at("scale_factor").get<double>();
        if (doc.contains("categories")) {
            scale.cnot = scale.single_qubit = scale.measurement = false;
            for (const auto &c : doc.at("categories")) {
                auto name = c.get<std::string>();
                if (name == "cnot") {
                    scale.cnot = true;
                } else if (name == "single_qubit") {
                    scale.single_qubit = true;
                } else if (name == "measurement") {
                    scale.measurement = true;
                } else {
                    throw ProfileError("fabrication.categories", "unknown category '" + name + "'");
                }
            }
        }
        return scale;
    }
    if (doc.contains("overrides")) {
        OverrideRates over;
        for (const auto &[label, rate] : doc.at("overrides").items()) {
            over.rates[label] = rate.get<double>();
        }
        return over;
    }
    throw ProfileError("fabrication", "expected 'scale_factor' or 'overrides'");
}

}  // namespace qprobe
