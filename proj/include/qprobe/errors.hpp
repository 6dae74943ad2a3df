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

#include <stdexcept>
#include <string>

namespace qprobe {

/// A device profile document or value failed validation. `path()` names the
/// offending field, e.g. `cnot_error.0-2`.
class ProfileError : public std::invalid_argument {
   public:
    ProfileError(std::string path, const std::string &what)
        : std::invalid_argument(path.empty() ? what : path + ": " + what), path_(std::move(path)) {
    }

    const std::string &path() const noexcept {
        return path_;
    }

   private:
    std::string path_;
};

/// A circuit references a coupling that the target device does not have.
/// This is what the platform reports when a job cannot run as submitted.
class TopologyError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An operation's error rate cannot be found in the profile.
class ErrorKeyError : public std::out_of_range {
   public:
    using std::out_of_range::out_of_range;
};

}  // namespace qprobe
