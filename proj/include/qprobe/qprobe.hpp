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

#include "qprobe/circuit.hpp"
#include "qprobe/cloudsim.hpp"
#include "qprobe/detector.hpp"
#include "qprobe/device_profile.hpp"
#include "qprobe/devicesim.hpp"
#include "qprobe/errors.hpp"
#include "qprobe/estimator.hpp"
#include "qprobe/experiments.hpp"
#include "qprobe/fingerprint.hpp"
#include "qprobe/topology.hpp"
