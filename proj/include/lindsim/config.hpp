// Copyright 2026 The lindsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lindsim/experiments.hpp"

namespace lindsim {

enum class Mode { Build, Evolve, Sweep, Trace, Regress, Hierarchy };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

/// A parsed and validated experiment config. Exactly one model source is set:
/// a built-in scenario, an explicit target to compile, or a serialized protocol.
struct ExperimentConfig {
    std::optional<Mode> mode;

    std::optional<std::string> scenario;
    ScenarioParams scenario_params;
    std::optional<LindbladSpec> target;
    std::vector<double> damping_times;
    std::optional<SimulationProtocol> protocol;
    std::optional<CouplingMode> coupling_mode;

    std::vector<double> t_list;
    double theta = 1.0;
    std::size_t per_decade = 40;
    std::optional<double> t_min;
    double t_max_factor = 1.0;
    ErrorMetric metric = ErrorMetric::Sup;
    Tolerances tol;

    double hierarchy_epsilon = 0.1;
    std::size_t hierarchy_max_levels = 3;

    double regress_g = 1.0;
    double regress_threshold = 1e-8;

    std::optional<std::size_t> leakage_site;  // boson factor index in the full space
    std::vector<double> leakage_t_samples;
    double leakage_threshold = 1e-8;

    double assert_r_squared_min = 0.99;
    double assert_intercept_frac_max = 0.05;
    double assert_ratio_min = 2.5;
    double assert_ratio_max = 4.0;

    nlohmann::json raw;
};

/// Validates against the schema; unknown keys are rejected. Messages name the
/// offending JSON path.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// The protocol the config describes, with coupling mode and θ overrides applied.
SimulationProtocol build_protocol(const ExperimentConfig& config);

/// Operator from a named builder ("pauli:minus:site=1", "collective_spin:x:N=3",
/// "boson:a:cutoff=4", "identity", "zero"), an explicit {"matrix": rows of [re, im]}
/// or a {"terms": [{"coef": c, "op": spec}, ...]} sum, on `space`.
Operator parse_operator(const nlohmann::json& j, const HilbertSpace& space, const std::string& path);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json spec_to_json(const LindbladSpec& spec);
LindbladSpec spec_from_json(const nlohmann::json& j, const HilbertSpace& space, const std::string& path);

nlohmann::json protocol_to_json(const SimulationProtocol& p);
SimulationProtocol protocol_from_json(const nlohmann::json& j, const std::string& path = "protocol");

/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

}  // namespace lindsim
