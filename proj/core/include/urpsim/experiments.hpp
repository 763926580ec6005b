// Copyright 2026 The urpsim Authors
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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urpsim/dynamics.hpp"
#include "urpsim/models.hpp"
#include "urpsim/observables.hpp"

namespace urpsim {

/// Registry entry: name, one-line description and resolved default
/// parameters. `unpublished_defaults` flags entries whose defaults fill a gap
/// in the published parameter set.
struct ExperimentInfo {
    std::string name;
    std::string description;
    std::map<std::string, double> defaults;
    bool long_running = false;
    bool unpublished_defaults = false;
};

const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo& find_experiment(const std::string& name);

struct ExperimentConfig {
    std::string experiment;
    /// Flat key -> value overrides; keys must exist in the registry entry.
    std::map<std::string, double> overrides;
    std::optional<Method> method;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<double> max_step;
    std::size_t sample_count = 0;  ///< 0 = experiment default
    std::string output_dir;       ///< empty = in-memory only
    bool reduced = false;  ///< shrink Delta to 200g on the slow tier
};

struct LabeledTrajectory {
    std::string label;
    Trajectory traj;
};

struct ExperimentResult {
    std::string experiment;
    std::map<std::string, double> params;  ///< resolved values actually used
    IntegratorConfig integrator;
    std::vector<LabeledTrajectory> trajectories;
    std::map<std::string, double> summary;
};

/// Runs a registry experiment. When cfg.output_dir is set, writes one CSV
/// per trajectory (first column `t`, header row) plus meta.json with the
/// resolved parameters, integrator settings and summary scalars.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct CriterionReport {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;  ///< measured vs expected vs tolerance
};

/// Evaluates the acceptance criteria against experiment output found in
/// results_dir (one subdirectory per experiment, as written by
/// run_experiment). Criteria whose inputs are missing are reported failed
/// with a "missing" note. Pure steady-state and property criteria are
/// computed in-process. The g = 2000 Gamma noise point is only scored when
/// include_g2000 is set.
std::vector<CriterionReport> check_acceptance(const std::string& results_dir,
                                              bool include_g2000 = false);

}  // namespace urpsim
