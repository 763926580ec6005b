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

#include "urpsim/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"

namespace {

using namespace urpsim;
namespace fs = std::filesystem;

TEST_CASE("registry contents") {
    std::set<std::string> names;
    for (const auto& e : experiment_registry()) {
        CHECK_FALSE(e.description.empty());
        CHECK_FALSE(e.defaults.empty());
        names.insert(e.name);
    }
    for (const char* required :
         {"fig2a", "fig2b", "fig2c", "fig2d", "fig4", "gate-dissipative", "fig6", "fig8",
          "fig10", "fig11"})
        CHECK(names.count(required) == 1);

    CHECK(find_experiment("fig10").long_running);
    CHECK(find_experiment("fig2a").unpublished_defaults);
    CHECK_FALSE(find_experiment("fig2d").unpublished_defaults);
    CHECK(find_experiment("fig4").defaults.at("delta") == 58.0);
    CHECK(find_experiment("fig6").defaults.at("gamma") == 0.05);
    CHECK(find_experiment("fig6-exp").defaults.at("gamma") == 0.03);
    CHECK_THROWS_AS(find_experiment("fig99"), std::invalid_argument);
}

TEST_CASE("unknown override keys are rejected") {
    ExperimentConfig cfg;
    cfg.experiment = "fig2a";
    cfg.overrides["not_a_parameter"] = 1.0;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("reduced flag only applies to the slow tier") {
    ExperimentConfig cfg;
    cfg.experiment = "fig4";
    cfg.reduced = true;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("running fig2a writes CSV and metadata and is deterministic") {
    const fs::path dir = fs::temp_directory_path() / "urpsim-test-fig2a";
    fs::remove_all(dir);

    ExperimentConfig cfg;
    cfg.experiment = "fig2a";
    cfg.overrides["t_final"] = 20.0;
    cfg.sample_count = 50;
    cfg.output_dir = dir.string();
    auto res = run_experiment(cfg);

    REQUIRE(res.trajectories.size() == 2);
    CHECK(res.trajectories[0].label == "full");
    CHECK(res.trajectories[1].label == "effective");
    CHECK(res.params.at("t_final") == 20.0);
    CHECK(res.params.at("delta") == 10.0);

    CHECK(fs::exists(dir / "fig2a" / "full.csv"));
    CHECK(fs::exists(dir / "fig2a" / "effective.csv"));
    CHECK(fs::exists(dir / "fig2a" / "meta.json"));

    std::ifstream is(dir / "fig2a" / "full.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header.rfind("t,", 0) == 0);
    CHECK(header.find("p11") != std::string::npos);
    std::size_t rows = 0;
    for (std::string line; std::getline(is, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 51);  // sample_count + 1 grid points

    // The initial mixture puts 0.2 in |11>.
    CHECK(res.trajectories[0].traj.observable("p11").front() == doctest::Approx(0.2));

    // Deterministic: identical config reproduces the summary to 1e-9.
    auto res2 = run_experiment(cfg);
    for (const auto& [key, value] : res.summary)
        CHECK(std::abs(res2.summary.at(key) - value) < 1e-9);

    // Full and effective share their time grid.
    CHECK(res.trajectories[0].traj.times == res.trajectories[1].traj.times);

    fs::remove_all(dir);
}

TEST_CASE("recorded invariants stay tight on a short run") {
    ExperimentConfig cfg;
    cfg.experiment = "fig2d";
    cfg.overrides["t_final"] = 10.0;
    cfg.sample_count = 20;
    auto res = run_experiment(cfg);
    for (const auto& lt : res.trajectories) {
        CHECK(lt.traj.max_trace_dev < 1e-6);
        CHECK(lt.traj.max_herm_dev < 1e-8);
        CHECK(lt.traj.min_eigenvalue > -1e-6);
    }
}

TEST_CASE("check_acceptance reports missing results as failures") {
    const fs::path dir = fs::temp_directory_path() / "urpsim-test-empty";
    fs::remove_all(dir);
    // Seed the calibrated filtering shift so criterion 6 does not recalibrate.
    fs::create_directories(dir / "fig8");
    std::ofstream(dir / "fig8" / "meta.json") << R"({"summary":{"delta_small":0.02}})";

    auto reports = check_acceptance(dir.string());
    REQUIRE(reports.size() == 9);
    // Experiment-backed criteria fail on a near-empty directory; the
    // in-process criteria (4, 6 and the property suite) still pass.
    for (const auto& r : reports) {
        if (r.index == 4 || r.index == 6 || r.index == 9)
            CHECK(r.pass);
        else
            CHECK_FALSE(r.pass);
    }
    fs::remove_all(dir);
}

}  // namespace
