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

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "urpsim/experiments.hpp"

namespace {

using urpsim::ExperimentConfig;

/// Fills cfg from a JSON config file; CLI flags override these values.
void load_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot read " + path);
    nlohmann::json j = nlohmann::json::parse(is);
    if (j.contains("experiment")) cfg.experiment = j["experiment"];
    if (j.contains("overrides"))
        for (const auto& [k, v] : j["overrides"].items())
            cfg.overrides[k] = v.get<double>();
    if (j.contains("integrator")) {
        const auto& ji = j["integrator"];
        if (ji.contains("method"))
            cfg.method = ji["method"] == "fixed" ? urpsim::Method::FixedRk4
                                                 : urpsim::Method::AdaptiveRk45;
        if (ji.contains("rel_tol")) cfg.rel_tol = ji["rel_tol"].get<double>();
        if (ji.contains("abs_tol")) cfg.abs_tol = ji["abs_tol"].get<double>();
        if (ji.contains("max_step")) cfg.max_step = ji["max_step"].get<double>();
        if (ji.contains("sample_count"))
            cfg.sample_count = ji["sample_count"].get<std::size_t>();
    }
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"];
    if (j.contains("reduced")) cfg.reduced = j["reduced"].get<bool>();
}

void apply_sets(const std::vector<std::string>& sets, ExperimentConfig& cfg) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--set", "expected key=value, got " + s);
        cfg.overrides[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven-dissipative Rydberg system simulator"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List the experiment registry");

    auto* run = app.add_subcommand("run", "Run one experiment");
    std::string name, out_dir = "results", config_path, integrator;
    std::vector<std::string> sets;
    bool reduced = false;
    double rel_tol = 0.0, abs_tol = 0.0;
    std::size_t samples = 0;
    run->add_option("experiment", name, "Registry name (see `list`)");
    run->add_option("--config", config_path, "JSON config file");
    run->add_option("--set", sets, "Parameter override key=value")
        ->take_all();
    run->add_option("--out", out_dir, "Output directory (default: results)");
    run->add_option("--integrator", integrator, "fixed | adaptive")
        ->check(CLI::IsMember({"fixed", "adaptive"}));
    run->add_option("--rel-tol", rel_tol, "Adaptive relative tolerance");
    run->add_option("--abs-tol", abs_tol, "Adaptive absolute tolerance");
    run->add_option("--samples", samples, "Recorded samples per trajectory");
    run->add_flag("--reduced", reduced,
                  "Shrink Delta to 200g on the slow tier (indicative only)");

    auto* check = app.add_subcommand("check", "Acceptance-check a results dir");
    std::string check_dir;
    bool g2000 = false;
    check->add_option("dir", check_dir, "Directory written by `run`")->required();
    check->add_flag("--g2000", g2000, "Also score the g = 2000 Gamma point");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& e : urpsim::experiment_registry()) {
                std::cout << e.name << (e.long_running ? "  [slow]" : "")
                          << (e.unpublished_defaults ? "  [defaults not published]"
                                                   : "")
                          << "\n    " << e.description << "\n    defaults:";
                for (const auto& [k, v] : e.defaults) std::cout << " " << k << "=" << v;
                std::cout << "\n";
            }
            return 0;
        }
        if (*run) {
            ExperimentConfig cfg;
            if (!config_path.empty()) load_config_file(config_path, cfg);
            if (!name.empty()) cfg.experiment = name;
            if (cfg.experiment.empty())
                throw CLI::ValidationError("experiment", "no experiment named");
            apply_sets(sets, cfg);
            if (integrator == "fixed") cfg.method = urpsim::Method::FixedRk4;
            if (integrator == "adaptive") cfg.method = urpsim::Method::AdaptiveRk45;
            if (rel_tol > 0) cfg.rel_tol = rel_tol;
            if (abs_tol > 0) cfg.abs_tol = abs_tol;
            if (samples > 0) cfg.sample_count = samples;
            cfg.reduced = reduced;
            cfg.output_dir = out_dir;
            auto res = urpsim::run_experiment(cfg);
            std::cout << res.experiment << " finished; wrote "
                      << res.trajectories.size() << " trajectories to "
                      << out_dir << "/" << res.experiment << "\n";
            for (const auto& [k, v] : res.summary)
                std::cout << "  " << k << " = " << v << "\n";
            return 0;
        }
        if (*check) {
            auto reports = urpsim::check_acceptance(check_dir, g2000);
            bool all = true;
            for (const auto& r : reports) {
                std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.index
                          << " (" << r.name << ")\n"
                          << r.detail;
                all = all && r.pass;
            }
            std::cout << (all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
            return all ? 0 : 1;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
