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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace urpsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr const char* kVersion = "0.1.0";

std::map<std::string, double> resolve_params(
    const ExperimentInfo& info, const std::map<std::string, double>& overrides) {
    auto p = info.defaults;
    for (const auto& [k, v] : overrides) {
        if (p.find(k) == p.end())
            throw std::invalid_argument("unknown parameter key for " + info.name +
                                        ": " + k);
        p[k] = v;
    }
    return p;
}

IntegratorConfig make_cfg(const ExperimentConfig& cfg, double default_rel,
                          double default_abs, std::size_t samples) {
    IntegratorConfig ic;
    ic.method = cfg.method.value_or(Method::AdaptiveRk45);
    ic.rel_tol = cfg.rel_tol.value_or(default_rel);
    ic.abs_tol = cfg.abs_tol.value_or(default_abs);
    if (cfg.max_step) ic.max_step = *cfg.max_step;
    ic.sample_count = cfg.sample_count > 0 ? cfg.sample_count : samples;
    return ic;
}

/// |s> from a compact per-site label string, one character per site.
State basis_ket(const ProductBasis& basis, const std::string& s) {
    std::vector<std::string> labels;
    for (char ch : s) labels.emplace_back(1, ch);
    return ket(basis, labels);
}

NamedRhoObservable fid_obs(std::string name, State target) {
    return {std::move(name), [t = std::move(target)](double, const Operator& r) {
                return fidelity_sqrt(r, t);
            }};
}

NamedRhoObservable pop_obs(std::string name, State target) {
    return {std::move(name), [t = std::move(target)](double, const Operator& r) {
                return population(r, t);
            }};
}

/// Maximum pointwise gap between the two trajectories over the observables
/// they share; grids must already coincide.
double shared_deviation(const Trajectory& a, const Trajectory& b) {
    double dev = 0.0;
    for (const auto& [name, va] : a.observables) {
        const auto it = std::find_if(b.observables.begin(), b.observables.end(),
                                     [&](const auto& o) { return o.first == name; });
        if (it == b.observables.end()) continue;
        dev = std::max(dev, trajectory_deviation(a, b, name));
    }
    return dev;
}

void append_chunk(Trajectory& merged, const Trajectory& chunk) {
    if (merged.times.empty()) {
        merged = chunk;
        return;
    }
    merged.times.insert(merged.times.end(), chunk.times.begin() + 1,
                        chunk.times.end());
    for (std::size_t i = 0; i < merged.observables.size(); ++i) {
        auto& dst = merged.observables[i].second;
        const auto& src = chunk.observables[i].second;
        dst.insert(dst.end(), src.begin() + 1, src.end());
    }
    merged.final_rho = chunk.final_rho;
    merged.max_trace_dev = std::max(merged.max_trace_dev, chunk.max_trace_dev);
    merged.max_herm_dev = std::max(merged.max_herm_dev, chunk.max_herm_dev);
    merged.min_eigenvalue = std::min(merged.min_eigenvalue, chunk.min_eigenvalue);
    merged.steps_accepted += chunk.steps_accepted;
    merged.steps_rejected += chunk.steps_rejected;
}

// ---------------------------------------------------------------------------
// Individual experiments

ExperimentResult run_two_atom(const ExperimentConfig& cfg,
                              const std::map<std::string, double>& p) {
    UrpTwoAtomParams mp;
    mp.omega2 = p.at("omega2");
    mp.delta = p.at("delta");
    mp.u_rr = p.at("delta");
    const double tf = p.at("t_final");

    auto basis = two_atom_basis();
    const State k11 = basis_ket(basis, "11"), k00 = basis_ket(basis, "00");
    const State k10 = basis_ket(basis, "10"), k01 = basis_ket(basis, "01");
    Operator rho0 = 0.2 * k11 * k11.adjoint() + 0.3 * k00 * k00.adjoint() +
                    0.25 * k10 * k10.adjoint() + 0.25 * k01 * k01.adjoint();
    std::vector<NamedRhoObservable> obs = {pop_obs("p11", k11), pop_obs("p00", k00),
                                           pop_obs("p10", k10), pop_obs("p01", k01)};

    auto ic = make_cfg(cfg, 1e-8, 1e-10, static_cast<std::size_t>(p.at("samples")));
    ExperimentResult res;
    auto full = build_two_atom_full(mp);
    res.trajectories.push_back(
        {"full", evolve_master(full.terms, full.channels, rho0, 0.0, tf, ic, obs)});
    auto eff = build_two_atom_effective(mp);
    res.trajectories.push_back(
        {"effective", evolve_master(eff.terms, eff.channels, rho0, 0.0, tf, ic, obs)});
    res.integrator = ic;
    const auto& ft = res.trajectories[0].traj;
    res.summary["final_p11"] = ft.observable("p11").back();
    res.summary["final_p00"] = ft.observable("p00").back();
    res.summary["deviation"] =
        shared_deviation(ft, res.trajectories[1].traj);
    return res;
}

ExperimentResult run_gate(const ExperimentConfig& cfg,
                          const std::map<std::string, double>& p, bool dissipative) {
    GateParams gp;
    gp.omega2 = p.at("omega2");
    gp.delta = p.at("delta");
    gp.u_rr = p.at("delta");
    if (dissipative) gp.gamma = p.at("gamma");
    double tf = p.at("t_final");
    if (tf <= 0.0) tf = kPi / gp.omega2;

    auto [psi0, psis] = gate_states();
    auto ic = make_cfg(cfg, 1e-8, 1e-10, static_cast<std::size_t>(p.at("samples")));
    ExperimentResult res;
    res.integrator = ic;
    if (!dissipative) {
        std::vector<NamedPsiObservable> obs = {
            {"overlap", [t = psis](double, const State& psi) {
                 return overlap_amplitude(psi, t);
             }}};
        auto full = build_gate_full(gp);
        res.trajectories.push_back(
            {"full", evolve_unitary(full.terms, psi0, 0.0, tf, ic, obs)});
        auto eff = build_gate_effective(gp);
        res.trajectories.push_back(
            {"effective", evolve_unitary(eff.terms, psi0, 0.0, tf, ic, obs)});
        const auto& ftr = res.trajectories[0].traj;
        res.summary["final_overlap"] = ftr.observable("overlap").back();
        res.summary["deviation"] = shared_deviation(ftr, res.trajectories[1].traj);
    } else {
        auto full = build_gate_full(gp);
        Operator rho0 = psi0 * psi0.adjoint();
        res.trajectories.push_back(
            {"full", evolve_master(full.terms, full.channels, rho0, 0.0, tf, ic,
                                   {fid_obs("f", psis)})});
        res.summary["final_f"] = res.trajectories[0].traj.observable("f").back();
    }
    return res;
}

/// Integrates in windows of 100 time units until the target fidelity changes
/// by less than 1e-6 per unit over a window, capped at t = 10000.
ExperimentResult run_bell(const ExperimentConfig& cfg,
                          const std::map<std::string, double>& p) {
    BellParams bp;
    bp.omega2 = p.at("omega2");
    bp.omega_mw = p.at("omega_mw");
    bp.delta = p.at("delta");
    bp.u_rr = p.at("delta");
    bp.gamma = p.at("gamma");

    const double window = 100.0, t_cap = 10000.0, f_tol = 1e-6 * window;
    auto bs = bell_states();
    std::vector<NamedRhoObservable> obs = {
        fid_obs("f_phip", bs[0]), fid_obs("f_phim", bs[1]),
        fid_obs("f_psip", bs[2]), fid_obs("f_psim", bs[3])};
    auto basis = two_atom_basis();
    Operator rho0 = Operator::Zero(basis.dim(), basis.dim());
    for (const char* s : {"00", "11", "01", "10"}) {
        const State k = basis_ket(basis, s);
        rho0 += 0.25 * k * k.adjoint();
    }

    auto ic = make_cfg(cfg, 1e-8, 1e-10, static_cast<std::size_t>(p.at("samples")));
    auto run_chunked = [&](const Model& m, std::size_t* out_chunks,
                           std::size_t fixed_chunks) {
        Trajectory merged;
        Operator rho = rho0;
        std::size_t chunks = 0;
        while (true) {
            auto chunk = evolve_master(m.terms, m.channels, rho,
                                       chunks * window, (chunks + 1) * window,
                                       ic, obs);
            rho = chunk.final_rho;
            const auto& f = chunk.observable("f_phip");
            const double df = std::abs(f.back() - f.front());
            append_chunk(merged, chunk);
            ++chunks;
            if (fixed_chunks > 0 ? chunks >= fixed_chunks
                                 : (df < f_tol || chunks * window >= t_cap))
                break;
        }
        if (out_chunks) *out_chunks = chunks;
        return merged;
    };

    ExperimentResult res;
    res.integrator = ic;
    std::size_t chunks = 0;
    auto full = build_bell_full(bp);
    res.trajectories.push_back({"full", run_chunked(full, &chunks, 0)});
    auto eff = build_bell_effective(bp);
    res.trajectories.push_back({"effective", run_chunked(eff, nullptr, chunks)});
    const auto& ftr = res.trajectories[0].traj;
    res.summary["converged_t"] = ftr.times.back();
    res.summary["final_f_phip"] = ftr.observable("f_phip").back();
    res.summary["final_f_phim"] = ftr.observable("f_phim").back();
    res.summary["final_f_psip"] = ftr.observable("f_psip").back();
    res.summary["final_f_psim"] = ftr.observable("f_psim").back();
    res.summary["deviation"] = shared_deviation(ftr, res.trajectories[1].traj);
    return res;
}

ExperimentResult run_threeD(const ExperimentConfig& cfg,
                            const std::map<std::string, double>& p) {
    ThreeDParams tp;
    tp.omega2 = p.at("omega2");
    tp.omega_mw1 = tp.omega_mw2 = p.at("omega_mw");
    tp.delta = p.at("delta");
    tp.u = p.at("delta");
    tp.gamma = p.at("gamma");
    const double tf = p.at("t_final");
    tp.delta_small = p.at("delta_small") > 0.0 ? p.at("delta_small")
                                               : calibrate_threeD_delta(tp, tf);

    auto basis = threeD_basis();
    auto [t1, t2] = threeD_states();
    std::vector<NamedRhoObservable> obs = {
        fid_obs("f_t1", t1), fid_obs("f_t2", t2),
        fid_obs("f_00", basis_ket(basis, "00")), fid_obs("f_11", basis_ket(basis, "11")),
        fid_obs("f_22", basis_ket(basis, "22"))};
    Operator rho0 = Operator::Zero(basis.dim(), basis.dim());
    const double w[] = {0.15, 0.35, 0.3, 0.2};
    const char* s[] = {"10", "21", "01", "12"};
    for (int i = 0; i < 4; ++i) {
        const State k = basis_ket(basis, s[i]);
        rho0 += w[i] * k * k.adjoint();
    }

    auto ic = make_cfg(cfg, 1e-7, 1e-9, static_cast<std::size_t>(p.at("samples")));
    ExperimentResult res;
    res.integrator = ic;
    auto full = build_threeD_full(tp);
    res.trajectories.push_back(
        {"full", evolve_master(full.terms, full.channels, rho0, 0.0, tf, ic, obs)});
    auto eff = build_threeD_effective(tp);
    res.trajectories.push_back(
        {"effective", evolve_master(eff.terms, eff.channels, rho0, 0.0, tf, ic, obs)});
    const auto& ftr = res.trajectories[0].traj;
    res.summary["delta_small"] = tp.delta_small;
    res.summary["final_f_t1"] = ftr.observable("f_t1").back();
    res.summary["final_f_00"] = ftr.observable("f_00").back();
    res.summary["final_f_11"] = ftr.observable("f_11").back();
    res.summary["final_f_22"] = ftr.observable("f_22").back();
    res.summary["deviation"] =
        trajectory_deviation(ftr, res.trajectories[1].traj, "f_t1");
    return res;
}

ExperimentResult run_qec(const ExperimentConfig& cfg,
                         const std::map<std::string, double>& p, bool noisy_variant) {
    QecParams qp;
    qp.omega1 = p.at("omega1");
    qp.omega2 = p.at("omega2");
    qp.delta = cfg.reduced ? 200.0 : p.at("delta");
    qp.u_rr = qp.delta;
    qp.kappa_e = p.at("kappa_e");
    qp.kappa = 4.0 / qp.kappa_e;  // g = 1
    if (noisy_variant) qp.gamma = p.at("gamma");
    const double tf = p.at("t_final");

    auto [err, code] = qec_states();
    Operator rho0 = err * err.adjoint();
    auto ic = make_cfg(cfg, 1e-6, 1e-8, static_cast<std::size_t>(p.at("samples")));
    ic.check_positivity = false;  // 64-dim: eigenvalues each sample are costly

    ExperimentResult res;
    res.integrator = ic;
    auto full = build_qec_full(qp, noisy_variant);
    res.trajectories.push_back(
        {"full", evolve_master(full.terms, full.channels, rho0, 0.0, tf, ic,
                               {fid_obs("f", code)})});
    res.summary["final_f"] = res.trajectories[0].traj.observable("f").back();
    if (!noisy_variant) {
        auto eff = build_qec_effective(qp);
        res.trajectories.push_back(
            {"effective", evolve_master(eff.terms, eff.channels, rho0, 0.0, tf, ic,
                                        {fid_obs("f", code)})});
        res.summary["final_f_effective"] =
            res.trajectories[1].traj.observable("f").back();
        res.summary["deviation"] =
            shared_deviation(res.trajectories[0].traj, res.trajectories[1].traj);
    }
    res.params["delta"] = qp.delta;
    return res;
}

/// Codeword fidelity under continuous bit flips, with the correction either
/// off (bare three-qubit register) or running at g = r Gamma. Time axis is
/// Gamma t in every trajectory.
ExperimentResult run_qec_noise(const ExperimentConfig& cfg,
                               const std::map<std::string, double>& p,
                               bool include_g2000) {
    auto ic = make_cfg(cfg, 1e-6, 1e-8, static_cast<std::size_t>(p.at("samples")));
    ic.check_positivity = false;
    ExperimentResult res;
    res.integrator = ic;

    {  // correction off: three bare qubits, L = sqrt(Gamma) sigma_x each
        LevelScheme qubit{{"0", "1"}};
        ProductBasis basis({qubit, qubit, qubit});
        const State code =
            (basis_ket(basis, "000") + Complex(0, 1) * basis_ket(basis, "111")) / std::sqrt(2.0);
        std::vector<LindbladChannel> flips;
        for (int i = 0; i < 3; ++i) {
            Operator sx = site_operator(basis, i, "0", "1");
            sx += sx.adjoint().eval();
            flips.push_back({sx});  // Gamma = 1
        }
        Operator rho0 = code * code.adjoint();
        res.trajectories.push_back(
            {"off", evolve_master({}, flips, rho0, 0.0, 1.0, ic,
                                  {fid_obs("f", code)})});
        res.summary["final_f_off"] = res.trajectories.back().traj.observable("f").back();
    }

    std::vector<double> ratios = {500.0, 1000.0};
    if (include_g2000 || p.at("include_g2000") > 0.0) ratios.push_back(2000.0);
    for (double r : ratios) {
        QecParams qp;
        qp.omega1 = p.at("omega1");
        qp.omega2 = p.at("omega2");
        qp.delta = cfg.reduced ? 200.0 : p.at("delta");
        qp.u_rr = qp.delta;
        qp.kappa_e = p.at("kappa_e");
        qp.kappa = 4.0 / qp.kappa_e;
        qp.gamma_flip = 1.0 / r;
        auto [err, code] = qec_states();
        Operator rho0 = code * code.adjoint();
        auto m = build_qec_full(qp, true);
        auto traj = evolve_master(m.terms, m.channels, rho0, 0.0, r, ic,
                                  {fid_obs("f", code)});
        for (auto& t : traj.times) t /= r;  // report Gamma t
        const std::string label = "g" + std::to_string(static_cast<int>(r));
        res.summary["final_f_" + label] = traj.observable("f").back();
        res.trajectories.push_back({label, std::move(traj)});
    }
    return res;
}

// ---------------------------------------------------------------------------
// Output files

void write_csv(const fs::path& path, const Trajectory& tr) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << std::setprecision(12);
    os << "t";
    for (const auto& [name, vals] : tr.observables) os << "," << name;
    os << "\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << tr.times[i];
        for (const auto& [name, vals] : tr.observables) os << "," << vals[i];
        os << "\n";
    }
}

void write_meta(const fs::path& dir, const ExperimentResult& res,
                const ExperimentConfig& cfg) {
    json meta;
    meta["experiment"] = res.experiment;
    meta["version"] = kVersion;
    meta["parameters"] = res.params;
    meta["reduced"] = cfg.reduced;
    meta["integrator"] = {
        {"method",
         res.integrator.method == Method::FixedRk4 ? "fixed" : "adaptive"},
        {"rel_tol", res.integrator.rel_tol},
        {"abs_tol", res.integrator.abs_tol},
        {"max_step", res.integrator.max_step},
        {"sample_count", res.integrator.sample_count}};
    meta["summary"] = res.summary;
    json trajs = json::array();
    for (const auto& [label, tr] : res.trajectories) {
        trajs.push_back({{"label", label},
                         {"file", label + ".csv"},
                         {"steps_accepted", tr.steps_accepted},
                         {"steps_rejected", tr.steps_rejected},
                         {"max_trace_dev", tr.max_trace_dev},
                         {"max_herm_dev", tr.max_herm_dev},
                         {"min_eigenvalue", tr.min_eigenvalue},
                         {"max_norm_dev", tr.max_norm_dev}});
    }
    meta["trajectories"] = std::move(trajs);
    std::ofstream os(dir / "meta.json");
    if (!os) throw std::runtime_error("cannot write " + (dir / "meta.json").string());
    os << meta.dump(2) << "\n";
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> reg = {
        {"fig2a",
         "Two-atom pumping populations, Delta = 10, Omega2 = 0.1 (panel values "
         "unpublished)",
         {{"delta", 10}, {"omega2", 0.1}, {"t_final", 100}, {"samples", 400}},
         false, true},
        {"fig2b",
         "Two-atom pumping populations, Delta = 20, Omega2 = 0.1 (panel values "
         "unpublished)",
         {{"delta", 20}, {"omega2", 0.1}, {"t_final", 100}, {"samples", 400}},
         false, true},
        {"fig2c",
         "Two-atom pumping populations, Delta = 50, Omega2 = 0.1 (panel values "
         "unpublished)",
         {{"delta", 50}, {"omega2", 0.1}, {"t_final", 100}, {"samples", 400}},
         false, true},
        {"fig2d",
         "Two-atom pumping populations, Delta = 50, Omega2 = 0.05",
         {{"delta", 50}, {"omega2", 0.05}, {"t_final", 100}, {"samples", 400}},
         false, false},
        {"fig4",
         "Three-atom phase gate, unitary overlap over one gate time pi/Omega2",
         {{"delta", 58}, {"omega2", 0.05}, {"t_final", 0}, {"samples", 400}},
         false, false},
        {"gate-dissipative",
         "Three-atom phase gate with Rydberg decay gamma",
         {{"delta", 58}, {"omega2", 0.05}, {"gamma", 0.001}, {"t_final", 0},
          {"samples", 200}},
         false, false},
        {"fig6",
         "Dissipative Bell stabilization to |phi+>, caption parameters",
         {{"delta", 100}, {"omega2", 0.02}, {"omega_mw", 0.01}, {"gamma", 0.05},
          {"samples", 20}},
         false, false},
        {"fig6-exp",
         "Bell stabilization with the experimental decay gamma = 0.03",
         {{"delta", 100}, {"omega2", 0.02}, {"omega_mw", 0.01}, {"gamma", 0.03},
          {"samples", 20}},
         false, false},
        {"fig8",
         "3D entangled-state stabilization to |T1> with the filtering shift",
         {{"delta", 100}, {"omega2", 0.02}, {"omega_mw", 0.01}, {"gamma", 0.05},
          {"delta_small", 0}, {"t_final", 8000}, {"samples", 400}},
         false, false},
        {"fig10",
         "Single-shot error correction back to the codeword, g units",
         {{"omega1", 3}, {"omega2", 0.05}, {"delta", 800}, {"kappa_e", 0.02},
          {"t_final", 1000}, {"samples", 200}},
         true, false},
        {"fig10-exp",
         "Single-shot correction with Rydberg decay at the experimental rate",
         {{"omega1", 3}, {"omega2", 0.05}, {"delta", 800}, {"kappa_e", 0.02},
          {"gamma", 0.001}, {"t_final", 1000}, {"samples", 200}},
         true, false},
        {"fig11",
         "Codeword fidelity under continuous bit flips, g/Gamma sweep",
         {{"omega1", 3}, {"omega2", 0.05}, {"delta", 800}, {"kappa_e", 0.02},
          {"include_g2000", 0}, {"samples", 100}},
         true, false},
    };
    return reg;
}

const ExperimentInfo& find_experiment(const std::string& name) {
    for (const auto& e : experiment_registry())
        if (e.name == name) return e;
    throw std::invalid_argument("unknown experiment: " + name);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const auto& info = find_experiment(cfg.experiment);
    if (cfg.reduced && !info.long_running)
        throw std::invalid_argument("--reduced only applies to the slow tier");
    auto p = resolve_params(info, cfg.overrides);

    ExperimentResult res;
    const std::string& n = cfg.experiment;
    if (n.rfind("fig2", 0) == 0)
        res = run_two_atom(cfg, p);
    else if (n == "fig4")
        res = run_gate(cfg, p, false);
    else if (n == "gate-dissipative")
        res = run_gate(cfg, p, true);
    else if (n == "fig6" || n == "fig6-exp")
        res = run_bell(cfg, p);
    else if (n == "fig8")
        res = run_threeD(cfg, p);
    else if (n == "fig10")
        res = run_qec(cfg, p, false);
    else if (n == "fig10-exp")
        res = run_qec(cfg, p, true);
    else if (n == "fig11")
        res = run_qec_noise(cfg, p, false);
    else
        throw std::logic_error("unhandled experiment: " + n);

    res.experiment = n;
    for (const auto& [k, v] : p) res.params.emplace(k, v);

    if (!cfg.output_dir.empty()) {
        const fs::path dir = fs::path(cfg.output_dir) / n;
        fs::create_directories(dir);
        for (const auto& [label, tr] : res.trajectories)
            write_csv(dir / (label + ".csv"), tr);
        write_meta(dir, res, cfg);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Acceptance checking

namespace {

struct Csv {
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;  ///< cols[0] is t

    const std::vector<double>& col(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return cols[i];
        throw std::runtime_error("missing CSV column: " + name);
    }
};

Csv read_csv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("missing file: " + path.string());
    Csv csv;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV: " + path.string());
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) csv.names.push_back(cell);
    csv.cols.resize(csv.names.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        for (std::size_t i = 0; i < csv.names.size(); ++i) {
            if (!std::getline(ls, cell, ','))
                throw std::runtime_error("short CSV row in " + path.string());
            csv.cols[i].push_back(std::stod(cell));
        }
    }
    if (csv.cols[0].empty()) throw std::runtime_error("no data in " + path.string());
    return csv;
}

double max_gap(const Csv& a, const Csv& b, const std::string& name) {
    const auto& va = a.col(name);
    const auto& vb = b.col(name);
    if (va.size() != vb.size())
        throw std::runtime_error("trajectory grids differ for " + name);
    double dev = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i)
        dev = std::max(dev, std::abs(va[i] - vb[i]));
    return dev;
}

struct Check {
    std::ostringstream out;
    bool ok = true;

    void expect(const std::string& what, double measured, double expected,
                double tol) {
        const bool pass = std::abs(measured - expected) <= tol;
        ok = ok && pass;
        out << (pass ? "  ok " : "  FAIL ") << what << ": measured " << measured
            << ", expected " << expected << " +- " << tol << "\n";
    }
    void require(const std::string& what, bool pass) {
        ok = ok && pass;
        out << (pass ? "  ok " : "  FAIL ") << what << "\n";
    }
};

using CheckFn = void (*)(const fs::path&, Check&);

void check_gate_unitary(const fs::path& dir, Check& c) {
    auto full = read_csv(dir / "fig4" / "full.csv");
    auto eff = read_csv(dir / "fig4" / "effective.csv");
    c.expect("final overlap (reference 99.94%)", full.col("overlap").back(), 0.9994,
             0.001);
    c.require("full vs effective deviation <= 0.02",
              max_gap(full, eff, "overlap") <= 0.02);
}

void check_gate_dissipative(const fs::path& dir, Check& c) {
    auto full = read_csv(dir / "gate-dissipative" / "full.csv");
    c.expect("final fidelity (reference 99.37%)", full.col("f").back(), 0.9937, 0.002);
}

void check_bell(const fs::path& dir, Check& c) {
    auto full = read_csv(dir / "fig6" / "full.csv");
    c.expect("converged |phi+> fidelity (reference 99.35%)", full.col("f_phip").back(),
             0.9935, 0.003);
    c.require("other Bell fidelities < 0.1",
              full.col("f_phim").back() < 0.1 && full.col("f_psip").back() < 0.1 &&
                  full.col("f_psim").back() < 0.1);
    auto exp = read_csv(dir / "fig6-exp" / "full.csv");
    c.require("experimental variant >= 99.2% (reference 99.48%)",
              exp.col("f_phip").back() >= 0.992);
}

void check_bell_uniqueness(const fs::path&, Check& c) {
    // The effective model is embedded in the full two-atom space; uniqueness
    // holds on its support subspace (the doubly excited levels are untouched
    // spectators).
    auto m = build_bell_effective(BellParams{});
    std::vector<Eigen::Index> idx;
    auto rep = steady_states(liouvillian_on_support(m.terms, m.channels, &idx));
    c.require("effective Liouvillian null dimension == 1 on its support",
              rep.null_dimension == 1);
    if (rep.null_dimension >= 1) {
        const double f =
            population(rep.basis[0], restrict_state(bell_states()[0], idx));
        c.require("steady state fidelity with |phi+> > 1 - 1e-8", f > 1.0 - 1e-8);
    }
}

void check_threeD(const fs::path& dir, Check& c) {
    auto full = read_csv(dir / "fig8" / "full.csv");
    auto eff = read_csv(dir / "fig8" / "effective.csv");
    c.require("|T1> fidelity at t = 8000 >= 98% (reference 98.8%)",
              full.col("f_t1").back() >= 0.98);
    for (const char* n : {"f_00", "f_11", "f_22"})
        c.expect(std::string("bare fidelity ") + n + " (reference 0.572)",
                 full.col(n).back(), 0.572, 0.01);
    c.require("full vs effective deviation <= 0.02",
              max_gap(full, eff, "f_t1") <= 0.02);
}

void check_threeD_filtering(const fs::path& dir, Check& c) {
    ThreeDParams tp;
    tp.delta_small = 0.0;
    auto m0 = build_threeD_effective(tp);
    auto rep0 = steady_states(liouvillian_on_support(m0.terms, m0.channels));
    c.require("null dimension >= 2 at delta = 0", rep0.null_dimension >= 2);

    // Prefer the calibrated shift recorded by fig8; recalibrate otherwise.
    double cal = 0.0;
    const fs::path meta = dir / "fig8" / "meta.json";
    if (fs::exists(meta)) {
        std::ifstream is(meta);
        json j = json::parse(is);
        cal = j["summary"].value("delta_small", 0.0);
    }
    if (cal <= 0.0) cal = calibrate_threeD_delta(tp);
    tp.delta_small = cal;
    auto m1 = build_threeD_effective(tp);
    std::vector<Eigen::Index> idx;
    auto rep1 = steady_states(liouvillian_on_support(m1.terms, m1.channels, &idx));
    c.require("null dimension == 1 at calibrated delta", rep1.null_dimension == 1);
    if (rep1.null_dimension >= 1) {
        const double f =
            population(rep1.basis[0], restrict_state(threeD_states().first, idx));
        c.require("unique steady state is |T1> (fidelity > 1 - 1e-6)",
                  f > 1.0 - 1e-6);
    }
}

void check_qec(const fs::path& dir, Check& c) {
    auto full = read_csv(dir / "fig10" / "full.csv");
    auto eff = read_csv(dir / "fig10" / "effective.csv");
    c.expect("codeword fidelity at gt = 1000 (reference 99.6%)", full.col("f").back(),
             0.996, 0.003);
    c.require("full vs effective deviation <= 0.02",
              max_gap(full, eff, "f") <= 0.02);
    auto exp = read_csv(dir / "fig10-exp" / "full.csv");
    c.require("experimental variant >= 97.0% (reference 97.34%)",
              exp.col("f").back() >= 0.97);
}

void check_property_suite(const fs::path& dir, Check& c);

}  // namespace

std::vector<CriterionReport> check_acceptance(const std::string& results_dir,
                                              bool include_g2000) {
    const fs::path dir(results_dir);
    std::vector<CriterionReport> reports;
    struct Entry {
        int index;
        const char* name;
        CheckFn fn;
    };
    const Entry entries[] = {
        {1, "gate-unitary", &check_gate_unitary},
        {2, "gate-dissipative", &check_gate_dissipative},
        {3, "bell-stabilization", &check_bell},
        {4, "bell-uniqueness", &check_bell_uniqueness},
        {5, "threeD-stabilization", &check_threeD},
        {6, "threeD-filtering", &check_threeD_filtering},
        {7, "aqec-correction", &check_qec},
    };
    for (const auto& e : entries) {
        CriterionReport r;
        r.index = e.index;
        r.name = e.name;
        Check c;
        try {
            e.fn(dir, c);
            r.pass = c.ok;
            r.detail = c.out.str();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("  FAIL ") + ex.what() + "\n";
        }
        reports.push_back(std::move(r));
    }

    {  // criterion 8: continuous-noise fidelities at Gamma t = 1
        CriterionReport r;
        r.index = 8;
        r.name = "aqec-noise";
        Check c;
        try {
            auto csv_off = read_csv(dir / "fig11" / "off.csv");
            c.expect("no-correction fidelity (reference 42.77%)",
                     csv_off.col("f").back(), 0.4277, 0.01);
            c.expect("g = 500 Gamma (reference 68.05%)",
                     read_csv(dir / "fig11" / "g500.csv").col("f").back(), 0.6805,
                     0.02);
            c.expect("g = 1000 Gamma (reference 77.77%)",
                     read_csv(dir / "fig11" / "g1000.csv").col("f").back(), 0.7777,
                     0.02);
            if (include_g2000)
                c.expect("g = 2000 Gamma (reference 84.62%)",
                         read_csv(dir / "fig11" / "g2000.csv").col("f").back(),
                         0.8462, 0.02);
            else
                c.out << "  ok g = 2000 Gamma skipped (opt-in)\n";
            r.pass = c.ok;
            r.detail = c.out.str();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("  FAIL ") + ex.what() + "\n";
        }
        reports.push_back(std::move(r));
    }

    {  // criterion 9: always-on property suite
        CriterionReport r;
        r.index = 9;
        r.name = "properties";
        Check c;
        try {
            check_property_suite(dir, c);
            r.pass = c.ok;
            r.detail = c.out.str();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("  FAIL ") + ex.what() + "\n";
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

namespace {

void check_property_suite(const fs::path& dir, Check& c) {
    // State invariants recorded with every experiment that was run.
    std::size_t metas = 0;
    for (const auto& e : experiment_registry()) {
        const fs::path meta = dir / e.name / "meta.json";
        if (!fs::exists(meta)) continue;
        ++metas;
        std::ifstream is(meta);
        json j = json::parse(is);
        for (const auto& tj : j["trajectories"]) {
            const std::string tag = e.name + "/" + tj["label"].get<std::string>();
            c.require(tag + " trace preserved",
                      tj["max_trace_dev"].get<double>() < 1e-6);
            c.require(tag + " Hermiticity preserved",
                      tj["max_herm_dev"].get<double>() < 1e-8);
            c.require(tag + " positivity (min eigenvalue > -1e-6)",
                      tj["min_eigenvalue"].get<double>() > -1e-6);
        }
    }
    c.require("at least one experiment output present", metas > 0);

    {  // lindblad_rhs against the dense Liouvillian
        auto m = build_bell_effective(BellParams{});
        const Eigen::Index d = m.basis.dim();
        Operator a = Operator::Random(d, d);
        Operator rho = a * a.adjoint();
        rho /= rho.trace();
        const Operator lhs = lindblad_rhs(m.terms, m.channels, rho, 0.0);
        const Operator rhs =
            unvec(liouvillian_matrix(m.terms, m.channels) * vec(rho));
        c.require("lindblad_rhs matches Liouvillian to 1e-12",
                  (lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }

    LevelScheme qubit{{"0", "1"}};
    ProductBasis one({qubit});
    const State k0 = basis_ket(one, "0"), k1 = basis_ket(one, "1");
    IntegratorConfig ic;
    ic.sample_count = 16;

    {  // analytic Rabi oscillation P1 = sin^2(Omega t / ... ) for H = O(sx)
        const double omega = 1.3;
        Operator drive = omega * (k1 * k0.adjoint() + k0 * k1.adjoint());
        auto traj = evolve_unitary({HamiltonianTerm::static_term(drive)}, k0, 0.0,
                                   5.0, ic,
                                   {{"p1", [&](double, const State& s) {
                                         return std::norm(s(1));
                                     }}});
        double err = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double expect = std::pow(std::sin(omega * traj.times[i]), 2);
            err = std::max(err, std::abs(traj.observable("p1")[i] - expect));
        }
        c.require("Rabi oracle within 1e-6", err < 1e-6);
    }

    {  // exponential decay of the excited population
        const double gamma = 0.7;
        Operator rho0 = k1 * k1.adjoint();
        auto traj = evolve_master(
            {}, {{std::sqrt(gamma) * k0 * k1.adjoint()}}, rho0, 0.0, 4.0, ic,
            {pop_obs("p1", k1)});
        double err = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            err = std::max(err, std::abs(traj.observable("p1")[i] -
                                         std::exp(-gamma * traj.times[i])));
        c.require("decay oracle within 1e-6", err < 1e-6);
    }

    {  // populations unchanged by moving to the rotating frame
        UrpTwoAtomParams up;
        auto m = build_two_atom_full(up);
        auto basis = two_atom_basis();
        Operator gen = up.delta * (site_operator(basis, 0, "r", "r") +
                                   site_operator(basis, 1, "r", "r"));
        auto [rterms, rchan] = rotating_frame(m.terms, gen, m.channels);
        const State k11 = basis_ket(basis, "11"), k01 = basis_ket(basis, "01");
        Operator rho0 = 0.5 * k11 * k11.adjoint() + 0.5 * k01 * k01.adjoint();
        IntegratorConfig fc = ic;
        std::vector<NamedRhoObservable> obs = {pop_obs("p11", k11),
                                               pop_obs("p01", k01)};
        auto lab = evolve_master(m.terms, m.channels, rho0, 0.0, 3.0, fc, obs);
        auto rot = evolve_master(rterms, rchan, rho0, 0.0, 3.0, fc, obs);
        c.require("frame invariance of populations within 1e-6",
                  shared_deviation(lab, rot) < 1e-6);
    }

    {  // fixed-step error shrinks by ~2^4 when the step is halved
        const double omega = 1.0, tf = 2.0;
        Operator drive = omega * (k1 * k0.adjoint() + k0 * k1.adjoint());
        auto run = [&](double h) {
            IntegratorConfig fc;
            fc.method = Method::FixedRk4;
            fc.max_step = h;
            fc.sample_count = 1;
            auto tr = evolve_unitary({HamiltonianTerm::static_term(drive)}, k0,
                                     0.0, tf, fc,
                                     {{"p1", [&](double, const State& s) {
                                           return std::norm(s(1));
                                       }}});
            return std::abs(tr.observable("p1").back() -
                            std::pow(std::sin(omega * tf), 2));
        };
        const double e1 = run(0.02), e2 = run(0.01);
        c.require("step halving reduces RK4 error ~16x", e2 < e1 / 8.0);
    }

    {  // dark-state identities for the two stabilization schemes
        auto bell = build_bell_effective(BellParams{});
        const State phip = bell_states()[0];
        double r = hamiltonian_at(bell.terms, 0.0).cwiseAbs().maxCoeff() > 0
                       ? (hamiltonian_at(bell.terms, 0.0) * phip).norm()
                       : 0.0;
        for (const auto& ch : bell.channels) r = std::max(r, (ch.op * phip).norm());
        c.require("Bell dark state annihilated to 1e-12", r < 1e-12);

        // The filtering shift only adds a uniform level shift on |T1|>; the
        // strict annihilation identity is stated at delta = 0.
        ThreeDParams td_params;
        td_params.delta_small = 0.0;
        auto td = build_threeD_effective(td_params);
        const State t1 = threeD_states().first;
        double r2 = (hamiltonian_at(td.terms, 0.0) * t1).norm();
        for (const auto& ch : td.channels) r2 = std::max(r2, (ch.op * t1).norm());
        c.require("3D dark state annihilated to 1e-12", r2 < 1e-12);
    }
}

}  // namespace

}  // namespace urpsim
