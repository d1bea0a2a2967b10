// SPDX-License-Identifier: Apache-2.0
//
// irsim: link-level simulator for IRS-assisted multi-user MISO downlink
// Copyright (C) 2026 The irsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irsim/cli.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace irsim
{

using nlohmann::json;

CsiSelection parse_csi_selection(const std::string &s)
{
    if (s == "perfect")
        return CsiSelection::Perfect;
    if (s == "estimated")
        return CsiSelection::Estimated;
    if (s == "both")
        return CsiSelection::Both;
    throw ConfigError("csi must be one of perfect, estimated, both (got '" + s + "').");
}

std::string to_string(CsiSelection csi)
{
    switch (csi)
    {
    case CsiSelection::Perfect:
        return "perfect";
    case CsiSelection::Estimated:
        return "estimated";
    case CsiSelection::Both:
        return "both";
    }
    return "both";
}

std::vector<CsiMode> csi_modes(CsiSelection csi)
{
    switch (csi)
    {
    case CsiSelection::Perfect:
        return {CsiMode::Perfect};
    case CsiSelection::Estimated:
        return {CsiMode::Estimated};
    case CsiSelection::Both:
        break;
    }
    return {CsiMode::Perfect, CsiMode::Estimated};
}

namespace
{

const std::vector<std::string> kCommands{"sweep-du", "sweep-tauc", "sweep-n", "validate"};

bool multi_user(const std::string &command)
{
    return command == "sweep-tauc" || command == "sweep-n";
}

int default_threads()
{
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void reject_unknown(const json &obj, const std::vector<std::string> &allowed, const std::string &where)
{
    if (!obj.is_object())
        throw ConfigError(where + " must be a JSON object.");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError("unknown key '" + it.key() + "' in " + where + ".");
}

template <typename T>
void read(const json &obj, const char *key, T &dst, const std::string &where)
{
    if (!obj.contains(key))
        return;
    try
    {
        dst = obj.at(key).get<T>();
    }
    catch (const json::exception &)
    {
        throw ConfigError(where + "." + key + " has the wrong type.");
    }
}

void apply_channel_model(const json &j, SystemModel &m)
{
    const std::string where = "channel_model";
    reject_unknown(j, {"rho_bs", "rho_irs", "tau_ref_s", "n_paths"}, where);
    read(j, "rho_bs", m.correlation.rho_bs, where);
    read(j, "rho_irs", m.correlation.rho_irs, where);
    read(j, "tau_ref_s", m.tau_ref_s, where);
    read(j, "n_paths", m.n_paths, where);
}

void apply_optimizer(const json &j, PgaOptions &o)
{
    const std::string where = "optimizer";
    reject_unknown(j,
                   {"tol", "max_outer", "mu_initial", "mu_min", "mu_factor", "mu_every", "step_initial", "backtrack",
                    "max_halvings", "restarts", "direction", "rotation_probes",
                    "precoder_max_iter", "precoder_tol"},
                   where);
    read(j, "tol", o.tol, where);
    read(j, "max_outer", o.max_outer, where);
    read(j, "mu_initial", o.mu_initial, where);
    read(j, "mu_min", o.mu_min, where);
    read(j, "mu_factor", o.mu_factor, where);
    read(j, "mu_every", o.mu_every, where);
    read(j, "step_initial", o.step_initial, where);
    read(j, "backtrack", o.backtrack, where);
    read(j, "max_halvings", o.max_halvings, where);
    read(j, "restarts", o.restarts, where);
    read(j, "rotation_probes", o.rotation_probes, where);
    if (j.contains("direction"))
    {
        std::string d;
        read(j, "direction", d, where);
        if (d == "envelope")
            o.direction = PgaDirection::Envelope;
        else if (d == "softmin")
            o.direction = PgaDirection::SoftMin;
        else
            throw ConfigError(where + ".direction must be \"envelope\" or \"softmin\".");
    }
    read(j, "precoder_max_iter", o.precoder.max_iter, where);
    read(j, "precoder_tol", o.precoder.tol, where);
}

void apply_sweep(const json &j, RunOptions &o)
{
    const std::string where = "sweep";
    reject_unknown(j, {"grid", "systems", "m_values", "baseline_m_bs", "include_doubled_n", "user_region"}, where);
    read(j, "grid", o.grid, where);
    read(j, "m_values", o.m_values, where);
    read(j, "baseline_m_bs", o.baseline_m_bs, where);
    read(j, "include_doubled_n", o.include_doubled_n, where);
    if (j.contains("systems"))
    {
        const json &arr = j.at("systems");
        if (!arr.is_array())
            throw ConfigError("sweep.systems must be an array.");
        o.systems.clear();
        for (const json &s : arr)
        {
            reject_unknown(s, {"m_bs", "n_irs"}, "sweep.systems[]");
            IrsSystem sys;
            read(s, "m_bs", sys.m_bs, "sweep.systems[]");
            read(s, "n_irs", sys.n_irs, "sweep.systems[]");
            o.systems.push_back(sys);
        }
    }
    if (j.contains("user_region"))
    {
        const json &r = j.at("user_region");
        if (r.is_null())
        {
            o.user_region.reset();
            return;
        }
        reject_unknown(r, {"x_min", "x_max", "y_min", "y_max"}, "sweep.user_region");
        for (const char *k : {"x_min", "x_max", "y_min", "y_max"})
            if (!r.contains(k))
                throw ConfigError(std::string("sweep.user_region needs ") + k + ".");
        Region reg{};
        read(r, "x_min", reg.x_min, "sweep.user_region");
        read(r, "x_max", reg.x_max, "sweep.user_region");
        read(r, "y_min", reg.y_min, "sweep.user_region");
        read(r, "y_max", reg.y_max, "sweep.user_region");
        o.user_region = reg;
    }
}

void apply_run(const json &j, RunOptions &o)
{
    const std::string where = "run";
    reject_unknown(j, {"seed", "trials", "threads", "csi", "out"}, where);
    read(j, "seed", o.seed, where);
    read(j, "trials", o.trials, where);
    read(j, "threads", o.threads, where);
    read(j, "out", o.out_path, where);
    if (j.contains("csi"))
    {
        std::string csi;
        read(j, "csi", csi, where);
        o.csi = parse_csi_selection(csi);
    }
}

void check_options(const RunOptions &o)
{
    if (o.trials < 1)
        throw ConfigError("trials must be >= 1.");
    if (o.threads < 1)
        throw ConfigError("threads must be >= 1.");
    if (o.out_path.empty())
        throw ConfigError("output path is empty.");
    o.scenario.validate();
    if (o.command == "validate")
        return;
    if (o.grid.empty())
        throw ConfigError("sweep grid is empty.");
    if (o.command == "sweep-tauc" && o.systems.empty() && o.baseline_m_bs < 1)
        throw ConfigError("sweep-tauc needs at least one curve.");
    for (const IrsSystem &s : o.systems)
        if (s.m_bs < 1 || s.n_irs < 1)
            throw ConfigError("sweep.systems entries need m_bs >= 1 and n_irs >= 1.");
    for (int m : o.m_values)
        if (m < 1)
            throw ConfigError("sweep.m_values entries must be >= 1.");
    if (o.user_region && (!(o.user_region->x_min < o.user_region->x_max) ||
                          !(o.user_region->y_min < o.user_region->y_max)))
        throw ConfigError("sweep.user_region is empty.");
}

} // namespace

RunOptions default_run_options(const std::string &command)
{
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        throw ConfigError("unknown command '" + command + "'.");

    RunOptions o;
    o.command = command;
    o.out_path = command + ".csv";
    o.threads = default_threads();
    if (command == "sweep-du")
    {
        o.trials = 500;
        for (int d = 5; d <= 120; d += 5)
            o.grid.push_back(d);
    }
    else if (multi_user(command))
    {
        o.trials = 200;
        o.scenario.k_users = 8;
        o.scenario.irs_pos = {0.0, 100.0};
        o.scenario.user_pos.assign(8, Point2{50.0, 0.0});
        o.user_region = Region{-30.0, 30.0, 70.0, 130.0};
        o.baseline_m_bs = 20;
        if (command == "sweep-tauc")
        {
            o.csi = CsiSelection::Estimated;
            o.grid = {1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 5e-7, 1e-6, 5e-6,
                      1e-5,  5e-5,  1e-4, 5e-4, 1e-3, 5e-3, 6e-3, 1e-2};
            o.systems = {{12, 54}, {15, 23}};
            o.scenario.m_bs = 12;
            o.scenario.n_irs = 54;
        }
        else
        {
            o.grid = {4, 8, 16, 32, 64};
            o.m_values = {12, 15, 20};
            o.scenario.m_bs = 12;
        }
    }
    else
        o.trials = 10000;
    return o;
}

RunOptions resolve_run_options(const std::string &command, const json *config, const CliOverrides &flags)
{
    RunOptions o = default_run_options(command);

    if (config)
    {
        reject_unknown(*config, {"scenario", "channel_model", "optimizer", "sweep", "run"}, "config");
        if (config->contains("scenario"))
        {
            const json &sc = config->at("scenario");
            if (!sc.is_object())
                throw ConfigError("scenario must be a JSON object.");
            json merged = scenario_to_json(o.scenario);
            // Positions follow k_users unless the config lists them.
            if (!sc.contains("user_pos"))
                merged.erase("user_pos");
            merged.update(sc);
            o.scenario = scenario_from_json(merged);
        }
        if (config->contains("channel_model"))
            apply_channel_model(config->at("channel_model"), o.model);
        if (config->contains("optimizer"))
            apply_optimizer(config->at("optimizer"), o.model.pga);
        if (config->contains("sweep"))
            apply_sweep(config->at("sweep"), o);
        if (config->contains("run"))
            apply_run(config->at("run"), o);
    }

    if (flags.config_path)
        o.config_path = *flags.config_path;
    if (flags.out_path)
        o.out_path = *flags.out_path;
    if (flags.seed)
        o.seed = *flags.seed;
    if (flags.trials)
        o.trials = *flags.trials;
    if (flags.threads)
        o.threads = *flags.threads;
    if (flags.csi)
        o.csi = parse_csi_selection(*flags.csi);
    if (flags.trace_path)
        o.trace_path = *flags.trace_path;
    if (flags.gradient_perturbation)
        o.gradient_perturbation = *flags.gradient_perturbation;
    if (flags.mmse_noise)
        o.mmse_noise = *flags.mmse_noise;

    check_options(o);
    return o;
}

json load_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'.");
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

json to_config_json(const RunOptions &o)
{
    json doc;
    doc["scenario"] = scenario_to_json(o.scenario);
    doc["channel_model"] = {{"rho_bs", o.model.correlation.rho_bs},
                            {"rho_irs", o.model.correlation.rho_irs},
                            {"tau_ref_s", o.model.tau_ref_s},
                            {"n_paths", o.model.n_paths}};
    const PgaOptions &p = o.model.pga;
    doc["optimizer"] = {{"tol", p.tol},
                        {"max_outer", p.max_outer},
                        {"mu_initial", p.mu_initial},
                        {"mu_min", p.mu_min},
                        {"mu_factor", p.mu_factor},
                        {"mu_every", p.mu_every},
                        {"step_initial", p.step_initial},
                        {"backtrack", p.backtrack},
                        {"max_halvings", p.max_halvings},
                        {"restarts", p.restarts},
                        {"direction", p.direction == PgaDirection::Envelope ? "envelope" : "softmin"},
                        {"rotation_probes", p.rotation_probes},
                        {"precoder_max_iter", p.precoder.max_iter},
                        {"precoder_tol", p.precoder.tol}};
    json systems = json::array();
    for (const IrsSystem &s : o.systems)
        systems.push_back({{"m_bs", s.m_bs}, {"n_irs", s.n_irs}});
    doc["sweep"] = {{"grid", o.grid},
                    {"systems", systems},
                    {"m_values", o.m_values},
                    {"baseline_m_bs", o.baseline_m_bs},
                    {"include_doubled_n", o.include_doubled_n}};
    if (o.user_region)
        doc["sweep"]["user_region"] = {{"x_min", o.user_region->x_min},
                                       {"x_max", o.user_region->x_max},
                                       {"y_min", o.user_region->y_min},
                                       {"y_max", o.user_region->y_max}};
    else
        doc["sweep"]["user_region"] = nullptr;
    doc["run"] = {{"seed", o.seed},
                  {"trials", o.trials},
                  {"threads", o.threads},
                  {"csi", to_string(o.csi)},
                  {"out", o.out_path}};
    return doc;
}

namespace
{

SweepRequest make_request(const RunOptions &o, SweepKind kind, const ScenarioConfig &base, CsiMode csi,
                          bool with_irs)
{
    SweepRequest req;
    req.base = base;
    req.kind = kind;
    req.grid = o.grid;
    req.trials = o.trials;
    req.csi = csi;
    req.with_irs = with_irs;
    req.seed = o.seed;
    req.threads = o.threads;
    req.model = o.model;
    req.user_region = o.user_region;
    return req;
}

void append_column(Table &t, const std::string &name, const std::vector<TrialResult> &res, double TrialResult::*field)
{
    t.header.push_back(name);
    for (std::size_t i = 0; i < res.size(); ++i)
        t.rows[i].push_back(res[i].*field);
}

Table grid_table(const std::string &first, const std::vector<double> &grid)
{
    Table t;
    t.header.push_back(first);
    for (double g : grid)
        t.rows.push_back({g});
    return t;
}

} // namespace

Table sweep_du_table(const RunOptions &o)
{
    Table t = grid_table("du_m", o.grid);
    const std::vector<CsiMode> modes = csi_modes(o.csi);

    auto add = [&](const std::string &name, const ScenarioConfig &base, CsiMode csi, bool irs) {
        const auto res = run_sweep(make_request(o, SweepKind::UserDistance, base, csi, irs));
        t.header.push_back(name);
        for (std::size_t i = 0; i < res.size(); ++i)
            t.rows[i].push_back(res[i].snr_db[0]);
    };
    for (CsiMode c : modes)
        add("snr_db_irs_" + to_string(c), o.scenario, c, true);
    for (CsiMode c : modes)
        add("snr_db_noirs_" + to_string(c), o.scenario, c, false);
    if (o.include_doubled_n)
    {
        ScenarioConfig doubled = o.scenario;
        doubled.n_irs *= 2;
        for (CsiMode c : modes)
            add("snr_db_irs_n" + std::to_string(doubled.n_irs) + "_" + to_string(c), doubled, c, true);
    }
    return t;
}

Table sweep_tauc_table(const RunOptions &o)
{
    Table t = grid_table("tau_c_s", o.grid);
    for (const IrsSystem &s : o.systems)
    {
        ScenarioConfig base = o.scenario;
        base.m_bs = s.m_bs;
        base.n_irs = s.n_irs;
        for (CsiMode c : csi_modes(o.csi))
            append_column(t,
                          "net_min_rate_irs_m" + std::to_string(s.m_bs) + "_n" + std::to_string(s.n_irs) + "_" +
                              to_string(c),
                          run_sweep(make_request(o, SweepKind::TrainingTime, base, c, true)),
                          &TrialResult::net_min_rate);
    }
    if (o.baseline_m_bs > 0)
    {
        ScenarioConfig base = o.scenario;
        base.m_bs = o.baseline_m_bs;
        for (CsiMode c : csi_modes(o.csi))
            append_column(t, "net_min_rate_noirs_m" + std::to_string(o.baseline_m_bs) + "_" + to_string(c),
                          run_sweep(make_request(o, SweepKind::TrainingTime, base, c, false)),
                          &TrialResult::net_min_rate);
    }
    return t;
}

Table sweep_n_table(const RunOptions &o)
{
    Table t = grid_table("n_irs", o.grid);
    for (int m : o.m_values)
    {
        ScenarioConfig base = o.scenario;
        base.m_bs = m;
        for (CsiMode c : csi_modes(o.csi))
            append_column(t, "min_rate_irs_m" + std::to_string(m) + "_" + to_string(c),
                          run_sweep(make_request(o, SweepKind::IrsElements, base, c, true)), &TrialResult::min_rate);
    }
    if (o.baseline_m_bs > 0)
    {
        ScenarioConfig base = o.scenario;
        base.m_bs = o.baseline_m_bs;
        for (CsiMode c : csi_modes(o.csi))
            append_column(t, "min_rate_noirs_m" + std::to_string(o.baseline_m_bs) + "_" + to_string(c),
                          run_sweep(make_request(o, SweepKind::IrsElements, base, c, false)),
                          &TrialResult::min_rate);
    }
    return t;
}

Table sweep_n_trace_table(const RunOptions &o)
{
    Table t;
    t.header = {"n_irs", "iteration", "min_rate"};
    if (o.m_values.empty())
        return t;
    ScenarioConfig base = o.scenario;
    base.m_bs = o.m_values.front();
    const SweepRequest req = make_request(o, SweepKind::IrsElements, base, csi_modes(o.csi).front(), true);
    for (double n : o.grid)
    {
        const std::vector<double> trace = optimizer_trace(req, n, 0);
        for (std::size_t i = 0; i < trace.size(); ++i)
            t.rows.push_back({n, static_cast<double>(i), trace[i]});
    }
    return t;
}

std::string format_number(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 10);
    return std::string(buf, r.ptr);
}

std::string to_csv(const Table &table)
{
    std::string s;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        s += (i ? "," : "") + table.header[i];
    s += '\n';
    for (const auto &row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i)
                s += ',';
            s += format_number(row[i]);
        }
        s += '\n';
    }
    return s;
}

std::vector<SuiteReport> run_validation(const RunOptions &o)
{
    // Each suite gets its own stream so one suite's draws never shift another's.
    auto suite_seed = [&](std::uint64_t id) { return make_stream(o.seed, 0, id)(); };

    std::vector<SuiteReport> out;
    MmseSuiteOptions mmse;
    mmse.trials = o.trials;
    mmse.absolute_noise = o.mmse_noise;
    mmse.seed = suite_seed(1);
    out.push_back(mmse_suite(mmse));

    GradientSuiteOptions grad;
    grad.perturbation = o.gradient_perturbation;
    grad.seed = suite_seed(2);
    out.push_back(gradient_suite(grad));

    PhaseOptimalitySuiteOptions phase;
    phase.seed = suite_seed(3);
    out.push_back(phase_optimality_suite(phase));

    IrsScalingSuiteOptions scaling;
    scaling.seed = suite_seed(4);
    out.push_back(irs_scaling_suite(scaling));

    SnrDoublingSuiteOptions doubling;
    doubling.seed = suite_seed(5);
    doubling.threads = o.threads;
    out.push_back(snr_doubling_suite(doubling));
    return out;
}

std::string validation_csv(const std::vector<SuiteReport> &reports)
{
    std::string s = "suite,metric,value,threshold,relation,pass\n";
    for (const SuiteReport &r : reports)
        for (const Check &c : r.checks)
            s += r.name + ",\"" + c.metric + "\"," + format_number(c.value) + "," + format_number(c.threshold) +
                 ",\"" + c.relation + "\"," + (c.pass ? "1" : "0") + "\n";
    return s;
}

json make_manifest(const RunOptions &o, double wall_clock_s)
{
    const std::time_t now = std::time(nullptr);
    char stamp[32] = "";
    std::tm tm{};
    if (gmtime_r(&now, &tm))
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);

    json m;
    m["command"] = o.command;
    m["config_path"] = o.config_path.empty() ? json(nullptr) : json(o.config_path);
    m["seed"] = o.seed;
    m["trials"] = o.trials;
    m["threads"] = o.threads;
    m["csi"] = to_string(o.csi);
    m["output_path"] = o.out_path;
    m["wall_clock_s"] = wall_clock_s;
    m["finished_utc"] = stamp;
    m["version"] = kVersion;
    m["resolved_config"] = to_config_json(o);
    m["notes"] = {
        "Absolute SNR and rate values depend on an assumed geometry and an exponential correlation model "
        "(rho_bs, rho_irs); only trends are meaningful.",
        "Training noise per observation is sigma2 * tau_ref_s / (p_c * tau_s) with tau_s = tau_c / (N + 1); "
        "tau_ref_s is a modeling choice, see resolved_config.channel_model.",
        "Results do not depend on the thread count."};
    return m;
}

void write_outputs(const RunOptions &o, const std::string &path, const std::string &contents, double wall_clock_s)
{
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw ConfigError("cannot write '" + path + "'.");
        f << contents;
        if (!f)
            throw ConfigError("write to '" + path + "' failed.");
    }
    RunOptions meta = o;
    meta.out_path = path;
    std::ofstream m(path + ".manifest.json", std::ios::binary);
    if (!m)
        throw ConfigError("cannot write '" + path + ".manifest.json'.");
    m << make_manifest(meta, wall_clock_s).dump(2) << '\n';
}

int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"irsim: IRS-assisted multi-user MISO link simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    struct Flags
    {
        std::string config, out, csi, trace;
        std::uint64_t seed = 0;
        int trials = 0, threads = 0;
        double fault = 0.0, mmse_noise = 0.0;
        CLI::Option *o_config, *o_out, *o_seed, *o_trials, *o_threads, *o_csi;
        CLI::Option *o_trace = nullptr, *o_fault = nullptr, *o_mmse = nullptr;
    };
    std::vector<std::pair<CLI::App *, Flags>> subs;
    subs.reserve(kCommands.size());

    const std::vector<std::string> help{"single-user received SNR against user distance",
                                        "net minimum rate against training time",
                                        "minimum rate against the number of IRS elements",
                                        "run the invariant suites"};
    for (std::size_t i = 0; i < kCommands.size(); ++i)
    {
        CLI::App *sub = app.add_subcommand(kCommands[i], help[i]);
        subs.emplace_back(sub, Flags{});
        Flags &f = subs.back().second;
        f.o_config = sub->add_option("--config", f.config, "JSON config document");
        f.o_out = sub->add_option("--out", f.out, "output CSV path");
        f.o_seed = sub->add_option("--seed", f.seed, "base seed");
        f.o_trials = sub->add_option("--trials", f.trials, "Monte Carlo trials per grid point");
        f.o_threads = sub->add_option("--threads", f.threads, "worker threads");
        f.o_csi = sub->add_option("--csi", f.csi, "perfect, estimated or both")
                      ->check(CLI::IsMember({"perfect", "estimated", "both"}));
        if (kCommands[i] == "sweep-n")
            f.o_trace = sub->add_option("--trace", f.trace, "write the optimizer trace of trial 0 to this CSV");
        if (kCommands[i] == "validate")
        {
            f.o_fault = sub->add_option("--inject-gradient-fault", f.fault,
                                        "scale the analytic gradient by (1 + x) in the gradient suite");
            f.o_mmse = sub->add_option("--mmse-noise", f.mmse_noise,
                                       "absolute noise variance for the estimator suite");
        }
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e, out, err);
    }

    try
    {
        for (auto &[sub, f] : subs)
        {
            if (!sub->parsed())
                continue;
            const std::string command = sub->get_name();
            CliOverrides ov;
            std::optional<json> doc;
            if (f.o_config->count())
            {
                ov.config_path = f.config;
                doc = load_json_file(f.config);
            }
            if (f.o_out->count())
                ov.out_path = f.out;
            if (f.o_seed->count())
                ov.seed = f.seed;
            if (f.o_trials->count())
                ov.trials = f.trials;
            if (f.o_threads->count())
                ov.threads = f.threads;
            if (f.o_csi->count())
                ov.csi = f.csi;
            if (f.o_trace && f.o_trace->count())
                ov.trace_path = f.trace;
            if (f.o_fault && f.o_fault->count())
                ov.gradient_perturbation = f.fault;
            if (f.o_mmse && f.o_mmse->count())
                ov.mmse_noise = f.mmse_noise;

            const RunOptions opts = resolve_run_options(command, doc ? &*doc : nullptr, ov);
            const auto t0 = std::chrono::steady_clock::now();
            auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

            if (command == "validate")
            {
                const std::vector<SuiteReport> reports = run_validation(opts);
                bool ok = true;
                for (const SuiteReport &r : reports)
                {
                    for (const Check &c : r.checks)
                        out << (c.pass ? "PASS " : "FAIL ") << r.name << ": " << c.metric << " = "
                            << format_number(c.value) << " (" << c.relation << " " << format_number(c.threshold)
                            << ")\n";
                    ok = ok && r.passed();
                }
                write_outputs(opts, opts.out_path, validation_csv(reports), elapsed());
                out << (ok ? "all suites passed\n" : "validation failed\n");
                return ok ? 0 : 1;
            }

            Table table;
            if (command == "sweep-du")
                table = sweep_du_table(opts);
            else if (command == "sweep-tauc")
                table = sweep_tauc_table(opts);
            else
                table = sweep_n_table(opts);
            write_outputs(opts, opts.out_path, to_csv(table), elapsed());
            out << "wrote " << table.rows.size() << " rows to " << opts.out_path << '\n';
            if (!opts.trace_path.empty())
            {
                const Table trace = sweep_n_trace_table(opts);
                write_outputs(opts, opts.trace_path, to_csv(trace), elapsed());
                out << "wrote optimizer trace to " << opts.trace_path << '\n';
            }
        }
    }
    catch (const std::exception &e)
    {
        err << "irsim: error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace irsim
