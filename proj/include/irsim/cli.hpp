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

#ifndef IRSIM_CLI_HPP
#define IRSIM_CLI_HPP

#include "irsim/evaluate.hpp"
#include "irsim/validation.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace irsim
{

inline constexpr const char *kVersion = "0.1.0";

enum class CsiSelection
{
    Perfect,
    Estimated,
    Both
};

CsiSelection parse_csi_selection(const std::string &s);
std::string to_string(CsiSelection csi);
std::vector<CsiMode> csi_modes(CsiSelection csi);

struct IrsSystem
{
    int m_bs = 0;
    int n_irs = 0;
};

// Fully resolved run: command defaults, then the config document, then flags.
struct RunOptions
{
    std::string command;
    std::string config_path; // empty when no config was given
    std::string out_path;
    std::uint64_t seed = 1;
    int trials = 1;
    int threads = 1;
    CsiSelection csi = CsiSelection::Both;

    ScenarioConfig scenario;
    SystemModel model;

    std::vector<double> grid;
    std::vector<IrsSystem> systems; // sweep-tauc IRS curves
    std::vector<int> m_values;      // sweep-n IRS curves
    int baseline_m_bs = 20;         // no-IRS curve of the multi-user sweeps
    bool include_doubled_n = true;  // sweep-du extra column at 2N
    std::optional<Region> user_region;
    std::string trace_path; // sweep-n optimizer trace dump, empty for none

    // validate
    double gradient_perturbation = 0.0;
    std::optional<double> mmse_noise;
};

// Values given on the command line; unset fields fall through to the config.
struct CliOverrides
{
    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::optional<std::string> csi;
    std::optional<std::string> trace_path;
    std::optional<double> gradient_perturbation;
    std::optional<double> mmse_noise;
};

RunOptions default_run_options(const std::string &command);

// Unknown keys at any level raise ConfigError.
RunOptions resolve_run_options(const std::string &command, const nlohmann::json *config,
                               const CliOverrides &flags);

nlohmann::json load_json_file(const std::string &path);

struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Table sweep_du_table(const RunOptions &opts);
Table sweep_tauc_table(const RunOptions &opts);
Table sweep_n_table(const RunOptions &opts);

// Optimizer trace rows: n_irs, iteration, min_rate.
Table sweep_n_trace_table(const RunOptions &opts);

// "%.10g", independent of the global locale.
std::string format_number(double x);
std::string to_csv(const Table &table);

std::vector<SuiteReport> run_validation(const RunOptions &opts);
std::string validation_csv(const std::vector<SuiteReport> &reports);

nlohmann::json make_manifest(const RunOptions &opts, double wall_clock_s);

// Config document that reproduces `opts` when loaded again.
nlohmann::json to_config_json(const RunOptions &opts);

// Writes `contents` to `path` and the manifest to `path + ".manifest.json"`.
void write_outputs(const RunOptions &opts, const std::string &path, const std::string &contents,
                   double wall_clock_s);

// Entry point of the irsim executable. Returns the process exit code.
int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err);

} // namespace irsim

#endif
