// SPDX-License-Identifier: Apache-2.0
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

// mmw_sim: single trials, parameter sweeps and VI traces for the joint
// channel / impulsive-interference estimator.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmw/report.hpp"

namespace fs = std::filesystem;
using namespace mmw;

namespace
{
    struct CommonOptions
    {
        std::string config_path;
        std::string preset;
        std::optional<std::uint64_t> seed;
        bool on_grid = false;
        std::string methods;
        std::string out_dir = ".";
    };

    void add_common(CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--config", o.config_path, "Configuration file ([system]/[hyper]/[sweep] sections)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--preset", o.preset, "Base scenario: desk or default")
            ->check(CLI::IsMember({"desk", "default", "full"}));
        cmd->add_option("--seed", o.seed, "Master seed (overrides the config file)");
        cmd->add_flag("--on-grid", o.on_grid, "Snap true path angles to the dictionary grids");
        cmd->add_option("--methods", o.methods, "Comma-separated subset of proposed,sie,omp,ls");
        cmd->add_option("--out-dir", o.out_dir, "Directory for output files");
    }

    ExperimentConfig load(const CommonOptions &o)
    {
        ExperimentConfig base;
        if (!o.preset.empty())
            base.system = preset_by_name(o.preset);
        ExperimentConfig cfg = o.config_path.empty() ? parse_config_text("", base) : parse_config(o.config_path, base);
        if (o.seed)
            cfg.system.seed = *o.seed;
        if (o.on_grid)
            cfg.system.on_grid = true;
        if (!o.methods.empty())
            cfg.sweep.methods = parse_method_list(o.methods);
        cfg.sweep.validate();
        return cfg;
    }

    void print_summary(const SweepResult &result)
    {
        std::printf("%-9s %12s %8s %12s %10s %10s %6s\n", "method", "value", "trials", "mean[dB]", "std[dB]",
                    "conv", "fail");
        for (const auto &s : summarize(result))
            std::printf("%-9s %12g %8lld %12.3f %10.3f %10lld %6lld\n", std::string(method_name(s.method)).c_str(),
                        s.value, static_cast<long long>(s.count), s.mean_db, s.std_db,
                        static_cast<long long>(s.converged), static_cast<long long>(s.failures));
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"mmWave channel estimation under impulsive interference"};
    app.require_subcommand(1);

    CommonOptions run_opts, sweep_opts, trace_opts;
    long long run_trial_index = 0, trace_trial_index = 0;
    std::string dump_path;
    bool strict = false, timing = false;

    auto *run_cmd = app.add_subcommand("run", "Run every method on one trial and print the NMSE table");
    add_common(run_cmd, run_opts);
    run_cmd->add_option("--trial", run_trial_index, "Trial index (selects the derived seed)");
    run_cmd->add_option("--dump", dump_path, "Write the sensing problem to this binary file");

    auto *sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep; writes sweep.csv and sweep.svg");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_flag("--strict", strict, "Exit non-zero if any trial failed");
    sweep_cmd->add_flag("--timing", timing, "Record per-row wall-clock time (makes the CSV non-reproducible)");

    auto *trace_cmd = app.add_subcommand("trace", "Single proposed-method run with a per-iteration trace.csv");
    add_common(trace_cmd, trace_opts);
    trace_cmd->add_option("--trial", trace_trial_index, "Trial index (selects the derived seed)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run_cmd)
        {
            const auto cfg = load(run_opts);
            const auto problem = sample_problem(cfg.system, trial_seed(cfg.system.seed, run_trial_index));
            if (!dump_path.empty())
                write_problem_binary(problem, fs::path(run_opts.out_dir) / dump_path);
            std::printf("%-9s %14s %10s %6s %5s\n", "method", "nmse", "nmse[dB]", "iters", "conv");
            bool any_failed = false;
            for (Method m : cfg.sweep.methods)
            {
                const SweepRow r = estimate_and_score(problem, cfg.system, cfg.hyper, m, {true, {}});
                if (r.failed)
                {
                    any_failed = true;
                    std::printf("%-9s failed: %s\n", std::string(method_name(m)).c_str(), r.error.c_str());
                    continue;
                }
                std::printf("%-9s %14.6e %10.3f %6d %5s   (%.1f ms)\n", std::string(method_name(m)).c_str(),
                            r.nmse_linear, r.nmse_db, r.iterations, r.converged ? "yes" : "no", r.wall_ms);
            }
            return any_failed ? 1 : 0;
        }

        if (*sweep_cmd)
        {
            auto cfg = load(sweep_opts);
            cfg.sweep.record_wall_time = cfg.sweep.record_wall_time || timing;
            const fs::path out_dir(sweep_opts.out_dir);
            fs::create_directories(out_dir);
            const SweepResult result = run_sweep(cfg.system, cfg.hyper, cfg.sweep);
            write_csv(result, out_dir / "sweep.csv");
            write_svg_plot(result, out_dir / "sweep.svg");
            print_summary(result);
            std::size_t failed = 0;
            for (const auto &r : result.rows)
                failed += r.failed ? 1 : 0;
            if (failed > 0)
                std::fprintf(stderr, "%zu of %zu rows failed\n", failed, result.rows.size());
            return strict && failed > 0 ? 2 : 0;
        }

        if (*trace_cmd)
        {
            const auto cfg = load(trace_opts);
            const fs::path out_dir(trace_opts.out_dir);
            fs::create_directories(out_dir);
            TraceCsvWriter writer(out_dir / "trace.csv");
            TrialOptions options;
            options.trace = [&](const TraceRow &t) {
                writer(t);
                std::printf("%4d  dh=%.3e  de=%.3e  beta=%.4e  elbo=%.8e\n", t.iteration, t.delta_mu_h,
                            t.delta_mu_e, t.beta_mean, t.elbo);
            };
            const SweepRow r = run_trial(cfg.system, cfg.hyper, Method::proposed,
                                         trial_seed(cfg.system.seed, trace_trial_index), options);
            if (r.failed)
            {
                std::fprintf(stderr, "estimator failed: %s\n", r.error.c_str());
                return 1;
            }
            std::printf("nmse %.6e (%.3f dB), %d iterations, converged=%s\n", r.nmse_linear, r.nmse_db,
                        r.iterations, r.converged ? "yes" : "no");
            return 0;
        }
    }
    catch (const std::exception &err)
    {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
