/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

// Command-line front end: single runs, traced runs and parameter sweeps.

#include "mcastsim/scenario.h"
#include "mcastsim/sweep.h"
#include "mcastsim/trace.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

using namespace mcast;

namespace
{

struct ScenarioOptions
{
    std::string file;
    std::vector<std::string> overrides;
    std::optional<uint64_t> seed;
};

void
AddScenarioOptions(CLI::App* cmd, ScenarioOptions& opts)
{
    cmd->add_option("-s,--scenario", opts.file, "Scenario file (key=value)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", opts.overrides, "Override a scenario key, e.g. --set v_max=10");
    cmd->add_option("--seed", opts.seed, "Master seed");
}

ScenarioConfig
ResolveScenario(const ScenarioOptions& opts)
{
    ScenarioConfig cfg = opts.file.empty() ? ScenarioConfig{} : LoadScenarioFile(opts.file);
    for (const auto& kv : opts.overrides)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
        {
            throw ScenarioError(kv, "", "--set expects key=value");
        }
        ApplyScenarioKey(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opts.seed)
    {
        cfg.seed = *opts.seed;
    }
    ValidateScenario(cfg);
    return cfg;
}

void
WriteOutput(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"ODMRP multicast simulator with black hole attackers"};
    app.require_subcommand(1);

    ScenarioOptions runOpts;
    std::string runOut;
    auto* run = app.add_subcommand("run", "Run one scenario and print its CSV row");
    AddScenarioOptions(run, runOpts);
    run->add_option("-o,--out", runOut, "CSV output path (default stdout)");

    ScenarioOptions traceOpts;
    std::string traceOut;
    std::string waypointOut;
    auto* trace = app.add_subcommand("trace", "Run one scenario with a JSON-lines event trace");
    AddScenarioOptions(trace, traceOpts);
    trace->add_option("-o,--out", traceOut, "Trace output path")->required();
    trace->add_option("--waypoints", waypointOut, "Also dump the waypoint legs as CSV");

    std::string specPath;
    std::string sweepOut;
    unsigned parallel = std::max(1u, std::thread::hardware_concurrency());
    std::optional<uint64_t> sweepSeed;
    bool quiet = false;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write one CSV row per run");
    sweep->add_option("spec", specPath, "Sweep spec file")->required()->check(CLI::ExistingFile);
    sweep->add_option("-o,--out", sweepOut, "CSV output path (default stdout)");
    sweep->add_option("-j,--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sweepSeed, "Base seed (replication r uses seed + r)");
    sweep->add_flag("-q,--quiet", quiet, "No progress on stderr");

    auto* defaults = app.add_subcommand("defaults", "Print the default scenario file");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
        {
            const auto cfg = ResolveScenario(runOpts);
            const auto result = RunScenario(cfg);
            WriteOutput(runOut, CsvHeader() + "\n" + CsvRow(0, result) + "\n");
        }
        else if (*trace)
        {
            const auto cfg = ResolveScenario(traceOpts);
            std::ofstream out(traceOut, std::ios::binary);
            if (!out)
            {
                throw std::runtime_error("cannot write " + traceOut);
            }
            JsonLinesTraceSink sink(out);
            const ScenarioLayout layout = BuildLayout(cfg);
            Network net(BuildSetup(cfg, layout), &sink);
            net.Start();
            net.Sim().Schedule(Seconds(cfg.duration), EventKind::SimEnd, 0);
            net.RunUntil(Seconds(cfg.duration));
            const auto result = net.Finish(EchoOf(cfg));
            if (!waypointOut.empty())
            {
                std::ofstream wp(waypointOut, std::ios::binary);
                net.Mobility().WriteWaypointTrace(wp);
            }
            std::cout << CsvHeader() << "\n" << CsvRow(0, result) << "\n";
        }
        else if (*sweep)
        {
            auto spec = LoadSweepSpecFile(specPath);
            if (sweepSeed)
            {
                spec.base.seed = *sweepSeed;
            }
            SweepProgress progress;
            if (!quiet)
            {
                progress = [](std::size_t done, std::size_t total) {
                    if (done % 50 == 0 || done == total)
                    {
                        std::cerr << "\r" << done << "/" << total << " runs" << std::flush;
                    }
                };
            }
            const auto results = RunSweep(spec, parallel, progress);
            if (!quiet)
            {
                std::cerr << "\n";
            }
            WriteOutput(sweepOut, ToCsv(results));
        }
        else if (*defaults)
        {
            std::cout << SerializeScenario(ScenarioConfig{});
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
