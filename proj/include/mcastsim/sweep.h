/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_SWEEP_H
#define MCASTSIM_SWEEP_H

#include "mcastsim/metrics.h"
#include "mcastsim/scenario.h"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcast
{

/**
 * Experiment grid: a base scenario, four axes and a replication count.
 * Replication r of every cell runs with seed base.seed + r, so cells that
 * differ only in attacker count share placement, roles and mobility.
 */
struct SweepSpec
{
    ScenarioConfig base;
    std::vector<uint32_t> senders;
    std::vector<uint32_t> receivers;
    std::vector<uint32_t> attackers;
    std::vector<double> maxSpeeds;
    uint32_t replications{1};

    void Validate() const;
};

struct SweepCell
{
    uint32_t senders{0};
    uint32_t receivers{0};
    uint32_t attackers{0};
    double maxSpeed{0.0};
    uint32_t replication{0};
    uint64_t seed{0};

    std::string Describe() const;
};

class SweepError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Same key=value format as a scenario file. The axis keys senders,
 * receivers, attackers and max_speed take comma-separated lists;
 * replications sets the seed count. Every other key sets the base scenario.
 */
SweepSpec ParseSweepSpec(std::string_view text);
SweepSpec LoadSweepSpecFile(const std::string& path);

/// Cells in row order: senders, receivers, attackers, max speed, then replication.
std::vector<SweepCell> ExpandSweep(const SweepSpec& spec);
ScenarioConfig CellScenario(const SweepSpec& spec, const SweepCell& cell);

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every cell on up to `parallelism` threads; results come back in row order.
std::vector<RunResult> RunSweep(const SweepSpec& spec, unsigned parallelism = 1,
                                const SweepProgress& progress = {});

std::string CsvHeader();
std::string CsvRow(std::size_t runId, const RunResult& r);
std::string ToCsv(const std::vector<RunResult>& results);

/// Parses a CSV produced by ToCsv into header-keyed rows.
std::vector<std::map<std::string, std::string>> ParseCsv(std::string_view text);

} // namespace mcast

#endif // MCASTSIM_SWEEP_H
