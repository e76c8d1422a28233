/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_SCENARIO_H
#define MCASTSIM_SCENARIO_H

#include "mcastsim/black-hole.h"
#include "mcastsim/metrics.h"
#include "mcastsim/mobility.h"
#include "mcastsim/network.h"
#include "mcastsim/odmrp.h"
#include "mcastsim/radio.h"
#include "mcastsim/trace.h"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcast
{

/// Scenario parsing or validation failure; names the key, value and constraint.
class ScenarioError : public std::runtime_error
{
  public:
    ScenarioError(std::string key, std::string value, const std::string& constraint);

    const std::string& Key() const
    {
        return m_key;
    }

    const std::string& Value() const
    {
        return m_value;
    }

  private:
    std::string m_key;
    std::string m_value;
};

struct ScenarioConfig
{
    uint32_t nodeCount{50};
    MobilityConfig mobility;
    RadioConfig radio;
    ProtocolConfig protocol;
    AttackConfig attack;
    uint32_t senders{1};
    uint32_t receivers{20};
    /// Packets per second per source.
    double dataRate{4.0};
    uint32_t packetSize{512};
    double duration{300.0};
    /// Traffic created before this instant is excluded from metrics.
    double warmup{30.0};
    uint64_t seed{1};

    bool operator==(const ScenarioConfig&) const = default;
};

/// Data generation stops this long before the end so in-flight packets can land.
constexpr double kDrainSeconds = 1.0;

/// Applies one key=value pair. Throws ScenarioError for unknown keys or bad values.
void ApplyScenarioKey(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/**
 * Parses flat key=value text over the defaults. Blank lines and lines
 * starting with '#' are skipped. The result is validated.
 */
ScenarioConfig ParseScenario(std::string_view text);
ScenarioConfig LoadScenarioFile(const std::string& path);

/// Every key in canonical order; ParseScenario(SerializeScenario(c)) == c.
std::string SerializeScenario(const ScenarioConfig& cfg);

void ValidateScenario(const ScenarioConfig& cfg);

/// Node placement and role assignment derived from the seed.
struct ScenarioLayout
{
    std::vector<Position> positions;
    std::vector<NodeId> sources;
    std::vector<NodeId> receivers;
    std::vector<NodeId> attackers;
};

ScenarioLayout BuildLayout(const ScenarioConfig& cfg);
NetworkSetup BuildSetup(const ScenarioConfig& cfg, const ScenarioLayout& layout);
ScenarioEcho EchoOf(const ScenarioConfig& cfg);

RunResult RunScenario(const ScenarioConfig& cfg, TraceSink* trace = nullptr);

/// Shortest round-trip decimal form of a double.
std::string FormatNumber(double v);

} // namespace mcast

#endif // MCASTSIM_SCENARIO_H
